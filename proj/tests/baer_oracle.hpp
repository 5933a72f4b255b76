#pragma once

// Brute-force injectivity over F2 for Z/2-graded rings of the form K, K[t]/t^2
// and K[Z/2], all with basis {1, x} (x of degree 1) or {1}. Vectors are
// bitmasks, matrices are arrays of row masks. Nothing here uses the library's
// linear algebra, so it can serve as an oracle for the Baer criterion.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace oracle {

enum class RingKind { Field, Dual, GroupAlg };

constexpr int kMaxDim = 4;
using Bits = std::uint32_t;
using Rows = std::array<Bits, kMaxDim>;

inline int parity(Bits x) { return std::popcount(x) & 1; }

/// Module of dimension n: basis 0..a-1 in degree 0, a..n-1 in degree 1;
/// x acts by the matrix `x` (rows).
struct Module {
  int n = 0;
  int a = 0;
  Rows x{};

  int degree(int i) const { return i < a ? 0 : 1; }
  Bits part(int d) const {
    Bits low = (Bits(1) << a) - 1;
    Bits all = (Bits(1) << n) - 1;
    return d == 0 ? low : (all & ~low);
  }
  Bits apply(Bits v) const {
    Bits out = 0;
    for (int i = 0; i < n; ++i)
      if (parity(x[static_cast<std::size_t>(i)] & v)) out |= Bits(1) << i;
    return out;
  }
  friend bool operator<(const Module& p, const Module& q) {
    if (p.n != q.n) return p.n < q.n;
    if (p.a != q.a) return p.a < q.a;
    return p.x < q.x;
  }
};

inline Rows mul(const Rows& p, const Rows& q, int n) {
  Rows out{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (p[static_cast<std::size_t>(i)] >> j & 1) out[static_cast<std::size_t>(i)] ^= q[static_cast<std::size_t>(j)];
  return out;
}

inline Rows eye(int n) {
  Rows out{};
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = Bits(1) << i;
  return out;
}

/// Gauss-Jordan on row masks.
inline std::optional<Rows> inverse(Rows a, int n) {
  Rows inv = eye(n);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (a[static_cast<std::size_t>(r)] >> c & 1) {
        piv = r;
        break;
      }
    if (piv < 0) return std::nullopt;
    std::swap(a[static_cast<std::size_t>(piv)], a[static_cast<std::size_t>(c)]);
    std::swap(inv[static_cast<std::size_t>(piv)], inv[static_cast<std::size_t>(c)]);
    for (int r = 0; r < n; ++r)
      if (r != c && (a[static_cast<std::size_t>(r)] >> c & 1)) {
        a[static_cast<std::size_t>(r)] ^= a[static_cast<std::size_t>(c)];
        inv[static_cast<std::size_t>(r)] ^= inv[static_cast<std::size_t>(c)];
      }
  }
  return inv;
}

/// Invertible matrices preserving the grading (block diagonal a + (n - a)),
/// paired with their inverses.
inline std::vector<std::pair<Rows, Rows>> graded_gl(int n, int a) {
  std::vector<Rows> all;
  const Bits low = (Bits(1) << a) - 1, full = (Bits(1) << n) - 1;
  std::vector<std::vector<Bits>> per_row(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Bits allowed = i < a ? low : (full & ~low);
    for (Bits r = 0; r <= full; ++r)
      if ((r & ~allowed) == 0 && r) per_row[static_cast<std::size_t>(i)].push_back(r);
  }
  Rows cur{};
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      all.push_back(cur);
      return;
    }
    for (Bits r : per_row[static_cast<std::size_t>(i)]) {
      cur[static_cast<std::size_t>(i)] = r;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  std::vector<std::pair<Rows, Rows>> out;
  for (const auto& p : all)
    if (auto q = inverse(p, n)) out.emplace_back(p, *q);
  return out;
}

inline bool satisfies_relation(RingKind kind, const Module& m) {
  if (kind == RingKind::Field) return m.x == Rows{};
  const Rows sq = mul(m.x, m.x, m.n);
  return kind == RingKind::Dual ? sq == Rows{} : sq == eye(m.n);
}

/// Representatives of graded modules of dimension n up to graded isomorphism.
inline std::vector<Module> modules_of_dim(RingKind kind, int n) {
  std::vector<Module> out;
  for (int a = 0; a <= n; ++a) {
    const auto gl = graded_gl(n, a);
    // x has degree 1: row i may only use columns of the other degree.
    std::vector<std::vector<Bits>> per_row(static_cast<std::size_t>(n));
    Module proto{n, a, {}};
    for (int i = 0; i < n; ++i) {
      const Bits allowed = kind == RingKind::Field ? 0 : proto.part(1 - proto.degree(i));
      for (Bits r = 0; r <= allowed; ++r)
        if ((r & ~allowed) == 0) per_row[static_cast<std::size_t>(i)].push_back(r);
    }
    std::set<Rows> seen;
    Rows cur{};
    auto rec = [&](auto&& self, int i) -> void {
      if (i == n) {
        Module m{n, a, cur};
        if (!satisfies_relation(kind, m) || seen.count(cur)) return;
        for (const auto& [p, q] : gl) seen.insert(mul(mul(p, cur, n), q, n));
        out.push_back(m);
        return;
      }
      for (Bits r : per_row[static_cast<std::size_t>(i)]) {
        cur[static_cast<std::size_t>(i)] = r;
        self(self, i + 1);
      }
    };
    rec(rec, 0);
  }
  return out;
}

inline std::vector<Module> modules_up_to(RingKind kind, int max_dim) {
  std::vector<Module> out;
  for (int n = 0; n <= max_dim; ++n)
    for (const auto& m : modules_of_dim(kind, n)) out.push_back(m);
  return out;
}

/// Subspaces of the span of `part`, each as a set of vectors (bit v set iff
/// vector v is in the subspace; needs n <= 4 so the set fits 16 bits).
inline const std::vector<std::uint32_t>& subspaces_in(Bits part) {
  static std::map<Bits, std::vector<std::uint32_t>> cache;
  if (auto it = cache.find(part); it != cache.end()) return it->second;
  std::vector<Bits> vs;
  for (Bits v = 0; v <= part; ++v)
    if ((v & ~part) == 0) vs.push_back(v);
  std::set<std::uint32_t> out;
  for (std::uint32_t subset = 0; subset < (std::uint32_t(1) << vs.size()); ++subset) {
    std::uint32_t set = 1;  // contains 0
    for (std::size_t k = 0; k < vs.size(); ++k)
      if (subset >> k & 1) set |= std::uint32_t(1) << vs[k];
    bool closed = true;
    for (Bits u = 0; u < 16 && closed; ++u)
      for (Bits w = 0; w < 16 && closed; ++w)
        if ((set >> u & 1) && (set >> w & 1) && !(set >> (u ^ w) & 1)) closed = false;
    if (closed) out.insert(set);
  }
  return cache[part] = std::vector<std::uint32_t>(out.begin(), out.end());
}

inline std::vector<Bits> elements(std::uint32_t set) {
  std::vector<Bits> out;
  for (Bits v = 0; v < 16; ++v)
    if (set >> v & 1) out.push_back(v);
  return out;
}

/// Basis (homogeneous) of a graded subspace S0 + S1 of B.
inline std::vector<Bits> homogeneous_basis(std::uint32_t s0, std::uint32_t s1) {
  std::vector<Bits> basis;
  for (std::uint32_t s : {s0, s1}) {
    std::uint32_t span = 1;
    for (Bits v : elements(s)) {
      if (span >> v & 1) continue;
      basis.push_back(v);
      std::uint32_t next = span;
      for (Bits u : elements(span)) next |= std::uint32_t(1) << (u ^ v);
      span = next;
    }
  }
  return basis;
}

/// Graded submodules of B, each given by a homogeneous basis.
inline std::vector<std::vector<Bits>> submodules(const Module& b) {
  std::vector<std::vector<Bits>> out;
  for (auto s0 : subspaces_in(b.part(0)))
    for (auto s1 : subspaces_in(b.part(1))) {
      std::uint32_t set = 0;
      for (Bits u : elements(s0))
        for (Bits w : elements(s1)) set |= std::uint32_t(1) << (u ^ w);
      bool closed = true;
      for (Bits v : elements(set))
        if (!(set >> b.apply(v) & 1)) closed = false;
      if (closed) out.push_back(homogeneous_basis(s0, s1));
    }
  return out;
}

/// Degree-preserving x-linear maps from span(basis) ⊆ B to M, each recorded
/// as the tuple of images of the basis vectors packed into one integer.
inline std::vector<std::uint64_t> homs(const Module& b, const std::vector<Bits>& basis, const Module& m) {
  const std::size_t k = basis.size();
  // Coordinates of every element of span(basis).
  std::map<Bits, std::uint32_t> coord;
  for (std::uint32_t c = 0; c < (std::uint32_t(1) << k); ++c) {
    Bits v = 0;
    for (std::size_t j = 0; j < k; ++j)
      if (c >> j & 1) v ^= basis[j];
    coord[v] = c;
  }
  auto deg_of = [&](Bits v) { return (v & b.part(0)) ? 0 : 1; };
  std::vector<std::vector<Bits>> targets(k);
  for (std::size_t j = 0; j < k; ++j) {
    const Bits part = m.part(deg_of(basis[j]));
    for (Bits t = 0; t <= part; ++t)
      if ((t & ~part) == 0) targets[j].push_back(t);
  }
  std::vector<std::uint64_t> out;
  std::vector<Bits> img(k);
  auto value = [&](Bits v) {
    Bits r = 0;
    const std::uint32_t c = coord.at(v);
    for (std::size_t j = 0; j < k; ++j)
      if (c >> j & 1) r ^= img[j];
    return r;
  };
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == k) {
      for (std::size_t i = 0; i < k; ++i)
        if (value(b.apply(basis[i])) != m.apply(img[i])) return;
      std::uint64_t key = 0;
      for (std::size_t i = 0; i < k; ++i) key |= std::uint64_t(img[i]) << (4 * i);
      out.push_back(key);
      return;
    }
    for (Bits t : targets[j]) {
      img[j] = t;
      self(self, j + 1);
    }
  };
  rec(rec, 0);
  return out;
}

/// M is injective against every graded mono A ↣ B with B in `bs`.
inline bool extends_against(const Module& m, const std::vector<Module>& bs) {
  for (const auto& b : bs) {
    std::vector<Bits> full;
    for (int i = 0; i < b.n; ++i) full.push_back(Bits(1) << i);
    const auto from_b = homs(b, full, m);
    for (const auto& a : submodules(b)) {
      const auto from_a = homs(b, a, m);
      std::set<std::uint64_t> restricted;
      for (std::uint64_t g : from_b) {
        std::uint64_t key = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
          // g(a_i) = sum over set bits of a_i of g(e_j).
          Bits v = 0;
          for (int j = 0; j < b.n; ++j)
            if (a[i] >> j & 1) v ^= static_cast<Bits>(g >> (4 * j) & 0xF);
          key |= std::uint64_t(v) << (4 * i);
        }
        restricted.insert(key);
      }
      if (restricted.size() != from_a.size()) return false;
    }
  }
  return true;
}

}  // namespace oracle
