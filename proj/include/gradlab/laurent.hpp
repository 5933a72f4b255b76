#pragma once

// K[t, t^-1] graded by Z: graded self-injective, but its coarsening along
// Z -> 0 is not self-injective. Sparse arithmetic plus a certificate whose
// every step can be re-checked.

#include "gradlab/errors.hpp"
#include "gradlab/linalg.hpp"

#include <map>
#include <string>
#include <vector>

namespace gradlab {

/// Sparse Laurent polynomial: exponent -> nonzero coefficient.
template <class F>
class Laurent {
 public:
  Laurent() = default;
  static Laurent monomial(const F& c, std::int64_t e) {
    Laurent p;
    if (!is_zero(c)) p.terms_[e] = c;
    return p;
  }
  static Laurent one() { return monomial(F(1), 0); }
  static Laurent t() { return monomial(F(1), 1); }

  const std::map<std::int64_t, F>& terms() const { return terms_; }
  bool is_zero_poly() const { return terms_.empty(); }
  /// Homogeneous for the Z-grading: a single nonzero term.
  bool is_monomial() const { return terms_.size() == 1; }
  /// K[t, t^-1] is a domain and the width max - min of exponents is additive,
  /// so fg = 1 forces both widths to be zero.
  bool is_unit() const { return is_monomial(); }
  std::int64_t low() const { return terms_.begin()->first; }
  std::int64_t high() const { return terms_.rbegin()->first; }

  Laurent inverse() const {
    if (!is_unit()) throw InvalidStructure("not a unit in K[t, t^-1]");
    return monomial(F(1) / terms_.begin()->second, -terms_.begin()->first);
  }

  Laurent operator+(const Laurent& o) const {
    Laurent r = *this;
    for (const auto& [e, c] : o.terms_) r.add(e, c);
    return r;
  }
  Laurent operator-() const {
    Laurent r;
    for (const auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
  }
  Laurent operator-(const Laurent& o) const { return *this + (-o); }
  Laurent operator*(const Laurent& o) const {
    Laurent r;
    for (const auto& [e, c] : terms_)
      for (const auto& [f, d] : o.terms_) r.add(e + f, c * d);
    return r;
  }
  friend bool operator==(const Laurent& a, const Laurent& b) { return a.terms_ == b.terms_; }

 private:
  void add(std::int64_t e, const F& c) {
    F v = terms_.count(e) ? terms_[e] + c : c;
    if (is_zero(v)) {
      terms_.erase(e);
    } else {
      terms_[e] = v;
    }
  }
  std::map<std::int64_t, F> terms_;
};

/// Matrix of y -> p*y from the window [-w, w] to [-w + low p, w + high p].
template <class F>
Mat<F> multiplication_matrix(const Laurent<F>& p, std::int64_t w) {
  const std::int64_t lo = -w + p.low(), hi = w + p.high();
  Mat<F> m = zeros<F>(hi - lo + 1, 2 * w + 1);
  for (std::int64_t k = -w; k <= w; ++k)
    for (const auto& [e, c] : p.terms()) m(k + e - lo, k + w) += c;
  return m;
}

/// Some y supported in [-w, w] with p*y = 1, or nullopt.
template <class F>
std::optional<Laurent<F>> solve_inverse_in_window(const Laurent<F>& p, std::int64_t w) {
  const std::int64_t lo = -w + p.low(), hi = w + p.high();
  if (lo > 0 || hi < 0) return std::nullopt;
  Vec<F> b = zero_vector<F>(hi - lo + 1);
  b(-lo) = F(1);
  auto y = solve<F>(multiplication_matrix(p, w), b);
  if (!y) return std::nullopt;
  Laurent<F> out;
  for (std::int64_t k = -w; k <= w; ++k) out = out + Laurent<F>::monomial((*y)(k + w), k);
  return out;
}

struct CertificateStep {
  std::string id;
  std::string claim;
  bool holds = false;
};

template <class F>
struct LaurentCertificate {
  std::string field;
  /// Homogeneous nonzero samples c t^k with their claimed inverses.
  std::vector<std::pair<Laurent<F>, Laurent<F>>> units;
  /// x = 1 + t.
  Laurent<F> x;
  /// Windows [-w, w] on which x has no inverse, no kernel, and the
  /// extension of x -> 1 has no solution.
  std::vector<std::int64_t> windows;
  std::vector<CertificateStep> steps;
  bool valid() const {
    if (steps.size() != 4) return false;
    for (const auto& s : steps)
      if (!s.holds) return false;
    return true;
  }
};

/// Re-derives every step from the certificate data alone.
template <class F>
std::vector<CertificateStep> verify_laurent_steps(const LaurentCertificate<F>& c) {
  std::vector<CertificateStep> out;
  bool units_ok = !c.units.empty();
  for (const auto& [s, inv] : c.units)
    units_ok = units_ok && s.is_monomial() && inv.is_monomial() && s * inv == Laurent<F>::one();
  out.push_back({"units", "nonzero homogeneous elements are units (monomial test)", units_ok});
  out.push_back({"graded-ideals",
                 "every nonzero graded ideal contains a unit, so graded ideals are {0, R} and Baer holds trivially",
                 units_ok});

  const bool is_x = c.x == Laurent<F>::one() + Laurent<F>::t();
  bool nonunit = is_x && !c.x.is_monomial() && !c.windows.empty();
  bool nzd = nonunit;
  bool no_ext = nonunit;
  for (std::int64_t w : c.windows) {
    if (w < 1) {
      nonunit = nzd = no_ext = false;
      break;
    }
    const Mat<F> m = multiplication_matrix(c.x, w);
    nonunit = nonunit && !solve_inverse_in_window(c.x, w).has_value();
    nzd = nzd && nullspace<F>(m).cols() == 0;
    // u: <x> -> R, x t^k -> t^k; an extension f has f(x) = x f(1) = 1.
    Vec<F> b = zero_vector<F>(m.rows());
    b(w - c.x.low()) = F(1);
    no_ext = no_ext && !solve<F>(m, b).has_value();
  }
  out.push_back({"non-unit", "1 + t is not a unit and is a non-zerodivisor", nonunit && nzd});
  out.push_back({"no-extension", "<1 + t> -> R, 1 + t -> 1 does not extend to R: R is not self-injective ungraded",
                 nzd && no_ext});
  return out;
}

template <class F>
LaurentCertificate<F> laurent_counterexample(std::vector<std::int64_t> windows = {1, 2, 3, 5, 8}) {
  LaurentCertificate<F> c;
  c.field = FieldTraits<F>::name();
  std::vector<F> coeffs;
  if constexpr (FieldTraits<F>::is_finite) {
    for (const auto& v : FieldTraits<F>::elements())
      if (!is_zero(v)) coeffs.push_back(v);
  } else {
    coeffs = {F(1), F(-1), F(2), F(3, 4)};
  }
  for (std::int64_t k = -3; k <= 3; ++k)
    for (const auto& a : coeffs) {
      auto s = Laurent<F>::monomial(a, k);
      c.units.emplace_back(s, s.inverse());
    }
  c.x = Laurent<F>::one() + Laurent<F>::t();
  c.windows = std::move(windows);
  c.steps = verify_laurent_steps(c);
  if (!c.valid()) throw SoundnessFailure("Laurent certificate does not verify");
  return c;
}

}  // namespace gradlab
