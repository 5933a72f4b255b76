#pragma once

// Graded rings, graded modules and degree-preserving morphisms, represented by
// homogeneous bases and structure constants over an exact field.
//
// Shift convention: M(g)_d = M_{g+d}. A basis element of degree e in M has
// degree e - g in M(g), so Hom(M, N(g)) consists of the maps raising degrees
// by g, and the generator 1 of R(-g) sits in degree g.

#include "gradlab/abgroup.hpp"
#include "gradlab/errors.hpp"
#include "gradlab/linalg.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace gradlab {

struct BasisElement {
  std::string name;
  GroupElement degree;

  friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

/// Failed axiom instance reported by validate().
struct Violation {
  std::string axiom;
  std::vector<Index> witness;
  std::string message;
};

namespace detail {

inline std::vector<BasisElement> normalize_basis(const FgAbGroup& g, std::vector<BasisElement> basis) {
  for (auto& b : basis) b.degree = g.element(b.degree.coords);
  return basis;
}

inline std::vector<GroupElement> support_of(const std::vector<BasisElement>& basis) {
  std::vector<GroupElement> out;
  for (const auto& b : basis) out.push_back(b.degree);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::string degree_string(const GroupElement& g) { return to_string(g); }

}  // namespace detail

// ===================================================================== ring

/// Commutative G-graded algebra of finite dimension. Immutable handle: copies
/// share the underlying data.
template <class F>
class GradedRing {
 public:
  struct MulEntry {
    Index i;
    Index j;
    Vec<F> value;
  };

  GradedRing() : GradedRing(FgAbGroup(), {}, {}, Vec<F>(0)) {}

  /// left_mul[i] holds e_i * e_j in column j.
  GradedRing(FgAbGroup group, std::vector<BasisElement> basis, std::vector<Mat<F>> left_mul, Vec<F> one) {
    auto d = std::make_shared<Data>();
    d->basis = detail::normalize_basis(group, std::move(basis));
    d->group = std::move(group);
    d->left_mul = std::move(left_mul);
    d->one = std::move(one);
    const Index n = static_cast<Index>(d->basis.size());
    if (static_cast<Index>(d->left_mul.size()) != n || d->one.size() != n)
      throw InvalidStructure("ring structure constants do not match the basis size");
    for (const auto& m : d->left_mul)
      if (m.rows() != n || m.cols() != n) throw InvalidStructure("ring multiplication matrix has wrong shape");
    d_ = std::move(d);
  }

  static GradedRing from_table(FgAbGroup group, std::vector<BasisElement> basis, const std::vector<MulEntry>& mul,
                               Vec<F> one) {
    const Index n = static_cast<Index>(basis.size());
    std::vector<Mat<F>> left(static_cast<std::size_t>(n), zeros<F>(n, n));
    for (const auto& e : mul) {
      if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n || e.value.size() != n)
        throw InvalidStructure("multiplication entry out of range");
      left[static_cast<std::size_t>(e.i)].col(e.j) = e.value;
    }
    return GradedRing(std::move(group), std::move(basis), std::move(left), std::move(one));
  }

  /// The field K concentrated in degree 0 of `group`.
  static GradedRing field_in_degree_zero(const FgAbGroup& group) {
    Mat<F> one_mat = identity<F>(1);
    Vec<F> one = Vec<F>::Constant(1, F(1));
    return GradedRing(group, {{"1", group.zero()}}, {one_mat}, one);
  }

  /// K[t]/(t^n) with deg t = `t_degree`.
  static GradedRing truncated_polynomial(const FgAbGroup& group, const GroupElement& t_degree, int n) {
    std::vector<BasisElement> basis;
    for (int k = 0; k < n; ++k)
      basis.push_back({k == 0 ? "1" : (k == 1 ? "t" : "t^" + std::to_string(k)), group.scale(k, t_degree)});
    std::vector<Mat<F>> left(static_cast<std::size_t>(n), zeros<F>(n, n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; a + b < n; ++b) left[static_cast<std::size_t>(a)](a + b, b) = F(1);
    Vec<F> one = zero_vector<F>(n);
    one(0) = F(1);
    return GradedRing(group, std::move(basis), std::move(left), std::move(one));
  }

  /// Group algebra K[G] of a finite group with its canonical grading.
  static GradedRing group_algebra(const FgAbGroup& group) {
    auto elems = group.elements();
    const Index n = static_cast<Index>(elems.size());
    std::map<GroupElement, Index> pos;
    std::vector<BasisElement> basis;
    for (Index k = 0; k < n; ++k) {
      pos[elems[static_cast<std::size_t>(k)]] = k;
      basis.push_back({"e" + to_string(elems[static_cast<std::size_t>(k)]), elems[static_cast<std::size_t>(k)]});
    }
    std::vector<Mat<F>> left(static_cast<std::size_t>(n), zeros<F>(n, n));
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b)
        left[static_cast<std::size_t>(a)](pos.at(group.add(elems[static_cast<std::size_t>(a)], elems[static_cast<std::size_t>(b)])), b) = F(1);
    Vec<F> one = zero_vector<F>(n);
    one(pos.at(group.zero())) = F(1);
    return GradedRing(group, std::move(basis), std::move(left), std::move(one));
  }

  const FgAbGroup& group() const { return d_->group; }
  const std::vector<BasisElement>& basis() const { return d_->basis; }
  Index dim() const { return static_cast<Index>(d_->basis.size()); }
  const GroupElement& degree(Index i) const { return d_->basis[static_cast<std::size_t>(i)].degree; }
  const Mat<F>& left_multiplication(Index i) const { return d_->left_mul[static_cast<std::size_t>(i)]; }
  Vec<F> product(Index i, Index j) const { return left_multiplication(i).col(j); }
  const Vec<F>& one() const { return d_->one; }

  /// Left multiplication by an arbitrary element.
  Mat<F> multiplication_by(const Vec<F>& a) const {
    Mat<F> m = zeros<F>(dim(), dim());
    for (Index i = 0; i < dim(); ++i)
      if (!is_zero(a(i))) m += a(i) * left_multiplication(i);
    return m;
  }
  Vec<F> multiply(const Vec<F>& a, const Vec<F>& b) const { return multiplication_by(a) * b; }

  std::vector<GroupElement> support() const { return detail::support_of(basis()); }
  std::vector<Index> component(const GroupElement& g) const {
    std::vector<Index> out;
    for (Index i = 0; i < dim(); ++i)
      if (degree(i) == g) out.push_back(i);
    return out;
  }

  bool same_as(const GradedRing& o) const { return d_ == o.d_; }

  friend bool operator==(const GradedRing& a, const GradedRing& b) {
    if (a.d_ == b.d_) return true;
    if (!(a.group() == b.group()) || a.basis() != b.basis() || a.one() != b.one()) return false;
    for (Index i = 0; i < a.dim(); ++i)
      if (!equal<F>(a.left_multiplication(i), b.left_multiplication(i))) return false;
    return true;
  }

 private:
  struct Data {
    FgAbGroup group;
    std::vector<BasisElement> basis;
    std::vector<Mat<F>> left_mul;
    Vec<F> one;
  };
  std::shared_ptr<const Data> d_;
};

// =================================================================== module

/// Finite-dimensional G-graded module over a GradedRing. Immutable handle.
template <class F>
class GradedModule {
 public:
  struct ActionEntry {
    Index i;  // ring basis index
    Index j;  // module basis index
    Vec<F> value;
  };

  GradedModule() : GradedModule(GradedRing<F>(), {}, {}) {}

  /// action[i] is the matrix of the ring basis element i acting on the module.
  GradedModule(GradedRing<F> ring, std::vector<BasisElement> basis, std::vector<Mat<F>> action) {
    auto d = std::make_shared<Data>();
    d->basis = detail::normalize_basis(ring.group(), std::move(basis));
    d->ring = std::move(ring);
    d->action = std::move(action);
    const Index n = static_cast<Index>(d->basis.size());
    if (static_cast<Index>(d->action.size()) != d->ring.dim())
      throw InvalidStructure("module needs one action matrix per ring basis element");
    for (const auto& m : d->action)
      if (m.rows() != n || m.cols() != n) throw InvalidStructure("action matrix has wrong shape");
    d_ = std::move(d);
  }

  static GradedModule from_table(GradedRing<F> ring, std::vector<BasisElement> basis,
                                 const std::vector<ActionEntry>& entries) {
    const Index n = static_cast<Index>(basis.size());
    std::vector<Mat<F>> action(static_cast<std::size_t>(ring.dim()), zeros<F>(n, n));
    for (const auto& e : entries) {
      if (e.i < 0 || e.i >= ring.dim() || e.j < 0 || e.j >= n || e.value.size() != n)
        throw InvalidStructure("action entry out of range");
      action[static_cast<std::size_t>(e.i)].col(e.j) = e.value;
    }
    return GradedModule(std::move(ring), std::move(basis), std::move(action));
  }

  /// R as a module over itself.
  static GradedModule regular(const GradedRing<F>& ring) {
    std::vector<Mat<F>> action;
    for (Index i = 0; i < ring.dim(); ++i) action.push_back(ring.left_multiplication(i));
    return GradedModule(ring, ring.basis(), std::move(action));
  }

  static GradedModule zero(const GradedRing<F>& ring) {
    return GradedModule(ring, {}, std::vector<Mat<F>>(static_cast<std::size_t>(ring.dim()), Mat<F>(0, 0)));
  }

  const GradedRing<F>& ring() const { return d_->ring; }
  const FgAbGroup& group() const { return d_->ring.group(); }
  const std::vector<BasisElement>& basis() const { return d_->basis; }
  Index dim() const { return static_cast<Index>(d_->basis.size()); }
  const GroupElement& degree(Index j) const { return d_->basis[static_cast<std::size_t>(j)].degree; }
  const Mat<F>& action(Index i) const { return d_->action[static_cast<std::size_t>(i)]; }
  const std::vector<Mat<F>>& actions() const { return d_->action; }

  /// Matrix of multiplication by an arbitrary ring element.
  Mat<F> action_of(const Vec<F>& r) const {
    Mat<F> m = zeros<F>(dim(), dim());
    for (Index i = 0; i < ring().dim(); ++i)
      if (!is_zero(r(i))) m += r(i) * action(i);
    return m;
  }

  std::vector<GroupElement> support() const { return detail::support_of(basis()); }
  std::vector<Index> component(const GroupElement& g) const {
    std::vector<Index> out;
    for (Index j = 0; j < dim(); ++j)
      if (degree(j) == g) out.push_back(j);
    return out;
  }
  std::map<GroupElement, Index> component_dims() const {
    std::map<GroupElement, Index> out;
    for (const auto& b : basis()) ++out[b.degree];
    return out;
  }
  bool is_homogeneous(const Vec<F>& v, GroupElement* deg = nullptr) const {
    const GroupElement* found = nullptr;
    for (Index j = 0; j < dim(); ++j) {
      if (is_zero(v(j))) continue;
      if (found && !(*found == degree(j))) return false;
      found = &degree(j);
    }
    if (deg && found) *deg = *found;
    return true;
  }

  friend bool operator==(const GradedModule& a, const GradedModule& b) {
    if (a.d_ == b.d_) return true;
    if (a.basis() != b.basis() || !(a.ring() == b.ring())) return false;
    for (Index i = 0; i < a.ring().dim(); ++i)
      if (!equal<F>(a.action(i), b.action(i))) return false;
    return true;
  }

 private:
  struct Data {
    GradedRing<F> ring;
    std::vector<BasisElement> basis;
    std::vector<Mat<F>> action;
  };
  std::shared_ptr<const Data> d_;
};

// ================================================================= morphism

/// Linear map between modules over the same ring, given by a
/// target.dim() x source.dim() matrix. Construction checks shapes only; use
/// validate() or GradedMorphism::checked() for the graded module axioms.
template <class F>
class GradedMorphism {
 public:
  GradedMorphism(GradedModule<F> source, GradedModule<F> target, Mat<F> matrix)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (!(source_.ring() == target_.ring())) throw RingMismatch("morphism between modules over different rings");
    if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim())
      throw InvalidStructure("morphism matrix has wrong shape");
  }

  static GradedMorphism checked(GradedModule<F> source, GradedModule<F> target, Mat<F> matrix);
  static GradedMorphism identity(const GradedModule<F>& m) { return {m, m, gradlab::identity<F>(m.dim())}; }
  static GradedMorphism zero(const GradedModule<F>& s, const GradedModule<F>& t) {
    return {s, t, zeros<F>(t.dim(), s.dim())};
  }

  const GradedModule<F>& source() const { return source_; }
  const GradedModule<F>& target() const { return target_; }
  const Mat<F>& matrix() const { return matrix_; }

  bool is_zero() const { return is_zero_matrix<F>(matrix_); }

  friend bool operator==(const GradedMorphism& a, const GradedMorphism& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && equal<F>(a.matrix_, b.matrix_);
  }

 private:
  GradedModule<F> source_;
  GradedModule<F> target_;
  Mat<F> matrix_;
};

// =============================================================== validation

template <class F>
std::vector<Violation> validate(const GradedRing<F>& r) {
  std::vector<Violation> out;
  const Index n = r.dim();
  const auto& g = r.group();
  auto name = [&](Index i) { return r.basis()[static_cast<std::size_t>(i)].name; };
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const GroupElement want = g.add(r.degree(i), r.degree(j));
      const Vec<F> p = r.product(i, j);
      for (Index k = 0; k < n; ++k)
        if (!is_zero(p(k)) && !(r.degree(k) == want)) {
          out.push_back({"degree additivity", {i, j},
                         "degree additivity at (" + name(i) + "," + name(j) + "): product has a term " + name(k) +
                             " of degree " + to_string(r.degree(k)) + ", expected " + to_string(want)});
          break;
        }
      if (j > i && !equal<F>(Mat<F>(p), Mat<F>(r.product(j, i))))
        out.push_back({"commutativity", {i, j}, "commutativity fails at (" + name(i) + "," + name(j) + ")"});
    }
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      // (e_i e_j) e_k == e_i (e_j e_k) for all k, i.e. L(e_i e_j) == L_i L_j.
      Mat<F> lhs = r.multiplication_by(r.product(i, j));
      Mat<F> rhs = r.left_multiplication(i) * r.left_multiplication(j);
      if (!equal<F>(lhs, rhs)) {
        for (Index k = 0; k < n; ++k)
          if (!equal<F>(Mat<F>(lhs.col(k)), Mat<F>(rhs.col(k)))) {
            out.push_back({"associativity", {i, j, k},
                           "associativity fails at (" + name(i) + "," + name(j) + "," + name(k) + ")"});
            break;
          }
      }
    }
  for (Index k = 0; k < n; ++k)
    if (!is_zero(r.one()(k)) && !(r.degree(k) == g.zero())) {
      out.push_back({"unit homogeneity", {k}, "unit has a term " + name(k) + " outside degree 0"});
      break;
    }
  Mat<F> lone = r.multiplication_by(r.one());
  for (Index j = 0; j < n; ++j)
    if (!equal<F>(Mat<F>(lone.col(j)), Mat<F>(identity<F>(n).col(j)))) {
      out.push_back({"unit", {j}, "1 * " + name(j) + " != " + name(j)});
      break;
    }
  return out;
}

template <class F>
std::vector<Violation> validate(const GradedModule<F>& m) {
  std::vector<Violation> out = validate(m.ring());
  const auto& r = m.ring();
  const auto& g = m.group();
  const Index n = m.dim();
  auto name = [&](Index j) { return m.basis()[static_cast<std::size_t>(j)].name; };
  auto rname = [&](Index i) { return r.basis()[static_cast<std::size_t>(i)].name; };
  for (Index i = 0; i < r.dim(); ++i)
    for (Index j = 0; j < n; ++j) {
      const GroupElement want = g.add(r.degree(i), m.degree(j));
      for (Index k = 0; k < n; ++k)
        if (!is_zero(m.action(i)(k, j)) && !(m.degree(k) == want)) {
          out.push_back({"degree rule", {i, j},
                         "degree rule at (" + rname(i) + "," + name(j) + "): term " + name(k) + " has degree " +
                             to_string(m.degree(k)) + ", expected " + to_string(want)});
          break;
        }
    }
  if (!equal<F>(m.action_of(r.one()), identity<F>(n))) out.push_back({"unit action", {}, "1 does not act as identity"});
  for (Index i = 0; i < r.dim(); ++i)
    for (Index j = 0; j < r.dim(); ++j)
      if (!equal<F>(Mat<F>(m.action_of(r.product(i, j))), Mat<F>(m.action(i) * m.action(j))))
        out.push_back({"action associativity", {i, j},
                       "(" + rname(i) + rname(j) + ")m != " + rname(i) + "(" + rname(j) + "m)"});
  return out;
}

template <class F>
std::vector<Violation> validate(const GradedMorphism<F>& u) {
  std::vector<Violation> out;
  const auto& s = u.source();
  const auto& t = u.target();
  for (Index b = 0; b < s.dim(); ++b)
    for (Index a = 0; a < t.dim(); ++a)
      if (!is_zero(u.matrix()(a, b)) && !(s.degree(b) == t.degree(a))) {
        out.push_back({"degree preservation", {a, b},
                       "source basis " + s.basis()[static_cast<std::size_t>(b)].name + " of degree " +
                           to_string(s.degree(b)) + " hits target basis " + t.basis()[static_cast<std::size_t>(a)].name +
                           " of degree " + to_string(t.degree(a))});
        break;
      }
  for (Index i = 0; i < s.ring().dim(); ++i)
    if (!equal<F>(Mat<F>(u.matrix() * s.action(i)), Mat<F>(t.action(i) * u.matrix())))
      out.push_back({"linearity", {i}, "morphism does not commute with ring basis element " +
                                           s.ring().basis()[static_cast<std::size_t>(i)].name});
  return out;
}

template <class F>
bool is_valid(const GradedRing<F>& x) {
  return validate(x).empty();
}
template <class F>
bool is_valid(const GradedModule<F>& x) {
  return validate(x).empty();
}
template <class F>
bool is_valid(const GradedMorphism<F>& x) {
  return validate(x).empty();
}

template <class F>
GradedMorphism<F> GradedMorphism<F>::checked(GradedModule<F> source, GradedModule<F> target, Mat<F> matrix) {
  GradedMorphism u(std::move(source), std::move(target), std::move(matrix));
  auto v = validate(u);
  if (!v.empty()) {
    if (v.front().axiom == "degree preservation") throw DegreeMismatch(v.front().message);
    throw InvalidStructure(v.front().message);
  }
  return u;
}

// ==================================================================== shift

template <class F>
GradedModule<F> shift(const GradedModule<F>& m, const GroupElement& g) {
  const auto& grp = m.group();
  if (!grp.contains(g)) throw GroupMismatch("shift " + to_string(g) + " is not in " + grp.to_string());
  std::vector<BasisElement> basis = m.basis();
  for (auto& b : basis) b.degree = grp.sub(b.degree, g);
  return GradedModule<F>(m.ring(), std::move(basis), m.actions());
}

// ================================================================ hom space

/// Basis of Hom(M, N) in GrMod: degree-preserving linear maps commuting with
/// the ring action. `flat` holds the same basis as vectorized matrices.
template <class F>
class HomSpace {
 public:
  HomSpace(GradedModule<F> source, GradedModule<F> target, std::vector<Mat<F>> basis)
      : source_(std::move(source)), target_(std::move(target)), basis_(std::move(basis)) {
    flat_ = Mat<F>(source_.dim() * target_.dim(), static_cast<Index>(basis_.size()));
    for (std::size_t k = 0; k < basis_.size(); ++k) flat_.col(static_cast<Index>(k)) = flatten<F>(basis_[k]);
  }

  const GradedModule<F>& source() const { return source_; }
  const GradedModule<F>& target() const { return target_; }
  Index dim() const { return static_cast<Index>(basis_.size()); }
  const std::vector<Mat<F>>& basis() const { return basis_; }
  const Mat<F>& flat() const { return flat_; }

  GradedMorphism<F> morphism(Index k) const { return {source_, target_, basis_[static_cast<std::size_t>(k)]}; }
  std::vector<GradedMorphism<F>> morphisms() const {
    std::vector<GradedMorphism<F>> out;
    for (Index k = 0; k < dim(); ++k) out.push_back(morphism(k));
    return out;
  }
  /// Coordinates of a matrix in this basis; nullopt if it is not a morphism.
  std::optional<Vec<F>> coordinates(const Mat<F>& m) const { return gradlab::coordinates<F>(flat_, flatten<F>(m)); }
  Mat<F> combine(const Vec<F>& coeffs) const {
    Mat<F> m = zeros<F>(target_.dim(), source_.dim());
    for (Index k = 0; k < dim(); ++k)
      if (!is_zero(coeffs(k))) m += coeffs(k) * basis_[static_cast<std::size_t>(k)];
    return m;
  }

 private:
  GradedModule<F> source_;
  GradedModule<F> target_;
  std::vector<Mat<F>> basis_;
  Mat<F> flat_;
};

/// Solves the linear system of degree and action constraints. The target may
/// be a window truncation (see LazyRefinedModule): only the action on target
/// basis elements in degrees of supp(source) is read.
template <class F>
HomSpace<F> hom_space(const GradedModule<F>& m, const GradedModule<F>& n) {
  if (!(m.ring() == n.ring())) throw RingMismatch("hom_space of modules over different rings");
  // Variables: entries X(a, b) with deg a == deg b.
  std::vector<std::pair<Index, Index>> vars;
  Mat<Index> var_of = Mat<Index>::Constant(n.dim(), m.dim(), -1);
  for (Index b = 0; b < m.dim(); ++b)
    for (Index a = 0; a < n.dim(); ++a)
      if (n.degree(a) == m.degree(b)) {
        var_of(a, b) = static_cast<Index>(vars.size());
        vars.emplace_back(a, b);
      }
  const Index nv = static_cast<Index>(vars.size());
  std::vector<Vec<F>> rows;
  Vec<F> row(nv);
  // X A^M_i - A^N_i X = 0, entry (r, b).
  for (Index i = 0; i < m.ring().dim(); ++i) {
    const Mat<F>& am = m.action(i);
    const Mat<F>& an = n.action(i);
    for (Index b = 0; b < m.dim(); ++b)
      for (Index r = 0; r < n.dim(); ++r) {
        row.setConstant(F(0));
        bool any = false;
        for (Index c = 0; c < m.dim(); ++c) {
          if (is_zero(am(c, b)) || var_of(r, c) < 0) continue;
          row(var_of(r, c)) += am(c, b);
          any = true;
        }
        for (Index a = 0; a < n.dim(); ++a) {
          if (is_zero(an(r, a)) || var_of(a, b) < 0) continue;
          row(var_of(a, b)) -= an(r, a);
          any = true;
        }
        if (any && !is_zero_matrix<F>(row)) rows.push_back(row);
      }
  }
  Mat<F> system(static_cast<Index>(rows.size()), nv);
  for (std::size_t k = 0; k < rows.size(); ++k) system.row(static_cast<Index>(k)) = rows[k].transpose();
  Mat<F> kernel = nullspace<F>(system);
  std::vector<Mat<F>> basis;
  for (Index k = 0; k < kernel.cols(); ++k) {
    Mat<F> x = zeros<F>(n.dim(), m.dim());
    for (Index v = 0; v < nv; ++v) x(vars[static_cast<std::size_t>(v)].first, vars[static_cast<std::size_t>(v)].second) = kernel(v, k);
    basis.push_back(std::move(x));
  }
  return HomSpace<F>(m, n, std::move(basis));
}

}  // namespace gradlab
