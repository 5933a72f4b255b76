#include "gradlab/abgroup.hpp"

#include "gradlab/errors.hpp"

#include <algorithm>
#include <sstream>

namespace gradlab {

std::string to_string(const GroupElement& g) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < g.coords.size(); ++i) os << (i ? "," : "") << g.coords[i];
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------- FgAbGroup

FgAbGroup::FgAbGroup(int rank, std::vector<std::int64_t> invariants)
    : rank_(rank), invariants_(std::move(invariants)) {
  if (rank_ < 0) throw InvalidGroup("negative rank");
  for (std::size_t i = 0; i < invariants_.size(); ++i) {
    if (invariants_[i] < 2) throw InvalidGroup("invariant factors must be >= 2");
    if (i + 1 < invariants_.size() && invariants_[i + 1] % invariants_[i] != 0)
      throw InvalidGroup("invariant factors must form a divisibility chain");
  }
}

FgAbGroup FgAbGroup::cyclic(std::int64_t n) {
  if (n == 0) return free(1);
  if (n == 1) return trivial();
  return {0, {n}};
}

namespace {

struct Presentation {
  FgAbGroup group;
  IntMatrix projection;  // num_coords(group) x n
  IntMatrix section;     // n x num_coords(group)
};

Presentation present(const IntMatrix& relations) {
  const Eigen::Index n = relations.rows();
  SmithForm snf = smith_normal_form(relations);
  std::vector<Eigen::Index> free_rows, torsion_rows;
  std::vector<std::int64_t> invariants;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::int64_t s = i < snf.S.cols() ? snf.S(i, i) : 0;
    if (s == 0)
      free_rows.push_back(i);
    else if (s > 1) {
      torsion_rows.push_back(i);
      invariants.push_back(s);
    }
  }
  Presentation p;
  p.group = FgAbGroup(static_cast<int>(free_rows.size()), invariants);
  std::vector<Eigen::Index> rows = free_rows;
  rows.insert(rows.end(), torsion_rows.begin(), torsion_rows.end());
  p.projection = IntMatrix(static_cast<Eigen::Index>(rows.size()), n);
  p.section = IntMatrix(n, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    p.projection.row(static_cast<Eigen::Index>(k)) = snf.U.row(rows[k]);
    p.section.col(static_cast<Eigen::Index>(k)) = snf.U_inv.col(rows[k]);
  }
  // Reduce torsion rows of the projection so that matrices stay small.
  for (std::size_t k = free_rows.size(); k < rows.size(); ++k) {
    std::int64_t d = invariants[k - free_rows.size()];
    for (Eigen::Index c = 0; c < n; ++c)
      p.projection(static_cast<Eigen::Index>(k), c) = mod_floor(p.projection(static_cast<Eigen::Index>(k), c), d);
  }
  return p;
}

IntVector to_vector(const GroupElement& g) {
  IntVector v(static_cast<Eigen::Index>(g.coords.size()));
  for (std::size_t i = 0; i < g.coords.size(); ++i) v(static_cast<Eigen::Index>(i)) = g.coords[i];
  return v;
}

GroupElement from_vector(const IntVector& v) {
  GroupElement g;
  g.coords.assign(v.data(), v.data() + v.size());
  return g;
}

}  // namespace

FgAbGroup FgAbGroup::presented(const IntMatrix& relations, IntMatrix* projection) {
  Presentation p = present(relations);
  if (projection) *projection = p.projection;
  return p.group;
}

std::optional<std::int64_t> FgAbGroup::order() const {
  if (rank_ > 0) return std::nullopt;
  std::int64_t n = 1;
  for (auto d : invariants_) n = checked_mul(n, d);
  return n;
}

IntMatrix FgAbGroup::relation_matrix() const {
  IntMatrix d = IntMatrix::Zero(num_coords(), static_cast<Eigen::Index>(invariants_.size()));
  for (std::size_t i = 0; i < invariants_.size(); ++i)
    d(rank_ + static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = invariants_[i];
  return d;
}

std::int64_t FgAbGroup::coord_order(int i) const {
  return i < rank_ ? 0 : invariants_[static_cast<std::size_t>(i - rank_)];
}

GroupElement FgAbGroup::element(std::vector<std::int64_t> coords) const {
  if (static_cast<int>(coords.size()) != num_coords())
    throw GroupMismatch("element has " + std::to_string(coords.size()) + " coordinates, group " + to_string() +
                        " needs " + std::to_string(num_coords()));
  return reduce(GroupElement{std::move(coords)});
}

GroupElement FgAbGroup::reduce(GroupElement g) const {
  for (int i = rank_; i < num_coords(); ++i)
    g.coords[static_cast<std::size_t>(i)] = mod_floor(g.coords[static_cast<std::size_t>(i)], coord_order(i));
  return g;
}

GroupElement FgAbGroup::zero() const { return GroupElement{std::vector<std::int64_t>(static_cast<std::size_t>(num_coords()), 0)}; }

GroupElement FgAbGroup::generator(int i) const {
  GroupElement g = zero();
  g.coords.at(static_cast<std::size_t>(i)) = 1;
  return g;
}

GroupElement FgAbGroup::add(const GroupElement& a, const GroupElement& b) const {
  GroupElement r = a;
  for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] = checked_add(r.coords[i], b.coords.at(i));
  return reduce(std::move(r));
}

GroupElement FgAbGroup::neg(const GroupElement& a) const {
  GroupElement r = a;
  for (auto& c : r.coords) c = checked_mul(c, -1);
  return reduce(std::move(r));
}

GroupElement FgAbGroup::sub(const GroupElement& a, const GroupElement& b) const { return add(a, neg(b)); }

GroupElement FgAbGroup::scale(std::int64_t k, const GroupElement& a) const {
  GroupElement r = a;
  for (auto& c : r.coords) c = checked_mul(c, k);
  return reduce(std::move(r));
}

bool FgAbGroup::contains(const GroupElement& g) const {
  if (static_cast<int>(g.coords.size()) != num_coords()) return false;
  return reduce(g) == g;
}

std::vector<GroupElement> FgAbGroup::elements() const {
  if (!is_finite()) throw InfiniteSupport("cannot enumerate the infinite group " + to_string());
  return ball(0);
}

std::vector<GroupElement> FgAbGroup::ball(std::int64_t radius) const {
  std::vector<std::int64_t> lo(static_cast<std::size_t>(num_coords())), hi(lo.size());
  for (int i = 0; i < num_coords(); ++i) {
    if (i < rank_) {
      lo[static_cast<std::size_t>(i)] = -radius;
      hi[static_cast<std::size_t>(i)] = radius;
    } else {
      lo[static_cast<std::size_t>(i)] = 0;
      hi[static_cast<std::size_t>(i)] = coord_order(i) - 1;
    }
  }
  std::vector<GroupElement> out;
  GroupElement cur{lo};
  while (true) {
    out.push_back(cur);
    int i = num_coords() - 1;
    while (i >= 0 && cur.coords[static_cast<std::size_t>(i)] == hi[static_cast<std::size_t>(i)]) {
      cur.coords[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
      --i;
    }
    if (i < 0) break;
    ++cur.coords[static_cast<std::size_t>(i)];
  }
  return out;
}

std::string FgAbGroup::to_string() const {
  if (rank_ == 0 && invariants_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  if (rank_ == 1) {
    os << "Z";
    first = false;
  } else if (rank_ > 1) {
    os << "Z^" << rank_;
    first = false;
  }
  for (auto d : invariants_) {
    os << (first ? "" : " + ") << "Z/" << d;
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------- GroupHom

GroupHom::GroupHom(FgAbGroup domain, FgAbGroup codomain, IntMatrix matrix)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != codomain_.num_coords() || matrix_.cols() != domain_.num_coords())
    throw InvalidHom("matrix is " + std::to_string(matrix_.rows()) + "x" + std::to_string(matrix_.cols()) +
                     ", expected " + std::to_string(codomain_.num_coords()) + "x" +
                     std::to_string(domain_.num_coords()));
  for (int j = domain_.rank(); j < domain_.num_coords(); ++j) {
    const std::int64_t d = domain_.coord_order(j);
    for (int i = 0; i < codomain_.num_coords(); ++i) {
      const std::int64_t e = codomain_.coord_order(i);
      const std::int64_t v = checked_mul(d, matrix_(i, j));
      if ((e == 0 && v != 0) || (e != 0 && v % e != 0))
        throw InvalidHom("torsion generator " + std::to_string(j) + " of order " + std::to_string(d) +
                         " is not mapped to an element killed by " + std::to_string(d));
    }
  }
  // Canonical matrix: torsion rows reduced.
  for (int i = codomain_.rank(); i < codomain_.num_coords(); ++i)
    for (Eigen::Index j = 0; j < matrix_.cols(); ++j) matrix_(i, j) = mod_floor(matrix_(i, j), codomain_.coord_order(i));
}

GroupHom GroupHom::identity(const FgAbGroup& g) {
  return {g, g, IntMatrix::Identity(g.num_coords(), g.num_coords())};
}

GroupHom GroupHom::zero(const FgAbGroup& domain, const FgAbGroup& codomain) {
  return {domain, codomain, IntMatrix::Zero(codomain.num_coords(), domain.num_coords())};
}

GroupElement GroupHom::operator()(const GroupElement& g) const {
  if (!domain_.contains(g)) throw GroupMismatch("element " + to_string(g) + " is not in " + domain_.to_string());
  IntVector x = to_vector(g);
  IntMatrix y = checked_product(matrix_, x);
  return codomain_.reduce(from_vector(y.col(0)));
}

GroupHom GroupHom::after(const GroupHom& other) const {
  if (!(other.codomain_ == domain_)) throw GroupMismatch("composition of incompatible homomorphisms");
  return {other.domain_, codomain_, checked_product(matrix_, other.matrix_)};
}

bool operator==(const GroupHom& a, const GroupHom& b) {
  return a.domain_ == b.domain_ && a.codomain_ == b.codomain_ && a.matrix_ == b.matrix_;
}

// ---------------------------------------------------------------- analysis

namespace {

IntMatrix augmented(const GroupHom& psi) {
  const auto& h = psi.codomain();
  IntMatrix rel = h.relation_matrix();
  IntMatrix a(h.num_coords(), psi.matrix().cols() + rel.cols());
  a << psi.matrix(), rel;
  return a;
}

}  // namespace

EpiAnalysis analyze_epimorphism(const GroupHom& psi) {
  const FgAbGroup& g = psi.domain();
  const Eigen::Index ng = g.num_coords();
  const IntMatrix a = augmented(psi);

  EpiAnalysis out{false, FgAbGroup::presented(a), KernelData{FgAbGroup(), GroupHom::zero(FgAbGroup(), g), 1}};
  out.is_epi = out.cokernel.rank() == 0 && out.cokernel.invariants().empty();

  // Integer kernel of [psi | relations of H], projected to the domain
  // coordinates, is the preimage lattice L of 0; ker psi = L / relations of G.
  SmithForm snf = smith_normal_form(a);
  const Eigen::Index r = snf.rank();
  IntMatrix gens = snf.V.block(0, r, ng, a.cols() - r);

  // Basis of L from the Smith form of the generator matrix.
  IntMatrix basis(ng, 0);
  if (gens.cols() > 0 && ng > 0) {
    SmithForm sg = smith_normal_form(gens);
    const Eigen::Index rl = sg.rank();
    basis = IntMatrix(ng, rl);
    for (Eigen::Index i = 0; i < rl; ++i)
      for (Eigen::Index k = 0; k < ng; ++k) basis(k, i) = checked_mul(sg.U_inv(k, i), sg.S(i, i));

    // Coordinates of the relations of G in that basis.
    IntMatrix rel = g.relation_matrix();
    IntMatrix coeff(rl, rel.cols());
    IntMatrix ux = checked_product(sg.U, rel);
    for (Eigen::Index c = 0; c < rel.cols(); ++c) {
      for (Eigen::Index i = 0; i < rl; ++i) {
        if (ux(i, c) % sg.S(i, i) != 0) throw std::logic_error("relation outside preimage lattice");
        coeff(i, c) = ux(i, c) / sg.S(i, i);
      }
      for (Eigen::Index i = rl; i < ng; ++i)
        if (ux(i, c) != 0) throw std::logic_error("relation outside preimage lattice");
    }
    Presentation kp = present(coeff);
    IntMatrix emb = checked_product(basis, kp.section);
    for (int i = g.rank(); i < g.num_coords(); ++i)
      for (Eigen::Index j = 0; j < emb.cols(); ++j) emb(i, j) = mod_floor(emb(i, j), g.coord_order(i));
    out.kernel = KernelData{kp.group, GroupHom(kp.group, g, emb), kp.group.order()};
  } else {
    out.kernel = KernelData{FgAbGroup(), GroupHom::zero(FgAbGroup(), g), 1};
  }
  return out;
}

std::optional<GroupElement> preimage(const GroupHom& psi, const GroupElement& h) {
  if (!psi.codomain().contains(h)) throw GroupMismatch("element " + to_string(h) + " is not in the codomain");
  const Eigen::Index ng = psi.domain().num_coords();
  const IntMatrix a = augmented(psi);
  SmithForm snf = smith_normal_form(a);
  IntMatrix uh = checked_product(snf.U, to_vector(h));
  IntVector w = IntVector::Zero(a.cols());
  for (Eigen::Index i = 0; i < uh.rows(); ++i) {
    std::int64_t s = (i < a.cols()) ? snf.S(i, i) : 0;
    if (s == 0) {
      if (uh(i, 0) != 0) return std::nullopt;
    } else {
      if (uh(i, 0) % s != 0) return std::nullopt;
      w(i) = uh(i, 0) / s;
    }
  }
  IntMatrix z = checked_product(snf.V, w);
  IntVector x = z.col(0).head(ng);
  return psi.domain().reduce(from_vector(x));
}

std::vector<GroupElement> fiber(const GroupHom& psi, const GroupElement& h) {
  EpiAnalysis an = analyze_epimorphism(psi);
  if (!an.is_epi) throw NotEpimorphism("cokernel is " + an.cokernel.to_string());
  if (!an.kernel.is_finite()) throw InfiniteKernel("fiber of a map with kernel " + an.kernel.kernel.to_string());
  auto g0 = preimage(psi, h);
  if (!g0) throw std::logic_error("epimorphism without preimage");
  std::vector<GroupElement> out;
  for (const auto& k : an.kernel.kernel.elements()) out.push_back(psi.domain().add(*g0, an.kernel.embedding(k)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<GroupElement> kernel_window(const KernelData& k, const FgAbGroup& domain, std::int64_t radius) {
  std::vector<GroupElement> out;
  for (const auto& e : k.kernel.ball(radius)) out.push_back(domain.reduce(k.embedding(e)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

QuotientData quotient(const FgAbGroup& g, const std::vector<GroupElement>& generators) {
  IntMatrix rel = g.relation_matrix();
  IntMatrix all(g.num_coords(), rel.cols() + static_cast<Eigen::Index>(generators.size()));
  all.leftCols(rel.cols()) = rel;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (!g.contains(g.reduce(generators[i])) || static_cast<int>(generators[i].coords.size()) != g.num_coords())
      throw GroupMismatch("subgroup generator " + to_string(generators[i]) + " not in " + g.to_string());
    all.col(rel.cols() + static_cast<Eigen::Index>(i)) = to_vector(generators[i]);
  }
  Presentation p = present(all);
  return {p.group, GroupHom(g, p.group, p.projection)};
}

}  // namespace gradlab
