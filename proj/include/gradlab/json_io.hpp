#pragma once

// JSON encodings of groups, homomorphisms, rings, modules and intensional
// modules. Encodings are canonical: decoding then encoding reproduces the
// input byte for byte when the input was produced by the encoder.

#include "gradlab/coarsen.hpp"
#include "gradlab/laurent.hpp"

#include <json.hpp>

namespace gradlab::io {

using json = nlohmann::json;

template <class T>
T require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing key \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad value for \"") + key + "\": " + e.what());
  }
}

// ---------------------------------------------------------------- scalars

template <class F>
json scalar_to_json(const F& x) {
  if constexpr (FieldTraits<F>::is_finite) {
    return x.value();
  } else if (x.den() == 1) {
    return x.num();
  } else {
    return x.to_string();
  }
}

template <class F>
F scalar_from_json(const json& j) {
  if (j.is_number_integer()) return F(j.get<long long>());
  if constexpr (!FieldTraits<F>::is_finite) {
    if (j.is_string()) {
      try {
        return Rational::parse(j.get<std::string>());
      } catch (const std::exception& e) {
        throw ParseError(std::string("bad rational: ") + e.what());
      }
    }
  }
  throw ParseError("expected a " + FieldTraits<F>::name() + " scalar, got " + j.dump());
}

template <class F>
json vec_to_json(const Vec<F>& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(scalar_to_json(v(i)));
  return out;
}

template <class F>
Vec<F> vec_from_json(const json& j, std::optional<Index> len = {}) {
  if (!j.is_array()) throw ParseError("expected a vector");
  if (len && static_cast<Index>(j.size()) != *len)
    throw ParseError("vector of length " + std::to_string(j.size()) + ", expected " + std::to_string(*len));
  Vec<F> v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = scalar_from_json<F>(j[i]);
  return v;
}

/// Row-major nested arrays.
template <class F>
json mat_to_json(const Mat<F>& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m(i, c)));
    out.push_back(std::move(row));
  }
  return out;
}

template <class F>
Mat<F> mat_from_json(const json& j, Index rows, Index cols) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows) throw ParseError("matrix has the wrong number of rows");
  Mat<F> m(rows, cols);
  for (Index i = 0; i < rows; ++i) m.row(i) = vec_from_json<F>(j[static_cast<std::size_t>(i)], cols).transpose();
  return m;
}

// ----------------------------------------------------------------- groups

inline json to_json(const FgAbGroup& g) { return {{"rank", g.rank()}, {"invariants", g.invariants()}}; }

inline FgAbGroup group_from_json(const json& j) {
  const int rank = require<int>(j, "rank");
  auto inv = j.contains("invariants") ? require<std::vector<std::int64_t>>(j, "invariants") : std::vector<std::int64_t>{};
  try {
    return FgAbGroup(rank, std::move(inv));
  } catch (const InvalidGroup& e) {
    throw ParseError(std::string("invalid group: ") + e.what());
  }
}

inline json to_json(const GroupElement& g) { return g.coords; }

inline GroupElement element_from_json(const json& j, const FgAbGroup& g) {
  if (!j.is_array()) throw ParseError("group element must be an array of coordinates");
  auto c = j.get<std::vector<std::int64_t>>();
  if (static_cast<int>(c.size()) != g.num_coords())
    throw ParseError("element " + j.dump() + " does not match group " + g.to_string());
  return g.element(std::move(c));
}

inline json int_matrix_to_json(const IntMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    out.push_back(std::move(row));
  }
  return out;
}

inline json to_json(const GroupHom& h) {
  return {{"domain", to_json(h.domain())}, {"codomain", to_json(h.codomain())}, {"matrix", int_matrix_to_json(h.matrix())}};
}

inline GroupHom hom_from_json(const json& j, const FgAbGroup& domain, const FgAbGroup& codomain) {
  const json& m = j.contains("matrix") ? j.at("matrix") : j;
  if (!m.is_array() || static_cast<int>(m.size()) != codomain.num_coords())
    throw ParseError("hom matrix needs one row per codomain coordinate");
  IntMatrix a(codomain.num_coords(), domain.num_coords());
  for (int r = 0; r < codomain.num_coords(); ++r) {
    auto row = m[static_cast<std::size_t>(r)].get<std::vector<std::int64_t>>();
    if (static_cast<int>(row.size()) != domain.num_coords()) throw ParseError("hom matrix row has the wrong length");
    for (int c = 0; c < domain.num_coords(); ++c) a(r, c) = row[static_cast<std::size_t>(c)];
  }
  try {
    return GroupHom(domain, codomain, a);
  } catch (const InvalidHom& e) {
    throw ParseError(std::string("invalid hom: ") + e.what());
  }
}

inline GroupHom hom_from_json(const json& j) {
  return hom_from_json(j, group_from_json(j.at("domain")), group_from_json(j.at("codomain")));
}

// ------------------------------------------------------------ rings, modules

inline json basis_to_json(const std::vector<BasisElement>& b) {
  json out = json::array();
  for (const auto& e : b) out.push_back({{"name", e.name}, {"degree", to_json(e.degree)}});
  return out;
}

inline std::vector<BasisElement> basis_from_json(const json& j, const FgAbGroup& g) {
  if (!j.is_array()) throw ParseError("basis must be an array");
  std::vector<BasisElement> out;
  for (const auto& e : j) out.push_back({require<std::string>(e, "name"), element_from_json(e.at("degree"), g)});
  return out;
}

/// Nonzero products only, ordered by (i, j).
template <class F>
json to_json(const GradedRing<F>& r) {
  json mul = json::array();
  for (Index i = 0; i < r.dim(); ++i)
    for (Index j = 0; j < r.dim(); ++j) {
      Vec<F> v = r.product(i, j);
      if (!is_zero_matrix<F>(v)) mul.push_back({{"i", i}, {"j", j}, {"value", vec_to_json<F>(v)}});
    }
  return {{"field", FieldTraits<F>::name()},
          {"group", to_json(r.group())},
          {"basis", basis_to_json(r.basis())},
          {"mul", std::move(mul)},
          {"one", vec_to_json<F>(r.one())}};
}

template <class F>
void require_field(const json& j) {
  if (j.contains("field") && j.at("field") != FieldTraits<F>::name())
    throw ParseError("field " + j.at("field").dump() + " where " + FieldTraits<F>::name() + " was expected");
}

template <class F>
GradedRing<F> ring_from_json(const json& j, const FgAbGroup& g) {
  require_field<F>(j);
  auto basis = basis_from_json(j.at("basis"), g);
  const Index n = static_cast<Index>(basis.size());
  std::vector<typename GradedRing<F>::MulEntry> mul;
  for (const auto& e : j.value("mul", json::array()))
    mul.push_back({require<Index>(e, "i"), require<Index>(e, "j"), vec_from_json<F>(e.at("value"), n)});
  try {
    return GradedRing<F>::from_table(g, std::move(basis), mul, vec_from_json<F>(j.at("one"), n));
  } catch (const InvalidStructure& e) {
    throw ParseError(std::string("invalid ring: ") + e.what());
  }
}

template <class F>
GradedRing<F> ring_from_json(const json& j) {
  return ring_from_json<F>(j, group_from_json(j.at("group")));
}

template <class F>
json to_json(const GradedModule<F>& m, bool embed_ring = true) {
  json act = json::array();
  for (Index i = 0; i < m.ring().dim(); ++i)
    for (Index j = 0; j < m.dim(); ++j) {
      Vec<F> v = m.action(i).col(j);
      if (!is_zero_matrix<F>(v)) act.push_back({{"i", i}, {"j", j}, {"value", vec_to_json<F>(v)}});
    }
  json out = {{"basis", basis_to_json(m.basis())}, {"action", std::move(act)}};
  if (embed_ring) out["ring"] = to_json(m.ring());
  return out;
}

/// {"basis", "action"} with entries r_i . b_j = value.
template <class F>
GradedModule<F> module_from_json(const json& j, const GradedRing<F>& r) {
  auto basis = basis_from_json(j.at("basis"), r.group());
  const Index n = static_cast<Index>(basis.size());
  std::vector<typename GradedModule<F>::ActionEntry> act;
  for (const auto& e : j.value("action", json::array()))
    act.push_back({require<Index>(e, "i"), require<Index>(e, "j"), vec_from_json<F>(e.at("value"), n)});
  try {
    return GradedModule<F>::from_table(r, std::move(basis), act);
  } catch (const InvalidStructure& e) {
    throw ParseError(std::string("invalid module: ") + e.what());
  }
}

template <class F>
GradedModule<F> module_from_json(const json& j) {
  return module_from_json<F>(j, ring_from_json<F>(j.at("ring")));
}

template <class F>
json to_json(const IntensionalFreeModule<F>& m) {
  json out = {{"ring", to_json(m.ring())}};
  if (!(m.degree_map() == GroupHom::identity(m.ring().group()))) out["degree_map"] = to_json(m.degree_map());
  if (m.is_subgroup_indexed()) {
    json gens = json::array();
    for (const auto& g : m.subgroup().generators()) gens.push_back(to_json(g));
    out["free_over"] = to_json(m.subgroup().ambient());
    out["subgroup"] = std::move(gens);
  } else {
    json degs = json::array();
    for (const auto& d : m.indices()) degs.push_back(to_json(d));
    out["degrees"] = std::move(degs);
  }
  return out;
}

/// {"subgroup": [...]} indexes by a subgroup of the grading group (all of it
/// when omitted); {"degrees": [...]} by a finite list.
template <class F>
IntensionalFreeModule<F> intensional_from_json(const json& j, const GradedRing<F>& r) {
  const FgAbGroup& g = r.group();
  if (j.contains("degrees")) {
    std::vector<GroupElement> d;
    for (const auto& e : j.at("degrees")) d.push_back(element_from_json(e, g));
    return IntensionalFreeModule<F>::finite_degrees(r, std::move(d));
  }
  if (!j.contains("subgroup")) return IntensionalFreeModule<F>::subgroup_indexed(r, Subgroup::whole(g));
  std::vector<GroupElement> gens;
  for (const auto& e : j.at("subgroup")) gens.push_back(element_from_json(e, g));
  return IntensionalFreeModule<F>::subgroup_indexed(r, Subgroup(g, std::move(gens)));
}

// ------------------------------------------------------------------ Laurent

template <class F>
json to_json(const Laurent<F>& p) {
  json out = json::array();
  for (const auto& [e, c] : p.terms()) out.push_back({e, scalar_to_json(c)});
  return out;
}

template <class F>
Laurent<F> laurent_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("Laurent polynomial must be an array of [exponent, coefficient]");
  Laurent<F> p;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2) throw ParseError("bad Laurent term " + t.dump());
    p = p + Laurent<F>::monomial(scalar_from_json<F>(t[1]), t[0].get<std::int64_t>());
  }
  return p;
}

template <class F>
json to_json(const LaurentCertificate<F>& c) {
  json units = json::array();
  for (const auto& [s, inv] : c.units) units.push_back({{"element", to_json(s)}, {"inverse", to_json(inv)}});
  json steps = json::array();
  for (const auto& s : c.steps) steps.push_back({{"id", s.id}, {"claim", s.claim}, {"holds", s.holds}});
  return {{"kind", "laurent"}, {"field", c.field}, {"units", std::move(units)}, {"x", to_json(c.x)},
          {"windows", c.windows}, {"steps", std::move(steps)}};
}

template <class F>
LaurentCertificate<F> laurent_certificate_from_json(const json& j) {
  require_field<F>(j);
  LaurentCertificate<F> c;
  c.field = require<std::string>(j, "field");
  for (const auto& u : j.at("units"))
    c.units.emplace_back(laurent_from_json<F>(u.at("element")), laurent_from_json<F>(u.at("inverse")));
  c.x = laurent_from_json<F>(j.at("x"));
  c.windows = require<std::vector<std::int64_t>>(j, "windows");
  for (const auto& s : j.value("steps", json::array()))
    c.steps.push_back({require<std::string>(s, "id"), require<std::string>(s, "claim"), require<bool>(s, "holds")});
  return c;
}

}  // namespace gradlab::io
