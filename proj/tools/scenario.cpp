#include "scenario.hpp"

#include "gradlab/homfun.hpp"
#include "gradlab/injective.hpp"
#include "gradlab/json_io.hpp"

#include <chrono>
#include <functional>
#include <future>
#include <memory>
#include <set>
#include <sstream>

namespace gradlab::cli {

namespace {

std::string str(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

json dims_json(const std::map<GroupElement, Index>& dims) {
  json out = json::object();
  for (const auto& [d, n] : dims) out[to_string(d)] = n;
  return out;
}

json elements_json(const std::vector<GroupElement>& v) {
  json out = json::array();
  for (const auto& g : v) out.push_back(io::to_json(g));
  return out;
}

/// "0", "Z", "Z^2", "Z/4", "Z+Z/2", "Z/2+Z/4".
FgAbGroup parse_group_name(const std::string& s) {
  int rank = 0;
  std::vector<std::int64_t> inv;
  if (s == "0") return FgAbGroup::trivial();
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, '+')) {
    try {
      if (tok == "Z") {
        ++rank;
      } else if (tok.rfind("Z^", 0) == 0) {
        rank += std::stoi(tok.substr(2));
      } else if (tok.rfind("Z/", 0) == 0) {
        inv.push_back(std::stoll(tok.substr(2)));
      } else {
        throw ParseError("unknown group \"" + s + "\"");
      }
    } catch (const std::logic_error&) {
      throw ParseError("unknown group \"" + s + "\"");
    }
  }
  try {
    return FgAbGroup(rank, std::move(inv));
  } catch (const InvalidGroup& e) {
    throw ParseError("group \"" + s + "\" is not in invariant-factor form: " + e.what());
  }
}

// ============================================================== workspace

template <class F>
class Workspace {
 public:
  Workspace(const json& decl, const Options& opt) : decl_(decl), opt_(opt) {
    if (!decl_.is_object()) throw ParseError("\"declarations\" must be an object");
    static const std::set<std::string> kinds = {"groups", "homs", "rings", "modules", "intensional", "rules"};
    for (const auto& [k, v] : decl_.items()) {
      if (!kinds.count(k)) throw ParseError("unknown declaration section \"" + k + "\"");
      if (!v.is_object()) throw ParseError("declaration section \"" + k + "\" must be an object");
    }
    // Resolve everything up front so that bad declarations fail before any check runs.
    for (const auto& [n, v] : section("groups").items()) group(json(n));
    for (const auto& [n, v] : section("homs").items()) hom(json(n));
    for (const auto& [n, v] : section("rings").items()) ring(json(n));
    for (const auto& [n, v] : section("modules").items()) module(json(n));
    for (const auto& [n, v] : section("intensional").items()) intensional(json(n));
    for (const auto& [n, v] : section("rules").items()) rule(json(n));
  }

  const Options& options() const { return opt_; }

  FgAbGroup group(const json& ref) {
    if (ref.is_object()) return io::group_from_json(ref);
    const std::string name = str(ref);
    if (auto it = groups_.find(name); it != groups_.end()) return it->second;
    const json& s = section("groups");
    FgAbGroup g = s.contains(name) ? group(s.at(name)) : parse_group_name(name);
    groups_.emplace(name, g);
    return g;
  }

  GroupElement element(const json& j, const FgAbGroup& g) { return io::element_from_json(j, g); }

  GroupHom hom(const json& ref) {
    if (ref.is_object()) return parse_hom(ref);
    const std::string name = str(ref);
    if (auto it = homs_.find(name); it != homs_.end()) return it->second;
    const json& d = lookup("homs", name);
    GroupHom h = guard("homs/" + name, [&] { return parse_hom(d); });
    homs_.emplace(name, h);
    return h;
  }

  std::shared_ptr<const CoarseningContext> context(const json& ref) {
    const GroupHom h = hom(ref);
    try {
      return std::make_shared<const CoarseningContext>(h);
    } catch (const NotEpimorphism& e) {
      throw ParseError(std::string("psi is not an epimorphism: ") + e.what());
    }
  }

  GradedRing<F> ring(const json& ref) {
    if (ref.is_object()) return parse_ring(ref);
    const std::string name = str(ref);
    if (auto it = rings_.find(name); it != rings_.end()) return it->second;
    const json& d = lookup("rings", name);
    GradedRing<F> r = guard("rings/" + name, [&] { return parse_ring(d); });
    rings_.emplace(name, r);
    return r;
  }

  /// Whether a reference denotes an explicit module rather than an
  /// intensional one.
  bool has_module(const json& ref) const {
    if (ref.is_object()) return !ref.contains("free_over") && !ref.contains("subgroup") && !ref.contains("degrees");
    return section("modules").contains(str(ref));
  }

  GradedModule<F> module(const json& ref) {
    if (ref.is_object()) return parse_module(ref);
    const std::string name = str(ref);
    if (auto it = modules_.find(name); it != modules_.end()) return it->second;
    const json& d = lookup("modules", name);
    GradedModule<F> m = guard("modules/" + name, [&] { return parse_module(d); });
    modules_.emplace(name, m);
    return m;
  }

  IntensionalFreeModule<F> intensional(const json& ref) {
    if (ref.is_object()) return parse_intensional(ref);
    const std::string name = str(ref);
    if (auto it = intensional_.find(name); it != intensional_.end()) return it->second;
    const json& d = lookup("intensional", name);
    auto m = guard("intensional/" + name, [&] { return parse_intensional(d); });
    intensional_.emplace(name, m);
    return m;
  }

  std::shared_ptr<const UniformRuleMorphism<F>> rule(const json& ref) {
    const std::string name = str(ref);
    if (auto it = rules_.find(name); it != rules_.end()) return it->second;
    const json& d = ref.is_object() ? ref : lookup("rules", name);
    auto u = guard("rules/" + name, [&] { return parse_rule(d); });
    rules_.emplace(name, u);
    return u;
  }

  Vec<F> vector(const json& j, Index n) { return io::vec_from_json<F>(j, n); }

 private:
  const json& section(const char* s) const {
    static const json empty = json::object();
    return decl_.contains(s) ? decl_.at(s) : empty;
  }

  const json& lookup(const char* s, const std::string& name) {
    const json& sec = section(s);
    if (!sec.contains(name)) throw ParseError(std::string("unresolved reference \"") + name + "\" in " + s);
    if (!resolving_.insert(std::string(s) + "/" + name).second) throw ParseError("cyclic declaration \"" + name + "\"");
    return sec.at(name);
  }

  // Converts library validation errors raised while building a declaration
  // into parse errors naming the declaration.
  template <class Fn>
  auto guard(const std::string& name, Fn fn) -> decltype(fn()) {
    try {
      auto v = fn();
      resolving_.erase(name);
      return v;
    } catch (const ParseError&) {
      throw;
    } catch (const json::exception& e) {
      throw ParseError("declaration \"" + name + "\": " + e.what());
    } catch (const Error& e) {
      throw ParseError("declaration \"" + name + "\": " + e.what());
    }
  }

  GroupHom parse_hom(const json& d) {
    try {
      if (d.contains("identity")) return GroupHom::identity(group(d.at("identity")));
      if (d.contains("to_trivial")) return GroupHom::to_trivial(group(d.at("to_trivial")));
      if (d.contains("quotient_of")) {
        const FgAbGroup g = group(d.at("quotient_of"));
        std::vector<GroupElement> gens;
        for (const auto& e : d.value("by", json::array())) gens.push_back(element(e, g));
        return quotient(g, gens).projection;
      }
      return io::hom_from_json(d, group(d.at("domain")), group(d.at("codomain")));
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad hom: ") + e.what());
    }
  }

  GradedRing<F> parse_ring(const json& d) {
    io::require_field<F>(d);
    if (d.contains("coarsen_of")) {
      auto ctx = context(d.at("psi"));
      return coarsen(ring(d.at("coarsen_of")), *ctx);
    }
    const FgAbGroup g = group(d.at("group"));
    if (!d.contains("builder")) return io::ring_from_json<F>(d, g);
    const std::string b = d.at("builder").get<std::string>();
    if (b == "field") return GradedRing<F>::field_in_degree_zero(g);
    if (b == "group_algebra") return GradedRing<F>::group_algebra(g);
    if (b == "truncated_polynomial")
      return GradedRing<F>::truncated_polynomial(g, element(d.at("t_degree"), g), io::require<Index>(d, "n"));
    throw ParseError("unknown ring builder \"" + b + "\"");
  }

  GradedModule<F> parse_module(const json& d) {
    if (d.contains("coarsen_of")) {
      auto ctx = context(d.at("psi"));
      const GradedModule<F> m = module(d.at("coarsen_of"));
      return d.contains("ring") ? coarsen(m, *ctx, ring(d.at("ring"))) : coarsen(m, *ctx);
    }
    if (d.contains("sum")) {
      std::vector<GradedModule<F>> parts;
      for (const auto& p : d.at("sum")) parts.push_back(module(p));
      if (parts.empty()) throw ParseError("empty sum: use {\"ring\": ..., \"zero\": true}");
      return direct_sum(parts);
    }
    if (d.contains("shift_of")) {
      const GradedModule<F> m = module(d.at("shift_of"));
      return shift(m, element(d.at("by"), m.group()));
    }
    if (d.contains("quotient_of")) {
      const GradedModule<F> m = module(d.at("quotient_of"));
      const json& by = d.at("by");
      Mat<F> gens(m.dim(), static_cast<Index>(by.size()));
      for (std::size_t k = 0; k < by.size(); ++k) gens.col(static_cast<Index>(k)) = vector(by[k], m.dim());
      return quotient_by(GradedSubmodule<F>::generated_by(m, gens)).module;
    }
    const GradedRing<F> r = ring(d.at("ring"));
    if (d.value("zero", false)) return GradedModule<F>::zero(r);
    if (d.value("regular", false)) {
      GradedModule<F> reg = GradedModule<F>::regular(r);
      return d.contains("shift") ? shift(reg, element(d.at("shift"), r.group())) : reg;
    }
    if (d.contains("free")) {
      std::vector<GradedModule<F>> parts;
      for (const auto& e : d.at("free"))
        parts.push_back(shift(GradedModule<F>::regular(r), r.group().neg(element(e, r.group()))));
      return parts.empty() ? GradedModule<F>::zero(r) : direct_sum(parts, r);
    }
    return io::module_from_json<F>(d, r);
  }

  IntensionalFreeModule<F> parse_intensional(const json& d) {
    const GradedRing<F> r = ring(d.at("ring"));
    if (d.contains("free_over") && !(group(d.at("free_over")) == r.group()))
      throw ParseError("\"free_over\" must be the grading group of the ring");
    return io::intensional_from_json<F>(d, r);
  }

  std::shared_ptr<const UniformRuleMorphism<F>> parse_rule(const json& d) {
    const auto src = intensional(d.at("source"));
    const auto tgt = module(d.at("target"));
    auto ctx = context(d.at("psi"));
    UniformRule<F> rule;
    if (d.contains("constant")) {
      rule.rule = typename UniformRule<F>::Constant{vector(d.at("constant"), tgt.dim())};
    } else {
      typename UniformRule<F>::Exceptions ex;
      ex.fallback = vector(d.at("fallback"), tgt.dim());
      for (const auto& e : d.value("exceptions", json::array()))
        ex.exceptions.emplace_back(element(e.at("index"), src.ring().group()), vector(e.at("value"), tgt.dim()));
      rule.rule = std::move(ex);
    }
    return std::make_shared<const UniformRuleMorphism<F>>(src, tgt, std::move(rule), *ctx);
  }

  json decl_;
  Options opt_;
  std::set<std::string> resolving_;
  std::map<std::string, FgAbGroup> groups_;
  std::map<std::string, GroupHom> homs_;
  std::map<std::string, GradedRing<F>> rings_;
  std::map<std::string, GradedModule<F>> modules_;
  std::map<std::string, IntensionalFreeModule<F>> intensional_;
  std::map<std::string, std::shared_ptr<const UniformRuleMorphism<F>>> rules_;
};

// ================================================================== checks

struct CompiledCheck {
  CheckRecord record;
  std::function<json()> run;
};

template <class F>
json violations_json(const std::vector<Violation>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back({{"axiom", x.axiom}, {"witness", x.witness}, {"message", x.message}});
  return out;
}

template <class F>
bool same(const GradedMorphism<F>& a, const GradedMorphism<F>& b) {
  return equal<F>(a.matrix(), b.matrix());
}

template <class F>
json baer_json(const BaerReport<F>& r) {
  json out = {{"injective", r.injective}, {"ideals_checked", r.ideals_checked}, {"pairs_checked", r.pairs_checked}};
  if (r.witness)
    out["witness"] = {{"ideal", io::mat_to_json<F>(r.witness->ideal)},
                      {"shift", io::to_json(r.witness->shift)},
                      {"morphism", io::mat_to_json<F>(r.witness->morphism)}};
  return out;
}

json smallness_json(const SmallnessReport& s) {
  json out = {{"verdict", to_string(s.verdict)}, {"certificate", s.certificate}};
  if (s.witness) out["witness"] = {{"radii", s.witness->radii}, {"touched", s.witness->touched}};
  return out;
}

template <class F>
class Compiler {
 public:
  explicit Compiler(Workspace<F>& ws) : ws_(ws) {}

  CompiledCheck compile(const json& c, std::size_t index) {
    if (!c.is_object()) throw ParseError("each check must be an object");
    CompiledCheck out;
    out.record.op = io::require<std::string>(c, "op");
    out.record.name = c.value("name", out.record.op + "#" + std::to_string(index));
    out.record.inputs = c;
    out.record.inputs.erase("expect");
    out.record.inputs.erase("name");
    out.record.expected = c.value("expect", json());
    if (!out.record.expected.is_null() && !out.record.expected.is_object())
      throw ParseError("\"expect\" must be an object");
    const std::string& op = out.record.op;
    if (op == "validate") {
      out.run = validate(c, out.record.label);
    } else if (op == "coarsen") {
      out.run = coarsen_op(c, out.record.label);
    } else if (op == "refine") {
      out.run = refine_op(c, out.record.label);
    } else if (op == "decomposition") {
      out.run = decomposition(c, out.record.label);
    } else if (op == "adjunction-check") {
      out.run = adjunction(c, out.record.label);
    } else if (op == "product-defect") {
      out.run = product_defect(c, out.record.label);
    } else if (op == "graded-hom") {
      out.run = graded_hom(c, out.record.label);
    } else if (op == "hpsi-check") {
      out.run = hpsi(c, out.record.label);
    } else if (op == "components") {
      out.run = components(c, out.record.label);
    } else if (op == "small-check") {
      out.run = small(c, out.record.label);
    } else if (op == "cor280") {
      out.run = cor280(c, out.record.label);
    } else if (op == "injective-check") {
      out.run = injective(c, out.record.label);
    } else if (op == "cogenerator-check") {
      out.run = cogenerator(c, out.record.label);
    } else if (op == "laurent") {
      out.run = laurent(out.record.label);
    } else {
      throw ParseError("unknown check op \"" + op + "\"");
    }
    return out;
  }

 private:
  std::optional<Index> guard() const {
    if (ws_.options().guard) return static_cast<Index>(*ws_.options().guard);
    return std::nullopt;
  }

  std::function<json()> validate(const json& c, std::string& label) {
    label = "graded ring and module axioms";
    if (c.contains("module")) {
      auto m = ws_.module(c.at("module"));
      return [m] {
        auto v = gradlab::validate(m);
        return json{{"valid", v.empty()}, {"violations", violations_json<F>(v)}};
      };
    }
    auto r = ws_.ring(c.at("ring"));
    return [r] {
      auto v = gradlab::validate(r);
      return json{{"valid", v.empty()}, {"violations", violations_json<F>(v)}};
    };
  }

  std::function<json()> coarsen_op(const json& c, std::string& label) {
    label = "coarsening: same basis, degrees pushed forward along psi";
    auto ctx = ws_.context(c.at("psi"));
    if (c.contains("module")) {
      auto m = ws_.module(c.at("module"));
      return [m, ctx] {
        auto mc = coarsen(m, *ctx);
        return json{{"dim", mc.dim()}, {"dims", dims_json(mc.component_dims())}, {"valid", is_valid(mc)}};
      };
    }
    auto r = ws_.ring(c.at("ring"));
    return [r, ctx] {
      auto rc = coarsen(r, *ctx);
      return json{{"dim", rc.dim()}, {"valid", is_valid(rc)}};
    };
  }

  std::function<json()> refine_op(const json& c, std::string& label) {
    label = "refinement: component at g is the component at psi(g)";
    auto ctx = ws_.context(c.at("psi"));
    if (c.contains("module")) {
      auto n = ws_.module(c.at("module"));
      auto r = ws_.ring(c.at("ring"));
      std::optional<std::int64_t> radius;
      if (c.contains("radius")) radius = c.at("radius").get<std::int64_t>();
      return [n, r, ctx, radius] {
        std::vector<GroupElement> w;
        if (radius) {
          std::vector<GroupElement> lifts;
          for (const auto& d : n.support()) lifts.push_back(ctx->lift(d));
          for (const auto& l : lifts)
            for (const auto& k : kernel_window(ctx->kernel(), ctx->fine_group(), *radius))
              w.push_back(ctx->fine_group().add(l, k));
          w = detail::sorted_unique(std::move(w));
        } else {
          w = full_window(n, *ctx);
        }
        auto nr = refine(n, r, *ctx, w);
        return json{{"dim", nr.module.dim()}, {"window", w.size()}, {"valid", is_valid(nr.module)}};
      };
    }
    auto s = ws_.ring(c.at("ring"));
    return [s, ctx] {
      auto sr = refine(s, *ctx);
      return json{{"dim", sr.ring.dim()}, {"valid", is_valid(sr.ring)}};
    };
  }

  std::function<json()> decomposition(const json& c, std::string& label) {
    label = "refine then coarsen is a sum of |ker psi| copies";
    auto ctx = ws_.context(c.at("psi"));
    auto n = ws_.module(c.at("module"));
    auto r = ws_.ring(c.at("ring"));
    return [n, r, ctx] {
      auto d = refine_then_coarsen_decomposition(n, r, *ctx);
      const bool iso = is_valid(d.isomorphism) && inverse<F>(d.isomorphism.matrix()).has_value();
      const Index k = ctx->kernel_order();
      return json{{"dim", d.refined_coarsened.dim()},
                  {"kernel_order", k},
                  {"copies_dim", d.copies.dim()},
                  {"iso_verified", iso},
                  {"ok", iso && d.refined_coarsened.dim() == k * n.dim()}};
    };
  }

  std::function<json()> adjunction(const json& c, std::string& label) {
    const std::string kind = c.value("kind", "coarsen-refine");
    auto ctx = ws_.context(c.at("psi"));
    auto src = ws_.module(c.at("source"));
    auto tgt = ws_.module(c.at("target"));
    if (kind == "coarsen-refine") {
      label = "coarsening is left adjoint to refinement";
      return [src, tgt, ctx] {
        CoarsenRefineAdjunction<F> adj(src, tgt, *ctx);
        auto ch = adj.coarse_homs();
        auto fh = adj.fine_homs();
        bool inverse_ok = ch.dim() == fh.dim();
        for (const auto& u : ch.morphisms()) inverse_ok = inverse_ok && same(adj.backward(adj.forward(u)), u);
        for (const auto& w : fh.morphisms()) inverse_ok = inverse_ok && same(adj.forward(adj.backward(w)), w);
        const bool tri = coarsen_refine_triangles(src, tgt, *ctx, adj.fine_target().window).ok();
        json out = {{"coarse_hom_dim", ch.dim()}, {"fine_hom_dim", fh.dim()},
                    {"mutually_inverse", inverse_ok}, {"triangles", tri}};
        bool ok = inverse_ok && tri;
        if (adj.coarse_source() == tgt) {
          const bool unit = same(adj.forward(GradedMorphism<F>::identity(tgt)),
                                 alpha_prime(src, *ctx, adj.fine_target().window));
          out["transpose_of_id_is_unit"] = unit;
          ok = ok && unit;
        }
        out["ok"] = ok;
        return out;
      };
    }
    if (kind == "refine-coarsen") {
      label = "refinement is left adjoint to coarsening (finite kernel)";
      return [src, tgt, ctx] {
        RefineCoarsenAdjunction<F> adj(src, tgt, *ctx);
        auto fh = adj.fine_homs();
        auto ch = adj.coarse_homs();
        bool inverse_ok = ch.dim() == fh.dim();
        for (const auto& w : fh.morphisms()) inverse_ok = inverse_ok && same(adj.backward(adj.forward(w)), w);
        for (const auto& u : ch.morphisms()) inverse_ok = inverse_ok && same(adj.forward(adj.backward(u)), u);
        const bool tri = adj.triangles().ok();
        const GradedRing<F>& r = tgt.ring();
        const bool da = same(compose(delta_prime(tgt, *ctx), alpha_prime(tgt, *ctx)), GradedMorphism<F>::identity(tgt));
        const auto bg = compose(beta_prime(src, r, *ctx), gamma_prime(src, r, *ctx));
        const F k = F(static_cast<long long>(ctx->kernel_order()));
        const bool bgk = equal<F>(bg.matrix(), Mat<F>(k * identity<F>(src.dim())));
        return json{{"fine_hom_dim", fh.dim()}, {"coarse_hom_dim", ch.dim()}, {"mutually_inverse", inverse_ok},
                    {"triangles", tri}, {"delta_alpha_is_id", da}, {"beta_gamma_is_kernel_order", bgk},
                    {"kernel_order", ctx->kernel_order()}, {"ok", inverse_ok && tri && da && bgk}};
      };
    }
    throw ParseError("unknown adjunction kind \"" + kind + "\"");
  }

  std::function<json()> product_defect(const json& c, std::string& label) {
    label = "coarsening commutes with finite products, not infinite ones";
    auto ctx = ws_.context(c.at("psi"));
    if (c.contains("intensional")) {
      auto fam = ws_.intensional(c.at("intensional"));
      return [fam, ctx] {
        auto rep = product_coarsening_comparison(fam, *ctx);
        json out = {{"verdict", rep.verdict == ComparisonVerdict::Iso ? "Iso" : "ProperMono"}};
        if (rep.witness) {
          out["witness"] = {{"radii", rep.witness->radii},
                            {"nonzero_slices", rep.witness->nonzero_slices},
                            {"window_sizes", rep.witness->window_sizes}};
          out["witness_verified"] = verify_product_witness(fam, *ctx, *rep.witness);
        }
        return out;
      };
    }
    std::vector<GradedModule<F>> fam;
    for (const auto& m : c.at("family")) fam.push_back(ws_.module(m));
    auto r = fam.empty() ? ws_.ring(c.at("ring")) : fam.front().ring();
    return [fam, r, ctx] {
      auto rep = product_coarsening_comparison(fam, r, *ctx);
      return json{{"verdict", rep.verdict == ComparisonVerdict::Iso ? "Iso" : "ProperMono"},
                  {"iso_verified", rep.isomorphism && is_valid(*rep.isomorphism)}};
    };
  }

  std::function<json()> graded_hom(const json& c, std::string& label) {
    label = "graded Hom module";
    auto m = ws_.module(c.at("source"));
    auto n = ws_.module(c.at("target"));
    return [m, n] {
      GradedHomModule<F> h(m, n);
      std::map<GroupElement, Index> dims;
      for (const auto& d : h.support()) dims[d] = h.dim_at(d);
      return json{{"support", elements_json(h.support())}, {"dims", dims_json(dims)}, {"module_valid", is_valid(h.module())}};
    };
  }

  std::function<json()> hpsi(const json& c, std::string& label) {
    label = "h_psi is iso iff M is small or ker psi is finite";
    auto ctx = ws_.context(c.at("psi"));
    const int jobs = ws_.options().jobs;
    if (ws_.has_module(c.at("source"))) {
      auto m = ws_.module(c.at("source"));
      auto n = ws_.module(c.contains("target") ? c.at("target") : c.at("source"));
      return [m, n, ctx, jobs] {
        auto rep = h_psi(m, n, *ctx, jobs);
        auto pred = h_psi_prediction<F>(m, *ctx);
        json blocks = json::array();
        for (const auto& b : rep.blocks)
          blocks.push_back({{"degree", io::to_json(b.degree)}, {"source_dim", b.source_dim},
                            {"target_dim", b.target_dim}, {"rank", b.rank}});
        return json{{"mono", rep.mono}, {"iso", rep.iso}, {"prediction", pred.iso}, {"branch", pred.branch},
                    {"blocks", std::move(blocks)}, {"ok", rep.mono && rep.iso == pred.iso}};
      };
    }
    auto im = ws_.intensional(c.at("source"));
    std::shared_ptr<const UniformRuleMorphism<F>> rule;
    if (c.contains("rule")) rule = ws_.rule(c.at("rule"));
    return [im, ctx, rule] {
      auto pred = h_psi_prediction<F>(im, *ctx);
      json out = {{"iso", pred.iso}, {"prediction", pred.iso}, {"branch", pred.branch}};
      if (rule) {
        auto cd = component_decomposition(*rule);
        out["components"] = cd.finite ? "Finite" : "Infinite";
        out["h_psi_surjective_refuted"] = cd.certifies_h_psi_not_surjective;
        out["ok"] = cd.certifies_h_psi_not_surjective == !pred.iso || cd.finite;
      }
      return out;
    };
  }

  std::function<json()> components(const json& c, std::string& label) {
    label = "G-components of a rule-defined morphism";
    auto u = ws_.rule(c.at("rule"));
    return [u] {
      auto cd = component_decomposition(*u);
      json out = {{"components", cd.finite ? "Finite" : "Infinite"}, {"reason", cd.reason},
                  {"h_psi_surjective_refuted", cd.certifies_h_psi_not_surjective}};
      if (cd.finite) {
        out["degrees"] = elements_json(cd.degrees);
      } else {
        out["coset_bases"] = elements_json(cd.coset_bases);
      }
      return out;
    };
  }

  SmallnessSubject<F> subject(const json& c) {
    if (c.contains("opaque")) return OpaqueModule{c.at("opaque").get<std::string>()};
    if (c.contains("intensional")) return ws_.intensional(c.at("intensional"));
    const json& ref = c.at("module");
    if (ws_.has_module(ref)) return ws_.module(ref);
    return ws_.intensional(ref);
  }

  std::function<json()> small(const json& c, std::string& label) {
    label = "smallness is invariant under coarsening";
    auto m = subject(c);
    std::shared_ptr<const CoarseningContext> ctx;
    if (c.contains("psi")) ctx = ws_.context(c.at("psi"));
    std::optional<GradedModule<F>> rel;
    if (c.contains("relative_to")) rel = ws_.module(c.at("relative_to"));
    return [m, ctx, rel] {
      if (!ctx) {
        auto s = smallness_report<F>(m);
        json out = smallness_json(s);
        if (s.witness) out["witness_verified"] = verify_not_small(std::get<IntensionalFreeModule<F>>(m), *s.witness);
        return out;
      }
      auto t = smallness_coarsening_transfer<F>(m, *ctx, rel);
      json out = {{"verdict", to_string(t.fine.verdict)}, {"coarse_verdict", to_string(t.coarse.verdict)},
                  {"consistent", t.consistent}, {"ok", t.consistent}};
      if (const auto* im = std::get_if<IntensionalFreeModule<F>>(&m); im && t.fine.witness) {
        const auto coarse = im->regraded(coarsen(im->ring(), *ctx), ctx->psi());
        out["witness_verified"] = verify_not_small(*im, *t.fine.witness) &&
                                  t.coarse.witness && verify_not_small(coarse, *t.coarse.witness);
      }
      if (t.relative) {
        out["relative"] = {t.relative->first, t.relative->second};
      } else if (rel) {
        out["relative"] = nullptr;
      }
      if (rel) out["relative_note"] = t.relative_note;
      return out;
    };
  }

  std::function<json()> cor280(const json& c, std::string& label) {
    label = "h_pi iso for an infinite subgroup F gives h_psi iso for every psi";
    auto m = subject(c);
    FgAbGroup g = std::visit(
        [](const auto& x) -> FgAbGroup {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, OpaqueModule>) {
            throw ParseError("cor280 needs an explicit or intensional module");
          } else {
            return x.ring().group();
          }
        },
        m);
    std::vector<GroupElement> gens;
    for (const auto& e : c.at("subgroup")) gens.push_back(ws_.element(e, g));
    Subgroup f(g, gens);
    std::vector<GroupHom> psis;
    for (const auto& p : c.value("psi_list", json::array())) psis.push_back(ws_.hom(p));
    std::vector<GradedModule<F>> tests;
    for (const auto& t : c.value("tests", json::array())) tests.push_back(ws_.module(t));
    const int jobs = ws_.options().jobs;
    return [m, f, psis, tests, jobs] {
      auto rep = corollary_280_demo<F>(m, f, psis, tests, jobs);
      json entries = json::array();
      for (const auto& e : rep.entries) {
        json x = {{"psi", e.psi}, {"kernel_finite", e.kernel_finite}, {"prediction", e.prediction.iso},
                  {"branch", e.prediction.branch}, {"ok", e.ok}};
        x["computed_iso"] = e.computed_iso ? json(*e.computed_iso) : json(nullptr);
        entries.push_back(std::move(x));
      }
      return json{{"premise", rep.premise}, {"premise_note", rep.premise_note},
                  {"concluded_small", rep.concluded_small}, {"entries", std::move(entries)}, {"ok", rep.ok}};
    };
  }

  std::function<json()> injective(const json& c, std::string& label) {
    label = "graded Baer criterion; coarsening reflects injectivity, and preserves it for finite kernel";
    auto m = ws_.module(c.at("module"));
    std::shared_ptr<const CoarseningContext> ctx;
    if (c.contains("psi")) ctx = ws_.context(c.at("psi"));
    auto g = guard();
    return [m, ctx, g] {
      auto rep = is_graded_injective(m, g);
      json out = baer_json(rep);
      if (rep.witness) out["witness_verified"] = verify_baer_witness(m, *rep.witness);
      if (ctx) {
        auto t = injectivity_transfer_check(m, *ctx, g);
        out["coarse_injective"] = t.coarse;
        out["kernel_finite"] = t.kernel_finite;
        out["consistent"] = t.consistent;
        out["ok"] = t.consistent;
      }
      return out;
    };
  }

  std::function<json()> cogenerator(const json& c, std::string& label) {
    label = "cogenerator: every simple graded module maps nonzero into M";
    auto m = ws_.module(c.at("module"));
    auto g = guard();
    return [m, g] {
      auto rep = is_cogenerator(m, g);
      json out = {{"cogenerator", rep.cogenerator}, {"simples_checked", rep.evidence.size()}};
      if (rep.witness)
        out["witness"] = {{"maximal_ideal", io::mat_to_json<F>(rep.witness->maximal_ideal)},
                          {"shift", io::to_json(rep.witness->shift)}};
      if (!rep.note.empty()) out["note"] = rep.note;
      return out;
    };
  }

  std::function<json()> laurent(std::string& label) {
    label = "K[t, 1/t]: graded self-injective, ungraded not";
    return [] {
      auto cert = laurent_counterexample<F>();
      json steps = json::array();
      for (const auto& s : verify_laurent_steps(cert)) steps.push_back({{"id", s.id}, {"holds", s.holds}});
      return json{{"valid", cert.valid()}, {"steps", std::move(steps)}, {"ok", cert.valid()}};
    };
  }

  Workspace<F>& ws_;
};

bool matches(const json& expected, const json& result, json* mismatch) {
  bool ok = true;
  for (const auto& [k, v] : expected.items()) {
    if (!result.contains(k) || result.at(k) != v) {
      ok = false;
      (*mismatch)[k] = {{"expected", v}, {"got", result.contains(k) ? result.at(k) : json(nullptr)}};
    }
  }
  return ok;
}

void evaluate(CheckRecord& rec) {
  json mismatch = json::object();
  const bool has_ok = rec.result.contains("ok");
  const bool intrinsic = !has_ok || rec.result.at("ok") == true;
  const bool expect_ok = rec.expected.is_null() || matches(rec.expected, rec.result, &mismatch);
  if (!mismatch.empty()) rec.result["mismatch"] = mismatch;
  const bool ok_expected = !rec.expected.is_null() && rec.expected.contains("ok");
  if (!expect_ok || (!intrinsic && !ok_expected)) {
    rec.verdict = "fail";
  } else if (!rec.expected.is_null() || has_ok) {
    rec.verdict = "pass";
  } else if (rec.result.contains("error")) {
    rec.verdict = "fail";
  } else {
    rec.verdict = "info";
  }
}

template <class F>
Report run_typed(const json& scenario, const Options& opt, const std::string& field) {
  Workspace<F> ws(scenario.value("declarations", json::object()), opt);
  Compiler<F> compiler(ws);
  std::vector<CompiledCheck> checks;
  const json& list = scenario.value("checks", json::array());
  if (!list.is_array()) throw ParseError("\"checks\" must be an array");
  for (std::size_t i = 0; i < list.size(); ++i) checks.push_back(compiler.compile(list[i], i));

  auto exec = [&](std::size_t i) {
    CompiledCheck& c = checks[i];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.record.result = c.run();
    } catch (const SoundnessFailure& e) {
      throw InternalFailure(c.record.name + ": " + e.what());
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      c.record.result = {{"error", e.kind()}, {"message", e.what()}};
    } catch (const std::exception& e) {
      throw InternalFailure(c.record.name + ": " + e.what());
    }
    c.record.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    evaluate(c.record);
  };
  if (opt.jobs <= 1 || checks.size() <= 1) {
    for (std::size_t i = 0; i < checks.size(); ++i) exec(i);
  } else {
    std::vector<std::future<void>> fs;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < opt.jobs; ++t)
      fs.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next++; i < checks.size(); i = next++) exec(i);
      }));
    std::exception_ptr first;
    for (auto& f : fs) {
      try {
        f.get();
      } catch (...) {
        if (!first) first = std::current_exception();
      }
    }
    if (first) std::rethrow_exception(first);
  }

  Report rep;
  rep.field = field;
  for (auto& c : checks) {
    if (c.record.verdict == "fail") rep.exit_code = kCheckFailed;
    rep.checks.push_back(std::move(c.record));
  }
  return rep;
}

std::string summary(const json& result) {
  std::string out;
  for (const auto& [k, v] : result.items()) {
    if (!(v.is_boolean() || v.is_number() || (v.is_string() && v.get<std::string>().size() <= 40))) continue;
    if (!out.empty()) out += ' ';
    out += k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
  }
  return out;
}

}  // namespace

Report run_scenario(const json& scenario, const Options& opt) {
  if (!scenario.is_object()) throw ParseError("scenario must be a JSON object");
  const int version = scenario.value("version", kSchemaVersion);
  if (version != kSchemaVersion) throw ParseError("unsupported scenario version " + std::to_string(version));
  const std::string field = opt.field ? *opt.field : scenario.value("field", std::string("F2"));
  try {
    if (field == "F2") return run_typed<F2>(scenario, opt, field);
    if (field == "F3") return run_typed<F3>(scenario, opt, field);
    if (field == "Q") return run_typed<Q>(scenario, opt, field);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unsupported field \"" + field + "\" (use F2, F3 or Q)");
}

json to_json(const Report& r, bool timing) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json x = {{"name", c.name}, {"op", c.op}, {"inputs", c.inputs}, {"verdict", c.verdict},
              {"label", c.label}, {"result", c.result}};
    if (!c.expected.is_null()) x["expected"] = c.expected;
    if (timing) x["duration_ms"] = c.duration_ms;
    checks.push_back(std::move(x));
  }
  return {{"schema_version", kSchemaVersion}, {"field", r.field}, {"status", r.exit_code == kOk ? "ok" : "failed"},
          {"checks", std::move(checks)}};
}

std::string to_text(const Report& r) {
  std::ostringstream os;
  for (const auto& c : r.checks) {
    std::string v = c.verdict;
    for (auto& ch : v) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    os << v << "  " << c.name << "  [" << c.op << "] " << summary(c.result) << "  (" << c.label;
    if (c.result.contains("branch")) os << "; branch: " << c.result.at("branch").get<std::string>();
    os << ")\n";
    if (c.verdict == "fail") {
      if (c.result.contains("mismatch")) os << "    mismatch: " << c.result.at("mismatch").dump() << "\n";
      if (c.result.contains("witness")) os << "    witness: " << c.result.at("witness").dump() << "\n";
      if (c.result.contains("message")) os << "    error: " << c.result.at("message").get<std::string>() << "\n";
    }
  }
  os << (r.exit_code == kOk ? "ok" : "failed") << ": " << r.checks.size() << " checks\n";
  return os.str();
}

json laurent_certificate(const std::string& field) {
  if (field == "F2") return io::to_json(laurent_counterexample<F2>());
  if (field == "F3") return io::to_json(laurent_counterexample<F3>());
  if (field == "Q") return io::to_json(laurent_counterexample<Q>());
  throw UnsupportedField("no Laurent certificate over \"" + field + "\" (use F2, F3 or Q)");
}

namespace {

template <class F>
bool verify_typed(const json& cert, std::vector<std::string>* lines) {
  auto c = io::laurent_certificate_from_json<F>(cert);
  auto steps = verify_laurent_steps(c);
  bool ok = steps.size() == 4;
  for (const auto& s : steps) {
    ok = ok && s.holds;
    if (lines) lines->push_back(std::string(s.holds ? "ok    " : "FAIL  ") + s.id + ": " + s.claim);
  }
  return ok;
}

}  // namespace

bool verify_certificate(const json& cert, std::vector<std::string>* lines) {
  try {
    const std::string kind = io::require<std::string>(cert, "kind");
    if (kind != "laurent") throw ParseError("unknown certificate kind \"" + kind + "\"");
    const std::string field = io::require<std::string>(cert, "field");
    if (field == "F2") return verify_typed<F2>(cert, lines);
    if (field == "F3") return verify_typed<F3>(cert, lines);
    if (field == "Q") return verify_typed<Q>(cert, lines);
    throw ParseError("unsupported field \"" + field + "\"");
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

}  // namespace gradlab::cli
