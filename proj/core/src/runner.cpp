#include "stonemod/runner.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

#include "stonemod/cohomology.hpp"
#include "stonemod/duality.hpp"
#include "stonemod/tree.hpp"

namespace stonemod {

namespace {

[[noreturn]] void unsupported(const std::string& sub, InstanceKind kind) {
  throw std::invalid_argument("run: subcommand '" + sub + "' does not apply to kind '" +
                              kind_name(kind) + "'");
}

std::string pad2(int i) {
  return (i < 10 ? "0" : "") + std::to_string(i);
}

std::string groups_line(const std::vector<FinAbGroup>& gs) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < gs.size(); ++i) os << (i ? ", " : "") << gs[i].to_string();
  os << "]";
  return os.str();
}

std::string mask_set(int mask) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (int x = 0; mask >> x; ++x)
    if (mask & (1 << x)) {
      os << (first ? "" : ",") << x;
      first = false;
    }
  os << "}";
  return os.str();
}

void add_result(Report& r, const std::string& name, const CheckResult& c) {
  r.add_check(name, c.ok, c.witness);
}

// ---------------------------------------------------------------------------
// Shared renderings.

void presheaf_values(Report& r, const PresheafTable& p) {
  for (int mask = 0; mask < (1 << p.points()); ++mask)
    r.add_data("value-" + pad2(mask) + " " + mask_set(mask),
               p.value(mask).group().to_string());
}

void cosheaf_values(Report& r, const CosheafTable& c) {
  for (int mask = 0; mask < (1 << c.points()); ++mask)
    r.add_data("value-" + pad2(mask) + " " + mask_set(mask),
               c.value(mask).group().to_string());
}

void etale_fibres(Report& r, const EtaleSystem& e) {
  for (int i = 0; i < e.levels(); ++i) {
    std::vector<FinAbGroup> row;
    for (int x = 0; x < e.chain().size(i); ++x) row.push_back(e.fibre(i, x).group());
    r.add_data("fibres-" + pad2(i), groups_line(row));
  }
}

void prosheaf_fibres(Report& r, const ProSheafSystem& s) {
  for (int i = 0; i < s.levels(); ++i) {
    std::vector<FinAbGroup> row;
    for (int x = 0; x < s.chain().size(i); ++x) row.push_back(s.fibre(i, x).group());
    r.add_data("fibres-" + pad2(i), groups_line(row));
  }
}

// Every family of clopens at the table's level, checked as a cover of its
// union.  2^(2^points) families, so only run for at most 3 points.
template <typename Table, typename Check>
void all_covers_check(Report& r, const Table& t, Check check, const char* name) {
  if (t.points() > 3) return;
  int masks = 1 << t.points();
  for (int fam = 0; fam < (1 << masks); ++fam) {
    std::vector<Clopen> cover;
    std::ostringstream desc;
    desc << "cover [";
    bool first = true;
    for (int mask = 0; mask < masks; ++mask)
      if (fam & (1 << mask)) {
        cover.push_back(t.clopen_of(mask));
        desc << (first ? "" : ", ") << mask_set(mask);
        first = false;
      }
    desc << "]";
    CheckResult c = check(t, cover);
    if (!c.ok) {
      r.add_check(name, false, desc.str() + ": " + c.witness);
      return;
    }
  }
  r.add_check(name, true);
}

void les_report_data(Report& r, const LESReport& rep, const std::string& check_prefix) {
  r.add_check(check_prefix, rep.ok, rep.witness);
  for (size_t k = 0; k < rep.groups.size(); ++k)
    r.add_data("node-" + pad2(static_cast<int>(k)) + " " + rep.labels[k],
               rep.groups[k].to_string());
  for (size_t k = 0; k < rep.positions.size(); ++k) {
    const ExactnessResult& e = rep.positions[k];
    std::string witness;
    if (!e.exact && e.witness.has_value()) witness = e.witness->description;
    r.add_check("exact-" + pad2(static_cast<int>(k)) + " at " + rep.labels[k], e.exact,
                witness);
  }
}

// H^0 computed independently of the bar complex: the joint kernel of
// (action of g) - id over all basis elements g.
FinAbGroup fixed_points(const FinGroup& g, const FinModule& a) {
  std::vector<AbHom> maps;
  for (int e = 0; e < g.order(); ++e) {
    if (e == g.identity()) continue;
    GroupElem basis = a.ring().zero();
    basis.residues[e] = 1;
    maps.push_back(hom_sub(a.act_of(basis), AbHom::identity(a.group())));
  }
  return joint_kernel(a.group(), maps).kernel;
}

// ---------------------------------------------------------------------------
// Subcommand implementations.

void run_validate(Report& r, const InstanceDocument& doc) {
  switch (doc.kind) {
    case InstanceKind::group: {
      const FinAbGroup& g = *doc.group;
      r.add_check("double-dual", double_dual_check(g), "evaluation map is not an isomorphism");
      r.add_data("group", g.to_string());
      r.add_data("order", std::to_string(g.order()));
      r.add_data("exponent", std::to_string(g.exponent()));
      return;
    }
    case InstanceKind::ring: {
      const FiniteRing& ring = *doc.ring;
      r.add_check("ring-axioms", true);
      r.add_data("additive-group", ring.add().to_string());
      r.add_data("order", std::to_string(ring.order()));
      r.add_data("commutative", ring.is_commutative() ? "yes" : "no");
      return;
    }
    case InstanceKind::module: {
      const FinModule& m = *doc.module;
      r.add_check("module-axioms", true);
      r.add_data("underlying", m.group().to_string());
      r.add_data("ring-order", std::to_string(m.ring().order()));
      r.add_data("side", m.side() == Side::left ? "left" : "right");
      return;
    }
    case InstanceKind::chain: {
      const LevelChain& c = *doc.chain;
      ChainCheck cc = validate_chain(c);
      r.add_check("surjective-projections", cc.ok,
                  cc.ok ? "" : "projection from level " +
                                   std::to_string(cc.failing_projection + 1) +
                                   " to level " + std::to_string(cc.failing_projection) +
                                   " is not surjective");
      std::ostringstream sizes;
      for (int i = 0; i < c.levels(); ++i) sizes << (i ? " " : "") << c.size(i);
      r.add_data("levels", std::to_string(c.levels()));
      r.add_data("sizes", sizes.str());
      return;
    }
    case InstanceKind::sheaf: {
      const PresheafTable& p = *doc.sheaf;
      add_result(r, "gluing-partitions", disjoint_union_check(p));
      all_covers_check(r, p,
                       [](const PresheafTable& t, const std::vector<Clopen>& cover) {
                         return sheaf_condition_check(t, cover);
                       },
                       "gluing-covers");
      presheaf_values(r, p);
      return;
    }
    case InstanceKind::cosheaf: {
      const CosheafTable& c = *doc.cosheaf;
      add_result(r, "cogluing-partitions", codisjoint_union_check(c));
      all_covers_check(r, c,
                       [](const CosheafTable& t, const std::vector<Clopen>& cover) {
                         return cosheaf_condition_check(t, cover);
                       },
                       "cogluing-covers");
      cosheaf_values(r, c);
      return;
    }
    case InstanceKind::etale: {
      r.add_check("system-valid", true);
      etale_fibres(r, *doc.etale);
      return;
    }
    case InstanceKind::prosheaf: {
      r.add_check("system-valid", true);
      prosheaf_fibres(r, *doc.prosheaf);
      return;
    }
    case InstanceKind::tree_action: {
      const TreeAction& ta = *doc.tree_action;
      add_result(r, "tree", tree_check(ta.tree));
      TreeSES ses = tree_ses(*doc.modulus, ta);
      add_result(r, "sequence-exact", ses.result);
      r.add_data("vertices", std::to_string(ta.tree.vertices));
      r.add_data("edges", std::to_string(ta.tree.edges.size()));
      r.add_data("vertex-orbits", std::to_string(ta.vertex_orbits.size()));
      r.add_data("edge-orbits", std::to_string(ta.edge_orbits.size()));
      r.add_data("coefficients", doc.coefficients->group().to_string());
      return;
    }
  }
  throw std::logic_error("run_validate: unhandled kind");
}

bool same_presheaf(const PresheafTable& a, const PresheafTable& b) {
  if (a.points() != b.points()) return false;
  int masks = 1 << a.points();
  for (int v = 0; v < masks; ++v) {
    if (!(a.value(v) == b.value(v))) return false;
    for (int u = 0; u < v; ++u)
      if ((u & v) == u && !(a.res(v, u) == b.res(v, u))) return false;
  }
  return true;
}

bool same_cosheaf(const CosheafTable& a, const CosheafTable& b) {
  if (a.points() != b.points()) return false;
  int masks = 1 << a.points();
  for (int v = 0; v < masks; ++v) {
    if (!(a.value(v) == b.value(v))) return false;
    for (int u = 0; u < v; ++u)
      if ((u & v) == u && !(a.cor(u, v) == b.cor(u, v))) return false;
  }
  return true;
}

void run_dualize(Report& r, const InstanceDocument& doc) {
  switch (doc.kind) {
    case InstanceKind::group: {
      const FinAbGroup& g = *doc.group;
      r.add_check("double-dual", double_dual_check(g), "evaluation map is not an isomorphism");
      r.add_data("dual", dual_group(g).to_string());
      return;
    }
    case InstanceKind::module: {
      const FinModule& m = *doc.module;
      FinModule d = dual_module(m);
      FinModule dd = dual_module(d);
      r.add_check("double-dual", dd == m, "dualizing twice does not return the module");
      r.add_data("dual", d.group().to_string());
      r.add_data("dual-side", d.side() == Side::left ? "left" : "right");
      return;
    }
    case InstanceKind::sheaf: {
      const PresheafTable& p = *doc.sheaf;
      CosheafTable d = dual_presheaf_table(p);
      r.add_check("double-dual", same_presheaf(dual_cosheaf_table(d), p),
                  "dualizing twice does not return the table");
      for (int mask = 0; mask < (1 << d.points()); ++mask)
        r.add_data("dual-" + pad2(mask) + " " + mask_set(mask),
                   d.value(mask).group().to_string());
      return;
    }
    case InstanceKind::cosheaf: {
      const CosheafTable& c = *doc.cosheaf;
      PresheafTable d = dual_cosheaf_table(c);
      r.add_check("double-dual", same_cosheaf(dual_presheaf_table(d), c),
                  "dualizing twice does not return the table");
      for (int mask = 0; mask < (1 << d.points()); ++mask)
        r.add_data("dual-" + pad2(mask) + " " + mask_set(mask),
                   d.value(mask).group().to_string());
      return;
    }
    case InstanceKind::etale: {
      const EtaleSystem& e = *doc.etale;
      add_result(r, "fibre-duality", fibre_duality_check(e));
      ProSheafSystem d = dual_etale_to_prosheaf(e);
      prosheaf_fibres(r, d);
      return;
    }
    case InstanceKind::prosheaf: {
      const ProSheafSystem& s = *doc.prosheaf;
      add_result(r, "fibre-duality", fibre_duality_check(s));
      EtaleSystem d = dual_prosheaf_to_etale(s);
      etale_fibres(r, d);
      return;
    }
    default:
      unsupported("dualize", doc.kind);
  }
}

void run_sections(Report& r, const InstanceDocument& doc) {
  switch (doc.kind) {
    case InstanceKind::etale: {
      DiscreteChainModule g = global_sections(*doc.etale);
      r.add_check("sections-computed", true);
      for (size_t i = 0; i < g.levels.size(); ++i)
        r.add_data("sections-" + pad2(static_cast<int>(i)),
                   g.levels[i].group().to_string());
      r.add_data("order", std::to_string(g.value().group().order()));
      return;
    }
    case InstanceKind::prosheaf: {
      ProfiniteSum ps = profinite_direct_sum(*doc.prosheaf);
      r.add_check("sum-computed", true);
      for (size_t i = 0; i < ps.module.levels.size(); ++i)
        r.add_data("sum-" + pad2(static_cast<int>(i)),
                   ps.module.levels[i].group().to_string());
      r.add_data("order", std::to_string(ps.module.value().group().order()));
      return;
    }
    default:
      unsupported("sections", doc.kind);
  }
}

void run_directsum(Report& r, const InstanceDocument& doc) {
  switch (doc.kind) {
    case InstanceKind::cosheaf: {
      add_result(r, "assembly-bijective", codisjoint_union_check(*doc.cosheaf));
      cosheaf_values(r, *doc.cosheaf);
      return;
    }
    case InstanceKind::prosheaf: {
      const ProSheafSystem& s = *doc.prosheaf;
      ProfiniteSum ps = profinite_direct_sum(s);
      Factorization f = universal_property_check(s, ps.module.value(), ps.omega.components);
      add_result(r, "universal-factorization", f.result);
      bool ident = f.beta_tilde.has_value() &&
                   *f.beta_tilde == ModHom::identity(ps.module.value());
      r.add_check("factor-is-identity", ident,
                  "factoring the structure maps through the sum is not the identity");
      r.add_data("sum", ps.module.value().group().to_string());
      return;
    }
    default:
      unsupported("directsum", doc.kind);
  }
}

void run_roundtrip(Report& r, const InstanceDocument& doc) {
  switch (doc.kind) {
    case InstanceKind::sheaf:
      add_result(r, "roundtrip", roundtrip_check_presheaf(*doc.sheaf));
      presheaf_values(r, *doc.sheaf);
      return;
    case InstanceKind::cosheaf:
      add_result(r, "roundtrip", roundtrip_check_cosheaf(*doc.cosheaf));
      cosheaf_values(r, *doc.cosheaf);
      return;
    case InstanceKind::etale:
      add_result(r, "roundtrip", roundtrip_check_etale(*doc.etale));
      etale_fibres(r, *doc.etale);
      return;
    case InstanceKind::prosheaf:
      add_result(r, "roundtrip", roundtrip_check_prosheaf(*doc.prosheaf));
      prosheaf_fibres(r, *doc.prosheaf);
      return;
    default:
      unsupported("roundtrip", doc.kind);
  }
}

void run_duality_square(Report& r, const InstanceDocument& doc, const RunOptions& opts) {
  switch (doc.kind) {
    case InstanceKind::etale: {
      const EtaleSystem& e = *doc.etale;
      DualityWitness w = sum_product_duality_check(e);
      r.add_check("sum-product-duality", w.ok, w.witness);
      add_result(r, "square-naturality", square_commutes_check(e, opts.seed));
      for (size_t i = 0; i < w.level_isos.size(); ++i)
        r.add_data("theta-" + pad2(static_cast<int>(i)),
                   w.level_isos[i].source().group().to_string() + " -> " +
                       w.level_isos[i].target().group().to_string());
      return;
    }
    case InstanceKind::prosheaf: {
      const ProSheafSystem& s = *doc.prosheaf;
      add_result(r, "square-naturality", square_commutes_check(s, opts.seed));
      prosheaf_fibres(r, s);
      return;
    }
    default:
      unsupported("duality-square", doc.kind);
  }
}

void run_cohomology(Report& r, const InstanceDocument& doc, const RunOptions& opts) {
  if (doc.kind != InstanceKind::module) unsupported("cohomology", doc.kind);
  const FinModule& a = *doc.module;
  const auto& info = a.ring().group_info();
  if (!info.has_value())
    throw std::invalid_argument("run: cohomology requires a module over a group ring");
  if (a.side() != Side::left)
    throw std::invalid_argument("run: cohomology requires a left module");
  CohomologyResult bar = bar_cohomology(info->basis_group, a, opts.degree_cap);
  add_result(r, "complex", complex_check(bar.complex));
  FinAbGroup fixed = fixed_points(info->basis_group, a);
  r.add_check("fixed-points", fixed == bar.groups[0],
              "H^0 = " + bar.groups[0].to_string() + " but the fixed points are " +
                  fixed.to_string());
  for (size_t n = 0; n < bar.groups.size(); ++n)
    r.add_data("H^" + std::to_string(n), bar.groups[n].to_string());
  return;
}

void run_shapiro(Report& r, const InstanceDocument& doc, const RunOptions& opts) {
  if (doc.kind != InstanceKind::module) unsupported("shapiro", doc.kind);
  if (!doc.subgroup.has_value())
    throw std::invalid_argument("run: shapiro requires a 'subgroup' field in the document");
  const FinModule& a = *doc.module;
  const auto& info = a.ring().group_info();
  if (!info.has_value())
    throw std::invalid_argument("run: shapiro requires a module over a group ring");
  ShapiroReport rep = shapiro_check(info->basis_group, *doc.subgroup, a, opts.degree_cap);
  r.add_check("shapiro", rep.ok, rep.witness);
  r.add_data("ext-side", groups_line(rep.ext_side));
  r.add_data("cohomology-side", groups_line(rep.bar_side));
  r.add_data("subgroup-order", std::to_string(doc.subgroup->size()));
  return;
}

void run_mv_check(Report& r, const InstanceDocument& doc, const RunOptions& opts) {
  if (doc.kind != InstanceKind::tree_action) unsupported("mv-check", doc.kind);
  LESReport rep = mayer_vietoris_check(*doc.modulus, *doc.tree_action, *doc.coefficients,
                                       opts.degree_cap);
  les_report_data(r, rep, "mayer-vietoris");
  return;
}

}  // namespace

const std::vector<std::string>& subcommand_list() {
  static const std::vector<std::string> subs = {
      "validate",  "dualize",        "sections",   "directsum", "roundtrip",
      "duality-square", "cohomology", "shapiro",   "mv-check"};
  return subs;
}

Report run_command(const std::string& subcommand, const InstanceDocument& doc,
                   const RunOptions& opts) {
  Report r;
  r.command = subcommand;
  r.instance = doc.name;
  r.seed = opts.seed;
  r.degree_cap = opts.degree_cap;
  auto t0 = std::chrono::steady_clock::now();
  if (subcommand == "validate") {
    run_validate(r, doc);
  } else if (subcommand == "dualize") {
    run_dualize(r, doc);
  } else if (subcommand == "sections") {
    run_sections(r, doc);
  } else if (subcommand == "directsum") {
    run_directsum(r, doc);
  } else if (subcommand == "roundtrip") {
    run_roundtrip(r, doc);
  } else if (subcommand == "duality-square") {
    run_duality_square(r, doc, opts);
  } else if (subcommand == "cohomology") {
    run_cohomology(r, doc, opts);
  } else if (subcommand == "shapiro") {
    run_shapiro(r, doc, opts);
  } else if (subcommand == "mv-check") {
    run_mv_check(r, doc, opts);
  } else {
    throw std::invalid_argument("run: unknown subcommand '" + subcommand + "'");
  }
  auto t1 = std::chrono::steady_clock::now();
  r.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return r;
}

}  // namespace stonemod
