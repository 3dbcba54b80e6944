#include "stonemod/tree.hpp"

#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stonemod {

namespace {

void check_edge_endpoints(const Tree& t, const std::string& who) {
  for (size_t e = 0; e < t.edges.size(); ++e) {
    auto [u, v] = t.edges[e];
    if (u < 0 || u >= t.vertices || v < 0 || v >= t.vertices)
      throw std::invalid_argument(who + ": edge " + std::to_string(e) +
                                  " has an endpoint out of range");
  }
}

}  // namespace

CheckResult tree_check(const Tree& t) {
  if (t.vertices <= 0) return {false, "tree_check: need at least one vertex"};
  for (size_t e = 0; e < t.edges.size(); ++e) {
    auto [u, v] = t.edges[e];
    if (u < 0 || u >= t.vertices || v < 0 || v >= t.vertices)
      return {false, "tree_check: edge " + std::to_string(e) +
                         " has an endpoint out of range"};
    if (u == v)
      return {false, "tree_check: edge " + std::to_string(e) + " is a loop"};
  }
  if (static_cast<int>(t.edges.size()) != t.vertices - 1)
    return {false, "tree_check: " + std::to_string(t.edges.size()) +
                       " edges, expected |V| - 1 = " +
                       std::to_string(t.vertices - 1)};
  // Connectivity by search over undirected edges.
  std::vector<std::vector<int>> nbr(t.vertices);
  for (auto [u, v] : t.edges) {
    nbr[u].push_back(v);
    nbr[v].push_back(u);
  }
  std::vector<char> seen(t.vertices, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int y : nbr[x])
      if (!seen[y]) {
        seen[y] = 1;
        stack.push_back(y);
      }
  }
  for (int v = 0; v < t.vertices; ++v)
    if (!seen[v])
      return {false, "tree_check: vertex " + std::to_string(v) +
                         " is unreachable from vertex 0"};
  return {};
}

TreeAction make_tree_action(const FinGroup& g, const Tree& t,
                            const std::vector<std::vector<int>>& vertex_act,
                            const std::vector<std::vector<int>>& edge_act) {
  check_edge_endpoints(t, "make_tree_action");
  GSet vs(g, t.vertices, vertex_act);
  GSet es(g, static_cast<int>(t.edges.size()), edge_act);
  for (int a = 0; a < g.order(); ++a)
    for (size_t e = 0; e < t.edges.size(); ++e) {
      auto [u, v] = t.edges[e];
      int ae = es.apply(a, static_cast<int>(e));
      if (es.apply(a, static_cast<int>(e)) == static_cast<int>(e) && u != v &&
          vs.apply(a, u) == v && vs.apply(a, v) == u)
        throw std::invalid_argument(
            "make_tree_action: element " + g.name(a) + " inverts edge " +
            std::to_string(e));
      if (vs.apply(a, u) != t.edges[ae].first ||
          vs.apply(a, v) != t.edges[ae].second)
        throw std::invalid_argument(
            "make_tree_action: element " + g.name(a) +
            " does not commute with the endpoints of edge " +
            std::to_string(e));
    }
  return TreeAction{g, t, vs, es, vs.orbits(), es.orbits()};
}

TreeAction trivial_tree_action(const FinGroup& g, const Tree& t) {
  std::vector<int> vid(t.vertices), eid(t.edges.size());
  std::iota(vid.begin(), vid.end(), 0);
  std::iota(eid.begin(), eid.end(), 0);
  return make_tree_action(
      g, t, std::vector<std::vector<int>>(g.order(), vid),
      std::vector<std::vector<int>>(g.order(), eid));
}

TreeSES tree_ses(Int m, const TreeAction& ta) {
  if (m < 2) throw std::invalid_argument("tree_ses: modulus must be >= 2");
  const int nv = ta.tree.vertices;
  const int ne = static_cast<int>(ta.tree.edges.size());

  FinModule edge_mod = permutation_module(m, ta.edge_set);
  FinModule vertex_mod = permutation_module(m, ta.vertex_set);
  FinModule coeff =
      trivial_module(vertex_mod.ring(), FinAbGroup::cyclic(m), Side::left);

  IntMat mi(nv, ne);
  for (int e = 0; e < ne; ++e) {
    mi.at(ta.tree.edges[e].second, e) += 1;
    mi.at(ta.tree.edges[e].first, e) -= 1;
  }
  ModHom incl(edge_mod, vertex_mod,
              AbHom(edge_mod.group(), vertex_mod.group(), std::move(mi)));

  IntMat ma(1, nv);
  for (int v = 0; v < nv; ++v) ma.at(0, v) = 1;
  ModHom aug(vertex_mod, coeff,
             AbHom(vertex_mod.group(), coeff.group(), std::move(ma)));

  std::vector<AbHom> seq = {
      AbHom::zero(FinAbGroup::trivial(), edge_mod.group()), incl.hom(),
      aug.hom(), AbHom::zero(coeff.group(), FinAbGroup::trivial())};
  ExactnessResult ex = check_exact_all(seq);
  CheckResult result =
      ex.exact ? CheckResult{}
               : CheckResult{false, "tree_ses: sequence not exact (" +
                                        ex.witness->description +
                                        "); the graph is not a tree"};
  return TreeSES{std::move(result), std::move(edge_mod), std::move(vertex_mod),
                 std::move(coeff),  std::move(incl),     std::move(aug)};
}

LESReport mayer_vietoris_check(Int m, const TreeAction& ta, const FinModule& a,
                               int n_max) {
  const auto& info = a.ring().group_info();
  if (!info || !(info->basis_group == ta.group) || info->modulus != m)
    throw std::invalid_argument(
        "mayer_vietoris_check: coefficients must be a module over (Z/m)[G]");
  if (a.side() != Side::left)
    throw std::invalid_argument("mayer_vietoris_check: left modules only");
  if (n_max < 0)
    throw std::invalid_argument("mayer_vietoris_check: n_max must be >= 0");

  TreeSES ses = tree_ses(m, ta);
  if (!ses.result.ok) {
    LESReport rep;
    rep.ok = false;
    rep.witness = "mayer_vietoris_check: " + ses.result.witness;
    return rep;
  }

  LESReport rep = les_from_ses(ses.incl, ses.aug, a, n_max);

  auto fail = [&rep](const std::string& why) {
    if (rep.ok) {
      rep.ok = false;
      rep.witness = why;
    }
  };

  // Identify the three columns of the sequence with group cohomology.
  CohomologyResult barg = bar_cohomology(ta.group, a, n_max);

  // One Shapiro identification per orbit; collect the stabilizer cohomology.
  auto orbit_groups = [&](const GSet& pts, const std::vector<std::vector<int>>& orbits,
                          const char* what) {
    std::vector<std::vector<FinAbGroup>> per_degree(n_max + 1);
    for (const auto& orbit : orbits) {
      int rep_pt = orbit.front();
      ShapiroReport sr =
          shapiro_check(ta.group, pts.stabilizer(rep_pt), a, n_max);
      if (!sr.ok)
        fail("mayer_vietoris_check: Shapiro identification failed for the "
             "stabilizer of " + std::string(what) + " " +
             std::to_string(rep_pt) + ": " + sr.witness);
      for (int n = 0; n <= n_max; ++n)
        per_degree[n].push_back(sr.bar_side[n]);
    }
    std::vector<FinAbGroup> sums;
    sums.reserve(n_max + 1);
    for (int n = 0; n <= n_max; ++n)
      sums.push_back(direct_sum(per_degree[n]).sum);
    return sums;
  };
  std::vector<FinAbGroup> vert_h =
      orbit_groups(ta.vertex_set, ta.vertex_orbits, "vertex");
  std::vector<FinAbGroup> edge_h =
      orbit_groups(ta.edge_set, ta.edge_orbits, "edge");

  for (int n = 0; n <= n_max; ++n) {
    const std::string deg = std::to_string(n);
    if (!(rep.groups[3 * n] == barg.groups[n]))
      fail("mayer_vietoris_check: Ext^" + deg +
           " of the trivial module is " + rep.groups[3 * n].to_string() +
           " but H^" + deg + "(G, A) is " + barg.groups[n].to_string());
    if (!(rep.groups[3 * n + 1] == vert_h[n]))
      fail("mayer_vietoris_check: Ext^" + deg + " of the vertex module is " +
           rep.groups[3 * n + 1].to_string() +
           " but the vertex stabilizer cohomology sum is " +
           vert_h[n].to_string());
    if (!(rep.groups[3 * n + 2] == edge_h[n]))
      fail("mayer_vietoris_check: Ext^" + deg + " of the edge module is " +
           rep.groups[3 * n + 2].to_string() +
           " but the edge stabilizer cohomology sum is " +
           edge_h[n].to_string());
    rep.labels[3 * n] = "H^" + deg + "(G, A)";
    rep.labels[3 * n + 1] =
        "prod over vertex orbits of H^" + deg + "(Stab(v), A)";
    rep.labels[3 * n + 2] =
        "prod over edge orbits of H^" + deg + "(Stab(e), A)";
  }
  return rep;
}

}  // namespace stonemod
