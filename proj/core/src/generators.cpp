#include "stonemod/generators.hpp"

#include <numeric>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace stonemod {

Int Rng::below(Int n) {
  if (n < 1) throw std::invalid_argument("Rng::below: n must be positive");
  return static_cast<Int>(engine_() % static_cast<std::uint64_t>(n));
}

// ---------------------------------------------------------------------------

namespace {

void extend_chains(Int max_order, Int product, std::vector<Int>& chain,
                   std::vector<std::vector<Int>>& out) {
  out.push_back(chain);
  Int last = chain.empty() ? 1 : chain.back();
  // Next factor is a multiple of the last one (divisibility chain).
  for (Int d = last < 2 ? 2 : last; product * d <= max_order; d += last < 2 ? 1 : last) {
    if (d < 2) continue;
    chain.push_back(d);
    extend_chains(max_order, product * d, chain, out);
    chain.pop_back();
  }
}

}  // namespace

std::vector<FinAbGroup> abelian_catalogue(Int max_order) {
  if (max_order < 1) throw std::invalid_argument("abelian_catalogue: max_order must be positive");
  std::vector<std::vector<Int>> chains;
  std::vector<Int> work;
  extend_chains(max_order, 1, work, chains);
  std::vector<std::pair<Int, std::vector<Int>>> keyed;
  keyed.reserve(chains.size());
  for (auto& c : chains) {
    Int order = 1;
    for (Int d : c) order *= d;
    keyed.emplace_back(order, std::move(c));
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<FinAbGroup> out;
  out.reserve(keyed.size());
  for (auto& [order, c] : keyed) out.push_back(FinAbGroup(std::move(c)));
  return out;
}

FinAbGroup random_abelian(Rng& rng, Int max_order) {
  std::vector<FinAbGroup> cat = abelian_catalogue(max_order);
  return cat[rng.index(static_cast<int>(cat.size()))];
}

FinAbGroup random_abelian_dividing(Rng& rng, Int max_order, Int m) {
  std::vector<FinAbGroup> cat = abelian_catalogue(max_order);
  std::vector<FinAbGroup> fit;
  for (auto& g : cat)
    if (m % g.exponent() == 0) fit.push_back(g);
  return fit[rng.index(static_cast<int>(fit.size()))];
}

GroupElem random_element(Rng& rng, const FinAbGroup& g) {
  GroupElem e = g.zero();
  for (int i = 0; i < g.rank(); ++i) e.residues[i] = rng.below(g.invariant_factors()[i]);
  return e;
}

AbHom random_hom(Rng& rng, const FinAbGroup& a, const FinAbGroup& b) {
  HomGroupZ hz = hom_group_z(a, b);
  return hz.to_hom(random_element(rng, hz.group));
}

AbelianSES random_abelian_ses(Rng& rng, Int max_order) {
  FinAbGroup mid = random_abelian(rng, max_order);
  FinAbGroup probe = random_abelian(rng, max_order);
  HomKio k = hom_kio(random_hom(rng, probe, mid));
  HomKio c = hom_kio(k.image_incl);
  return AbelianSES{k.image, mid, c.cokernel, k.image_incl, c.cokernel_proj};
}

// ---------------------------------------------------------------------------

LevelChain random_chain(Rng& rng, int levels, int max_size) {
  if (levels < 1 || max_size < 1)
    throw std::invalid_argument("random_chain: need at least one level and one point");
  std::vector<int> sizes(levels);
  sizes[0] = 1 + rng.index(max_size);
  for (int i = 1; i < levels; ++i) sizes[i] = sizes[i - 1] + rng.index(max_size - sizes[i - 1] + 1);
  std::vector<std::vector<int>> projections;
  for (int i = 0; i + 1 < levels; ++i) {
    std::vector<int> p(sizes[i + 1]);
    // The first sizes[i] points map identically, which forces surjectivity;
    // the rest land anywhere.
    for (int y = 0; y < sizes[i + 1]; ++y)
      p[y] = y < sizes[i] ? y : rng.index(sizes[i]);
    projections.push_back(std::move(p));
  }
  return LevelChain(std::move(sizes), std::move(projections));
}

namespace {

// Fibres for one chain: fibres[i][x] is a module over cyclic_ring(m).
std::vector<std::vector<FinModule>> random_fibres(Rng& rng, const LevelChain& chain,
                                                  const FiniteRing& ring, Int max_fibre,
                                                  Int m) {
  std::vector<std::vector<FinModule>> fibres(chain.levels());
  for (int i = 0; i < chain.levels(); ++i)
    for (int x = 0; x < chain.size(i); ++x)
      fibres[i].push_back(trivial_module(ring, random_abelian_dividing(rng, max_fibre, m),
                                         Side::left));
  return fibres;
}

}  // namespace

EtaleSystem random_etale(Rng& rng, const LevelChain& chain, Int m, Int max_fibre) {
  FiniteRing ring = cyclic_ring(m);
  auto fibres = random_fibres(rng, chain, ring, max_fibre, m);
  std::vector<std::vector<ModHom>> trans(chain.levels() - 1);
  for (int i = 0; i + 1 < chain.levels(); ++i)
    for (int x = 0; x < chain.size(i + 1); ++x) {
      const FinModule& src = fibres[i][chain.project_point(i + 1, x, i)];
      const FinModule& tgt = fibres[i + 1][x];
      trans[i].push_back(ModHom(src, tgt, random_hom(rng, src.group(), tgt.group())));
    }
  return EtaleSystem(chain, ring, Side::left, std::move(fibres), std::move(trans));
}

ProSheafSystem random_prosheaf(Rng& rng, const LevelChain& chain, Int m, Int max_fibre) {
  FiniteRing ring = cyclic_ring(m);
  auto fibres = random_fibres(rng, chain, ring, max_fibre, m);
  std::vector<std::vector<ModHom>> trans(chain.levels() - 1);
  for (int i = 0; i + 1 < chain.levels(); ++i)
    for (int x = 0; x < chain.size(i + 1); ++x) {
      const FinModule& src = fibres[i + 1][x];
      const FinModule& tgt = fibres[i][chain.project_point(i + 1, x, i)];
      trans[i].push_back(ModHom(src, tgt, random_hom(rng, src.group(), tgt.group())));
    }
  return ProSheafSystem(chain, ring, Side::left, std::move(fibres), std::move(trans));
}

// ---------------------------------------------------------------------------

namespace {

int popcount(int mask) {
  int c = 0;
  for (; mask; mask >>= 1) c += mask & 1;
  return c;
}

// Common draw for both table kinds: point fibres, per-mask defects (skipped
// at singletons), the joint ring, and the per-mask value modules with their
// sum structure.  parts[mask] lists the fibres over the mask in ascending
// point order, with the defect appended last when nontrivial.
struct TableDraw {
  FiniteRing ring;
  std::vector<FinAbGroup> fibres, defects;
  std::vector<FinModule> values;
  std::vector<ModuleSum> sums;
  std::vector<std::vector<int>> member;  // member[mask] = points of the mask
  bool clean = true;                     // no nontrivial defect anywhere
};

TableDraw draw_table(Rng& rng, int points, Int max_fibre, int defect_percent) {
  if (points < 0 || points > 4)
    throw std::invalid_argument("draw_table: at most 4 points");
  int masks = 1 << points;
  TableDraw t{cyclic_ring(2), {}, {}, {}, {}, {}, true};
  for (int x = 0; x < points; ++x) t.fibres.push_back(random_abelian(rng, max_fibre));
  for (int mask = 0; mask < masks; ++mask) {
    if (popcount(mask) != 1 && rng.chance(defect_percent)) {
      t.defects.push_back(random_abelian(rng, max_fibre));
      if (!t.defects.back().is_trivial()) t.clean = false;
    } else {
      t.defects.push_back(FinAbGroup::trivial());
    }
  }
  Int m = 1;
  for (auto& f : t.fibres) m = std::lcm(m, f.exponent());
  for (auto& d : t.defects) m = std::lcm(m, d.exponent());
  if (m < 2) m = 2;
  t.ring = cyclic_ring(m);
  for (int mask = 0; mask < masks; ++mask) {
    std::vector<FinModule> parts;
    std::vector<int> member;
    for (int x = 0; x < points; ++x)
      if (mask & (1 << x)) {
        parts.push_back(trivial_module(t.ring, t.fibres[x], Side::left));
        member.push_back(x);
      }
    if (!t.defects[mask].is_trivial())
      parts.push_back(trivial_module(t.ring, t.defects[mask], Side::left));
    ModuleSum s = module_direct_sum(t.ring, Side::left, parts);
    t.values.push_back(s.sum);
    t.sums.push_back(std::move(s));
    t.member.push_back(std::move(member));
  }
  return t;
}

// Position of point x inside the mask's ascending member list.
int slot_of(const std::vector<int>& member, int x) {
  for (size_t k = 0; k < member.size(); ++k)
    if (member[k] == x) return static_cast<int>(k);
  throw std::logic_error("slot_of: point not in mask");
}

}  // namespace

PresheafDraw random_presheaf_table(Rng& rng, int points, Int max_fibre,
                                   int defect_percent) {
  TableDraw t = draw_table(rng, points, max_fibre, defect_percent);
  int masks = 1 << points;
  std::vector<std::tuple<int, int, ModHom>> res;
  for (int v = 0; v < masks; ++v)
    for (int u = 0; u < v; ++u) {
      if ((u & v) != u) continue;
      // Project the shared fibres, kill everything else (defects included).
      ModHom r = ModHom::zero(t.values[v], t.values[u]);
      for (int x : t.member[u])
        r = mod_add(r, mod_compose(t.sums[u].inj[slot_of(t.member[u], x)],
                                   t.sums[v].proj[slot_of(t.member[v], x)]));
      res.emplace_back(v, u, std::move(r));
    }
  PresheafTable table(LevelChain::single(points), 0, t.values, res);
  return PresheafDraw{std::move(table), t.clean, std::move(t.fibres), std::move(t.defects)};
}

CosheafDraw random_cosheaf_table(Rng& rng, int points, Int max_fibre,
                                 int defect_percent) {
  TableDraw t = draw_table(rng, points, max_fibre, defect_percent);
  int masks = 1 << points;
  std::vector<std::tuple<int, int, ModHom>> cor;
  for (int v = 0; v < masks; ++v)
    for (int u = 0; u < v; ++u) {
      if ((u & v) != u) continue;
      // Include the shared fibres into their slots; defects go nowhere.
      ModHom c = ModHom::zero(t.values[u], t.values[v]);
      for (int x : t.member[u])
        c = mod_add(c, mod_compose(t.sums[v].inj[slot_of(t.member[v], x)],
                                   t.sums[u].proj[slot_of(t.member[u], x)]));
      cor.emplace_back(u, v, std::move(c));
    }
  CosheafTable table(LevelChain::single(points), 0, t.values, cor);
  return CosheafDraw{std::move(table), t.clean, std::move(t.fibres), std::move(t.defects)};
}

PresheafTable product_presheaf(const LevelChain& chain, int level, Int m,
                               const std::vector<FinAbGroup>& fibres) {
  int points = chain.size(level);
  if (static_cast<int>(fibres.size()) != points)
    throw std::invalid_argument("product_presheaf: one fibre per point expected");
  FiniteRing ring = cyclic_ring(m);
  int masks = 1 << points;
  std::vector<FinModule> values;
  std::vector<ModuleSum> sums;
  std::vector<std::vector<int>> member(masks);
  for (int mask = 0; mask < masks; ++mask) {
    std::vector<FinModule> parts;
    for (int x = 0; x < points; ++x)
      if (mask & (1 << x)) {
        parts.push_back(trivial_module(ring, fibres[x], Side::left));
        member[mask].push_back(x);
      }
    ModuleSum s = module_direct_sum(ring, Side::left, parts);
    values.push_back(s.sum);
    sums.push_back(std::move(s));
  }
  std::vector<std::tuple<int, int, ModHom>> res;
  for (int v = 0; v < masks; ++v)
    for (int u = 0; u < v; ++u) {
      if ((u & v) != u) continue;
      ModHom r = ModHom::zero(values[v], values[u]);
      for (int x : member[u])
        r = mod_add(r, mod_compose(sums[u].inj[slot_of(member[u], x)],
                                   sums[v].proj[slot_of(member[v], x)]));
      res.emplace_back(v, u, std::move(r));
    }
  return PresheafTable(chain, level, std::move(values), res);
}

PresheafTable gluing_counterexample() {
  FiniteRing ring = cyclic_ring(2);
  FinModule zero = zero_module(ring, Side::left);
  FinModule z2 = trivial_module(ring, FinAbGroup::cyclic(2), Side::left);
  // A(empty) = 0, A({0}) = A({1}) = Z/2, A(X) = 0: every restriction is
  // forced, so the table is functorial, but nothing glues over X.
  return PresheafTable(LevelChain::single(2), 0, {zero, z2, z2, zero}, {});
}

CosheafTable cogluing_counterexample() {
  FiniteRing ring = cyclic_ring(4);
  FinModule zero = zero_module(ring, Side::left);
  FinModule z2 = trivial_module(ring, FinAbGroup::cyclic(2), Side::left);
  FinModule z4 = trivial_module(ring, FinAbGroup::cyclic(4), Side::left);
  IntMat twice = IntMat::from_rows({{2}});
  ModHom double0(z2, z4, AbHom(z2.group(), z4.group(), twice));
  ModHom double1 = double0;
  return CosheafTable(LevelChain::single(2), 0, {zero, z2, z2, z4},
                      {{1, 3, double0}, {2, 3, double1}});
}

}  // namespace stonemod
