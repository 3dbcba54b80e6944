#include "stonemod/duality.hpp"

#include <map>
#include <random>
#include <stdexcept>
#include <utility>

namespace stonemod {

namespace {

Side flipped(Side s) { return s == Side::left ? Side::right : Side::left; }

std::string at_point(int level, int x) {
  return "level " + std::to_string(level) + ", point " + std::to_string(x);
}

std::string at_level(int level) { return "level " + std::to_string(level); }

}  // namespace

// ---------------------------------------------------------------------------
// Pointwise dualization.

ProSheafSystem dual_etale_to_prosheaf(const EtaleSystem& e) {
  std::vector<std::vector<FinModule>> fibres(e.levels());
  for (int i = 0; i < e.levels(); ++i) {
    fibres[i].reserve(e.chain().size(i));
    for (int x = 0; x < e.chain().size(i); ++x) fibres[i].push_back(dual_module(e.fibre(i, x)));
  }
  std::vector<std::vector<ModHom>> trans(std::max(0, e.levels() - 1));
  for (int i = 0; i + 1 < e.levels(); ++i) {
    trans[i].reserve(e.chain().size(i + 1));
    for (int x = 0; x < e.chain().size(i + 1); ++x)
      trans[i].push_back(dual_modhom(e.transition_step(i, x)));
  }
  return ProSheafSystem(e.chain(), e.ring(), flipped(e.side()), std::move(fibres),
                        std::move(trans));
}

EtaleSystem dual_prosheaf_to_etale(const ProSheafSystem& s) {
  std::vector<std::vector<FinModule>> fibres(s.levels());
  for (int i = 0; i < s.levels(); ++i) {
    fibres[i].reserve(s.chain().size(i));
    for (int x = 0; x < s.chain().size(i); ++x) fibres[i].push_back(dual_module(s.fibre(i, x)));
  }
  std::vector<std::vector<ModHom>> trans(std::max(0, s.levels() - 1));
  for (int i = 0; i + 1 < s.levels(); ++i) {
    trans[i].reserve(s.chain().size(i + 1));
    for (int x = 0; x < s.chain().size(i + 1); ++x)
      trans[i].push_back(dual_modhom(s.transition_step(i, x)));
  }
  return EtaleSystem(s.chain(), s.ring(), flipped(s.side()), std::move(fibres), std::move(trans));
}

CosheafTable dual_presheaf_table(const PresheafTable& p) {
  int n = 1 << p.points();
  std::vector<FinModule> values;
  values.reserve(n);
  for (int mask = 0; mask < n; ++mask) values.push_back(dual_module(p.value(mask)));
  std::vector<std::tuple<int, int, ModHom>> cor;
  for (int v = 1; v < n; ++v)
    for (int u = (v - 1) & v;; u = (u - 1) & v) {
      cor.emplace_back(u, v, dual_modhom(p.res(v, u)));
      if (u == 0) break;
    }
  return CosheafTable(p.chain(), p.level(), std::move(values), cor);
}

PresheafTable dual_cosheaf_table(const CosheafTable& c) {
  int n = 1 << c.points();
  std::vector<FinModule> values;
  values.reserve(n);
  for (int mask = 0; mask < n; ++mask) values.push_back(dual_module(c.value(mask)));
  std::vector<std::tuple<int, int, ModHom>> res;
  for (int v = 1; v < n; ++v)
    for (int u = (v - 1) & v;; u = (u - 1) & v) {
      res.emplace_back(v, u, dual_modhom(c.cor(u, v)));
      if (u == 0) break;
    }
  return PresheafTable(c.chain(), c.level(), std::move(values), res);
}

// ---------------------------------------------------------------------------
// Fibrewise soundness.

CheckResult fibre_duality_check(const EtaleSystem& e) {
  ProSheafSystem d = dual_etale_to_prosheaf(e);
  if (d.side() != flipped(e.side())) return {false, "dualizing did not flip the module side"};
  for (int i = 0; i < e.levels(); ++i)
    for (int x = 0; x < e.chain().size(i); ++x) {
      if (!(d.fibre(i, x) == dual_module(e.fibre(i, x))))
        return {false, "fibre at " + at_point(i, x) + " is not the character module"};
      if (d.fibre(i, x).group().order() != e.fibre(i, x).group().order())
        return {false, "character module at " + at_point(i, x) + " changed the order"};
      if (!double_dual_check(e.fibre(i, x).group()))
        return {false, "evaluation pairing is degenerate at " + at_point(i, x)};
    }
  for (int i = 0; i + 1 < e.levels(); ++i)
    for (int x = 0; x < e.chain().size(i + 1); ++x)
      if (!(d.transition_step(i, x) == dual_modhom(e.transition_step(i, x))))
        return {false,
                "transition into " + at_point(i + 1, x) + " does not dualize to the stored map"};
  EtaleSystem dd = dual_prosheaf_to_etale(d);
  if (dd.side() != e.side()) return {false, "double dual changed the module side"};
  for (int i = 0; i < e.levels(); ++i)
    for (int x = 0; x < e.chain().size(i); ++x)
      if (!(dd.fibre(i, x) == e.fibre(i, x)))
        return {false, "double dual does not return the fibre at " + at_point(i, x)};
  for (int i = 0; i + 1 < e.levels(); ++i)
    for (int x = 0; x < e.chain().size(i + 1); ++x)
      if (!(dd.transition_step(i, x) == e.transition_step(i, x)))
        return {false, "double dual does not return the transition into " + at_point(i + 1, x)};
  return {};
}

CheckResult fibre_duality_check(const ProSheafSystem& s) {
  EtaleSystem d = dual_prosheaf_to_etale(s);
  if (d.side() != flipped(s.side())) return {false, "dualizing did not flip the module side"};
  for (int i = 0; i < s.levels(); ++i)
    for (int x = 0; x < s.chain().size(i); ++x) {
      if (!(d.fibre(i, x) == dual_module(s.fibre(i, x))))
        return {false, "fibre at " + at_point(i, x) + " is not the character module"};
      if (d.fibre(i, x).group().order() != s.fibre(i, x).group().order())
        return {false, "character module at " + at_point(i, x) + " changed the order"};
      if (!double_dual_check(s.fibre(i, x).group()))
        return {false, "evaluation pairing is degenerate at " + at_point(i, x)};
    }
  for (int i = 0; i + 1 < s.levels(); ++i)
    for (int x = 0; x < s.chain().size(i + 1); ++x)
      if (!(d.transition_step(i, x) == dual_modhom(s.transition_step(i, x))))
        return {false,
                "transition out of " + at_point(i + 1, x) + " does not dualize to the stored map"};
  ProSheafSystem dd = dual_etale_to_prosheaf(d);
  if (dd.side() != s.side()) return {false, "double dual changed the module side"};
  for (int i = 0; i < s.levels(); ++i)
    for (int x = 0; x < s.chain().size(i); ++x)
      if (!(dd.fibre(i, x) == s.fibre(i, x)))
        return {false, "double dual does not return the fibre at " + at_point(i, x)};
  for (int i = 0; i + 1 < s.levels(); ++i)
    for (int x = 0; x < s.chain().size(i + 1); ++x)
      if (!(dd.transition_step(i, x) == s.transition_step(i, x)))
        return {false, "double dual does not return the transition out of " + at_point(i + 1, x)};
  return {};
}

// ---------------------------------------------------------------------------
// The sum/product comparison.

DualityWitness sum_product_duality_check(const EtaleSystem& e, Int pairing_cap) {
  DualityWitness w;
  ProSheafSystem dual = dual_etale_to_prosheaf(e);
  ProfiniteSum sums = profinite_direct_sum(dual);
  DiscreteChainModule sections = global_sections(e);

  for (int i = 0; i < e.levels(); ++i) {
    const FinModule& sum_module = sums.module.levels[i];
    const FinModule& prod_module = sections.levels[i];
    if (sum_module.group().order() != prod_module.group().order()) {
      w.ok = false;
      w.witness = "orders differ at " + at_level(i) + ": the sum of characters has order " +
                  std::to_string(sum_module.group().order()) + ", the sections have order " +
                  std::to_string(prod_module.group().order());
      return w;
    }
    FinModule prod_dual = dual_module(prod_module);
    int npts = e.chain().size(i);
    std::vector<AbHom> comps;
    std::vector<ModHom> fibre_chars;
    comps.reserve(npts);
    fibre_chars.reserve(npts);
    for (int x = 0; x < npts; ++x) {
      AbHom chi = dual_hom(sections.sums[i].proj[x].hom());
      comps.push_back(chi);
      fibre_chars.emplace_back(dual.fibre(i, x), prod_dual, chi);
    }
    AbHom theta = out_of_sum_to(prod_dual.group(), sums.module.sums[i].group_sum, comps);
    // The constructor validates that theta is balanced over the ring.
    ModHom theta_mod(sum_module, prod_dual, theta);
    if (!is_isomorphism(theta)) {
      w.ok = false;
      w.witness = "comparison map at " + at_level(i) + " is not bijective";
      return w;
    }
    w.level_isos.push_back(std::move(theta_mod));
    w.fibre_characters.push_back(std::move(fibre_chars));
  }

  // theta must intertwine the connecting maps of the two towers.
  for (int i = 0; i + 1 < e.levels(); ++i) {
    AbHom lhs = compose(w.level_isos[i].hom(), sums.module.maps[i].hom());
    AbHom rhs = compose(dual_hom(sections.maps[i].hom()), w.level_isos[i + 1].hom());
    if (!(lhs == rhs)) {
      w.ok = false;
      w.witness = "comparison maps do not intertwine the connecting maps between levels " +
                  std::to_string(i) + " and " + std::to_string(i + 1);
      return w;
    }
  }

  // Explicit pairing on the levels small enough to tabulate.
  for (int i = 0; i < e.levels(); ++i) {
    const FinModule& sum_module = sums.module.levels[i];
    const FinModule& prod_module = sections.levels[i];
    const FinAbGroup& sum_grp = sum_module.group();
    const FinAbGroup& prod_grp = prod_module.group();
    if (prod_grp.order() > pairing_cap) continue;
    Int period = prod_grp.exponent();
    const AbHom& theta = w.level_isos[i].hom();

    std::vector<GroupElem> chis = sum_grp.elements();
    std::vector<GroupElem> secs = prod_grp.elements();
    std::map<std::vector<Int>, int> chi_idx, sec_idx;
    for (size_t a = 0; a < chis.size(); ++a) chi_idx[chis[a].residues] = static_cast<int>(a);
    for (size_t b = 0; b < secs.size(); ++b) sec_idx[secs[b].residues] = static_cast<int>(b);

    std::vector<std::vector<Int>> table(chis.size(), std::vector<Int>(secs.size(), 0));
    int npts = e.chain().size(i);
    for (size_t a = 0; a < chis.size(); ++a)
      for (size_t b = 0; b < secs.size(); ++b) {
        table[a][b] = pairing_num(prod_grp, theta.apply(chis[a]), secs[b]);
        // The fibrewise sum formula must produce the same value.
        Int direct = 0;
        for (int x = 0; x < npts; ++x) {
          const FinAbGroup& ax = e.fibre(i, x).group();
          GroupElem cx = sums.module.sums[i].group_sum.proj[x].apply(chis[a]);
          GroupElem sx = sections.sums[i].group_sum.proj[x].apply(secs[b]);
          direct += pairing_num(ax, cx, sx) * (period / ax.exponent());
        }
        if (table[a][b] != direct % period) {
          w.ok = false;
          w.witness = "pairing at " + at_level(i) + " is not the fibrewise sum on pair (" +
                      std::to_string(a) + ", " + std::to_string(b) + ")";
          return w;
        }
      }

    // Biadditive in each slot.
    for (size_t a = 0; a < chis.size(); ++a)
      for (size_t a2 = 0; a2 < chis.size(); ++a2) {
        int asum = chi_idx.at(sum_grp.add(chis[a], chis[a2]).residues);
        for (size_t b = 0; b < secs.size(); ++b)
          if (table[asum][b] != (table[a][b] + table[a2][b]) % period) {
            w.ok = false;
            w.witness = "pairing at " + at_level(i) + " is not additive in the character slot";
            return w;
          }
      }
    for (size_t b = 0; b < secs.size(); ++b)
      for (size_t b2 = 0; b2 < secs.size(); ++b2) {
        int bsum = sec_idx.at(prod_grp.add(secs[b], secs[b2]).residues);
        for (size_t a = 0; a < chis.size(); ++a)
          if (table[a][bsum] != (table[a][b] + table[a][b2]) % period) {
            w.ok = false;
            w.witness = "pairing at " + at_level(i) + " is not additive in the section slot";
            return w;
          }
      }

    // Nondegenerate on both sides.
    for (size_t a = 0; a < chis.size(); ++a) {
      if (chis[a] == sum_grp.zero()) continue;
      bool hit = false;
      for (size_t b = 0; b < secs.size() && !hit; ++b) hit = table[a][b] != 0;
      if (!hit) {
        w.ok = false;
        w.witness = "pairing at " + at_level(i) + " is degenerate: a nonzero character pairs " +
                    "to zero with every section";
        return w;
      }
    }
    for (size_t b = 0; b < secs.size(); ++b) {
      if (secs[b] == prod_grp.zero()) continue;
      bool hit = false;
      for (size_t a = 0; a < chis.size() && !hit; ++a) hit = table[a][b] != 0;
      if (!hit) {
        w.ok = false;
        w.witness = "pairing at " + at_level(i) + " is degenerate: a nonzero section pairs " +
                    "to zero with every character";
        return w;
      }
    }

    // Balanced over the ring: <chi r, s> = <chi, r s> on additive generators.
    for (int k = 0; k < e.ring().rank(); ++k) {
      const AbHom& act_sum = sum_module.action_gen(k);
      const AbHom& act_prod = prod_module.action_gen(k);
      for (size_t a = 0; a < chis.size(); ++a) {
        int ar = chi_idx.at(act_sum.apply(chis[a]).residues);
        for (size_t b = 0; b < secs.size(); ++b) {
          int rb = sec_idx.at(act_prod.apply(secs[b]).residues);
          if (table[ar][b] != table[a][rb]) {
            w.ok = false;
            w.witness = "pairing at " + at_level(i) + " is not balanced over ring generator " +
                        std::to_string(k);
            return w;
          }
        }
      }
    }

    if (i == e.levels() - 1) w.top_pairing = std::move(table);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Both paths around the comparison square.

namespace {

// The doubled system with fibres A_x (+) A_x and transitions T (+) T, along
// with the per-fibre sums used to build maps in and out of it.
struct DoubledEtale {
  std::vector<std::vector<ModuleSum>> packs;
  EtaleSystem system;
};

DoubledEtale double_etale(const EtaleSystem& e) {
  std::vector<std::vector<ModuleSum>> packs(e.levels());
  std::vector<std::vector<FinModule>> fibres(e.levels());
  for (int i = 0; i < e.levels(); ++i)
    for (int x = 0; x < e.chain().size(i); ++x) {
      packs[i].push_back(module_direct_sum(e.ring(), e.side(), {e.fibre(i, x), e.fibre(i, x)}));
      fibres[i].push_back(packs[i].back().sum);
    }
  std::vector<std::vector<ModHom>> trans(std::max(0, e.levels() - 1));
  for (int i = 0; i + 1 < e.levels(); ++i)
    for (int x = 0; x < e.chain().size(i + 1); ++x) {
      int fx = e.chain().project_point(i + 1, x, i);
      const AbHom& t = e.transition_step(i, x).hom();
      const ModuleSum& src = packs[i][fx];
      const ModuleSum& dst = packs[i + 1][x];
      AbHom h = out_of_sum_to(dst.sum.group(), src.group_sum,
                              {compose(dst.inj[0].hom(), t), compose(dst.inj[1].hom(), t)});
      trans[i].emplace_back(src.sum, dst.sum, h);
    }
  return {std::move(packs),
          EtaleSystem(e.chain(), e.ring(), e.side(), std::move(fibres), std::move(trans))};
}

struct DoubledPro {
  std::vector<std::vector<ModuleSum>> packs;
  ProSheafSystem system;
};

DoubledPro double_pro(const ProSheafSystem& s) {
  std::vector<std::vector<ModuleSum>> packs(s.levels());
  std::vector<std::vector<FinModule>> fibres(s.levels());
  for (int i = 0; i < s.levels(); ++i)
    for (int x = 0; x < s.chain().size(i); ++x) {
      packs[i].push_back(module_direct_sum(s.ring(), s.side(), {s.fibre(i, x), s.fibre(i, x)}));
      fibres[i].push_back(packs[i].back().sum);
    }
  std::vector<std::vector<ModHom>> trans(std::max(0, s.levels() - 1));
  for (int i = 0; i + 1 < s.levels(); ++i)
    for (int x = 0; x < s.chain().size(i + 1); ++x) {
      int fx = s.chain().project_point(i + 1, x, i);
      const AbHom& t = s.transition_step(i, x).hom();
      const ModuleSum& src = packs[i + 1][x];
      const ModuleSum& dst = packs[i][fx];
      AbHom h = out_of_sum_to(dst.sum.group(), src.group_sum,
                              {compose(dst.inj[0].hom(), t), compose(dst.inj[1].hom(), t)});
      trans[i].emplace_back(src.sum, dst.sum, h);
    }
  return {std::move(packs),
          ProSheafSystem(s.chain(), s.ring(), s.side(), std::move(fibres), std::move(trans))};
}

// phi_x = (id, c id) : A_x -> A_x (+) A_x.
ModHom diagonal_scalar(const FinModule& a, const ModuleSum& pack, Int c) {
  return ModHom(a, pack.sum, hom_add(pack.inj[0].hom(), hom_scale(c, pack.inj[1].hom())));
}

}  // namespace

CheckResult square_commutes_check(const EtaleSystem& e, unsigned seed) {
  DualityWitness w = sum_product_duality_check(e);
  if (!w.ok) return {false, w.witness};

  std::mt19937 rng(seed);
  Int c = std::uniform_int_distribution<Int>(0, 11)(rng);

  DoubledEtale d = double_etale(e);
  const EtaleSystem& e2 = d.system;

  std::vector<std::vector<ModHom>> phi(e.levels());
  for (int i = 0; i < e.levels(); ++i)
    for (int x = 0; x < e.chain().size(i); ++x)
      phi[i].push_back(diagonal_scalar(e.fibre(i, x), d.packs[i][x], c));
  for (int i = 0; i + 1 < e.levels(); ++i)
    for (int x = 0; x < e.chain().size(i + 1); ++x) {
      int fx = e.chain().project_point(i + 1, x, i);
      if (!(mod_compose(e2.transition_step(i, x), phi[i][fx]) ==
            mod_compose(phi[i + 1][x], e.transition_step(i, x))))
        return {false, "seeded morphism is not compatible with the transitions"};
    }

  DualityWitness w2 = sum_product_duality_check(e2);
  if (!w2.ok) return {false, "doubled system: " + w2.witness};

  ProfiniteSum sum1 = profinite_direct_sum(dual_etale_to_prosheaf(e));
  ProfiniteSum sum2 = profinite_direct_sum(dual_etale_to_prosheaf(e2));
  DiscreteChainModule gs1 = global_sections(e);
  DiscreteChainModule gs2 = global_sections(e2);

  for (int i = 0; i < e.levels(); ++i) {
    int npts = e.chain().size(i);
    std::vector<AbHom> pcomps, scomps;
    pcomps.reserve(npts);
    scomps.reserve(npts);
    for (int x = 0; x < npts; ++x) {
      pcomps.push_back(compose(phi[i][x].hom(), gs1.sums[i].group_sum.proj[x]));
      scomps.push_back(
          compose(sum1.module.sums[i].group_sum.inj[x], dual_hom(phi[i][x].hom())));
    }
    AbHom prod_phi =
        into_product_from(gs1.levels[i].group(), gs2.sums[i].group_sum, pcomps);
    AbHom sum_phidual =
        out_of_sum_to(sum1.module.levels[i].group(), sum2.module.sums[i].group_sum, scomps);
    AbHom lhs = compose(w.level_isos[i].hom(), sum_phidual);
    AbHom rhs = compose(dual_hom(prod_phi), w2.level_isos[i].hom());
    if (!(lhs == rhs))
      return {false, "naturality square for the seeded morphism fails at " + at_level(i)};
  }
  return {};
}

CheckResult square_commutes_check(const ProSheafSystem& s, unsigned seed) {
  // The mirrored comparison at each level: ((+)_x M_x)^v -> prod_x (M_x)^v
  // assembled from the characters of the canonical embeddings.
  EtaleSystem dual = dual_prosheaf_to_etale(s);
  ProfiniteSum sums = profinite_direct_sum(s);
  DiscreteChainModule gs = global_sections(dual);

  auto comparison = [](const ProfiniteSum& sm, const DiscreteChainModule& g, int i) {
    FinModule sum_dual = dual_module(sm.module.levels[i]);
    int npts = static_cast<int>(sm.module.sums[i].group_sum.inj.size());
    std::vector<AbHom> comps;
    comps.reserve(npts);
    for (int x = 0; x < npts; ++x)
      comps.push_back(dual_hom(sm.module.sums[i].group_sum.inj[x]));
    AbHom theta = into_product_from(sum_dual.group(), g.sums[i].group_sum, comps);
    return ModHom(sum_dual, g.levels[i], theta);
  };

  std::vector<ModHom> isos;
  for (int i = 0; i < s.levels(); ++i) {
    ModHom theta = comparison(sums, gs, i);
    if (!is_isomorphism(theta.hom()))
      return {false, "comparison map at " + at_level(i) + " is not bijective"};
    isos.push_back(std::move(theta));
  }
  for (int i = 0; i + 1 < s.levels(); ++i) {
    AbHom lhs = compose(gs.maps[i].hom(), isos[i].hom());
    AbHom rhs = compose(isos[i + 1].hom(), dual_hom(sums.module.maps[i].hom()));
    if (!(lhs == rhs))
      return {false, "comparison maps do not intertwine the connecting maps between levels " +
                         std::to_string(i) + " and " + std::to_string(i + 1)};
  }

  std::mt19937 rng(seed);
  Int c = std::uniform_int_distribution<Int>(0, 11)(rng);

  DoubledPro d = double_pro(s);
  const ProSheafSystem& s2 = d.system;
  std::vector<std::vector<ModHom>> psi(s.levels());
  for (int i = 0; i < s.levels(); ++i)
    for (int x = 0; x < s.chain().size(i); ++x)
      psi[i].push_back(diagonal_scalar(s.fibre(i, x), d.packs[i][x], c));
  for (int i = 0; i + 1 < s.levels(); ++i)
    for (int x = 0; x < s.chain().size(i + 1); ++x) {
      int fx = s.chain().project_point(i + 1, x, i);
      if (!(mod_compose(s2.transition_step(i, x), psi[i + 1][x]) ==
            mod_compose(psi[i][fx], s.transition_step(i, x))))
        return {false, "seeded morphism is not compatible with the transitions"};
    }

  EtaleSystem dual2 = dual_prosheaf_to_etale(s2);
  ProfiniteSum sums2 = profinite_direct_sum(s2);
  DiscreteChainModule gs2 = global_sections(dual2);
  std::vector<ModHom> isos2;
  for (int i = 0; i < s.levels(); ++i) {
    ModHom theta = comparison(sums2, gs2, i);
    if (!is_isomorphism(theta.hom()))
      return {false, "comparison map of the doubled system at " + at_level(i) +
                         " is not bijective"};
    isos2.push_back(std::move(theta));
  }

  for (int i = 0; i < s.levels(); ++i) {
    int npts = s.chain().size(i);
    // (+) psi : (+) M_x -> (+) (M_x (+) M_x), then characters.
    std::vector<AbHom> scomps, pcomps;
    scomps.reserve(npts);
    pcomps.reserve(npts);
    for (int x = 0; x < npts; ++x) {
      scomps.push_back(compose(sums2.module.sums[i].group_sum.inj[x], psi[i][x].hom()));
      pcomps.push_back(compose(dual_hom(psi[i][x].hom()), gs2.sums[i].group_sum.proj[x]));
    }
    AbHom sum_psi =
        out_of_sum_to(sums2.module.levels[i].group(), sums.module.sums[i].group_sum, scomps);
    AbHom prod_psidual =
        into_product_from(gs2.levels[i].group(), gs.sums[i].group_sum, pcomps);
    AbHom lhs = compose(isos[i].hom(), dual_hom(sum_psi));
    AbHom rhs = compose(prod_psidual, isos2[i].hom());
    if (!(lhs == rhs))
      return {false, "naturality square for the seeded morphism fails at " + at_level(i)};
  }
  return {};
}

}  // namespace stonemod
