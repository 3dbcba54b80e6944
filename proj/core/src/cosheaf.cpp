#include "stonemod/cosheaf.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace stonemod {

namespace {

std::string mask_str(int mask) {
  std::string s = "{";
  bool first = true;
  for (int k = 0; (mask >> k) != 0; ++k)
    if ((mask >> k) & 1) {
      if (!first) s += ",";
      s += std::to_string(k);
      first = false;
    }
  return s + "}";
}

std::string elem_str(const GroupElem& a) {
  std::string s = "(";
  for (size_t i = 0; i < a.residues.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a.residues[i]);
  }
  return s + ")";
}

bool is_zero_mod(const FinModule& m) { return m.group().rank() == 0; }

// The clopen (as a mask at the table's level t) attached to a point y of
// level j: the singleton image for j >= t, the block over y for j < t.
int attached_mask(const LevelChain& chain, int t, int j, int y) {
  if (j >= t) return 1 << chain.project_point(j, y, t);
  std::vector<std::vector<int>> blocks = fibre_partition(chain, t, j);
  int mask = 0;
  for (int x : blocks[y]) mask |= 1 << x;
  return mask;
}

}  // namespace

// ---------------------------------------------------------------------------
// CosheafTable

CosheafTable::CosheafTable(LevelChain chain, int level, std::vector<FinModule> values,
                           const std::vector<std::tuple<int, int, ModHom>>& cor)
    : chain_(std::move(chain)), level_(level) {
  if (level_ < 0 || level_ >= chain_.levels())
    throw std::invalid_argument("CosheafTable: level out of range");
  points_ = chain_.size(level_);
  if (points_ > 4)
    throw std::invalid_argument(
        "CosheafTable: tables are stored only for levels with at most 4 points");
  int n = 1 << points_;
  if (static_cast<int>(values.size()) != n)
    throw std::invalid_argument("CosheafTable: need one module per subset (" +
                                std::to_string(n) + ")");
  values_ = std::move(values);
  const FiniteRing& ring = values_[0].ring();
  Side side = values_[0].side();
  for (const FinModule& m : values_)
    if (!(m.ring() == ring) || m.side() != side)
      throw std::invalid_argument("CosheafTable: all values must share ring and side");

  cor_.assign(n, std::vector<std::optional<ModHom>>(n));
  for (const auto& [sub, sup, map] : cor) {
    if (sup < 0 || sup >= n || sub < 0 || (sub & ~sup) != 0)
      throw std::invalid_argument("CosheafTable: corestriction entry is not a subset pair in range");
    if (cor_[sub][sup].has_value())
      throw std::invalid_argument("CosheafTable: duplicate corestriction entry " +
                                  mask_str(sub) + " <= " + mask_str(sup));
    if (!(map.source() == values_[sub]) || !(map.target() == values_[sup]))
      throw std::invalid_argument("CosheafTable: corestriction " + mask_str(sub) + " <= " +
                                  mask_str(sup) + " has wrong endpoints");
    cor_[sub][sup] = map;
  }
  for (int sup = 0; sup < n; ++sup)
    for (int sub = sup;; sub = (sub - 1) & sup) {
      if (!cor_[sub][sup].has_value()) {
        if (sub == sup)
          cor_[sub][sup] = ModHom::identity(values_[sup]);
        else if (is_zero_mod(values_[sub]) || is_zero_mod(values_[sup]))
          cor_[sub][sup] = ModHom::zero(values_[sub], values_[sup]);
        else
          throw std::invalid_argument("CosheafTable: missing corestriction " + mask_str(sub) +
                                      " <= " + mask_str(sup));
      }
      if (sub == 0) break;
    }
  for (int u = 0; u < n; ++u)
    if (!(cor_[u][u]->hom() == AbHom::identity(values_[u].group())))
      throw std::invalid_argument("CosheafTable: corestriction from " + mask_str(u) +
                                  " to itself is not the identity");
  // Functoriality: cor_V^W . cor_U^V = cor_U^W over every U <= V <= W.
  for (int w = 0; w < n; ++w)
    for (int v = w;; v = (v - 1) & w) {
      for (int u = v;; u = (u - 1) & v) {
        if (!(mod_compose(*cor_[v][w], *cor_[u][v]) == *cor_[u][w]))
          throw std::invalid_argument("CosheafTable: corestrictions are not functorial on " +
                                      mask_str(u) + " <= " + mask_str(v) + " <= " + mask_str(w));
        if (u == 0) break;
      }
      if (v == 0) break;
    }
}

const FinModule& CosheafTable::value(int mask) const {
  if (mask < 0 || mask >= (1 << points_))
    throw std::invalid_argument("CosheafTable: mask out of range");
  return values_[mask];
}

const FinModule& CosheafTable::value(const Clopen& u) const {
  if (u.level != level_)
    throw std::invalid_argument("CosheafTable: clopen is at level " + std::to_string(u.level) +
                                ", table at level " + std::to_string(level_));
  return value(clopen_mask(u));
}

const ModHom& CosheafTable::cor(int mask_u, int mask_v) const {
  if (mask_v < 0 || mask_v >= (1 << points_) || mask_u < 0)
    throw std::invalid_argument("CosheafTable: mask out of range");
  if ((mask_u & ~mask_v) != 0)
    throw std::invalid_argument("CosheafTable: corestriction requires " + mask_str(mask_u) +
                                " <= " + mask_str(mask_v));
  return *cor_[mask_u][mask_v];
}

const ModHom& CosheafTable::cor(const Clopen& u, const Clopen& v) const {
  if (v.level != level_ || u.level != level_)
    throw std::invalid_argument("CosheafTable: clopen level mismatch");
  return cor(clopen_mask(u), clopen_mask(v));
}

// ---------------------------------------------------------------------------
// ProSheafSystem

ProSheafSystem::ProSheafSystem(LevelChain chain, FiniteRing ring, Side side,
                               std::vector<std::vector<FinModule>> fibres,
                               std::vector<std::vector<ModHom>> transitions)
    : chain_(std::move(chain)),
      ring_(std::move(ring)),
      side_(side),
      fibres_(std::move(fibres)),
      trans_(std::move(transitions)) {
  if (static_cast<int>(fibres_.size()) != chain_.levels())
    throw std::invalid_argument("ProSheafSystem: need one fibre family per level");
  for (int i = 0; i < chain_.levels(); ++i) {
    if (static_cast<int>(fibres_[i].size()) != chain_.size(i))
      throw std::invalid_argument("ProSheafSystem: fibre count at level " + std::to_string(i) +
                                  " does not match the chain");
    for (const FinModule& m : fibres_[i])
      if (!(m.ring() == ring_) || m.side() != side_)
        throw std::invalid_argument("ProSheafSystem: all fibres must share the stated ring and side");
  }
  if (static_cast<int>(trans_.size()) != chain_.levels() - 1)
    throw std::invalid_argument("ProSheafSystem: need one transition layer per chain step");
  for (int i = 0; i + 1 < chain_.levels(); ++i) {
    if (static_cast<int>(trans_[i].size()) != chain_.size(i + 1))
      throw std::invalid_argument("ProSheafSystem: transition count at step " + std::to_string(i) +
                                  " does not match the chain");
    for (int x = 0; x < chain_.size(i + 1); ++x) {
      int fx = chain_.project_point(i + 1, x, i);
      const ModHom& t = trans_[i][x];
      if (!(t.source() == fibres_[i + 1][x]) || !(t.target() == fibres_[i][fx]))
        throw std::invalid_argument("ProSheafSystem: transition from level " +
                                    std::to_string(i + 1) + ", point " + std::to_string(x) +
                                    " has wrong endpoints");
    }
  }
}

const FinModule& ProSheafSystem::fibre(int level, int x) const {
  if (level < 0 || level >= levels() || x < 0 || x >= chain_.size(level))
    throw std::invalid_argument("ProSheafSystem: fibre index out of range");
  return fibres_[level][x];
}

const ModHom& ProSheafSystem::transition_step(int i, int x) const {
  if (i < 0 || i + 1 >= levels() || x < 0 || x >= chain_.size(i + 1))
    throw std::invalid_argument("ProSheafSystem: transition index out of range");
  return trans_[i][x];
}

ModHom ProSheafSystem::transition(int i, int j, int x) const {
  if (i < 0 || j >= levels() || i > j)
    throw std::invalid_argument("ProSheafSystem: transition levels out of range");
  if (x < 0 || x >= chain_.size(j))
    throw std::invalid_argument("ProSheafSystem: transition point out of range");
  std::vector<int> pts(j - i + 1);
  pts[j - i] = x;
  for (int k = j - i; k > 0; --k) pts[k - 1] = chain_.project_point(i + k, pts[k], i + k - 1);
  ModHom acc = ModHom::identity(fibre(j, x));
  for (int k = j - i; k > 0; --k) acc = mod_compose(trans_[i + k - 1][pts[k]], acc);
  return acc;
}

// ---------------------------------------------------------------------------
// Gluing checks

CheckResult cosheaf_condition_check(const CosheafTable& c, const std::vector<Clopen>& cover) {
  std::vector<int> masks;
  masks.reserve(cover.size());
  int umask = 0;
  for (const Clopen& u : cover) {
    if (u.level != c.level())
      throw std::invalid_argument("cosheaf_condition_check: cover set at level " +
                                  std::to_string(u.level) + ", table at level " +
                                  std::to_string(c.level()));
    int m = clopen_mask(u);
    if (m >= (1 << c.points()))
      throw std::invalid_argument("cosheaf_condition_check: cover set has points outside the level");
    masks.push_back(m);
    umask |= m;
  }
  int n = static_cast<int>(masks.size());
  const FinModule& mu = c.value(umask);

  std::vector<FinAbGroup> parts;
  std::vector<AbHom> comps;
  for (int m : masks) {
    parts.push_back(c.value(m).group());
    comps.push_back(c.cor(m, umask).hom());
  }
  DirectSum ds = direct_sum(parts);
  AbHom assemble = out_of_sum_to(mu.group(), ds, comps);

  if (!is_surjective(assemble)) {
    HomKio kio = hom_kio(assemble);
    return {false, "the cover sets do not assemble onto " + mask_str(umask) +
                       ": the value has a nonzero quotient of order " +
                       std::to_string(kio.cokernel.order())};
  }

  // Relations: for each pair i < j, the map sending m in M(U_i /\ U_j) to
  // cor-into-slot-i minus cor-into-slot-j.
  std::vector<AbHom> family;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int mij = masks[i] & masks[j];
      AbHom via_i = compose(ds.inj[i], c.cor(mij, masks[i]).hom());
      AbHom via_j = compose(ds.inj[j], c.cor(mij, masks[j]).hom());
      family.push_back(hom_sub(via_i, via_j));
    }
  ExactnessResult ex = exact_at_cofamily(family, assemble);
  if (!ex.exact)
    return {false, "relations over the cover of " + mask_str(umask) + " fall short: " +
                       ex.witness->description + " at " + elem_str(ex.witness->element)};
  return {true, {}};
}

CheckResult codisjoint_union_check(const CosheafTable& c) {
  if (c.value(0).group().rank() != 0)
    return {false, "value on the empty set is nontrivial (order " +
                       std::to_string(c.value(0).group().order()) + ")"};
  int n = c.points();
  for (int v = 1; v < (1 << n); ++v) {
    std::vector<int> bits;
    for (int k = 0; k < n; ++k)
      if ((v >> k) & 1) bits.push_back(k);
    int m = static_cast<int>(bits.size());
    auto run = [&](const std::vector<int>& asg, int blocks) -> CheckResult {
      std::vector<int> block_masks(blocks, 0);
      for (int k = 0; k < m; ++k) block_masks[asg[k]] |= 1 << bits[k];
      std::vector<FinAbGroup> parts;
      std::vector<AbHom> comps;
      for (int b : block_masks) {
        parts.push_back(c.value(b).group());
        comps.push_back(c.cor(b, v).hom());
      }
      DirectSum ds = direct_sum(parts);
      AbHom a = out_of_sum_to(c.value(v).group(), ds, comps);
      if (!is_isomorphism(a)) {
        std::string blocks_str;
        for (int b : block_masks) blocks_str += (blocks_str.empty() ? "" : " ") + mask_str(b);
        return {false, "value on " + mask_str(v) +
                           " is not the direct sum over the partition " + blocks_str};
      }
      return {true, {}};
    };
    std::vector<int> asg(m, 0);
    while (true) {
      int blocks = 0;
      for (int k = 0; k < m; ++k) blocks = std::max(blocks, asg[k] + 1);
      CheckResult r = run(asg, blocks);
      if (!r.ok) return r;
      int k = m - 1;
      for (; k > 0; --k) {
        int maxprefix = 0;
        for (int t = 0; t < k; ++t) maxprefix = std::max(maxprefix, asg[t] + 1);
        if (asg[k] < maxprefix) {
          ++asg[k];
          for (int t = k + 1; t < m; ++t) asg[t] = 0;
          break;
        }
      }
      if (k == 0) break;
    }
  }
  return {true, {}};
}

// ---------------------------------------------------------------------------
// The equivalence

ProSheafSystem coetale_of_cosheaf(const CosheafTable& c) {
  CheckResult d = codisjoint_union_check(c);
  if (!d.ok)
    throw std::invalid_argument("coetale_of_cosheaf: input is not a cosheaf: " + d.witness);
  const LevelChain& chain = c.chain();
  int t = c.level();

  std::vector<std::vector<FinModule>> fibres(chain.levels());
  for (int j = 0; j < chain.levels(); ++j) {
    fibres[j].reserve(chain.size(j));
    for (int y = 0; y < chain.size(j); ++y)
      fibres[j].push_back(c.value(attached_mask(chain, t, j, y)));
  }
  std::vector<std::vector<ModHom>> trans(chain.levels() - 1);
  for (int i = 0; i + 1 < chain.levels(); ++i) {
    trans[i].reserve(chain.size(i + 1));
    for (int x = 0; x < chain.size(i + 1); ++x) {
      int fx = chain.project_point(i + 1, x, i);
      trans[i].push_back(
          c.cor(attached_mask(chain, t, i + 1, x), attached_mask(chain, t, i, fx)));
    }
  }
  return ProSheafSystem(chain, c.ring(), c.side(), std::move(fibres), std::move(trans));
}

CosheafTable coshf_of_prosheaf(const ProSheafSystem& s, int level) {
  if (level < 0 || level >= s.levels())
    throw std::invalid_argument("coshf_of_prosheaf: level out of range");
  int n = s.chain().size(level);
  if (n > 4)
    throw std::invalid_argument("coshf_of_prosheaf: level has more than 4 points");

  std::vector<FinModule> values;
  std::vector<ModuleSum> sums;
  values.reserve(1 << n);
  sums.reserve(1 << n);
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<FinModule> parts;
    for (int x = 0; x < n; ++x)
      if ((mask >> x) & 1) parts.push_back(s.fibre(level, x));
    sums.push_back(module_direct_sum(s.ring(), s.side(), parts));
    values.push_back(sums.back().sum);
  }
  std::vector<std::tuple<int, int, ModHom>> cor;
  for (int v = 1; v < (1 << n); ++v)
    for (int u = (v - 1) & v;; u = (u - 1) & v) {
      if (u != 0 && values[v].group().rank() != 0 && values[u].group().rank() != 0) {
        std::vector<AbHom> comps;
        for (int x = 0; x < n; ++x)
          if ((u >> x) & 1) {
            int pos_v = std::popcount(static_cast<unsigned>(v & ((1 << x) - 1)));
            comps.push_back(sums[v].inj[pos_v].hom());
          }
        AbHom h = out_of_sum_to(values[v].group(), sums[u].group_sum, comps);
        cor.emplace_back(u, v, ModHom(values[u], values[v], h));
      }
      if (u == 0) break;
    }
  return CosheafTable(s.chain(), level, std::move(values), cor);
}

CheckResult roundtrip_check_cosheaf(const CosheafTable& c) {
  ProSheafSystem s = coetale_of_cosheaf(c);
  CosheafTable q = coshf_of_prosheaf(s, c.level());
  int n = c.points();

  std::vector<ModHom> J;  // J_U : Q(U) = sum of singleton values -> M(U)
  J.reserve(1 << n);
  for (int u = 0; u < (1 << n); ++u) {
    std::vector<FinModule> parts;
    std::vector<AbHom> comps;
    for (int x = 0; x < n; ++x)
      if ((u >> x) & 1) {
        parts.push_back(s.fibre(c.level(), x));
        comps.push_back(c.cor(1 << x, u).hom());
      }
    ModuleSum ms = module_direct_sum(c.ring(), c.side(), parts);
    AbHom h = out_of_sum_to(c.value(u).group(), ms.group_sum, comps);
    if (!is_isomorphism(h))
      return {false, "assembly map on " + mask_str(u) + " is not bijective"};
    J.push_back(ModHom(q.value(u), c.value(u), h));
  }
  for (int v = 0; v < (1 << n); ++v)
    for (int u = v;; u = (u - 1) & v) {
      AbHom lhs = compose(c.cor(u, v).hom(), J[u].hom());
      AbHom rhs = compose(J[v].hom(), q.cor(u, v).hom());
      if (!(lhs == rhs))
        return {false, "assembly square " + mask_str(u) + " <= " + mask_str(v) +
                           " does not commute"};
      if (u == 0) break;
    }
  return {true, {}};
}

CheckResult roundtrip_check_prosheaf(const ProSheafSystem& s) {
  for (int i = 0; i < s.levels(); ++i) {
    if (s.chain().size(i) > 4) continue;
    ProSheafSystem back = coetale_of_cosheaf(coshf_of_prosheaf(s, i));
    for (int x = 0; x < s.chain().size(i); ++x)
      if (!(back.fibre(i, x) == s.fibre(i, x)))
        return {false, "level " + std::to_string(i) + ", point " + std::to_string(x) +
                           ": fibre changes under the roundtrip"};
  }
  return {true, {}};
}

// ---------------------------------------------------------------------------
// Profinite direct sums

ProfiniteSum profinite_direct_sum(const ProSheafSystem& s) {
  ProChainModule out;
  const LevelChain& chain = s.chain();
  for (int i = 0; i < chain.levels(); ++i) {
    std::vector<FinModule> parts;
    parts.reserve(chain.size(i));
    for (int x = 0; x < chain.size(i); ++x) parts.push_back(s.fibre(i, x));
    out.sums.push_back(module_direct_sum(s.ring(), s.side(), parts));
    out.levels.push_back(out.sums.back().sum);
  }
  for (int i = 0; i + 1 < chain.levels(); ++i) {
    std::vector<AbHom> comps;
    comps.reserve(chain.size(i + 1));
    for (int x = 0; x < chain.size(i + 1); ++x) {
      int fx = chain.project_point(i + 1, x, i);
      comps.push_back(compose(out.sums[i].inj[fx].hom(), s.transition_step(i, x).hom()));
    }
    AbHom h = out_of_sum_to(out.levels[i].group(), out.sums[i + 1].group_sum, comps);
    out.maps.push_back(ModHom(out.levels[i + 1], out.levels[i], h));
  }
  CanonicalMorphism omega{out.sums.back().inj};
  return ProfiniteSum{std::move(out), std::move(omega)};
}

Factorization universal_property_check(const ProSheafSystem& s, const FinModule& p,
                                       const std::vector<ModHom>& beta) {
  int top = s.chain().top();
  int n = s.chain().size(top);
  if (static_cast<int>(beta.size()) != n)
    throw std::invalid_argument("universal_property_check: need one map per top-level fibre");
  for (int x = 0; x < n; ++x)
    if (!(beta[x].source() == s.fibre(top, x)) || !(beta[x].target() == p))
      throw std::invalid_argument("universal_property_check: component " + std::to_string(x) +
                                  " is not a map from the fibre into the given module");

  ProfiniteSum sum = profinite_direct_sum(s);
  const ModuleSum& ms = sum.module.sums.back();
  std::vector<AbHom> comps;
  comps.reserve(n);
  for (int x = 0; x < n; ++x) comps.push_back(beta[x].hom());
  AbHom h = out_of_sum_to(p.group(), ms.group_sum, comps);
  ModHom beta_tilde(sum.module.value(), p, h);

  // The defining equations.
  for (int x = 0; x < n; ++x)
    if (!(compose(h, sum.omega.components[x].hom()) == beta[x].hom()))
      return {{false, "factorization misses component " + std::to_string(x)}, std::nullopt};

  // Uniqueness: the omega images must span the sum, so two factorizations
  // agreeing on them agree everywhere.
  const FinAbGroup& total = sum.module.value().group();
  if (total.rank() > 0) {
    int cols = 0;
    for (int x = 0; x < n; ++x) cols += sum.omega.components[x].hom().matrix().cols();
    IntMat span(total.rank(), cols + total.rank());
    int col = 0;
    for (int x = 0; x < n; ++x) {
      const IntMat& m = sum.omega.components[x].hom().matrix();
      for (int c = 0; c < m.cols(); ++c, ++col)
        for (int r = 0; r < total.rank(); ++r) span.at(r, col) = m.at(r, c);
    }
    const auto& moduli = total.invariant_factors();
    for (int r = 0; r < total.rank(); ++r) span.at(r, cols + r) = moduli[r];
    for (int r = 0; r < total.rank(); ++r) {
      std::vector<Int> e(total.rank(), 0);
      e[r] = 1;
      if (!in_column_span(span, e))
        return {{false, "canonical images do not generate the sum"}, std::nullopt};
    }
  }
  return {{true, {}}, beta_tilde};
}

}  // namespace stonemod
