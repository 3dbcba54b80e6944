#include "stonemod/sheaf.hpp"

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

// Position of point x among the set bits of `mask` (x must be a set bit).
int bit_index(int mask, int x) {
  return std::popcount(static_cast<unsigned>(mask & ((1 << x) - 1)));
}

}  // namespace

// ---------------------------------------------------------------------------
// PresheafTable

PresheafTable::PresheafTable(LevelChain chain, int level, std::vector<FinModule> values,
                             const std::vector<std::tuple<int, int, ModHom>>& res)
    : chain_(std::move(chain)), level_(level) {
  if (level_ < 0 || level_ >= chain_.levels())
    throw std::invalid_argument("PresheafTable: level out of range");
  points_ = chain_.size(level_);
  if (points_ > 4)
    throw std::invalid_argument(
        "PresheafTable: tables are stored only for levels with at most 4 points");
  int n = 1 << points_;
  if (static_cast<int>(values.size()) != n)
    throw std::invalid_argument("PresheafTable: need one module per subset (" +
                                std::to_string(n) + ")");
  values_ = std::move(values);
  const FiniteRing& ring = values_[0].ring();
  Side side = values_[0].side();
  for (const FinModule& m : values_)
    if (!(m.ring() == ring) || m.side() != side)
      throw std::invalid_argument("PresheafTable: all values must share ring and side");

  res_.assign(n, std::vector<std::optional<ModHom>>(n));
  for (const auto& [sup, sub, map] : res) {
    if (sup < 0 || sup >= n || sub < 0 || (sub & ~sup) != 0)
      throw std::invalid_argument("PresheafTable: restriction entry is not a subset pair in range");
    if (res_[sup][sub].has_value())
      throw std::invalid_argument("PresheafTable: duplicate restriction entry " +
                                  mask_str(sub) + " <= " + mask_str(sup));
    if (!(map.source() == values_[sup]) || !(map.target() == values_[sub]))
      throw std::invalid_argument("PresheafTable: restriction " + mask_str(sub) + " <= " +
                                  mask_str(sup) + " has wrong endpoints");
    res_[sup][sub] = map;
  }
  // Fill the forced entries (identities; maps touching a zero module) and
  // demand everything else.
  for (int sup = 0; sup < n; ++sup)
    for (int sub = sup;; sub = (sub - 1) & sup) {
      if (!res_[sup][sub].has_value()) {
        if (sub == sup)
          res_[sup][sub] = ModHom::identity(values_[sup]);
        else if (is_zero_mod(values_[sup]) || is_zero_mod(values_[sub]))
          res_[sup][sub] = ModHom::zero(values_[sup], values_[sub]);
        else
          throw std::invalid_argument("PresheafTable: missing restriction " + mask_str(sub) +
                                      " <= " + mask_str(sup));
      }
      if (sub == 0) break;
    }
  // Identity on equal sets.
  for (int u = 0; u < n; ++u)
    if (!(res_[u][u]->hom() == AbHom::identity(values_[u].group())))
      throw std::invalid_argument("PresheafTable: restriction from " + mask_str(u) +
                                  " to itself is not the identity");
  // Functoriality over every chain U <= V <= W.
  for (int w = 0; w < n; ++w)
    for (int v = w;; v = (v - 1) & w) {
      for (int u = v;; u = (u - 1) & v) {
        if (!(mod_compose(*res_[v][u], *res_[w][v]) == *res_[w][u]))
          throw std::invalid_argument("PresheafTable: restrictions are not functorial on " +
                                      mask_str(u) + " <= " + mask_str(v) + " <= " + mask_str(w));
        if (u == 0) break;
      }
      if (v == 0) break;
    }
}

const FinModule& PresheafTable::value(int mask) const {
  if (mask < 0 || mask >= (1 << points_))
    throw std::invalid_argument("PresheafTable: mask out of range");
  return values_[mask];
}

const FinModule& PresheafTable::value(const Clopen& u) const {
  if (u.level != level_)
    throw std::invalid_argument("PresheafTable: clopen is at level " + std::to_string(u.level) +
                                ", table at level " + std::to_string(level_));
  return value(clopen_mask(u));
}

const ModHom& PresheafTable::res(int mask_v, int mask_u) const {
  if (mask_v < 0 || mask_v >= (1 << points_) || mask_u < 0)
    throw std::invalid_argument("PresheafTable: mask out of range");
  if ((mask_u & ~mask_v) != 0)
    throw std::invalid_argument("PresheafTable: restriction requires " + mask_str(mask_u) +
                                " <= " + mask_str(mask_v));
  return *res_[mask_v][mask_u];
}

const ModHom& PresheafTable::res(const Clopen& v, const Clopen& u) const {
  if (v.level != level_ || u.level != level_)
    throw std::invalid_argument("PresheafTable: clopen level mismatch");
  return res(clopen_mask(v), clopen_mask(u));
}

// ---------------------------------------------------------------------------
// EtaleSystem

EtaleSystem::EtaleSystem(LevelChain chain, FiniteRing ring, Side side,
                         std::vector<std::vector<FinModule>> fibres,
                         std::vector<std::vector<ModHom>> transitions)
    : chain_(std::move(chain)),
      ring_(std::move(ring)),
      side_(side),
      fibres_(std::move(fibres)),
      trans_(std::move(transitions)) {
  if (static_cast<int>(fibres_.size()) != chain_.levels())
    throw std::invalid_argument("EtaleSystem: need one fibre family per level");
  for (int i = 0; i < chain_.levels(); ++i) {
    if (static_cast<int>(fibres_[i].size()) != chain_.size(i))
      throw std::invalid_argument("EtaleSystem: fibre count at level " + std::to_string(i) +
                                  " does not match the chain");
    for (const FinModule& m : fibres_[i])
      if (!(m.ring() == ring_) || m.side() != side_)
        throw std::invalid_argument("EtaleSystem: all fibres must share the stated ring and side");
  }
  if (static_cast<int>(trans_.size()) != chain_.levels() - 1)
    throw std::invalid_argument("EtaleSystem: need one transition layer per chain step");
  for (int i = 0; i + 1 < chain_.levels(); ++i) {
    if (static_cast<int>(trans_[i].size()) != chain_.size(i + 1))
      throw std::invalid_argument("EtaleSystem: transition count at step " + std::to_string(i) +
                                  " does not match the chain");
    for (int x = 0; x < chain_.size(i + 1); ++x) {
      int fx = chain_.project_point(i + 1, x, i);
      const ModHom& t = trans_[i][x];
      if (!(t.source() == fibres_[i][fx]) || !(t.target() == fibres_[i + 1][x]))
        throw std::invalid_argument("EtaleSystem: transition to level " + std::to_string(i + 1) +
                                    ", point " + std::to_string(x) + " has wrong endpoints");
    }
  }
}

const FinModule& EtaleSystem::fibre(int level, int x) const {
  if (level < 0 || level >= levels() || x < 0 || x >= chain_.size(level))
    throw std::invalid_argument("EtaleSystem: fibre index out of range");
  return fibres_[level][x];
}

const ModHom& EtaleSystem::transition_step(int i, int x) const {
  if (i < 0 || i + 1 >= levels() || x < 0 || x >= chain_.size(i + 1))
    throw std::invalid_argument("EtaleSystem: transition index out of range");
  return trans_[i][x];
}

ModHom EtaleSystem::transition(int i, int j, int x) const {
  if (i < 0 || j >= levels() || i > j)
    throw std::invalid_argument("EtaleSystem: transition levels out of range");
  if (x < 0 || x >= chain_.size(j))
    throw std::invalid_argument("EtaleSystem: transition point out of range");
  std::vector<int> pts(j - i + 1);  // pts[k] = the point's image at level i + k
  pts[j - i] = x;
  for (int k = j - i; k > 0; --k) pts[k - 1] = chain_.project_point(i + k, pts[k], i + k - 1);
  ModHom acc = ModHom::identity(fibre(i, pts[0]));
  for (int k = 0; k < j - i; ++k) acc = mod_compose(trans_[i + k][pts[k + 1]], acc);
  return acc;
}

// ---------------------------------------------------------------------------
// Gluing checks

CheckResult sheaf_condition_check(const PresheafTable& p, const std::vector<Clopen>& cover) {
  std::vector<int> masks;
  masks.reserve(cover.size());
  int umask = 0;
  for (const Clopen& u : cover) {
    if (u.level != p.level())
      throw std::invalid_argument("sheaf_condition_check: cover set at level " +
                                  std::to_string(u.level) + ", table at level " +
                                  std::to_string(p.level()));
    int m = clopen_mask(u);
    if (m >= (1 << p.points()))
      throw std::invalid_argument("sheaf_condition_check: cover set has points outside the level");
    masks.push_back(m);
    umask |= m;
  }
  int n = static_cast<int>(masks.size());
  const FinModule& fu = p.value(umask);

  std::vector<FinAbGroup> parts;
  std::vector<AbHom> comps;
  for (int m : masks) {
    parts.push_back(p.value(m).group());
    comps.push_back(p.res(umask, m).hom());
  }
  DirectSum ds = direct_sum(parts);
  AbHom collect = into_product_from(fu.group(), ds, comps);

  if (!is_injective(collect)) {
    HomKio kio = hom_kio(collect);
    GroupElem w = fu.group().reduce(kio.kernel_incl.matrix().col(0));
    return {false, "nonzero section " + elem_str(w) + " of " + mask_str(umask) +
                       " restricts to zero on every cover set"};
  }

  std::vector<AbHom> family;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int mij = masks[i] & masks[j];
      AbHom via_i = compose(p.res(masks[i], mij).hom(), ds.proj[i]);
      AbHom via_j = compose(p.res(masks[j], mij).hom(), ds.proj[j]);
      family.push_back(hom_sub(via_i, via_j));
    }
  ExactnessResult ex = exact_at_family(collect, family);
  if (!ex.exact)
    return {false, "gluing fails for the cover of " + mask_str(umask) + ": " +
                       ex.witness->description + " at " + elem_str(ex.witness->element)};
  return {true, {}};
}

CheckResult disjoint_union_check(const PresheafTable& p) {
  if (p.value(0).group().rank() != 0)
    return {false, "value on the empty set is nontrivial (order " +
                       std::to_string(p.value(0).group().order()) + ")"};
  int n = p.points();
  for (int v = 1; v < (1 << n); ++v) {
    std::vector<int> bits;
    for (int k = 0; k < n; ++k)
      if ((v >> k) & 1) bits.push_back(k);
    int m = static_cast<int>(bits.size());
    // Enumerate partitions of the points of v: element k joins one of the
    // blocks opened so far or opens a new one (restricted-growth strings).
    auto run = [&](const std::vector<int>& asg, int blocks) -> CheckResult {
      std::vector<int> block_masks(blocks, 0);
      for (int k = 0; k < m; ++k) block_masks[asg[k]] |= 1 << bits[k];
      std::vector<FinAbGroup> parts;
      std::vector<AbHom> comps;
      for (int b : block_masks) {
        parts.push_back(p.value(b).group());
        comps.push_back(p.res(v, b).hom());
      }
      DirectSum ds = direct_sum(parts);
      AbHom a = into_product_from(p.value(v).group(), ds, comps);
      if (!is_isomorphism(a)) {
        std::string blocks_str;
        for (int b : block_masks) blocks_str += (blocks_str.empty() ? "" : " ") + mask_str(b);
        return {false, "value on " + mask_str(v) +
                           " is not the product over the partition " + blocks_str};
      }
      return {true, {}};
    };
    // Iterative restricted-growth enumeration.
    std::vector<int> asg(m, 0);
    while (true) {
      int blocks = 0;
      for (int k = 0; k < m; ++k) blocks = std::max(blocks, asg[k] + 1);
      CheckResult r = run(asg, blocks);
      if (!r.ok) return r;
      // next restricted-growth string
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

namespace {

// The clopen (as a mask at the table's level t) attached to a point y of
// level j: for j >= t the singleton image of y, for j < t the block of
// points lying over y.
int attached_mask(const LevelChain& chain, int t, int j, int y) {
  if (j >= t) return 1 << chain.project_point(j, y, t);
  std::vector<std::vector<int>> blocks = fibre_partition(chain, t, j);
  int mask = 0;
  for (int x : blocks[y]) mask |= 1 << x;
  return mask;
}

}  // namespace

EtaleSystem etale_of_sheaf(const PresheafTable& p) {
  CheckResult d = disjoint_union_check(p);
  if (!d.ok) throw std::invalid_argument("etale_of_sheaf: input is not a sheaf: " + d.witness);
  const LevelChain& chain = p.chain();
  int t = p.level();

  std::vector<std::vector<FinModule>> fibres(chain.levels());
  for (int j = 0; j < chain.levels(); ++j) {
    fibres[j].reserve(chain.size(j));
    for (int y = 0; y < chain.size(j); ++y)
      fibres[j].push_back(p.value(attached_mask(chain, t, j, y)));
  }
  std::vector<std::vector<ModHom>> trans(chain.levels() - 1);
  for (int i = 0; i + 1 < chain.levels(); ++i) {
    trans[i].reserve(chain.size(i + 1));
    for (int x = 0; x < chain.size(i + 1); ++x) {
      int fx = chain.project_point(i + 1, x, i);
      trans[i].push_back(
          p.res(attached_mask(chain, t, i, fx), attached_mask(chain, t, i + 1, x)));
    }
  }
  return EtaleSystem(chain, p.ring(), p.side(), std::move(fibres), std::move(trans));
}

PresheafTable sheaf_of_etale(const EtaleSystem& e, int level) {
  if (level < 0 || level >= e.levels())
    throw std::invalid_argument("sheaf_of_etale: level out of range");
  int n = e.chain().size(level);
  if (n > 4)
    throw std::invalid_argument("sheaf_of_etale: level has more than 4 points");

  std::vector<FinModule> values;
  std::vector<ModuleSum> sums;
  values.reserve(1 << n);
  sums.reserve(1 << n);
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<FinModule> parts;
    for (int x = 0; x < n; ++x)
      if ((mask >> x) & 1) parts.push_back(e.fibre(level, x));
    sums.push_back(module_direct_sum(e.ring(), e.side(), parts));
    values.push_back(sums.back().sum);
  }
  std::vector<std::tuple<int, int, ModHom>> res;
  for (int v = 1; v < (1 << n); ++v)
    for (int u = (v - 1) & v;; u = (u - 1) & v) {
      if (u != 0 && values[v].group().rank() != 0 && values[u].group().rank() != 0) {
        std::vector<AbHom> comps;
        for (int x = 0; x < n; ++x)
          if ((u >> x) & 1) comps.push_back(sums[v].proj[bit_index(v, x)].hom());
        AbHom h = into_product_from(values[v].group(), sums[u].group_sum, comps);
        res.emplace_back(v, u, ModHom(values[v], values[u], h));
      }
      if (u == 0) break;
    }
  return PresheafTable(e.chain(), level, std::move(values), res);
}

CheckResult roundtrip_check_presheaf(const PresheafTable& p) {
  EtaleSystem e = etale_of_sheaf(p);
  PresheafTable q = sheaf_of_etale(e, p.level());
  int n = p.points();

  std::vector<ModHom> J;
  J.reserve(1 << n);
  for (int u = 0; u < (1 << n); ++u) {
    std::vector<FinModule> parts;
    std::vector<AbHom> comps;
    for (int x = 0; x < n; ++x)
      if ((u >> x) & 1) {
        parts.push_back(e.fibre(p.level(), x));
        comps.push_back(p.res(u, 1 << x).hom());
      }
    ModuleSum ms = module_direct_sum(p.ring(), p.side(), parts);
    AbHom h = into_product_from(p.value(u).group(), ms.group_sum, comps);
    if (!is_isomorphism(h))
      return {false, "evaluation map on " + mask_str(u) + " is not bijective"};
    J.push_back(ModHom(p.value(u), q.value(u), h));
  }
  for (int v = 0; v < (1 << n); ++v)
    for (int u = v;; u = (u - 1) & v) {
      AbHom lhs = compose(J[u].hom(), p.res(v, u).hom());
      AbHom rhs = compose(q.res(v, u).hom(), J[v].hom());
      if (!(lhs == rhs))
        return {false, "evaluation square " + mask_str(u) + " <= " + mask_str(v) +
                           " does not commute"};
      if (u == 0) break;
    }
  return {true, {}};
}

CheckResult roundtrip_check_etale(const EtaleSystem& e) {
  for (int i = 0; i < e.levels(); ++i) {
    if (e.chain().size(i) > 4) continue;
    EtaleSystem back = etale_of_sheaf(sheaf_of_etale(e, i));
    for (int x = 0; x < e.chain().size(i); ++x)
      if (!(back.fibre(i, x) == e.fibre(i, x)))
        return {false, "level " + std::to_string(i) + ", point " + std::to_string(x) +
                           ": fibre changes under the roundtrip"};
  }
  return {true, {}};
}

// ---------------------------------------------------------------------------
// Sections

DiscreteChainModule global_sections(const EtaleSystem& e) {
  DiscreteChainModule out;
  const LevelChain& chain = e.chain();
  for (int i = 0; i < chain.levels(); ++i) {
    std::vector<FinModule> parts;
    parts.reserve(chain.size(i));
    for (int x = 0; x < chain.size(i); ++x) parts.push_back(e.fibre(i, x));
    out.sums.push_back(module_direct_sum(e.ring(), e.side(), parts));
    out.levels.push_back(out.sums.back().sum);
  }
  for (int i = 0; i + 1 < chain.levels(); ++i) {
    std::vector<AbHom> comps;
    comps.reserve(chain.size(i + 1));
    for (int x = 0; x < chain.size(i + 1); ++x) {
      int fx = chain.project_point(i + 1, x, i);
      comps.push_back(compose(e.transition_step(i, x).hom(), out.sums[i].proj[fx].hom()));
    }
    AbHom h = into_product_from(out.levels[i].group(), out.sums[i + 1].group_sum, comps);
    out.maps.push_back(ModHom(out.levels[i], out.levels[i + 1], h));
  }
  return out;
}

SectionValue section_through_points(const EtaleSystem& e, int level,
                                    const std::vector<std::pair<int, GroupElem>>& assignments) {
  if (level < 0 || level >= e.levels())
    throw std::invalid_argument("section_through_points: level out of range");
  int n = e.chain().size(level);
  SectionValue s{level, full_clopen(e.chain(), level), {}};
  s.values.reserve(n);
  for (int x = 0; x < n; ++x) s.values.push_back(e.fibre(level, x).group().zero());
  std::vector<bool> seen(n, false);
  for (const auto& [x, a] : assignments) {
    if (x < 0 || x >= n)
      throw std::invalid_argument("section_through_points: point out of range");
    if (seen[x])
      throw std::invalid_argument("section_through_points: duplicate point " + std::to_string(x));
    seen[x] = true;
    if (!e.fibre(level, x).group().is_valid(a))
      throw std::invalid_argument("section_through_points: value is not in the fibre at point " +
                                  std::to_string(x));
    s.values[x] = a;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Functor lifting

EtaleSystem lift_functor_sheaf(const FunctorSpec& f, const EtaleSystem& e) {
  std::vector<std::vector<FinModule>> fibres(e.levels());
  for (int i = 0; i < e.levels(); ++i) {
    fibres[i].reserve(e.chain().size(i));
    for (int x = 0; x < e.chain().size(i); ++x)
      fibres[i].push_back(lift_functor_apply(f, e.fibre(i, x)));
  }
  std::vector<std::vector<ModHom>> trans(e.levels() - 1);
  for (int i = 0; i + 1 < e.levels(); ++i) {
    trans[i].reserve(e.chain().size(i + 1));
    for (int x = 0; x < e.chain().size(i + 1); ++x)
      trans[i].push_back(lift_functor_hom(f, e.transition_step(i, x)));
  }
  FinModule probe = lift_functor_apply(f, zero_module(e.ring(), e.side()));
  return EtaleSystem(e.chain(), probe.ring(), probe.side(), std::move(fibres),
                     std::move(trans));
}

namespace {

// The comparison map F(product over the mask) -> product of F(fibre),
// assembled from the lifted projections of the product decomposition.
AbHom comparison_map(const FunctorSpec& f, const EtaleSystem& e, const EtaleSystem& fe,
                     int level, int mask) {
  std::vector<FinModule> parts, fparts;
  for (int x = 0; x < e.chain().size(level); ++x)
    if ((mask >> x) & 1) {
      parts.push_back(e.fibre(level, x));
      fparts.push_back(fe.fibre(level, x));
    }
  ModuleSum ms = module_direct_sum(e.ring(), e.side(), parts);
  ModuleSum fs = module_direct_sum(fe.ring(), fe.side(), fparts);
  FinModule fm = lift_functor_apply(f, ms.sum);
  std::vector<AbHom> comps;
  comps.reserve(fparts.size());
  for (size_t k = 0; k < parts.size(); ++k)
    comps.push_back(lift_functor_hom(f, ms.proj[k]).hom());
  return into_product_from(fm.group(), fs.group_sum, comps);
}

}  // namespace

CheckResult sections_functor_check(const FunctorSpec& f, const EtaleSystem& e) {
  EtaleSystem fe = lift_functor_sheaf(f, e);
  int top = e.chain().top();
  int full = (1 << e.chain().size(top)) - 1;
  if (e.chain().size(top) > 30)
    throw std::invalid_argument("sections_functor_check: top level too large");
  AbHom c = comparison_map(f, e, fe, top, full);
  if (!is_isomorphism(c))
    return {false, "comparison between sections of the lifted system and the lifted sections "
                   "is not bijective at the top level"};

  if (e.chain().size(top) <= 4) {
    PresheafTable p = sheaf_of_etale(e, top);
    PresheafTable fp = sheaf_of_etale(fe, top);
    int n = p.points();
    std::vector<AbHom> cs;
    cs.reserve(1 << n);
    for (int u = 0; u < (1 << n); ++u) cs.push_back(comparison_map(f, e, fe, top, u));
    for (int v = 0; v < (1 << n); ++v)
      for (int u = v;; u = (u - 1) & v) {
        AbHom lhs = compose(cs[u], lift_functor_hom(f, p.res(v, u)).hom());
        AbHom rhs = compose(fp.res(v, u).hom(), cs[v]);
        if (!(lhs == rhs))
          return {false, "comparison square " + mask_str(u) + " <= " + mask_str(v) +
                             " does not commute"};
        if (u == 0) break;
      }
  }
  return {true, {}};
}

}  // namespace stonemod
