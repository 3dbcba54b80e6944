#include "stonemod/group.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace stonemod {

FinGroup::FinGroup(int order, std::vector<std::vector<int>> table,
                   std::vector<std::string> names)
    : n_(order), table_(std::move(table)), names_(std::move(names)) {
  if (n_ < 1) throw std::invalid_argument("group order must be >= 1");
  if (static_cast<int>(table_.size()) != n_)
    throw std::invalid_argument("multiplication table has wrong height");
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != n_)
      throw std::invalid_argument("multiplication table has wrong width");
    for (int v : row)
      if (v < 0 || v >= n_)
        throw std::invalid_argument("multiplication table entry out of range");
  }
  // Identity: the unique e with e*a = a*e = a for all a.
  identity_ = -1;
  for (int e = 0; e < n_; ++e) {
    bool ok = true;
    for (int a = 0; a < n_ && ok; ++a)
      ok = table_[e][a] == a && table_[a][e] == a;
    if (ok) {
      identity_ = e;
      break;
    }
  }
  if (identity_ < 0) throw std::invalid_argument("group table has no identity");
  // Inverses.
  inverse_.assign(n_, -1);
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      if (table_[a][b] == identity_ && table_[b][a] == identity_) {
        inverse_[a] = b;
        break;
      }
    }
    if (inverse_[a] < 0)
      throw std::invalid_argument("group table element has no inverse");
  }
  // Associativity, exhaustively.
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          throw std::invalid_argument("group table is not associative");
  if (names_.empty()) {
    names_.reserve(n_);
    for (int a = 0; a < n_; ++a) names_.push_back("g" + std::to_string(a));
  }
  if (static_cast<int>(names_.size()) != n_)
    throw std::invalid_argument("wrong number of element names");
}

FinGroup FinGroup::trivial() { return FinGroup(1, {{0}}, {"e"}); }

FinGroup FinGroup::cyclic(int n) {
  if (n < 1) throw std::invalid_argument("cyclic group order must be >= 1");
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  std::vector<std::string> names;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
    names.push_back("c" + std::to_string(a));
  }
  return FinGroup(n, std::move(table), std::move(names));
}

FinGroup FinGroup::product(const FinGroup& a, const FinGroup& b) {
  const int n = a.order() * b.order();
  auto index = [&](int x, int y) { return x * b.order() + y; };
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  std::vector<std::string> names(n);
  for (int x1 = 0; x1 < a.order(); ++x1)
    for (int y1 = 0; y1 < b.order(); ++y1) {
      names[index(x1, y1)] = "(" + a.name(x1) + "," + b.name(y1) + ")";
      for (int x2 = 0; x2 < a.order(); ++x2)
        for (int y2 = 0; y2 < b.order(); ++y2)
          table[index(x1, y1)][index(x2, y2)] =
              index(a.mul(x1, x2), b.mul(y1, y2));
    }
  return FinGroup(n, std::move(table), std::move(names));
}

FinGroup FinGroup::symmetric(int k) {
  if (k < 1 || k > 5)
    throw std::invalid_argument("symmetric group supported for 1 <= k <= 5");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  const int n = static_cast<int>(perms.size());
  auto find = [&](const std::vector<int>& q) {
    return static_cast<int>(
        std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
  };
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  std::vector<std::string> names(n);
  for (int a = 0; a < n; ++a) {
    std::string nm = "[";
    for (int i = 0; i < k; ++i) nm += std::to_string(perms[a][i]);
    names[a] = nm + "]";
    for (int b = 0; b < n; ++b) {
      std::vector<int> q(k);
      for (int i = 0; i < k; ++i) q[i] = perms[a][perms[b][i]];
      table[a][b] = find(q);
    }
  }
  return FinGroup(n, std::move(table), std::move(names));
}

bool FinGroup::is_abelian() const {
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      if (table_[a][b] != table_[b][a]) return false;
  return true;
}

int FinGroup::element_order(int a) const {
  int x = a, ord = 1;
  while (x != identity_) {
    x = table_[x][a];
    ++ord;
  }
  return ord;
}

std::vector<int> subgroup_closure(const FinGroup& g, const std::vector<int>& generators) {
  // In a finite group, closure under products implies closure under inverses.
  std::set<int> seen{g.identity()};
  seen.insert(generators.begin(), generators.end());
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> cur(seen.begin(), seen.end());
    for (int x : cur)
      for (int y : cur)
        if (seen.insert(g.mul(x, y)).second) changed = true;
  }
  return std::vector<int>(seen.begin(), seen.end());
}

bool is_subgroup(const FinGroup& g, const std::vector<int>& elems) {
  std::set<int> h(elems.begin(), elems.end());
  if (!h.count(g.identity())) return false;
  for (int a : h)
    for (int b : h)
      if (!h.count(g.mul(a, b))) return false;
  for (int a : h)
    if (!h.count(g.inverse(a))) return false;
  return true;
}

SubgroupView subgroup_group(const FinGroup& g, const std::vector<int>& elems) {
  if (!is_subgroup(g, elems))
    throw std::invalid_argument("element set is not a subgroup");
  std::vector<int> embed(elems.begin(), elems.end());
  std::sort(embed.begin(), embed.end());
  embed.erase(std::unique(embed.begin(), embed.end()), embed.end());
  const int m = static_cast<int>(embed.size());
  auto local = [&](int x) {
    return static_cast<int>(
        std::lower_bound(embed.begin(), embed.end(), x) - embed.begin());
  };
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  std::vector<std::string> names(m);
  for (int i = 0; i < m; ++i) {
    names[i] = g.name(embed[i]);
    for (int j = 0; j < m; ++j) table[i][j] = local(g.mul(embed[i], embed[j]));
  }
  return SubgroupView{FinGroup(m, std::move(table), std::move(names)),
                      std::move(embed)};
}

std::vector<std::vector<int>> left_cosets(const FinGroup& g, const std::vector<int>& h) {
  if (!is_subgroup(g, h))
    throw std::invalid_argument("coset construction requires a subgroup");
  std::vector<bool> placed(g.order(), false);
  std::vector<std::vector<int>> cosets;
  for (int a = 0; a < g.order(); ++a) {
    if (placed[a]) continue;
    std::set<int> coset;
    for (int x : h) coset.insert(g.mul(a, x));
    std::vector<int> c(coset.begin(), coset.end());
    for (int x : c) placed[x] = true;
    cosets.push_back(std::move(c));
  }
  return cosets;
}

// ---------------------------------------------------------------------------

GSet::GSet(FinGroup group, int size, std::vector<std::vector<int>> act)
    : group_(std::move(group)), size_(size), act_(std::move(act)) {
  if (size_ < 0) throw std::invalid_argument("G-set size must be >= 0");
  if (static_cast<int>(act_.size()) != group_.order())
    throw std::invalid_argument("action table needs one row per group element");
  for (const auto& row : act_) {
    if (static_cast<int>(row.size()) != size_)
      throw std::invalid_argument("action row has wrong width");
    std::vector<bool> hit(size_, false);
    for (int v : row) {
      if (v < 0 || v >= size_ || hit[v])
        throw std::invalid_argument("action row is not a permutation");
      hit[v] = true;
    }
  }
  for (int y = 0; y < size_; ++y)
    if (act_[group_.identity()][y] != y)
      throw std::invalid_argument("identity must act trivially");
  for (int a = 0; a < group_.order(); ++a)
    for (int b = 0; b < group_.order(); ++b)
      for (int y = 0; y < size_; ++y)
        if (act_[group_.mul(a, b)][y] != act_[a][act_[b][y]])
          throw std::invalid_argument("action is not a group homomorphism");
}

GSet GSet::regular(const FinGroup& g) {
  std::vector<std::vector<int>> act(g.order(), std::vector<int>(g.order()));
  for (int a = 0; a < g.order(); ++a)
    for (int y = 0; y < g.order(); ++y) act[a][y] = g.mul(a, y);
  return GSet(g, g.order(), std::move(act));
}

GSet GSet::fixed_points(const FinGroup& g, int size) {
  std::vector<int> id(size);
  std::iota(id.begin(), id.end(), 0);
  return GSet(g, size, std::vector<std::vector<int>>(g.order(), id));
}

GSet GSet::cosets(const FinGroup& g, const std::vector<int>& h) {
  auto cs = left_cosets(g, h);
  const int m = static_cast<int>(cs.size());
  std::vector<int> coset_of(g.order());
  for (int i = 0; i < m; ++i)
    for (int x : cs[i]) coset_of[x] = i;
  std::vector<std::vector<int>> act(g.order(), std::vector<int>(m));
  for (int a = 0; a < g.order(); ++a)
    for (int i = 0; i < m; ++i) act[a][i] = coset_of[g.mul(a, cs[i][0])];
  return GSet(g, m, std::move(act));
}

std::vector<std::vector<int>> GSet::orbits() const {
  std::vector<bool> placed(size_, false);
  std::vector<std::vector<int>> out;
  for (int y = 0; y < size_; ++y) {
    if (placed[y]) continue;
    std::set<int> orbit;
    for (int a = 0; a < group_.order(); ++a) orbit.insert(act_[a][y]);
    std::vector<int> o(orbit.begin(), orbit.end());
    for (int x : o) placed[x] = true;
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<int> GSet::stabilizer(int y) const {
  if (y < 0 || y >= size_) throw std::invalid_argument("point out of range");
  std::vector<int> stab;
  for (int a = 0; a < group_.order(); ++a)
    if (act_[a][y] == y) stab.push_back(a);
  return stab;
}

GSet orbit_gset(const GSet& y, const std::vector<int>& orbit_elems) {
  const int m = static_cast<int>(orbit_elems.size());
  std::vector<int> local(y.size(), -1);
  for (int i = 0; i < m; ++i) local[orbit_elems[i]] = i;
  std::vector<std::vector<int>> act(y.group().order(), std::vector<int>(m));
  for (int a = 0; a < y.group().order(); ++a)
    for (int i = 0; i < m; ++i) {
      int image = local[y.apply(a, orbit_elems[i])];
      if (image < 0)
        throw std::invalid_argument("point set is not closed under the action");
      act[a][i] = image;
    }
  return GSet(y.group(), m, std::move(act));
}

std::vector<int> transitive_to_cosets(const GSet& y) {
  auto orbs = y.orbits();
  if (orbs.size() != 1 || y.size() == 0)
    throw std::invalid_argument("G-set is not transitive");
  const FinGroup& g = y.group();
  const int base = 0;
  auto stab = y.stabilizer(base);
  auto cs = left_cosets(g, stab);
  // Coset a*Stab corresponds to the point a.base; this is well defined and
  // bijective exactly because the action is transitive.
  std::vector<int> point_of_coset(cs.size());
  for (size_t i = 0; i < cs.size(); ++i)
    point_of_coset[i] = y.apply(cs[i][0], base);
  std::vector<int> coset_of_point(y.size(), -1);
  for (size_t i = 0; i < cs.size(); ++i) coset_of_point[point_of_coset[i]] = static_cast<int>(i);
  return coset_of_point;
}

}  // namespace stonemod
