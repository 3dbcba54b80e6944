#include "stonemod/stone.hpp"

#include <algorithm>
#include <stdexcept>

namespace stonemod {

LevelChain::LevelChain(std::vector<int> sizes,
                       std::vector<std::vector<int>> projections)
    : sizes_(std::move(sizes)), projections_(std::move(projections)) {
  if (sizes_.empty()) throw std::invalid_argument("chain needs at least one level");
  for (int s : sizes_)
    if (s < 0) throw std::invalid_argument("level sizes must be >= 0");
  if (projections_.size() + 1 != sizes_.size())
    throw std::invalid_argument("chain needs one projection per adjacent pair");
  for (size_t i = 0; i < projections_.size(); ++i) {
    if (static_cast<int>(projections_[i].size()) != sizes_[i + 1])
      throw std::invalid_argument("projection domain has the wrong size");
    for (int v : projections_[i])
      if (v < 0 || v >= sizes_[i])
        throw std::invalid_argument("projection value out of range");
  }
}

LevelChain LevelChain::single(int size) {
  return LevelChain({size}, {});
}

int LevelChain::project_point(int from, int x, int to) const {
  if (from < 0 || from >= levels() || to < 0 || to > from)
    throw std::invalid_argument("bad level pair in projection");
  if (x < 0 || x >= sizes_[from]) throw std::invalid_argument("point out of range");
  for (int i = from; i > to; --i) x = projections_[i - 1][x];
  return x;
}

ChainCheck validate_chain(const LevelChain& chain) {
  for (int i = 0; i + 1 < chain.levels(); ++i) {
    std::vector<bool> hit(chain.size(i), false);
    for (int x = 0; x < chain.size(i + 1); ++x)
      hit[chain.project_point(i + 1, x, i)] = true;
    if (!std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }))
      return ChainCheck{false, i};
  }
  return ChainCheck{true, -1};
}

Clopen make_clopen(const LevelChain& chain, int level, std::vector<int> points) {
  if (level < 0 || level >= chain.levels())
    throw std::invalid_argument("clopen level out of range");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (int p : points)
    if (p < 0 || p >= chain.size(level))
      throw std::invalid_argument("clopen point out of range");
  return Clopen{level, std::move(points)};
}

Clopen full_clopen(const LevelChain& chain, int level) {
  std::vector<int> pts(chain.size(level));
  for (int i = 0; i < chain.size(level); ++i) pts[i] = i;
  return Clopen{level, std::move(pts)};
}

Clopen empty_clopen(int level) { return Clopen{level, {}}; }

Clopen pullback_clopen(const LevelChain& chain, const Clopen& u, int j) {
  if (j < u.level) throw std::invalid_argument("pullback must go to a finer level");
  if (j >= chain.levels()) throw std::invalid_argument("pullback level out of range");
  std::vector<int> pts;
  for (int x = 0; x < chain.size(j); ++x) {
    int img = chain.project_point(j, x, u.level);
    if (std::binary_search(u.points.begin(), u.points.end(), img)) pts.push_back(x);
  }
  return Clopen{j, std::move(pts)};
}

Clopen clopen_union(const Clopen& a, const Clopen& b) {
  if (a.level != b.level)
    throw std::invalid_argument("same-level operation on different levels");
  std::vector<int> pts;
  std::set_union(a.points.begin(), a.points.end(), b.points.begin(),
                 b.points.end(), std::back_inserter(pts));
  return Clopen{a.level, std::move(pts)};
}

Clopen clopen_intersection(const Clopen& a, const Clopen& b) {
  if (a.level != b.level)
    throw std::invalid_argument("same-level operation on different levels");
  std::vector<int> pts;
  std::set_intersection(a.points.begin(), a.points.end(), b.points.begin(),
                        b.points.end(), std::back_inserter(pts));
  return Clopen{a.level, std::move(pts)};
}

Clopen clopen_complement(const LevelChain& chain, const Clopen& a) {
  std::vector<int> pts;
  for (int x = 0; x < chain.size(a.level); ++x)
    if (!std::binary_search(a.points.begin(), a.points.end(), x)) pts.push_back(x);
  return Clopen{a.level, std::move(pts)};
}

bool clopen_subset(const Clopen& a, const Clopen& b) {
  if (a.level != b.level)
    throw std::invalid_argument("same-level operation on different levels");
  return std::includes(b.points.begin(), b.points.end(), a.points.begin(),
                       a.points.end());
}

std::vector<std::vector<int>> fibre_partition(const LevelChain& chain, int j, int i) {
  if (i >= j) throw std::invalid_argument("fibre partition needs i < j");
  if (i < 0 || j >= chain.levels())
    throw std::invalid_argument("fibre partition levels out of range");
  std::vector<std::vector<int>> blocks(chain.size(i));
  for (int x = 0; x < chain.size(j); ++x)
    blocks[chain.project_point(j, x, i)].push_back(x);
  return blocks;
}

std::vector<Clopen> enumerate_clopens(const LevelChain& chain, int level) {
  if (level < 0 || level >= chain.levels())
    throw std::invalid_argument("level out of range");
  const int n = chain.size(level);
  if (n > 16) throw std::invalid_argument("clopen enumeration capped at 16 points");
  std::vector<Clopen> out;
  out.reserve(1u << n);
  for (int mask = 0; mask < (1 << n); ++mask)
    out.push_back(clopen_of_mask(level, mask, n));
  return out;
}

int clopen_mask(const Clopen& u) {
  int mask = 0;
  for (int p : u.points) mask |= 1 << p;
  return mask;
}

Clopen clopen_of_mask(int level, int mask, int size) {
  std::vector<int> pts;
  for (int p = 0; p < size; ++p)
    if (mask & (1 << p)) pts.push_back(p);
  return Clopen{level, std::move(pts)};
}

}  // namespace stonemod
