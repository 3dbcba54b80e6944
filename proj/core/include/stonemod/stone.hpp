#pragma once

// Stone spaces at desk scale: a finite tower of finite sets with surjections
// running downward, together with clopen-set bookkeeping.  "The space" is the
// top level; a clopen at level i stands for its preimage at every higher
// level, and clopens at different levels are compared after pulling both up
// to the common finer level.

#include <string>
#include <utility>
#include <vector>

namespace stonemod {

class LevelChain {
 public:
  // sizes[i] = |X_{i+1}| in 1-based speak; projections[i] maps level i+1
  // (0-based) down to level i: projections[i][x] is the image of x.
  // Shape is validated here; use validate_chain for the surjectivity check.
  LevelChain(std::vector<int> sizes, std::vector<std::vector<int>> projections);

  static LevelChain single(int size);

  int levels() const { return static_cast<int>(sizes_.size()); }
  int size(int level) const { return sizes_.at(level); }
  int top() const { return levels() - 1; }

  // Image of x from `from` down to `to` (to <= from).
  int project_point(int from, int x, int to) const;

  bool operator==(const LevelChain&) const = default;

 private:
  std::vector<int> sizes_;
  std::vector<std::vector<int>> projections_;
};

struct ChainCheck {
  bool ok = true;
  int failing_projection = -1;  // index i of a non-surjective step i+1 -> i
};
ChainCheck validate_chain(const LevelChain& chain);

// A clopen subset of the chain: a level and a sorted point set at that level.
struct Clopen {
  int level = 0;
  std::vector<int> points;
  bool operator==(const Clopen&) const = default;
};

Clopen make_clopen(const LevelChain& chain, int level, std::vector<int> points);
Clopen full_clopen(const LevelChain& chain, int level);
Clopen empty_clopen(int level);

// Preimage of u at the (finer) level j >= level(u).
Clopen pullback_clopen(const LevelChain& chain, const Clopen& u, int j);

// Same-level boolean operations.
Clopen clopen_union(const Clopen& a, const Clopen& b);
Clopen clopen_intersection(const Clopen& a, const Clopen& b);
Clopen clopen_complement(const LevelChain& chain, const Clopen& a);
bool clopen_subset(const Clopen& a, const Clopen& b);

// Blocks of X_j indexed by the points of X_i (i < j): block y is the fibre
// over y.  Blocks are disjoint and cover X_j.
std::vector<std::vector<int>> fibre_partition(const LevelChain& chain, int j, int i);

// All 2^{|X_i|} subsets at level i, in bitmask order; |X_i| <= 16.
std::vector<Clopen> enumerate_clopens(const LevelChain& chain, int level);

// Bitmask <-> clopen conversions at a level (bit k = point k).
int clopen_mask(const Clopen& u);
Clopen clopen_of_mask(int level, int mask, int size);

}  // namespace stonemod
