#pragma once

// Finite (not necessarily abelian) groups given by full multiplication
// tables, their subgroups and cosets, and finite G-sets.
//
// Elements are indices 0..n-1; the table is validated exhaustively at
// construction (associativity, identity, inverses), so every FinGroup in
// circulation is genuinely a group.

#include <optional>
#include <string>
#include <vector>

namespace stonemod {

class FinGroup {
 public:
  // Validates the full table; throws std::invalid_argument on any failure.
  // `names` is optional display data; defaults to g0, g1, ...
  FinGroup(int order, std::vector<std::vector<int>> table,
           std::vector<std::string> names = {});

  static FinGroup trivial();
  static FinGroup cyclic(int n);
  static FinGroup product(const FinGroup& a, const FinGroup& b);
  // Symmetric group on k letters, k <= 5 (order 120 cap is plenty here).
  static FinGroup symmetric(int k);

  int order() const { return n_; }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[a][b]; }
  int inverse(int a) const { return inverse_[a]; }
  const std::string& name(int a) const { return names_[a]; }

  bool is_abelian() const;
  int element_order(int a) const;

  bool operator==(const FinGroup& o) const {
    return n_ == o.n_ && table_ == o.table_ && identity_ == o.identity_;
  }

 private:
  int n_ = 1;
  std::vector<std::vector<int>> table_;
  int identity_ = 0;
  std::vector<int> inverse_;
  std::vector<std::string> names_;
};

// Smallest subset containing `generators` and closed under multiplication
// (and hence inversion); sorted ascending.
std::vector<int> subgroup_closure(const FinGroup& g, const std::vector<int>& generators);

// True iff `elems` (any order, duplicates ignored) is a subgroup.
bool is_subgroup(const FinGroup& g, const std::vector<int>& elems);

// The subgroup as a FinGroup in its own right.  embed[i] is the index in g
// of element i of the result; element order follows the sorted elems.
struct SubgroupView {
  FinGroup group;
  std::vector<int> embed;
};
SubgroupView subgroup_group(const FinGroup& g, const std::vector<int>& elems);

// Left cosets aH as sorted index sets, ordered by smallest member.
std::vector<std::vector<int>> left_cosets(const FinGroup& g, const std::vector<int>& h);

// ---------------------------------------------------------------------------
// Finite G-sets: an action table, one permutation per group element.
class GSet {
 public:
  // act[a][y] = a . y.  Validates: each row is a permutation, identity acts
  // trivially, act respects multiplication.  Throws std::invalid_argument.
  GSet(FinGroup group, int size, std::vector<std::vector<int>> act);

  static GSet regular(const FinGroup& g);            // G on itself, left mult
  static GSet fixed_points(const FinGroup& g, int size);
  // G on the left cosets of the subgroup `h` (validated).
  static GSet cosets(const FinGroup& g, const std::vector<int>& h);

  const FinGroup& group() const { return group_; }
  int size() const { return size_; }
  int apply(int a, int y) const { return act_[a][y]; }

  // Orbits as sorted index sets, ordered by smallest member.
  std::vector<std::vector<int>> orbits() const;
  // Stabilizer subgroup of a point, sorted.
  std::vector<int> stabilizer(int y) const;

 private:
  FinGroup group_;
  int size_ = 0;
  std::vector<std::vector<int>> act_;
};

// The G-set on an orbit, with point k being orbit_elems[k] of the parent.
GSet orbit_gset(const GSet& y, const std::vector<int>& orbit_elems);

// For a transitive G-set, an isomorphism of G-sets to cosets(G, Stab(base))
// where base is the smallest point: result[y] = index of the coset sent to y.
// Throws if the action is not transitive.
std::vector<int> transitive_to_cosets(const GSet& y);

}  // namespace stonemod
