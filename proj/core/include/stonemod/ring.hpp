#pragma once

// Finite rings with unity: an additive FinAbGroup plus a bilinear
// multiplication given on additive generators.  Ring axioms are verified
// eagerly at construction (generator-level checks, which are equivalent to
// the exhaustive statements by bilinearity), with a hard size cap of 4096.

#include <optional>
#include <string>
#include <vector>

#include "stonemod/abelian.hpp"
#include "stonemod/group.hpp"

namespace stonemod {

// Records that a ring was built as a group ring (Z/m)[G]; additive generator
// i is then the basis element of group element i.  cyclic_ring(m) carries the
// trivial group, so every catalogued ring knows its group.
struct GroupRingInfo {
  Int modulus = 0;
  FinGroup basis_group = FinGroup::trivial();
};

class FiniteRing {
 public:
  // table[i][j] = product (generator i) * (generator j) as an element of the
  // additive group; `one` is the multiplicative identity.  Validates
  // bilinearity well-definedness, associativity, and unitality; throws
  // std::invalid_argument.  Rings of order > 4096 are rejected.
  FiniteRing(FinAbGroup additive, std::vector<std::vector<GroupElem>> table,
             GroupElem one);

  const FinAbGroup& add() const { return add_; }
  const GroupElem& one() const { return one_; }
  GroupElem zero() const { return add_.zero(); }
  int rank() const { return add_.rank(); }
  Int order() const { return add_.order(); }

  const GroupElem& generator_product(int i, int j) const { return table_[i][j]; }
  GroupElem mul(const GroupElem& r, const GroupElem& s) const;
  bool is_commutative() const;

  // Left/right multiplication by additive generator i, as endomorphisms of
  // the additive group.  These are the building blocks of module actions.
  AbHom left_mult_gen(int i) const;
  AbHom right_mult_gen(int i) const;
  AbHom left_mult(const GroupElem& r) const;
  AbHom right_mult(const GroupElem& r) const;

  const std::optional<GroupRingInfo>& group_info() const { return group_info_; }
  void set_group_info(GroupRingInfo info) { group_info_ = std::move(info); }

  bool operator==(const FiniteRing& o) const {
    return add_ == o.add_ && table_ == o.table_ && one_ == o.one_;
  }

 private:
  FinAbGroup add_;
  std::vector<std::vector<GroupElem>> table_;
  GroupElem one_;
  std::optional<GroupRingInfo> group_info_;
};

// Z/m with its usual multiplication; carries the trivial group as group info.
FiniteRing cyclic_ring(Int m);

// The group ring (Z/m)[G]: additive group (Z/m)^{|G|}, basis indexed by the
// elements of G, multiplication by convolution.
FiniteRing group_ring(Int m, const FinGroup& g);

}  // namespace stonemod
