#pragma once

// Finite abelian groups in invariant-factor normal form, homomorphisms given
// by integer matrices, and Pontryagin duality valued in Q/Z.
//
// Conventions, used uniformly everywhere:
//   * A group is a divisibility chain d1 | d2 | ... | dk with every di >= 2;
//     the trivial group is the empty chain.  Elements are residue tuples.
//   * A homomorphism A -> B is a (rank B) x (rank A) integer matrix read
//     modulo the target factors; column j is the image of the j-th generator
//     of A.  Well-definedness (dj^A * column_j = 0 in B) is enforced at
//     construction.
//   * Characters of A live in the dual group A* (same invariant factors);
//     the pairing <chi, a> = sum_i chi_i a_i / d_i in Q/Z is computed as an
//     exact residue modulo the exponent of A.  No floating point, ever.

#include <optional>
#include <string>
#include <vector>

#include "stonemod/intmat.hpp"

namespace stonemod {

struct GroupElem {
  std::vector<Int> residues;
  bool operator==(const GroupElem&) const = default;
};

class FinAbGroup {
 public:
  FinAbGroup() = default;  // trivial group
  explicit FinAbGroup(std::vector<Int> invariant_factors);

  static FinAbGroup trivial() { return FinAbGroup(); }
  // cyclic(1) is the trivial group; cyclic(m), m >= 2, is Z/m.
  static FinAbGroup cyclic(Int m);

  const std::vector<Int>& invariant_factors() const { return factors_; }
  int rank() const { return static_cast<int>(factors_.size()); }
  bool is_trivial() const { return factors_.empty(); }
  Int order() const;     // throws on 64-bit overflow
  Int exponent() const;  // lcm of the factors = last factor (1 for trivial)

  GroupElem zero() const { return GroupElem{std::vector<Int>(factors_.size(), 0)}; }
  GroupElem reduce(std::vector<Int> raw) const;
  bool is_valid(const GroupElem& a) const;

  GroupElem add(const GroupElem& a, const GroupElem& b) const;
  GroupElem neg(const GroupElem& a) const;
  GroupElem scalar_mul(Int c, const GroupElem& a) const;
  bool is_zero(const GroupElem& a) const;
  Int element_order(const GroupElem& a) const;

  // All elements in mixed-radix order (deterministic).  Throws if the order
  // exceeds `cap`.
  std::vector<GroupElem> elements(Int cap = 1 << 20) const;

  bool operator==(const FinAbGroup&) const = default;
  std::string to_string() const;

 private:
  std::vector<Int> factors_;
};

class AbHom {
 public:
  // Validates shape and well-definedness; throws std::invalid_argument.
  AbHom(FinAbGroup source, FinAbGroup target, IntMat matrix);

  static AbHom zero(const FinAbGroup& source, const FinAbGroup& target);
  static AbHom identity(const FinAbGroup& g);
  // diag of scalar c (multiplication by c).
  static AbHom scalar(const FinAbGroup& g, Int c);

  const FinAbGroup& source() const { return source_; }
  const FinAbGroup& target() const { return target_; }
  const IntMat& matrix() const { return m_; }

  GroupElem apply(const GroupElem& a) const;
  bool is_zero_map() const;

  bool operator==(const AbHom&) const = default;
  std::string to_string() const;

 private:
  FinAbGroup source_, target_;
  IntMat m_;  // stored reduced mod target factors
};

AbHom compose(const AbHom& g, const AbHom& f);  // g after f
AbHom hom_add(const AbHom& f, const AbHom& g);
AbHom hom_sub(const AbHom& f, const AbHom& g);
AbHom hom_scale(Int c, const AbHom& f);

// Preimage of y under f (a particular solution, deterministic), if any.
std::optional<GroupElem> solve_hom(const AbHom& f, const GroupElem& y);

bool is_injective(const AbHom& f);
bool is_surjective(const AbHom& f);
bool is_isomorphism(const AbHom& f);

// ---------------------------------------------------------------------------
// Finite quotients of integer lattices.
//
// Given a full-rank lattice L = span(gens) in Z^n and a finite-index
// sublattice R = span(rels) with R <= L, presents L/R in invariant-factor
// form together with bidirectional coordinate data:
//   rep:    column i is an ambient representative in Z^n of generator i;
//   coords: maps an ambient element of L to its residue tuple in the quotient.
// This one helper underlies kernels, images, cokernels and direct sums.
struct FiniteQuotient {
  FinAbGroup group;
  IntMat rep;  // n x rank(group)
  std::vector<Int> coords(const std::vector<Int>& ambient) const;

  // Internal solving data.
  IntMat u1;                // from SNF(gens): u1 * gens * v1 = d1
  std::vector<Int> d1diag;  // n leading diagonal entries of d1
  IntMat u2;                // from SNF(X) where basis * X = rels
  std::vector<Int> d2diag;
  std::vector<int> selected;  // indices with d2 entry > 1
};

FiniteQuotient finite_quotient(const IntMat& gens, const IntMat& rels);

// ---------------------------------------------------------------------------
// Kernel / image / cokernel with explicit structure maps.
struct HomKio {
  FinAbGroup kernel;
  AbHom kernel_incl;  // kernel -> source
  FinAbGroup image;
  AbHom image_incl;  // image -> target
  FinAbGroup cokernel;
  AbHom cokernel_proj;  // target -> cokernel
};

HomKio hom_kio(const AbHom& f);

// ---------------------------------------------------------------------------
// Direct sums with invariant-factor renormalization.
struct DirectSum {
  FinAbGroup sum;
  std::vector<AbHom> inj;   // summand -> sum
  std::vector<AbHom> proj;  // sum -> summand
  // When the concatenated factors sort into a divisibility chain the
  // renormalization is a coordinate permutation; perm[b][i] is then the sum
  // coordinate of local coordinate i of summand b.
  bool permutation_path = false;
  std::vector<std::vector<int>> perm;
};

DirectSum direct_sum(const std::vector<FinAbGroup>& parts);

// Assemble a map A -> sum(B_i) from components A -> B_i.
AbHom into_product(const DirectSum& ds, const std::vector<AbHom>& components);
// Assemble a map sum(A_i) -> B from components A_i -> B.
AbHom out_of_sum(const DirectSum& ds, const std::vector<AbHom>& components);
// Same, with the far endpoint given explicitly so that empty component
// lists (empty covers, empty sums) are legal.
AbHom into_product_from(const FinAbGroup& source, const DirectSum& ds,
                        const std::vector<AbHom>& components);
AbHom out_of_sum_to(const FinAbGroup& target, const DirectSum& ds,
                    const std::vector<AbHom>& components);

// ---------------------------------------------------------------------------
// Exactness.
struct ExactWitness {
  GroupElem element;        // element of the middle group witnessing failure
  std::string description;  // which inclusion fails
};

struct ExactnessResult {
  bool exact = true;
  std::optional<ExactWitness> witness;
};

// im(f) == ker(g) inside target(f) = source(g).
ExactnessResult exact_at(const AbHom& f, const AbHom& g);

// Joint kernel of a family of maps out of a common source.  Equivalent to
// the kernel of the map into the product of the targets, but computed by
// stacking matrices so the product group is never renormalized.
struct JointKernel {
  FinAbGroup kernel;
  AbHom incl;  // kernel -> source
};
JointKernel joint_kernel(const FinAbGroup& source, const std::vector<AbHom>& maps);

// Exactness of  src(f) -> mid -> (targets of the family):  the intersection
// of the kernels of `outgoing` equals the image of f.
ExactnessResult exact_at_family(const AbHom& f, const std::vector<AbHom>& outgoing);

// Exactness of  (sources of the family) -> mid -> tgt(g):  the kernel of g
// equals the subgroup spanned by the images of `incoming` together.
// Equivalent to exactness with the single map out of the direct sum of the
// sources, but computed by stacking matrices side by side.
ExactnessResult exact_at_cofamily(const std::vector<AbHom>& incoming, const AbHom& g);

// Exactness of seq at interior position i (the joint of seq[i-1], seq[i]).
// Sequence boundaries are the caller's business: prepend/append zero maps
// from/to the trivial group to encode 0 -> ... -> 0.
ExactnessResult check_exact(const std::vector<AbHom>& seq, int position);
// All interior positions.
ExactnessResult check_exact_all(const std::vector<AbHom>& seq);

// ---------------------------------------------------------------------------
// Pontryagin duality at finite scale.
FinAbGroup dual_group(const FinAbGroup& g);

// <chi,a> as a residue: value v means the rational v / exponent(g) in Q/Z.
Int pairing_num(const FinAbGroup& g, const GroupElem& chi, const GroupElem& a);

struct Character {
  FinAbGroup group;  // the group being charactered
  GroupElem chi;     // element of dual_group(group)
};

// f: A -> B induces f*: B* -> A* with <f*(chi), a> = <chi, f(a)>.
AbHom dual_hom(const AbHom& f);

// True iff the evaluation map A -> A** is an isomorphism and the pairing
// identity <eval(a), chi> = <chi, a> holds (checked exhaustively for small
// groups, on generator pairs otherwise — the pairing is biadditive).
bool double_dual_check(const FinAbGroup& g, Int exhaustive_cap = 4096);

}  // namespace stonemod
