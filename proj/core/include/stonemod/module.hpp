#pragma once

// Finite modules over finite rings, module homomorphisms, kernels / images /
// cokernels with module structure, permutation and induced modules, duality
// with side swap, and the hom-group machinery that makes Hom_Z(A,B) and
// Hom_R(M,N) tangible finite abelian groups (the key to uniform sampling and
// exhaustive enumeration of module maps).

#include <optional>
#include <vector>

#include "stonemod/abelian.hpp"
#include "stonemod/group.hpp"
#include "stonemod/ring.hpp"

namespace stonemod {

enum class Side { left, right };

class FinModule {
 public:
  // action[i] is the endomorphism given by the i-th additive ring generator.
  // Validates residue well-definedness, compatibility with the ring
  // multiplication (on generator pairs, equivalent to the exhaustive law by
  // bilinearity) and unitality; throws std::invalid_argument.
  FinModule(FiniteRing ring, FinAbGroup underlying, std::vector<AbHom> action,
            Side side);

  const FiniteRing& ring() const { return ring_; }
  const FinAbGroup& group() const { return group_; }
  Side side() const { return side_; }
  const AbHom& action_gen(int i) const { return action_[i]; }
  const std::vector<AbHom>& actions() const { return action_; }

  // The endomorphism m -> r.m (left) or m -> m.r (right).
  AbHom act_of(const GroupElem& r) const;
  GroupElem act(const GroupElem& r, const GroupElem& m) const;

  bool operator==(const FinModule& o) const {
    return ring_ == o.ring_ && group_ == o.group_ && action_ == o.action_ &&
           side_ == o.side_;
  }

 private:
  FiniteRing ring_;
  FinAbGroup group_;
  std::vector<AbHom> action_;
  Side side_;
};

class ModHom {
 public:
  // Validates that rings and sides agree, shapes match, and the map commutes
  // with every generator action; throws std::invalid_argument.
  ModHom(FinModule source, FinModule target, AbHom hom);

  static ModHom zero(const FinModule& source, const FinModule& target);
  static ModHom identity(const FinModule& m);

  const FinModule& source() const { return source_; }
  const FinModule& target() const { return target_; }
  const AbHom& hom() const { return hom_; }
  GroupElem apply(const GroupElem& x) const { return hom_.apply(x); }

  bool operator==(const ModHom&) const = default;

 private:
  FinModule source_, target_;
  AbHom hom_;
};

ModHom mod_compose(const ModHom& g, const ModHom& f);  // g after f
ModHom mod_add(const ModHom& f, const ModHom& g);
ModHom mod_sub(const ModHom& f, const ModHom& g);
ModHom mod_scale(Int c, const ModHom& f);
// Inverse of a bijective homomorphism (throws if not an isomorphism).
AbHom hom_inverse(const AbHom& f);
ModHom mod_inverse(const ModHom& f);

// ---------------------------------------------------------------------------
// Basic constructions.
FinModule zero_module(const FiniteRing& ring, Side side);
// The ring as a module over itself.
FinModule ring_as_module(const FiniteRing& ring, Side side);
// Free module R^t.
FinModule free_module(const FiniteRing& ring, Side side, int t);
// For a group ring (Z/m)[G]: a module on which every basis element of G acts
// as the identity.  Requires exponent(a) | m.
FinModule trivial_module(const FiniteRing& ring, const FinAbGroup& a, Side side);
// Free Z/m-module on the points of Y with G permuting coordinates; left
// module over group_ring(m, Y.group()).
FinModule permutation_module(Int m, const GSet& y);
// Permutation module on the left cosets G/H.
FinModule induced_module(Int m, const FinGroup& g, const std::vector<int>& h);
// Flip a module over a group ring to the other side via g -> g^{-1}.
FinModule side_swap(const FinModule& m);
// Restrict a module over (Z/m)[G] to (Z/m)[H] along a subgroup view of G.
FinModule restrict_module(const FinModule& m, const SubgroupView& h);

// ---------------------------------------------------------------------------
// Direct sums with module structure.
struct ModuleSum {
  FinModule sum;
  std::vector<ModHom> inj;
  std::vector<ModHom> proj;
  DirectSum group_sum;
};
ModuleSum module_direct_sum(const FiniteRing& ring, Side side,
                            const std::vector<FinModule>& parts);

// ---------------------------------------------------------------------------
// Kernel / image / cokernel with inherited module structure.
struct ModuleKio {
  FinModule kernel;
  ModHom kernel_incl;
  FinModule image;
  ModHom image_incl;
  FinModule cokernel;
  ModHom cokernel_proj;
};
ModuleKio module_kio(const ModHom& f);

// The submodule generated by a list of elements, with its inclusion.
struct Submodule {
  FinModule module;
  ModHom incl;
};
Submodule submodule_generated(const FinModule& m, const std::vector<GroupElem>& gens);

// ---------------------------------------------------------------------------
// Hom_Z(A, B) as a finite abelian group with explicit coordinates.
// Basis entry k corresponds to matrix position (p_k, q_k): homs with
// entry scale_k * c there, c in Z/g_k, g_k = gcd(a_q, b_p) > 1.
struct HomGroupZ {
  FinAbGroup group;
  FinAbGroup a, b;
  std::vector<int> basis_p, basis_q;
  std::vector<Int> basis_g, basis_scale;
  DirectSum sum;  // of cyclic(g_k)

  AbHom to_hom(const GroupElem& h) const;
  GroupElem from_hom(const AbHom& f) const;
};
HomGroupZ hom_group_z(const FinAbGroup& a, const FinAbGroup& b);

// Hom_R(M, N) as the subgroup of Hom_Z cut out by the commuting constraints.
struct HomRGroup {
  FinAbGroup group;
  HomGroupZ homz;
  AbHom incl;  // group -> homz.group
  FinModule m, n;

  ModHom to_modhom(const GroupElem& h) const;
  GroupElem from_modhom(const ModHom& f) const;
};
HomRGroup hom_r_group(const FinModule& m, const FinModule& n);

// All module homomorphisms M -> N (throws if more than `cap`).
std::vector<ModHom> enumerate_modhoms(const FinModule& m, const FinModule& n,
                                      Int cap = 4096);
// Deterministic search for a module isomorphism.
std::optional<ModHom> module_iso_search(const FinModule& m, const FinModule& n,
                                        Int cap = 4096);

// ---------------------------------------------------------------------------
// Orbit decomposition of a permutation module.
struct OrbitDecomposition {
  std::vector<std::vector<int>> orbits;
  std::vector<FinModule> orbit_modules;
  ModuleSum sum;
  ModHom witness;  // permutation_module(m, Y) -> sum.sum, an isomorphism
};
OrbitDecomposition orbit_decomposition(Int m, const GSet& y);

// ---------------------------------------------------------------------------
// Pontryagin duality for modules: underlying dual group, transposed action,
// side flipped (<chi . r, m> = <chi, r . m> and symmetrically).
FinModule dual_module(const FinModule& m);
ModHom dual_modhom(const ModHom& f);

// ---------------------------------------------------------------------------
// Additive functors applied pointwise.
struct FunctorSpec {
  enum class Kind { hom_z, tensor_z, hom_r };
  Kind kind = Kind::hom_z;
  Int n = 1;                  // modulus for hom_z / tensor_z
  std::optional<FinModule> p;  // for hom_r

  static FunctorSpec hom_z(Int n);
  static FunctorSpec tensor_z(Int n);
  static FunctorSpec hom_r(FinModule p);
};

// F(M).  hom_z(n) is Hom_Z(Z/n, -) = ker(n . -); tensor_z(n) is (-) x Z/n =
// coker(n . -); hom_r(P) is Hom_R(P, -), a module over the cyclic ring on
// the additive exponent of R.
FinModule lift_functor_apply(const FunctorSpec& f, const FinModule& m);
ModHom lift_functor_hom(const FunctorSpec& f, const ModHom& g);

}  // namespace stonemod
