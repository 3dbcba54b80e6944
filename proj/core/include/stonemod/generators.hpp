#pragma once

// Seeded instance families for property tests: catalogues of small abelian
// groups, random homomorphisms and short exact sequences, random chains and
// fibred systems, and random presheaf / cosheaf tables built so that their
// gluing verdict is known by construction (a product part plus "defect"
// summands that only a sheaf-condition failure can see).
//
// Every draw is a deterministic function of the engine state, and the engine
// is consumed in a fixed documented order, so a seed pins down the instance.

#include <cstdint>
#include <random>
#include <vector>

#include "stonemod/cosheaf.hpp"

namespace stonemod {

// Deterministic source of small uniform draws.  Uses the raw mt19937_64
// stream with a modulo reduction: the slight bias is irrelevant for test
// data and the sequence is identical on every platform, which is what makes
// seeded reports reproducible byte for byte.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, n); n >= 1.
  Int below(Int n);
  int index(int n) { return static_cast<int>(below(n)); }
  // True with probability percent / 100.
  bool chance(int percent) { return below(100) < percent; }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Abelian groups and maps.

// Every isomorphism class of order 1 .. max_order as an invariant-factor
// chain, sorted by order and then lexicographically by factors.
std::vector<FinAbGroup> abelian_catalogue(Int max_order);

// Uniform over abelian_catalogue(max_order).
FinAbGroup random_abelian(Rng& rng, Int max_order);
// Uniform over the catalogue entries whose exponent divides m.
FinAbGroup random_abelian_dividing(Rng& rng, Int max_order, Int m);

GroupElem random_element(Rng& rng, const FinAbGroup& g);

// Uniform over all homomorphisms a -> b (drawn through Hom_Z(a, b)).
AbHom random_hom(Rng& rng, const FinAbGroup& a, const FinAbGroup& b);

// 0 -> sub -> mid -> quo -> 0, exact by construction: sub is the image of a
// random map into mid and quo the corresponding cokernel.
struct AbelianSES {
  FinAbGroup sub, mid, quo;
  AbHom incl;  // sub -> mid
  AbHom proj;  // mid -> quo
};
AbelianSES random_abelian_ses(Rng& rng, Int max_order);

// ---------------------------------------------------------------------------
// Chains and fibred systems.  Modules are carried over cyclic_ring(m), where
// every abelian group of exponent dividing m is a module and every group map
// is equivariant, so random draws stay independent.

// `levels` levels with sizes nondecreasing up the chain, each at most
// max_size, and surjective projections.
LevelChain random_chain(Rng& rng, int levels, int max_size);

// Random fibres (order <= max_fibre, exponent dividing m) with uniformly
// random one-step transition maps; upward for the etale system, downward for
// the inverse system.
EtaleSystem random_etale(Rng& rng, const LevelChain& chain, Int m, Int max_fibre);
ProSheafSystem random_prosheaf(Rng& rng, const LevelChain& chain, Int m, Int max_fibre);

// ---------------------------------------------------------------------------
// Presheaf and cosheaf tables with a verdict known by construction.
//
// The table is a product of random point fibres plus a random "defect"
// summand at some subsets, glued in with zero structure maps.  Defects at
// singletons just enlarge a fibre, so they are never drawn; a defect at any
// other subset is invisible to restrictions but breaks gluing there.  Hence:
// the table is a sheaf (resp. cosheaf) iff every drawn defect is trivial.

struct PresheafDraw {
  PresheafTable table;
  bool is_sheaf = true;
  std::vector<FinAbGroup> fibres;   // per point
  std::vector<FinAbGroup> defects;  // per mask (trivial at singletons)
};
PresheafDraw random_presheaf_table(Rng& rng, int points, Int max_fibre,
                                   int defect_percent);

struct CosheafDraw {
  CosheafTable table;
  bool is_cosheaf = true;
  std::vector<FinAbGroup> fibres;
  std::vector<FinAbGroup> defects;
};
CosheafDraw random_cosheaf_table(Rng& rng, int points, Int max_fibre,
                                 int defect_percent);

// The product table on one level of a chain: A(U) = prod of the fibres over
// U with coordinate-projection restrictions.  Always a sheaf.
PresheafTable product_presheaf(const LevelChain& chain, int level, Int m,
                               const std::vector<FinAbGroup>& fibres);

// Two-point table with A({x}) = Z/2 but A(X) = 0: functorial, and the
// gluing map A(X) -> A({0}) x A({1}) cannot be surjective.
PresheafTable gluing_counterexample();

// Two-point table with M({x}) = Z/2, M(X) = Z/4 and corestrictions doubling
// into Z/4: the assembly map M({0}) + M({1}) -> M(X) misses the odd residues.
CosheafTable cogluing_counterexample();

}  // namespace stonemod
