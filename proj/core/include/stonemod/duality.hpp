#pragma once

#include <string>
#include <vector>

#include "stonemod/cosheaf.hpp"
#include "stonemod/sheaf.hpp"

namespace stonemod {

// ---------------------------------------------------------------------------
// Pointwise character duality between the two kinds of fibre systems.
//
// An etale system carries discrete fibres A^i_x with upward one-step maps
// A^i_{f(x)} -> A^{i+1}_x; taking character modules fibrewise reverses every
// arrow, which is exactly the shape of an inverse system:
// (A^{i+1}_x)^v -> (A^i_{f(x)})^v.  The module side flips with the duals.

ProSheafSystem dual_etale_to_prosheaf(const EtaleSystem& e);
EtaleSystem dual_prosheaf_to_etale(const ProSheafSystem& s);

// The same reversal on tables over clopens: values become character modules,
// each restriction A(V) -> A(U) becomes the corestriction
// A(U)^v -> A(V)^v, and conversely.  The constructors of the returned
// tables re-validate functoriality from scratch.
CosheafTable dual_presheaf_table(const PresheafTable& p);
PresheafTable dual_cosheaf_table(const CosheafTable& c);

// Fibrewise soundness of the dualization: the dual system consists of the
// character modules on the nose (with the side flipped), its one-step maps
// are the character maps of the originals, dualizing twice returns the
// original system exactly, and on every fibre the evaluation pairing is
// nondegenerate on both sides.
CheckResult fibre_duality_check(const EtaleSystem& e);
CheckResult fibre_duality_check(const ProSheafSystem& s);

// ---------------------------------------------------------------------------
// The sum/product comparison.
//
// For an etale system the section spaces are finite products prod_x A^i_x
// while the dualized system accumulates into finite direct sums
// (+)_x (A^i_x)^v.  The comparison map
//
//   theta_i : (+)_x (A^i_x)^v  ->  (prod_x A^i_x)^v
//
// assembles the characters of the projections.  The witness records theta
// at every level together with its per-fibre components and, on levels of
// small order, the explicit pairing table <chi, s> = sum_x <chi_x, s(x)>.

struct DualityWitness {
  bool ok = true;
  std::string witness;
  // theta_i, one per level; source is the level of the profinite direct
  // sum, target the character module of the level of the section spaces.
  std::vector<ModHom> level_isos;
  // fibre_characters[i][x] = (proj_x)^v : (A^i_x)^v -> (prod A^i)^v, the
  // x-th component of theta_i.
  std::vector<std::vector<ModHom>> fibre_characters;
  // Pairing table at the top level, indexed by the element enumerations of
  // (+)(A_x)^v (rows) and prod A_x (columns); values v mean v / exponent.
  // Left empty when the top level has order above the cap.
  std::vector<std::vector<Int>> top_pairing;
};

// Checks, at every level: equal orders on the two sides; theta_i is a
// module isomorphism; theta commutes with the connecting maps of the two
// towers.  On levels of order at most pairing_cap the pairing is tabulated
// and checked to be biadditive, nondegenerate on both sides, balanced over
// the ring, and equal to the fibrewise sum formula.
DualityWitness sum_product_duality_check(const EtaleSystem& e, Int pairing_cap = 64);

// Walks both paths around the comparison square -- dualize fibrewise and
// accumulate, or take section spaces and then characters -- and checks that
// theta identifies them at every level, naturally in the system: the
// naturality square is verified against a seeded diagonal-with-scalar
// morphism into a doubled system.  The overload for inverse systems runs
// the mirrored square through prod_x (M^i_x)^v and ((+)_x M^i_x)^v.
CheckResult square_commutes_check(const EtaleSystem& e, unsigned seed = 0);
CheckResult square_commutes_check(const ProSheafSystem& s, unsigned seed = 0);

}  // namespace stonemod
