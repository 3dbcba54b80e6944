#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "stonemod/sheaf.hpp"

namespace stonemod {

// ---------------------------------------------------------------------------
// The mirror of PresheafTable: a module M(U) per subset of one level's
// points and a corestriction cor_U^V : M(U) -> M(V) for every U <= V (maps
// run from smaller to larger sets).  Same storage cap (4 points), same
// conventions for forced entries; M(empty) = 0 is a check, not a constructor
// requirement.
class CosheafTable {
 public:
  // `cor` lists entries (maskU, maskV, map M(U) -> M(V)) for U <= V.  Entries
  // with U = V or touching a zero module may be omitted.
  CosheafTable(LevelChain chain, int level, std::vector<FinModule> values,
               const std::vector<std::tuple<int, int, ModHom>>& cor);

  const LevelChain& chain() const { return chain_; }
  int level() const { return level_; }
  int points() const { return points_; }
  const FiniteRing& ring() const { return value(0).ring(); }
  Side side() const { return value(0).side(); }

  const FinModule& value(int mask) const;
  const FinModule& value(const Clopen& u) const;
  // cor_U^V as a map M(U) -> M(V); requires U <= V.
  const ModHom& cor(int mask_u, int mask_v) const;
  const ModHom& cor(const Clopen& u, const Clopen& v) const;

  Clopen clopen_of(int mask) const { return clopen_of_mask(level_, mask, points_); }

 private:
  LevelChain chain_;
  int level_ = 0;
  int points_ = 0;
  std::vector<FinModule> values_;
  std::vector<std::vector<std::optional<ModHom>>> cor_;  // [maskU][maskV]
};

// ---------------------------------------------------------------------------
// Fibres over every level with transition maps running DOWN the chain:
// one-step maps M^{i+1}_x -> M^i_{f(x)}.  The inverse-limit mirror of
// EtaleSystem.
class ProSheafSystem {
 public:
  ProSheafSystem(LevelChain chain, FiniteRing ring, Side side,
                 std::vector<std::vector<FinModule>> fibres,
                 std::vector<std::vector<ModHom>> transitions);

  const LevelChain& chain() const { return chain_; }
  int levels() const { return chain_.levels(); }
  const FiniteRing& ring() const { return ring_; }
  Side side() const { return side_; }

  const FinModule& fibre(int level, int x) const;
  // The stored one-step map M^{i+1}_x -> M^i_{f(x)}, for x at level i+1.
  const ModHom& transition_step(int i, int x) const;
  // Composite M^j_x -> M^i_{image of x} for i <= j and x at level j.
  ModHom transition(int i, int j, int x) const;

 private:
  LevelChain chain_;
  FiniteRing ring_;
  Side side_;
  std::vector<std::vector<FinModule>> fibres_;
  std::vector<std::vector<ModHom>> trans_;
};

// A chain of modules with connecting maps running downward; the represented
// inverse limit of the finite chain is the final (finest) entry.
struct ProChainModule {
  std::vector<FinModule> levels;
  std::vector<ModHom> maps;  // maps[i] : levels[i+1] -> levels[i]
  std::vector<ModuleSum> sums;

  const FinModule& value() const { return levels.back(); }
};

// The per-fibre structure maps of a direct sum: component x embeds the
// top-level fibre M_x into the sum.
struct CanonicalMorphism {
  std::vector<ModHom> components;
};

struct ProfiniteSum {
  ProChainModule module;
  CanonicalMorphism omega;
};

// ---------------------------------------------------------------------------
// Checks on cosheaf tables.

// Exactness of  (+) M(U_i /\ U_j) -> (+) M(U_i) -> M(union) -> 0  for the
// given cover: corestrictions assemble sections, pairwise differences span
// the relations.  The empty cover reduces to "M(empty) = 0".  Throws on
// level mismatch.
CheckResult cosheaf_condition_check(const CosheafTable& c, const std::vector<Clopen>& cover);

// For every clopen V and every partition of V into nonempty blocks (plus the
// empty partition of the empty set), (+) M(block) -> M(V) must be bijective.
CheckResult codisjoint_union_check(const CosheafTable& c);

// ---------------------------------------------------------------------------
// The equivalence with fibred systems.

// Stalk at the table's level is the singleton value M({x}); fibres above and
// below follow the attached clopens, and every transition is a corestriction
// from the smaller clopen into the larger.  Throws std::invalid_argument if
// c fails codisjoint_union_check.
ProSheafSystem coetale_of_cosheaf(const CosheafTable& c);

// M(U) = direct sum of the level-i fibres over U with coordinate-inclusion
// corestrictions.  Requires the level to have at most 4 points.
CosheafTable coshf_of_prosheaf(const ProSheafSystem& s, int level);

// Composite coshf_of_prosheaf(coetale_of_cosheaf(c), c.level()) is
// isomorphic to c via the maps assembling singleton corestrictions; each
// must be bijective and commute with every corestriction square.
CheckResult roundtrip_check_cosheaf(const CosheafTable& c);

// For every level with at most 4 points, the fibres of
// coetale_of_cosheaf(coshf_of_prosheaf(s, i)) at level i equal s's fibres.
CheckResult roundtrip_check_prosheaf(const ProSheafSystem& s);

// ---------------------------------------------------------------------------
// Profinite direct sums.

// Level i carries the direct sum of the level-i fibres; the connecting map
// adds each summand into the slot of its image point after transitioning.
// omega holds the top-level inclusions.
ProfiniteSum profinite_direct_sum(const ProSheafSystem& s);

struct Factorization {
  CheckResult result;
  std::optional<ModHom> beta_tilde;
};

// Given fibrewise maps beta[x] : M_x -> p at the top level, produce the
// unique map beta_tilde out of the direct sum with beta_tilde . omega_x =
// beta[x], verify those equations, and verify that the omega images span the
// sum (which pins the factorization down).  Throws if beta has the wrong
// shape, ring, or side.
Factorization universal_property_check(const ProSheafSystem& s, const FinModule& p,
                                       const std::vector<ModHom>& beta);

}  // namespace stonemod
