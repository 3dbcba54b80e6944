#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "stonemod/check.hpp"
#include "stonemod/module.hpp"
#include "stonemod/stone.hpp"

namespace stonemod {

// ---------------------------------------------------------------------------
// A presheaf of modules on the clopen algebra of one level of a chain: a
// module A(U) for every subset U of the level's points (indexed by bitmask,
// bit k = point k) and a restriction map res_U^V : A(V) -> A(U) for every
// U <= V.  The table stores at most 4 points (16 clopens).
//
// The constructor checks shapes, ring/side uniformity, res_U^U = id and
// functoriality res_U^V . res_V^W = res_U^W over all U <= V <= W.  It does
// NOT require A(empty) = 0 or any gluing property: defective tables are the
// point of the check functions below.
class PresheafTable {
 public:
  // `res` lists entries (maskV, maskU, map A(V) -> A(U)) for U <= V.  Entries
  // with U = V, or where either endpoint is the zero module, may be omitted
  // (they are forced: the identity, respectively the zero map).  All other
  // pairs U < V must appear exactly once.
  PresheafTable(LevelChain chain, int level, std::vector<FinModule> values,
                const std::vector<std::tuple<int, int, ModHom>>& res);

  const LevelChain& chain() const { return chain_; }
  int level() const { return level_; }
  int points() const { return points_; }
  const FiniteRing& ring() const { return value(0).ring(); }
  Side side() const { return value(0).side(); }

  const FinModule& value(int mask) const;
  const FinModule& value(const Clopen& u) const;
  // res_U^V as a map A(V) -> A(U); requires U <= V.
  const ModHom& res(int mask_v, int mask_u) const;
  const ModHom& res(const Clopen& v, const Clopen& u) const;

  Clopen clopen_of(int mask) const { return clopen_of_mask(level_, mask, points_); }

 private:
  LevelChain chain_;
  int level_ = 0;
  int points_ = 0;
  std::vector<FinModule> values_;                       // 2^points entries
  std::vector<std::vector<std::optional<ModHom>>> res_;  // [maskV][maskU]
};

// ---------------------------------------------------------------------------
// A module fibred over every level of a chain: fibres A^i_x for x in X_i and
// one-step transition maps A^i_{f(x)} -> A^{i+1}_x for x in X_{i+1} (f the
// chain projection).  Multi-step transitions are composites of the stored
// steps, so coherence across levels holds by construction.
class EtaleSystem {
 public:
  // transitions[i][x] maps fibres[i][f(x)] -> fibres[i+1][x]; there are
  // levels-1 transition layers.  The ring and side are stated explicitly so
  // that systems whose levels are all empty still carry their coefficients.
  EtaleSystem(LevelChain chain, FiniteRing ring, Side side,
              std::vector<std::vector<FinModule>> fibres,
              std::vector<std::vector<ModHom>> transitions);

  const LevelChain& chain() const { return chain_; }
  int levels() const { return chain_.levels(); }
  const FiniteRing& ring() const { return ring_; }
  Side side() const { return side_; }

  const FinModule& fibre(int level, int x) const;
  // The stored one-step map A^i_{f(x)} -> A^{i+1}_x, for x at level i+1.
  const ModHom& transition_step(int i, int x) const;
  // Composite A^i_{f(x)} -> A^j_x for i <= j and x at level j.
  ModHom transition(int i, int j, int x) const;

 private:
  LevelChain chain_;
  FiniteRing ring_;
  Side side_;
  std::vector<std::vector<FinModule>> fibres_;
  std::vector<std::vector<ModHom>> trans_;
};

// ---------------------------------------------------------------------------
// A chain of modules with connecting maps, read upward; the represented
// module is the final entry.  `sums` records, for each level, the direct-sum
// structure of the level module as a product of fibres.
struct DiscreteChainModule {
  std::vector<FinModule> levels;
  std::vector<ModHom> maps;  // maps[i] : levels[i] -> levels[i+1]
  std::vector<ModuleSum> sums;

  const FinModule& value() const { return levels.back(); }
};

// A section over a clopen: one fibre element per point of the domain.
struct SectionValue {
  int level = 0;
  Clopen domain;
  std::vector<GroupElem> values;  // indexed like domain.points
};

// ---------------------------------------------------------------------------
// Checks on presheaf tables.

// Exactness of  0 -> A(U) -> prod A(U_i) -> prod A(U_i /\ U_j)  for the
// given cover, U its union: the first map collects restrictions, the second
// takes differences of the two restrictions to each pairwise intersection.
// The empty cover reduces to "A(empty) = 0".  Throws on level mismatch.
CheckResult sheaf_condition_check(const PresheafTable& p, const std::vector<Clopen>& cover);

// For every clopen V and every partition of V into nonempty blocks (plus the
// empty partition of the empty set), A(V) -> prod A(block) must be bijective.
CheckResult disjoint_union_check(const PresheafTable& p);

// ---------------------------------------------------------------------------
// The equivalence between tables satisfying the gluing property and fibred
// systems.

// Fibres at the table's level are the singleton values A({x}); above that
// level the fibre at y is the value at the image singleton, below it the
// value on the block of points lying over y.  Every transition is a
// restriction map.  Throws std::invalid_argument if p fails
// disjoint_union_check.
EtaleSystem etale_of_sheaf(const PresheafTable& p);

// A(U) = product of the level-i fibres over U, with coordinate-projection
// restrictions.  Requires the level to have at most 4 points.
PresheafTable sheaf_of_etale(const EtaleSystem& e, int level);

// Composite sheaf_of_etale(etale_of_sheaf(p), p.level()) is isomorphic to p
// via the maps J_U collecting restrictions to singletons: each J_U must be
// bijective and the J squares against every restriction must commute.
CheckResult roundtrip_check_presheaf(const PresheafTable& p);

// For every level with at most 4 points, the fibres of
// etale_of_sheaf(sheaf_of_etale(e, i)) at level i equal e's level-i fibres.
CheckResult roundtrip_check_etale(const EtaleSystem& e);

// ---------------------------------------------------------------------------
// Sections.

// Level i carries the product of all level-i fibres; the connecting map
// pushes a section s to x |-> transition(s at f(x)).
DiscreteChainModule global_sections(const EtaleSystem& e);

// The section at the given level equal to a_k at each constrained point x_k
// and zero elsewhere.  Throws on duplicate points or invalid values.
SectionValue section_through_points(const EtaleSystem& e, int level,
                                    const std::vector<std::pair<int, GroupElem>>& assignments);

// ---------------------------------------------------------------------------
// Applying an additive functor fibrewise.

EtaleSystem lift_functor_sheaf(const FunctorSpec& f, const EtaleSystem& e);

// The canonical comparison map F(product of fibres) -> product of F(fibre),
// assembled from the lifted projections, must be bijective at the top level;
// when the top level has at most 4 points the comparison must also commute
// with every restriction of the associated tables.
CheckResult sections_functor_check(const FunctorSpec& f, const EtaleSystem& e);

}  // namespace stonemod
