#pragma once

// Group cohomology computed two independent ways: the inhomogeneous bar
// complex (cochains are functions G^n -> A, realized as the direct sum of
// |G|^n copies of A), and Ext groups from a deterministic free resolution
// over the group ring.  Agreement of the two routes on trivial modules, and
// Shapiro's lemma relating Ext of an induced module to the cohomology of the
// subgroup, are the headline checks.  Subquotients (kernel mod image, with
// maps to transfer elements in and out) and long exact sequences from short
// exact sequences of modules round out the toolkit.

#include <string>
#include <vector>

#include "stonemod/check.hpp"
#include "stonemod/group.hpp"
#include "stonemod/module.hpp"

namespace stonemod {

// ---------------------------------------------------------------------------
// Cochain complexes of finite abelian groups.

struct CochainComplex {
  std::vector<FinAbGroup> groups;  // C^0 .. C^N
  std::vector<AbHom> diffs;        // diffs[n] : C^n -> C^{n+1}, n = 0 .. N-1
};

// Shapes line up and d . d = 0 (witnessed on standard generators).
CheckResult complex_check(const CochainComplex& c);

// ---------------------------------------------------------------------------
// Subquotients ker(outgoing) / im(incoming), with transfer maps.

struct Subquotient {
  FinAbGroup group;   // the subquotient itself
  FinAbGroup cycles;  // ker(outgoing)
  AbHom incl;         // cycles -> ambient group (injective)
  AbHom proj;         // cycles -> group (surjective)
};

// Requires outgoing . incoming = 0; throws std::invalid_argument otherwise.
Subquotient subquotient_of(const AbHom& incoming, const AbHom& outgoing);

// Class of an ambient element (throws std::invalid_argument if it is not in
// ker(outgoing)), and a deterministic ambient representative of a class.
GroupElem subquotient_class(const Subquotient& s, const GroupElem& ambient);
GroupElem subquotient_rep(const Subquotient& s, const GroupElem& cls);

// The map on subquotients induced by an ambient map that sends cycles to
// cycles and boundaries to boundaries (throws std::invalid_argument if not).
AbHom induced_on_subquotients(const Subquotient& src, const Subquotient& dst,
                              const AbHom& ambient_map);

// H^n = ker(d_n) / im(d_{n-1}) for n = 0 .. N-1 (H^0 = ker d_0).  The top
// group C^N has no outgoing differential and gets no cohomology here.
std::vector<Subquotient> complex_cohomology(const CochainComplex& c);

// ---------------------------------------------------------------------------
// Bar cohomology H^n(G, A) for a left module A over (Z/m)[G].

struct CohomologyResult {
  CochainComplex complex;          // bar complex in degrees 0 .. n_max+1
  std::vector<Subquotient> h;      // H^0 .. H^{n_max} with transfer maps
  std::vector<FinAbGroup> groups;  // invariant factors of H^0 .. H^{n_max}
};

// Inhomogeneous bar complex: C^n = functions G^n -> A, indexed by tuples
// (g_1,...,g_n) little-endian in base |G|, with
//   (d phi)(g_1,...,g_{n+1}) = g_1 . phi(g_2,...,g_{n+1})
//     + sum_i (-1)^i phi(..., g_i g_{i+1}, ...)
//     + (-1)^{n+1} phi(g_1,...,g_n).
// Requires a left module over a group ring with basis group g; the largest
// cochain group must have abelian rank |G|^{n_max+1} * rank(A) <= 8192.
CohomologyResult bar_cohomology(const FinGroup& g, const FinModule& a,
                                int n_max);

// ---------------------------------------------------------------------------
// Free resolutions over the ring and Ext via Hom_R(resolution, A).

struct FreeResolution {
  FinModule target;
  std::vector<int> ranks;         // free rank t_i of layer i, i = 0 .. depth
  std::vector<ModuleSum> layers;  // layer i = R^{t_i} as a sum of ring copies
  std::vector<ModHom> boundary;   // boundary[i] : layer i+1 -> layer i
  ModHom augment;                 // layer 0 -> target (surjective)
};

// Deterministic resolution by free modules: generators of each successive
// kernel are chosen greedily from the standard abelian basis (first basis
// vector not in the span of the ring-submodule generated so far).  Layer
// ranks are inclusion-minimal for that order, not globally minimal.  Throws
// std::invalid_argument if a layer would exceed abelian rank 768.
FreeResolution free_resolution(const FinModule& p, int depth);

// C^n = Hom_R(F_n, A) realized as A^{t_n} (coordinates = values on the free
// basis), with differentials precomposition by the boundary maps.
CochainComplex hom_complex(const FreeResolution& r, const FinModule& a);

struct ExtResult {
  FreeResolution resolution;
  CochainComplex complex;          // Hom_R(F_*, A) in degrees 0 .. n_max+1
  std::vector<Subquotient> h;      // Ext^0 .. Ext^{n_max}
  std::vector<FinAbGroup> groups;  // invariant factors of the Ext groups
};

// Ext^n_R(P, A) for modules over the same ring and side, n = 0 .. n_max.
ExtResult ext_via_resolution(const FinModule& p, const FinModule& a,
                             int n_max);

// ---------------------------------------------------------------------------
// Shapiro's lemma at finite scale: for H <= G and a left (Z/m)[G]-module A,
//   Ext^n_{(Z/m)[G]}(Z/m[G/H], A)  ==  H^n(H, A restricted to H)
// degreewise as abelian groups, n = 0 .. n_max.

struct ShapiroReport {
  bool ok = true;
  std::string witness;
  std::vector<FinAbGroup> ext_side;  // Ext^n of the induced module
  std::vector<FinAbGroup> bar_side;  // H^n(H, A|_H)
};

ShapiroReport shapiro_check(const FinGroup& g, const std::vector<int>& h,
                            const FinModule& a, int n_max);

// ---------------------------------------------------------------------------
// The long exact sequence in Ext(-, A) of a short exact sequence of modules.

struct LESReport {
  bool ok = true;
  std::string witness;  // first failure, empty when ok
  // Nodes of the sequence: for each degree n = 0 .. n_max the three terms
  // Ext^n(quotient), Ext^n(middle), Ext^n(sub), then the connecting map
  // into degree n+1.
  std::vector<FinAbGroup> groups;
  std::vector<std::string> labels;         // one per node
  std::vector<AbHom> maps;                 // maps[k] : groups[k] -> groups[k+1]
  std::vector<ExactnessResult> positions;  // exactness at nodes 0 .. N-2
};

// For a short exact sequence 0 -> P' -(incl)-> P -(proj)-> P'' -> 0 of
// modules, the long exact sequence
//   0 -> Ext^0(P'',A) -> Ext^0(P,A) -> Ext^0(P',A) -> Ext^1(P'',A) -> ...
// computed from a horseshoe resolution of the middle term; connecting maps
// come from the snake construction with deterministic representatives.  The
// final node Ext^{n_max}(P') is truncated by the degree cap, so exactness is
// asserted at all nodes except the last.  Throws std::invalid_argument if
// the input sequence is not exact.
LESReport les_from_ses(const ModHom& incl, const ModHom& proj,
                       const FinModule& a, int n_max);

}  // namespace stonemod
