#pragma once

// Finite trees with a group action, the short exact sequence of permutation
// modules 0 -> Z/m[edges] -> Z/m[vertices] -> Z/m -> 0, and the Mayer-
// Vietoris identification of its long exact Ext sequence with stabilizer
// cohomology via Shapiro's lemma.

#include <string>
#include <utility>
#include <vector>

#include "stonemod/check.hpp"
#include "stonemod/cohomology.hpp"
#include "stonemod/group.hpp"
#include "stonemod/module.hpp"

namespace stonemod {

// ---------------------------------------------------------------------------
// An oriented graph intended to be a tree: edge e runs d0(e) -> d1(e).
struct Tree {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;  // (d0, d1) vertex indices
};

// Endpoints in range, no self-loops, connected, and |E| = |V| - 1 (together:
// a tree).  Returns the first failure as a witness instead of throwing, so
// non-trees can be fed onward to watch exactness fail.
CheckResult tree_check(const Tree& t);

// ---------------------------------------------------------------------------
// A group acting on a tree: permutations of vertices and of edges that
// commute with both endpoint maps.  Edge inversion (an element fixing an
// edge while swapping its endpoints) is rejected.
struct TreeAction {
  FinGroup group;
  Tree tree;
  GSet vertex_set;  // action on vertices
  GSet edge_set;    // action on edges
  std::vector<std::vector<int>> vertex_orbits;  // sorted, by smallest member
  std::vector<std::vector<int>> edge_orbits;
};

// Validates the two action tables (via GSet), compatibility with endpoints
// (a.d0(e) = d0(a.e), a.d1(e) = d1(a.e)) and absence of edge inversion;
// throws std::invalid_argument.  The tree itself is NOT required to pass
// tree_check — defective inputs are how exactness failures are exercised.
TreeAction make_tree_action(const FinGroup& g, const Tree& t,
                            const std::vector<std::vector<int>>& vertex_act,
                            const std::vector<std::vector<int>>& edge_act);

// Every group element fixes every vertex and edge.
TreeAction trivial_tree_action(const FinGroup& g, const Tree& t);

// ---------------------------------------------------------------------------
// The sequence 0 -> Z/m[E] -> Z/m[V] -> Z/m -> 0 of modules over
// (Z/m)[G]:  e |-> d1(e) - d0(e),  v |-> 1.  `result` records whether the
// sequence is exact (it is iff the graph is a tree; inexactness is reported
// as a witness, not an error).
struct TreeSES {
  CheckResult result;
  FinModule edge_mod;    // permutation module on edges
  FinModule vertex_mod;  // permutation module on vertices
  FinModule coeff;       // trivial module Z/m
  ModHom incl;           // edge_mod -> vertex_mod
  ModHom aug;            // vertex_mod -> coeff
};

TreeSES tree_ses(Int m, const TreeAction& ta);  // requires m >= 2

// ---------------------------------------------------------------------------
// Mayer-Vietoris: the long exact Ext(-, A) sequence of tree_ses(m, ta), with
// each node identified against group cohomology:
//   Ext^n(Z/m)        == H^n(G, A)            (bar complex),
//   Ext^n(Z/m[V])     == prod over vertex orbit reps of H^n(Stab(v), A),
//   Ext^n(Z/m[E])     == prod over edge   orbit reps of H^n(Stab(e), A),
// the stabilizer identifications going through an orbit decomposition into
// induced modules and shapiro_check for each orbit.  The returned report
// relabels the nodes accordingly; `ok` requires the long sequence exact at
// every position and every identification to hold.
LESReport mayer_vietoris_check(Int m, const TreeAction& ta, const FinModule& a,
                               int n_max);

}  // namespace stonemod
