#pragma once

// Independent test-side oracles.  Everything in here is deliberately written
// by brute force (element enumeration, closure by repeated addition), without
// using the library's SNF-based machinery, so that library results can be
// cross-checked against a second, dumber computation.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "stonemod/abelian.hpp"
#include "stonemod/group.hpp"
#include "stonemod/intmat.hpp"
#include "stonemod/module.hpp"
#include "stonemod/ring.hpp"

namespace oracle {

using stonemod::AbHom;
using stonemod::FinAbGroup;
using stonemod::GroupElem;
using stonemod::Int;
using stonemod::IntMat;

// All elements of the subgroup of g generated by `gens`, via BFS closure.
inline std::set<std::vector<Int>> subgroup_span(const FinAbGroup& g,
                                                const std::vector<GroupElem>& gens) {
  std::set<std::vector<Int>> seen{g.zero().residues};
  std::vector<GroupElem> frontier{g.zero()};
  while (!frontier.empty()) {
    std::vector<GroupElem> next;
    for (const GroupElem& x : frontier) {
      for (const GroupElem& s : gens) {
        GroupElem y = g.add(x, s);
        if (seen.insert(y.residues).second) next.push_back(y);
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

// Image of f as a set of residue tuples, by enumerating the source.
inline std::set<std::vector<Int>> image_set(const AbHom& f) {
  std::set<std::vector<Int>> out;
  for (const GroupElem& a : f.source().elements()) out.insert(f.apply(a).residues);
  return out;
}

// Kernel of f as a set, by enumerating the source.
inline std::set<std::vector<Int>> kernel_set(const AbHom& f) {
  std::set<std::vector<Int>> out;
  for (const GroupElem& a : f.source().elements())
    if (f.target().is_zero(f.apply(a))) out.insert(a.residues);
  return out;
}

// Exactness at the middle by raw enumeration.
inline bool exact_by_enumeration(const AbHom& f, const AbHom& g) {
  return image_set(f) == kernel_set(g);
}

// Verify an SNF decomposition against its defining properties.
inline bool snf_valid(const IntMat& m, const stonemod::SNFDecomposition& s) {
  using stonemod::bareiss_det;
  using stonemod::mat_mul;
  if (mat_mul(mat_mul(s.u, m), s.v) != s.d) return false;
  Int du = bareiss_det(s.u), dv = bareiss_det(s.v);
  if (du != 1 && du != -1) return false;
  if (dv != 1 && dv != -1) return false;
  // inverses really are inverses
  if (mat_mul(s.u, s.u_inv) != IntMat::identity(s.u.rows())) return false;
  if (mat_mul(s.v, s.v_inv) != IntMat::identity(s.v.rows())) return false;
  // d diagonal, nonnegative, divisibility chain, zeros last
  for (int i = 0; i < s.d.rows(); ++i)
    for (int j = 0; j < s.d.cols(); ++j)
      if (i != j && s.d.at(i, j) != 0) return false;
  int lim = std::min(s.d.rows(), s.d.cols());
  for (int i = 0; i < lim; ++i) {
    Int di = s.d.at(i, i);
    if (di < 0) return false;
    if (i + 1 < lim) {
      Int dn = s.d.at(i + 1, i + 1);
      if (di == 0 && dn != 0) return false;  // zeros must come last
      if (di != 0 && dn % di != 0) return false;
    }
  }
  return true;
}

// Number of homomorphisms A -> Q/Z by direct counting: generator j may go to
// any element killed by d_j, independently.
inline Int count_characters(const FinAbGroup& g) {
  Int n = 1;
  for (Int d : g.invariant_factors()) n *= d;
  return n;
}

// Invariant factors of a finite abelian group presented as a multiset of
// element orders — used to sanity-check structure claims on small groups.
inline std::multiset<Int> order_statistics(const FinAbGroup& g) {
  std::multiset<Int> out;
  for (const GroupElem& a : g.elements()) out.insert(g.element_order(a));
  return out;
}

// Deterministic RNG for test data.
inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

inline IntMat random_matrix(std::mt19937_64& r, int max_dim, Int lo, Int hi) {
  std::uniform_int_distribution<int> dim(0, max_dim);
  std::uniform_int_distribution<Int> entry(lo, hi);
  int rows = dim(r), cols = dim(r);
  IntMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(i, j) = entry(r);
  return m;
}

// A random divisibility chain with order at most `max_order`.
inline FinAbGroup random_group(std::mt19937_64& r, Int max_order) {
  std::uniform_int_distribution<int> klen(0, 3);
  std::uniform_int_distribution<Int> base(2, 6);
  std::uniform_int_distribution<Int> mult(1, 3);
  for (;;) {
    int k = klen(r);
    std::vector<Int> f;
    Int d = 1, total = 1;
    bool ok = true;
    for (int i = 0; i < k; ++i) {
      d = (i == 0) ? base(r) : d * mult(r);
      if (d < 2) d = 2;
      total *= d;
      if (total > max_order) { ok = false; break; }
      f.push_back(d);
    }
    if (ok) return FinAbGroup(f);
  }
}

// A uniformly random homomorphism A -> B: entry (i,j) must be a multiple of
// b_i / gcd(a_j, b_i); pick the multiplier uniformly mod gcd(a_j, b_i).
inline AbHom random_hom(std::mt19937_64& r, const FinAbGroup& a, const FinAbGroup& b) {
  IntMat m(b.rank(), a.rank());
  for (int i = 0; i < b.rank(); ++i)
    for (int j = 0; j < a.rank(); ++j) {
      Int bi = b.invariant_factors()[i], aj = a.invariant_factors()[j];
      Int g = stonemod::gcd_ll(aj, bi);
      std::uniform_int_distribution<Int> c(0, g - 1);
      m.at(i, j) = (bi / g) * c(r);
    }
  return AbHom(a, b, std::move(m));
}

// --- ring / module oracles --------------------------------------------------

// Convolution product in (Z/m)[G] computed directly from the definition.
inline std::vector<Int> convolution(const stonemod::FinGroup& g, Int m,
                                    const std::vector<Int>& a,
                                    const std::vector<Int>& b) {
  std::vector<Int> out(g.order(), 0);
  for (int i = 0; i < g.order(); ++i)
    for (int j = 0; j < g.order(); ++j)
      out[g.mul(i, j)] = (out[g.mul(i, j)] + a[i] * b[j]) % m;
  return out;
}

// Number of additive homomorphisms A -> B, counted by enumerating all
// generator-image tuples and keeping the well-defined ones.
inline Int count_homs_brute(const FinAbGroup& a, const FinAbGroup& b,
                            Int cap = 1 << 20) {
  auto targets = b.elements(cap);
  Int count = 0;
  std::vector<size_t> pick(a.rank(), 0);
  while (true) {
    bool ok = true;
    for (int j = 0; j < a.rank() && ok; ++j) {
      GroupElem image = targets[pick[j]];
      ok = b.is_zero(b.scalar_mul(a.invariant_factors()[j], image));
    }
    if (ok) ++count;
    int j = 0;
    for (; j < a.rank(); ++j) {
      if (++pick[j] < targets.size()) break;
      pick[j] = 0;
    }
    if (j == a.rank()) break;
  }
  return count;
}

// Number of module homomorphisms M -> N, counted the same way with the
// equivariance constraint checked on additive generators.
inline Int count_modhoms_brute(const stonemod::FinModule& m,
                               const stonemod::FinModule& n, Int cap = 1 << 20) {
  const FinAbGroup& a = m.group();
  const FinAbGroup& b = n.group();
  if (a.rank() == 0) return 1;
  auto targets = b.elements(cap);
  auto value_at = [&](const std::vector<size_t>& pick, const GroupElem& x) {
    GroupElem acc = b.zero();
    for (int j = 0; j < a.rank(); ++j)
      acc = b.add(acc, b.scalar_mul(x.residues[j], targets[pick[j]]));
    return acc;
  };
  Int count = 0;
  std::vector<size_t> pick(a.rank(), 0);
  while (true) {
    bool ok = true;
    for (int j = 0; j < a.rank() && ok; ++j)
      ok = b.is_zero(b.scalar_mul(a.invariant_factors()[j], targets[pick[j]]));
    for (int i = 0; ok && i < m.ring().rank(); ++i)
      for (int j = 0; j < a.rank() && ok; ++j) {
        GroupElem gen = a.zero();
        gen.residues[j] = 1;
        GroupElem lhs = value_at(pick, m.action_gen(i).apply(gen));
        GroupElem rhs = n.action_gen(i).apply(targets[pick[j]]);
        ok = lhs == rhs;
      }
    if (ok) ++count;
    int j = 0;
    for (; j < a.rank(); ++j) {
      if (++pick[j] < targets.size()) break;
      pick[j] = 0;
    }
    if (j == a.rank()) break;
  }
  return count;
}

// Full pointwise module-axiom check: unitality, biadditivity, and the
// action law for every pair of ring elements and every module element.
// Callers pick instances small enough for |R|^2 |M| to be reasonable.
inline bool module_axioms_exhaustive(const stonemod::FinModule& m,
                                     Int cap = 1 << 21) {
  const auto ring_elems = m.ring().add().elements(cap);
  const auto mod_elems = m.group().elements(cap);
  const FinAbGroup& g = m.group();
  for (const auto& x : mod_elems)
    if (m.act(m.ring().one(), x) != x) return false;
  for (const auto& r : ring_elems) {
    for (const auto& x : mod_elems)
      for (const auto& y : mod_elems)
        if (m.act(r, g.add(x, y)) != g.add(m.act(r, x), m.act(r, y)))
          return false;
    for (const auto& s : ring_elems) {
      GroupElem sum = m.ring().add().add(r, s);
      GroupElem prod = m.ring().mul(r, s);
      for (const auto& x : mod_elems) {
        if (m.act(sum, x) != g.add(m.act(r, x), m.act(s, x))) return false;
        GroupElem assoc = m.side() == stonemod::Side::left
                              ? m.act(r, m.act(s, x))
                              : m.act(s, m.act(r, x));
        if (m.act(prod, x) != assoc) return false;
      }
    }
  }
  return true;
}

// --- group cohomology oracles -----------------------------------------------
//
// Orders of H^0, H^1, H^2 computed from the textbook identities by raw
// enumeration of cochains as value tables: fixed points for H^0, the crossed
// homomorphism identity f(st) = s.f(t) + f(s) for H^1, and the 2-cocycle
// identity for H^2.  No matrices, no SNF, no complexes.

// The action of group element index `gi` on x through the group-ring module.
inline GroupElem act_by(const stonemod::FinModule& a, int gi, const GroupElem& x) {
  GroupElem r = a.ring().zero();
  r.residues[gi] = 1;
  return a.act(r, x);
}

inline Int brute_h0_order(const stonemod::FinGroup& g, const stonemod::FinModule& a) {
  Int count = 0;
  for (const GroupElem& x : a.group().elements()) {
    bool fixed = true;
    for (int s = 0; s < g.order() && fixed; ++s) fixed = act_by(a, s, x) == x;
    if (fixed) ++count;
  }
  return count;
}

inline Int brute_h1_order(const stonemod::FinGroup& g, const stonemod::FinModule& a,
                          Int cap = 1 << 20) {
  const FinAbGroup& gr = a.group();
  const auto av = gr.elements();
  const int q = g.order();
  Int total = 1;
  for (int i = 0; i < q; ++i) {
    total *= static_cast<Int>(av.size());
    if (total > cap) throw std::invalid_argument("brute_h1_order: too many cochains");
  }
  Int cocycles = 0;
  std::vector<size_t> f(q, 0);
  while (true) {
    bool ok = true;
    for (int s = 0; s < q && ok; ++s)
      for (int t = 0; t < q && ok; ++t)
        ok = av[f[g.mul(s, t)]] == gr.add(act_by(a, s, av[f[t]]), av[f[s]]);
    if (ok) ++cocycles;
    int j = 0;
    for (; j < q; ++j) {
      if (++f[j] < av.size()) break;
      f[j] = 0;
    }
    if (j == q) break;
  }
  std::set<std::vector<std::vector<Int>>> boundaries;
  for (const GroupElem& x : av) {
    std::vector<std::vector<Int>> vals;
    for (int s = 0; s < q; ++s)
      vals.push_back(gr.add(act_by(a, s, x), gr.neg(x)).residues);
    boundaries.insert(vals);
  }
  return cocycles / static_cast<Int>(boundaries.size());
}

inline Int brute_h2_order(const stonemod::FinGroup& g, const stonemod::FinModule& a,
                          Int cap = 1 << 20) {
  const FinAbGroup& gr = a.group();
  const auto av = gr.elements();
  const int q = g.order();
  Int total = 1;
  for (int i = 0; i < q * q; ++i) {
    total *= static_cast<Int>(av.size());
    if (total > cap) throw std::invalid_argument("brute_h2_order: too many cochains");
  }
  auto at = [&](const std::vector<size_t>& f, int s, int t) { return av[f[s * q + t]]; };
  Int cocycles = 0;
  std::vector<size_t> f(static_cast<size_t>(q) * q, 0);
  while (true) {
    bool ok = true;
    for (int s = 0; s < q && ok; ++s)
      for (int t = 0; t < q && ok; ++t)
        for (int u = 0; u < q && ok; ++u) {
          GroupElem lhs = gr.add(act_by(a, s, at(f, t, u)), at(f, s, g.mul(t, u)));
          GroupElem rhs = gr.add(at(f, g.mul(s, t), u), at(f, s, t));
          ok = lhs == rhs;
        }
    if (ok) ++cocycles;
    size_t j = 0;
    for (; j < f.size(); ++j) {
      if (++f[j] < av.size()) break;
      f[j] = 0;
    }
    if (j == f.size()) break;
  }
  std::set<std::vector<std::vector<Int>>> boundaries;
  std::vector<size_t> h(q, 0);
  while (true) {
    std::vector<std::vector<Int>> vals;
    for (int s = 0; s < q; ++s)
      for (int t = 0; t < q; ++t)
        vals.push_back(gr.add(act_by(a, s, av[h[t]]),
                              gr.add(gr.neg(av[h[g.mul(s, t)]]), av[h[s]]))
                           .residues);
    boundaries.insert(vals);
    int j = 0;
    for (; j < q; ++j) {
      if (++h[j] < av.size()) break;
      h[j] = 0;
    }
    if (j == q) break;
  }
  return cocycles / static_cast<Int>(boundaries.size());
}

}  // namespace oracle
