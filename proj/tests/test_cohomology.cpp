#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "stonemod/cohomology.hpp"

using namespace stonemod;

namespace {

// Trivial module Z-chain `a` over (Z/m)[g] with m = exponent(a).
FinModule triv(const FinGroup& g, const FinAbGroup& a) {
  return trivial_module(group_ring(a.exponent(), g), a, Side::left);
}

// Z/m with the generator of C_k acting as multiplication by -1.
FinModule negation_module(Int m, int k) {
  FinGroup g = FinGroup::cyclic(k);
  FiniteRing r = group_ring(m, g);
  std::vector<AbHom> action;
  FinAbGroup zm = FinAbGroup::cyclic(m);
  for (int i = 0; i < k; ++i)
    action.push_back(AbHom::scalar(zm, (i % 2 == 0) ? 1 : -1));
  return FinModule(r, zm, action, Side::left);
}

}  // namespace

TEST_CASE("subquotients present kernel mod image with transfer maps") {
  FinAbGroup z8 = FinAbGroup::cyclic(8);
  AbHom times4(z8, z8, IntMat::from_rows({{4}}));
  AbHom out_zero = AbHom::zero(z8, FinAbGroup::trivial());

  // Z/8 modulo {0,4}.
  Subquotient s = subquotient_of(times4, out_zero);
  CHECK(s.group == FinAbGroup({4}));
  CHECK(s.cycles == z8);

  SUBCASE("class and representative are mutually inverse") {
    for (const GroupElem& cls : s.group.elements())
      CHECK(subquotient_class(s, subquotient_rep(s, cls)) == cls);
    // class is additive on the ambient group
    for (const GroupElem& x : z8.elements())
      for (const GroupElem& y : z8.elements())
        CHECK(subquotient_class(s, z8.add(x, y)) ==
              s.group.add(subquotient_class(s, x), subquotient_class(s, y)));
    // boundaries become zero
    CHECK(s.group.is_zero(subquotient_class(s, z8.reduce({4}))));
    CHECK_FALSE(s.group.is_zero(subquotient_class(s, z8.reduce({2}))));
  }

  SUBCASE("composite of incoming and outgoing must vanish") {
    AbHom mod2(z8, FinAbGroup::cyclic(2), IntMat::from_rows({{1}}));
    CHECK_THROWS_AS(subquotient_of(AbHom::identity(z8), mod2),
                    std::invalid_argument);
  }

  SUBCASE("non-cycles are rejected by subquotient_class") {
    AbHom mod2(z8, FinAbGroup::cyclic(2), IntMat::from_rows({{1}}));
    Subquotient t = subquotient_of(AbHom::zero(FinAbGroup::trivial(), z8), mod2);
    CHECK(t.cycles == FinAbGroup({4}));  // even residues
    CHECK_THROWS_AS(subquotient_class(t, z8.reduce({3})), std::invalid_argument);
  }

  SUBCASE("induced maps act on classes through representatives") {
    AbHom scale3 = AbHom::scalar(z8, 3);
    AbHom ind = induced_on_subquotients(s, s, scale3);
    CHECK(ind == AbHom::scalar(s.group, 3));
  }

  SUBCASE("maps that break boundaries are rejected") {
    FinAbGroup z4 = FinAbGroup::cyclic(4);
    AbHom times2(z4, z4, IntMat::from_rows({{2}}));
    Subquotient src =
        subquotient_of(times2, AbHom::zero(z4, FinAbGroup::trivial()));
    Subquotient dst = subquotient_of(AbHom::zero(FinAbGroup::trivial(), z4),
                                     AbHom::zero(z4, FinAbGroup::trivial()));
    CHECK_THROWS_AS(induced_on_subquotients(src, dst, AbHom::identity(z4)),
                    std::invalid_argument);
  }
}

TEST_CASE("complex_check catches shape and composition defects") {
  FinAbGroup z4 = FinAbGroup::cyclic(4);
  AbHom times2(z4, z4, IntMat::from_rows({{2}}));

  CochainComplex good{{z4, z4, z4}, {times2, times2}};
  CHECK(complex_check(good).ok);

  SUBCASE("cohomology of the doubling complex") {
    std::vector<Subquotient> h = complex_cohomology(good);
    REQUIRE(h.size() == 2);
    CHECK(h[0].group == FinAbGroup({2}));  // ker(2) = {0,2}
    CHECK(h[1].group == FinAbGroup());     // ker(2) = im(2)
  }

  SUBCASE("mismatched endpoints are reported") {
    CochainComplex bad{{z4, FinAbGroup::cyclic(2), z4}, {times2, times2}};
    CheckResult r = complex_check(bad);
    CHECK_FALSE(r.ok);
    CHECK(r.witness.find("differential 0") != std::string::npos);
  }

  SUBCASE("group count is checked") {
    CochainComplex bad{{z4, z4}, {times2, times2}};
    CHECK_FALSE(complex_check(bad).ok);
  }

  SUBCASE("d.d != 0 is witnessed") {
    CochainComplex bad{{z4, z4, z4}, {AbHom::identity(z4), AbHom::identity(z4)}};
    CheckResult r = complex_check(bad);
    CHECK_FALSE(r.ok);
    CHECK(r.witness.find("d.d != 0") != std::string::npos);
    CHECK_THROWS_AS(complex_cohomology(bad), std::invalid_argument);
  }
}

TEST_CASE("bar cohomology of cyclic groups matches the gcd closed forms") {
  // For G = C_k acting trivially on Z/m:  H^0 = Z/m and
  // H^1 = Hom(C_k, Z/m) = Z/gcd(k,m),  H^2 = (Z/m)/k(Z/m) = Z/gcd(k,m).
  for (auto [k, m] : std::vector<std::pair<int, Int>>{
           {2, 2}, {2, 4}, {3, 2}, {3, 6}, {4, 2}, {4, 4}, {6, 4}, {5, 3}}) {
    CAPTURE(k);
    CAPTURE(m);
    CohomologyResult res =
        bar_cohomology(FinGroup::cyclic(k), triv(FinGroup::cyclic(k), FinAbGroup::cyclic(m)), 2);
    FinAbGroup expected_h12 = FinAbGroup::cyclic(std::gcd<Int>(k, m));
    REQUIRE(res.groups.size() == 3);
    CHECK(res.groups[0] == FinAbGroup::cyclic(m));
    CHECK(res.groups[1] == expected_h12);
    CHECK(res.groups[2] == expected_h12);
    CHECK(complex_check(res.complex).ok);
  }
}

TEST_CASE("bar cohomology orders match brute cocycle enumeration") {
  struct Row {
    FinGroup g;
    FinModule a;
    bool do_h2;
  };
  std::vector<Row> rows;
  rows.push_back({FinGroup::cyclic(2), triv(FinGroup::cyclic(2), FinAbGroup::cyclic(2)), true});
  rows.push_back({FinGroup::cyclic(2), triv(FinGroup::cyclic(2), FinAbGroup::cyclic(4)), true});
  rows.push_back({FinGroup::cyclic(2), negation_module(4, 2), true});
  rows.push_back({FinGroup::cyclic(3), triv(FinGroup::cyclic(3), FinAbGroup::cyclic(2)), true});
  rows.push_back({FinGroup::cyclic(4), negation_module(2, 4), false});
  rows.push_back({FinGroup::product(FinGroup::cyclic(2), FinGroup::cyclic(2)),
                  triv(FinGroup::product(FinGroup::cyclic(2), FinGroup::cyclic(2)),
                       FinAbGroup::cyclic(2)),
                  false});
  for (size_t i = 0; i < rows.size(); ++i) {
    CAPTURE(i);
    CohomologyResult res = bar_cohomology(rows[i].g, rows[i].a, 2);
    CHECK(res.groups[0].order() == oracle::brute_h0_order(rows[i].g, rows[i].a));
    CHECK(res.groups[1].order() == oracle::brute_h1_order(rows[i].g, rows[i].a));
    if (rows[i].do_h2)
      CHECK(res.groups[2].order() == oracle::brute_h2_order(rows[i].g, rows[i].a));
  }

  SUBCASE("negation on Z/4 under C2, full structure") {
    CohomologyResult res = bar_cohomology(FinGroup::cyclic(2), negation_module(4, 2), 2);
    CHECK(res.groups[0] == FinAbGroup({2}));  // fixed points {0,2}
    CHECK(res.groups[1] == FinAbGroup({2}));
    CHECK(res.groups[2] == FinAbGroup({2}));
  }
}

TEST_CASE("bar cohomology input validation") {
  FinGroup c2 = FinGroup::cyclic(2);
  FinModule a = triv(c2, FinAbGroup::cyclic(2));
  CHECK_THROWS_AS(bar_cohomology(c2, a, -1), std::invalid_argument);
  CHECK_THROWS_AS(bar_cohomology(FinGroup::cyclic(3), a, 1), std::invalid_argument);
  CHECK_THROWS_AS(bar_cohomology(c2, side_swap(a), 1), std::invalid_argument);
  // cap: |G|^{n_max+1} * rank exceeds 8192
  CHECK_THROWS_AS(bar_cohomology(c2, a, 20), std::invalid_argument);
  // rank-zero coefficients short-circuit to trivial groups at any degree
  FinModule zero = trivial_module(group_ring(2, c2), FinAbGroup::trivial(), Side::left);
  CohomologyResult res = bar_cohomology(c2, zero, 2);
  for (const FinAbGroup& g : res.groups) CHECK(g.is_trivial());
}

TEST_CASE("free resolutions are exact free covers") {
  struct Row {
    FinModule p;
    int expect_rank0;
  };
  FinGroup c2 = FinGroup::cyclic(2);
  FinGroup s3 = FinGroup::symmetric(3);
  std::vector<Row> rows;
  rows.push_back({triv(c2, FinAbGroup::cyclic(2)), 1});
  rows.push_back({ring_as_module(group_ring(4, c2), Side::left), 1});
  rows.push_back({induced_module(2, s3, subgroup_closure(s3, {1})), 1});
  for (size_t i = 0; i < rows.size(); ++i) {
    CAPTURE(i);
    FreeResolution res = free_resolution(rows[i].p, 2);
    REQUIRE(res.ranks.size() == 3);
    CHECK(res.ranks[0] == rows[i].expect_rank0);
    CHECK(is_surjective(res.augment.hom()));
    CHECK(exact_at(res.boundary[0].hom(), res.augment.hom()).exact);
    CHECK(exact_at(res.boundary[1].hom(), res.boundary[0].hom()).exact);
    for (int n = 0; n < 3; ++n) {
      // genuinely free: t_n unobstructed copies of the ring
      CHECK(res.layers[n].sum.group().rank() ==
            res.ranks[n] * rows[i].p.ring().rank());
      for (int j = 0; j < res.ranks[n]; ++j)
        CHECK(mod_compose(res.layers[n].proj[j], res.layers[n].inj[j]) ==
              ModHom::identity(ring_as_module(rows[i].p.ring(), Side::left)));
    }
  }

  SUBCASE("a free target stops the resolution immediately") {
    FreeResolution res = free_resolution(ring_as_module(group_ring(4, c2), Side::left), 2);
    CHECK(res.ranks == std::vector<int>{1, 0, 0});
  }
}

TEST_CASE("ext of free modules collapses to the coefficients") {
  FinGroup c2 = FinGroup::cyclic(2);
  FiniteRing r = group_ring(4, c2);
  FinModule a = negation_module(4, 2);
  ExtResult one = ext_via_resolution(ring_as_module(r, Side::left), a, 2);
  CHECK(one.groups[0] == a.group());
  CHECK(one.groups[1] == FinAbGroup());
  CHECK(one.groups[2] == FinAbGroup());
  ExtResult two = ext_via_resolution(free_module(r, Side::left, 2), a, 1);
  CHECK(two.groups[0] == direct_sum({a.group(), a.group()}).sum);
  CHECK(two.groups[1] == FinAbGroup());
}

TEST_CASE("bar and ext agree on trivial modules") {
  // Every group of order <= 6 against every abelian chain of order <= 8.
  std::vector<FinGroup> groups = {
      FinGroup::trivial(),   FinGroup::cyclic(2), FinGroup::cyclic(3),
      FinGroup::cyclic(4),   FinGroup::product(FinGroup::cyclic(2), FinGroup::cyclic(2)),
      FinGroup::cyclic(5),   FinGroup::cyclic(6), FinGroup::symmetric(3)};
  std::vector<FinAbGroup> coeffs = {FinAbGroup({2}),    FinAbGroup({4}),
                                    FinAbGroup({8}),    FinAbGroup({2, 2}),
                                    FinAbGroup({2, 4}), FinAbGroup({2, 2, 2})};
  for (const FinGroup& g : groups)
    for (const FinAbGroup& agrp : coeffs) {
      CAPTURE(g.order());
      CAPTURE(agrp.to_string());
      // the group ring itself must fit under the ring-order cap
      Int ring_order = 1;
      for (int i = 0; i < g.order(); ++i) ring_order *= agrp.exponent();
      if (ring_order > 4096) continue;
      FiniteRing r = group_ring(agrp.exponent(), g);
      FinModule p = trivial_module(r, FinAbGroup::cyclic(agrp.exponent()), Side::left);
      FinModule a = trivial_module(r, agrp, Side::left);
      CohomologyResult bar = bar_cohomology(g, a, 2);
      ExtResult ext = ext_via_resolution(p, a, 2);
      for (int n = 0; n <= 2; ++n) CHECK(bar.groups[n] == ext.groups[n]);
      // H^0 is the fixed-point group (everything, for a trivial action).
      CHECK(bar.groups[0] == agrp);
      CHECK(bar.groups[0].order() == oracle::brute_h0_order(g, a));
      // |H^1| divides |Z^1|.
      CHECK(bar.h[1].cycles.order() % bar.h[1].group.order() == 0);
      // Coprime order and coefficients kill positive degrees.
      if (std::gcd<Int>(g.order(), agrp.order()) == 1) {
        CHECK(bar.groups[1].is_trivial());
        CHECK(bar.groups[2].is_trivial());
      }
    }
}

TEST_CASE("shapiro identifications across subgroup shapes") {
  FinGroup c4 = FinGroup::cyclic(4);
  FinModule a2 = triv(c4, FinAbGroup::cyclic(2));

  SUBCASE("full subgroup: induction changes nothing") {
    ShapiroReport r = shapiro_check(c4, {0, 1, 2, 3}, a2, 2);
    CHECK(r.ok);
    CHECK(r.witness.empty());
  }

  SUBCASE("trivial subgroup: the regular module is free") {
    ShapiroReport r = shapiro_check(c4, {0}, a2, 2);
    CHECK(r.ok);
    CHECK(r.ext_side[0] == FinAbGroup({2}));
    CHECK(r.ext_side[1] == FinAbGroup());
    CHECK(r.ext_side[2] == FinAbGroup());
  }

  SUBCASE("index two: cohomology of C2 with Z/2 coefficients") {
    ShapiroReport r = shapiro_check(c4, {0, 2}, a2, 2);
    CHECK(r.ok);
    for (int n = 0; n <= 2; ++n) CHECK(r.ext_side[n] == FinAbGroup({2}));
  }

  SUBCASE("nontrivial coefficients restrict correctly") {
    // Generator of C4 acts on Z/4 by -1; on the subgroup {e, g^2} the action
    // is trivial, so the bar side computes H^n(C2, Z/4 trivial).
    FinModule a = negation_module(4, 4);
    ShapiroReport r = shapiro_check(c4, {0, 2}, a, 2);
    CHECK(r.ok);
    CHECK(r.bar_side[0] == FinAbGroup({4}));
    CHECK(r.bar_side[1] == FinAbGroup({2}));
  }

  SUBCASE("subgroups of S3") {
    FinGroup s3 = FinGroup::symmetric(3);
    FinModule a = triv(s3, FinAbGroup::cyclic(2));
    ShapiroReport rt = shapiro_check(s3, subgroup_closure(s3, {}), a, 2);
    CHECK(rt.ok);
    // any order-2 subgroup: pick one from the element catalog
    int invol = -1;
    for (int x = 1; x < s3.order() && invol < 0; ++x)
      if (s3.mul(x, x) == s3.identity()) invol = x;
    REQUIRE(invol >= 0);
    ShapiroReport r2 = shapiro_check(s3, subgroup_closure(s3, {invol}), a, 2);
    CHECK(r2.ok);
    for (int n = 0; n <= 2; ++n) CHECK(r2.bar_side[n] == FinAbGroup({2}));
  }
}

TEST_CASE("les of a split short exact sequence has zero connecting maps") {
  FinGroup c2 = FinGroup::cyclic(2);
  FiniteRing r = group_ring(2, c2);
  FinModule sub = trivial_module(r, FinAbGroup::cyclic(2), Side::left);
  FinModule quo = ring_as_module(r, Side::left);
  ModuleSum ms = module_direct_sum(r, Side::left, {sub, quo});
  FinModule a = trivial_module(r, FinAbGroup::cyclic(2), Side::left);

  LESReport rep = les_from_ses(ms.inj[0], ms.proj[1], a, 2);
  CHECK(rep.ok);
  CHECK(rep.witness.empty());
  REQUIRE(rep.groups.size() == 9);
  REQUIRE(rep.maps.size() == 8);
  // connecting maps sit after each (a_n, b_n) pair
  CHECK(rep.maps[2].is_zero_map());
  CHECK(rep.maps[5].is_zero_map());
  for (int n = 0; n <= 2; ++n) {
    CHECK(rep.groups[3 * n + 1] ==
          direct_sum({rep.groups[3 * n], rep.groups[3 * n + 2]}).sum);
    // quotient legs: Ext of a free module vanishes in positive degree
    CHECK(rep.groups[3 * n] == (n == 0 ? FinAbGroup({2}) : FinAbGroup()));
    // sub legs: H^n(C2, Z/2) = Z/2
    CHECK(rep.groups[3 * n + 2] == FinAbGroup({2}));
  }
  for (const ExactnessResult& er : rep.positions) CHECK(er.exact);
}

TEST_CASE("les over Z/4: doubling sequence with matched coefficients") {
  // 0 -> Z/2 -(x2)-> Z/4 -(mod 2)-> Z/2 -> 0 over the ring Z/4.
  FiniteRing r4 = cyclic_ring(4);
  FinModule m2 = trivial_module(r4, FinAbGroup::cyclic(2), Side::left);
  FinModule m4 = ring_as_module(r4, Side::left);
  ModHom incl(m2, m4, AbHom(m2.group(), m4.group(), IntMat::from_rows({{2}})));
  ModHom proj(m4, m2, AbHom(m4.group(), m2.group(), IntMat::from_rows({{1}})));

  SUBCASE("coefficients equal to the middle term") {
    LESReport rep = les_from_ses(incl, proj, m4, 2);
    CHECK(rep.ok);
    CHECK(rep.groups[0] == FinAbGroup({2}));  // Hom(Z/2, Z/4)
    CHECK(rep.groups[1] == FinAbGroup({4}));  // Hom(Z/4, Z/4)
    CHECK(rep.groups[2] == FinAbGroup({2}));  // Hom(Z/2, Z/4)
    CHECK(rep.maps[2].is_zero_map());         // Ext^1(Z/2, Z/4) = 0
    CHECK(rep.groups[3] == FinAbGroup());
  }

  SUBCASE("coefficients Z/2 force a nonzero connecting map") {
    LESReport rep = les_from_ses(incl, proj, m2, 2);
    CHECK(rep.ok);
    // degree 0: Z/2 -> Z/2 -> Z/2 with the middle map zero, so the
    // connecting map into Ext^1(quotient) must be injective.
    CHECK(rep.groups[0] == FinAbGroup({2}));
    CHECK(rep.groups[1] == FinAbGroup({2}));
    CHECK(rep.groups[2] == FinAbGroup({2}));
    CHECK(rep.maps[1].is_zero_map());
    CHECK_FALSE(rep.maps[2].is_zero_map());
    CHECK(is_injective(rep.maps[2]));
    for (const ExactnessResult& er : rep.positions) CHECK(er.exact);
  }
}

TEST_CASE("les input validation") {
  FiniteRing r8 = cyclic_ring(8);
  FinModule m4 = trivial_module(r8, FinAbGroup::cyclic(4), Side::left);
  FinModule m8 = ring_as_module(r8, Side::left);
  ModHom bad_incl(m4, m8, AbHom(m4.group(), m8.group(), IntMat::from_rows({{2}})));
  FinModule q4 = trivial_module(r8, FinAbGroup::cyclic(4), Side::left);
  ModHom bad_proj(m8, q4, AbHom(m8.group(), q4.group(), IntMat::from_rows({{1}})));
  // image of x2 is the even residues; kernel of mod 4 is {0,4}: inexact.
  CHECK_THROWS_AS(les_from_ses(bad_incl, bad_proj, m8, 1), std::invalid_argument);
  CHECK_THROWS_AS(les_from_ses(bad_incl, bad_proj, m8, -1), std::invalid_argument);
}
