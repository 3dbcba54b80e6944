// Instance parsing, command dispatch, report rendering, and the seeded
// instance generators.  Schema errors must carry field paths, corpus
// documents must drive every subcommand to its documented verdict, and
// structured reports must be byte-stable run to run.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "stonemod/generators.hpp"
#include "stonemod/instance.hpp"
#include "stonemod/report.hpp"
#include "stonemod/runner.hpp"

using namespace stonemod;

namespace {

std::string corpus_path(const std::string& rel) {
  return std::string(STONEMOD_CORPUS_DIR) + "/" + rel;
}

template <typename F>
std::string rejection_message(F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "<no rejection>";
}

bool mentions(const std::string& msg, const std::string& needle) {
  return msg.find(needle) != std::string::npos;
}

// Number of abelian groups of order n: the product over prime powers p^e of
// the number of partitions of e.
long long partitions(int e) {
  std::vector<long long> p(static_cast<size_t>(e) + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= e; ++part)
    for (int total = part; total <= e; ++total) p[total] += p[total - part];
  return p[e];
}

long long abelian_count_oracle(Int max_order) {
  long long total = 0;
  for (Int n = 1; n <= max_order; ++n) {
    long long count = 1;
    Int rest = n;
    for (Int p = 2; p * p <= rest; ++p) {
      int e = 0;
      while (rest % p == 0) {
        rest /= p;
        ++e;
      }
      if (e > 0) count *= partitions(e);
    }
    if (rest > 1) count *= partitions(1);
    total += count;
  }
  return total;
}

}  // namespace

TEST_CASE("corpus documents parse to the expected kinds") {
  InstanceDocument g = parse_instance(corpus_path("valid/group-minimal.json"));
  CHECK(g.kind == InstanceKind::group);
  CHECK(g.name == "group-minimal");
  CHECK(g.group->invariant_factors() == std::vector<Int>{2, 4});

  InstanceDocument m = parse_instance(corpus_path("valid/module-bar-c2.json"));
  CHECK(m.kind == InstanceKind::module);
  REQUIRE(m.subgroup.has_value());
  CHECK(m.subgroup->size() == 2);
  CHECK(m.module->ring().order() == 4);  // (Z/2)[C2]

  // References under defs resolve.
  InstanceDocument e = parse_instance(corpus_path("valid/etale-two-level.json"));
  CHECK(e.kind == InstanceKind::etale);
  CHECK(e.etale->chain().levels() == 2);

  InstanceDocument t = parse_instance(corpus_path("valid/tree-c2-star.json"));
  CHECK(t.kind == InstanceKind::tree_action);
  CHECK(t.tree_action->group.order() == 2);
  CHECK(t.tree_action->vertex_orbits.size() == 2);
  CHECK(t.modulus == 2);
}

TEST_CASE("schema violations name the offending field") {
  SUBCASE("invariant factor chain must divide") {
    std::string msg = rejection_message(
        [] { parse_instance(corpus_path("invalid/bad-group-factors.json")); });
    CHECK(mentions(msg, "parse:"));
    CHECK(mentions(msg, "invariant-factors"));
  }
  SUBCASE("dangling chain reference") {
    std::string msg = rejection_message(
        [] { parse_instance(corpus_path("invalid/bad-etale-dangling-chain.json")); });
    CHECK(mentions(msg, "'base'"));
    CHECK(mentions(msg, "defs.chains"));
  }
  SUBCASE("unknown kind") {
    std::string msg =
        rejection_message([] { parse_instance(corpus_path("invalid/bad-kind.json")); });
    CHECK(mentions(msg, "unknown kind 'widget'"));
  }
  SUBCASE("matrix entry count is checked against the declared shape") {
    std::string msg = rejection_message(
        [] { parse_instance(corpus_path("invalid/bad-matrix-shape.json")); });
    CHECK(mentions(msg, "module.action[0]"));
    CHECK(mentions(msg, "entries"));
  }
  SUBCASE("broken JSON is reported as such") {
    std::string msg =
        rejection_message([] { parse_instance(corpus_path("invalid/bad-json.json")); });
    CHECK(mentions(msg, "invalid JSON"));
  }
  SUBCASE("missing file") {
    std::string msg =
        rejection_message([] { parse_instance(corpus_path("no-such-file.json")); });
    CHECK(mentions(msg, "cannot open file"));
  }
  SUBCASE("missing required field") {
    std::string msg = rejection_message([] {
      parse_instance_text(R"({"kind": "sheaf", "chain": {"sizes": [1], "projections": []}})",
                          "inline");
    });
    CHECK(mentions(msg, "missing field 'level'"));
  }
  SUBCASE("value list length must match the subset count") {
    std::string msg = rejection_message([] {
      parse_instance_text(R"({
        "kind": "sheaf",
        "chain": {"sizes": [2], "projections": []},
        "level": 0, "ring": {"cyclic": 2}, "side": "left",
        "values": [{"group": [], "action": "trivial"}],
        "restrictions": []
      })",
                          "inline");
    });
    CHECK(mentions(msg, "values"));
    CHECK(mentions(msg, "(4)"));
  }
  SUBCASE("subgroup must be closed") {
    std::string msg = rejection_message([] {
      parse_instance_text(R"({
        "kind": "module",
        "module": {
          "ring": {"group-ring": {"modulus": 2, "group": {"cyclic": 2}}},
          "side": "left", "group": [2], "action": "trivial"
        },
        "subgroup": [1]
      })",
                          "inline");
    });
    CHECK(mentions(msg, "subgroup"));
    CHECK(mentions(msg, "not closed"));
  }
  SUBCASE("unexpected top-level fields are rejected") {
    std::string msg = rejection_message([] {
      parse_instance_text(R"({"kind": "group", "invariant-factors": [2], "extra": 1})",
                          "inline");
    });
    CHECK(mentions(msg, "extra"));
    CHECK(mentions(msg, "unexpected field"));
  }
}

TEST_CASE("run_command verdicts match the corpus manifest") {
  std::ifstream in(corpus_path("manifest.json"));
  REQUIRE(in.good());
  nlohmann::json manifest = nlohmann::json::parse(in);
  int entries = 0;
  for (const auto& [rel, runs] : manifest.items()) {
    CAPTURE(rel);
    bool is_invalid = rel.rfind("invalid/", 0) == 0;
    if (is_invalid) {
      CHECK_THROWS_AS(parse_instance(corpus_path(rel)), std::invalid_argument);
      ++entries;
      continue;
    }
    InstanceDocument doc = parse_instance(corpus_path(rel));
    for (const auto& run : runs) {
      std::string sub = run[0].get<std::string>();
      int want = run[1].get<int>();
      CAPTURE(sub);
      REQUIRE(want != 2);  // valid documents never produce input errors
      Report rep = run_command(sub, doc, RunOptions{});
      CHECK(rep.ok() == (want == 0));
      ++entries;
    }
  }
  CHECK(entries >= 30);
}

TEST_CASE("reports are byte-stable and canonically ordered") {
  SUBCASE("fresh parse and rerun render identically") {
    for (const char* rel : {"valid/etale-two-level.json", "valid/tree-segment.json",
                            "valid/prosheaf-z2-z3.json"}) {
      const char* sub = rel[6] == 'e'   ? "duality-square"
                        : rel[6] == 't' ? "mv-check"
                                        : "directsum";
      InstanceDocument a = parse_instance(corpus_path(rel));
      InstanceDocument b = parse_instance(corpus_path(rel));
      std::string ra = render_structured(run_command(sub, a, RunOptions{7, 2}));
      std::string rb = render_structured(run_command(sub, b, RunOptions{7, 2}));
      CHECK(ra == rb);
    }
  }
  SUBCASE("checks are sorted by name and witnesses only appear on failure") {
    Report r;
    r.command = "demo";
    r.instance = "demo";
    r.add_check("zeta", true, "should be dropped");
    r.add_check("alpha", false, "kept");
    std::string text = render_text(r);
    size_t a = text.find("check alpha");
    size_t z = text.find("check zeta");
    REQUIRE(a != std::string::npos);
    REQUIRE(z != std::string::npos);
    CHECK(a < z);
    CHECK(mentions(text, "check alpha: FAIL -- kept"));
    CHECK_FALSE(mentions(text, "should be dropped"));
    CHECK(mentions(text, "result: fail"));
    std::string structured = render_structured(r);
    CHECK_FALSE(mentions(structured, "elapsed"));  // timing kept out of stable output
  }
}

TEST_CASE("inapplicable subcommands are input errors") {
  InstanceDocument g = parse_instance(corpus_path("valid/group-minimal.json"));
  CHECK_THROWS_AS(run_command("cohomology", g, RunOptions{}), std::invalid_argument);
  CHECK_THROWS_AS(run_command("mv-check", g, RunOptions{}), std::invalid_argument);
  CHECK_THROWS_AS(run_command("bogus", g, RunOptions{}), std::invalid_argument);

  // A module over a ring with no distinguished basis group has no group
  // cohomology to compute.
  InstanceDocument plain = parse_instance_text(R"({
    "kind": "module",
    "module": {"ring": {"cyclic": 4}, "side": "left", "group": [4],
               "action": [{"rows": 1, "cols": 1, "entries": [1]}]}
  })",
                                               "inline");
  CHECK_THROWS_AS(run_command("cohomology", plain, RunOptions{}), std::invalid_argument);
  CHECK_THROWS_AS(run_command("shapiro", plain, RunOptions{}), std::invalid_argument);
}

TEST_CASE("the subcommand inventory is fixed") {
  const std::vector<std::string> expected = {
      "validate",  "dualize",        "sections",   "directsum", "roundtrip",
      "duality-square", "cohomology", "shapiro",   "mv-check"};
  CHECK(subcommand_list() == expected);
}

TEST_CASE("abelian catalogue is complete, sorted and duplicate-free") {
  std::vector<FinAbGroup> cat = abelian_catalogue(16);
  CHECK(static_cast<long long>(cat.size()) == abelian_count_oracle(16));
  std::set<std::vector<Int>> seen;
  Int last_order = 0;
  for (const FinAbGroup& g : cat) {
    CHECK(g.order() <= 16);
    CHECK(g.order() >= last_order);  // sorted by order
    last_order = g.order();
    CHECK(seen.insert(g.invariant_factors()).second);  // no duplicates
  }
  // Spot values: five groups of order 16, three of order 8.
  CHECK(std::count_if(cat.begin(), cat.end(),
                      [](const FinAbGroup& g) { return g.order() == 16; }) == 5);
  CHECK(std::count_if(cat.begin(), cat.end(),
                      [](const FinAbGroup& g) { return g.order() == 8; }) == 3);
}

TEST_CASE("random short exact sequences are exact") {
  Rng rng(2024);
  FinAbGroup triv({});
  for (int i = 0; i < 100; ++i) {
    AbelianSES s = random_abelian_ses(rng, 32);
    CAPTURE(i);
    CHECK(s.sub.order() * s.quo.order() == s.mid.order());
    std::vector<AbHom> seq = {AbHom::zero(triv, s.sub), s.incl, s.proj,
                              AbHom::zero(s.quo, triv)};
    ExactnessResult r = check_exact_all(seq);
    CHECK(r.exact);
  }
}

TEST_CASE("random fibred systems satisfy their construction contract") {
  Rng rng(55);
  for (int i = 0; i < 10; ++i) {
    LevelChain c = random_chain(rng, 1 + rng.index(3), 4);
    CHECK(validate_chain(c).ok);
    EtaleSystem e = random_etale(rng, c, 12, 8);
    ProSheafSystem p = random_prosheaf(rng, c, 12, 8);
    CHECK(e.chain().levels() == c.levels());
    CHECK(p.chain().levels() == c.levels());
  }
}

TEST_CASE("table draws know their own gluing verdict") {
  Rng rng(99);
  int sheaves = 0, defective = 0;
  for (int i = 0; i < 60; ++i) {
    int points = 2 + rng.index(2);
    PresheafDraw d = random_presheaf_table(rng, points, 8, 40);
    CAPTURE(i);
    CHECK(disjoint_union_check(d.table).ok == d.is_sheaf);
    (d.is_sheaf ? sheaves : defective) += 1;

    CosheafDraw cd = random_cosheaf_table(rng, points, 8, 40);
    CHECK(codisjoint_union_check(cd.table).ok == cd.is_cosheaf);
  }
  // The defect rate is high enough that both verdicts occur.
  CHECK(sheaves > 0);
  CHECK(defective > 0);
}

TEST_CASE("designed counterexamples fail their gluing checks") {
  CHECK_FALSE(disjoint_union_check(gluing_counterexample()).ok);
  CHECK_FALSE(codisjoint_union_check(cogluing_counterexample()).ok);
}
