// Command-line front end.  Exit codes: 0 every check passed, 1 at least one
// check failed (witness in the report), 2 malformed input (bad file, schema
// violation, inapplicable subcommand, bad flags).

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "stonemod/instance.hpp"
#include "stonemod/report.hpp"
#include "stonemod/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact finite-scale checks on sheaves of discrete modules, "
               "cosheaves of profinite modules, and their duality"};
  app.require_subcommand(1);

  std::string file;
  std::string format = "text";
  unsigned seed = 0;
  int degree_cap = 2;
  if (const char* env = std::getenv("STONEMOD_DEGREE_CAP")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0 && v <= 8) degree_cap = static_cast<int>(v);
  }

  const std::map<std::string, std::string> blurb = {
      {"validate", "structural and gluing checks for the document"},
      {"dualize", "character dual with double-dual verification"},
      {"sections", "global section / direct-sum tower"},
      {"directsum", "assembly maps and the universal property"},
      {"roundtrip", "table <-> fibred system round trip"},
      {"duality-square", "sum/product duality and the comparison square"},
      {"cohomology", "bar cohomology of the module's group"},
      {"shapiro", "induced-module Ext against subgroup cohomology"},
      {"mv-check", "Mayer-Vietoris sequence of a tree action"},
  };
  for (const auto& name : stonemod::subcommand_list()) {
    CLI::App* sub = app.add_subcommand(name, blurb.at(name));
    sub->add_option("file", file, "instance document (JSON)")->required();
    sub->add_option("--seed", seed, "seed for the randomized naturality probe")
        ->capture_default_str();
    sub->add_option("--degree-cap", degree_cap, "top cohomological degree")
        ->check(CLI::Range(0, 8))
        ->capture_default_str();
    sub->add_option("--format", format, "report format: text | structured")
        ->check(CLI::IsMember({"text", "structured"}))
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    stonemod::InstanceDocument doc = stonemod::parse_instance(file);
    stonemod::Report rep =
        stonemod::run_command(sub, doc, stonemod::RunOptions{seed, degree_cap});
    std::cout << (format == "structured" ? stonemod::render_structured(rep)
                                         : stonemod::render_text(rep));
    return rep.ok() ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
