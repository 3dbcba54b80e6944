#pragma once

// Reports produced by command runs: a list of named check verdicts with
// witnesses, plus ordered data lines (rendered values: groups, module lists,
// long exact sequences).  Two renderings exist: a human-readable text form
// that includes wall-clock timing, and a structured JSON form that omits
// timing so that equal inputs produce byte-identical output.  Checks are
// sorted by name in both renderings; data lines keep insertion order.

#include <string>
#include <utility>
#include <vector>

#include "stonemod/intmat.hpp"

namespace stonemod {

struct CheckLine {
  std::string name;
  bool ok = true;
  std::string witness;  // empty when ok
};

struct Report {
  std::string command;
  std::string instance;
  unsigned seed = 0;
  int degree_cap = 2;
  std::vector<CheckLine> checks;
  std::vector<std::pair<std::string, std::string>> data;
  double elapsed_ms = 0.0;  // text rendering only

  bool ok() const;
  void add_check(const std::string& name, bool ok, const std::string& witness = "");
  void add_data(const std::string& key, const std::string& value);
};

std::string render_text(const Report& r);
std::string render_structured(const Report& r);

}  // namespace stonemod
