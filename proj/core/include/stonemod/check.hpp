#pragma once

#include <string>

namespace stonemod {

// Outcome of a semantic check.  `witness` is a human-readable description of
// the first failure found; empty when `ok`.
struct CheckResult {
  bool ok = true;
  std::string witness;
};

}  // namespace stonemod
