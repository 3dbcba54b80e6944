#pragma once

// Dispatch a subcommand onto a parsed instance document and assemble the
// report.  Applicability is strict: an unknown subcommand, or one that does
// not apply to the document's kind, throws std::invalid_argument (the front
// end maps that to exit code 2); failed checks are carried in the report
// (exit code 1).  The support matrix is documented in docs/instance-format.md.

#include <string>
#include <vector>

#include "stonemod/instance.hpp"
#include "stonemod/report.hpp"

namespace stonemod {

struct RunOptions {
  unsigned seed = 0;
  int degree_cap = 2;
};

Report run_command(const std::string& subcommand, const InstanceDocument& doc,
                   const RunOptions& opts);

// Supported subcommands, in canonical order.
const std::vector<std::string>& subcommand_list();

}  // namespace stonemod
