#pragma once

// Instance documents: JSON descriptions of the domain objects, parsed into
// fully validated values.  A document carries one tagged payload (its kind)
// plus optional companions (a subgroup for cohomology runs, coefficients for
// tree actions).  Parsing is strict: any schema violation, dangling local
// reference, or constructor rejection surfaces as std::invalid_argument with
// the path of the offending field, and the front end maps that to exit
// code 2.
//
// Format sketch (full schema in docs/instance-format.md): matrices are
// row-major integer lists with explicit shape, abelian groups are
// invariant-factor lists, actions are permutation lists, and a top-level
// "defs" object provides named chains / groups / rings that payload fields
// reference by string.

#include <optional>
#include <string>
#include <vector>

#include "stonemod/cosheaf.hpp"
#include "stonemod/tree.hpp"

namespace stonemod {

enum class InstanceKind {
  group,
  ring,
  module,
  chain,
  sheaf,
  cosheaf,
  etale,
  prosheaf,
  tree_action,
};

std::string kind_name(InstanceKind k);

struct InstanceDocument {
  InstanceKind kind = InstanceKind::group;
  std::string name;  // optional display name from the document

  // Exactly the member matching `kind` is set, plus companions where noted.
  std::optional<FinAbGroup> group;
  std::optional<FiniteRing> ring;
  std::optional<FinModule> module;
  std::optional<std::vector<int>> subgroup;  // companion of `module`
  std::optional<LevelChain> chain;
  std::optional<PresheafTable> sheaf;
  std::optional<CosheafTable> cosheaf;
  std::optional<EtaleSystem> etale;
  std::optional<ProSheafSystem> prosheaf;
  std::optional<TreeAction> tree_action;  // with companions:
  std::optional<Int> modulus;
  std::optional<FinModule> coefficients;
};

// Parse a document from a file (throws std::invalid_argument; the message
// starts with "parse:" and names the field or the file).
InstanceDocument parse_instance(const std::string& path);

// Same, from an in-memory string; display_name appears in error messages.
InstanceDocument parse_instance_text(const std::string& text,
                                     const std::string& display_name);

}  // namespace stonemod
