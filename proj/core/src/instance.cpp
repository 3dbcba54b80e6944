#include "stonemod/instance.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "json.hpp"

namespace stonemod {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("parse: " + path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at_index(const std::string& path, size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

const json* opt_field(const json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

Int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<Int>();
}

int as_index(const json& j, const std::string& path) {
  Int v = as_int(j, path);
  if (v < -(1 << 30) || v > (1 << 30)) fail(path, "integer out of range");
  return static_cast<int>(v);
}

std::string as_str(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<Int> int_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of integers");
  std::vector<Int> out;
  for (size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], at_index(path, i)));
  return out;
}

std::vector<int> index_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of integers");
  std::vector<int> out;
  for (size_t i = 0; i < j.size(); ++i) out.push_back(as_index(j[i], at_index(path, i)));
  return out;
}

// Rethrow a constructor rejection with the field path attached.
template <typename F>
auto wrap(const std::string& path, F&& make) -> decltype(make()) {
  try {
    return make();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

FinAbGroup parse_abelian(const json& j, const std::string& path) {
  std::vector<Int> factors = int_list(j, path);
  return wrap(path, [&] { return FinAbGroup(std::move(factors)); });
}

IntMat parse_matrix(const json& j, const std::string& path) {
  int rows = as_index(field(j, "rows", path), join(path, "rows"));
  int cols = as_index(field(j, "cols", path), join(path, "cols"));
  if (rows < 0 || cols < 0) fail(path, "negative matrix shape");
  std::vector<Int> entries = int_list(field(j, "entries", path), join(path, "entries"));
  if (static_cast<int>(entries.size()) != rows * cols)
    fail(join(path, "entries"), "expected " + std::to_string(rows * cols) +
                                    " entries for a " + std::to_string(rows) + " x " +
                                    std::to_string(cols) + " matrix");
  IntMat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m.at(r, c) = entries[static_cast<size_t>(r) * cols + c];
  return m;
}

// Named definitions available for by-reference fields.
struct Defs {
  const json* chains = nullptr;
  const json* groups = nullptr;
  const json* rings = nullptr;
};

const json& resolve(const json* table, const std::string& name, const char* section,
                    const std::string& path) {
  if (table != nullptr && table->is_object()) {
    auto it = table->find(name);
    if (it != table->end()) return *it;
  }
  fail(path, "reference '" + name + "' is not defined under defs." + section);
}

LevelChain parse_chain(const json& j, const Defs& defs, const std::string& path) {
  if (j.is_string()) {
    return parse_chain(resolve(defs.chains, j.get<std::string>(), "chains", path), defs,
                       path);
  }
  std::vector<Int> sizes_raw = int_list(field(j, "sizes", path), join(path, "sizes"));
  std::vector<int> sizes;
  for (Int s : sizes_raw) sizes.push_back(static_cast<int>(s));
  const json& pj = field(j, "projections", path);
  if (!pj.is_array()) fail(join(path, "projections"), "expected an array of arrays");
  std::vector<std::vector<int>> projections;
  for (size_t i = 0; i < pj.size(); ++i)
    projections.push_back(index_list(pj[i], at_index(join(path, "projections"), i)));
  return wrap(path, [&] { return LevelChain(std::move(sizes), std::move(projections)); });
}

FinGroup parse_group(const json& j, const Defs& defs, const std::string& path) {
  if (j.is_string()) {
    return parse_group(resolve(defs.groups, j.get<std::string>(), "groups", path), defs,
                       path);
  }
  if (!j.is_object()) fail(path, "expected a group object or reference");
  if (const json* c = opt_field(j, "cyclic")) {
    int n = as_index(*c, join(path, "cyclic"));
    return wrap(path, [&] { return FinGroup::cyclic(n); });
  }
  if (const json* s = opt_field(j, "symmetric")) {
    int k = as_index(*s, join(path, "symmetric"));
    return wrap(path, [&] { return FinGroup::symmetric(k); });
  }
  if (const json* p = opt_field(j, "product")) {
    if (!p->is_array() || p->size() != 2)
      fail(join(path, "product"), "expected an array of two groups");
    FinGroup a = parse_group((*p)[0], defs, at_index(join(path, "product"), 0));
    FinGroup b = parse_group((*p)[1], defs, at_index(join(path, "product"), 1));
    return FinGroup::product(a, b);
  }
  if (const json* t = opt_field(j, "table")) {
    if (!t->is_array()) fail(join(path, "table"), "expected an array of rows");
    std::vector<std::vector<int>> table;
    for (size_t i = 0; i < t->size(); ++i)
      table.push_back(index_list((*t)[i], at_index(join(path, "table"), i)));
    int order = static_cast<int>(table.size());
    return wrap(path, [&] { return FinGroup(order, std::move(table)); });
  }
  fail(path, "expected one of 'cyclic', 'symmetric', 'product', 'table'");
}

FiniteRing parse_ring(const json& j, const Defs& defs, const std::string& path) {
  if (j.is_string()) {
    return parse_ring(resolve(defs.rings, j.get<std::string>(), "rings", path), defs, path);
  }
  if (!j.is_object()) fail(path, "expected a ring object or reference");
  if (const json* c = opt_field(j, "cyclic")) {
    Int m = as_int(*c, join(path, "cyclic"));
    return wrap(path, [&] { return cyclic_ring(m); });
  }
  if (const json* g = opt_field(j, "group-ring")) {
    Int m = as_int(field(*g, "modulus", join(path, "group-ring")),
                   join(path, "group-ring.modulus"));
    FinGroup grp = parse_group(field(*g, "group", join(path, "group-ring")), defs,
                               join(path, "group-ring.group"));
    return wrap(path, [&] { return group_ring(m, grp); });
  }
  fail(path, "expected one of 'cyclic', 'group-ring'");
}

Side parse_side(const json& j, const std::string& path) {
  std::string s = as_str(j, path);
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  fail(path, "expected 'left' or 'right'");
}

// Action of the ring's additive generators on `group`: either the string
// "trivial" (every generator acts as the identity) or one matrix per
// generator.
std::vector<AbHom> parse_action(const json& j, const FiniteRing& ring,
                                const FinAbGroup& group, const std::string& path) {
  std::vector<AbHom> action;
  if (j.is_string() && j.get<std::string>() == "trivial") {
    for (int i = 0; i < ring.rank(); ++i) action.push_back(AbHom::identity(group));
    return action;
  }
  if (!j.is_array()) fail(path, "expected \"trivial\" or an array of matrices");
  if (static_cast<int>(j.size()) != ring.rank())
    fail(path, "expected one matrix per ring generator (" + std::to_string(ring.rank()) +
                   ")");
  for (size_t i = 0; i < j.size(); ++i) {
    IntMat m = parse_matrix(j[i], at_index(path, i));
    action.push_back(
        wrap(at_index(path, i), [&] { return AbHom(group, group, std::move(m)); }));
  }
  return action;
}

FinModule parse_module_body(const json& j, const FiniteRing& ring, Side side,
                            const std::string& path) {
  FinAbGroup group = parse_abelian(field(j, "group", path), join(path, "group"));
  std::vector<AbHom> action =
      parse_action(field(j, "action", path), ring, group, join(path, "action"));
  return wrap(path, [&] {
    return FinModule(ring, std::move(group), std::move(action), side);
  });
}

FinModule parse_module(const json& j, const Defs& defs, const std::string& path) {
  FiniteRing ring = parse_ring(field(j, "ring", path), defs, join(path, "ring"));
  Side side = parse_side(field(j, "side", path), join(path, "side"));
  return parse_module_body(j, ring, side, path);
}

// Shared scaffolding of the sheaf and cosheaf table kinds.
struct TableParts {
  LevelChain chain;
  int level = 0;
  std::vector<FinModule> values;
  std::vector<std::tuple<int, int, ModHom>> maps;
};

TableParts parse_table(const json& j, const Defs& defs, const char* maps_key,
                       bool maps_run_down) {
  TableParts t{parse_chain(field(j, "chain", ""), defs, "chain"),
               as_index(field(j, "level", ""), "level"),
               {},
               {}};
  if (t.level < 0 || t.level >= t.chain.levels()) fail("level", "no such chain level");
  int points = t.chain.size(t.level);
  if (points > 4) fail("level", "tables cap at 4 points per level");
  int masks = 1 << points;
  FiniteRing ring = parse_ring(field(j, "ring", ""), defs, "ring");
  Side side = parse_side(field(j, "side", ""), "side");
  const json& vj = field(j, "values", "");
  if (!vj.is_array() || static_cast<int>(vj.size()) != masks)
    fail("values", "expected one module per subset (" + std::to_string(masks) + ")");
  for (size_t i = 0; i < vj.size(); ++i)
    t.values.push_back(parse_module_body(vj[i], ring, side, at_index("values", i)));
  const json& mj = field(j, maps_key, "");
  if (!mj.is_array()) fail(maps_key, "expected an array");
  for (size_t i = 0; i < mj.size(); ++i) {
    std::string mp = at_index(maps_key, i);
    const json& e = mj[i];
    int from = as_index(field(e, "from", mp), join(mp, "from"));
    int to = as_index(field(e, "to", mp), join(mp, "to"));
    if (from < 0 || from >= masks) fail(join(mp, "from"), "subset mask out of range");
    if (to < 0 || to >= masks) fail(join(mp, "to"), "subset mask out of range");
    int small = maps_run_down ? to : from;
    int large = maps_run_down ? from : to;
    if ((small & large) != small)
      fail(mp, "'" + std::string(maps_run_down ? "to" : "from") +
                   "' must be a subset of the other endpoint");
    IntMat m = parse_matrix(field(e, "matrix", mp), join(mp, "matrix"));
    ModHom h = wrap(mp, [&] {
      return ModHom(t.values[from], t.values[to],
                    AbHom(t.values[from].group(), t.values[to].group(), std::move(m)));
    });
    t.maps.emplace_back(from, to, std::move(h));
  }
  return t;
}

// Shared scaffolding of the two fibred-system kinds.
struct SystemParts {
  LevelChain chain;
  FiniteRing ring;
  Side side;
  std::vector<std::vector<FinModule>> fibres;
  std::vector<std::vector<ModHom>> transitions;
};

SystemParts parse_system(const json& j, const Defs& defs, bool upward) {
  LevelChain chain = parse_chain(field(j, "chain", ""), defs, "chain");
  FiniteRing ring = parse_ring(field(j, "ring", ""), defs, "ring");
  Side side = parse_side(field(j, "side", ""), "side");
  const json& fj = field(j, "fibres", "");
  if (!fj.is_array() || static_cast<int>(fj.size()) != chain.levels())
    fail("fibres", "expected one fibre list per chain level");
  std::vector<std::vector<FinModule>> fibres(chain.levels());
  for (int i = 0; i < chain.levels(); ++i) {
    const json& row = fj[i];
    std::string rp = at_index("fibres", i);
    if (!row.is_array() || static_cast<int>(row.size()) != chain.size(i))
      fail(rp, "expected one module per point of level " + std::to_string(i));
    for (size_t x = 0; x < row.size(); ++x)
      fibres[i].push_back(parse_module_body(row[x], ring, side, at_index(rp, x)));
  }
  const json& tj = field(j, "transitions", "");
  if (!tj.is_array() || static_cast<int>(tj.size()) != chain.levels() - 1)
    fail("transitions", "expected one transition list per chain step");
  std::vector<std::vector<ModHom>> trans(chain.levels() - 1);
  for (int i = 0; i + 1 < chain.levels(); ++i) {
    const json& row = tj[i];
    std::string rp = at_index("transitions", i);
    if (!row.is_array() || static_cast<int>(row.size()) != chain.size(i + 1))
      fail(rp, "expected one matrix per point of level " + std::to_string(i + 1));
    for (int x = 0; x < chain.size(i + 1); ++x) {
      std::string ep = at_index(rp, x);
      IntMat m = parse_matrix(row[x], ep);
      const FinModule& below = fibres[i][chain.project_point(i + 1, x, i)];
      const FinModule& above = fibres[i + 1][x];
      const FinModule& src = upward ? below : above;
      const FinModule& tgt = upward ? above : below;
      trans[i].push_back(wrap(ep, [&] {
        return ModHom(src, tgt, AbHom(src.group(), tgt.group(), std::move(m)));
      }));
    }
  }
  return SystemParts{std::move(chain), std::move(ring), side, std::move(fibres),
                     std::move(trans)};
}

std::vector<std::vector<int>> parse_perm_table(const json& j, int order, int size,
                                               const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != order)
    fail(path, "expected one permutation per group element (" + std::to_string(order) +
                   ")");
  std::vector<std::vector<int>> out;
  for (size_t i = 0; i < j.size(); ++i) {
    out.push_back(index_list(j[i], at_index(path, i)));
    if (static_cast<int>(out.back().size()) != size)
      fail(at_index(path, i), "expected a permutation of " + std::to_string(size) +
                                  " points");
  }
  return out;
}

std::vector<std::vector<int>> identity_perms(int order, int size) {
  std::vector<int> id(size);
  for (int i = 0; i < size; ++i) id[i] = i;
  return std::vector<std::vector<int>>(order, id);
}

void check_known_keys(const json& j, const std::set<std::string>& known) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (known.find(it.key()) == known.end())
      fail(it.key(), "unexpected field");
}

InstanceDocument parse_document(const json& j, const std::string& display_name) {
  if (!j.is_object()) fail(display_name, "top level must be an object");
  std::string kind = as_str(field(j, "kind", ""), "kind");
  Defs defs;
  if (const json* d = opt_field(j, "defs")) {
    defs.chains = opt_field(*d, "chains");
    defs.groups = opt_field(*d, "groups");
    defs.rings = opt_field(*d, "rings");
  }
  InstanceDocument doc;
  if (const json* n = opt_field(j, "name")) doc.name = as_str(*n, "name");

  std::set<std::string> known = {"kind", "name", "defs"};
  if (kind == "group") {
    doc.kind = InstanceKind::group;
    known.insert("invariant-factors");
    check_known_keys(j, known);
    doc.group = parse_abelian(field(j, "invariant-factors", ""), "invariant-factors");
  } else if (kind == "ring") {
    doc.kind = InstanceKind::ring;
    known.insert("ring");
    check_known_keys(j, known);
    doc.ring = parse_ring(field(j, "ring", ""), defs, "ring");
  } else if (kind == "module") {
    doc.kind = InstanceKind::module;
    known.insert("module");
    known.insert("subgroup");
    check_known_keys(j, known);
    doc.module = parse_module(field(j, "module", ""), defs, "module");
    if (const json* s = opt_field(j, "subgroup")) {
      std::vector<int> h = index_list(*s, "subgroup");
      const auto& info = doc.module->ring().group_info();
      if (!info.has_value())
        fail("subgroup", "the module's ring does not carry a basis group");
      for (size_t i = 0; i < h.size(); ++i)
        if (h[i] < 0 || h[i] >= info->basis_group.order())
          fail(at_index("subgroup", i), "group element out of range");
      if (!is_subgroup(info->basis_group, h))
        fail("subgroup", "not closed under the group operation");
      doc.subgroup = std::move(h);
    }
  } else if (kind == "chain") {
    doc.kind = InstanceKind::chain;
    known.insert("chain");
    check_known_keys(j, known);
    doc.chain = parse_chain(field(j, "chain", ""), defs, "chain");
  } else if (kind == "sheaf") {
    doc.kind = InstanceKind::sheaf;
    known.insert({"chain", "level", "ring", "side", "values", "restrictions"});
    check_known_keys(j, known);
    TableParts t = parse_table(j, defs, "restrictions", /*maps_run_down=*/true);
    doc.sheaf = wrap("restrictions", [&] {
      return PresheafTable(std::move(t.chain), t.level, std::move(t.values), t.maps);
    });
  } else if (kind == "cosheaf") {
    doc.kind = InstanceKind::cosheaf;
    known.insert({"chain", "level", "ring", "side", "values", "corestrictions"});
    check_known_keys(j, known);
    TableParts t = parse_table(j, defs, "corestrictions", /*maps_run_down=*/false);
    doc.cosheaf = wrap("corestrictions", [&] {
      return CosheafTable(std::move(t.chain), t.level, std::move(t.values), t.maps);
    });
  } else if (kind == "etale") {
    doc.kind = InstanceKind::etale;
    known.insert({"chain", "ring", "side", "fibres", "transitions"});
    check_known_keys(j, known);
    SystemParts s = parse_system(j, defs, /*upward=*/true);
    doc.etale = wrap("transitions", [&] {
      return EtaleSystem(std::move(s.chain), std::move(s.ring), s.side,
                         std::move(s.fibres), std::move(s.transitions));
    });
  } else if (kind == "prosheaf") {
    doc.kind = InstanceKind::prosheaf;
    known.insert({"chain", "ring", "side", "fibres", "transitions"});
    check_known_keys(j, known);
    SystemParts s = parse_system(j, defs, /*upward=*/false);
    doc.prosheaf = wrap("transitions", [&] {
      return ProSheafSystem(std::move(s.chain), std::move(s.ring), s.side,
                            std::move(s.fibres), std::move(s.transitions));
    });
  } else if (kind == "tree-action") {
    doc.kind = InstanceKind::tree_action;
    known.insert({"group", "tree", "vertex-action", "edge-action", "modulus",
                  "coefficients"});
    check_known_keys(j, known);
    FinGroup g = parse_group(field(j, "group", ""), defs, "group");
    const json& tj = field(j, "tree", "");
    Tree tree;
    tree.vertices = as_index(field(tj, "vertices", "tree"), "tree.vertices");
    const json& ej = field(tj, "edges", "tree");
    if (!ej.is_array()) fail("tree.edges", "expected an array of vertex pairs");
    for (size_t i = 0; i < ej.size(); ++i) {
      std::vector<int> pair = index_list(ej[i], at_index("tree.edges", i));
      if (pair.size() != 2) fail(at_index("tree.edges", i), "expected a vertex pair");
      tree.edges.emplace_back(pair[0], pair[1]);
    }
    int edge_count = static_cast<int>(tree.edges.size());
    std::vector<std::vector<int>> va =
        opt_field(j, "vertex-action") != nullptr
            ? parse_perm_table(*opt_field(j, "vertex-action"), g.order(), tree.vertices,
                               "vertex-action")
            : identity_perms(g.order(), tree.vertices);
    std::vector<std::vector<int>> ea =
        opt_field(j, "edge-action") != nullptr
            ? parse_perm_table(*opt_field(j, "edge-action"), g.order(), edge_count,
                               "edge-action")
            : identity_perms(g.order(), edge_count);
    doc.tree_action = wrap("tree", [&] { return make_tree_action(g, tree, va, ea); });
    Int m = as_int(field(j, "modulus", ""), "modulus");
    if (m < 2) fail("modulus", "modulus must be at least 2");
    doc.modulus = m;
    const json& cj = field(j, "coefficients", "");
    FiniteRing ring = wrap("modulus", [&] { return group_ring(m, g); });
    doc.coefficients = parse_module_body(cj, ring, Side::left, "coefficients");
  } else {
    fail("kind", "unknown kind '" + kind + "'");
  }
  return doc;
}

}  // namespace

std::string kind_name(InstanceKind k) {
  switch (k) {
    case InstanceKind::group: return "group";
    case InstanceKind::ring: return "ring";
    case InstanceKind::module: return "module";
    case InstanceKind::chain: return "chain";
    case InstanceKind::sheaf: return "sheaf";
    case InstanceKind::cosheaf: return "cosheaf";
    case InstanceKind::etale: return "etale";
    case InstanceKind::prosheaf: return "prosheaf";
    case InstanceKind::tree_action: return "tree-action";
  }
  throw std::logic_error("kind_name: unhandled kind");
}

InstanceDocument parse_instance_text(const std::string& text,
                                     const std::string& display_name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("parse: " + display_name + ": invalid JSON: " + e.what());
  }
  InstanceDocument doc = parse_document(j, display_name);
  if (doc.name.empty()) doc.name = display_name;
  return doc;
}

InstanceDocument parse_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("parse: " + path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string stem = path;
  size_t slash = stem.find_last_of('/');
  if (slash != std::string::npos) stem = stem.substr(slash + 1);
  size_t dot = stem.find_last_of('.');
  if (dot != std::string::npos) stem = stem.substr(0, dot);
  return parse_instance_text(buf.str(), stem);
}

}  // namespace stonemod
