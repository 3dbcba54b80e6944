#include "stonemod/report.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace stonemod {

bool Report::ok() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

void Report::add_check(const std::string& name, bool ok, const std::string& witness) {
  checks.push_back(CheckLine{name, ok, ok ? std::string() : witness});
}

void Report::add_data(const std::string& key, const std::string& value) {
  data.emplace_back(key, value);
}

namespace {

std::vector<CheckLine> sorted_checks(const Report& r) {
  std::vector<CheckLine> cs = r.checks;
  std::stable_sort(cs.begin(), cs.end(),
                   [](const CheckLine& a, const CheckLine& b) { return a.name < b.name; });
  return cs;
}

}  // namespace

std::string render_text(const Report& r) {
  std::ostringstream os;
  os << "command: " << r.command << "\n";
  os << "instance: " << r.instance << "\n";
  os << "seed: " << r.seed << "\n";
  os << "degree-cap: " << r.degree_cap << "\n";
  for (const auto& c : sorted_checks(r)) {
    os << "check " << c.name << ": " << (c.ok ? "ok" : "FAIL");
    if (!c.ok && !c.witness.empty()) os << " -- " << c.witness;
    os << "\n";
  }
  for (const auto& [key, value] : r.data) os << key << ": " << value << "\n";
  os << "result: " << (r.ok() ? "pass" : "fail") << "\n";
  os << "elapsed-ms: " << static_cast<long long>(r.elapsed_ms) << "\n";
  return os.str();
}

std::string render_structured(const Report& r) {
  nlohmann::json j;
  j["command"] = r.command;
  j["instance"] = r.instance;
  j["seed"] = r.seed;
  j["degree-cap"] = r.degree_cap;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : sorted_checks(r)) {
    nlohmann::json e;
    e["name"] = c.name;
    e["ok"] = c.ok;
    if (!c.ok) e["witness"] = c.witness;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  nlohmann::json data = nlohmann::json::array();
  for (const auto& [key, value] : r.data)
    data.push_back(nlohmann::json::array({key, value}));
  j["data"] = std::move(data);
  j["result"] = r.ok() ? "pass" : "fail";
  return j.dump(2) + "\n";
}

}  // namespace stonemod
