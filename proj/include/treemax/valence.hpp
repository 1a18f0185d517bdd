// treemax: valence specifications.
//
// A tree is described by a height-indexed valence rule (piecewise constant as
// a function of height, first matching entry wins) plus finitely many
// per-vertex overrides. Valences are >= 3 everywhere; this is what makes every
// shell at least double per level and underpins all tail certificates.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "treemax/address.hpp"
#include "treemax/errors.hpp"

namespace treemax {

struct RuleEntry {
  std::optional<long long> h_lt;  // applies to heights < h_lt
  std::optional<long long> h_ge;  // applies to heights >= h_ge
  int nu = 0;                     // neither bound set: applies to all heights

  bool matches(long long h) const {
    if (h_lt && h_ge) return h < *h_lt && h >= *h_ge;
    if (h_lt) return h < *h_lt;
    if (h_ge) return h >= *h_ge;
    return true;
  }
};

class ValenceSpec {
 public:
  ValenceSpec() = default;
  ValenceSpec(std::vector<RuleEntry> rule, std::map<VertexAddress, int> overrides = {})
      : rule_(std::move(rule)), overrides_(std::move(overrides)) {
    validate();
  }

  // nu at a height, ignoring overrides.
  int nu_at_height(long long h) const {
    for (const auto& e : rule_)
      if (e.matches(h)) return e.nu;
    fail(Errc::bad_valence, "valence rule does not cover height " + std::to_string(h));
  }

  // nu of a specific vertex (override-aware).
  int nu_of(const VertexAddress& x) const {
    if (auto it = overrides_.find(x); it != overrides_.end()) return it->second;
    return nu_at_height(x.height());
  }

  // Successor count = nu - 1 (every vertex has one predecessor).
  int successors_of(const VertexAddress& x) const { return nu_of(x) - 1; }
  int successors_at_height(long long h) const { return nu_at_height(h) - 1; }

  // Least successor count any vertex of the infinite tree can have. Shells
  // grow at least this fast per level, so it bounds search radii from below.
  int min_successors() const {
    int m = rule_.empty() ? 2 : rule_[0].nu - 1;
    for (const auto& e : rule_) m = std::min(m, e.nu - 1);
    for (const auto& [addr, nu] : overrides_) {
      (void)addr;
      m = std::min(m, nu - 1);
    }
    return m;
  }

  const std::map<VertexAddress, int>& overrides() const { return overrides_; }
  const std::vector<RuleEntry>& rule() const { return rule_; }
  bool homogeneous() const {
    return overrides_.empty() && rule_.size() == 1 && !rule_[0].h_lt && !rule_[0].h_ge;
  }

  static ValenceSpec from_json(const nlohmann::json& j) {
    std::vector<RuleEntry> rule;
    if (!j.contains("rule") || !j["rule"].is_array() || j["rule"].empty())
      fail(Errc::bad_valence, "valence spec: missing or empty 'rule' array");
    for (const auto& e : j["rule"]) {
      RuleEntry entry;
      if (e.contains("h_lt")) entry.h_lt = e["h_lt"].get<long long>();
      if (e.contains("h_ge")) entry.h_ge = e["h_ge"].get<long long>();
      if (!e.contains("nu")) fail(Errc::bad_valence, "valence rule entry: missing 'nu'");
      entry.nu = e["nu"].get<int>();
      rule.push_back(entry);
    }
    std::map<VertexAddress, int> overrides;
    if (j.contains("overrides")) {
      for (const auto& e : j["overrides"]) {
        VertexAddress a = parse_address_or_fail(e.at("addr").get<std::string>());
        overrides[a] = e.at("nu").get<int>();
      }
    }
    return ValenceSpec(std::move(rule), std::move(overrides));
  }

  nlohmann::json to_json() const {
    nlohmann::json rule = nlohmann::json::array();
    for (const auto& e : rule_) {
      nlohmann::json entry;
      if (e.h_lt) entry["h_lt"] = *e.h_lt;
      if (e.h_ge) entry["h_ge"] = *e.h_ge;
      entry["nu"] = e.nu;
      rule.push_back(entry);
    }
    nlohmann::json j;
    j["rule"] = rule;
    if (!overrides_.empty()) {
      nlohmann::json ov = nlohmann::json::array();
      for (const auto& [addr, nu] : overrides_)
        ov.push_back({{"addr", to_string(addr)}, {"nu", nu}});
      j["overrides"] = ov;
    }
    return j;
  }

 private:
  void validate() const {
    for (const auto& e : rule_)
      if (e.nu < 3) fail(Errc::bad_valence, "valence rule entry with nu < 3");
    for (const auto& [addr, nu] : overrides_)
      if (nu < 3) fail(Errc::bad_valence, "valence override with nu < 3 at " + to_string(addr));
    // Coverage: each entry covers a half-line (or everything); the union covers
    // all heights iff some entry is unbounded below and some entry is unbounded
    // above, with no gap between the best downward and upward reaches.
    bool all = std::any_of(rule_.begin(), rule_.end(),
                           [](const RuleEntry& e) { return !e.h_lt && !e.h_ge; });
    if (all) return;
    std::optional<long long> best_lt;  // covers (-inf, best_lt)
    std::optional<long long> best_ge;  // covers [best_ge, +inf)
    for (const auto& e : rule_) {
      if (e.h_lt && !e.h_ge && (!best_lt || *e.h_lt > *best_lt)) best_lt = e.h_lt;
      if (e.h_ge && !e.h_lt && (!best_ge || *e.h_ge < *best_ge)) best_ge = e.h_ge;
    }
    if (!best_lt || !best_ge || *best_lt < *best_ge)
      fail(Errc::bad_valence, "valence rule does not cover all heights");
  }

  std::vector<RuleEntry> rule_;
  std::map<VertexAddress, int> overrides_;
};

// Common trees. homogeneous(b): every vertex has b+1 neighbours. two_band(a,b):
// a+1 neighbours at heights <= 0, b+1 at heights >= 1. spiked(j): valence 3
// everywhere except the ray vertex x_0, which gets valence j+2.
inline ValenceSpec homogeneous_tree(int b) {
  if (b < 2) fail(Errc::bad_valence, "homogeneous tree needs branching >= 2");
  return ValenceSpec({RuleEntry{std::nullopt, std::nullopt, b + 1}});
}

inline ValenceSpec two_band_tree(int a, int b) {
  if (a < 2 || b < 2) fail(Errc::bad_valence, "two-band tree needs branching >= 2");
  return ValenceSpec({RuleEntry{1, std::nullopt, a + 1}, RuleEntry{std::nullopt, 1, b + 1}});
}

inline ValenceSpec spiked_tree(int j) {
  if (j < 1) fail(Errc::bad_valence, "spiked tree needs j >= 1");
  return ValenceSpec({RuleEntry{std::nullopt, std::nullopt, 3}},
                     {{VertexAddress{0, {}}, j + 2}});
}

}  // namespace treemax
