// treemax: finitely supported rational functions on the tree.
//
// A sparse function is a sorted (address -> value) list; absent vertices are
// zero. Signed values are allowed everywhere — maximal operators take |f|
// internally. Norms are exact for integer exponents (returned as the p-th
// power) and binary-float for real exponents.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "treemax/address.hpp"
#include "treemax/errors.hpp"
#include "treemax/rational.hpp"
#include "treemax/window.hpp"

namespace treemax {

struct FunctionEntry {
  VertexAddress addr;
  Rat val;
};

class SparseFunction {
 public:
  SparseFunction() = default;

  explicit SparseFunction(std::vector<FunctionEntry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const FunctionEntry& a, const FunctionEntry& b) { return a.addr < b.addr; });
    for (std::size_t i = 0; i + 1 < entries_.size(); ++i)
      if (entries_[i].addr == entries_[i + 1].addr)
        fail(Errc::bad_function, "duplicate support point: " + to_string(entries_[i].addr));
    std::erase_if(entries_, [](const FunctionEntry& e) { return e.val == 0; });
  }

  static SparseFunction delta(const VertexAddress& at, const Rat& weight = Rat(1)) {
    return SparseFunction({{at, weight}});
  }

  const std::vector<FunctionEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  Rat at(const VertexAddress& a) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), a,
                               [](const FunctionEntry& e, const VertexAddress& key) { return e.addr < key; });
    if (it != entries_.end() && it->addr == a) return it->val;
    return Rat(0);
  }

  Rat l1() const {
    Rat s = 0;
    for (const auto& e : entries_) s += abs(e.val);
    return s;
  }

  // ||f||_p^p for integer p >= 1 (exact).
  Rat lp_pow(long long p) const {
    if (p < 1) fail(Errc::bad_argument, "norm exponent must be >= 1");
    Rat s = 0;
    for (const auto& e : entries_) s += rpow(abs(e.val), p);
    return s;
  }

  Rat linf() const {
    Rat m = 0;
    for (const auto& e : entries_) m = std::max(m, abs(e.val));
    return m;
  }

  // ||f||_p as binary float for real exponents (relative error ~1e-15 per term).
  double lp_real(double p) const {
    if (!(p > 0)) fail(Errc::bad_argument, "norm exponent must be positive");
    double s = 0;
    for (const auto& e : entries_) s += std::pow(std::fabs(to_double(e.val)), p);
    return std::pow(s, 1.0 / p);
  }

  SparseFunction abs_value() const {
    std::vector<FunctionEntry> out = entries_;
    for (auto& e : out) e.val = abs(e.val);
    return SparseFunction(std::move(out));
  }

  SparseFunction scaled(const Rat& c) const {
    std::vector<FunctionEntry> out = entries_;
    for (auto& e : out) e.val *= c;
    return SparseFunction(std::move(out));
  }

  long long min_support_height() const {
    require_nonempty();
    long long m = entries_.front().addr.height();
    for (const auto& e : entries_) m = std::min(m, e.addr.height());
    return m;
  }

  long long max_support_height() const {
    require_nonempty();
    long long m = entries_.front().addr.height();
    for (const auto& e : entries_) m = std::max(m, e.addr.height());
    return m;
  }

  // Distinct support heights, ascending.
  std::vector<long long> support_heights() const {
    std::vector<long long> hs;
    for (const auto& e : entries_) hs.push_back(e.addr.height());
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    return hs;
  }

  bool supported_in(const TreeWindow& w) const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [&](const FunctionEntry& e) { return w.contains(e.addr); });
  }

  void require_supported_in(const TreeWindow& w) const {
    for (const auto& e : entries_)
      if (!w.contains(e.addr))
        fail(Errc::bad_function, "support point outside window: " + to_string(e.addr));
  }

  static SparseFunction from_json(const nlohmann::json& j) {
    if (!j.is_array()) fail(Errc::bad_function, "function file: expected a JSON array");
    std::vector<FunctionEntry> entries;
    for (const auto& e : j) {
      VertexAddress a = parse_address_or_fail(e.at("addr").get<std::string>());
      auto v = parse_rational(e.at("val").get<std::string>());
      if (!v) fail(Errc::bad_function, "bad rational for " + to_string(a));
      entries.push_back({a, *v});
    }
    return SparseFunction(std::move(entries));
  }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : entries_)
      j.push_back({{"addr", to_string(e.addr)}, {"val", rat_to_string(e.val)}});
    return j;
  }

 private:
  void require_nonempty() const {
    if (entries_.empty()) fail(Errc::bad_function, "function has empty support");
  }

  std::vector<FunctionEntry> entries_;  // sorted by address, no zeros
};

}  // namespace treemax
