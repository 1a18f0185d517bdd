// treemax: command-line presets and argument parsing.
//
// Small string grammars used by the CLI: tree presets ("Tb:2", "Sab:2,4",
// "spike:3", or a JSON file path), window ranges ("-6..6"), point functions
// ("delta:ADDR" or a JSON file path), and evaluation regions ("supp",
// "window", "H<j>:r<R>").
#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "treemax/errors.hpp"
#include "treemax/function.hpp"
#include "treemax/operators.hpp"
#include "treemax/valence.hpp"
#include "treemax/window.hpp"

namespace treemax {

namespace detail {

inline std::optional<long long> parse_ll(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (...) {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;
  return v;
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(Errc::bad_argument, "invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace detail

// ---------- tree presets ----------

// "Tb:<b>" homogeneous, "Sab:<a>,<b>" two-band, "spike:<j>" spiked, otherwise
// a path to a JSON valence file.
inline ValenceSpec parse_tree_preset(const std::string& s) {
  if (s.rfind("Tb:", 0) == 0) {
    auto b = detail::parse_ll(s.substr(3));
    if (!b || *b < 2) fail(Errc::bad_argument, "tree preset: expected Tb:<b> with b >= 2, got " + s);
    return homogeneous_tree(static_cast<int>(*b));
  }
  if (s.rfind("Sab:", 0) == 0) {
    const std::string rest = s.substr(4);
    const auto comma = rest.find(',');
    if (comma == std::string::npos)
      fail(Errc::bad_argument, "tree preset: expected Sab:<a>,<b>, got " + s);
    auto a = detail::parse_ll(rest.substr(0, comma));
    auto b = detail::parse_ll(rest.substr(comma + 1));
    if (!a || !b || *a < 2 || *b < 2)
      fail(Errc::bad_argument, "tree preset: expected Sab:<a>,<b> with a,b >= 2, got " + s);
    return two_band_tree(static_cast<int>(*a), static_cast<int>(*b));
  }
  if (s.rfind("spike:", 0) == 0) {
    auto j = detail::parse_ll(s.substr(6));
    if (!j || *j < 1)
      fail(Errc::bad_argument, "tree preset: expected spike:<j> with j >= 1, got " + s);
    return spiked_tree(static_cast<int>(*j));
  }
  if (std::ifstream probe(s); probe.good()) return ValenceSpec::from_json(detail::load_json_file(s));
  fail(Errc::bad_argument, "unknown tree preset (and no such file): " + s);
}

// ---------- window ranges ----------

// "<h_min>..<h_max>", negatives allowed on both sides.
inline std::pair<long long, long long> parse_window_range(const std::string& s) {
  const auto dots = s.find("..", 1);  // skip a leading '-'
  if (dots == std::string::npos)
    fail(Errc::bad_argument, "window: expected <h_min>..<h_max>, got " + s);
  auto lo = detail::parse_ll(s.substr(0, dots));
  auto hi = detail::parse_ll(s.substr(dots + 2));
  if (!lo || !hi) fail(Errc::bad_argument, "window: expected <h_min>..<h_max>, got " + s);
  return {*lo, *hi};
}

// ---------- functions ----------

// "delta:<ADDR>" or a path to a JSON function file.
inline SparseFunction parse_function_arg(const std::string& s) {
  if (s.rfind("delta:", 0) == 0) {
    const VertexAddress a = parse_address_or_fail(s.substr(6));
    return SparseFunction::delta(a);
  }
  if (std::ifstream probe(s); probe.good())
    return SparseFunction::from_json(detail::load_json_file(s));
  fail(Errc::bad_argument, "unknown function argument (and no such file): " + s);
}

// ---------- operator names ----------

inline OperatorKind parse_operator(const std::string& s) {
  if (s == "T") return OperatorKind::T;
  if (s == "U") return OperatorKind::U;
  if (s == "B") return OperatorKind::B;
  if (s == "Bu") return OperatorKind::Bu;
  if (s == "Tmod") return OperatorKind::Tmod;
  if (s == "Umod") return OperatorKind::Umod;
  if (s == "K") return OperatorKind::K;
  if (s == "M") return OperatorKind::M;
  if (s == "N") return OperatorKind::N;
  fail(Errc::bad_argument, "operator: expected T, U, B, Bu, Tmod, Umod, K, M or N, got " + s);
}

// ---------- regions ----------

// Where a batch evaluation runs: the support closure, the whole window, or a
// horocycle slice H<j>:r<R> meaning height j within distance R of the origin.
struct Region {
  enum class Kind { support, window, horocycle_ball } kind = Kind::support;
  long long height = 0;   // horocycle height (horocycle_ball)
  long long radius = 0;   // ball radius around x_0 (horocycle_ball)
};

inline Region parse_region(const std::string& s) {
  Region r;
  if (s == "supp" || s.empty()) {
    r.kind = Region::Kind::support;
    return r;
  }
  if (s == "window") {
    r.kind = Region::Kind::window;
    return r;
  }
  if (s.size() >= 2 && s[0] == 'H') {
    const auto colon = s.find(":r");
    if (colon != std::string::npos) {
      auto h = detail::parse_ll(s.substr(1, colon - 1));
      auto rad = detail::parse_ll(s.substr(colon + 2));
      if (h && rad && *rad >= 0) {
        r.kind = Region::Kind::horocycle_ball;
        r.height = *h;
        r.radius = *rad;
        return r;
      }
    }
  }
  fail(Errc::bad_argument, "region: expected supp | window | H<j>:r<R>, got " + s);
}

// Materializes a region as a sorted list of evaluation points.
inline std::vector<VertexAddress> region_points(const TreeWindow& w, const SparseFunction& f,
                                                const Region& r) {
  std::vector<VertexAddress> pts;
  switch (r.kind) {
    case Region::Kind::support:
      for (const auto& e : f.entries()) pts.push_back(e.addr);
      break;
    case Region::Kind::window:
      for (TreeWindow::Id id = 0; id < w.n(); ++id) pts.push_back(w.address_of(id));
      break;
    case Region::Kind::horocycle_ball: {
      const VertexAddress origin{0, {}};
      if (!w.contains(origin))
        fail(Errc::not_in_window, "region: origin x_0 is outside the window");
      auto [lo, hi] = w.horocycle_range(r.height);
      for (TreeWindow::Id id = lo; id < hi; ++id) {
        const VertexAddress a = w.address_of(id);
        if (distance(origin, a) <= r.radius) pts.push_back(a);
      }
      break;
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace treemax
