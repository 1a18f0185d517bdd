// treemax: canonical vertex addresses.
//
// Vertices of an infinite tree with a distinguished boundary ray x_0, x_1, ...
// are addressed by the pair (anchor, descent): `anchor` is the index m of the
// ray vertex where the path from the vertex meets the ray (equivalently the
// height of its confluent with the ray), and `descent` is the child-slot
// sequence taken downward from x_m. The height of a vertex is then
// anchor - len(descent).
//
// Slot conventions keeping addresses unique:
//   * at a ray vertex x_m with m >= 1, slot 0 is the ray child x_{m-1}, so an
//     off-ray descent starts with a slot >= 1;
//   * x_0 has no ray child; its successors use slots 1..nu(x_0)-1 so the
//     "first slot >= 1" rule holds uniformly;
//   * below the ray, slots are 0-based over the nu-1 successors.
//
// Textual grammar: "m" for ray vertices, "m/c1.c2...." otherwise.
#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treemax/errors.hpp"

namespace treemax {

struct VertexAddress {
  long long anchor = 0;
  std::vector<std::int32_t> descent;

  long long height() const { return anchor - static_cast<long long>(descent.size()); }
  bool on_ray() const { return descent.empty(); }
  long long depth() const { return static_cast<long long>(descent.size()); }

  friend bool operator==(const VertexAddress&, const VertexAddress&) = default;
  // Deterministic total order used for output sorting and map keys.
  friend std::strong_ordering operator<=>(const VertexAddress& a, const VertexAddress& b) {
    if (auto c = a.anchor <=> b.anchor; c != 0) return c;
    return a.descent <=> b.descent;
  }
};

// The k-th predecessor p^k(x): strip descent entries, then continue up the ray.
// Always well defined (the ray is infinite upward).
inline VertexAddress predecessor(VertexAddress x, long long k) {
  if (k < 0) fail(Errc::bad_argument, "predecessor: negative step count");
  long long from_descent = std::min<long long>(k, x.depth());
  x.descent.resize(static_cast<std::size_t>(x.depth() - from_descent));
  x.anchor += k - from_descent;
  return x;
}

// True iff x = p^k(y) for some k >= 0 (x lies on the upward path from y).
inline bool is_predecessor_of(const VertexAddress& x, const VertexAddress& y) {
  long long k = x.height() - y.height();
  return k >= 0 && predecessor(y, k) == x;
}

// The confluent x ^ y: the lowest common predecessor of x and y. If the
// anchors differ the two descents hang from different ray vertices and the
// confluent is the higher of the two anchors; with equal anchors it is the
// anchor vertex extended by the longest common descent prefix.
struct Confluence {
  VertexAddress vertex;
  long long dx = 0;  // d(x, x^y)
  long long dy = 0;  // d(y, x^y)

  long long distance() const { return dx + dy; }
  long long eta() const { return std::max(dx, dy); }
};

inline Confluence confluent(const VertexAddress& x, const VertexAddress& y) {
  Confluence c;
  if (x.anchor != y.anchor) {
    c.vertex = VertexAddress{std::max(x.anchor, y.anchor), {}};
  } else {
    std::size_t n = 0;
    while (n < x.descent.size() && n < y.descent.size() && x.descent[n] == y.descent[n]) ++n;
    c.vertex = VertexAddress{x.anchor, {x.descent.begin(), x.descent.begin() + n}};
  }
  c.dx = c.vertex.height() - x.height();
  c.dy = c.vertex.height() - y.height();
  return c;
}

inline long long distance(const VertexAddress& x, const VertexAddress& y) {
  return confluent(x, y).distance();
}

inline std::string to_string(const VertexAddress& a) {
  std::string s = std::to_string(a.anchor);
  for (std::size_t i = 0; i < a.descent.size(); ++i) {
    s += (i == 0) ? '/' : '.';
    s += std::to_string(a.descent[i]);
  }
  return s;
}

// Parses the "m" / "m/c1.c2..." grammar. Structural validation only; slot
// ranges depend on the valence spec and are checked by the tree window.
inline std::optional<VertexAddress> parse_address(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto parse_ll = [](const std::string& t, long long& out) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-') ? 1 : 0;
    if (i >= t.size()) return false;
    long long v = 0;
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') return false;
      if (v > 900'000'000'000'000'000LL) return false;
      v = v * 10 + (t[i] - '0');
    }
    out = (t[0] == '-') ? -v : v;
    return true;
  };
  VertexAddress a;
  auto slash = text.find('/');
  std::string head = text.substr(0, slash);
  if (!parse_ll(head, a.anchor) || a.anchor < 0) return std::nullopt;
  if (slash == std::string::npos) return a;
  std::string rest = text.substr(slash + 1);
  if (rest.empty()) return std::nullopt;
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    auto dot = rest.find('.', pos);
    std::string part = rest.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    long long c = 0;
    if (!parse_ll(part, c) || c < 0 || c > INT32_MAX) return std::nullopt;
    a.descent.push_back(static_cast<std::int32_t>(c));
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  if (a.descent.empty() || a.descent.front() < 1) return std::nullopt;
  return a;
}

inline VertexAddress parse_address_or_fail(const std::string& text) {
  auto a = parse_address(text);
  if (!a) fail(Errc::bad_address, "bad vertex address: '" + text + "'");
  return *a;
}

}  // namespace treemax
