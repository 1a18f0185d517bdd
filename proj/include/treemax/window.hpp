// treemax: materialized tree truncation ("window").
//
// A window is the finite part of the infinite tree that we actually build:
// the downward cone hanging from the ray vertex x_{h_max}, cut at height
// h_min. Construction is a deterministic breadth-first sweep, so vertex ids
// are stable across runs: id 0 is the apex and each level is laid out in
// parent order, children contiguous per parent.
//
// Volumes reported from a window are exact cardinalities of materialized
// sets; shells, triangles and balls must lie fully inside the window and the
// query fails otherwise. Suprema over out-of-window candidates are the
// business of the operator evaluators, which bound them with tail
// certificates instead of extrapolating geometry. The only use of the
// valence rule beyond the window is the vertex-count precheck that guards
// the cap before anything is allocated.
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treemax/address.hpp"
#include "treemax/errors.hpp"
#include "treemax/rational.hpp"
#include "treemax/valence.hpp"

namespace treemax {

// ---------- configuration ----------

inline long long default_vertex_cap() {
  if (const char* env = std::getenv("TREEMAX_VERTEX_CAP")) {
    std::string s(env);
    long long v = 0;
    for (char ch : s) {
      if (ch < '0' || ch > '9') fail(Errc::bad_argument, "TREEMAX_VERTEX_CAP: not a positive integer");
      if (v > 900'000'000'000'000'000LL / 10) fail(Errc::bad_argument, "TREEMAX_VERTEX_CAP: too large");
      v = v * 10 + (ch - '0');
    }
    if (s.empty() || v <= 0) fail(Errc::bad_argument, "TREEMAX_VERTEX_CAP: not a positive integer");
    return v;
  }
  return 10'000'000;
}

// ---------- pure address arithmetic over a valence spec ----------

// Child address by position among the nu-1 successors. Positions are 0-based
// and height-ordered the same way the window lays children out: at a ray
// vertex x_m with m >= 1 position 0 is the ray child x_{m-1} and position p
// carries slot p; at x_0 position p carries slot p+1; below the ray slots and
// positions coincide.
inline VertexAddress child_address(const VertexAddress& parent, std::int32_t position) {
  VertexAddress c = parent;
  if (parent.on_ray() && parent.anchor >= 1) {
    if (position == 0) {
      c.anchor -= 1;
      return c;
    }
    c.descent.push_back(position);
    return c;
  }
  if (parent.on_ray()) {  // x_0: no ray child, slots start at 1
    c.descent.push_back(position + 1);
    return c;
  }
  c.descent.push_back(position);
  return c;
}

// True iff the address names a vertex of the abstract tree, i.e. every
// descent slot is within the parent's successor range.
inline bool vertex_exists(const ValenceSpec& spec, const VertexAddress& a) {
  VertexAddress prefix{a.anchor, {}};
  for (std::size_t i = 0; i < a.descent.size(); ++i) {
    std::int32_t slot = a.descent[i];
    int nu = spec.nu_of(prefix);
    std::int32_t lo, hi;  // valid slot range [lo, hi]
    if (prefix.on_ray() && prefix.anchor >= 1) {
      lo = 1;  // slot 0 is the ray child, whose canonical form is the bare anchor
      hi = nu - 2;
    } else if (prefix.on_ray()) {
      lo = 1;
      hi = nu - 1;
    } else {
      lo = 0;
      hi = nu - 2;
    }
    if (slot < lo || slot > hi) return false;
    prefix.descent.push_back(slot);
  }
  return true;
}

// |s^j(v)| in the abstract tree, derived from the valence rule alone.
// Branches only along override paths; clean sub-cones use the height product.
// Used for the vertex-cap precheck; in-window shells computed by the window
// agree with it (property-tested against BFS counting).
inline Int abstract_shell_size(const ValenceSpec& spec, const VertexAddress& v, long long j) {
  if (j < 0) fail(Errc::bad_argument, "shell depth must be nonnegative");
  if (j == 0) return 1;
  // Overrides strictly inside the cone above depth j pull their path-child
  // out of the clean product.
  std::vector<VertexAddress> dirty_children;
  for (const auto& [addr, nu] : spec.overrides()) {
    (void)nu;
    long long rel = v.height() - addr.height();
    if (rel <= 0 || rel >= j) continue;
    if (predecessor(addr, rel) != v) continue;
    VertexAddress child = predecessor(addr, rel - 1);
    if (std::find(dirty_children.begin(), dirty_children.end(), child) == dirty_children.end())
      dirty_children.push_back(child);
  }
  long long succ_v = spec.successors_of(v);
  Int clean = succ_v - static_cast<long long>(dirty_children.size());
  Int total = 0;
  if (clean > 0) {
    Int prod = clean;
    for (long long i = 1; i < j; ++i) prod *= spec.successors_at_height(v.height() - i);
    total = prod;
  }
  for (const auto& child : dirty_children) total += abstract_shell_size(spec, child, j - 1);
  return total;
}

// ---------- the window ----------

class TreeWindow {
 public:
  using Id = std::int32_t;

  TreeWindow(ValenceSpec spec, long long h_min, long long h_max,
             std::optional<long long> vertex_cap = std::nullopt)
      : spec_(std::move(spec)), h_min_(h_min), h_max_(h_max) {
    if (h_min >= h_max) fail(Errc::bad_argument, "window: empty height range (need h_min < h_max)");
    if (h_max < 0) fail(Errc::bad_argument, "window: top must be a ray vertex (h_max >= 0)");
    long long cap = vertex_cap ? *vertex_cap : default_vertex_cap();
    if (cap > INT32_MAX) cap = INT32_MAX;  // ids are 32-bit
    build(cap);
  }

  const ValenceSpec& spec() const { return spec_; }
  long long h_min() const { return h_min_; }
  long long h_max() const { return h_max_; }
  long long levels() const { return h_max_ - h_min_ + 1; }
  std::int64_t n() const { return static_cast<std::int64_t>(parent_.size()); }
  Id root() const { return 0; }

  long long depth_of(Id v) const {
    auto it = std::upper_bound(level_first_.begin(), level_first_.end(), v);
    return static_cast<long long>(it - level_first_.begin()) - 1;
  }
  long long height_of(Id v) const { return h_max_ - depth_of(v); }
  bool on_ray(Id v) const { return ray_[static_cast<std::size_t>(v)] != 0; }
  Id parent_of(Id v) const {
    if (v == 0) fail(Errc::not_in_window, "apex parent lies above the window");
    return parent_[static_cast<std::size_t>(v)];
  }
  std::int32_t child_count(Id v) const { return nchild_[static_cast<std::size_t>(v)]; }
  Id child_at(Id v, std::int32_t position) const {
    return first_child_[static_cast<std::size_t>(v)] + position;
  }

  // Ids of the window's depth-d layer (= horocycle of height h_max - d).
  std::pair<Id, Id> level_range(long long depth) const {
    if (depth < 0 || depth >= levels()) return {0, 0};
    return {level_first_[static_cast<std::size_t>(depth)],
            level_first_[static_cast<std::size_t>(depth) + 1]};
  }
  std::pair<Id, Id> horocycle_range(long long height) const { return level_range(h_max_ - height); }

  VertexAddress address_of(Id v) const {
    std::vector<std::int32_t> rev;
    Id cur = v;
    while (!on_ray(cur)) {
      rev.push_back(slot_[static_cast<std::size_t>(cur)]);
      cur = parent_[static_cast<std::size_t>(cur)];
    }
    VertexAddress a{height_of(cur), {rev.rbegin(), rev.rend()}};
    return a;
  }

  // Id lookup. nullopt means "a vertex of the tree, but outside the window";
  // an address that fails the slot ranges of the valence spec is an error.
  std::optional<Id> id_of(const VertexAddress& a) const {
    if (a.anchor > h_max_ || a.height() < h_min_ || a.height() > h_max_) {
      if (!vertex_exists(spec_, a)) fail(Errc::bad_address, "no such vertex: " + to_string(a));
      return std::nullopt;
    }
    Id cur = 0;
    for (long long m = h_max_; m > a.anchor; --m) cur = child_at(cur, 0);  // walk down the ray
    VertexAddress prefix{a.anchor, {}};
    for (std::size_t i = 0; i < a.descent.size(); ++i) {
      std::int32_t slot = a.descent[i];
      std::int32_t pos;
      if (prefix.on_ray() && prefix.anchor >= 1)
        pos = slot >= 1 ? slot : -1;  // slot 0 is the ray child's non-canonical alias
      else if (prefix.on_ray())
        pos = slot - 1;
      else
        pos = slot;
      if (pos < 0 || pos >= child_count(cur)) fail(Errc::bad_address, "no such vertex: " + to_string(a));
      cur = child_at(cur, pos);
      prefix.descent.push_back(slot);
    }
    return cur;
  }
  Id id_of_or_fail(const VertexAddress& a) const {
    auto id = id_of(a);
    if (!id) fail(Errc::not_in_window, "vertex outside window: " + to_string(a));
    return *id;
  }
  bool contains(const VertexAddress& a) const { return id_of(a).has_value(); }

  Id ancestor_id(Id v, long long k) const {
    if (k < 0) fail(Errc::bad_argument, "ancestor: negative step count");
    if (k > depth_of(v)) fail(Errc::not_in_window, "ancestor above the window apex");
    for (; k > 0; --k) v = parent_[static_cast<std::size_t>(v)];
    return v;
  }

  // ---------- exact counting (fully in-window sets only) ----------

  // |s^j(v)|. The shell must not dip below h_min.
  Int shell_size(Id v, long long j) const {
    require_cone(v, j);
    return abstract_shell_size(spec_, address_of(v), j);
  }

  // |T_R(v)| = sum of shell sizes. Exact; fails if the base is out of window.
  Int triangle_volume(Id v, long long R) const {
    require_cone(v, R);
    VertexAddress a = address_of(v);
    Int total = 0;
    for (long long j = 0; j <= R; ++j) total += abstract_shell_size(spec_, a, j);
    return total;
  }

  std::vector<Id> shell_members(Id v, long long j) const {
    require_cone(v, j);
    std::vector<Id> cur{v};
    for (long long step = 0; step < j; ++step) {
      std::vector<Id> next;
      for (Id u : cur)
        for (std::int32_t c = 0; c < child_count(u); ++c) next.push_back(child_at(u, c));
      cur = std::move(next);
    }
    return cur;
  }

  std::vector<Id> triangle_members(Id v, long long R) const {
    require_cone(v, R);
    std::vector<Id> out{v};
    std::size_t level_begin = 0;
    for (long long step = 0; step < R; ++step) {
      std::size_t level_end = out.size();
      for (std::size_t i = level_begin; i < level_end; ++i)
        for (std::int32_t c = 0; c < child_count(out[i]); ++c) out.push_back(child_at(out[i], c));
      level_begin = level_end;
    }
    return out;
  }

  // Closed ball B_r(v). In-window iff r <= min(h(v) - h_min, h_max - h(v)):
  // one step past either bound escapes (every vertex has a parent and at
  // least two children in the infinite tree).
  long long ball_radius_in_window(Id v) const {
    return std::min(height_of(v) - h_min_, h_max_ - height_of(v));
  }

  std::vector<Id> ball_members(Id v, long long r) const {
    if (r < 0) fail(Errc::bad_argument, "ball radius must be nonnegative");
    if (r > ball_radius_in_window(v)) fail(Errc::not_in_window, "ball out of window");
    // Walk the ancestor chain; at distance k the remaining budget r - k
    // covers the ancestor's cone except the branch we came from.
    std::vector<Id> out = triangle_members(v, r);
    Id below = v;
    for (long long k = 1; k <= r; ++k) {
      Id anc = parent_of(below);
      long long budget = r - k;
      // cone of anc to depth budget, minus the sub-cone through `below`
      std::vector<Id> cur{anc};
      out.push_back(anc);
      for (long long step = 0; step < budget; ++step) {
        std::vector<Id> next;
        for (Id u : cur)
          for (std::int32_t c = 0; c < child_count(u); ++c) {
            Id w = child_at(u, c);
            if (w == below) continue;
            next.push_back(w);
            out.push_back(w);
          }
        cur = std::move(next);
      }
      below = anc;
    }
    return out;
  }

  Int ball_volume(Id v, long long r) const {
    return static_cast<long long>(ball_members(v, r).size());
  }

 private:
  void require_cone(Id v, long long depth) const {
    if (depth < 0) fail(Errc::bad_argument, "cone depth must be nonnegative");
    if (height_of(v) - depth < h_min_) fail(Errc::not_in_window, "triangle out of window");
  }

  void build(long long cap) {
    const long long span = h_max_ - h_min_;
    // Precount from the rule so we never allocate past the cap.
    VertexAddress apex{h_max_, {}};
    Int total = 0;
    for (long long d = 0; d <= span; ++d) {
      total += abstract_shell_size(spec_, apex, d);
      if (total > cap)
        fail(Errc::vertex_cap, "window would hold more than " + std::to_string(cap) +
                                   " vertices; raise TREEMAX_VERTEX_CAP or shrink the window");
    }
    const std::size_t n = static_cast<std::size_t>(static_cast<long long>(total));
    parent_.reserve(n);
    slot_.reserve(n);
    first_child_.reserve(n);
    nchild_.reserve(n);
    ray_.reserve(n);
    level_first_.assign(1, 0);

    parent_.push_back(0);
    slot_.push_back(0);
    first_child_.push_back(0);
    nchild_.push_back(0);
    ray_.push_back(1);

    const bool has_overrides = !spec_.overrides().empty();
    std::size_t level_begin = 0;
    for (long long d = 0; d < span; ++d) {
      std::size_t level_end = parent_.size();
      level_first_.push_back(static_cast<Id>(level_end));
      const long long h = h_max_ - d;
      const int succ_by_height = spec_.successors_at_height(h);
      for (std::size_t id = level_begin; id < level_end; ++id) {
        int succ = has_overrides ? spec_.nu_of(address_of(static_cast<Id>(id))) - 1 : succ_by_height;
        first_child_[id] = static_cast<Id>(parent_.size());
        nchild_[id] = succ;
        const bool parent_ray = ray_[id] != 0;
        for (int pos = 0; pos < succ; ++pos) {
          parent_.push_back(static_cast<Id>(id));
          if (parent_ray && h >= 1)
            slot_.push_back(pos);
          else if (parent_ray)
            slot_.push_back(pos + 1);
          else
            slot_.push_back(pos);
          first_child_.push_back(0);
          nchild_.push_back(0);
          ray_.push_back(parent_ray && h >= 1 && pos == 0 ? 1 : 0);
        }
      }
      level_begin = level_end;
    }
    level_first_.push_back(static_cast<Id>(parent_.size()));
    // Leaf level: mark first_child past-the-end for contiguity.
    for (std::size_t id = level_begin; id < parent_.size(); ++id)
      first_child_[id] = static_cast<Id>(parent_.size());
  }

  ValenceSpec spec_;
  long long h_min_;
  long long h_max_;
  std::vector<Id> parent_;
  std::vector<std::int32_t> slot_;
  std::vector<Id> first_child_;
  std::vector<std::int32_t> nchild_;
  std::vector<std::int8_t> ray_;
  std::vector<Id> level_first_;  // level_first_[d] = first id at depth d; sentinel at end
};

}  // namespace treemax
