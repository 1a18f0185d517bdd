// treemax: maximal and integral operator evaluators.
//
// Nine operators over a window and a finitely supported function:
//   T    sup over R of the |f|-average of the triangle T_R(x);
//   U    sup over all triangles containing x;
//   B    sup over shells s^r(x);
//   Bu   sup over triangles containing x of the |f|-average of the base;
//   Tmod sup over modified triangles T'_r(x) = T_r(x) + the point p^r(x);
//   Umod sup over all modified triangles containing x;
//   K    the kernel operator sum_y kappa(x,y) f(y), kappa = 1/|smallest
//        triangle containing both points| (linear, no sup);
//   M    sup over closed balls B_r(x), r in N (r = 0 included);
//   N    sup over closed balls containing x, any centre.
//
// Search strategy: enumerate in-window candidates exactly, then bound every
// candidate the window cannot materialize by an exact rational tail. The
// tails rest on two facts that hold in the whole infinite tree: every vertex
// has at least two successors (so |T_R| >= 2^{R+1}-1 and a base at least
// doubles per level below the window floor), and the function's support lies
// inside the window (so mass cannot grow past the floor). A value that
// reaches its tail bound is the supremum over the infinite tree and is
// marked certified.
//
// Witness tie-break, for deterministic output: strictly larger value wins;
// on ties, smaller extent, then smaller ancestor step, then smaller vertex
// address.
#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "treemax/address.hpp"
#include "treemax/certified.hpp"
#include "treemax/errors.hpp"
#include "treemax/function.hpp"
#include "treemax/rational.hpp"
#include "treemax/window.hpp"

namespace treemax {

enum class OperatorKind { T, U, B, Bu, Tmod, Umod, K, M, N };

inline std::optional<OperatorKind> op_kind_from_string(const std::string& s) {
  if (s == "T") return OperatorKind::T;
  if (s == "U") return OperatorKind::U;
  if (s == "B") return OperatorKind::B;
  if (s == "Bu") return OperatorKind::Bu;
  if (s == "Tmod") return OperatorKind::Tmod;
  if (s == "Umod") return OperatorKind::Umod;
  if (s == "K") return OperatorKind::K;
  if (s == "M") return OperatorKind::M;
  if (s == "N") return OperatorKind::N;
  return std::nullopt;
}

inline std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::T: return "T";
    case OperatorKind::U: return "U";
    case OperatorKind::B: return "B";
    case OperatorKind::Bu: return "Bu";
    case OperatorKind::Tmod: return "Tmod";
    case OperatorKind::Umod: return "Umod";
    case OperatorKind::K: return "K";
    case OperatorKind::M: return "M";
    case OperatorKind::N: return "N";
  }
  return "?";
}

namespace detail {

// x ancestor-or-equal of y, without allocating.
inline bool in_cone(const VertexAddress& v, const VertexAddress& y) {
  if (v.height() < y.height()) return false;
  if (v.on_ray()) return y.anchor <= v.anchor;
  if (y.anchor != v.anchor || y.descent.size() < v.descent.size()) return false;
  return std::equal(v.descent.begin(), v.descent.end(), y.descent.begin());
}

// |f|-mass of the support, split by depth below v; index j holds the mass on
// s^j(v). Entries deeper than max_rel are ignored.
inline std::vector<Rat> cone_mass_profile(const VertexAddress& v, const SparseFunction& f,
                                          long long max_rel) {
  std::vector<Rat> m(static_cast<std::size_t>(max_rel) + 1, Rat(0));
  for (const auto& e : f.entries()) {
    long long rel = v.height() - e.addr.height();
    if (rel < 0 || rel > max_rel) continue;
    if (in_cone(v, e.addr)) m[static_cast<std::size_t>(rel)] += abs(e.val);
  }
  return m;
}

// Deterministic argmax tracker.
struct BestTracker {
  bool has = false;
  Rat value = 0;
  long long key_r = 0;
  long long key_k = 0;
  Witness witness;

  void offer(const Rat& v, long long r, long long k, Witness w) {
    bool better = false;
    if (!has || v > value) {
      better = true;
    } else if (v == value) {
      if (r < key_r) better = true;
      else if (r == key_r && k < key_k) better = true;
      else if (r == key_r && k == key_k && w.vertex < witness.vertex) better = true;
    }
    if (better) {
      has = true;
      value = v;
      key_r = r;
      key_k = k;
      witness = std::move(w);
    }
  }
};

// Exact |T_R(v)| from the valence rule (agrees with the window on in-window
// cones; callers guarantee containment).
inline Int cone_volume(const ValenceSpec& spec, const VertexAddress& v, long long R) {
  Int total = 0;
  for (long long j = 0; j <= R; ++j) total += abstract_shell_size(spec, v, j);
  return total;
}

inline CertifiedValue finish(const BestTracker& best, const Rat& tail) {
  CertifiedValue cv;
  cv.value = best.value;
  cv.witness = best.witness;
  cv.tail_bound = tail;
  cv.certified = best.value >= tail;
  return cv;
}

}  // namespace detail

// ---------- kernels ----------

// kappa(x, y) = 1 / |T_{eta}(x ^ y)|, the smallest triangle containing both
// points. For in-window x, y that triangle is itself in-window: the confluent
// sits under the apex and the base at height min(h(x), h(y)) >= h_min.
inline Rat kernel_kappa(const TreeWindow& w, TreeWindow::Id x, TreeWindow::Id y) {
  Confluence c = confluent(w.address_of(x), w.address_of(y));
  Int vol = w.triangle_volume(w.id_of_or_fail(c.vertex), c.eta());
  return Rat(1) / Rat(vol);
}

// tau(x, y) = 1/|T_{d(x,y)}(x)| when x is an ancestor-or-equal of y, else 0.
inline Rat kernel_tau(const TreeWindow& w, TreeWindow::Id x, TreeWindow::Id y) {
  VertexAddress ax = w.address_of(x), ay = w.address_of(y);
  if (!detail::in_cone(ax, ay)) return Rat(0);
  long long d = ax.height() - ay.height();
  return Rat(1) / Rat(w.triangle_volume(x, d));
}

// ---------- evaluators ----------

// T: sup_R avg_{T_R(x)} |f|. Mass below the window floor is zero, so every
// deeper triangle carries the mass of the deepest in-window one with a
// strictly larger volume: the R_cut candidate dominates them all and the
// result is always certified.
inline CertifiedValue eval_T(const TreeWindow& w, const SparseFunction& f, TreeWindow::Id x) {
  f.require_supported_in(w);
  const VertexAddress ax = w.address_of(x);
  const long long r_cut = ax.height() - w.h_min();
  const auto mass = detail::cone_mass_profile(ax, f, r_cut);
  detail::BestTracker best;
  Rat cum = 0;
  Int vol = 0;
  for (long long R = 0; R <= r_cut; ++R) {
    cum += mass[static_cast<std::size_t>(R)];
    vol += abstract_shell_size(w.spec(), ax, R);
    best.offer(cum / Rat(vol), R, 0, Witness{WitnessKind::triangle, ax, R});
  }
  Rat tail = cum / Rat(vol);  // the R_cut candidate bounds every deeper one
  return detail::finish(best, tail);
}

// B: sup_r avg_{s^r(x)} |f|. Shells below the floor carry zero mass.
inline CertifiedValue eval_B(const TreeWindow& w, const SparseFunction& f, TreeWindow::Id x) {
  f.require_supported_in(w);
  const VertexAddress ax = w.address_of(x);
  const long long r_cut = ax.height() - w.h_min();
  const auto mass = detail::cone_mass_profile(ax, f, r_cut);
  detail::BestTracker best;
  for (long long r = 0; r <= r_cut; ++r) {
    Int size = abstract_shell_size(w.spec(), ax, r);
    best.offer(mass[static_cast<std::size_t>(r)] / Rat(size), r, 0,
               Witness{WitnessKind::base, ax, r});
  }
  return detail::finish(best, Rat(0));
}

// U: sup over triangles T_R(p^k(x)), R >= k. In-window vertices k <= K and
// bases above the floor are enumerated; base-dipping candidates repeat the
// mass of their R_cut sibling with larger volume (dominated); vertices above
// the apex have R >= K+1 and, to carry mass, R >= h(v) - max support height,
// giving the tail ||f||_1 / (2^{Rmin+1} - 1).
inline CertifiedValue eval_U(const TreeWindow& w, const SparseFunction& f, TreeWindow::Id x) {
  f.require_supported_in(w);
  const VertexAddress ax = w.address_of(x);
  const long long K = w.h_max() - ax.height();
  const Rat total = f.l1();
  detail::BestTracker best;
  best.offer(abs(f.at(ax)), 0, 0, Witness{WitnessKind::triangle, ax, 0});
  for (long long k = 0; k <= K; ++k) {
    if (best.value > 0 && total < best.value * Rat(pow2(k + 1) - 1)) break;  // avg <= ||f||/|T_k|
    const VertexAddress v = predecessor(ax, k);
    const long long r_cut = v.height() - w.h_min();
    const auto mass = detail::cone_mass_profile(v, f, r_cut);
    Rat cum = 0;
    Int vol = 0;
    for (long long R = 0; R <= r_cut; ++R) {
      cum += mass[static_cast<std::size_t>(R)];
      vol += abstract_shell_size(w.spec(), v, R);
      if (R < k) continue;  // triangle must contain x
      if (best.value > 0 && total < best.value * Rat(pow2(R + 1) - 1)) break;
      best.offer(cum / Rat(vol), R, k, Witness{WitnessKind::triangle, v, R});
    }
  }
  Rat tail = 0;
  if (!f.empty()) {
    long long r_min = std::max(K + 1, w.h_max() + 1 - f.max_support_height());
    tail = total / Rat(pow2(r_min + 1) - 1);
  }
  return detail::finish(best, tail);
}

// Bu: sup over triangles containing x of the |f|-average of the base. A
// positive-mass base sits at a support height, hence inside the window when
// the vertex is; vertices above the apex force base size >= 2^{K+1} on
// mass-carrying bases at support heights.
inline CertifiedValue eval_Bu(const TreeWindow& w, const SparseFunction& f, TreeWindow::Id x) {
  f.require_supported_in(w);
  const VertexAddress ax = w.address_of(x);
  const long long K = w.h_max() - ax.height();
  const Rat total = f.l1();
  detail::BestTracker best;
  best.offer(abs(f.at(ax)), 0, 0, Witness{WitnessKind::base, ax, 0});
  const auto heights = f.support_heights();
  for (long long k = 0; k <= K; ++k) {
    if (best.value > 0 && total < best.value * Rat(pow2(k))) break;  // |s^R(v)| >= 2^R >= 2^k
    const VertexAddress v = predecessor(ax, k);
    for (long long hsup : heights) {
      if (hsup > ax.height()) break;  // base must not sit above x
      const long long R = v.height() - hsup;  // >= k
      if (best.value > 0 && total < best.value * Rat(pow2(R))) continue;
      Rat m = 0;
      for (const auto& e : f.entries())
        if (e.addr.height() == hsup && detail::in_cone(v, e.addr)) m += abs(e.val);
      if (m == 0) continue;
      Int size = abstract_shell_size(w.spec(), v, R);
      best.offer(m / Rat(size), R, k, Witness{WitnessKind::base, v, R});
    }
  }
  Rat tail = 0;
  if (!f.empty()) {
    long long r_min = std::max(K + 1, w.h_max() + 1 - f.max_support_height());
    tail = total / Rat(pow2(r_min));
  }
  return detail::finish(best, tail);
}

// Tmod: sup_r over T'_r(x) = T_r(x) + {p^r(x)} (|T'_0| = 1). The extra point
// is addressable for every r and carries f = 0 above the window. For
// base-dipping r the volume is bounded below by growing the deepest
// in-window base by factor-2 levels.
inline CertifiedValue eval_Tmod(const TreeWindow& w, const SparseFunction& f, TreeWindow::Id x) {
  f.require_supported_in(w);
  const VertexAddress ax = w.address_of(x);
  const long long r_cut = ax.height() - w.h_min();
  const long long K = w.h_max() - ax.height();
  const auto mass = detail::cone_mass_profile(ax, f, r_cut);
  detail::BestTracker best;
  Rat cum = 0;
  Int vol = 0;
  Int base = 0;
  for (long long r = 0; r <= r_cut; ++r) {
    cum += mass[static_cast<std::size_t>(r)];
    base = abstract_shell_size(w.spec(), ax, r);
    vol += base;
    Rat m = cum;
    Int sz = vol;
    if (r >= 1) {
      m += abs(f.at(predecessor(ax, r)));
      sz += 1;
    }
    best.offer(m / Rat(sz), r, 0, Witness{WitnessKind::mod_triangle, ax, r});
  }
  // Tail over r > r_cut: |T_r(x)| >= vol + base * (2^{r - r_cut + 1} - 2).
  Rat tail = 0;
  auto dip_bound = [&](long long r, const Rat& extra) {
    Int lower = vol + base * (pow2(r - r_cut + 1) - 2) + 1;
    return (cum + extra) / Rat(lower);
  };
  for (long long r = r_cut + 1; r <= K; ++r)
    tail = std::max(tail, dip_bound(r, abs(f.at(predecessor(ax, r)))));
  tail = std::max(tail, dip_bound(std::max(r_cut, K) + 1, Rat(0)));
  return detail::finish(best, tail);
}

// Umod: sup over modified triangles containing x. Either x lies in the
// triangle part (vertex p^k(x), extra point above) or x IS the extra point
// (vertex in s^R(x)). In the second family only vertices above support
// points matter: any other choice scores |f(x)|/(|T_R|+1) < |f(x)|, which
// the point candidate already beats.
inline CertifiedValue eval_Umod(const TreeWindow& w, const SparseFunction& f, TreeWindow::Id x) {
  f.require_supported_in(w);
  const VertexAddress ax = w.address_of(x);
  const long long K = w.h_max() - ax.height();
  const Rat total = f.l1();
  const Rat fx = abs(f.at(ax));
  const Rat mass_cap = total + f.linf();  // mass of any modified triangle
  detail::BestTracker best;
  best.offer(fx, 0, 0, Witness{WitnessKind::mod_triangle, ax, 0});

  Rat tail = 0;
  // Family (a): x in T_R(p^k(x)).
  for (long long k = 0; k <= K; ++k) {
    if (best.value > 0 && mass_cap < best.value * Rat(pow2(k + 1))) break;  // |T'| >= 2^{k+1}
    const VertexAddress v = predecessor(ax, k);
    const long long r_cut = v.height() - w.h_min();
    const auto mass = detail::cone_mass_profile(v, f, r_cut);
    Rat cum = 0;
    Int vol = 0;
    Int base = 0;
    for (long long R = 0; R <= r_cut; ++R) {
      cum += mass[static_cast<std::size_t>(R)];
      base = abstract_shell_size(w.spec(), v, R);
      vol += base;
      if (R < std::max(k, 1LL)) continue;
      best.offer((cum + abs(f.at(predecessor(v, R)))) / Rat(vol + 1), R, k,
                 Witness{WitnessKind::mod_triangle, v, R});
    }
    // Base-dipping tails for this vertex; the extra point p^{k+R}(x) still
    // carries exact mass while it stays inside the window.
    auto dip_bound = [&](long long R, const Rat& extra) {
      Int lower = vol + base * (pow2(R - r_cut + 1) - 2) + 1;
      return (cum + extra) / Rat(lower);
    };
    for (long long R = r_cut + 1; k + R <= K; ++R)
      tail = std::max(tail, dip_bound(R, abs(f.at(predecessor(v, R)))));
    tail = std::max(tail, dip_bound(std::max(r_cut, K - k) + 1, Rat(0)));
  }

  // Family (b): x = p^R(v), v in s^R(x). Vertices above support mass,
  // triangle fully in-window; the rest is dominated or bounded.
  const long long down = ax.height() - w.h_min();
  auto below_mass = [&](long long R) {  // support mass in cone(x) at depth >= R
    Rat m = 0;
    for (const auto& e : f.entries())
      if (ax.height() - e.addr.height() >= R && detail::in_cone(ax, e.addr)) m += abs(e.val);
    return m;
  };
  for (long long R = 1; 2 * R <= down; ++R) {
    std::vector<VertexAddress> verts;
    for (const auto& e : f.entries()) {
      long long rel = ax.height() - e.addr.height();
      if (rel < R || !detail::in_cone(ax, e.addr)) continue;
      VertexAddress v = predecessor(e.addr, rel - R);
      if (std::find(verts.begin(), verts.end(), v) == verts.end()) verts.push_back(v);
    }
    for (const auto& v : verts) {
      const auto mass = detail::cone_mass_profile(v, f, R);
      Rat m = fx;
      for (const auto& part : mass) m += part;
      best.offer(m / Rat(detail::cone_volume(w.spec(), v, R) + 1), R, R,
                 Witness{WitnessKind::mod_triangle, v, R});
    }
  }
  for (long long R = down / 2 + 1; R <= down; ++R) {  // triangle dips below the floor
    Rat m = below_mass(R);
    if (m == 0) continue;
    tail = std::max(tail, (m + fx) / Rat(pow2(R + 1)));
  }
  tail = std::max(tail, fx / Rat(pow2(down + 2)));  // vertices below the floor
  // Family (a) vertices above the apex: |T'| >= 2^{R+1}, R >= K+1.
  if (!f.empty()) tail = std::max(tail, mass_cap / Rat(pow2(K + 2)));
  return detail::finish(best, tail);
}

// K: exact kernel sum (linear in f, signed).
inline Rat eval_K(const TreeWindow& w, const SparseFunction& f, TreeWindow::Id x) {
  f.require_supported_in(w);
  const VertexAddress ax = w.address_of(x);
  Rat s = 0;
  for (const auto& e : f.entries()) {
    Confluence c = confluent(ax, e.addr);
    Int vol = w.triangle_volume(w.id_of_or_fail(c.vertex), c.eta());
    s += e.val / Rat(vol);
  }
  return s;
}

namespace detail {

// |B_r(x)| decomposed along the ancestor chain: the cone below x plus, for
// each 1 <= k <= r, the part of the cone of p^k(x) not through p^{k-1}(x).
// All pieces are in-window when r <= min(h(x) - h_min, h_max - h(x)).
inline Int ball_volume_by_cones(const ValenceSpec& spec, const VertexAddress& x, long long r) {
  Int vol = cone_volume(spec, x, r);
  for (long long k = 1; k <= r; ++k) {
    VertexAddress anc = predecessor(x, k);
    vol += cone_volume(spec, anc, r - k);
    if (r - k >= 1) vol -= cone_volume(spec, predecessor(x, k - 1), r - k - 1);
  }
  return vol;
}

}  // namespace detail

// M: sup over closed balls centred at x. Ball volumes strictly grow with the
// radius, so once the in-window ball swallows the whole support the deeper
// candidates are dominated; otherwise escaping balls are bounded by
// ||f||_1 / (2^{r_in + 2} - 1).
inline CertifiedValue eval_M(const TreeWindow& w, const SparseFunction& f, TreeWindow::Id x) {
  f.require_supported_in(w);
  const VertexAddress ax = w.address_of(x);
  const long long r_in = w.ball_radius_in_window(x);
  std::vector<Rat> mass(static_cast<std::size_t>(r_in) + 1, Rat(0));
  Rat inside = 0;
  for (const auto& e : f.entries()) {
    long long d = distance(ax, e.addr);
    if (d <= r_in) {
      mass[static_cast<std::size_t>(d)] += abs(e.val);
      inside += abs(e.val);
    }
  }
  detail::BestTracker best;
  Rat cum = 0;
  Rat last = 0;
  for (long long r = 0; r <= r_in; ++r) {
    cum += mass[static_cast<std::size_t>(r)];
    last = cum / Rat(detail::ball_volume_by_cones(w.spec(), ax, r));
    best.offer(last, r, 0, Witness{WitnessKind::ball, ax, r});
  }
  const Rat total = f.l1();
  Rat tail = (inside == total) ? last : total / Rat(pow2(r_in + 2) - 1);
  return detail::finish(best, tail);
}

// N: sup over closed balls containing x. In-window centres are enumerated
// exactly; a ball that escapes the window or is centred outside it has
// radius at least ceil(delta/2), where delta is the distance from x to the
// nearest out-of-window vertex: reaching x from the centre and reaching the
// outside from the centre cannot both be short.
inline CertifiedValue eval_N(const TreeWindow& w, const SparseFunction& f, TreeWindow::Id x) {
  f.require_supported_in(w);
  const VertexAddress ax = w.address_of(x);
  const Rat total = f.l1();
  detail::BestTracker best;
  best.offer(abs(f.at(ax)), 0, 0, Witness{WitnessKind::ball, ax, 0});
  for (TreeWindow::Id z = 0; z < w.n(); ++z) {
    const VertexAddress az = w.address_of(z);
    const long long d = distance(ax, az);
    const long long r_max = w.ball_radius_in_window(z);
    if (d > r_max) continue;
    if (best.value > 0 && total < best.value * Rat(pow2(d + 1) - 1)) continue;
    std::vector<Rat> mass(static_cast<std::size_t>(r_max) + 1, Rat(0));
    for (const auto& e : f.entries()) {
      long long dy = distance(az, e.addr);
      if (dy <= r_max) mass[static_cast<std::size_t>(dy)] += abs(e.val);
    }
    Rat cum = 0;
    for (long long r = 0; r <= r_max; ++r) {
      cum += mass[static_cast<std::size_t>(r)];
      if (r < d) continue;
      if (best.value > 0 && total < best.value * Rat(pow2(r + 1) - 1)) break;
      best.offer(cum / Rat(detail::ball_volume_by_cones(w.spec(), az, r)), r, d,
                 Witness{WitnessKind::ball, az, r});
    }
  }
  Rat tail = 0;
  if (!f.empty()) {
    long long delta = std::min(ax.height() - w.h_min(), w.h_max() - ax.height()) + 1;
    long long r_min = (delta + 1) / 2;
    tail = total / Rat(pow2(r_min + 1) - 1);
  }
  return detail::finish(best, tail);
}

// ---------- dispatch and batch ----------

inline CertifiedValue eval_point(const TreeWindow& w, OperatorKind kind, const SparseFunction& f,
                                 TreeWindow::Id x) {
  switch (kind) {
    case OperatorKind::T: return eval_T(w, f, x);
    case OperatorKind::U: return eval_U(w, f, x);
    case OperatorKind::B: return eval_B(w, f, x);
    case OperatorKind::Bu: return eval_Bu(w, f, x);
    case OperatorKind::Tmod: return eval_Tmod(w, f, x);
    case OperatorKind::Umod: return eval_Umod(w, f, x);
    case OperatorKind::K: {
      CertifiedValue cv;
      cv.value = eval_K(w, f, x);
      cv.certified = true;
      cv.tail_bound = 0;
      return cv;
    }
    case OperatorKind::M: return eval_M(w, f, x);
    case OperatorKind::N: return eval_N(w, f, x);
  }
  fail(Errc::bad_argument, "unknown operator kind");
}

struct BatchRow {
  VertexAddress addr;
  CertifiedValue cv;
  std::string error;  // nonempty when evaluation failed; cv is then empty
};

// Evaluates one operator over a region, rows ordered by address. Per-vertex
// errors are recorded, not fatal.
inline std::vector<BatchRow> batch_eval(const TreeWindow& w, OperatorKind kind,
                                        const SparseFunction& f,
                                        std::vector<TreeWindow::Id> region) {
  f.require_supported_in(w);
  std::vector<std::pair<VertexAddress, TreeWindow::Id>> ordered;
  ordered.reserve(region.size());
  for (TreeWindow::Id id : region) ordered.emplace_back(w.address_of(id), id);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
  std::vector<BatchRow> rows;
  rows.reserve(ordered.size());
  for (const auto& [addr, id] : ordered) {
    BatchRow row;
    row.addr = addr;
    try {
      row.cv = eval_point(w, kind, f, id);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace treemax
