// treemax: level sets, maximal triangle families, overlap analysis.
//
// The level set {x : Op f(x) > alpha} of the uncentred operators U and Bu is
// exactly a finite union of "qualifying" triangles (average over the triangle,
// resp. over its base, strictly above alpha); decompose_maximal returns the
// inclusion-maximal members of that family. Candidates are support-driven:
// a qualifying triangle carries positive mass, so its vertex is an ancestor
// of a support point within the qualifying radius, which the volume growth
// |T_R| >= 2^{R+1}-1 (resp. |s^R| >= 2^R) caps at R_max(alpha).
//
// The window must be large enough to materialize every candidate; otherwise
// the decomposition could silently miss members, so we refuse instead
// (window_too_small, with the required bounds in the message).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "treemax/address.hpp"
#include "treemax/errors.hpp"
#include "treemax/function.hpp"
#include "treemax/operators.hpp"
#include "treemax/rational.hpp"
#include "treemax/window.hpp"

namespace treemax {

// ---------- triangle references ----------

// The triangle T_{height}(vertex).
struct TriangleRef {
  VertexAddress vertex;
  long long height = 0;

  bool operator==(const TriangleRef&) const = default;
};

// T_R(v) subseteq T_{R'}(v')  iff  v' = p^j(v) and R' >= R + j.
inline bool triangle_subset(const TriangleRef& a, const TriangleRef& b) {
  long long j = b.vertex.height() - a.vertex.height();
  return j >= 0 && b.height >= a.height + j && predecessor(a.vertex, j) == b.vertex;
}

inline bool triangle_contains_point(const TriangleRef& t, const VertexAddress& x) {
  long long rel = t.vertex.height() - x.height();
  return rel >= 0 && rel <= t.height && detail::in_cone(t.vertex, x);
}

// Bases s^R(v), s^{R'}(v') intersect iff they sit at the same height and the
// vertices are comparable (then one base contains the other).
inline bool bases_intersect(const TriangleRef& a, const TriangleRef& b) {
  if (a.vertex.height() - a.height != b.vertex.height() - b.height) return false;
  return is_predecessor_of(a.vertex, b.vertex) || is_predecessor_of(b.vertex, a.vertex);
}

// Canonical family order: vertex height descending, then vertex address,
// then triangle height ascending. Keeps every report byte-stable.
inline bool triangle_order(const TriangleRef& a, const TriangleRef& b) {
  if (a.vertex.height() != b.vertex.height()) return a.vertex.height() > b.vertex.height();
  if (a.vertex != b.vertex) return a.vertex < b.vertex;
  return a.height < b.height;
}

struct TriangleFamily {
  std::vector<TriangleRef> members;

  bool antichain() const {
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = 0; j < members.size(); ++j)
        if (i != j && triangle_subset(members[i], members[j])) return false;
    return true;
  }
};

// ---------- level sets ----------

// {x : value(x) > alpha} from a batch of certified evaluations. Uncertified
// or failed rows poison the whole set.
inline std::vector<VertexAddress> level_set(const std::vector<BatchRow>& rows, const Rat& alpha) {
  std::vector<VertexAddress> out;
  for (const auto& row : rows) {
    if (!row.error.empty())
      fail(Errc::uncertified_input, "level_set: evaluation failed at " + to_string(row.addr) +
                                        ": " + row.error);
    if (!row.cv.certified)
      fail(Errc::uncertified_input,
           "level_set: uncertified value at " + to_string(row.addr) + " (enlarge the window)");
    if (row.cv.value > alpha) out.push_back(row.addr);
  }
  return out;
}

// ---------- decomposition ----------

struct TriangleStat {
  TriangleRef ref;
  Int volume = 0;
  Int base_size = 0;
  Rat average = 0;  // over the triangle for U, over the base for Bu
};

struct DecompositionReport {
  OperatorKind kind = OperatorKind::U;
  Rat alpha = 0;
  std::vector<TriangleStat> triangles;
  std::int64_t level_set_size = 0;
  bool disjoint_bases = true;
  bool union_equals_levelset = true;
  bool dal_basso_bounds = true;

  bool empty() const { return triangles.empty(); }

  TriangleFamily family() const {
    TriangleFamily fam;
    fam.members.reserve(triangles.size());
    for (const auto& t : triangles) fam.members.push_back(t.ref);
    return fam;
  }

  nlohmann::json to_json() const {
    nlohmann::json tri = nlohmann::json::array();
    for (const auto& t : triangles) {
      tri.push_back({{"vertex", to_string(t.ref.vertex)},
                     {"height", t.ref.height},
                     {"volume", t.volume.convert_to<std::int64_t>()},
                     {"base_size", t.base_size.convert_to<std::int64_t>()},
                     {"average", rat_to_string(t.average)}});
    }
    return nlohmann::json{{"alpha", rat_to_string(alpha)},
                          {"triangles", tri},
                          {"level_set_size", level_set_size},
                          {"checks",
                           {{"disjoint_bases", disjoint_bases},
                            {"union_equals_levelset", union_equals_levelset},
                            {"dal_basso_bounds", dal_basso_bounds}}}};
  }
};

namespace detail {

// Support mass on the triangle (U) or on its base only (Bu).
inline Rat candidate_mass(const SparseFunction& f, const TriangleRef& t, bool base_only) {
  Rat m = 0;
  for (const auto& e : f.entries()) {
    long long rel = t.vertex.height() - e.addr.height();
    if (rel < 0 || rel > t.height) continue;
    if (base_only && rel != t.height) continue;
    if (in_cone(t.vertex, e.addr)) m += abs(e.val);
  }
  return m;
}

}  // namespace detail

// Decomposes {x : Op f(x) > alpha} (Op = U or Bu) into the unique family of
// inclusion-maximal qualifying triangles. Empty result (alpha at or above the
// operator's maximum) is informational, not an error.
inline DecompositionReport decompose_maximal(const TreeWindow& w, const SparseFunction& f,
                                             const Rat& alpha, OperatorKind kind) {
  if (kind != OperatorKind::U && kind != OperatorKind::Bu)
    fail(Errc::bad_argument, "decompose_maximal: operator must be U or Bu");
  if (alpha <= 0) fail(Errc::bad_argument, "decompose_maximal: alpha must be positive");
  f.require_supported_in(w);
  const bool base_only = (kind == OperatorKind::Bu);

  DecompositionReport rep;
  rep.kind = kind;
  rep.alpha = alpha;
  if (f.empty()) return rep;

  const Rat budget = f.l1() / alpha;  // qualifying volume (U) / base size (Bu) < budget
  // Any radius whose minimal possible volume already reaches the budget cannot
  // qualify; the tree's least branching factor gives the per-level floor.
  const Int bm = w.spec().min_successors();
  long long r_max = -1;
  {
    Int shell_floor = 1, vol_floor = 1;  // |s^0| = |T_0| = 1
    for (long long r = 0; Rat(base_only ? shell_floor : vol_floor) < budget; ++r) {
      r_max = r;
      shell_floor *= bm;
      vol_floor += shell_floor;
    }
  }
  if (r_max < 0) return rep;  // alpha too large: nothing qualifies

  // Window precheck: every candidate must be materialized in full.
  const long long need_top = f.max_support_height() + r_max;
  const long long need_bottom = base_only ? f.min_support_height()
                                          : f.min_support_height() - r_max;
  if (w.h_max() < need_top || w.h_min() > need_bottom)
    fail(Errc::window_too_small,
         "decompose_maximal: window [" + std::to_string(w.h_min()) + ", " +
             std::to_string(w.h_max()) + "] cannot hold all candidate triangles; need top >= " +
             std::to_string(need_top) + " and bottom <= " + std::to_string(need_bottom) +
             " (radius bound " + std::to_string(r_max) + ")");

  // Qualifying candidates, support-driven.
  std::vector<TriangleRef> qualifying;
  if (base_only) {
    std::vector<TriangleRef> seen;
    for (const auto& e : f.entries()) {
      for (long long R = 0; R <= r_max; ++R) {
        TriangleRef t{predecessor(e.addr, R), R};
        if (std::find(seen.begin(), seen.end(), t) != seen.end()) continue;
        seen.push_back(t);
        Int size = abstract_shell_size(w.spec(), t.vertex, R);
        if (Rat(size) >= budget) continue;
        if (detail::candidate_mass(f, t, true) > alpha * Rat(size)) qualifying.push_back(t);
      }
    }
  } else {
    std::vector<VertexAddress> verts;
    for (const auto& e : f.entries())
      for (long long k = 0; k <= r_max; ++k) {
        VertexAddress v = predecessor(e.addr, k);
        if (std::find(verts.begin(), verts.end(), v) == verts.end()) verts.push_back(v);
      }
    for (const auto& v : verts) {
      const long long depth_cap = std::min(r_max, v.height() - w.h_min());
      const auto mass = detail::cone_mass_profile(v, f, depth_cap);
      Rat cum = 0;
      Int vol = 0;
      for (long long R = 0; R <= depth_cap; ++R) {
        cum += mass[static_cast<std::size_t>(R)];
        vol += abstract_shell_size(w.spec(), v, R);
        if (Rat(vol) >= budget) break;
        if (cum > alpha * Rat(vol)) qualifying.push_back(TriangleRef{v, R});
      }
    }
  }
  if (qualifying.empty()) return rep;

  // Inclusion-maximal members.
  std::vector<TriangleRef> maximal;
  for (const auto& a : qualifying) {
    bool dominated = false;
    for (const auto& b : qualifying)
      if (!(a == b) && triangle_subset(a, b)) {
        dominated = true;
        break;
      }
    if (!dominated) maximal.push_back(a);
  }
  std::sort(maximal.begin(), maximal.end(), triangle_order);

  // Level set = union of all qualifying triangles; compare with the union of
  // the maximal ones (they must agree — every qualifying triangle sits inside
  // a maximal one).
  std::unordered_set<std::int64_t> union_all, union_max;
  for (const auto& t : qualifying)
    for (TreeWindow::Id m : w.triangle_members(w.id_of_or_fail(t.vertex), t.height))
      union_all.insert(m);
  for (const auto& t : maximal)
    for (TreeWindow::Id m : w.triangle_members(w.id_of_or_fail(t.vertex), t.height))
      union_max.insert(m);
  rep.level_set_size = static_cast<std::int64_t>(union_all.size());
  rep.union_equals_levelset = (union_all == union_max);

  // Per-member stats and the volume sandwich: the defining average exceeds
  // alpha while the one-step extension T_{R+1}(p(v)) must not (else the
  // member was not maximal); together these pin |T| between mass/(growth *
  // alpha) and mass/alpha.
  rep.dal_basso_bounds = true;
  for (const auto& t : maximal) {
    TriangleStat st;
    st.ref = t;
    st.volume = w.triangle_volume(w.id_of_or_fail(t.vertex), t.height);
    st.base_size = abstract_shell_size(w.spec(), t.vertex, t.height);
    Rat mass = detail::candidate_mass(f, t, base_only);
    st.average = mass / Rat(base_only ? st.base_size : st.volume);
    if (!(st.average > alpha)) rep.dal_basso_bounds = false;
    if (alpha * Rat(base_only ? st.base_size : st.volume) >= f.l1()) rep.dal_basso_bounds = false;
    if (t.vertex.height() < w.h_max()) {
      TriangleRef ext{predecessor(t.vertex, 1), t.height + 1};
      Rat ext_mass = detail::candidate_mass(f, ext, base_only);
      Int ext_den = base_only ? abstract_shell_size(w.spec(), ext.vertex, ext.height)
                              : w.triangle_volume(w.id_of_or_fail(ext.vertex), ext.height);
      if (ext_mass > alpha * Rat(ext_den)) rep.dal_basso_bounds = false;
    }
    rep.triangles.push_back(std::move(st));
  }

  // Antichain members have pairwise disjoint bases.
  for (std::size_t i = 0; i < maximal.size() && rep.disjoint_bases; ++i)
    for (std::size_t j = i + 1; j < maximal.size(); ++j)
      if (bases_intersect(maximal[i], maximal[j])) {
        rep.disjoint_bases = false;
        break;
      }
  return rep;
}

// ---------- overlap ----------

struct OverlapProfile {
  Int g_size = 0;                                 // |G| = |union of the family|
  std::map<long long, std::int64_t> count_eq;     // multiplicity -> #vertices
  long long omega_max = 0;
  bool geometric_bound = true;  // 2^k * |{omega >= k}| <= 4 |G| for all k >= 1

  std::int64_t count_ge(long long k) const {
    std::int64_t c = 0;
    for (const auto& [m, n] : count_eq)
      if (m >= k) c += n;
    return c;
  }
};

inline OverlapProfile overlap_profile(const TreeWindow& w, const TriangleFamily& fam) {
  if (fam.members.empty()) fail(Errc::bad_argument, "overlap_profile: empty family");
  std::unordered_map<std::int64_t, long long> omega;
  for (const auto& t : fam.members)
    for (TreeWindow::Id m : w.triangle_members(w.id_of_or_fail(t.vertex), t.height)) ++omega[m];
  OverlapProfile prof;
  prof.g_size = static_cast<std::int64_t>(omega.size());
  for (const auto& [id, mult] : omega) {
    ++prof.count_eq[mult];
    prof.omega_max = std::max(prof.omega_max, mult);
  }
  for (long long k = 1; k <= prof.omega_max; ++k)
    if (pow2(k) * Int(prof.count_ge(k)) > 4 * prof.g_size) prof.geometric_bound = false;
  return prof;
}

// ---------- the covering constant A_r ----------

// A_r = 4 * sum_{k>=1} k^r 2^{-k}, exact for integer r >= 1 via the
// recurrence S_r = 1 + sum_{j<r} C(r,j) S_j (shift k -> m+1 and expand the
// binomial; S_0 = 1).
inline Rat overlap_constant(long long r) {
  if (r < 1) fail(Errc::bad_argument, "overlap_constant: exponent must be >= 1");
  std::vector<Rat> s(static_cast<std::size_t>(r) + 1);
  s[0] = 1;
  for (long long m = 1; m <= r; ++m) {
    Rat acc = 1;
    Int binom = 1;  // C(m, j), built incrementally
    for (long long j = 0; j < m; ++j) {
      acc += Rat(binom) * s[static_cast<std::size_t>(j)];
      binom = binom * (m - j) / (j + 1);
    }
    s[static_cast<std::size_t>(m)] = acc;
  }
  return Rat(4) * s[static_cast<std::size_t>(r)];
}

// Upper bound on A_r for real r >= 1: partial sum to k0 plus a geometric
// tail. For k > k0 the term ratio is ((k+1)/k)^r / 2 <= exp(r/k0)/2 = q < 1,
// so the tail after k0 is at most term(k0) * q / (1 - q). (A plain doubling
// margin is NOT enough: just past 2r/ln 2 the ratio is still ~0.707, whose
// geometric series sums to ~3.41 times the next term, so we use the exact
// ratio bound instead.) The final factor absorbs the accumulated rounding of
// the ~k0-term double summation, which otherwise lands an ulp or two below
// the exact value and would break the upper-bound contract.
inline double overlap_constant_real(double r) {
  if (r < 1) fail(Errc::bad_argument, "overlap_constant: exponent must be >= 1");
  const long long k0 = std::max<long long>(64, static_cast<long long>(2 * r / 0.6931) + 2);
  double sum = 0;
  for (long long k = 1; k <= k0; ++k) sum += std::pow(static_cast<double>(k), r) / std::ldexp(1.0, static_cast<int>(k));
  double term = std::pow(static_cast<double>(k0), r) / std::ldexp(1.0, static_cast<int>(k0));
  double q = std::exp(r / static_cast<double>(k0)) / 2.0;
  return 4.0 * (sum + term * q / (1.0 - q)) * (1.0 + 1e-12);
}

// ---------- Cordoba-Fefferman style checks ----------

struct CfReport {
  Rat lhs_pow_r = 0;  // || sum_T 1_T ||_r ^ r  (exact)
  Rat rhs_pow_r = 0;  // (A_r)^r * |G|
  Rat ratio_pow_r = 0;  // lhs_pow_r / |G|
  bool pass = false;
};

inline CfReport check_cordoba_fefferman(const TreeWindow& w, const TriangleFamily& fam,
                                        long long r) {
  if (!fam.antichain()) fail(Errc::not_maximal, "check_cordoba_fefferman: family has a comparable pair");
  OverlapProfile prof = overlap_profile(w, fam);
  CfReport rep;
  for (const auto& [m, n] : prof.count_eq) rep.lhs_pow_r += Rat(ipow(Int(m), r) * Int(n));
  rep.rhs_pow_r = rpow(overlap_constant(r), r) * Rat(prof.g_size);
  rep.ratio_pow_r = rep.lhs_pow_r / Rat(prof.g_size);
  rep.pass = rep.lhs_pow_r <= rep.rhs_pow_r;
  return rep;
}

struct CfRealReport {
  double lhs = 0;    // || sum_T 1_T ||_r
  double rhs = 0;    // A_r(upper bound) * |G|^{1/r}
  double ratio = 0;  // lhs / |G|^{1/r}
  bool pass = false;
};

inline CfRealReport check_cordoba_fefferman_real(const TreeWindow& w, const TriangleFamily& fam,
                                                 double r) {
  if (!fam.antichain()) fail(Errc::not_maximal, "check_cordoba_fefferman: family has a comparable pair");
  OverlapProfile prof = overlap_profile(w, fam);
  CfRealReport rep;
  double lhs_pow = 0;
  for (const auto& [m, n] : prof.count_eq)
    lhs_pow += std::pow(static_cast<double>(m), r) * static_cast<double>(n);
  double g = prof.g_size.convert_to<double>();
  rep.lhs = std::pow(lhs_pow, 1.0 / r);
  rep.rhs = overlap_constant_real(r) * std::pow(g, 1.0 / r);
  rep.ratio = rep.lhs / std::pow(g, 1.0 / r);
  rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-9);
  return rep;
}

// The modified-triangle analogue fails for r > 1: around a vertex with s
// successors, the family {T'_1(y) : y a successor} overlaps s times at the
// parent while the union stays of size 3s + 1, so the r-th power ratio grows
// linearly in s. Computed exactly from the window, no formula shortcuts.
struct CfFailureReport {
  long long successors = 0;  // s = size of s^1 at the flagged vertex
  Int lhs_pow_r = 0;         // || sum 1_{T'} ||_r ^ r over the counting measure
  Int g_size = 0;            // |union|
  Rat ratio_pow_r = 0;       // lhs_pow_r / |G| = (lhs / ||1_G||_r)^r
};

inline CfFailureReport check_cf_failure_modified(const TreeWindow& w,
                                                 const VertexAddress& centre, long long r) {
  if (r < 1) fail(Errc::bad_argument, "check_cf_failure_modified: exponent must be >= 1");
  TreeWindow::Id c = w.id_of_or_fail(centre);
  if (w.height_of(c) - 2 < w.h_min() || w.height_of(c) > w.h_max())
    fail(Errc::window_too_small, "check_cf_failure_modified: need two levels below the centre");
  std::unordered_map<std::int64_t, long long> omega;
  long long s = w.child_count(c);
  for (long long i = 0; i < s; ++i) {
    TreeWindow::Id y = w.child_at(c, i);
    ++omega[y];
    ++omega[c];  // the modified triangle T'_1(y) reaches back up to the centre
    for (long long j = 0; j < w.child_count(y); ++j) ++omega[w.child_at(y, j)];
  }
  CfFailureReport rep;
  rep.successors = s;
  rep.g_size = static_cast<std::int64_t>(omega.size());
  for (const auto& [id, mult] : omega) rep.lhs_pow_r += ipow(Int(mult), r);
  rep.ratio_pow_r = Rat(rep.lhs_pow_r) / Rat(rep.g_size);
  return rep;
}

}  // namespace treemax
