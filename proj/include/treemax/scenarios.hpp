// treemax: quantitative verification scenarios.
//
// Each scenario exercises one quantitative statement about the maximal
// operators at desk scale: a norm or weak-type bound checked in exact
// arithmetic, a growth rate checked along a parameter grid, or a structural
// identity checked exhaustively on a window. Scenarios report named checks
// (required or informational) plus the observed numbers; a scenario passes
// when every required check holds. Exploratory scenarios never claim more
// than the trends they print.
//
// Conventions used throughout:
//   - "certified" sums/values include an explicit upper bound for everything
//     outside the window, so comparisons hold for the infinite tree;
//   - growth grids assert strict monotonicity only where it genuinely holds;
//     otherwise a divergence trend "last >= 4 x first" is asserted instead;
//   - floating point appears only where an exponent is irrational, and always
//     with an explicit tolerance.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "treemax/operators.hpp"
#include "treemax/levelset.hpp"
#include "treemax/random.hpp"
#include "treemax/report.hpp"
#include "treemax/window.hpp"

namespace treemax {

namespace scen_detail {

// ---------- small helpers ----------

inline Int hom_triangle_volume(int b, long long R) {
  return (ipow(Int(b), R + 1) - 1) / (b - 1);
}

inline bool strictly_increasing(const std::vector<Rat>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) return false;
  return true;
}

inline bool strictly_increasing_f64(const std::vector<double>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) return false;
  return true;
}

// Divergence trend: the last grid value is at least 4x the first.
inline bool trend_4x(const std::vector<Rat>& xs) {
  return xs.size() >= 2 && xs.back() >= 4 * xs.front();
}

inline std::string key_of(const std::string& name, long long v) {
  return name + "=" + std::to_string(v);
}

// Largest radius whose floor volume (triangle) or floor base size (shell)
// stays below the budget; -1 when even a single vertex is too big. Mirrors
// the bound decompose_maximal uses, so windows sized with it never refuse.
inline long long radius_bound(const ValenceSpec& spec, const Rat& budget, bool base_only) {
  const Int bm = spec.min_successors();
  long long r_max = -1;
  Int shell_floor = 1, vol_floor = 1;
  while (Rat(base_only ? shell_floor : vol_floor) < budget) {
    ++r_max;
    shell_floor *= bm;
    vol_floor += shell_floor;
  }
  return r_max;
}

// Window just large enough that decompose_maximal can certify completeness.
inline TreeWindow auto_window(const ValenceSpec& spec, const SparseFunction& f, const Rat& alpha,
                              OperatorKind kind) {
  const bool base_only = (kind == OperatorKind::Bu);
  const long long r = std::max<long long>(0, radius_bound(spec, f.l1() / alpha, base_only));
  long long top = f.max_support_height() + r;
  long long bottom = base_only ? f.min_support_height() : f.min_support_height() - r;
  // The window is the cone below the ray vertex at height top, so a support
  // point is inside only when its branch-off height (anchor) is <= top.
  for (const auto& e : f.entries()) top = std::max(top, e.addr.anchor);
  top = std::max<long long>(top, 0);
  bottom = std::min(bottom, top - 1);
  return TreeWindow(spec, bottom, top);
}

// ---------- certified l1 norm of the triangular operator ----------

struct L1Result {
  Rat in_window = 0;  // exact l1 mass of the operator inside the window
  Rat tail = 0;       // certified bound on everything above the window
};

// The triangular operator vanishes off the predecessor closure of the
// support, and every vertex above the window is a ray vertex whose value is
// at most ||f||_1 / 2^(height gap); the geometric series gives the tail.
inline L1Result certified_T_l1(const TreeWindow& w, const SparseFunction& f) {
  L1Result out;
  if (f.empty()) return out;
  f.require_supported_in(w);
  std::vector<TreeWindow::Id> pts;
  for (const auto& e : f.entries()) {
    for (long long k = 0;; ++k) {
      const VertexAddress v = predecessor(e.addr, k);
      if (v.height() > w.h_max()) break;
      pts.push_back(w.id_of_or_fail(v));
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (TreeWindow::Id id : pts) out.in_window += eval_T(w, f, id).value;
  out.tail = f.l1() / Rat(pow2(w.h_max() - f.max_support_height()));
  return out;
}

}  // namespace scen_detail

// ---------- scenario: lemma21 ----------
// Exhaustive volume comparisons: every triangle in the window satisfies
// |T| <= 2 |base|, and shells double per level upward from the base.
inline ScenarioReport scenario_lemma21(std::optional<ValenceSpec> tree = std::nullopt,
                                       std::optional<std::pair<long long, long long>> range =
                                           std::nullopt) {
  ScenarioReport rep;
  rep.id = "lemma21";
  struct Case {
    std::string name;
    ValenceSpec spec;
    long long lo, hi;
  };
  std::vector<Case> cases;
  if (tree) {
    auto r = range.value_or(std::make_pair(-4LL, 4LL));
    cases.push_back({"custom", *tree, r.first, r.second});
  } else {
    cases.push_back({"Tb:2", homogeneous_tree(2), -5, 5});
    cases.push_back({"Sab:2,4", two_band_tree(2, 4), -4, 4});
  }
  nlohmann::json pm = nlohmann::json::array();
  for (const auto& c : cases)
    pm.push_back({{"tree", c.name}, {"window", std::to_string(c.lo) + ".." + std::to_string(c.hi)}});
  rep.parameters["cases"] = pm;

  for (const auto& c : cases) {
    TreeWindow w(c.spec, c.lo, c.hi);
    const auto n = static_cast<std::size_t>(w.n());
    // Shell sizes by dynamic programming over the window: children have
    // larger ids, so one backward sweep fills every vertex's shell profile.
    std::vector<std::vector<long long>> sh(n);
    for (std::size_t i = n; i-- > 0;) {
      const auto id = static_cast<TreeWindow::Id>(i);
      const long long cap = w.height_of(id) - w.h_min();
      sh[i].assign(static_cast<std::size_t>(cap) + 1, 0);
      sh[i][0] = 1;
      for (std::int32_t ci = 0; ci < w.child_count(id); ++ci) {
        const auto child = static_cast<std::size_t>(w.child_at(id, ci));
        for (std::size_t j = 1; j < sh[i].size(); ++j) sh[i][j] += sh[child][j - 1];
      }
    }
    long long triangles = 0, vol_violations = 0, shell_violations = 0;
    for (std::size_t i = 0; i < n; ++i) {
      long long vol = 0;
      for (std::size_t R = 0; R < sh[i].size(); ++R) {
        vol += sh[i][R];
        ++triangles;
        if (vol > 2 * sh[i][R]) ++vol_violations;
        for (std::size_t k = 0; k <= R; ++k)
          if ((1LL << k) * sh[i][R - k] > sh[i][R]) ++shell_violations;
      }
    }
    rep.check("volume_vs_base[" + c.name + "]", vol_violations == 0,
              std::to_string(triangles) + " triangles, " + std::to_string(vol_violations) +
                  " violations of |T| <= 2|base|");
    rep.check("shell_doubling[" + c.name + "]", shell_violations == 0,
              std::to_string(shell_violations) + " violations of 2^k |s^(R-k)| <= |s^R|");
    rep.observations.push_back(
        Observation::of("triangles_checked[" + c.name + "]", "total", Rat(Int(triangles))));
  }
  return rep;
}

// ---------- scenario: thm31 ----------
// l1 contraction of the triangular operator: window mass plus certified tail
// never exceeds 2 ||f||_1, over seeded random nonnegative functions; the
// binary-tree ancestor-column sum is pinned to its known interval.
inline ScenarioReport scenario_thm31(std::uint64_t seed = 20260814,
                                     std::optional<ValenceSpec> tree = std::nullopt,
                                     std::optional<std::pair<long long, long long>> range =
                                         std::nullopt) {
  ScenarioReport rep;
  rep.id = "thm31";
  struct Case {
    std::string name;
    ValenceSpec spec;
    long long lo, hi;
    int trials;
  };
  std::vector<Case> cases;
  if (tree) {
    auto r = range.value_or(std::make_pair(-6LL, 6LL));
    cases.push_back({"custom", *tree, r.first, r.second, 50});
  } else {
    cases.push_back({"Tb:2", homogeneous_tree(2), -6, 6, 200});
    cases.push_back({"spike:5", spiked_tree(5), -4, 3, 50});
  }
  rep.parameters["seed"] = seed;

  Rng rng(seed);
  for (const auto& c : cases) {
    TreeWindow w(c.spec, c.lo, c.hi);
    long long violations = 0;
    Rat worst_ratio = 0;
    for (int t = 0; t < c.trials; ++t) {
      SparseFunction f = random_sparse_function(w, rng, 1 + static_cast<int>(rng.below(6)), true,
                                                c.lo + 2, c.hi - 4);
      if (f.empty()) continue;
      auto r = scen_detail::certified_T_l1(w, f);
      const Rat total = r.in_window + r.tail;
      if (total > 2 * f.l1()) ++violations;
      worst_ratio = std::max(worst_ratio, total / f.l1());
    }
    rep.check("l1_contraction[" + c.name + "]", violations == 0,
              std::to_string(c.trials) + " trials, " + std::to_string(violations) +
                  " above 2||f||_1");
    rep.observations.push_back(Observation::of("worst_l1_ratio[" + c.name + "]", "max",
                                               worst_ratio, "certified, must stay <= 2"));
  }

  // Ancestor-column sum on the binary tree: terms 1/(2^(k+1)-1).
  {
    TreeWindow w(homogeneous_tree(2), 0, 12);
    const VertexAddress o{0, {}};
    bool geometry_agrees = true;
    Rat partial = 0;
    std::vector<Rat> terms;
    for (long long k = 0; k <= 20; ++k) {
      const Rat term = Rat(Int(1), pow2(k + 1) - 1);
      terms.push_back(term);
      partial += term;
      if (k <= 12) {
        const Rat geo = kernel_tau(w, w.id_of_or_fail(predecessor(o, k)), w.id_of_or_fail(o));
        if (geo != term) geometry_agrees = false;
      }
    }
    rep.check("column_terms_match_geometry", geometry_agrees,
              "terms k<=12 equal the in-window ancestor kernel values");
    rep.check("column_sum_interval", partial > Rat(1606, 1000) && partial < Rat(1607, 1000),
              "partial sum over k<=20 is " + rat_to_string(partial));
    // Tail: terms k in [21,60] summed exactly, remainder dominated by the
    // geometric series sum_{k>60} 2^-k = 2^-60.
    Rat tail = Rat(Int(1), pow2(60));
    for (long long k = 21; k <= 60; ++k) tail += Rat(Int(1), pow2(k + 1) - 1);
    rep.check("column_sum_tail", tail < Rat(Int(1), pow2(20)),
              "tail past k=20 is below 2^-20");
    rep.observations.push_back(Observation::of("column_sum_partial", "k<=20", partial));
    rep.observations.push_back(Observation::of("column_sum_tail_bound", "k>20", tail));
  }
  return rep;
}

// ---------- scenario: thm32 ----------
// Weak (1,1) bound for the base operator with constant 2, plus the exact
// value of horocycle partial sums for a point mass.
inline ScenarioReport scenario_thm32(std::uint64_t seed = 20260814) {
  ScenarioReport rep;
  rep.id = "thm32";
  rep.parameters["alpha_grid"] = "(b+1)^-m";
  rep.parameters["seed"] = seed;

  Rng rng(seed);
  for (int b : {2, 3}) {
    const std::string tname = "Tb:" + std::to_string(b);
    const ValenceSpec spec = homogeneous_tree(b);
    const VertexAddress o{0, {}};

    // Test functions: point mass, a shell indicator, two random functions.
    std::vector<std::pair<std::string, SparseFunction>> fs;
    fs.emplace_back("delta", SparseFunction::delta(o));
    {
      TreeWindow sample(spec, -2, 2);
      std::vector<FunctionEntry> entries;
      for (TreeWindow::Id id : sample.shell_members(sample.id_of_or_fail(o), 2))
        entries.push_back({sample.address_of(id), Rat(1)});
      fs.emplace_back("shell2", SparseFunction(std::move(entries)));
      fs.emplace_back("rand1", random_sparse_function(sample, rng, 3, true, -2, 0));
      fs.emplace_back("rand2", random_sparse_function(sample, rng, 4, true, -2, 0));
    }

    long long violations = 0, pairs = 0;
    for (const auto& [fname, f] : fs) {
      const int m_cap = (fname.rfind("rand", 0) == 0 && b == 3) ? 4 : 6;
      for (int m = 1; m <= m_cap; ++m) {
        const Rat alpha = Rat(Int(1), ipow(Int(b + 1), m));
        TreeWindow w = scen_detail::auto_window(spec, f, alpha, OperatorKind::Bu);
        DecompositionReport d = decompose_maximal(w, f, alpha, OperatorKind::Bu);
        ++pairs;
        if (Rat(Int(d.level_set_size)) > 2 * f.l1() / alpha) ++violations;
        if (fname == "delta")
          rep.observations.push_back(Observation::of(
              "base_level_set_size[" + tname + ",delta]", scen_detail::key_of("m", m),
              Rat(Int(d.level_set_size))));
      }
    }
    rep.check("weak11_base[" + tname + "]", violations == 0,
              std::to_string(pairs) + " (f,alpha) pairs, " + std::to_string(violations) +
                  " above 2||f||_1/alpha");

    // Worked case for b=2: point mass at alpha = 1/10.
    if (b == 2) {
      TreeWindow w = scen_detail::auto_window(spec, fs[0].second, Rat(1, 10), OperatorKind::Bu);
      DecompositionReport d = decompose_maximal(w, fs[0].second, Rat(1, 10), OperatorKind::Bu);
      rep.check("worked_base_level_set", d.level_set_size == 15 && Rat(d.level_set_size) <= Rat(20),
                "point mass at alpha=1/10: level set 15 <= 20");
    }

    // Horocycle partial sums of the base operator for a point mass:
    // S_n over height 0 within distance 2n equals 1 + n(b-1)/b. The window
    // reaches above n_max so the certification tail 2^-(h_max+1) stays below
    // the smallest value b^-n_max on the horocycle.
    const long long n_max = (b == 2) ? 10 : 6;
    long long h_top = n_max;
    while (Rat(pow2(h_top + 1)) < Rat(ipow(Int(b), n_max))) ++h_top;
    TreeWindow w(spec, 0, h_top);
    const SparseFunction del_o = SparseFunction::delta(o);
    std::map<long long, Rat> by_eta;
    std::map<long long, long long> count_eta;
    bool all_certified = true;
    auto [lo, hi] = w.horocycle_range(0);
    for (TreeWindow::Id id = lo; id < hi; ++id) {
      const long long eta = confluent(o, w.address_of(id)).eta();
      if (eta > n_max) continue;  // beyond distance 2 n_max from the origin
      CertifiedValue cv = eval_Bu(w, del_o, id);
      if (!cv.certified) all_certified = false;
      by_eta[eta] += cv.value;
      ++count_eta[eta];
    }
    bool counts_ok = count_eta[0] == 1;
    for (long long k = 1; k <= n_max; ++k)
      if (count_eta[k] != (b - 1) * ipow(Int(b), k - 1).convert_to<long long>()) counts_ok = false;
    rep.check("horocycle_counts[" + tname + "]", counts_ok,
              "points at confluence height k number (b-1) b^(k-1)");
    rep.check("horocycle_values_certified[" + tname + "]", all_certified, "");
    bool sums_ok = true;
    Rat S = by_eta[0];
    for (long long nidx = 1; nidx <= n_max; ++nidx) {
      S += by_eta[nidx];
      const Rat formula = Rat(1) + Rat(Int(nidx) * (b - 1), Int(b));
      if (S != formula) sums_ok = false;
      rep.observations.push_back(Observation::of("horocycle_partial_sum[" + tname + "]",
                                                 scen_detail::key_of("n", nidx), S));
    }
    rep.check("horocycle_partial_sums[" + tname + "]", sums_ok,
              "S_n = 1 + n(b-1)/b exactly for n <= " + std::to_string(n_max));
  }
  return rep;
}

// ---------- scenario: lemma41 ----------
// Covering inequality for families of pairwise-incomparable triangles: exact
// overlap constants, the r-th power inequality on derived and random
// families, and the geometric overlap bound.
inline ScenarioReport scenario_lemma41(std::uint64_t seed = 20260814) {
  ScenarioReport rep;
  rep.id = "lemma41";
  rep.parameters["seed"] = seed;
  rep.parameters["r_grid"] = {1, 2, 3};

  // Exact overlap constants from the recurrence.
  const Rat a1 = overlap_constant(1), a2 = overlap_constant(2), a3 = overlap_constant(3);
  rep.check("overlap_constants", a1 == Rat(8) && a2 == Rat(24) && a3 == Rat(104),
            "A_1=" + rat_to_string(a1) + " A_2=" + rat_to_string(a2) + " A_3=" + rat_to_string(a3));
  const double a2r = overlap_constant_real(2.0);
  rep.check("overlap_constant_real_consistency", std::abs(a2r - 24.0) <= 1e-9 * 24.0,
            "real-exponent evaluation at r=2 gives " + std::to_string(a2r));
  for (int r = 1; r <= 3; ++r)
    rep.observations.push_back(
        Observation::of("overlap_constant", scen_detail::key_of("r", r), overlap_constant(r)));

  // Worked overlap profile: two unit triangles sharing one vertex.
  {
    TreeWindow w(homogeneous_tree(2), -3, 3);
    const VertexAddress o{0, {}};
    TriangleFamily fam;
    fam.members.push_back({o, 1});
    fam.members.push_back({predecessor(o, 1), 1});
    OverlapProfile prof = overlap_profile(w, fam);
    rep.check("worked_overlap_profile",
              prof.g_size == 5 && prof.count_eq.at(1) == 4 && prof.count_eq.at(2) == 1 &&
                  prof.geometric_bound,
              "|G|=5, multiplicity-1 set 4, multiplicity-2 set 1");
    CfReport cf = check_cordoba_fefferman(w, fam, 2);
    rep.check("worked_covering_r2", cf.pass && cf.lhs_pow_r == Rat(8) && cf.rhs_pow_r == Rat(2880),
              "lhs^2=" + rat_to_string(cf.lhs_pow_r) + " rhs^2=" + rat_to_string(cf.rhs_pow_r));
  }

  Rng rng(seed);
  for (int b : {2, 3}) {
    const std::string tname = "Tb:" + std::to_string(b);
    TreeWindow w(homogeneous_tree(b), b == 2 ? -5 : -4, b == 2 ? 5 : 4);

    // Families derived from level-set decompositions.
    std::vector<TriangleFamily> fams;
    const VertexAddress o{0, {}};
    fams.push_back(
        decompose_maximal(w, SparseFunction::delta(o), Rat(1, 10), OperatorKind::U).family());
    fams.push_back(
        decompose_maximal(w, SparseFunction::delta(o), Rat(Int(1), Int(b * b * b)), OperatorKind::U)
            .family());
    for (int t = 0; t < 5; ++t) {
      SparseFunction f = random_sparse_function(w, rng, 3, true, -2, 1);
      if (f.empty()) continue;
      auto d = decompose_maximal(w, f, f.l1() / 8, OperatorKind::U);
      if (!d.empty()) fams.push_back(d.family());
    }
    const std::size_t derived = fams.size();
    for (int t = 0; t < 250; ++t) fams.push_back(random_maximal_family(w, rng, 10, 3));

    long long cf_viol = 0, cfr_viol = 0, omega_viol = 0, checked = 0;
    for (const auto& fam : fams) {
      if (fam.members.empty()) continue;
      ++checked;
      for (int r = 1; r <= 3; ++r)
        if (!check_cordoba_fefferman(w, fam, r).pass) ++cf_viol;
      if (!check_cordoba_fefferman_real(w, fam, 1.5).pass) ++cfr_viol;
      if (!overlap_profile(w, fam).geometric_bound) ++omega_viol;
    }
    rep.check("covering_inequality[" + tname + "]", cf_viol == 0,
              std::to_string(checked) + " families (" + std::to_string(derived) +
                  " decomposition-derived), r in {1,2,3}, " + std::to_string(cf_viol) +
                  " violations");
    rep.check("covering_inequality_real[" + tname + "]", cfr_viol == 0,
              "r=1.5 with tolerance 1e-9, " + std::to_string(cfr_viol) + " violations");
    rep.check("overlap_geometric_bound[" + tname + "]", omega_viol == 0,
              "2^k |{omega >= k}| <= 4 |G|, " + std::to_string(omega_viol) + " violations");
  }
  return rep;
}

// ---------- scenario: thm43 ----------
// Level sets of the uncentred triangular operator for a point mass: exact
// sizes, the lower bound that defeats weak (1,1), the weak (2,2) bound, and
// the closed form via the critical height.
inline ScenarioReport scenario_thm43(std::uint64_t seed = 20260814) {
  ScenarioReport rep;
  rep.id = "thm43";
  rep.parameters["seed"] = seed;
  rep.parameters["alpha_grids"] = {"(b+1)^-m", "b^-m"};

  Rng rng(seed);
  for (int b : {2, 3}) {
    const std::string tname = "Tb:" + std::to_string(b);
    const ValenceSpec spec = homogeneous_tree(b);
    const VertexAddress o{0, {}};
    const SparseFunction del = SparseFunction::delta(o);

    auto level_set_of_delta = [&](const Rat& alpha, Int& size_out, long long& h_alpha,
                                  bool& bounds_ok, bool& closed_ok) {
      TreeWindow w = scen_detail::auto_window(spec, del, alpha, OperatorKind::U);
      DecompositionReport d = decompose_maximal(w, del, alpha, OperatorKind::U);
      size_out = Int(d.level_set_size);
      // Critical height: largest radius whose triangle volume stays under
      // 1/alpha (the point mass budget).
      h_alpha = -1;
      while (Rat(scen_detail::hom_triangle_volume(b, h_alpha + 1)) < 1 / alpha) ++h_alpha;
      bounds_ok = d.dal_basso_bounds;
      for (const auto& t : d.triangles) {
        if (!(Rat(t.volume) < 1 / alpha)) bounds_ok = false;
        if (!(Rat(t.volume * (b + 1)) >= 1 / alpha)) bounds_ok = false;
      }
      closed_ok = h_alpha < 0
                      ? d.level_set_size == 0
                      : size_out == scen_detail::hom_triangle_volume(b, h_alpha) +
                                        Int(h_alpha) * ipow(Int(b), h_alpha);
    };

    // Grid A: alpha = (b+1)^-m. Strict monotonicity of alpha |E| fails on
    // this grid (the critical height jumps unevenly), so the divergence
    // trend is the claim checked here; the refined grid below is monotone.
    const int m_cap_a = (b == 2) ? 6 : 5;
    std::vector<Rat> quotient_a;
    bool all_bounds = true, all_closed = true, lower_ok = true, defining_ok = true;
    for (int m = 1; m <= m_cap_a; ++m) {
      const Rat alpha = Rat(Int(1), ipow(Int(b + 1), m));
      Int size;
      long long h_alpha;
      bool bounds_ok, closed_ok;
      level_set_of_delta(alpha, size, h_alpha, bounds_ok, closed_ok);
      all_bounds = all_bounds && bounds_ok;
      all_closed = all_closed && closed_ok;
      quotient_a.push_back(alpha * Rat(size));
      rep.observations.push_back(Observation::of("level_set_size[" + tname + ",grid=(b+1)^-m]",
                                                 scen_detail::key_of("m", m), Rat(size)));
      rep.observations.push_back(Observation::of("weak11_quotient[" + tname + ",grid=(b+1)^-m]",
                                                 scen_detail::key_of("m", m), alpha * Rat(size)));
      // Lower bound (3 b alpha)^-1 log_b((3 b alpha)^-1) for alpha < 1/(3b).
      if (alpha < Rat(1, 3 * b)) {
        const double inv = to_double(Rat(1) / (3 * b * alpha));
        const double bound = inv * std::log(inv) / std::log(static_cast<double>(b));
        if (static_cast<double>(size.convert_to<double>()) < bound - 1e-9) lower_ok = false;
      }
      // Defining property of the critical height: b^h_alpha >= 1/(3 b alpha).
      if (h_alpha >= 0 && Rat(ipow(Int(b), h_alpha)) * 3 * b * alpha < 1) defining_ok = false;
    }
    rep.check("dal_basso_size_bounds[" + tname + "]", all_bounds,
              "every maximal triangle has 1/((b+1)alpha) <= |T| < 1/alpha");
    rep.check("closed_form_sizes[" + tname + "]", all_closed,
              "|E| = |T_h| + h b^h at the critical height h");
    rep.check("log_lower_bound[" + tname + "]", lower_ok,
              "|E| >= (3 b alpha)^-1 log_b (3 b alpha)^-1 for alpha < 1/(3b)");
    rep.check("critical_height_defining[" + tname + "]", defining_ok,
              "b^h_alpha >= 1/(3 b alpha)");
    rep.check("weak11_quotient_trend[" + tname + "]", scen_detail::trend_4x(quotient_a),
              "alpha |E| grows at least 4x across the (b+1)^-m grid");

    // Grid B: alpha = b^-m is aligned with the tree's own growth, and there
    // alpha |E| increases strictly.
    std::vector<Rat> quotient_b;
    for (int m = 1; m <= 6; ++m) {
      const Rat alpha = Rat(Int(1), ipow(Int(b), m));
      Int size;
      long long h_alpha;
      bool bounds_ok, closed_ok;
      level_set_of_delta(alpha, size, h_alpha, bounds_ok, closed_ok);
      quotient_b.push_back(alpha * Rat(size));
      rep.observations.push_back(Observation::of("weak11_quotient[" + tname + ",grid=b^-m]",
                                                 scen_detail::key_of("m", m), alpha * Rat(size)));
    }
    rep.check("weak11_quotient_monotone[" + tname + "]",
              scen_detail::strictly_increasing(quotient_b),
              "alpha |E| strictly increasing along alpha = b^-m");

    // Worked sizes for b=2.
    if (b == 2) {
      Int s10, s100;
      long long h10, h100;
      bool x1, x2, x3, x4;
      level_set_of_delta(Rat(1, 10), s10, h10, x1, x2);
      level_set_of_delta(Rat(1, 100), s100, h100, x3, x4);
      rep.check("worked_level_sets",
                s10 == 15 && h10 == 2 && s100 == 223 && h100 == 5 && x1 && x2 && x3 && x4,
                "alpha=1/10: |E|=15 (h=2); alpha=1/100: |E|=223 (h=5)");
    }

    // Weak (2,2): |E| <= (A_2 ||f||_2 / alpha)^2 over test functions.
    std::vector<std::pair<std::string, SparseFunction>> fs;
    fs.emplace_back("delta", del);
    {
      TreeWindow sample(spec, -2, 2);
      std::vector<FunctionEntry> entries;
      for (TreeWindow::Id id : sample.shell_members(sample.id_of_or_fail(o), 2))
        entries.push_back({sample.address_of(id), Rat(1)});
      fs.emplace_back("shell2", SparseFunction(std::move(entries)));
      fs.emplace_back("rand", random_sparse_function(sample, rng, 3, true, -1, 0));
    }
    long long weak2_viol = 0, weak2_pairs = 0;
    for (const auto& [fname, f] : fs) {
      if (f.empty()) continue;
      int m_cap = 6;
      if (fname == "shell2") m_cap = (b == 2) ? 4 : 3;
      if (fname == "rand") m_cap = (b == 2) ? 3 : 2;
      for (int m = 1; m <= m_cap; ++m) {
        const Rat alpha = Rat(Int(1), ipow(Int(b + 1), m));
        TreeWindow w = scen_detail::auto_window(spec, f, alpha, OperatorKind::U);
        DecompositionReport d = decompose_maximal(w, f, alpha, OperatorKind::U);
        ++weak2_pairs;
        if (Rat(Int(d.level_set_size)) > Rat(576) * f.lp_pow(2) / (alpha * alpha)) ++weak2_viol;
      }
    }
    rep.check("weak22_bound[" + tname + "]", weak2_viol == 0,
              std::to_string(weak2_pairs) + " (f,alpha) pairs, constant 24^2, " +
                  std::to_string(weak2_viol) + " violations");
  }
  return rep;
}

// ---------- scenario: llogl ----------
// Exploratory: how level-set mass for scaled point masses compares with an
// L log L-shaped statistic. Reports the statistic over the grid; asserts only
// the exact scaling covariance and the growth that refutes an alpha-only
// variant of the bound.
inline ScenarioReport scenario_llogl(std::uint64_t seed = 20260814) {
  ScenarioReport rep;
  rep.id = "llogl";
  rep.exploratory = true;
  rep.parameters["seed"] = seed;
  rep.parameters["alpha"] = "1/10";

  for (int b : {2, 3}) {
    const std::string tname = "Tb:" + std::to_string(b);
    const ValenceSpec spec = homogeneous_tree(b);
    const VertexAddress o{0, {}};
    const Rat alpha(1, 10);
    std::vector<long long> ns;
    for (long long nv = 1; nv <= (b == 2 ? 16 : 27); nv *= b) ns.push_back(nv);

    std::vector<Rat> sizes;
    double sup_stat = 0;
    for (long long nv : ns) {
      const SparseFunction f = SparseFunction::delta(o, Rat(Int(nv)));
      TreeWindow w = scen_detail::auto_window(spec, f, alpha, OperatorKind::U);
      DecompositionReport d = decompose_maximal(w, f, alpha, OperatorKind::U);
      sizes.push_back(Rat(Int(d.level_set_size)));
      const double l1 = to_double(f.l1());
      const double log_arg = 1.0 + to_double(f.l1() / alpha);
      const double stat = to_double(Rat(Int(d.level_set_size)) * alpha) /
                          (l1 * (std::log(log_arg) / std::log(static_cast<double>(b))));
      sup_stat = std::max(sup_stat, stat);
      rep.observations.push_back(Observation::approx("llogl_statistic[" + tname + "]",
                                                     scen_detail::key_of("n", nv), stat));
      rep.observations.push_back(Observation::of("level_set_size[" + tname + "]",
                                                 scen_detail::key_of("n", nv),
                                                 Rat(Int(d.level_set_size))));
    }
    rep.observations.push_back(
        Observation::approx("llogl_statistic_sup[" + tname + "]", "grid", sup_stat));
    rep.check("alpha_only_bound_refuted[" + tname + "]",
              scen_detail::strictly_increasing(sizes) && scen_detail::trend_4x(sizes),
              "|E| for n x point mass at fixed alpha grows without bound in n");

    // Exact scaling covariance: scaling f by n equals scaling alpha by 1/n.
    Rng rng(seed + b);
    bool covariant = true;
    std::vector<std::pair<std::string, SparseFunction>> fs;
    fs.emplace_back("delta", SparseFunction::delta(o));
    {
      TreeWindow sample(spec, -1, 1);
      fs.emplace_back("rand", random_sparse_function(sample, rng, 3, true, -1, 0));
    }
    for (const auto& [fname, f] : fs) {
      if (f.empty()) continue;
      for (long long nv : {2, 4}) {
        const SparseFunction fn = f.scaled(Rat(Int(nv)));
        TreeWindow w = scen_detail::auto_window(spec, fn, alpha, OperatorKind::U);
        DecompositionReport dn = decompose_maximal(w, fn, alpha, OperatorKind::U);
        DecompositionReport dd = decompose_maximal(w, f, alpha / Rat(Int(nv)), OperatorKind::U);
        if (dn.family().members != dd.family().members ||
            dn.level_set_size != dd.level_set_size)
          covariant = false;
      }
    }
    rep.check("scaling_covariance[" + tname + "]", covariant,
              "level sets of n f at alpha equal level sets of f at alpha/n");
  }
  return rep;
}

// ---------- scenario: prop52 ----------
// The confluence kernel applied to a bottom-shell indicator: exact values,
// linear growth in the shell depth, and the induced p-norm lower bound.
inline ScenarioReport scenario_prop52() {
  ScenarioReport rep;
  rep.id = "prop52";
  rep.parameters["p_grid"] = {"1", "3/2", "2", "3"};

  for (int b : {2, 3}) {
    const std::string tname = "Tb:" + std::to_string(b);
    const ValenceSpec spec = homogeneous_tree(b);
    const VertexAddress o{0, {}};
    const long long n_cap = (b == 2) ? 8 : 6;
    const Rat cb(Int(b - 1), Int(2 * b));

    std::vector<Rat> values;
    bool formula_ok = true, constancy_ok = true, growth_ok = true, certified_ok = true;
    for (long long nv = 1; nv <= n_cap; ++nv) {
      TreeWindow w(spec, 0, nv);
      const VertexAddress apex = predecessor(o, nv);
      std::vector<TreeWindow::Id> shell = w.shell_members(w.id_of_or_fail(apex), nv);
      std::vector<FunctionEntry> entries;
      entries.reserve(shell.size());
      for (TreeWindow::Id id : shell) entries.push_back({w.address_of(id), Rat(1)});
      std::sort(entries.begin(), entries.end(),
                [](const FunctionEntry& x, const FunctionEntry& y) { return x.addr < y.addr; });
      const SparseFunction ind{std::move(entries)};

      // Exact kernel value over the infinite tree (the confluence triangle
      // of two height-0 vertices is determined by their confluence height):
      // 1 + sum_j (b-1)^2 b^(j-1) / (b^(j+1) - 1).
      Rat formula = 1;
      for (long long j = 1; j <= nv; ++j)
        formula += Rat(Int(b - 1) * (b - 1) * ipow(Int(b), j - 1), ipow(Int(b), j + 1) - 1);

      // Evaluate at every shell point for small shells, on a sample for the
      // larger ones (the value is constant across the shell either way).
      std::vector<TreeWindow::Id> at = shell;
      if (shell.size() > 100) {
        at.clear();
        for (std::size_t i = 0; i < shell.size(); i += shell.size() / 7) at.push_back(shell[i]);
      }
      std::optional<Rat> common;
      for (TreeWindow::Id id : at) {
        CertifiedValue cv = eval_point(w, OperatorKind::K, ind, id);
        if (!cv.certified) certified_ok = false;
        if (!common) common = cv.value;
        if (cv.value != *common) constancy_ok = false;
      }
      if (!common || *common != formula) formula_ok = false;
      if (common && !(*common >= cb * Rat(Int(nv)))) growth_ok = false;
      if (common) values.push_back(*common);
      rep.observations.push_back(Observation::of("kernel_value[" + tname + "]",
                                                 scen_detail::key_of("n", nv),
                                                 common.value_or(Rat(0))));
    }
    rep.check("kernel_value_formula[" + tname + "]", formula_ok,
              "evaluated kernel equals 1 + sum_j (b-1)^2 b^(j-1)/(b^(j+1)-1)");
    rep.check("kernel_value_constant[" + tname + "]", constancy_ok,
              "same value at every point of the bottom shell");
    rep.check("kernel_values_certified[" + tname + "]", certified_ok, "");
    rep.check("kernel_linear_growth[" + tname + "]", growth_ok,
              "value >= n (b-1)/(2b) for every n");
    rep.check("kernel_growth_monotone[" + tname + "]", scen_detail::strictly_increasing(values),
              "");
    if (b == 2)
      rep.check("worked_kernel_values", values.size() >= 2 && values[0] == Rat(4, 3) &&
                                            values[1] == Rat(34, 21),
                "n=1 gives 4/3, n=2 gives 34/21");

    // p-norm ratio restricted to the shell: the value is constant, so the
    // ratio is value^p, bounded below by (n (b-1)/(2b))^p. Exact via p-th
    // powers; p = 3/2 is compared through squares.
    bool pnorm_ok = values.size() == static_cast<std::size_t>(n_cap);
    for (long long nv = 1; pnorm_ok && nv <= n_cap; ++nv) {
      const Rat v = values[static_cast<std::size_t>(nv - 1)];
      const Rat lower = cb * Rat(Int(nv));
      for (int num : {2, 3, 4, 6}) {  // p = num/2: 1, 3/2, 2, 3
        if (!(rpow(v, num) >= rpow(lower, num))) pnorm_ok = false;
      }
    }
    rep.check("pnorm_ratio_lower[" + tname + "]", pnorm_ok,
              "restricted ||.||_p^p ratio >= (n (b-1)/(2b))^p for p in {1,3/2,2,3}");
  }
  return rep;
}

// ---------- scenario: prop53 ----------
// Modified-triangle operators are not bounded on l^p: per-point certified
// values on deep shells, the divergent series they sum to, the two-band tree
// norm formula, and the centred/uncentred contrast at the integrability
// threshold. Positive-direction ratios are recorded as informational trends.
inline ScenarioReport scenario_prop53() {
  ScenarioReport rep;
  rep.id = "prop53";
  rep.parameters["directions"] = {"lower bounds exact", "upper trends informational"};

  // Part (i): centred modified operator on a point mass. Points j levels
  // below the mass see value (b-1)/(b^(j+1)+b-2); the crude volume bound
  // gives the series term b^j/(2 b^j + 1).
  for (int b : {2, 3}) {
    const std::string tname = "Tb:" + std::to_string(b);
    const ValenceSpec spec = homogeneous_tree(b);
    const VertexAddress o{0, {}};

    bool pointwise_ok = true, certified_ok = true, dominates_ok = true;
    const long long j_cap = (b == 2) ? 6 : 4;
    for (long long j = 1; j <= j_cap; ++j) {
      TreeWindow w(spec, -2 * j, 0);
      const SparseFunction del = SparseFunction::delta(o);
      std::vector<TreeWindow::Id> shell = w.shell_members(w.id_of_or_fail(o), j);
      std::vector<TreeWindow::Id> at = shell;
      if (shell.size() > 32) {
        at.clear();
        for (std::size_t i = 0; i < shell.size(); i += shell.size() / 7) at.push_back(shell[i]);
      }
      const Rat expect(Int(b - 1), ipow(Int(b), j + 1) + (b - 2));
      const Rat crude(Int(1), 2 * ipow(Int(b), j) + 1);
      for (TreeWindow::Id id : at) {
        CertifiedValue cv = eval_Tmod(w, del, id);
        if (cv.value != expect) pointwise_ok = false;
        if (!cv.certified) certified_ok = false;
        if (!(cv.value >= crude)) dominates_ok = false;
      }
    }
    rep.check("centred_pointwise[" + tname + "]", pointwise_ok,
              "value at depth j is (b-1)/(b^(j+1)+b-2)");
    rep.check("centred_pointwise_certified[" + tname + "]", certified_ok, "");
    rep.check("centred_dominates_series_term[" + tname + "]", dominates_ok,
              "per-point value >= 1/(2 b^j + 1)");

    // The series sum_j b^j/(2 b^j + 1): each shell contributes at least one
    // term, so partial sums bound the l1 norm from below and diverge.
    std::vector<Rat> partial;
    Rat S = 0;
    long long cross2 = -1, cross4 = -1;
    for (long long j = 0; j <= 11; ++j) {
      S += Rat(ipow(Int(b), j), 2 * ipow(Int(b), j) + 1);
      partial.push_back(S);
      if (cross2 < 0 && S > 2) cross2 = j + 1;  // number of terms
      if (cross4 < 0 && S > 4) cross4 = j + 1;
      rep.observations.push_back(
          Observation::of("centred_series_partial[" + tname + "]", scen_detail::key_of("J", j), S));
    }
    rep.check("centred_series_linear[" + tname + "]",
              [&] {
                // First term is 1/3; every later term is at least b/(2b+1).
                for (std::size_t i = 0; i < partial.size(); ++i)
                  if (!(partial[i] >= Rat(1, 3) + Rat(Int(i) * b, Int(2 * b + 1)))) return false;
                return true;
              }(),
              "partial sums >= 1/3 + J b/(2b+1)");
    rep.check("centred_series_divergence_trend[" + tname + "]", scen_detail::trend_4x(partial), "");
    if (b == 2)
      rep.check("worked_series_crossings", cross2 == 5 && cross4 == 9,
                "partial sums pass 2 after 5 terms and 4 after 9 terms");
  }

  // Part (ii): two-band trees. A point mass at height n, evaluated on the
  // shell below it: every point sees exactly 1/2^(n+1); counting the shell
  // gives the norm lower bound b^n (2 a^n + 1)^-p, unbounded when p < log_a b.
  for (int bb : {3, 4}) {
    const std::string tname = "Sab:2," + std::to_string(bb);
    const ValenceSpec spec = two_band_tree(2, bb);
    bool pointwise_ok = true, certified_ok = true, counts_ok = true;
    const long long n_cap = 5;
    for (long long nv = 1; nv <= n_cap; ++nv) {
      TreeWindow w(spec, -nv, nv);
      const VertexAddress vn = predecessor(VertexAddress{0, {}}, nv);
      const SparseFunction del = SparseFunction::delta(vn);
      std::vector<TreeWindow::Id> shell = w.shell_members(w.id_of_or_fail(vn), nv);
      if (Int(static_cast<long long>(shell.size())) != ipow(Int(bb), nv)) counts_ok = false;
      std::vector<TreeWindow::Id> at = shell;
      if (shell.size() > 32) {
        at.clear();
        for (std::size_t i = 0; i < shell.size(); i += shell.size() / 7) at.push_back(shell[i]);
      }
      const Rat expect(Int(1), pow2(nv + 1));
      for (TreeWindow::Id id : at) {
        CertifiedValue cv = eval_Tmod(w, del, id);
        if (cv.value != expect) pointwise_ok = false;
        if (!cv.certified) certified_ok = false;
      }
    }
    rep.check("twoband_pointwise[" + tname + "]", pointwise_ok,
              "value on the depth-n shell is exactly 1/2^(n+1)");
    rep.check("twoband_pointwise_certified[" + tname + "]", certified_ok, "");
    rep.check("twoband_shell_counts[" + tname + "]", counts_ok, "depth-n shell has b^n points");

    // Norm formula values b^n (2 a^n + 1)^-p (a = 2) and their growth for
    // p below log_a b. Exact for integer p; p = 3/2 compared through squares.
    const double tau = std::log(static_cast<double>(bb)) / std::log(2.0);
    for (const auto& [pname, pnum, pden] :
         std::vector<std::tuple<std::string, int, int>>{{"1", 1, 1}, {"3/2", 3, 2}, {"2", 2, 1},
                                                        {"3", 3, 1}}) {
      const double p = static_cast<double>(pnum) / pden;
      const long long n_grid = (p < tau - 1e-9) ? 30 : 8;
      std::vector<Rat> powered;  // formula^pden, exact
      for (long long nv = 1; nv <= n_grid; ++nv) {
        const Rat v = Rat(ipow(Int(bb), nv * pden), rpow(Rat(pow2(nv + 1) + 1), pnum));
        powered.push_back(v);
        if (nv <= 8)
          rep.observations.push_back(Observation::approx(
              "twoband_norm_formula[" + tname + ",p=" + pname + "]", scen_detail::key_of("n", nv),
              std::pow(to_double(v), 1.0 / pden)));
      }
      if (p < tau - 1e-9) {
        const bool diverges = scen_detail::strictly_increasing(powered) &&
                              powered.back() >= rpow(Rat(4), pden) * powered.front();
        rep.check("twoband_divergence[" + tname + ",p=" + pname + "]", diverges,
                  "norm formula grows 4x across the grid (checked via p-th powers)");
      }
    }
    // Exact restricted-norm domination at integer p: shell count times the
    // exact per-point value dominates the formula.
    bool dominate_ok = true;
    for (long long nv = 1; nv <= 8; ++nv)
      for (int pint : {1, 2, 3}) {
        const Rat restricted = Rat(ipow(Int(bb), nv)) * rpow(Rat(Int(1), pow2(nv + 1)), pint);
        const Rat formula = Rat(ipow(Int(bb), nv), rpow(Rat(pow2(nv + 1) + 1), pint));
        if (!(restricted >= formula)) dominate_ok = false;
      }
    rep.check("twoband_restricted_norm[" + tname + "]", dominate_ok,
              "b^n 2^-(n+1)p >= b^n (2^(n+1)+1)^-p exactly");
  }

  // Part (iii): uncentred modified operator on the homogeneous tree. Points
  // at depth 2j reached through a depth-j detour see the same per-point value
  // as part (i); the p-th power series b^(2j) (2 b^j + 1)^-p separates p = 2
  // (divergent, terms increase to 1/4) from p = 3 (convergent, geometric
  // tail).
  for (int b : {2, 3}) {
    const std::string tname = "Tb:" + std::to_string(b);
    const ValenceSpec spec = homogeneous_tree(b);
    const VertexAddress o{0, {}};

    bool pointwise_ok = true, certified_ok = true;
    const long long j_cap = (b == 2) ? 5 : 3;
    for (long long j = 1; j <= j_cap; ++j) {
      TreeWindow w(spec, -2 * j, 0);
      const SparseFunction del = SparseFunction::delta(o);
      // One detour vertex v at depth j under the mass, then its depth-j shell.
      std::vector<TreeWindow::Id> down = w.shell_members(w.id_of_or_fail(o), j);
      const TreeWindow::Id v = down.front();
      std::vector<TreeWindow::Id> pts = w.shell_members(v, j);
      std::vector<TreeWindow::Id> at = pts;
      if (pts.size() > 8) at.assign(pts.begin(), pts.begin() + 8);
      const Rat expect(Int(b - 1), ipow(Int(b), j + 1) + (b - 2));
      for (TreeWindow::Id id : at) {
        CertifiedValue cv = eval_Umod(w, del, id);
        if (cv.value != expect) pointwise_ok = false;
        if (!cv.certified) certified_ok = false;
      }
    }
    rep.check("uncentred_pointwise[" + tname + "]", pointwise_ok,
              "value at a depth-2j point through a depth-j detour is (b-1)/(b^(j+1)+b-2)");
    rep.check("uncentred_pointwise_certified[" + tname + "]", certified_ok, "");

    // Series terms u_j(p) = b^(2j) (2 b^j + 1)^-p.
    auto term = [&](long long j, int p) {
      return Rat(ipow(Int(b), 2 * j), rpow(Rat(2 * ipow(Int(b), j) + 1), p));
    };
    std::vector<Rat> p2_terms, p2_gap;
    for (long long j = 0; j <= 14; ++j) {
      p2_terms.push_back(term(j, 2));
      p2_gap.push_back(Rat(1, 4) - p2_terms.back());
      if (j <= 8)
        rep.observations.push_back(Observation::of("uncentred_terms[" + tname + ",p=2]",
                                                   scen_detail::key_of("j", j), p2_terms.back()));
    }
    bool gap_decreasing = true;
    for (std::size_t i = 1; i < p2_gap.size(); ++i)
      if (!(p2_gap[i] < p2_gap[i - 1])) gap_decreasing = false;
    const bool p2_ok = scen_detail::strictly_increasing(p2_terms) && gap_decreasing &&
                       std::all_of(p2_terms.begin(), p2_terms.end(),
                                   [](const Rat& t) { return t < Rat(1, 4); });
    rep.check("uncentred_p2_terms[" + tname + "]", p2_ok,
              "p=2 terms increase strictly toward 1/4 from below");
    // Divergence trend for p <= 2 partial sums.
    for (int p : {1, 2}) {
      std::vector<Rat> sums;
      Rat S = 0;
      for (long long j = 0; j <= 14; ++j) {
        S += term(j, p);
        sums.push_back(S);
      }
      rep.check("uncentred_divergence[" + tname + ",p=" + std::to_string(p) + "]",
                scen_detail::strictly_increasing(sums) && scen_detail::trend_4x(sums), "");
    }
    // Convergence for p = 3: every increment past J fits under the exact
    // geometric tail b^-J / (8 (b - 1)).
    bool cauchy_ok = true;
    {
      std::vector<Rat> sums;
      Rat S = 0;
      for (long long j = 0; j <= 14; ++j) {
        S += term(j, 3);
        sums.push_back(S);
      }
      for (std::size_t J = 0; J + 1 < sums.size(); ++J) {
        const Rat tail = Rat(Int(1), 8 * ipow(Int(b), static_cast<long long>(J)) * (b - 1));
        if (!(sums.back() - sums[J] <= tail)) cauchy_ok = false;
      }
    }
    rep.check("uncentred_p3_cauchy[" + tname + "]", cauchy_ok,
              "p=3 partial sums are Cauchy within the exact geometric tail");
  }

  // Positive directions: in-window p-norm ratios across growing windows,
  // recorded as informational trends only.
  {
    const ValenceSpec spec = homogeneous_tree(2);
    const VertexAddress o{0, {}};
    for (long long half : {4, 5, 6}) {
      TreeWindow w(spec, -half, half);
      const SparseFunction del = SparseFunction::delta(o);
      Rat sum = 0;
      for (TreeWindow::Id id = 0; id < w.n(); ++id) {
        const Rat v = eval_Tmod(w, del, id).value;
        sum += v * v;
      }
      rep.observations.push_back(Observation::approx("centred_window_ratio[Tb:2,p=2]",
                                                     scen_detail::key_of("half", half),
                                                     std::sqrt(to_double(sum)),
                                                     "in-window ratio, informational"));
    }
    rep.check("positive_direction_recorded", true,
              "upper-direction ratios recorded as trends only", /*hard=*/false);
  }
  return rep;
}

// ---------- scenario: remark52 ----------
// A single high-valence vertex already defeats modified-triangle p-norm
// bounds: each successor of the spike sees value exactly 1/4, so the norm
// grows like (number of successors)^(1/p).
inline ScenarioReport scenario_remark52() {
  ScenarioReport rep;
  rep.id = "remark52";
  rep.parameters["j_grid"] = "1..8";

  std::vector<Rat> ratio2;
  std::vector<Rat> norm_pow_p1, norm_pow_p2;
  bool value_ok = true, certified_ok = true, succ_ok = true, umod_ok = true;
  for (int j = 1; j <= 8; ++j) {
    const ValenceSpec spec = spiked_tree(j);
    TreeWindow w(spec, -3, 2);
    const VertexAddress x0{0, {}};
    const TreeWindow::Id c = w.id_of_or_fail(x0);
    if (w.child_count(c) != j + 1) succ_ok = false;
    const SparseFunction del = SparseFunction::delta(x0);
    for (std::int32_t i = 0; i < w.child_count(c); ++i) {
      const TreeWindow::Id y = w.child_at(c, i);
      CertifiedValue cv = eval_Tmod(w, del, y);
      if (cv.value != Rat(1, 4)) value_ok = false;
      if (!cv.certified) certified_ok = false;
      if (!(eval_Umod(w, del, y).value >= cv.value)) umod_ok = false;
    }
    // Restricted p-norm^p over the successors: (j+1)/4^p.
    norm_pow_p1.push_back(Rat(Int(j + 1), 4));
    norm_pow_p2.push_back(Rat(Int(j + 1), 16));
    rep.observations.push_back(Observation::approx(
        "spike_norm[p=1]", scen_detail::key_of("j", j), to_double(Rat(Int(j + 1), 4))));
    rep.observations.push_back(Observation::approx(
        "spike_norm[p=2]", scen_detail::key_of("j", j),
        std::sqrt(static_cast<double>(j + 1)) / 4.0));

    CfFailureReport cf = check_cf_failure_modified(w, x0, 2);
    ratio2.push_back(cf.ratio_pow_r);
    rep.observations.push_back(
        Observation::of("spike_covering_ratio[r=2]", scen_detail::key_of("j", j), cf.ratio_pow_r));
  }
  rep.check("spike_successors", succ_ok, "the spiked vertex has j+1 successors");
  rep.check("spike_pointwise", value_ok, "each successor sees value exactly 1/4");
  rep.check("spike_pointwise_certified", certified_ok, "");
  rep.check("spike_uncentred_dominates", umod_ok, "uncentred value >= centred value");
  rep.check("spike_norm_monotone[p=1]", scen_detail::strictly_increasing(norm_pow_p1),
            "(j+1)/4 strictly increasing");
  rep.check("spike_norm_monotone[p=2]", scen_detail::strictly_increasing(norm_pow_p2),
            "(j+1)/16 strictly increasing (squared norms)");
  rep.check("spike_covering_ratio_monotone", scen_detail::strictly_increasing(ratio2),
            "r=2 covering ratio strictly increasing in j");
  rep.check("worked_covering_ratios",
            ratio2.front() == Rat(10, 7) && ratio2[5] == Rat(70, 22),
            "j=1 gives 10/7, j=6 gives 70/22");
  return rep;
}

// ---------- scenario: cffails ----------
// The covering inequality has no exponent-uniform analogue for modified
// triangles: around an s-successor vertex the r-th power ratio grows
// unboundedly in s for every r > 1 while staying bounded at r = 1.
inline ScenarioReport scenario_cffails() {
  ScenarioReport rep;
  rep.id = "cffails";
  rep.parameters["j_grid"] = "1..16";
  rep.parameters["r_grid"] = {1, 2, 3};

  std::vector<Rat> r1, r2, r3;
  for (int j = 1; j <= 16; ++j) {
    const ValenceSpec spec = spiked_tree(j);
    TreeWindow w(spec, -2, 1);
    const VertexAddress x0{0, {}};
    r1.push_back(check_cf_failure_modified(w, x0, 1).ratio_pow_r);
    r2.push_back(check_cf_failure_modified(w, x0, 2).ratio_pow_r);
    r3.push_back(check_cf_failure_modified(w, x0, 3).ratio_pow_r);
    if (j <= 8) {
      rep.observations.push_back(
          Observation::of("covering_ratio[r=2]", scen_detail::key_of("j", j), r2.back()));
      rep.observations.push_back(
          Observation::of("covering_ratio[r=3]", scen_detail::key_of("j", j), r3.back()));
    }
  }
  rep.check("bounded_at_r1",
            std::all_of(r1.begin(), r1.end(), [](const Rat& x) { return x < Rat(4, 3); }),
            "r=1 ratio stays below 4/3 for every j");
  rep.check("unbounded_at_r2",
            scen_detail::strictly_increasing(r2) && scen_detail::trend_4x(r2),
            "r=2 ratio strictly increasing, 4x across the grid");
  rep.check("unbounded_at_r3",
            scen_detail::strictly_increasing(r3) && scen_detail::trend_4x(r3),
            "r=3 ratio strictly increasing, 4x across the grid");

  for (int b : {2, 3}) {
    TreeWindow w(homogeneous_tree(b), -2, 1);
    CfFailureReport cf = check_cf_failure_modified(w, VertexAddress{0, {}}, 2);
    rep.observations.push_back(Observation::of("covering_ratio_homogeneous[r=2]",
                                               "b=" + std::to_string(b), cf.ratio_pow_r));
  }
  return rep;
}

// ---------- registry ----------

inline std::vector<std::string> scenario_ids() {
  return {"lemma21", "thm31", "thm32", "lemma41", "thm43",
          "llogl",   "prop52", "prop53", "remark52", "cffails"};
}

struct ScenarioOptions {
  std::uint64_t seed = 0;
  std::optional<ValenceSpec> tree;
  std::optional<std::pair<long long, long long>> window;
};

inline ScenarioReport run_scenario(const std::string& id, const ScenarioOptions& opt = {}) {
  if (id == "lemma21") return scenario_lemma21(opt.tree, opt.window);
  if (id == "thm31") return scenario_thm31(opt.seed, opt.tree, opt.window);
  if (id == "thm32") return scenario_thm32(opt.seed);
  if (id == "lemma41") return scenario_lemma41(opt.seed);
  if (id == "thm43") return scenario_thm43(opt.seed);
  if (id == "llogl") return scenario_llogl(opt.seed);
  if (id == "prop52") return scenario_prop52();
  if (id == "prop53") return scenario_prop53();
  if (id == "remark52") return scenario_remark52();
  if (id == "cffails") return scenario_cffails();
  fail(Errc::bad_argument, "unknown scenario id: " + id);
}

}  // namespace treemax
