// treemax: deterministic random generation for tests and experiments.
//
// A hand-rolled splitmix64 keeps byte streams identical across platforms and
// standard-library versions (std::mt19937 distributions are not portable).
// Generators here produce sparse functions with controlled support bands and
// pairwise-incomparable triangle families.
#pragma once

#include <cstdint>
#include <vector>

#include "treemax/function.hpp"
#include "treemax/levelset.hpp"
#include "treemax/window.hpp"

namespace treemax {

// ---------- generator ----------

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). Rejection keeps the distribution exact.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % n;
  }

  long long range(long long lo, long long hi) {  // inclusive
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

// ---------- random sparse functions ----------

// Random function with `points` distinct support vertices whose heights lie in
// [h_lo, h_hi] (clamped to the window). Values are small rationals; when
// `nonneg` is false, signs flip at random.
inline SparseFunction random_sparse_function(const TreeWindow& w, Rng& rng, int points,
                                             bool nonneg, long long h_lo, long long h_hi) {
  h_lo = std::max(h_lo, w.h_min());
  h_hi = std::min(h_hi, w.h_max());
  if (h_lo > h_hi) fail(Errc::bad_argument, "random_sparse_function: empty height band");
  // Levels are contiguous id blocks ordered by depth, so a height band is one
  // contiguous id block [first(h_hi), last(h_lo)].
  const auto top = w.horocycle_range(h_hi);
  const auto bottom = w.horocycle_range(h_lo);
  const std::int64_t lo_id = top.first;
  const std::int64_t hi_id = bottom.second;  // one past the end
  std::vector<FunctionEntry> entries;
  std::vector<TreeWindow::Id> used;
  for (int i = 0; i < points; ++i) {
    TreeWindow::Id id = 0;
    for (int tries = 0; tries < 64; ++tries) {
      id = static_cast<TreeWindow::Id>(
          lo_id + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi_id - lo_id))));
      if (std::find(used.begin(), used.end(), id) == used.end()) break;
    }
    if (std::find(used.begin(), used.end(), id) != used.end()) continue;
    used.push_back(id);
    Int num = Int(rng.range(1, 8));
    Int den = Int(rng.range(1, 4));
    if (!nonneg && rng.below(2) == 0) num = -num;
    entries.push_back({w.address_of(id), Rat(num, den)});
  }
  return SparseFunction(std::move(entries));
}

// ---------- random maximal families ----------

// Samples triangles and keeps each new one only if it is incomparable (neither
// contains the other) with everything kept so far. The result is a family in
// which no member contains another, fully inside the window.
inline TriangleFamily random_maximal_family(const TreeWindow& w, Rng& rng, int attempts,
                                            long long height_cap) {
  TriangleFamily fam;
  for (int i = 0; i < attempts; ++i) {
    const auto id = static_cast<TreeWindow::Id>(rng.below(static_cast<std::uint64_t>(w.n())));
    const VertexAddress v = w.address_of(id);
    const long long max_r = std::min(height_cap, v.height() - w.h_min());
    if (max_r < 0) continue;
    TriangleRef t{v, rng.range(0, max_r)};
    bool comparable = false;
    for (const auto& m : fam.members)
      if (triangle_subset(t, m) || triangle_subset(m, t)) {
        comparable = true;
        break;
      }
    if (!comparable) fam.members.push_back(t);
  }
  std::sort(fam.members.begin(), fam.members.end(), triangle_order);
  return fam;
}

}  // namespace treemax
