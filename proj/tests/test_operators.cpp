// treemax: operator evaluator tests — worked values, oracle agreement,
// pointwise dominations, witnesses, certificates.
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <functional>
#include <vector>

#include "oracles.hpp"
#include "treemax/function.hpp"
#include "treemax/operators.hpp"
#include "treemax/presets.hpp"
#include "treemax/random.hpp"
#include "treemax/valence.hpp"
#include "treemax/window.hpp"

using namespace treemax;

namespace {

const std::vector<OperatorKind> kAllOps = {
    OperatorKind::T,    OperatorKind::U,    OperatorKind::B,
    OperatorKind::Bu,   OperatorKind::Tmod, OperatorKind::Umod,
    OperatorKind::K,    OperatorKind::M,    OperatorKind::N};

VertexAddress addr(const std::string& s) { return parse_address_or_fail(s); }

// The average the witness names, recomputed from explicit member lists.
Rat witness_average(const TreeWindow& w, const SparseFunction& f, const CertifiedValue& cv) {
  REQUIRE(cv.witness.has_value());
  const Witness& wit = *cv.witness;
  const TreeWindow::Id v = w.id_of_or_fail(wit.vertex);
  switch (wit.kind) {
    case WitnessKind::triangle: {
      const auto mem = oracle::cone_of(w, v, wit.extent);
      return oracle::mass_abs(w, f, mem) / Rat(Int(mem.size()));
    }
    case WitnessKind::base: {
      const auto mem = oracle::shell_of(w, v, wit.extent);
      return oracle::mass_abs(w, f, mem) / Rat(Int(mem.size()));
    }
    case WitnessKind::mod_triangle: {
      const auto mem = oracle::cone_of(w, v, wit.extent);
      Rat m = oracle::mass_abs(w, f, mem);
      Int size(mem.size());
      if (wit.extent >= 1) {
        m += abs(f.at(predecessor(wit.vertex, wit.extent)));
        size += 1;
      }
      return m / Rat(size);
    }
    case WitnessKind::ball: {
      const auto mem = oracle::ball_of(w, v, wit.extent);
      return oracle::mass_abs(w, f, mem) / Rat(Int(mem.size()));
    }
  }
  return Rat(-1);
}

}  // namespace

TEST_CASE("worked point values on the two-homogeneous tree") {
  TreeWindow w(homogeneous_tree(2), -4, 4);
  const TreeWindow::Id o = w.id_of_or_fail(addr("0"));
  const TreeWindow::Id x1 = w.id_of_or_fail(addr("1"));

  // Two unit masses on the successors of o average to 2/3 over T_1(o).
  const SparseFunction two_children({{addr("0/1"), Rat(1)}, {addr("0/2"), Rat(1)}});
  CHECK(eval_T(w, two_children, o).value == Rat(2, 3));

  const SparseFunction del_o = SparseFunction::delta(addr("0"));
  // Triangle averages of a point mass decay like the volume: 1/7 at the
  // distance-4 vertices of the same horocycle.
  const TreeWindow::Id far0 = w.id_of_or_fail(addr("2/1.0"));
  CHECK(eval_U(w, del_o, far0).value == Rat(1, 7));
  CHECK(eval_U(w, del_o, o).value == Rat(1));
  CHECK(eval_T(w, del_o, x1).value == Rat(1, 3));

  // Base operator sees the mass only on the matching shell.
  const SparseFunction del_deep = SparseFunction::delta(addr("0/1.0"));
  CHECK(eval_B(w, del_deep, o).value == Rat(1, 4));
  CHECK(eval_B(w, del_deep, x1).value == Rat(1, 8));

  // Uncentred base operator of a point mass on the horocycle of the origin:
  // b^-eta, eta = confluence height.
  for (TreeWindow::Id id = w.horocycle_range(0).first; id < w.horocycle_range(0).second; ++id) {
    const long long eta = confluent(addr("0"), w.address_of(id)).eta();
    CHECK(eval_Bu(w, del_o, id).value == Rat(Int(1), pow2(eta)));
  }

  // Hardy-Littlewood values through |B_1| = 4 and |B_2| = 10.
  const SparseFunction del_x1 = SparseFunction::delta(addr("1"));
  CHECK(eval_M(w, del_x1, o).value == Rat(1, 4));
  CHECK(eval_M(w, del_o, w.id_of_or_fail(addr("2"))).value == Rat(1, 10));
  CHECK(eval_N(w, del_x1, o).value == Rat(1, 4));

  // Kernels.
  const TreeWindow::Id sib = w.id_of_or_fail(addr("1/1"));
  CHECK(kernel_kappa(w, o, sib) == Rat(1, 3));
  CHECK(kernel_kappa(w, o, o) == Rat(1));
  CHECK(kernel_tau(w, x1, o) == Rat(1, 3));
  CHECK(kernel_tau(w, o, x1) == Rat(0));
  CHECK(eval_K(w, del_o, sib) == Rat(1, 3));
}

TEST_CASE("modified-triangle values on the spiked tree") {
  TreeWindow w(spiked_tree(4), -3, 2);
  const VertexAddress o = addr("0");
  const SparseFunction del_o = SparseFunction::delta(o);
  // Every successor of the spike vertex sees mass 1 over |T_1| + 1 = 4.
  for (TreeWindow::Id c : oracle::shell_of(w, w.id_of_or_fail(o), 1)) {
    const CertifiedValue tm = eval_Tmod(w, del_o, c);
    CHECK(tm.value == Rat(1, 4));
    CHECK(tm.certified);
    CHECK(eval_Umod(w, del_o, c).value >= Rat(1, 4));
  }
}

TEST_CASE("evaluators agree with the brute-force oracles") {
  struct Case {
    ValenceSpec spec;
    long long lo, hi;
  };
  const std::vector<Case> cases = {{homogeneous_tree(2), -3, 2},
                                   {homogeneous_tree(3), -2, 2},
                                   {two_band_tree(2, 4), -2, 2},
                                   {spiked_tree(3), -2, 2}};
  Rng rng(20260814);
  for (const auto& c : cases) {
    TreeWindow w(c.spec, c.lo, c.hi);
    for (int trial = 0; trial < 6; ++trial) {
      const bool nonneg = trial % 2 == 0;
      const SparseFunction f =
          random_sparse_function(w, rng, 1 + trial % 4, nonneg, c.lo, c.hi - 1);
      // Every fourth id plus the support points themselves.
      std::vector<TreeWindow::Id> pts;
      for (TreeWindow::Id id = 0; id < w.n(); id += 4) pts.push_back(id);
      for (const auto& e : f.entries()) pts.push_back(w.id_of_or_fail(e.addr));
      for (OperatorKind kind : kAllOps) {
        for (TreeWindow::Id x : pts) {
          const Rat got = eval_point(w, kind, f, x).value;
          const Rat want = oracle::oracle_eval(w, kind, f, x);
          if (got != want) {
            CAPTURE(to_string(kind), to_string(w.address_of(x)), trial);
            REQUIRE(got == want);
          }
        }
      }
    }
  }
}

TEST_CASE("signed functions act through their absolute value, K stays linear") {
  TreeWindow w(homogeneous_tree(2), -3, 2);
  Rng rng(7);
  const SparseFunction f = random_sparse_function(w, rng, 5, false, -3, 1);
  const SparseFunction g = f.abs_value();
  bool saw_negative = false;
  for (const auto& e : f.entries()) saw_negative = saw_negative || e.val < 0;
  CHECK(saw_negative);  // otherwise the case tests nothing
  for (TreeWindow::Id x = 0; x < w.n(); x += 3) {
    for (OperatorKind kind : kAllOps) {
      if (kind == OperatorKind::K) continue;
      CHECK(eval_point(w, kind, f, x).value == eval_point(w, kind, g, x).value);
    }
    CHECK(eval_K(w, f.scaled(Rat(-2)), x) == Rat(-2) * eval_K(w, f, x));
  }
}

TEST_CASE("pointwise dominations") {
  TreeWindow w(homogeneous_tree(2), -3, 3);
  Rng rng(11);
  for (int trial = 0; trial < 4; ++trial) {
    const SparseFunction f = random_sparse_function(w, rng, 4, true, -3, 2);
    for (TreeWindow::Id x = 0; x < w.n(); x += 2) {
      const Rat t = eval_T(w, f, x).value;
      const Rat u = eval_U(w, f, x).value;
      const Rat b = eval_B(w, f, x).value;
      const Rat bu = eval_Bu(w, f, x).value;
      const Rat tm = eval_Tmod(w, f, x).value;
      const Rat um = eval_Umod(w, f, x).value;
      const Rat k = eval_K(w, f.abs_value(), x);
      const Rat m = eval_M(w, f, x).value;
      const Rat n = eval_N(w, f, x).value;
      CHECK(u >= t);
      CHECK(bu >= b);
      CHECK(b <= 2 * t);
      CHECK(um >= tm);
      CHECK(u <= k);
      CHECK(n >= m);
    }
  }
}

TEST_CASE("U of a point mass is the kernel") {
  TreeWindow w(homogeneous_tree(2), -2, 2);
  for (TreeWindow::Id y = 0; y < w.n(); ++y) {
    const SparseFunction del = SparseFunction::delta(w.address_of(y));
    for (TreeWindow::Id x = 0; x < w.n(); ++x) {
      CHECK(eval_U(w, del, x).value == kernel_kappa(w, x, y));
      CHECK(kernel_kappa(w, x, y) == oracle::oracle_kappa(w, x, y));
    }
  }
}

TEST_CASE("witnesses achieve the reported value") {
  TreeWindow w(homogeneous_tree(2), -3, 2);
  Rng rng(3);
  for (int trial = 0; trial < 4; ++trial) {
    const SparseFunction f = random_sparse_function(w, rng, 3, true, -3, 1);
    for (OperatorKind kind : kAllOps) {
      if (kind == OperatorKind::K) continue;  // linear, no witness
      for (TreeWindow::Id x = 0; x < w.n(); x += 5) {
        const CertifiedValue cv = eval_point(w, kind, f, x);
        CHECK(witness_average(w, f, cv) == cv.value);
      }
    }
  }
}

TEST_CASE("certified values survive window growth") {
  const ValenceSpec spec = homogeneous_tree(2);
  TreeWindow small(spec, -2, 2), big(spec, -4, 4);
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const SparseFunction f = random_sparse_function(small, rng, 3, true, -2, 1);
    for (OperatorKind kind : kAllOps) {
      for (TreeWindow::Id x = 0; x < small.n(); x += 3) {
        const CertifiedValue cv = eval_point(small, kind, f, x);
        if (!cv.certified) continue;
        const TreeWindow::Id xb = big.id_of_or_fail(small.address_of(x));
        const CertifiedValue cvb = eval_point(big, kind, f, xb);
        CHECK(cv.value == cvb.value);
      }
    }
  }
}

TEST_CASE("batch evaluation sorts by address and deduplicates") {
  TreeWindow w(homogeneous_tree(2), -2, 2);
  const SparseFunction f = SparseFunction::delta(addr("0"));
  std::vector<TreeWindow::Id> region = {5, 1, 5, 0, 3, 1};
  const auto rows = batch_eval(w, OperatorKind::T, f, region);
  CHECK(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].addr < rows[i].addr);
  for (const auto& row : rows) {
    CHECK(row.error.empty());
    CHECK(row.cv.value == oracle::oracle_T(w, f, w.id_of_or_fail(row.addr)));
  }
}

TEST_CASE("sparse functions validate and measure correctly") {
  CHECK_THROWS_AS(SparseFunction({{addr("0"), Rat(1)}, {addr("0"), Rat(2)}}), Error);
  const SparseFunction f({{addr("0"), Rat(3, 2)},
                          {addr("0/1"), Rat(-1, 2)},
                          {addr("1/1"), Rat(0)}});  // the zero entry drops out
  CHECK(f.entries().size() == 2);
  CHECK(f.l1() == Rat(2));
  CHECK(f.lp_pow(2) == Rat(9, 4) + Rat(1, 4));
  CHECK(f.linf() == Rat(3, 2));
  CHECK(f.at(addr("1/1")) == Rat(0));
  CHECK(f.min_support_height() == -1);
  CHECK(f.max_support_height() == 0);
  const SparseFunction back = SparseFunction::from_json(f.to_json());
  CHECK(back.entries().size() == 2);
  CHECK(back.l1() == f.l1());
  TreeWindow w(homogeneous_tree(2), -1, 1);
  CHECK(f.supported_in(w));
  TreeWindow tall(homogeneous_tree(2), 1, 3);
  CHECK(!f.supported_in(tall));
  CHECK_THROWS_AS(f.require_supported_in(tall), Error);
}
