// treemax: command-line frontend.
//
// Subcommands:
//   treemax eval      --tree T --window LO..HI --op OP --f F [--region R]
//   treemax decompose --tree T --window LO..HI --f F --alpha A [--op U|Bu]
//   treemax verify SCENARIO [--tree T] [--window LO..HI] [--seed N]
//
// All outputs land under --out (default ".") with fixed names — batch.csv,
// decomposition.json, report.json, observations.csv — and are written
// atomically (temp file + rename) so reruns never expose partial files.
// A JSON config file given with --config overrides flags key by key.
//
// Exit codes: 0 success / all checks pass, 1 a quantitative check failed,
// 2 usage or config error, 3 vertex cap exceeded, 4 window too small for the
// requested decomposition radius.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "treemax/errors.hpp"
#include "treemax/levelset.hpp"
#include "treemax/operators.hpp"
#include "treemax/presets.hpp"
#include "treemax/report.hpp"
#include "treemax/scenarios.hpp"

namespace {

using namespace treemax;

struct Options {
  std::string tree;
  std::string window;
  std::string op;
  std::string f;
  std::string region = "supp";
  std::string alpha;
  std::string out = ".";
  std::string config;
  std::string scenario;
  std::uint64_t seed = 0;
};

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::bad_address:
    case Errc::bad_valence:
    case Errc::bad_function:
    case Errc::bad_argument:
    case Errc::not_in_window:
      return 2;
    case Errc::vertex_cap:
      return 3;
    case Errc::window_too_small:
      return 4;
    default:
      return 1;
  }
}

// Config entries win over command-line flags.
void apply_config(Options& o) {
  if (o.config.empty()) return;
  const nlohmann::json j = detail::load_json_file(o.config);
  if (!j.is_object()) fail(Errc::bad_argument, "config: expected a JSON object: " + o.config);
  auto take = [&](const char* key, std::string& dst) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_string()) fail(Errc::bad_argument, std::string("config: ") + key + " must be a string");
    dst = j.at(key).get<std::string>();
  };
  take("tree", o.tree);
  take("window", o.window);
  take("op", o.op);
  take("f", o.f);
  take("region", o.region);
  take("alpha", o.alpha);
  take("out", o.out);
  take("scenario", o.scenario);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
      fail(Errc::bad_argument, "config: seed must be an integer");
    o.seed = j.at("seed").get<std::uint64_t>();
  }
}

void require_flag(bool present, const std::string& what) {
  if (!present) fail(Errc::bad_argument, what + " is required (flag or config entry)");
}

void write_output(const Options& o, const std::string& name, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir(o.out);
  try {
    fs::create_directories(dir);
  } catch (const std::exception& e) {
    fail(Errc::io_error, "cannot create output directory " + dir.string() + ": " + e.what());
  }
  atomic_write_file(dir / name, content);
}

// ---------- eval ----------

int cmd_eval(const Options& o) {
  require_flag(!o.tree.empty(), "--tree");
  require_flag(!o.window.empty(), "--window");
  require_flag(!o.op.empty(), "--op");
  require_flag(!o.f.empty(), "--f");
  const ValenceSpec spec = parse_tree_preset(o.tree);
  const auto [lo, hi] = parse_window_range(o.window);
  const TreeWindow w(spec, lo, hi);
  const OperatorKind kind = parse_operator(o.op);
  const SparseFunction f = parse_function_arg(o.f);
  const std::vector<VertexAddress> pts = region_points(w, f, parse_region(o.region));
  std::vector<TreeWindow::Id> ids;
  ids.reserve(pts.size());
  for (const auto& a : pts) ids.push_back(w.id_of_or_fail(a));
  const std::vector<BatchRow> rows = batch_eval(w, kind, f, std::move(ids));
  write_output(o, "batch.csv", batch_csv(rows));

  std::size_t uncertified = 0, failed = 0;
  for (const auto& row : rows) {
    if (!row.error.empty())
      ++failed;
    else if (!row.cv.certified)
      ++uncertified;
  }
  if (uncertified > 0)
    std::fprintf(stderr, "warning: %zu of %zu values uncertified (window too short to rule out mass above it)\n",
                 uncertified, rows.size());
  if (failed > 0)
    std::fprintf(stderr, "warning: %zu of %zu points failed to evaluate (see error rows)\n", failed,
                 rows.size());
  std::printf("batch.csv: %zu rows (%zu uncertified, %zu failed)\n", rows.size(), uncertified, failed);
  return 0;
}

// ---------- decompose ----------

int cmd_decompose(const Options& o) {
  require_flag(!o.tree.empty(), "--tree");
  require_flag(!o.window.empty(), "--window");
  require_flag(!o.f.empty(), "--f");
  require_flag(!o.alpha.empty(), "--alpha");
  const ValenceSpec spec = parse_tree_preset(o.tree);
  const auto [lo, hi] = parse_window_range(o.window);
  const TreeWindow w(spec, lo, hi);
  const OperatorKind kind = o.op.empty() ? OperatorKind::U : parse_operator(o.op);
  if (kind != OperatorKind::U && kind != OperatorKind::Bu)
    fail(Errc::bad_argument, "decompose: --op must be U or Bu");
  const SparseFunction f = parse_function_arg(o.f);
  const auto alpha = parse_rational(o.alpha);
  if (!alpha || *alpha <= 0) fail(Errc::bad_argument, "--alpha must be a positive rational, got " + o.alpha);

  const DecompositionReport rep = decompose_maximal(w, f, *alpha, kind);
  write_output(o, "decomposition.json", rep.to_json().dump(2) + "\n");

  const bool ok = rep.disjoint_bases && rep.union_equals_levelset && rep.dal_basso_bounds;
  std::printf("decomposition.json: %zu maximal triangles, level set size %lld, checks %s\n",
              rep.triangles.size(), static_cast<long long>(rep.level_set_size), ok ? "pass" : "FAIL");
  return ok ? 0 : 1;
}

// ---------- verify ----------

int cmd_verify(const Options& o) {
  require_flag(!o.scenario.empty(), "scenario id");
  std::vector<std::string> ids;
  if (o.scenario == "all") {
    ids = scenario_ids();
  } else {
    const auto known = scenario_ids();
    if (std::find(known.begin(), known.end(), o.scenario) == known.end())
      fail(Errc::bad_argument, "unknown scenario: " + o.scenario);
    ids.push_back(o.scenario);
  }

  ScenarioOptions sopt;
  sopt.seed = o.seed;
  if (!o.tree.empty()) sopt.tree = parse_tree_preset(o.tree);
  if (!o.window.empty()) sopt.window = parse_window_range(o.window);

  std::vector<ScenarioReport> reports;
  reports.reserve(ids.size());
  bool all_pass = true;
  for (const auto& id : ids) {
    reports.push_back(run_scenario(id, sopt));
    const ScenarioReport& r = reports.back();
    std::printf("%s: %s\n", r.id.c_str(), r.verdict().c_str());
    for (const auto& c : r.checks)
      if (c.hard && !c.pass) std::printf("  failed: %s%s%s\n", c.name.c_str(), c.detail.empty() ? "" : " — ",
                                         c.detail.c_str());
    all_pass = all_pass && r.passed();
  }
  write_output(o, "report.json", report_json(reports));
  write_output(o, "observations.csv", observations_csv(reports));
  std::printf("verdict: %s\n", all_pass ? "pass" : "fail");
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact triangular / base / kernel maximal operators on tree windows"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tree", o.tree, "tree preset: Tb:<b>, Sab:<a>,<b>, spike:<j>, or a JSON file");
    sub->add_option("--window", o.window, "height range <h_min>..<h_max>, e.g. -6..6");
    sub->add_option("--out", o.out, "output directory (default: current directory)");
    sub->add_option("--config", o.config, "JSON config file; its entries override flags");
    sub->add_option("--seed", o.seed, "seed for randomized parts (default 0)");
  };

  CLI::App* eval = app.add_subcommand("eval", "evaluate one operator over a region; writes batch.csv");
  add_common(eval);
  eval->add_option("--op", o.op, "operator: T, U, B, Bu, Tmod, Umod, K, M, N");
  eval->add_option("--f", o.f, "function: delta:<ADDR> or a JSON file");
  eval->add_option("--region", o.region, "supp | window | H<j>:r<R> (default supp)");

  CLI::App* dec = app.add_subcommand(
      "decompose", "decompose a level set into maximal triangles; writes decomposition.json");
  add_common(dec);
  dec->add_option("--op", o.op, "operator: U or Bu (default U)");
  dec->add_option("--f", o.f, "function: delta:<ADDR> or a JSON file");
  dec->add_option("--alpha", o.alpha, "level set threshold, <num>/<den> or integer");

  CLI::App* ver = app.add_subcommand(
      "verify", "run verification scenarios; writes report.json and observations.csv");
  add_common(ver);
  ver->add_option("scenario", o.scenario, "scenario id or \"all\"");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints help or the parse error
    return rc == 0 ? 0 : 2;
  }

  try {
    apply_config(o);
    if (eval->parsed()) return cmd_eval(o);
    if (dec->parsed()) return cmd_decompose(o);
    return cmd_verify(o);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
