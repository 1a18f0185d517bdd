// treemax: output writers.
//
// All files are written atomically (temp file in the same directory, then
// rename) so partially written outputs never appear under the target name.
// Exact cells are split into numerator/denominator columns; floating-point
// columns carry an explicit _f64 suffix so nothing exact is ever silently
// rounded.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "treemax/errors.hpp"
#include "treemax/levelset.hpp"
#include "treemax/operators.hpp"

namespace treemax {

// ---------- atomic file write ----------

inline void atomic_write_file(const std::filesystem::path& target, const std::string& content) {
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot open for writing: " + tmp.string());
    out << content;
    if (!out.flush()) fail(Errc::io_error, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) fail(Errc::io_error, "rename failed: " + target.string() + ": " + ec.message());
}

// ---------- batch evaluation CSV ----------

// One row per evaluation point. Error rows keep their address but leave the
// value cells empty and are marked uncertified; kernel-style values without a
// witness leave the witness cells empty.
inline std::string batch_csv(const std::vector<BatchRow>& rows) {
  std::string out = "addr,value_num,value_den,witness_vertex,witness_height,certified\n";
  for (const auto& row : rows) {
    out += to_string(row.addr);
    out += ',';
    if (row.error.empty()) {
      out += rat_num_string(row.cv.value);
      out += ',';
      out += rat_den_string(row.cv.value);
      out += ',';
      if (row.cv.witness) {
        out += to_string(row.cv.witness->vertex);
        out += ',';
        out += std::to_string(row.cv.witness->extent);
      } else {
        out += ',';
      }
      out += ',';
      out += row.cv.certified ? "true" : "false";
    } else {
      out += ",,,,false";
    }
    out += '\n';
  }
  return out;
}

// ---------- scenario reports ----------

struct Check {
  std::string name;
  bool pass = false;
  bool hard = true;  // soft checks are recorded but do not affect the verdict
  std::string detail;
};

struct Observation {
  std::string series;  // which family of numbers this row belongs to
  std::string key;     // grid position within the series ("n=3", "alpha=1/9", ...)
  bool exact = true;
  Rat value;              // meaningful when exact
  double value_f64 = 0;   // meaningful when !exact
  std::string note;

  static Observation of(std::string series, std::string key, Rat v, std::string note = "") {
    Observation o;
    o.series = std::move(series);
    o.key = std::move(key);
    o.exact = true;
    o.value = std::move(v);
    o.value_f64 = to_double(o.value);
    o.note = std::move(note);
    return o;
  }
  static Observation approx(std::string series, std::string key, double v, std::string note = "") {
    Observation o;
    o.series = std::move(series);
    o.key = std::move(key);
    o.exact = false;
    o.value_f64 = v;
    o.note = std::move(note);
    return o;
  }
};

struct ScenarioReport {
  std::string id;
  nlohmann::json parameters = nlohmann::json::object();
  bool exploratory = false;  // verdict says "exploratory" instead of "pass"
  std::vector<Check> checks;
  std::vector<Observation> observations;

  void check(std::string name, bool pass, std::string detail = "", bool hard = true) {
    checks.push_back(Check{std::move(name), pass, hard, std::move(detail)});
  }

  bool passed() const {
    for (const auto& c : checks)
      if (c.hard && !c.pass) return false;
    return true;
  }

  std::string verdict() const {
    if (!passed()) return "fail";
    return exploratory ? "exploratory" : "pass";
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["id"] = id;
    j["parameters"] = parameters;
    j["verdict"] = verdict();
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : checks) {
      nlohmann::json cj;
      cj["name"] = c.name;
      cj["pass"] = c.pass;
      cj["kind"] = c.hard ? "required" : "informational";
      if (!c.detail.empty()) cj["detail"] = c.detail;
      cs.push_back(cj);
    }
    j["checks"] = cs;
    nlohmann::json os = nlohmann::json::array();
    for (const auto& o : observations) {
      nlohmann::json oj;
      oj["series"] = o.series;
      oj["key"] = o.key;
      if (o.exact)
        oj["value"] = rat_to_string(o.value);
      else
        oj["value_f64"] = o.value_f64;
      oj["tag"] = o.exact ? "exact" : "float";
      if (!o.note.empty()) oj["note"] = o.note;
      os.push_back(oj);
    }
    j["observations"] = os;
    return j;
  }
};

inline std::string report_json(const std::vector<ScenarioReport>& reports) {
  nlohmann::json j;
  nlohmann::json arr = nlohmann::json::array();
  bool all_pass = true;
  for (const auto& r : reports) {
    arr.push_back(r.to_json());
    if (!r.passed()) all_pass = false;
  }
  j["scenarios"] = arr;
  j["verdict"] = all_pass ? "pass" : "fail";
  return j.dump(2) + "\n";
}

// Long format: one observation per line, exact rows fill num/den, float rows
// fill the _f64 column.
inline std::string observations_csv(const std::vector<ScenarioReport>& reports) {
  std::string out = "scenario,series,key,value_num,value_den,value_f64,note\n";
  for (const auto& r : reports)
    for (const auto& o : r.observations) {
      out += r.id;
      out += ',';
      out += o.series;
      out += ',';
      out += o.key;
      out += ',';
      if (o.exact) {
        out += rat_num_string(o.value);
        out += ',';
        out += rat_den_string(o.value);
        out += ',';
      } else {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", o.value_f64);
        out += ",,";
        out += buf;
      }
      out += ',';
      out += o.note;
      out += '\n';
    }
  return out;
}

}  // namespace treemax
