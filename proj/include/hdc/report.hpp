#pragma once

// Machine-readable result files: results CSV, JSON mirror of the results and
// plot-data CSVs. Numbers use shortest round-trip formatting, so reruns with
// the same seed give byte-identical files.

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hdc/config.hpp"
#include "hdc/errors.hpp"
#include "hdc/format.hpp"
#include "hdc/harness.hpp"

namespace hdc {

inline constexpr const char* kOutputDirEnv = "HDC_OUTPUT_DIR";

/// $HDC_OUTPUT_DIR, or "results" when unset.
inline std::string default_output_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  return env && *env ? std::string(env) : std::string("results");
}

namespace detail {

inline std::string csv_number(double v) { return std::isnan(v) ? std::string() : format_double(v); }

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
  out << content;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed: " + std::strerror(errno));
}

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

}  // namespace detail

inline std::string results_csv(const std::vector<ExperimentResult>& results) {
  std::ostringstream os;
  os << "experiment_id,classifier,median_error_pct,se_pct,reps,theory_pred_pct\n";
  for (const auto& r : results)
    for (const auto& c : r.classifiers)
      os << r.experiment_id << ',' << to_string(c.id) << ',' << format_double(c.median_error_pct) << ','
         << format_double(c.se_pct) << ',' << r.reps << ','
         << (c.theory_pred_pct ? format_double(*c.theory_pred_pct) : std::string()) << '\n';
  return os.str();
}

inline nlohmann::ordered_json to_json(const ExperimentResult& r) {
  nlohmann::ordered_json j;
  j["experiment_id"] = r.experiment_id;
  j["reps"] = r.reps;
  j["master_seed"] = r.master_seed;
  auto& cls = j["classifiers"] = nlohmann::ordered_json::array();
  for (const auto& c : r.classifiers) {
    nlohmann::ordered_json e;
    e["classifier"] = to_string(c.id);
    e["median_error_pct"] = c.median_error_pct;
    e["se_pct"] = c.se_pct;
    e["se_defined"] = c.se_defined;
    e["mean_error_pct"] = c.mean_error_pct;
    e["mean_p21"] = c.mean_p21;
    e["theory_pred_pct"] = c.theory_pred_pct ? nlohmann::ordered_json(*c.theory_pred_pct) : nullptr;
    nlohmann::ordered_json th = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.theory) th[k] = std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v);
    e["theory"] = th;
    e["per_rep_errors"] = c.per_rep_errors;
    cls.push_back(std::move(e));
  }
  return j;
}

inline std::string table_csv(const ReportTable& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_number(row[i]);
    os << '\n';
  }
  return os.str();
}

/// Writes `<stem>_results.csv` and/or `<stem>_results.json` into out_dir and
/// returns the written paths.
inline std::vector<std::string> emit_results(const std::vector<ExperimentResult>& results,
                                             const std::vector<std::string>& formats, const std::string& out_dir,
                                             const std::string& stem) {
  const std::filesystem::path dir(out_dir);
  detail::ensure_directory(dir);
  std::vector<std::string> written;
  for (const auto& f : formats) {
    if (f == "csv") {
      const auto path = dir / (stem + "_results.csv");
      detail::write_file(path, results_csv(results));
      written.push_back(path.string());
    } else if (f == "json") {
      nlohmann::ordered_json j = nlohmann::ordered_json::array();
      for (const auto& r : results) j.push_back(to_json(r));
      const auto path = dir / (stem + "_results.json");
      detail::write_file(path, j.dump(2) + "\n");
      written.push_back(path.string());
    } else {
      throw ValidationError("unknown output format '" + f + "' (expected csv, json)");
    }
  }
  return written;
}

/// Writes every table of a reproduction report (`<name>.csv`; the first one is
/// the side-by-side comparison) plus the per-experiment results files.
inline std::vector<std::string> emit_report(const ReproduceReport& report, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  detail::ensure_directory(dir);
  std::vector<std::string> written;
  for (std::size_t i = 0; i < report.tables.size(); ++i) {
    const auto& t = report.tables[i];
    const auto name = i == 0 ? t.name + "_comparison" : t.name;
    const auto path = dir / (name + ".csv");
    detail::write_file(path, table_csv(t));
    written.push_back(path.string());
  }
  const auto more = emit_results(report.experiments, {"csv", "json"}, out_dir, report.target);
  written.insert(written.end(), more.begin(), more.end());
  return written;
}

/// Fixed-width rendering of a table for terminal output.
inline std::string render_table(const ReportTable& t, int precision = 2) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back(t.columns);
  for (const auto& row : t.rows) {
    std::vector<std::string> r;
    for (double v : row) {
      if (std::isnan(v)) {
        r.emplace_back("-");
      } else {
        std::ostringstream os;
        os.setf(std::ios::fixed);
        os.precision(precision);
        os << v;
        r.push_back(os.str());
      }
    }
    cells.push_back(std::move(r));
  }
  std::vector<std::size_t> width(t.columns.size(), 0);
  for (const auto& r : cells)
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
  std::ostringstream os;
  for (const auto& r : cells) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      os << (i ? "  " : "");
      os << std::string(width[i] - r[i].size(), ' ') << r[i];
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace hdc
