#pragma once

// File formats: custom spectrum tables, run configurations, CSV tables with
// round-trip precision, and JSON documents carrying their own configuration.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fockcs/spectra.hpp"
#include "fockcs/states.hpp"
#include "fockcs/verify.hpp"

namespace fockcs {

/// Reads `{ "e": [e_0, e_1, ...], "omega": 1.0, "label": "..." }`.
inline SpectrumModel load_custom_spectrum(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spectrum file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw std::runtime_error("spectrum file " + path.string() + ": " + ex.what());
  }
  if (!j.contains("e") || !j["e"].is_array()) {
    throw std::runtime_error("spectrum file " + path.string() + ": missing array 'e'");
  }
  const auto e = j["e"].get<std::vector<double>>();
  const double omega = j.value("omega", 1.0);
  const std::string label = j.value("label", std::string("custom"));
  return SpectrumModel::from_table(e, omega, label);
}

/// Model spec grammar `name[:key=value[,key=value]...]`; `custom:file=<path>`
/// loads a table (an `omega` key overrides the file's value).
inline SpectrumModel resolve_model(const std::string& spec) {
  auto [name, kv] = split_model_spec(spec);
  if (name != "custom") return parse_model_spec(spec);
  auto it = kv.find("file");
  if (it == kv.end()) throw std::invalid_argument("model spec: custom requires file=<path>");
  SpectrumModel m = load_custom_spectrum(it->second);
  if (auto w = kv.find("omega"); w != kv.end()) {
    std::vector<double> e = *m.table();
    return SpectrumModel::from_table(std::move(e), detail::parse_number("omega", w->second),
                                     m.name());
  }
  return m;
}

/// Everything needed to reproduce an output file. Commands execute from this
/// record alone, so an embedded copy replays the run.
struct RunConfig {
  std::string command;
  std::string model;
  std::string family = "gk";
  std::vector<cplx> z;
  std::vector<double> alphas{0.0};
  std::vector<double> times;
  double tail_tol = 1e-14;
  std::string format = "csv";
  std::string output;
  /// Not used by any computation; recorded for reproducibility.
  std::uint64_t seed = 0;
  /// Command-specific settings (operator name, cutoff, sweep quantity, ...).
  json extra = json::object();
};

inline json to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["model"] = c.model;
  j["family"] = c.family;
  j["z"] = json::array();
  for (cplx v : c.z) j["z"].push_back(json::array({v.real(), v.imag()}));
  j["alphas"] = c.alphas;
  j["times"] = c.times;
  j["tail_tol"] = c.tail_tol;
  j["format"] = c.format;
  j["output"] = c.output;
  j["seed"] = c.seed;
  j["extra"] = c.extra;
  return j;
}

inline RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  c.command = j.value("command", c.command);
  c.model = j.value("model", c.model);
  c.family = j.value("family", c.family);
  if (j.contains("z")) {
    for (const auto& v : j.at("z")) c.z.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
  }
  c.alphas = j.value("alphas", c.alphas);
  c.times = j.value("times", c.times);
  c.tail_tol = j.value("tail_tol", c.tail_tol);
  c.format = j.value("format", c.format);
  c.output = j.value("output", c.output);
  c.seed = j.value("seed", c.seed);
  c.extra = j.value("extra", json::object());
  return c;
}

/// Recovers the RunConfig embedded in a CSV (`# config: {...}` line) or JSON
/// (`"config"` member) output file.
inline RunConfig embedded_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const std::string tag = "# config: ";
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    if (line.rfind(tag, 0) == 0) return run_config_from_json(json::parse(line.substr(tag.size())));
    if (line.empty() || line[0] != '#') break;
  }
  const json j = json::parse(text);
  if (j.contains("run_config")) return run_config_from_json(j.at("run_config"));
  if (!j.contains("config")) throw std::runtime_error(path.string() + ": no embedded config");
  return run_config_from_json(j.at("config"));
}

/// 17 significant digits: enough to round-trip every double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

/// A CSV table with `#`-prefixed header comments.
struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<double>& values) {
    std::vector<std::string> r;
    r.reserve(values.size());
    for (double v : values) r.push_back(format_double(v));
    rows.push_back(std::move(r));
  }
};

inline void write_csv(std::ostream& os, const Table& t) {
  for (const auto& c : t.comments) os << "# " << c << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
}

/// JSON form of a table: {"config": ..., "columns": [...], "rows": [[...]]}.
inline json table_json(const Table& t, const json& config) {
  json j;
  j["config"] = config;
  j["comments"] = t.comments;
  j["columns"] = t.columns;
  j["rows"] = json::array();
  for (const auto& r : t.rows) {
    json row = json::array();
    for (const auto& cell : r) {
      // Cells were formatted at round-trip precision; parse back to numbers.
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used == cell.size() && std::isfinite(v)) {
          row.push_back(v);
          continue;
        }
      } catch (const std::exception&) {
      }
      row.push_back(cell);
    }
    j["rows"].push_back(std::move(row));
  }
  return j;
}

/// Output directory: the explicit path's parent, or $FOCKCS_OUTPUT_DIR for bare
/// file names, or the working directory.
inline std::filesystem::path output_path(const std::string& requested) {
  std::filesystem::path p(requested);
  if (p.has_parent_path() || p.is_absolute()) return p;
  if (const char* dir = std::getenv("FOCKCS_OUTPUT_DIR"); dir && *dir) {
    return std::filesystem::path(dir) / p;
  }
  return p;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

}  // namespace fockcs
