#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "latfermion/action.hpp"
#include "latfermion/configuration.hpp"
#include "latfermion/error.hpp"
#include "latfermion/optimize.hpp"
#include "latfermion/scan.hpp"

namespace latfermion::io {

using Json = nlohmann::ordered_json;

/// 17 significant digits: enough to round-trip any double.
[[nodiscard]] inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[nodiscard]] inline double parse_double(std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw InputError("not a number: '" + s + "'");
  return v;
}

[[nodiscard]] inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
  if (!out) throw InputError("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// Configuration JSON:
//   {"n_t": int, "n_r": int, "mode": "strict" | {"relaxed": eps},
//    "states": [{"omega": int, "k": int, "phi": real, "tau": real}, ...]}

namespace detail {

inline int require_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw InputError(std::string("field '") + key + "' must be an integer");
  }
  return j.at(key).get<int>();
}

inline double require_number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw InputError(std::string("field '") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

inline Json occupation_to_json(const Occupation& occ) {
  Json arr = Json::array();
  for (const auto& p : occ) arr.push_back(Json::array({p.omega, p.k}));
  return arr;
}

inline Occupation occupation_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("occupation must be an array of [omega, k] pairs");
  Occupation occ;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
      throw InputError("occupation entries must be [omega, k] integer pairs");
    }
    occ.push_back({p[0].get<int>(), p[1].get<int>()});
  }
  return occ;
}

inline std::vector<double> doubles_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw InputError(std::string(what) + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

[[nodiscard]] inline Json config_to_json(const Configuration& config) {
  Json j;
  j["n_t"] = config.spec().n_t;
  j["n_r"] = config.spec().n_r;
  if (auto eps = config.epsilon()) {
    j["mode"] = Json{{"relaxed", *eps}};
  } else {
    j["mode"] = "strict";
  }
  Json states = Json::array();
  for (const auto& s : config.states()) {
    states.push_back(Json{{"omega", s.omega}, {"k", s.k}, {"phi", s.phi}, {"tau", s.tau}});
  }
  j["states"] = std::move(states);
  return j;
}

[[nodiscard]] inline Configuration config_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("configuration must be a JSON object");
  const LatticeSpec spec{detail::require_int(j, "n_t"), detail::require_int(j, "n_r")};
  NormalizationMode mode = StrictNormalization{};
  if (j.contains("mode")) {
    const auto& m = j.at("mode");
    if (m.is_string() && m.get<std::string>() == "strict") {
      mode = StrictNormalization{};
    } else if (m.is_object() && m.size() == 1 && m.contains("relaxed") && m.at("relaxed").is_number()) {
      mode = RelaxedNormalization{m.at("relaxed").get<double>()};
    } else {
      throw InputError("mode must be \"strict\" or {\"relaxed\": epsilon}");
    }
  }
  std::vector<OccupiedState> states;
  if (j.contains("states")) {
    if (!j.at("states").is_array()) throw InputError("states must be an array");
    for (const auto& s : j.at("states")) {
      if (!s.is_object()) throw InputError("each state must be an object");
      states.push_back({detail::require_int(s, "omega"), detail::require_int(s, "k"),
                        detail::require_number(s, "phi"), detail::require_number(s, "tau")});
    }
  }
  return Configuration(spec, std::move(states), mode);
}

[[nodiscard]] inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

[[nodiscard]] inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

[[nodiscard]] inline std::string serialize_config(const Configuration& config) {
  return dump(config_to_json(config));
}

[[nodiscard]] inline Configuration parse_config(std::string_view text) {
  return config_from_json(parse_json(text));
}

[[nodiscard]] inline Configuration read_config_file(const std::string& path) {
  return parse_config(read_text_file(path));
}

// ---------------------------------------------------------------------------
// ActionReport CSV: "t,r,D,L,causal,weight" rows, then "# S = <total>".

inline constexpr std::string_view kActionCsvHeader = "t,r,D,L,causal,weight";

[[nodiscard]] inline std::string action_report_to_csv(const ActionReport& report) {
  std::string out(kActionCsvHeader);
  out += '\n';
  for (const auto& row : report.rows) {
    out += format_double(row.t) + ',' + format_double(row.r) + ',' + format_double(row.discriminant) + ',' +
           format_double(row.lagrangian) + ',' + to_string(row.causal) + ',' + format_double(row.weight) + '\n';
  }
  out += "# S = " + format_double(report.total) + '\n';
  return out;
}

namespace detail {

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    fields.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

inline std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace detail

[[nodiscard]] inline ActionReport parse_action_report_csv(std::string_view text) {
  const auto lines = detail::lines_of(text);
  if (lines.size() < 3 || lines.front() != kActionCsvHeader) throw InputError("not an action report CSV");
  const std::string& footer = lines.back();
  constexpr std::string_view prefix = "# S = ";
  if (footer.rfind(prefix, 0) != 0) throw InputError("action report CSV lacks the '# S = ' footer");

  ActionReport report;
  report.total = parse_double(std::string_view(footer).substr(prefix.size()));
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    const auto f = detail::split(lines[i], ',');
    if (f.size() != 6) throw InputError("action report row " + std::to_string(i) + " has wrong arity");
    CausalClass causal;
    if (f[4] == "timelike") {
      causal = CausalClass::timelike;
    } else if (f[4] == "spacelike") {
      causal = CausalClass::spacelike;
    } else {
      throw InputError("unknown causal class '" + f[4] + "'");
    }
    report.rows.push_back({parse_double(f[0]), parse_double(f[1]), parse_double(f[2]), parse_double(f[3]),
                           causal, parse_double(f[5])});
  }
  // Row-major: the radial count is the run length of the first time value.
  int n_r = 0;
  while (n_r < static_cast<int>(report.rows.size()) && report.rows[static_cast<std::size_t>(n_r)].t == report.rows[0].t) {
    ++n_r;
  }
  if (report.rows.size() % static_cast<std::size_t>(n_r) != 0) throw InputError("action report is not a full lattice");
  report.spec = {static_cast<int>(report.rows.size()) / n_r, n_r};
  return report;
}

// ---------------------------------------------------------------------------
// ScanGrid CSV: a "# scan ..." metadata line, then "tau_i,tau_j,S" rows.

inline constexpr std::string_view kScanCsvHeader = "tau_i,tau_j,S";

[[nodiscard]] inline std::string scan_grid_to_csv(const ScanGrid& grid) {
  std::string out = "# scan i=" + std::to_string(grid.axis_i) + " j=" + std::to_string(grid.axis_j) +
                    " tau_min=" + format_double(grid.tau_min) + " tau_max=" + format_double(grid.tau_max) +
                    " steps=" + std::to_string(grid.steps) + '\n';
  out += kScanCsvHeader;
  out += '\n';
  for (int a = 0; a <= grid.steps; ++a) {
    for (int b = 0; b <= grid.steps; ++b) {
      out += format_double(grid.tau_at(a)) + ',' + format_double(grid.tau_at(b)) + ',' +
             format_double(grid.value(a, b)) + '\n';
    }
  }
  return out;
}

[[nodiscard]] inline ScanGrid parse_scan_grid_csv(std::string_view text) {
  const auto lines = detail::lines_of(text);
  if (lines.size() < 2 || lines[0].rfind("# scan ", 0) != 0 || lines[1] != kScanCsvHeader) {
    throw InputError("not a scan grid CSV");
  }
  ScanGrid grid;
  bool seen_i = false, seen_j = false, seen_min = false, seen_max = false, seen_steps = false;
  for (const auto& token : detail::split(std::string_view(lines[0]).substr(7), ' ')) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "i") {
      grid.axis_i = static_cast<std::size_t>(parse_double(value));
      seen_i = true;
    } else if (key == "j") {
      grid.axis_j = static_cast<std::size_t>(parse_double(value));
      seen_j = true;
    } else if (key == "tau_min") {
      grid.tau_min = parse_double(value);
      seen_min = true;
    } else if (key == "tau_max") {
      grid.tau_max = parse_double(value);
      seen_max = true;
    } else if (key == "steps") {
      grid.steps = static_cast<int>(parse_double(value));
      seen_steps = true;
    }
  }
  if (!(seen_i && seen_j && seen_min && seen_max && seen_steps) || grid.steps < 1) {
    throw InputError("scan grid metadata line is incomplete");
  }
  const std::size_t expected = grid.side() * grid.side();
  if (lines.size() - 2 != expected) throw InputError("scan grid has the wrong number of rows");
  grid.values.reserve(expected);
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto f = detail::split(lines[i], ',');
    if (f.size() != 3) throw InputError("scan grid row has wrong arity");
    grid.values.push_back(parse_double(f[2]));
  }
  return grid;
}

// ---------------------------------------------------------------------------
// MinimizationResult JSON: the winning configuration plus
//   {"S", "converged", "n_evals", "branches": [{"occupation", "S", ...}], "starts": [...]}

[[nodiscard]] inline Json minimization_result_to_json(const MinimizationResult& r) {
  Json j = config_to_json(r.config);
  j["S"] = r.action_value;
  j["converged"] = r.converged;
  j["n_evals"] = r.n_evals;
  Json branches = Json::array();
  for (const auto& b : r.branches) {
    Json eq = Json::array();
    for (const auto& o : b.equivalents) eq.push_back(detail::occupation_to_json(o));
    branches.push_back(Json{{"occupation", detail::occupation_to_json(b.occupation)},
                            {"S", b.action_value},
                            {"tau", b.tau},
                            {"converged", b.converged},
                            {"n_evals", b.n_evals},
                            {"equivalent", std::move(eq)}});
  }
  j["branches"] = std::move(branches);
  Json starts = Json::array();
  for (const auto& s : r.starts_log) {
    starts.push_back(Json{{"start", s.start},
                          {"final", s.final_point},
                          {"S", s.value},
                          {"evals", s.evals},
                          {"converged", s.converged}});
  }
  j["starts"] = std::move(starts);
  return j;
}

namespace detail {

inline MinimizationResult minimization_result_from_json_unchecked(const Json& j) {
  MinimizationResult r;
  r.config = config_from_json(j);
  r.action_value = detail::require_number(j, "S");
  if (!j.contains("converged") || !j.at("converged").is_boolean()) throw InputError("field 'converged' must be a boolean");
  r.converged = j.at("converged").get<bool>();
  r.n_evals = detail::require_int(j, "n_evals");
  if (j.contains("branches")) {
    for (const auto& b : j.at("branches")) {
      BranchRecord rec;
      rec.occupation = detail::occupation_from_json(b.at("occupation"));
      rec.action_value = detail::require_number(b, "S");
      if (b.contains("tau")) rec.tau = detail::doubles_from_json(b.at("tau"), "tau");
      rec.converged = b.value("converged", false);
      rec.n_evals = b.value("n_evals", 0);
      if (b.contains("equivalent")) {
        for (const auto& o : b.at("equivalent")) rec.equivalents.push_back(detail::occupation_from_json(o));
      }
      r.branches.push_back(std::move(rec));
    }
  }
  if (j.contains("starts")) {
    for (const auto& s : j.at("starts")) {
      StartRecord rec;
      rec.start = detail::doubles_from_json(s.at("start"), "start");
      rec.final_point = detail::doubles_from_json(s.at("final"), "final");
      rec.value = detail::require_number(s, "S");
      rec.evals = detail::require_int(s, "evals");
      rec.converged = s.value("converged", false);
      r.starts_log.push_back(std::move(rec));
    }
  }
  return r;
}

}  // namespace detail

[[nodiscard]] inline MinimizationResult minimization_result_from_json(const Json& j) {
  try {
    return detail::minimization_result_from_json_unchecked(j);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed minimization result: ") + e.what());
  }
}

}  // namespace latfermion::io
