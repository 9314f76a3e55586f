#pragma once

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "latfermion/dirac_sea.hpp"
#include "latfermion/invariants.hpp"
#include "latfermion/io.hpp"
#include "latfermion/latfermion.hpp"

namespace latfermion::cli {

enum ExitCode : int {
  kOk = 0,
  kConstraintFailure = 1,
  kMalformedInput = 2,
  kInternalError = 3,
};

namespace detail {

inline std::string occupation_string(const Occupation& occ) {
  std::string s = "[";
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (i) s += ",";
    s += "[" + std::to_string(occ[i].omega) + "," + std::to_string(occ[i].k) + "]";
  }
  return s + "]";
}

inline std::string vector_string(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += io::format_double(v[i]);
  }
  return s + "]";
}

inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    io::write_text_file(path, content);
  }
}

}  // namespace detail

/// Runs one CLI invocation. Exit codes: 0 success, 1 constraint or
/// feasibility failure (including a failed `check`), 2 malformed input,
/// 3 internal consistency error.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice model of a static, isotropic system of relativistic fermions"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path;
  std::uint64_t seed = 0;
  int starts = OptimizerSettings{}.n_starts;
  int n_t = 0, n_r = 0, f_loc = 0, steps = 0;
  std::optional<int> particles;
  std::size_t axis_i = 0, axis_j = 1;
  double tau_min = 0.0, tau_max = 0.0, mass = 0.0;

  auto* eval = app.add_subcommand("eval", "evaluate the action of a configuration");
  eval->add_option("--config", config_path, "configuration JSON")->required();
  eval->add_option("--csv", csv_path, "write the per-point action report as CSV");

  auto* minimize = app.add_subcommand("minimize", "minimize the action over tau at fixed occupation");
  minimize->add_option("--config", config_path, "configuration JSON")->required();
  minimize->add_option("--seed", seed, "seed for the random start schedule");
  minimize->add_option("--starts", starts, "number of starts before parity completion");
  minimize->add_option("--out", out_path, "result JSON (stdout if omitted)");

  auto* search = app.add_subcommand("search", "minimize over all feasible occupations");
  search->add_option("--nt", n_t, "N_t")->required();
  search->add_option("--nr", n_r, "N_r")->required();
  search->add_option("--floc", f_loc, "local trace f_loc")->required();
  search->add_option("--particles", particles, "exact number of occupied points");
  search->add_option("--seed", seed, "seed for the random start schedule");
  search->add_option("--starts", starts, "number of starts before parity completion");
  search->add_option("--out", out_path, "result JSON (stdout if omitted)");

  auto* scan = app.add_subcommand("scan", "sample the action on a (tau_i, tau_j) grid");
  scan->add_option("--config", config_path, "configuration JSON")->required();
  scan->add_option("--i", axis_i, "first state index (canonical order)")->required();
  scan->add_option("--j", axis_j, "second state index (canonical order)")->required();
  scan->add_option("--min", tau_min, "lower end of the tau range")->required();
  scan->add_option("--max", tau_max, "upper end of the tau range")->required();
  scan->add_option("--steps", steps, "grid intervals per axis")->required();
  scan->add_option("--out", out_path, "grid CSV")->required();

  auto* sea = app.add_subcommand("sea", "generate a discretized Dirac sea configuration");
  sea->add_option("--nt", n_t, "N_t")->required();
  sea->add_option("--nr", n_r, "N_r")->required();
  sea->add_option("--mass", mass, "mass parameter m")->required();
  sea->add_option("--out", out_path, "configuration JSON (stdout if omitted)");

  auto* check = app.add_subcommand("check", "run the invariant suite on a configuration");
  check->add_option("--config", config_path, "configuration JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kMalformedInput;
  }

  OptimizerSettings settings;
  settings.seed = seed;
  settings.n_starts = starts;

  try {
    if (eval->parsed()) {
      const auto report = action(io::read_config_file(config_path));
      if (!csv_path.empty()) io::write_text_file(csv_path, io::action_report_to_csv(report));
      out << "S = " << io::format_double(report.total) << "\n";
    } else if (minimize->parsed()) {
      const auto result = minimize_tau(io::read_config_file(config_path), settings);
      detail::emit(out_path, io::dump(io::minimization_result_to_json(result)), out);
      if (!out_path.empty()) {
        out << "S = " << io::format_double(result.action_value)
            << "  tau = " << detail::vector_string(result.config.taus())
            << (result.converged ? "" : "  (not converged)") << "\n";
      }
    } else if (search->parsed()) {
      const auto result = global_minimize({n_t, n_r}, f_loc, particles, settings);
      detail::emit(out_path, io::dump(io::minimization_result_to_json(result)), out);
      if (!out_path.empty()) {
        out << "winning occupation " << detail::occupation_string(result.config.occupation())
            << "  S = " << io::format_double(result.action_value)
            << "  tau = " << detail::vector_string(result.config.taus()) << "\n";
        out << result.branches.size() << " symmetry classes optimized\n";
      }
    } else if (scan->parsed()) {
      const auto grid = scan_landscape(io::read_config_file(config_path), axis_i, axis_j, tau_min, tau_max, steps);
      io::write_text_file(out_path, io::scan_grid_to_csv(grid));
      const auto basins = global_minimum_basins(grid);
      const auto& node = basins.front().front();
      out << "min S = " << io::format_double(grid.value(node.a, node.b)) << " at (" << io::format_double(grid.tau_at(node.a))
          << ", " << io::format_double(grid.tau_at(node.b)) << "), " << basins.size() << " minimum basin(s)\n";
    } else if (sea->parsed()) {
      const auto result = dirac_sea_config({mass, {n_t, n_r}});
      for (int omega : result.skipped_omegas) {
        err << "warning: omega = " << omega << " has no admissible k in 1.." << n_r << "; skipped\n";
      }
      detail::emit(out_path, io::serialize_config(result.config), out);
    } else if (check->parsed()) {
      bool all = true;
      for (const auto& c : run_invariant_suite(io::read_config_file(config_path))) {
        all = all && c.passed;
        char line[256];
        std::snprintf(line, sizeof line, "%s %s  (worst %.3g, tol %.3g)\n", c.passed ? "PASS" : "FAIL",
                      c.name.c_str(), c.worst, c.tolerance);
        out << line;
      }
      return all ? kOk : kConstraintFailure;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kMalformedInput;
  } catch (const ConstraintError& e) {
    err << "error: " << e.what() << "\n";
    return kConstraintFailure;
  } catch (const ConsistencyError& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kOk;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"latfermion"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace latfermion::cli
