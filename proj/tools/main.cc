// Copyright 2026 The FunnelCruise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: simulate single scenarios, validate scenario
// files, and run scenario batches.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fcc/runner.h"
#include "fcc/scenario.h"
#include "fcc/scenario_io.h"

namespace {

namespace fs = std::filesystem;

// Accepts either a file path or "preset:N" for a bundled scenario.
fcc::ScenarioConfig resolve_scenario(const std::string& ref) {
  constexpr const char kPrefix[] = "preset:";
  if (ref.rfind(kPrefix, 0) == 0) {
    return fcc::scenario_preset(std::stoi(ref.substr(sizeof(kPrefix) - 1)));
  }
  return fcc::load_scenario(ref);
}

void print_result(const fcc::RunResult& r) {
  std::cout << "scenario        " << r.name << " (config " << r.digest
            << ")\n";
  std::cout << "status          " << fcc::sim_status_name(r.status) << "\n";
  if (!r.failure.empty()) {
    std::cout << "failure         " << r.failure << "\n";
  }
  std::cout << "samples         " << r.samples << "\n";
  std::cout << "steps           " << r.accepted_steps << " accepted, "
            << r.rejected_steps << " rejected, " << r.rhs_evals
            << " rhs evaluations\n";
  if (r.has_report) {
    const fcc::InvariantReport& rep = r.report;
    std::printf("safety margin   min %.6g m\n", rep.min_safety_margin);
    std::printf("funnel margins  min %.6g m/s (velocity), %.6g m (distance)\n",
                rep.min_upper_margin_v, rep.min_upper_margin_d);
    std::printf("lower margins   min combined %.6g\n", rep.min_combined_lower);
    std::printf("input           sup |u| %.6g N, max jump %.6g N per sample\n",
                rep.sup_abs_u, rep.max_u_jump_per_sample);
  }
  std::printf("wall time       %.3f s\n", r.wall_seconds);
  std::cout << "result          " << (r.pass ? "PASS" : "FAIL") << "\n";
  std::cout << "trace           " << r.trace_path << "\n";
  if (!r.steps_path.empty()) {
    std::cout << "steps           " << r.steps_path << "\n";
  }
  std::cout << "report          " << r.report_path << "\n";
}

int cmd_simulate(const std::string& scenario_ref, const std::string& out_dir,
                 const std::vector<double>& saturate, double tol,
                 double output_dt, bool check, bool steps) {
  fcc::ScenarioConfig config = resolve_scenario(scenario_ref);
  if (saturate.size() == 2) {
    config.controller.saturation = fcc::Saturation{saturate[0], saturate[1]};
  }
  if (tol > 0.0) {
    config.integ.rel_tol = tol;
    config.integ.abs_tol = tol;
  }
  if (output_dt > 0.0) {
    config.integ.output_dt = output_dt;
  }
  fcc::RunOptions options;
  options.write_steps = steps;
  const fcc::RunResult result = fcc::run_scenario(config, out_dir, options);
  print_result(result);
  if (check) {
    return result.pass ? 0 : 1;
  }
  return 0;
}

int cmd_validate(const std::string& path) {
  const fcc::ScenarioConfig config = fcc::parse_scenario(path);
  const std::vector<std::string> violations = fcc::validate_scenario(config);
  if (violations.empty()) {
    std::cout << path << ": valid (config " << fcc::config_digest(config)
              << ")\n";
    return 0;
  }
  std::cout << path << ": invalid:\n";
  for (const std::string& violation : violations) {
    std::cout << "  - " << violation << "\n";
  }
  return 1;
}

int cmd_batch(const std::string& dir, const std::string& out_dir, int jobs,
              bool steps) {
  std::vector<std::string> files;
  for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "batch: no .json scenario files in " << dir << "\n";
    return 1;
  }

  std::vector<fcc::ScenarioConfig> configs;
  bool load_failed = false;
  for (const std::string& file : files) {
    try {
      configs.push_back(fcc::load_scenario(file));
    } catch (const std::exception& e) {
      std::cerr << "batch: skipping " << file << ": " << e.what() << "\n";
      load_failed = true;
    }
  }

  fcc::RunOptions options;
  options.write_steps = steps;
  const std::vector<fcc::RunResult> results =
      fcc::run_batch(configs, out_dir, jobs, options);
  std::cout << fcc::format_summary(results);
  const bool all_pass =
      !load_failed && std::all_of(results.begin(), results.end(),
                                  [](const fcc::RunResult& r) {
                                    return r.pass;
                                  });
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Funnel cruise controller: deterministic closed-loop simulation"};
  app.require_subcommand(1);

  std::string scenario_ref;
  std::string out_dir = "out";
  std::vector<double> saturate;
  double tol = 0.0;
  double output_dt = 0.0;
  bool check = true;
  bool steps = false;

  CLI::App* simulate =
      app.add_subcommand("simulate", "Run one scenario and write its trace");
  simulate
      ->add_option("--scenario", scenario_ref,
                   "Scenario file, or preset:1|2|3 for a bundled scenario")
      ->required();
  simulate->add_option("--out", out_dir, "Output directory (default: out)");
  simulate
      ->add_option("--saturate", saturate,
                   "Clamp the control input to [u_min, u_max] (N)")
      ->expected(2);
  simulate->add_option("--tol", tol,
                       "Override relative and absolute tolerance");
  simulate->add_option("--output-dt", output_dt,
                       "Override the output sampling interval (s)");
  simulate->add_flag("--check,!--no-check", check,
                     "Exit nonzero unless all invariants hold (default on)");
  simulate->add_flag("--steps", steps,
                     "Also write every accepted integrator step");

  std::string validate_path;
  CLI::App* validate =
      app.add_subcommand("validate", "Check a scenario file and exit");
  validate->add_option("--scenario", validate_path, "Scenario file")
      ->required();

  std::string batch_dir;
  int jobs = 1;
  CLI::App* batch = app.add_subcommand(
      "batch", "Run every .json scenario in a directory");
  batch->add_option("--dir", batch_dir, "Directory of scenario files")
      ->required();
  batch->add_option("--out", out_dir, "Output directory (default: out)");
  batch->add_option("--jobs", jobs, "Worker threads (default: 1)");
  batch->add_flag("--steps", steps,
                  "Also write every accepted integrator step");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      return cmd_simulate(scenario_ref, out_dir, saturate, tol, output_dt,
                          check, steps);
    }
    if (validate->parsed()) {
      return cmd_validate(validate_path);
    }
    if (batch->parsed()) {
      return cmd_batch(batch_dir, out_dir, jobs, steps);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
