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

#include "fcc/runner.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fcc/scenario_io.h"
#include "fcc/trace.h"

namespace fcc {
namespace {

namespace fs = std::filesystem;

void write_report(const fs::path& path, const RunResult& r) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(path.string() + ": cannot open file for writing");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const InvariantReport& rep = r.report;
  out << "scenario=" << r.name << "\n";
  out << "config_digest=" << r.digest << "\n";
  out << "status=" << sim_status_name(r.status) << "\n";
  if (!r.failure.empty()) {
    out << "failure=" << r.failure << "\n";
  }
  out << "samples=" << r.samples << "\n";
  out << "accepted_steps=" << r.accepted_steps << "\n";
  out << "rejected_steps=" << r.rejected_steps << "\n";
  out << "rhs_evals=" << r.rhs_evals << "\n";
  out << "min_safety_margin="
      << format_double(r.has_report ? rep.min_safety_margin : nan) << "\n";
  out << "min_upper_margin_v="
      << format_double(r.has_report ? rep.min_upper_margin_v : nan) << "\n";
  out << "min_upper_margin_d="
      << format_double(r.has_report ? rep.min_upper_margin_d : nan) << "\n";
  out << "min_combined_lower="
      << format_double(r.has_report ? rep.min_combined_lower : nan) << "\n";
  out << "sup_abs_u=" << format_double(r.has_report ? rep.sup_abs_u : nan)
      << "\n";
  out << "max_u_jump_per_sample="
      << format_double(r.has_report ? rep.max_u_jump_per_sample : nan) << "\n";
  out << "pass=" << (r.pass ? "true" : "false") << "\n";
  out << "wall_seconds=" << format_double(r.wall_seconds) << "\n";
  if (!out) {
    throw std::runtime_error(path.string() + ": write failed");
  }
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, const std::string& out_dir,
                       const RunOptions& options) {
  const std::vector<std::string> violations = validate_scenario(config);
  if (!violations.empty()) {
    std::ostringstream message;
    message << "run_scenario: invalid scenario \"" << config.name << "\":";
    for (const std::string& violation : violations) {
      message << "\n  - " << violation;
    }
    throw std::invalid_argument(message.str());
  }

  fs::create_directories(out_dir);

  RunResult r;
  r.name = config.name;
  r.digest = config_digest(config);

  const VehicleParams plant = config.plant.build();
  const ControllerConfig cfg = config.controller.build();
  const LeaderProfile profile = config.leader;
  const LeaderFn leader = [profile](double t) { return profile.state_at(t); };

  const auto start = std::chrono::steady_clock::now();
  const SimResult sim =
      simulate(plant, cfg, config.integ, config.init, leader, config.t_end);
  r.wall_seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();

  r.status = sim.status;
  r.failure = sim.failure;
  r.samples = sim.sampled.rows.size();
  r.accepted_steps = sim.accepted_steps;
  r.rejected_steps = sim.rejected_steps;
  r.rhs_evals = sim.rhs_evals;

  if (!sim.sampled.rows.empty()) {
    r.report = check_run(sim.sampled, sim.accepted);
    r.has_report = true;
  }
  r.pass = sim.ok() && r.has_report && r.report.pass;

  const fs::path dir(out_dir);
  std::string footer;
  if (!sim.ok()) {
    footer = "incomplete: " + sim.failure;
  }
  const fs::path trace_path = dir / (config.name + "_trace.csv");
  write_trace_csv(sim.sampled, trace_path, footer);
  r.trace_path = trace_path.string();

  if (options.write_steps) {
    const fs::path steps_path = dir / (config.name + "_steps.csv");
    write_trace_csv(sim.accepted, steps_path, footer);
    r.steps_path = steps_path.string();
  }

  const fs::path report_path = dir / (config.name + "_report.txt");
  write_report(report_path, r);
  r.report_path = report_path.string();

  return r;
}

std::string format_summary(const std::vector<RunResult>& results) {
  std::ostringstream out;
  out << "# name pass status min_safety_margin min_combined_lower sup_abs_u "
         "wall_seconds\n";
  std::size_t passed = 0;
  for (const RunResult& r : results) {
    if (!r.error.empty()) {
      out << r.name << " pass=false error=\"" << r.error << "\"\n";
      continue;
    }
    if (r.pass) {
      ++passed;
    }
    out << r.name << " pass=" << (r.pass ? "true" : "false")
        << " status=" << sim_status_name(r.status);
    if (r.has_report) {
      out << " min_safety_margin=" << format_double(r.report.min_safety_margin)
          << " min_combined_lower="
          << format_double(r.report.min_combined_lower)
          << " sup_abs_u=" << format_double(r.report.sup_abs_u);
    }
    out << " wall_seconds=" << format_double(r.wall_seconds) << "\n";
  }
  out << "total=" << results.size() << " passed=" << passed << "\n";
  return out.str();
}

std::vector<RunResult> run_batch(const std::vector<ScenarioConfig>& configs,
                                 const std::string& out_dir, int jobs,
                                 const RunOptions& options) {
  fs::create_directories(out_dir);
  std::vector<RunResult> results(configs.size());

  const int workers = std::max(
      1, std::min<int>(jobs, static_cast<int>(configs.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= configs.size()) {
        return;
      }
      try {
        results[i] = run_scenario(configs[i], out_dir, options);
      } catch (const std::exception& e) {
        results[i].name = configs[i].name;
        results[i].error = e.what();
        results[i].pass = false;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) {
      pool.emplace_back(work);
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }

  std::sort(results.begin(), results.end(),
            [](const RunResult& a, const RunResult& b) {
              return a.name < b.name;
            });

  const fs::path summary_path = fs::path(out_dir) / "summary.txt";
  std::ofstream out(summary_path);
  if (!out) {
    throw std::runtime_error(summary_path.string() +
                             ": cannot open file for writing");
  }
  out << format_summary(results);
  return results;
}

}  // namespace fcc
