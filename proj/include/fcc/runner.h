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

#ifndef FCC_RUNNER_H_
#define FCC_RUNNER_H_

#include <cstddef>
#include <string>
#include <vector>

#include "fcc/integrator.h"
#include "fcc/invariants.h"
#include "fcc/scenario.h"

namespace fcc {

struct RunOptions {
  // Also write <name>_steps.csv with every accepted integrator step.
  bool write_steps = false;
};

// Outcome of one scenario run.  All trace output is deterministic;
// wall_seconds (and hence the report file) is the only field that varies
// between repeated runs.
struct RunResult {
  std::string name;
  std::string digest;            // config_digest of the scenario
  SimStatus status = SimStatus::kOk;
  std::string failure;           // integrator failure reason, if any
  std::string error;             // exception text if the run never completed
  InvariantReport report;        // margins over sampled + accepted rows
  bool has_report = false;       // false when no state was ever recorded
  std::size_t samples = 0;
  long accepted_steps = 0;
  long rejected_steps = 0;
  long rhs_evals = 0;
  double wall_seconds = 0.0;
  // Completed run with every invariant satisfied.
  bool pass = false;
  std::string trace_path;
  std::string steps_path;        // empty unless write_steps was set
  std::string report_path;
};

// Runs one scenario and writes <name>_trace.csv and <name>_report.txt
// (plus <name>_steps.csv on request) into out_dir, creating it if needed.
// A run that aborts mid-way still writes the partial trace, with a final
// "# incomplete: ..." comment line.  Throws on invalid configurations and
// I/O errors.
RunResult run_scenario(const ScenarioConfig& config, const std::string& out_dir,
                       const RunOptions& options = {});

// Runs several scenarios over `jobs` worker threads and writes a
// summary.txt alongside the per-scenario outputs.  A throwing scenario is
// reported in its RunResult::error and does not affect the others.
// Results are ordered by scenario name regardless of thread scheduling,
// and the written traces are identical for any value of `jobs`.
std::vector<RunResult> run_batch(const std::vector<ScenarioConfig>& configs,
                                 const std::string& out_dir, int jobs,
                                 const RunOptions& options = {});

// One line per result, as written to summary.txt.
std::string format_summary(const std::vector<RunResult>& results);

}  // namespace fcc

#endif  // FCC_RUNNER_H_
