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

#ifndef FCC_SCENARIO_IO_H_
#define FCC_SCENARIO_IO_H_

#include <stdexcept>
#include <string>

#include "fcc/scenario.h"
#include "json.hpp"

namespace fcc {

// Raised for malformed scenario files: unreadable file, invalid JSON,
// schema violations (missing/unknown/mistyped keys) and, for
// load_scenario, semantic validation failures.  The message names the
// offending file and field.
class ScenarioIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Serializes a scenario to its JSON document form.  nlohmann::json keeps
// object keys sorted, so dump() of the result is a canonical encoding:
// two configurations are equivalent iff their dumps are byte-identical.
nlohmann::json scenario_to_json(const ScenarioConfig& config);

// Parses a scenario from a JSON document.  The schema is strict: every
// field is required except "controller.saturation", and unknown keys are
// rejected with an error naming the key and its section.
ScenarioConfig scenario_from_json(const nlohmann::json& doc);

// Reads and parses a scenario file without semantic validation.
ScenarioConfig parse_scenario(const std::string& path);

// Reads, parses and validates a scenario file.  Throws ScenarioIoError
// listing every validation violation if the configuration is invalid.
ScenarioConfig load_scenario(const std::string& path);

// Writes a scenario as pretty-printed JSON.
void save_scenario(const ScenarioConfig& config, const std::string& path);

// 16-hex-digit FNV-1a hash of the canonical encoding.  Stable across
// runs and platforms; used in run reports to tie results to the exact
// configuration that produced them.
std::string config_digest(const ScenarioConfig& config);

}  // namespace fcc

#endif  // FCC_SCENARIO_IO_H_
