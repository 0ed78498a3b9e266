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

#include "fcc/scenario_io.h"

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace fcc {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw ScenarioIoError(message);
}

// Rejects unknown keys and reports missing required ones, so typos in a
// hand-edited file fail loudly instead of silently falling back to a
// default.
void check_keys(const json& j, const std::string& section,
                const std::vector<std::string>& required,
                const std::vector<std::string>& optional = {}) {
  if (!j.is_object()) {
    fail(section + ": expected an object");
  }
  const std::set<std::string> req(required.begin(), required.end());
  const std::set<std::string> opt(optional.begin(), optional.end());
  for (const auto& item : j.items()) {
    if (req.count(item.key()) == 0 && opt.count(item.key()) == 0) {
      fail(section + ": unknown key \"" + item.key() + "\"");
    }
  }
  for (const std::string& key : required) {
    if (!j.contains(key)) {
      fail(section + ": missing required key \"" + key + "\"");
    }
  }
}

double get_number(const json& j, const std::string& section,
                  const std::string& key) {
  const json& field = j.at(key);
  if (!field.is_number()) {
    fail(section + "." + key + ": expected a number");
  }
  return field.get<double>();
}

std::string get_string(const json& j, const std::string& section,
                       const std::string& key) {
  const json& field = j.at(key);
  if (!field.is_string()) {
    fail(section + "." + key + ": expected a string");
  }
  return field.get<std::string>();
}

json funnel_to_json(const FunnelDesc& d) {
  json j;
  switch (d.shape) {
    case FunnelDesc::Shape::kConstant:
      j["shape"] = "constant";
      j["phi"] = d.phi;
      break;
    case FunnelDesc::Shape::kExponentialBoundary:
      j["shape"] = "exponential_boundary";
      j["a"] = d.a;
      j["rate"] = d.rate;
      j["floor"] = d.floor;
      break;
  }
  return j;
}

FunnelDesc funnel_from_json(const json& j, const std::string& section) {
  if (!j.is_object() || !j.contains("shape")) {
    fail(section + ": expected an object with a \"shape\" key");
  }
  const std::string shape = get_string(j, section, "shape");
  if (shape == "constant") {
    check_keys(j, section, {"shape", "phi"});
    return FunnelDesc::constant(get_number(j, section, "phi"));
  }
  if (shape == "exponential_boundary") {
    check_keys(j, section, {"shape", "a", "rate", "floor"});
    return FunnelDesc::exponential_boundary(get_number(j, section, "a"),
                                            get_number(j, section, "rate"),
                                            get_number(j, section, "floor"));
  }
  fail(section + ".shape: unknown shape \"" + shape +
       "\" (expected \"constant\" or \"exponential_boundary\")");
}

}  // namespace

json scenario_to_json(const ScenarioConfig& config) {
  json j;
  j["name"] = config.name;

  json& plant = j["plant"];
  plant["m"] = config.plant.m;
  plant["g"] = config.plant.g;
  plant["theta"] = config.plant.theta;
  plant["rho"] = config.plant.rho;
  plant["c_d"] = config.plant.c_d;
  plant["c_r"] = config.plant.c_r;
  plant["area"] = config.plant.area;
  plant["alpha"] = config.plant.alpha;
  plant["delta"] = config.plant.delta;

  json& ctrl = j["controller"];
  ctrl["lambda1"] = config.controller.lambda1;
  ctrl["lambda2"] = config.controller.lambda2;
  ctrl["v_ref"] = config.controller.v_ref;
  ctrl["phi_v"] = funnel_to_json(config.controller.phi_v);
  ctrl["phi_d"] = funnel_to_json(config.controller.phi_d);
  if (config.controller.saturation) {
    ctrl["saturation"]["u_min"] = config.controller.saturation->u_min;
    ctrl["saturation"]["u_max"] = config.controller.saturation->u_max;
  }

  json& leader = j["leader"];
  leader["x0"] = config.leader.x0();
  leader["v0"] = config.leader.v0();
  leader["segments"] = json::array();
  for (const LeaderSegment& s : config.leader.segments()) {
    json seg;
    seg["duration"] = s.duration;
    seg["accel"] = s.accel;
    leader["segments"].push_back(seg);
  }

  json& init = j["init"];
  init["t"] = config.init.t;
  init["x"] = config.init.x;
  init["v"] = config.init.v;

  j["t_end"] = config.t_end;

  json& integ = j["integrator"];
  integ["rel_tol"] = config.integ.rel_tol;
  integ["abs_tol"] = config.integ.abs_tol;
  integ["h_init"] = config.integ.h_init;
  integ["h_min"] = config.integ.h_min;
  integ["h_max"] = config.integ.h_max;
  integ["output_dt"] = config.integ.output_dt;

  return j;
}

ScenarioConfig scenario_from_json(const json& doc) {
  check_keys(doc, "scenario",
             {"name", "plant", "controller", "leader", "init", "t_end",
              "integrator"});

  ScenarioConfig c;
  c.name = get_string(doc, "scenario", "name");

  const json& plant = doc.at("plant");
  check_keys(plant, "plant",
             {"m", "g", "theta", "rho", "c_d", "c_r", "area", "alpha",
              "delta"});
  c.plant.m = get_number(plant, "plant", "m");
  c.plant.g = get_number(plant, "plant", "g");
  c.plant.theta = get_number(plant, "plant", "theta");
  c.plant.rho = get_number(plant, "plant", "rho");
  c.plant.c_d = get_number(plant, "plant", "c_d");
  c.plant.c_r = get_number(plant, "plant", "c_r");
  c.plant.area = get_number(plant, "plant", "area");
  c.plant.alpha = get_number(plant, "plant", "alpha");
  c.plant.delta = get_number(plant, "plant", "delta");

  const json& ctrl = doc.at("controller");
  check_keys(ctrl, "controller",
             {"lambda1", "lambda2", "v_ref", "phi_v", "phi_d"},
             {"saturation"});
  c.controller.lambda1 = get_number(ctrl, "controller", "lambda1");
  c.controller.lambda2 = get_number(ctrl, "controller", "lambda2");
  c.controller.v_ref = get_number(ctrl, "controller", "v_ref");
  c.controller.phi_v = funnel_from_json(ctrl.at("phi_v"), "controller.phi_v");
  c.controller.phi_d = funnel_from_json(ctrl.at("phi_d"), "controller.phi_d");
  if (ctrl.contains("saturation")) {
    const json& sat = ctrl.at("saturation");
    check_keys(sat, "controller.saturation", {"u_min", "u_max"});
    c.controller.saturation =
        Saturation{get_number(sat, "controller.saturation", "u_min"),
                   get_number(sat, "controller.saturation", "u_max")};
  }

  const json& leader = doc.at("leader");
  check_keys(leader, "leader", {"x0", "v0", "segments"});
  if (!leader.at("segments").is_array()) {
    fail("leader.segments: expected an array");
  }
  std::vector<LeaderSegment> segments;
  int index = 0;
  for (const json& seg : leader.at("segments")) {
    const std::string section = "leader.segments[" + std::to_string(index) +
                                "]";
    check_keys(seg, section, {"duration", "accel"});
    segments.push_back(LeaderSegment{get_number(seg, section, "duration"),
                                     get_number(seg, section, "accel")});
    ++index;
  }
  try {
    c.leader = LeaderProfile(get_number(leader, "leader", "x0"),
                             get_number(leader, "leader", "v0"), segments);
  } catch (const std::invalid_argument& e) {
    fail(std::string("leader: ") + e.what());
  }

  const json& init = doc.at("init");
  check_keys(init, "init", {"t", "x", "v"});
  c.init.t = get_number(init, "init", "t");
  c.init.x = get_number(init, "init", "x");
  c.init.v = get_number(init, "init", "v");

  if (!doc.at("t_end").is_number()) {
    fail("scenario.t_end: expected a number");
  }
  c.t_end = doc.at("t_end").get<double>();

  const json& integ = doc.at("integrator");
  check_keys(integ, "integrator",
             {"rel_tol", "abs_tol", "h_init", "h_min", "h_max", "output_dt"});
  c.integ.rel_tol = get_number(integ, "integrator", "rel_tol");
  c.integ.abs_tol = get_number(integ, "integrator", "abs_tol");
  c.integ.h_init = get_number(integ, "integrator", "h_init");
  c.integ.h_min = get_number(integ, "integrator", "h_min");
  c.integ.h_max = get_number(integ, "integrator", "h_max");
  c.integ.output_dt = get_number(integ, "integrator", "output_dt");

  return c;
}

ScenarioConfig parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    fail(path + ": cannot open file");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(path + ": invalid JSON: " + e.what());
  }
  try {
    return scenario_from_json(doc);
  } catch (const ScenarioIoError& e) {
    fail(path + ": " + e.what());
  }
}

ScenarioConfig load_scenario(const std::string& path) {
  ScenarioConfig c = parse_scenario(path);
  const std::vector<std::string> violations = validate_scenario(c);
  if (!violations.empty()) {
    std::ostringstream message;
    message << path << ": invalid scenario:";
    for (const std::string& violation : violations) {
      message << "\n  - " << violation;
    }
    fail(message.str());
  }
  return c;
}

void save_scenario(const ScenarioConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    fail(path + ": cannot open file for writing");
  }
  out << scenario_to_json(config).dump(2) << "\n";
  if (!out) {
    fail(path + ": write failed");
  }
}

std::string config_digest(const ScenarioConfig& config) {
  const std::string canonical = scenario_to_json(config).dump();
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a offset basis
  for (const unsigned char byte : canonical) {
    h ^= byte;
    h *= 1099511628211ULL;  // FNV-1a prime
  }
  static const char* kHex = "0123456789abcdef";
  std::string digest(16, '0');
  for (int i = 15; i >= 0; --i) {
    digest[i] = kHex[h & 0xF];
    h >>= 4;
  }
  return digest;
}

}  // namespace fcc
