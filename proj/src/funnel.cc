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

#include "fcc/funnel.h"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace fcc {

FunnelSpec::FunnelSpec()
    : phi_fn_(constant_signal(1.0)),
      psi_fn_(constant_signal(1.0)),
      phi_deriv_bound_(0.0),
      allows_zero_at_origin_(false),
      shape_(Shape::kConstant),
      param_phi_(1.0) {}

FunnelSpec FunnelSpec::constant(double phi_value) {
  if (!(phi_value > 0.0) || !std::isfinite(phi_value)) {
    throw std::invalid_argument("constant funnel requires phi > 0");
  }
  FunnelSpec f;
  f.phi_fn_ = constant_signal(phi_value);
  f.psi_fn_ = constant_signal(1.0 / phi_value);
  f.phi_deriv_bound_ = 0.0;
  f.allows_zero_at_origin_ = false;
  f.shape_ = Shape::kConstant;
  f.param_phi_ = phi_value;
  return f;
}

FunnelSpec FunnelSpec::exponential_boundary(double a, double rate,
                                            double floor) {
  if (!(a > 0.0) || !(floor > 0.0) || rate < 0.0 || !std::isfinite(a) ||
      !std::isfinite(rate) || !std::isfinite(floor)) {
    throw std::invalid_argument(
        "exponential boundary requires a > 0, floor > 0, rate >= 0");
  }
  FunnelSpec f;
  f.phi_fn_ = [a, rate, floor](double t) {
    return 1.0 / (a * std::exp(-rate * t) + floor);
  };
  f.psi_fn_ = [a, rate, floor](double t) {
    return a * std::exp(-rate * t) + floor;
  };
  // |phi'| = a*rate*exp(-rate*t) / psi^2 and psi^2 >= 4*a*exp(-rate*t)*floor
  // by AM-GM, so rate/(4*floor) bounds the derivative for all t >= 0.
  f.phi_deriv_bound_ = rate / (4.0 * floor);
  f.allows_zero_at_origin_ = false;
  f.shape_ = Shape::kExponentialBoundary;
  f.param_a_ = a;
  f.param_rate_ = rate;
  f.param_floor_ = floor;
  return f;
}

FunnelSpec FunnelSpec::from_callable(TimeFn phi, double phi_deriv_bound,
                                     bool allows_zero_at_origin) {
  FunnelSpec f;
  f.phi_fn_ = std::move(phi);
  f.psi_fn_ = [fn = f.phi_fn_](double t) { return 1.0 / fn(t); };
  f.phi_deriv_bound_ = phi_deriv_bound;
  f.allows_zero_at_origin_ = allows_zero_at_origin;
  f.shape_ = Shape::kCustom;
  return f;
}

double FunnelSpec::boundary(double t) const {
  if (phi_fn_(t) == 0.0) {
    throw BoundaryPoleError("funnel boundary undefined where phi(t) = 0");
  }
  return psi_fn_(t);
}

bool FunnelSpec::in_funnel(double t, double e) const {
  return phi_fn_(t) * std::abs(e) < 1.0;
}

double FunnelSpec::gain(double t, double e) const {
  const double p = phi_fn_(t) * e;
  const double denom = 1.0 - p * p;
  if (!(denom > 0.0)) {
    throw SingularGainError("funnel gain singular: phi(t)*|e| >= 1");
  }
  return 1.0 / denom;
}

double FunnelSpec::margin(double t, double e) const { return boundary(t) - e; }

}  // namespace fcc
