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

#ifndef FCC_FUNNEL_H_
#define FCC_FUNNEL_H_

#include <stdexcept>
#include <string>

#include "fcc/dynamics.h"

namespace fcc {

// boundary() was requested at a time where phi vanishes, so the funnel
// imposes no bound there and 1/phi has a pole.
struct BoundaryPoleError : std::domain_error {
  explicit BoundaryPoleError(const std::string& what)
      : std::domain_error(what) {}
};

// gain() was requested at or beyond the funnel boundary (phi*|e| >= 1),
// where 1/(1 - phi^2 e^2) is singular or negative.
struct SingularGainError : std::domain_error {
  explicit SingularGainError(const std::string& what)
      : std::domain_error(what) {}
};

// A performance funnel around zero error: at time t the error must stay
// strictly inside (-1/phi(t), 1/phi(t)).  phi is non-negative and bounded;
// phi(t) = 0 (typically at t = 0) means the error is unconstrained there.
//
// The associated gain 1/(1 - phi(t)^2 e^2) equals 1 at zero error and
// grows without bound as phi(t)|e| approaches 1; a controller that feeds
// back -gain*e therefore pushes arbitrarily hard near the boundary, which
// is what keeps the error inside the funnel.
class FunnelSpec {
 public:
  enum class Shape { kConstant, kExponentialBoundary, kCustom };

  FunnelSpec();  // constant phi = 1

  // Constant phi, i.e. a constant boundary 1/phi_value.
  static FunnelSpec constant(double phi_value);

  // Boundary psi(t) = a*exp(-rate*t) + floor with a, floor > 0 and
  // rate >= 0; phi is its reciprocal.  The boundary starts wide and
  // tightens exponentially to the floor.
  static FunnelSpec exponential_boundary(double a, double rate, double floor);

  // Arbitrary phi.  phi_deriv_bound is a caller-supplied bound on |phi'|;
  // allows_zero_at_origin declares that phi(0) = 0 (boundary() then has a
  // pole at t = 0).
  static FunnelSpec from_callable(TimeFn phi, double phi_deriv_bound,
                                  bool allows_zero_at_origin);

  double phi(double t) const { return phi_fn_(t); }

  // Funnel boundary psi(t) = 1/phi(t).  Throws BoundaryPoleError if
  // phi(t) = 0.
  double boundary(double t) const;

  // True iff phi(t)*|e| < 1 (strict).  With phi(t) = 0 every error is
  // inside the funnel.
  bool in_funnel(double t, double e) const;

  // Gain 1/(1 - phi(t)^2 e^2).  Requires in_funnel(t, e); throws
  // SingularGainError otherwise.
  double gain(double t, double e) const;

  // Distance from the error to the upper boundary, psi(t) - e.  Throws
  // BoundaryPoleError if phi(t) = 0.
  double margin(double t, double e) const;

  double phi_deriv_bound() const { return phi_deriv_bound_; }
  bool allows_zero_at_origin() const { return allows_zero_at_origin_; }

  // Shape descriptor and parameters, used by scenario serialization.
  // Parameter accessors are only meaningful for the matching shape.
  Shape shape() const { return shape_; }
  double param_phi() const { return param_phi_; }
  double param_a() const { return param_a_; }
  double param_rate() const { return param_rate_; }
  double param_floor() const { return param_floor_; }

 private:
  TimeFn phi_fn_;
  TimeFn psi_fn_;  // exact boundary where available, else 1/phi
  double phi_deriv_bound_ = 0.0;
  bool allows_zero_at_origin_ = false;
  Shape shape_ = Shape::kCustom;
  double param_phi_ = 0.0;
  double param_a_ = 0.0;
  double param_rate_ = 0.0;
  double param_floor_ = 0.0;
};

}  // namespace fcc

#endif  // FCC_FUNNEL_H_
