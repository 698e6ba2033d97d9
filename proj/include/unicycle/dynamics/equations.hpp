// Copyright 2026 The Unicycle Lab Authors
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

#ifndef UNICYCLE_DYNAMICS_EQUATIONS_HPP_
#define UNICYCLE_DYNAMICS_EQUATIONS_HPP_

#include "unicycle/dynamics/params.hpp"
#include "unicycle/dynamics/state.hpp"
#include "unicycle/planner/path_plan.hpp"

namespace unicycle::dynamics {

// Tilt margin below pi/2 and the path-singularity band on 1 - kappa eps.
inline constexpr double kTiltMargin = 1e-2;
inline constexpr double kPathSingularBand = 1e-6;

// The part of the configuration the dynamical equations depend on.
struct Configuration {
  double theta = 0.0;
  double r = 0.0;
  double gamma = 0.0;

  static Configuration Of(const State& x) { return {x.theta, x.r, x.gamma}; }
};

// Throws kTiltSingular when |theta| >= pi/2 - kTiltMargin.
void CheckTilt(double theta);

// Generalized mass matrix of M(q) sigma_dot + C(q, sigma) = Pi(q, u).
Matrix5 MassMatrix(const UnicycleParams& p, const Configuration& q);
Vector5 InertialVector(const UnicycleParams& p, const Configuration& q,
                       const Vector5& sigma);
Vector5 PseudoforceVector(const UnicycleParams& p, const Configuration& q,
                          const Input& u);
// sigma_dot = M^-1 (Pi - C), dense LU solve.
Vector5 PseudoAccel(const UnicycleParams& p, const Configuration& q,
                    const Vector5& sigma, const Input& u);

// Rates (s, eps, chi, theta, phi, r, gamma) of the path-following kinematics
// for path curvature `kappa` at the current arc length.
Vector7 PathKinematics(const UnicycleParams& p, const State& x, double kappa);
Vector7 PathKinematics(const UnicycleParams& p, const State& x,
                       const planner::PathPlan& plan);

// Time derivative of the full state in State order.
Vector12 Rhs(const UnicycleParams& p, const State& x, const Input& u,
             double kappa);
Vector12 Rhs(const UnicycleParams& p, const State& x, const Input& u,
             const planner::PathPlan& plan);

}  // namespace unicycle::dynamics

#endif  // UNICYCLE_DYNAMICS_EQUATIONS_HPP_
