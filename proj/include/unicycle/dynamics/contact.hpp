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

#ifndef UNICYCLE_DYNAMICS_CONTACT_HPP_
#define UNICYCLE_DYNAMICS_CONTACT_HPP_

#include <Eigen/Core>

#include "unicycle/dynamics/params.hpp"
#include "unicycle/dynamics/state.hpp"

namespace unicycle::dynamics {

// Frame rotations: F1 yawed by psi, F2 tilted by theta about x1, F3 swung by
// gamma about y2. T_ij maps components in F_j to components in F_i.
Eigen::Matrix3d T01(double psi);
Eigen::Matrix3d T12(double theta);
Eigen::Matrix3d T23(double gamma);

// Ground reaction on the wheel resolved in F1.
struct ContactForce {
  double Kx = 0.0;
  double Ky = 0.0;
  double Kz = 0.0;
  double mu_required = 0.0;
};

// Contact force for given pseudo-accelerations. Throws kLiftOff if Kz <= 0.
ContactForce ContactForceFrom(const UnicycleParams& p, const State& x,
                              const Vector5& sigma_dot);
// Same, with sigma_dot from the equations of motion under input u.
ContactForce ComputeContactForce(const UnicycleParams& p, const State& x,
                                 const Input& u);

// sqrt(Kx^2 + Ky^2) / Kz; throws kLiftOff if Kz <= 0.
double RequiredFriction(double Kx, double Ky, double Kz);

struct ActuatorPowers {
  double P_F = 0.0;
  double P_T = 0.0;
};

ActuatorPowers ComputeActuatorPowers(const UnicycleParams& p, const State& x,
                                     const Input& u);

// Kinetic plus gravitational energy with zero height at the ground.
double TotalEnergy(const UnicycleParams& p, const State& x);

}  // namespace unicycle::dynamics

#endif  // UNICYCLE_DYNAMICS_CONTACT_HPP_
