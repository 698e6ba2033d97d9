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

#ifndef UNICYCLE_DYNAMICS_STATE_HPP_
#define UNICYCLE_DYNAMICS_STATE_HPP_

#include <Eigen/Core>

namespace unicycle::dynamics {

using Vector5 = Eigen::Matrix<double, 5, 1>;
using Vector7 = Eigen::Matrix<double, 7, 1>;
using Vector12 = Eigen::Matrix<double, 12, 1>;
using Matrix5 = Eigen::Matrix<double, 5, 5>;

// Full state in path-following coordinates. The first seven entries form the
// lateral subsystem, the last five the longitudinal one.
struct State {
  double omega1 = 0.0;       // tilt rate
  double sigma_r = 0.0;      // lateral-mass pseudovelocity
  double r = 0.0;            // lateral-mass position
  double theta = 0.0;        // tilt
  double omega3 = 0.0;
  double chi = 0.0;          // heading error
  double eps = 0.0;          // lateral error
  double omega2 = 0.0;
  double sigma_gamma = 0.0;  // pendulum pseudovelocity
  double gamma = 0.0;        // pendulum angle
  double phi = 0.0;          // wheel pitch
  double s = 0.0;            // arc length of the path-following point

  static constexpr int kSize = 12;
  static constexpr const char* kNames[kSize] = {
      "omega1", "sigma_r", "r",     "theta",       "omega3", "chi",
      "eps",    "omega2",  "sigma_gamma", "gamma", "phi",    "s"};

  Vector12 ToVector() const;
  static State FromVector(const Vector12& x);

  // Straight rolling at constant pitch rate, upright, on the path.
  static State StraightRolling(double phidot, double R);
};

// Pseudovelocities in the order [omega1 omega2 omega3 sigma_r sigma_gamma].
Vector5 PseudovelocitiesOf(const State& x);

struct Input {
  double F = 0.0;  // lateral actuator force, N
  double T = 0.0;  // pendulum torque, N m
};

}  // namespace unicycle::dynamics

#endif  // UNICYCLE_DYNAMICS_STATE_HPP_
