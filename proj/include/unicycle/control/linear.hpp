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

#ifndef UNICYCLE_CONTROL_LINEAR_HPP_
#define UNICYCLE_CONTROL_LINEAR_HPP_

#include <Eigen/Core>
#include <array>
#include <complex>

#include "unicycle/dynamics/params.hpp"
#include "unicycle/dynamics/state.hpp"

namespace unicycle::control {

using dynamics::UnicycleParams;

// Linearization of the lateral states (omega1, sigma_r, r, theta, omega3, chi,
// eps) about straight rolling at pitch rate phidot_star.
struct LateralLTI {
  Eigen::Matrix<double, 7, 7> A;
  Eigen::Matrix<double, 7, 1> B;
  Eigen::Matrix<double, 6, 7> C;  // outputs omega1, sigma_r, chi, theta, r, eps
  double a13, a14, a15, a24, a25, a31, a51, a76, b11, b21, c1;
  double phidot_star;
  double a0, a2;  // lambda^4 + a2 lambda^2 + a0 factor of the char. polynomial
};

// Linearization of (omega2, sigma_gamma, gamma, phi, s); independent of the
// pitch rate.
struct LongitudinalLTI {
  Eigen::Matrix<double, 5, 5> A;
  Eigen::Matrix<double, 5, 1> B;
  Eigen::Matrix<double, 4, 5> C;  // outputs omega2, sigma_gamma, gamma, s
  double a8A, a9A, aA8, aA9, aC8, b82, b92;
};

// Throws kInvalidArgument for phidot_star < 0 or invalid parameters.
LateralLTI LateralMatrices(const UnicycleParams& p, double phidot_star);
LongitudinalLTI LongitudinalMatrices(const UnicycleParams& p);

struct LateralRoots {
  std::array<std::complex<double>, 4> roots;  // the nonzero quartet
  int zero_multiplicity = 3;                  // structural roots at 0
  double a0 = 0.0;
  double a2 = 0.0;
};

LateralRoots ComputeLateralRoots(const UnicycleParams& p, double phidot_star);

// Positive member of the longitudinal pair +-lambda; the remaining three
// roots are structural zeros.
double LongitudinalRoot(const UnicycleParams& p);

struct CriticalSpeeds {
  double v1 = 0.0;  // below: the wheel topples
  double v2 = 0.0;  // (v2, v3): growing oscillations
  double v3 = 0.0;
};

// Wheel-centre speeds R * phidot at which the lateral root structure changes.
// v2 and v3 bracket the band where a2^2 - 4 a0 < 0 on phidot in (0, 20];
// throws kNoOscillatoryBand if no such band exists.
CriticalSpeeds ComputeCriticalSpeeds(const UnicycleParams& p);

struct ControllabilityReport {
  int state_rank = 0;
  int output_rank = 0;
};

// Numerical ranks of [B AB A^2B ...] and [CB CAB ...]; singular values below
// 1e-8 of the largest count as zero.
ControllabilityReport Controllability(const Eigen::MatrixXd& A,
                                      const Eigen::MatrixXd& B,
                                      const Eigen::MatrixXd& C);
ControllabilityReport Controllability(const LateralLTI& lti);
ControllabilityReport Controllability(const LongitudinalLTI& lti);

// Coefficients of det(lambda I - A), lowest degree first, leading 1 last.
Eigen::VectorXd CharacteristicPolynomial(const Eigen::MatrixXd& A);

struct Gains {
  // Lateral: F = D_theta w1 + D_r sigma_r + P_r r + P_theta theta
  //              + P_chi chi + P_eps eps.
  double D_theta = 0.0, D_r = 0.0, P_r = 0.0, P_theta = 0.0, P_chi = 0.0,
         P_eps = 0.0;
  // Longitudinal: T = D_phi w2^ + D_gamma sigma_gamma^ + P_gamma gamma + P_s s^.
  double D_phi = 0.0, D_gamma = 0.0, P_gamma = 0.0, P_s = 0.0;
  double target_pole = 0.0;
  double scheduled_phidot = 0.0;
  double beta = 0.0;  // free seventh lateral pole

  // Gain rows matching the output matrices C of the two subsystems.
  Eigen::Matrix<double, 1, 6> LateralRow() const;
  Eigen::Matrix<double, 1, 4> LongitudinalRow() const;
};

// Longitudinal gains placing (lambda - target)^4 lambda.
void PlaceLongitudinal(const LongitudinalLTI& lti, double target_pole, Gains* gains);
// Lateral gains placing (lambda - target)^6 (lambda - beta), beta free.
void PlaceLateral(const LateralLTI& lti, double target_pole, Gains* gains);

// Both subsystems at once. Throws kInvalidArgument for target_pole >= 0,
// kPlacementSingular when the matching system is rank deficient and
// kUnstableResidualPole when beta >= 0.
Gains SynthesizeGains(const UnicycleParams& p, double phidot_star,
                      double target_pole);

struct Desired {
  double s_des = 0.0;
  double v_des = 0.0;
};

// Output feedback with the error signals measured against the reference.
dynamics::Input Feedback(const UnicycleParams& p, const dynamics::State& x,
                         const Desired& desired, const Gains& gains);

}  // namespace unicycle::control

#endif  // UNICYCLE_CONTROL_LINEAR_HPP_
