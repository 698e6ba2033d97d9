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

#ifndef UNICYCLE_TESTS_TEST_SUPPORT_HPP_
#define UNICYCLE_TESTS_TEST_SUPPORT_HPP_

#include <Eigen/Core>
#include <cmath>
#include <functional>

#include "unicycle/dynamics/contact.hpp"
#include "unicycle/dynamics/equations.hpp"

namespace unicycle::testing {

using dynamics::Input;
using dynamics::State;
using dynamics::UnicycleParams;

// Independent reference model in absolute coordinates
//   q = [xC yC psi theta phi r gamma], sigma = [w1 w2 w3 sr sg].
// Only the pseudo-accelerations are borrowed from the library; positions of
// the three bodies are assembled from rotations written out here.
struct AbsoluteState {
  double xC = 0, yC = 0, psi = 0, theta = 0, phi = 0, r = 0, gamma = 0;
  double w1 = 0, w2 = 0, w3 = 0, sr = 0, sg = 0;
};

inline Eigen::Matrix3d Rz(double a) {
  Eigen::Matrix3d t;
  t << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return t;
}
inline Eigen::Matrix3d Rx(double a) {
  Eigen::Matrix3d t;
  t << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
  return t;
}
inline Eigen::Matrix3d Ry(double a) {
  Eigen::Matrix3d t;
  t << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
  return t;
}

struct BodyPositions {
  Eigen::Vector3d C, A, B, contact;
};

inline BodyPositions Positions(const UnicycleParams& p, const AbsoluteState& q) {
  const Eigen::Matrix3d t02 = Rz(q.psi) * Rx(q.theta);
  const Eigen::Matrix3d t03 = t02 * Ry(q.gamma);
  BodyPositions b;
  b.C = Eigen::Vector3d(q.xC, q.yC, p.R * std::cos(q.theta));
  b.A = b.C + t02 * Eigen::Vector3d(0, q.r, 0);
  b.B = b.C + t03 * Eigen::Vector3d(0, 0, p.h);
  b.contact = b.C + t02 * Eigen::Vector3d(0, 0, -p.R);
  return b;
}

inline State PathStateOf(const AbsoluteState& q) {
  State x;
  x.omega1 = q.w1;
  x.sigma_r = q.sr;
  x.r = q.r;
  x.theta = q.theta;
  x.omega3 = q.w3;
  x.omega2 = q.w2;
  x.sigma_gamma = q.sg;
  x.gamma = q.gamma;
  x.phi = q.phi;
  return x;
}

inline dynamics::Vector5 SigmaDot(const UnicycleParams& p, const AbsoluteState& q,
                                  const Input& u) {
  dynamics::Vector5 sigma;
  sigma << q.w1, q.w2, q.w3, q.sr, q.sg;
  return dynamics::PseudoAccel(p, {q.theta, q.r, q.gamma}, sigma, u);
}

inline AbsoluteState Derivative(const UnicycleParams& p, const AbsoluteState& q,
                                const Input& u) {
  const double R = p.R, h = p.h;
  const double tn = std::tan(q.theta);
  AbsoluteState d;
  d.xC = q.w1 * R * std::sin(q.psi) * std::cos(q.theta) + q.w2 * R * std::cos(q.psi);
  d.yC = -q.w1 * R * std::cos(q.psi) * std::cos(q.theta) + q.w2 * R * std::sin(q.psi);
  d.psi = q.w3 / std::cos(q.theta);
  d.theta = q.w1;
  d.phi = q.w2 - q.w3 * tn;
  d.r = q.sr + q.w1 * R;
  d.gamma = q.sg / h - q.w2 * R / h * std::cos(q.gamma) - q.w3 * tn;
  const dynamics::Vector5 a = SigmaDot(p, q, u);
  d.w1 = a[0];
  d.w2 = a[1];
  d.w3 = a[2];
  d.sr = a[3];
  d.sg = a[4];
  return d;
}

inline AbsoluteState Axpy(const AbsoluteState& x, double k, const AbsoluteState& d) {
  return {x.xC + k * d.xC, x.yC + k * d.yC, x.psi + k * d.psi,
          x.theta + k * d.theta, x.phi + k * d.phi, x.r + k * d.r,
          x.gamma + k * d.gamma, x.w1 + k * d.w1, x.w2 + k * d.w2,
          x.w3 + k * d.w3, x.sr + k * d.sr, x.sg + k * d.sg};
}

// Integrates the reference model over `duration` (may be negative).
inline AbsoluteState Advance(const UnicycleParams& p, AbsoluteState q,
                             const Input& u, double duration, int steps) {
  const double dt = duration / steps;
  for (int i = 0; i < steps; ++i) {
    const AbsoluteState k1 = Derivative(p, q, u);
    const AbsoluteState k2 = Derivative(p, Axpy(q, 0.5 * dt, k1), u);
    const AbsoluteState k3 = Derivative(p, Axpy(q, 0.5 * dt, k2), u);
    const AbsoluteState k4 = Derivative(p, Axpy(q, dt, k3), u);
    AbsoluteState sum = Axpy(Axpy(Axpy(k1, 2.0, k2), 2.0, k3), 1.0, k4);
    q = Axpy(q, dt / 6.0, sum);
  }
  return q;
}

// Five-point time derivatives of a vector function of the reference state,
// evaluated along the trajectory through q under constant input u.
struct TimeDerivatives {
  Eigen::VectorXd value, first, second;
};

inline TimeDerivatives Differentiate(
    const UnicycleParams& p, const AbsoluteState& q, const Input& u,
    const std::function<Eigen::VectorXd(const AbsoluteState&)>& f,
    double h = 2e-3, int substeps = 40) {
  const Eigen::VectorXd m2 = f(Advance(p, q, u, -2 * h, 2 * substeps));
  const Eigen::VectorXd m1 = f(Advance(p, q, u, -h, substeps));
  const Eigen::VectorXd z = f(q);
  const Eigen::VectorXd p1 = f(Advance(p, q, u, h, substeps));
  const Eigen::VectorXd p2 = f(Advance(p, q, u, 2 * h, 2 * substeps));
  TimeDerivatives out;
  out.value = z;
  out.first = (m2 - 8 * m1 + 8 * p1 - p2) / (12 * h);
  out.second = (-m2 + 16 * m1 - 30 * z + 16 * p1 - p2) / (12 * h * h);
  return out;
}

// Central-difference Jacobian of rhs with respect to state and input.
inline void RhsJacobian(const UnicycleParams& p, const State& x, double kappa,
                        Eigen::Matrix<double, 12, 12>* A,
                        Eigen::Matrix<double, 12, 2>* B, double e = 1e-6) {
  const dynamics::Vector12 x0 = x.ToVector();
  for (int i = 0; i < 12; ++i) {
    dynamics::Vector12 dp = x0, dm = x0;
    dp[i] += e;
    dm[i] -= e;
    A->col(i) = (dynamics::Rhs(p, State::FromVector(dp), {}, kappa) -
                 dynamics::Rhs(p, State::FromVector(dm), {}, kappa)) /
                (2 * e);
  }
  B->col(0) = (dynamics::Rhs(p, x, {e, 0}, kappa) - dynamics::Rhs(p, x, {-e, 0}, kappa)) / (2 * e);
  B->col(1) = (dynamics::Rhs(p, x, {0, e}, kappa) - dynamics::Rhs(p, x, {0, -e}, kappa)) / (2 * e);
}

}  // namespace unicycle::testing

#endif  // UNICYCLE_TESTS_TEST_SUPPORT_HPP_
