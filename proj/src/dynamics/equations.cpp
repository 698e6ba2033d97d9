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

#include "unicycle/dynamics/equations.hpp"

#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <sstream>

#include "unicycle/error.hpp"

namespace unicycle::dynamics {

void CheckTilt(double theta) {
  if (!(std::abs(theta) < 0.5 * std::numbers::pi - kTiltMargin)) {
    std::ostringstream msg;
    msg << "tilt angle " << theta << " rad too close to horizontal";
    throw Error(ErrorCode::kTiltSingular, msg.str());
  }
}

Matrix5 MassMatrix(const UnicycleParams& p, const Configuration& q) {
  const double sg = std::sin(q.gamma), cg = std::cos(q.gamma);
  const double lever = p.R + p.h * cg;
  Matrix5 M = Matrix5::Zero();
  M(0, 0) = 1.25 * p.m * p.R * p.R + p.m1 * q.r * q.r + p.m2 * lever * lever;
  M(0, 2) = M(2, 0) = -p.m2 * p.h * lever * sg;
  M(1, 1) = p.R * p.R * (1.5 * p.m + p.m1 + p.m2 * sg * sg);
  M(1, 2) = M(2, 1) = -p.m1 * p.R * q.r;
  M(2, 2) = 0.25 * p.m * p.R * p.R + p.m2 * p.h * p.h * sg * sg +
            p.m1 * q.r * q.r;
  M(3, 3) = p.m1;
  M(4, 4) = p.m2;
  return M;
}

Vector5 InertialVector(const UnicycleParams& p, const Configuration& q,
                       const Vector5& sigma) {
  CheckTilt(q.theta);
  const double m = p.m, m1 = p.m1, m2 = p.m2, h = p.h, R = p.R, r = q.r;
  const double s = std::sin(q.gamma), c = std::cos(q.gamma);
  const double tn = std::tan(q.theta);
  const double w1 = sigma[0], w2 = sigma[1], w3 = sigma[2];
  const double sr = sigma[3], sg = sigma[4];
  Vector5 C;
  C[0] = 0.25 * (4 * w1 * w1 * m1 * R * r + 8 * w1 * sr * m1 * r +
                 w1 * w2 * m2 * ((8 * R * R * c + 8 * R * h) * s - 8 * R * h * s * s * s) -
                 w1 * sg * m2 * (8 * R + 8 * h * c) * s +
                 w1 * w3 * m2 * (4 * R * h + 4 * h * h * c) * s * tn -
                 w3 * sg * m2 * (8 * R * c + 8 * h * c * c) +
                 w3 * w3 * (m * R * R + 4 * m1 * r * r +
                            m2 * (4 * R * h * c + 4 * h * h * c * c)) * tn -
                 w2 * w3 * (6 * m * R * R + 4 * m1 * R * r * tn -
                            m2 * (4 * R * R + 4 * R * h * c) * (c * c - s * s)));
  C[1] = (-w1 * w1 * m2 * R * h * (R + h * c) * s * c -
          w2 * w2 * m2 * R * R * R * s * c * c - w3 * w3 * m2 * R * h * h * s * s * s -
          sg * sg * m2 * R * s +
          w1 * w3 * (m * h * R * R - m1 * R * R * h + m2 * R * R * h * s * s +
                     2 * m2 * R * h * h * s * s * c + m1 * R * h * r * tn) -
          w2 * w3 * m2 * R * R * h * s * c * tn + 2 * w2 * sg * m2 * R * R * s * c -
          2 * w3 * sr * m1 * R * h) /
         h;
  C[2] = 0.25 * (-4 * w3 * w3 * m2 * h * h * s * c * tn +
                 w1 * w2 * (2 * m * R * R - 8 * m2 * R * h * s * s * c) +
                 w1 * w3 * (-m * R * R * tn + 4 * m1 * R * r -
                            4 * m2 * h * h * s * s * tn - 4 * m1 * r * r * tn) +
                 8 * w1 * sg * m2 * h * s * s +
                 w2 * w3 * (8 * m2 * R * h * s * s * s - 4 * m2 * R * h * s) +
                 8 * w3 * sr * m1 * r + 8 * w3 * sg * m2 * h * s * c);
  C[3] = m1 * R * w2 * w3 - m1 * w1 * w1 * r - m1 * w3 * w3 * r;
  C[4] = (w1 * w1 * (m2 * R * h * s + m2 * h * h * s * c) -
          w2 * w2 * m2 * R * R * s * c - w3 * w3 * m2 * h * h * s * c +
          w1 * w3 * (m2 * R * h * c - 2 * m2 * h * h * s * s + m2 * h * h) +
          w2 * sg * m2 * R * s) /
         h;
  return C;
}

Vector5 PseudoforceVector(const UnicycleParams& p, const Configuration& q,
                          const Input& u) {
  const double s = std::sin(q.gamma), c = std::cos(q.gamma);
  const double st = std::sin(q.theta), ct = std::cos(q.theta);
  const double g = p.g;
  Vector5 Pi;
  Pi[0] = -u.F * p.R + p.m * g * p.R * st - p.m1 * g * q.r * ct +
          p.m2 * g * (p.R + p.h * c) * st;
  Pi[1] = u.T / p.h * (p.R * c + p.h) - p.m2 * g * p.R * s * c * ct;
  Pi[2] = -p.m2 * g * p.h * s * st;
  Pi[3] = -u.F - p.m1 * g * st;
  Pi[4] = -u.T / p.h + p.m2 * g * s * ct;
  return Pi;
}

Vector5 PseudoAccel(const UnicycleParams& p, const Configuration& q,
                    const Vector5& sigma, const Input& u) {
  const Vector5 rhs = PseudoforceVector(p, q, u) - InertialVector(p, q, sigma);
  return MassMatrix(p, q).partialPivLu().solve(rhs);
}

Vector7 PathKinematics(const UnicycleParams& p, const State& x, double kappa) {
  CheckTilt(x.theta);
  const double denom = 1.0 - kappa * x.eps;
  if (!(std::abs(denom) > kPathSingularBand)) {
    std::ostringstream msg;
    msg << "path-following singularity: kappa * eps = " << kappa * x.eps;
    throw Error(ErrorCode::kPathSingular, msg.str());
  }
  const double tn = std::tan(x.theta);
  const double phidot = x.omega2 - x.omega3 * tn;
  const double ground = phidot * p.R;
  const double sdot = ground * std::cos(x.chi) / denom;
  Vector7 d;
  d[0] = sdot;
  d[1] = ground * std::sin(x.chi);
  d[2] = x.omega3 / std::cos(x.theta) - kappa * sdot;
  d[3] = x.omega1;
  d[4] = phidot;
  d[5] = x.sigma_r + x.omega1 * p.R;
  d[6] = (x.sigma_gamma - x.omega2 * p.R * std::cos(x.gamma)) / p.h -
         x.omega3 * tn;
  return d;
}

Vector7 PathKinematics(const UnicycleParams& p, const State& x,
                       const planner::PathPlan& plan) {
  return PathKinematics(p, x, plan.CurvatureClamped(x.s));
}

Vector12 Rhs(const UnicycleParams& p, const State& x, const Input& u,
             double kappa) {
  const Vector7 k = PathKinematics(p, x, kappa);
  const Vector5 a =
      PseudoAccel(p, Configuration::Of(x), PseudovelocitiesOf(x), u);
  Vector12 d;
  d << a[0], a[3], k[5], k[3], a[2], k[2], k[1], a[1], a[4], k[6], k[4], k[0];
  return d;
}

Vector12 Rhs(const UnicycleParams& p, const State& x, const Input& u,
             const planner::PathPlan& plan) {
  return Rhs(p, x, u, plan.CurvatureClamped(x.s));
}

}  // namespace unicycle::dynamics
