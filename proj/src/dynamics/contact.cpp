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

#include "unicycle/dynamics/contact.hpp"

#include <cmath>
#include <sstream>

#include "unicycle/dynamics/equations.hpp"
#include "unicycle/error.hpp"

namespace unicycle::dynamics {

Eigen::Matrix3d T01(double psi) {
  const double c = std::cos(psi), s = std::sin(psi);
  Eigen::Matrix3d t;
  t << c, -s, 0, s, c, 0, 0, 0, 1;
  return t;
}

Eigen::Matrix3d T12(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix3d t;
  t << 1, 0, 0, 0, c, -s, 0, s, c;
  return t;
}

Eigen::Matrix3d T23(double gamma) {
  const double c = std::cos(gamma), s = std::sin(gamma);
  Eigen::Matrix3d t;
  t << c, 0, s, 0, 1, 0, -s, 0, c;
  return t;
}

double RequiredFriction(double Kx, double Ky, double Kz) {
  if (!(Kz > 0.0)) {
    std::ostringstream msg;
    msg << "wheel lifts off: normal force " << Kz << " N";
    throw Error(ErrorCode::kLiftOff, msg.str());
  }
  return std::hypot(Kx, Ky) / Kz;
}

ContactForce ContactForceFrom(const UnicycleParams& p, const State& x,
                              const Vector5& sigma_dot) {
  CheckTilt(x.theta);
  const double m = p.m, m1 = p.m1, m2 = p.m2, h = p.h, R = p.R, r = x.r;
  const double s = std::sin(x.gamma), c = std::cos(x.gamma);
  const double st = std::sin(x.theta), ct = std::cos(x.theta);
  const double tn = st / ct;
  const double w1 = x.omega1, w2 = x.omega2, w3 = x.omega3;
  const double sr = x.sigma_r, sg = x.sigma_gamma;
  const double d1 = sigma_dot[0], d2 = sigma_dot[1], d3 = sigma_dot[2];
  const double dr = sigma_dot[3], dg = sigma_dot[4];
  const double lever = R + h * c;

  ContactForce K;
  K.Kx = m2 * s / h * (3 * w2 * sg * R * c - 2 * w2 * w2 * R * R * c * c - sg * sg) -
         m1 * (d3 * r + 2 * w3 * sr) + d2 * (m * R + m1 * R + m2 * R * s * s) +
         m2 * (dg * c - w2 * w3 * R * s * c * tn - w3 * w3 * h * s) +
         w1 * w3 * (m * R + m1 * (r * tn - R) + m2 * lever);
  K.Ky = m2 * st / h *
             (w2 * sg * R * (3 * s * s - 2) + sg * sg * c +
              w2 * w2 * R * R * c * (1 - 2 * s * s)) -
         d1 * (m * R + m1 * r * tn + m2 * lever) * ct +
         w1 * w1 * (m * R * st - m1 * (R * st + r * ct) + m2 * lever * st) -
         w3 * w3 * (m1 * r * (st * tn + ct) + m2 * h * st * c) +
         w2 * w3 * (m * R / ct + m1 * R * (st * tn + ct) +
                    m2 * R * (c * c * st * tn - (1 - 2 * s * s) * ct)) +
         m1 * (dr * ct - 2 * sr * w1 * st) +
         m2 * (dg * s * st - d2 * R * s * st * c + d3 * h * s * ct -
               2 * w1 * w2 * R * s * c * ct - 2 * w1 * w3 * h * s * st +
               2 * w1 * sg * s * ct + 2 * w3 * sg * c * ct);
  K.Kz = m2 * ct / h *
             (w2 * w2 * R * R * (2 * s * s - 1) * c - sg * sg * c +
              w2 * sg * R * (2 - 3 * s * s)) -
         d1 * (m * R * st - m1 * r * ct + m2 * lever * st) -
         w1 * w1 * (m * R - m1 * (R - r * tn) + m2 * lever) * ct +
         m1 * (dr * st + 2 * sr * w1 * ct) +
         m2 * (d2 * R * s * c * ct + d3 * h * s * st - dg * s * ct -
               w3 * w3 * h * st * c * tn - 2 * w1 * w2 * R * s * st * c +
               2 * w1 * sg * s * st + w1 * w3 * h * (ct - st * tn) * s +
               2 * w3 * sg * st * c + w2 * w3 * R * (3 * s * s - 2) * st) +
         (m + m1 + m2) * p.g;
  K.mu_required = RequiredFriction(K.Kx, K.Ky, K.Kz);
  return K;
}

ContactForce ComputeContactForce(const UnicycleParams& p, const State& x,
                                 const Input& u) {
  return ContactForceFrom(
      p, x, PseudoAccel(p, Configuration::Of(x), PseudovelocitiesOf(x), u));
}

ActuatorPowers ComputeActuatorPowers(const UnicycleParams& p, const State& x,
                                     const Input& u) {
  ActuatorPowers out;
  out.P_F = -(x.omega1 * p.R + x.sigma_r) * u.F;
  out.P_T = u.T / p.h *
            (x.omega2 * (p.R * std::cos(x.gamma) + p.h) - x.sigma_gamma);
  return out;
}

double TotalEnergy(const UnicycleParams& p, const State& x) {
  CheckTilt(x.theta);
  const double R = p.R, h = p.h;
  const double s = std::sin(x.gamma), c = std::cos(x.gamma);
  const double st = std::sin(x.theta), ct = std::cos(x.theta);
  const double w1 = x.omega1, w2 = x.omega2, w3 = x.omega3;

  // Wheel: centre speed R |(w1, w2)|, inertia mR^2/4 diag(1, 2, 1) in F2.
  const double wheel = 0.5 * p.m * R * R * (w1 * w1 + w2 * w2) +
                       0.125 * p.m * R * R * (w1 * w1 + 2 * w2 * w2 + w3 * w3);
  const Eigen::Vector3d vA(w2 * R - w3 * x.r, x.sigma_r, w1 * x.r);
  const Eigen::Vector3d vB(x.sigma_gamma, -w1 * (R + h * c) + w3 * h * s,
                           w2 * R * s);
  const double kinetic =
      wheel + 0.5 * p.m1 * vA.squaredNorm() + 0.5 * p.m2 * vB.squaredNorm();

  const double zC = R * ct;
  const double zA = zC + x.r * st;
  const double zB = (R + h * c) * ct;
  return kinetic + p.g * (p.m * zC + p.m1 * zA + p.m2 * zB);
}

}  // namespace unicycle::dynamics
