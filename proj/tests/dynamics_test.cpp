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

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "test_support.hpp"
#include "unicycle/dynamics/contact.hpp"
#include "unicycle/dynamics/equations.hpp"
#include "unicycle/error.hpp"

namespace unicycle::dynamics {
namespace {

using std::numbers::pi;
using testing::AbsoluteState;

const UnicycleParams kTable;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

// Random but physically plausible reference state.
AbsoluteState RandomState(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  AbsoluteState q;
  q.xC = 3 * u(rng);
  q.yC = 3 * u(rng);
  q.psi = pi * u(rng);
  q.theta = 0.5 * u(rng);
  q.phi = u(rng);
  q.r = 0.3 * u(rng);
  q.gamma = u(rng);
  q.w1 = u(rng);
  q.w2 = 4 + 2 * u(rng);
  q.w3 = u(rng);
  q.sr = u(rng);
  q.sg = u(rng);
  return q;
}

TEST(ParamsTest, Validation) {
  EXPECT_NO_THROW(kTable.Validate());
  UnicycleParams p;
  p.h = 0.0;
  EXPECT_EQ(CodeOf([&] { p.Validate(); }), ErrorCode::kInvalidArgument);
  p = {};
  p.g = std::nan("");
  EXPECT_EQ(CodeOf([&] { p.Validate(); }), ErrorCode::kInvalidArgument);
}

TEST(StateTest, VectorRoundTrip) {
  Vector12 v;
  for (int i = 0; i < 12; ++i) v[i] = 0.5 * i - 1.0;
  const State x = State::FromVector(v);
  EXPECT_EQ(x.theta, v[3]);
  EXPECT_EQ(x.s, v[11]);
  EXPECT_EQ(x.ToVector(), v);
}

TEST(MassMatrixTest, UprightValues) {
  const Matrix5 M = MassMatrix(kTable, {0.0, 0.0, 0.0});
  EXPECT_NEAR(M(0, 0), 4.05, 1e-14);
  EXPECT_NEAR(M(1, 1), 1.44, 1e-14);
  EXPECT_NEAR(M(2, 2), 0.09, 1e-15);
  EXPECT_EQ(M(3, 3), 10.0);
  EXPECT_EQ(M(4, 4), 10.0);
  EXPECT_EQ(M(0, 2), 0.0);
  EXPECT_EQ(M(1, 2), 0.0);
}

TEST(MassMatrixTest, SwungPendulum) {
  const Matrix5 M = MassMatrix(kTable, {0.0, 0.0, pi / 2});
  EXPECT_NEAR(M(0, 2), -0.9, 1e-14);
  EXPECT_NEAR(M(1, 1), 2.34, 1e-14);
  EXPECT_NEAR(M(2, 2), 0.99, 1e-14);
}

TEST(MassMatrixTest, SymmetricPositiveDefinite) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dg(-pi, pi), dr(-1, 1), dm(0.1, 20);
  for (int i = 0; i < 500; ++i) {
    UnicycleParams p;
    p.m = dm(rng);
    p.m1 = dm(rng);
    p.m2 = dm(rng);
    const Matrix5 M = MassMatrix(p, {0.0, dr(rng), dg(rng)});
    EXPECT_EQ(M, M.transpose());
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix5>(M).eigenvalues().minCoeff(), 0.0);
  }
}

TEST(InertialVectorTest, ZeroAtRest) {
  EXPECT_EQ(InertialVector(kTable, {0.2, 0.1, 0.3}, Vector5::Zero()), Vector5::Zero());
}

TEST(InertialVectorTest, CentripetalLateralMass) {
  Vector5 sigma = Vector5::Zero();
  sigma[2] = 1.0;
  const Vector5 C = InertialVector(kTable, {0.0, 0.1, 0.0}, sigma);
  EXPECT_NEAR(C[3], -1.0, 1e-14);
}

TEST(InertialVectorTest, StraightRollingVanishes) {
  const State x = State::StraightRolling(5.0, kTable.R);
  const Vector5 C = InertialVector(kTable, Configuration::Of(x), PseudovelocitiesOf(x));
  EXPECT_LT(C.norm(), 1e-14);
}

TEST(InertialVectorTest, TiltSingular) {
  EXPECT_EQ(CodeOf([] { InertialVector(kTable, {pi / 2 - 0.005, 0, 0}, Vector5::Ones()); }),
            ErrorCode::kTiltSingular);
}

TEST(InertialVectorTest, QuadraticInPseudovelocities) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const AbsoluteState q = RandomState(rng);
    Vector5 sigma;
    sigma << q.w1, q.w2, q.w3, q.sr, q.sg;
    const Configuration c{q.theta, q.r, q.gamma};
    const Vector5 a = InertialVector(kTable, c, sigma);
    const Vector5 b = InertialVector(kTable, c, 3.0 * sigma);
    EXPECT_LT((b - 9.0 * a).norm(), 1e-11 * (1 + a.norm()));
  }
}

TEST(PseudoforceTest, Examples) {
  EXPECT_EQ(PseudoforceVector(kTable, {}, {}), Vector5::Zero());
  const Vector5 f = PseudoforceVector(kTable, {}, {1.0, 0.0});
  EXPECT_NEAR(f[0], -0.3, 1e-15);
  EXPECT_NEAR(f[3], -1.0, 1e-15);
  EXPECT_EQ(f[1], 0.0);
  EXPECT_EQ(f[2], 0.0);
  EXPECT_EQ(f[4], 0.0);
  const Vector5 t = PseudoforceVector(kTable, {0.1, 0, 0}, {});
  EXPECT_NEAR(t[0], 7.052, 1e-3);
  EXPECT_NEAR(t[3], -9.794, 1e-3);
  EXPECT_EQ(t[1], 0.0);
  EXPECT_EQ(t[2], 0.0);
  EXPECT_EQ(t[4], 0.0);
}

TEST(PseudoAccelTest, EquilibriumAndFalling) {
  const State x = State::StraightRolling(5.0, kTable.R);
  EXPECT_LT(PseudoAccel(kTable, Configuration::Of(x), PseudovelocitiesOf(x), {}).norm(),
            1e-14);
  State tilted = x;
  tilted.theta = 0.1;
  const Vector5 a = PseudoAccel(kTable, Configuration::Of(tilted),
                                PseudovelocitiesOf(tilted), {});
  EXPECT_GT(a[0], 0.0);
  // Upright pendulum and zero r decouple the tilt row.
  EXPECT_NEAR(a[0], PseudoforceVector(kTable, {0.1, 0, 0}, {})[0] / 4.05, 1e-12);
}

TEST(PseudoAccelTest, SolvesTheSystem) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const AbsoluteState q = RandomState(rng);
    Vector5 sigma;
    sigma << q.w1, q.w2, q.w3, q.sr, q.sg;
    const Configuration c{q.theta, q.r, q.gamma};
    const Input u{3.0, -2.0};
    const Vector5 rhs = PseudoforceVector(kTable, c, u) - InertialVector(kTable, c, sigma);
    const Vector5 a = PseudoAccel(kTable, c, sigma, u);
    EXPECT_LT((MassMatrix(kTable, c) * a - rhs).norm(), 1e-10 * rhs.norm());
    const Vector5 doubled = MassMatrix(kTable, c).partialPivLu().solve(2.0 * rhs);
    EXPECT_LT((doubled - 2.0 * a).norm(), 1e-12 * (1 + a.norm()));
  }
}

TEST(PathKinematicsTest, StraightRolling) {
  State x = State::StraightRolling(5.0, kTable.R);
  Vector7 d = PathKinematics(kTable, x, 0.0);
  EXPECT_NEAR(d[0], 1.5, 1e-15);
  EXPECT_EQ(d[1], 0.0);
  EXPECT_EQ(d[2], 0.0);
  EXPECT_EQ(d[4], 5.0);
  EXPECT_NEAR(d[6], 0.0, 1e-15);
  x.chi = 0.1;
  d = PathKinematics(kTable, x, 0.0);
  EXPECT_NEAR(d[1], 1.5 * std::sin(0.1), 1e-15);
  EXPECT_NEAR(d[1], 0.14975, 1e-5);
}

TEST(PathKinematicsTest, Singularities) {
  State x = State::StraightRolling(5.0, kTable.R);
  x.eps = 0.5;
  EXPECT_EQ(CodeOf([&] { PathKinematics(kTable, x, 2.0); }), ErrorCode::kPathSingular);
  EXPECT_NO_THROW(PathKinematics(kTable, x, 1.9));
  x.theta = -1.57;
  EXPECT_EQ(CodeOf([&] { PathKinematics(kTable, x, 0.0); }), ErrorCode::kTiltSingular);
}

TEST(RhsTest, StraightRollingEquilibrium) {
  for (double phidot : {0.5, 5.0, 12.0}) {
    const State x = State::StraightRolling(phidot, kTable.R);
    const Vector12 d = Rhs(kTable, x, {}, 0.0);
    for (int i = 0; i < 12; ++i) {
      if (i == 10) {
        EXPECT_EQ(d[i], phidot);
      } else if (i == 11) {
        EXPECT_NEAR(d[i], phidot * kTable.R, 1e-15);
      } else {
        EXPECT_NEAR(d[i], 0.0, 1e-14) << State::kNames[i];
      }
    }
  }
}

TEST(RhsTest, PendulumFallsAway) {
  State x;
  x.gamma = 0.05;
  const Vector12 d = Rhs(kTable, x, {}, 0.0);
  // sigma_gamma grows with gamma and gamma_dot follows sigma_gamma.
  EXPECT_GT(d[8], 0.0);
}

TEST(RhsTest, AffineInInput) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    State x = testing::PathStateOf(RandomState(rng));
    x.chi = 0.1;
    x.eps = 0.2;
    const double kappa = 0.3;
    const Vector12 d0 = Rhs(kTable, x, {}, kappa);
    const Vector12 d1 = Rhs(kTable, x, {2.0, -1.0}, kappa);
    const Vector12 d2 = Rhs(kTable, x, {4.0, -2.0}, kappa);
    EXPECT_LT((d2 - d0 - 2.0 * (d1 - d0)).norm(), 1e-10 * (1 + d0.norm()));
  }
}

TEST(RhsTest, AgreesWithAbsoluteModelOnCircle) {
  // Constant curvature path: circle of radius rho about (0, rho), starting at
  // the origin heading along +x. The path coordinates of the contact point
  // follow from plain geometry.
  const double rho = 4.0, kappa = 1.0 / rho;
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    AbsoluteState q = RandomState(rng);
    q.psi = 0.2 * (trial - 2);
    q.theta *= 0.2;
    q.w1 *= 0.1;
    q.gamma *= 0.2;
    q.sg = q.w2 * kTable.R + 0.1 * q.sg;
    q.w3 = 0.5 * q.w3 + q.w2 * kTable.R * kappa;
    // Start with the contact point on the path.
    const auto pos = testing::Positions(kTable, q);
    q.xC -= pos.contact.x();
    q.yC -= pos.contact.y();
    State x = testing::PathStateOf(q);
    x.chi = q.psi;
    const double T = 0.5;
    const int n = 2000;
    AbsoluteState qa = q;
    State xs = x;
    for (int i = 0; i < n; ++i) {
      qa = testing::Advance(kTable, qa, {}, T / n, 1);
      const double dt = T / n;
      const Vector12 v = xs.ToVector();
      const Vector12 k1 = Rhs(kTable, xs, {}, kappa);
      const Vector12 k2 = Rhs(kTable, State::FromVector(v + 0.5 * dt * k1), {}, kappa);
      const Vector12 k3 = Rhs(kTable, State::FromVector(v + 0.5 * dt * k2), {}, kappa);
      const Vector12 k4 = Rhs(kTable, State::FromVector(v + dt * k3), {}, kappa);
      xs = State::FromVector(v + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4));
    }
    const Eigen::Vector3d P = testing::Positions(kTable, qa).contact;
    const double dist = std::hypot(P.x(), P.y() - rho);
    const double angle = std::atan2(P.x(), rho - P.y());
    EXPECT_NEAR(xs.eps, rho - dist, 1e-8);
    EXPECT_NEAR(xs.s, rho * angle, 1e-8);
    EXPECT_NEAR(xs.chi, qa.psi - angle, 1e-8);
    EXPECT_NEAR(xs.phi, qa.phi, 1e-10);
    EXPECT_NEAR(xs.gamma, qa.gamma, 1e-10);
  }
}

TEST(FrameTest, Orthonormal) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> a(-pi, pi);
  for (int i = 0; i < 100; ++i) {
    for (const Eigen::Matrix3d& t : {T01(a(rng)), T12(a(rng)), T23(a(rng))}) {
      EXPECT_LT((t * t.transpose() - Eigen::Matrix3d::Identity()).norm(), 1e-14);
      EXPECT_NEAR(t.determinant(), 1.0, 1e-14);
      EXPECT_LT((t.inverse() * t - Eigen::Matrix3d::Identity()).norm(), 1e-14);
    }
  }
}

TEST(ContactForceTest, Rest) {
  const ContactForce K = ComputeContactForce(kTable, State{}, {});
  EXPECT_EQ(K.Kx, 0.0);
  EXPECT_EQ(K.Ky, 0.0);
  EXPECT_NEAR(K.Kz, 235.44, 1e-12);
  EXPECT_EQ(K.mu_required, 0.0);
}

TEST(ContactForceTest, StraightRollingNeedsNoFriction) {
  for (double phidot : {1.0, 5.0, 20.0}) {
    const ContactForce K =
        ComputeContactForce(kTable, State::StraightRolling(phidot, kTable.R), {});
    EXPECT_NEAR(K.Kx, 0.0, 1e-12);
    EXPECT_NEAR(K.Ky, 0.0, 1e-12);
    EXPECT_NEAR(K.Kz, 235.44, 1e-10);
    EXPECT_NEAR(K.mu_required, 0.0, 1e-14);
  }
}

TEST(ContactForceTest, MatchesMomentumBalance) {
  std::mt19937_64 rng(8);
  const UnicycleParams p = kTable;
  for (int trial = 0; trial < 20; ++trial) {
    const AbsoluteState q = RandomState(rng);
    const Input u{5.0 * (trial % 3 - 1), 2.0 * ((trial + 1) % 3 - 1)};
    const auto d = testing::Differentiate(p, q, u, [&](const AbsoluteState& s) {
      const auto b = testing::Positions(p, s);
      Eigen::VectorXd v(9);
      v << b.C, b.A, b.B;
      return v;
    });
    const Eigen::Vector3d momentum_rate = p.m * d.second.segment<3>(0) +
                                          p.m1 * d.second.segment<3>(3) +
                                          p.m2 * d.second.segment<3>(6);
    const Eigen::Vector3d K0 =
        momentum_rate + (p.m + p.m1 + p.m2) * p.g * Eigen::Vector3d::UnitZ();
    const Eigen::Vector3d K1 = testing::Rz(q.psi).transpose() * K0;
    State x = testing::PathStateOf(q);
    const ContactForce K = ContactForceFrom(p, x, testing::SigmaDot(p, q, u));
    EXPECT_NEAR(K.Kx, K1.x(), 1e-5 * K1.norm()) << trial;
    EXPECT_NEAR(K.Ky, K1.y(), 1e-5 * K1.norm()) << trial;
    EXPECT_NEAR(K.Kz, K1.z(), 1e-5 * K1.norm()) << trial;
  }
}

TEST(ContactForceTest, AffineInInput) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const State x = testing::PathStateOf(RandomState(rng));
    const ContactForce a = ComputeContactForce(kTable, x, {});
    const ContactForce b = ComputeContactForce(kTable, x, {1.0, 0.5});
    const ContactForce c = ComputeContactForce(kTable, x, {3.0, 1.5});
    EXPECT_NEAR(c.Kx - a.Kx, 3.0 * (b.Kx - a.Kx), 1e-9);
    EXPECT_NEAR(c.Ky - a.Ky, 3.0 * (b.Ky - a.Ky), 1e-9);
    EXPECT_NEAR(c.Kz - a.Kz, 3.0 * (b.Kz - a.Kz), 1e-9);
  }
}

TEST(ContactForceTest, LiftOff) {
  // A violent pendulum swing over the top pulls the wheel off the ground.
  State x;
  x.omega2 = 30.0;
  x.sigma_gamma = -30.0;
  EXPECT_EQ(CodeOf([&] { ContactForceFrom(kTable, x, Vector5::Zero()); }),
            ErrorCode::kLiftOff);
}

TEST(RequiredFrictionTest, Examples) {
  EXPECT_NEAR(RequiredFriction(1, 2, 10), std::sqrt(5.0) / 10.0, 1e-15);
  EXPECT_NEAR(RequiredFriction(1, 2, 10), 0.2236, 1e-4);
  EXPECT_EQ(RequiredFriction(0, 0, 3), 0.0);
  EXPECT_EQ(CodeOf([] { RequiredFriction(3, 4, 0); }), ErrorCode::kLiftOff);
}

TEST(ActuatorPowerTest, Examples) {
  State x;
  ActuatorPowers pw = ComputeActuatorPowers(kTable, x, {});
  EXPECT_EQ(pw.P_F, 0.0);
  EXPECT_EQ(pw.P_T, 0.0);
  x.sigma_r = -0.2;
  pw = ComputeActuatorPowers(kTable, x, {2.0, 0.0});
  EXPECT_NEAR(pw.P_F, 0.4, 1e-15);
  // Straight rolling: the pendulum actuator turns at the wheel rate.
  const State roll = State::StraightRolling(5.0, kTable.R);
  pw = ComputeActuatorPowers(kTable, roll, {0.0, 2.0});
  EXPECT_NEAR(pw.P_T, 2.0 * 5.0, 1e-13);
}

TEST(EnergyTest, RestIsPotentialOnly) {
  const double expected = kTable.g * (kTable.m * kTable.R + kTable.m1 * kTable.R +
                                      kTable.m2 * (kTable.R + kTable.h));
  EXPECT_NEAR(TotalEnergy(kTable, State{}), expected, 1e-12);
  EXPECT_NEAR(expected, 100.062, 1e-9);
}

TEST(EnergyTest, StraightRolling) {
  const double w = 5.0, R = kTable.R;
  const double rest = TotalEnergy(kTable, State{});
  const double expected = rest + 0.5 * kTable.m * R * R * w * w +
                          0.5 * (0.5 * kTable.m * R * R) * w * w +
                          0.5 * kTable.m1 * R * R * w * w +
                          0.5 * kTable.m2 * R * R * w * w;
  EXPECT_NEAR(TotalEnergy(kTable, State::StraightRolling(w, R)), expected, 1e-12);
}

TEST(EnergyTest, LinearInMasses) {
  std::mt19937_64 rng(10);
  UnicycleParams heavy = kTable;
  heavy.m *= 2;
  heavy.m1 *= 2;
  heavy.m2 *= 2;
  for (int i = 0; i < 20; ++i) {
    const State x = testing::PathStateOf(RandomState(rng));
    EXPECT_NEAR(TotalEnergy(heavy, x), 2.0 * TotalEnergy(kTable, x), 1e-11);
  }
}

TEST(EnergyTest, MatchesBodyVelocities) {
  std::mt19937_64 rng(11);
  const UnicycleParams p = kTable;
  for (int trial = 0; trial < 20; ++trial) {
    const AbsoluteState q = RandomState(rng);
    const auto d = testing::Differentiate(p, q, {}, [&](const AbsoluteState& s) {
      const auto b = testing::Positions(p, s);
      Eigen::VectorXd v(9);
      v << b.C, b.A, b.B;
      return v;
    });
    const double spin = p.m * p.R * p.R / 4 * (q.w1 * q.w1 + 2 * q.w2 * q.w2 + q.w3 * q.w3);
    const double kinetic = 0.5 * p.m * d.first.segment<3>(0).squaredNorm() +
                           0.5 * p.m1 * d.first.segment<3>(3).squaredNorm() +
                           0.5 * p.m2 * d.first.segment<3>(6).squaredNorm() + 0.5 * spin;
    const double potential =
        p.g * (p.m * d.value[2] + p.m1 * d.value[5] + p.m2 * d.value[8]);
    EXPECT_NEAR(TotalEnergy(p, testing::PathStateOf(q)), kinetic + potential,
                1e-8 * (kinetic + potential))
        << trial;
  }
}

TEST(EnergyTest, RateEqualsActuatorPower) {
  std::mt19937_64 rng(12);
  const UnicycleParams p = kTable;
  for (int trial = 0; trial < 20; ++trial) {
    const AbsoluteState q = RandomState(rng);
    const Input u{4.0, -3.0};
    const auto d = testing::Differentiate(p, q, u, [&](const AbsoluteState& s) {
      return Eigen::VectorXd::Constant(1, TotalEnergy(p, testing::PathStateOf(s)));
    });
    const ActuatorPowers pw = ComputeActuatorPowers(p, testing::PathStateOf(q), u);
    EXPECT_NEAR(d.first[0], pw.P_F + pw.P_T, 1e-6 * (1 + std::abs(pw.P_F + pw.P_T)))
        << trial;
  }
}

}  // namespace
}  // namespace unicycle::dynamics
