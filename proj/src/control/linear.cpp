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

#include "unicycle/control/linear.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "unicycle/dynamics/equations.hpp"
#include "unicycle/error.hpp"

namespace unicycle::control {
namespace {

// Relative accuracy demanded of the matched closed-loop coefficients.
constexpr double kMatchTolerance = 1e-7;

void CheckPhidot(double phidot_star) {
  if (!std::isfinite(phidot_star) || phidot_star < 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "phidot_star must be finite and non-negative");
  }
}

// Coefficients of (lambda - root)^n, lowest degree first.
Eigen::VectorXd PowerOfLinear(double root, int n) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c(0) = 1.0;
  for (int k = 0; k < n; ++k) {
    for (int i = k + 1; i > 0; --i) c(i) = c(i - 1) - root * c(i);
    c(0) *= -root;
  }
  return c;
}

// Open-loop characteristic polynomial together with the polynomials
// q_i(lambda) = C_i adj(lambda I - A) B, so that for scalar input u = k y
//   det(lambda I - A - B k C) = p(lambda) - sum_i k_i q_i(lambda).
// Both come from the open-loop matrix only, which keeps them well scaled
// even when the gains are large.
struct RankOneExpansion {
  Eigen::VectorXd open;  // degree 0..n
  Eigen::MatrixXd q;     // (n+1) x outputs, degree along rows
  // Magnitudes of the products summed into each entry, for rounding bounds.
  Eigen::VectorXd open_size;
  Eigen::MatrixXd q_size;
};

RankOneExpansion Expand(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                        const Eigen::MatrixXd& C) {
  const Eigen::Index n = A.rows();
  RankOneExpansion e;
  e.open.resize(n + 1);
  e.open(n) = 1.0;
  e.q = Eigen::MatrixXd::Zero(n + 1, C.rows());
  e.open_size = Eigen::VectorXd::Ones(n + 1);
  e.q_size = Eigen::MatrixXd::Zero(n + 1, C.rows());
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd M_size = Eigen::MatrixXd::Zero(n, n);  // entrywise bound
  for (Eigen::Index k = 1; k <= n; ++k) {
    const double lead = e.open(n - k + 1);
    M = A * M + lead * I;  // coefficient of lambda^(n-k) in adj
    M_size = A.cwiseAbs() * M_size + std::abs(lead) * I;
    e.q.row(n - k) = (C * M * B).transpose();
    e.q_size.row(n - k) =
        (C.cwiseAbs() * M_size * B.cwiseAbs()).transpose();
    e.open(n - k) = -(A * M).trace() / static_cast<double>(k);
    e.open_size(n - k) = (A.cwiseAbs() * M_size).trace() / k;
  }
  return e;
}

// Solves M x = rhs after row equilibration; rank deficiency is reported
// as a placement failure.
Eigen::VectorXd SolveMatching(Eigen::MatrixXd M, Eigen::VectorXd rhs,
                              const char* which) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    const double scale = std::max(M.row(i).cwiseAbs().maxCoeff(), 1e-300);
    M.row(i) /= scale;
    rhs(i) /= scale;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0 || sv(sv.size() - 1) < 1e-12 * sv(0)) {
    std::ostringstream msg;
    msg << which << " pole placement is rank deficient (condition "
        << (sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY)
        << ")";
    throw Error(ErrorCode::kPlacementSingular, msg.str());
  }
  return svd.solve(rhs);
}

// Compares open - q k against the target; each degree is judged against the
// magnitude of the terms that cancel into it.
void CheckMatch(const RankOneExpansion& ex, const Eigen::VectorXd& k,
                const Eigen::VectorXd& want, const char* which) {
  const Eigen::VectorXd got = ex.open - ex.q * k;
  const Eigen::VectorXd scale =
      ex.open_size + ex.q_size * k.cwiseAbs() + want.cwiseAbs();
  for (Eigen::Index i = 0; i < want.size(); ++i) {
    if (!(std::abs(got(i) - want(i)) <= kMatchTolerance * std::max(1.0, scale(i)))) {
      std::ostringstream msg;
      msg << which << " closed loop misses its target polynomial at degree " << i
          << " by " << std::abs(got(i) - want(i)) / std::max(1.0, scale(i))
          << " (" << got(i) << " vs " << want(i) << ")";
      throw Error(ErrorCode::kPlacementSingular, msg.str());
    }
  }
}

int NumericalRank(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) >= 1e-8 * sv(0)) ++rank;
  }
  return rank;
}

}  // namespace

LateralLTI LateralMatrices(const UnicycleParams& p, double phidot_star) {
  p.Validate();
  CheckPhidot(phidot_star);
  const double m = p.m, m1 = p.m1, m2 = p.m2, R = p.R, h = p.h, g = p.g;
  const double w = phidot_star;
  LateralLTI l;
  l.phidot_star = w;
  l.c1 = 5.0 * m * R * R + 4.0 * m2 * (R + h) * (R + h);
  l.a13 = -4.0 * m1 * g / l.c1;
  l.a14 = 4.0 * g * (m * R + m2 * (R + h)) / l.c1;
  l.a15 = 2.0 * R * w * (3.0 * m * R + 2.0 * m2 * (R + h)) / l.c1;
  l.a24 = -g;
  l.a25 = -R * w;
  l.a31 = R;
  l.a51 = -2.0 * w;
  l.a76 = R * w;
  l.b11 = -4.0 * R / l.c1;
  l.b21 = -1.0 / m1;

  l.A.setZero();
  l.A(0, 2) = l.a13;
  l.A(0, 3) = l.a14;
  l.A(0, 4) = l.a15;
  l.A(1, 3) = l.a24;
  l.A(1, 4) = l.a25;
  l.A(2, 0) = l.a31;
  l.A(2, 1) = 1.0;
  l.A(3, 0) = 1.0;
  l.A(4, 0) = l.a51;
  l.A(5, 4) = 1.0;
  l.A(6, 5) = l.a76;
  l.B.setZero();
  l.B(0) = l.b11;
  l.B(1) = l.b21;
  // Outputs: omega1, sigma_r, chi, theta, r, eps.
  l.C.setZero();
  const int picks[6] = {0, 1, 5, 3, 2, 6};
  for (int i = 0; i < 6; ++i) l.C(i, picks[i]) = 1.0;

  l.a0 = -l.a13 * (l.a24 + l.a25 * l.a51);
  l.a2 = -l.a13 * l.a31 - l.a14 - l.a15 * l.a51;
  return l;
}

LongitudinalLTI LongitudinalMatrices(const UnicycleParams& p) {
  p.Validate();
  const double m = p.m, m1 = p.m1, m2 = p.m2, R = p.R, h = p.h, g = p.g;
  LongitudinalLTI l;
  const double base = 3.0 * m + 2.0 * m1;
  l.a8A = -2.0 * m2 * g / (base * R);
  l.a9A = g;
  l.aA8 = -R / h;
  l.aA9 = 1.0 / h;
  l.aC8 = R;
  l.b82 = 2.0 * (R + h) / (base * R * R * h);
  l.b92 = -1.0 / (m2 * h);

  l.A.setZero();
  l.A(0, 2) = l.a8A;
  l.A(1, 2) = l.a9A;
  l.A(2, 0) = l.aA8;
  l.A(2, 1) = l.aA9;
  l.A(3, 0) = 1.0;
  l.A(4, 0) = l.aC8;
  l.B.setZero();
  l.B(0) = l.b82;
  l.B(1) = l.b92;
  // Outputs: omega2, sigma_gamma, gamma, s.
  l.C.setZero();
  const int picks[4] = {0, 1, 2, 4};
  for (int i = 0; i < 4; ++i) l.C(i, picks[i]) = 1.0;
  return l;
}

LateralRoots ComputeLateralRoots(const UnicycleParams& p, double phidot_star) {
  const LateralLTI l = LateralMatrices(p, phidot_star);
  LateralRoots out;
  out.a0 = l.a0;
  out.a2 = l.a2;
  using cd = std::complex<double>;
  const cd disc = std::sqrt(cd(l.a2 * l.a2 - 4.0 * l.a0, 0.0));
  const cd mu_plus = (-l.a2 + disc) / 2.0;
  const cd mu_minus = (-l.a2 - disc) / 2.0;
  const cd r1 = std::sqrt(mu_plus);
  const cd r2 = std::sqrt(mu_minus);
  out.roots = {r1, -r1, r2, -r2};
  return out;
}

double LongitudinalRoot(const UnicycleParams& p) {
  p.Validate();
  const double base = 3.0 * p.m + 2.0 * p.m1;
  return std::sqrt((base + 2.0 * p.m2) * p.g / (base * p.h));
}

CriticalSpeeds ComputeCriticalSpeeds(const UnicycleParams& p) {
  p.Validate();
  auto disc = [&](double w) {
    const LateralLTI l = LateralMatrices(p, w);
    return l.a2 * l.a2 - 4.0 * l.a0;
  };
  auto bisect = [&](double lo, double hi) {
    double flo = disc(lo);
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      const double fmid = disc(mid);
      if ((fmid < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  constexpr double kMax = 20.0;
  constexpr int kGrid = 4000;
  double roots[2];
  int found = 0;
  double prev_w = 1e-9;
  double prev_f = disc(prev_w);
  for (int i = 1; i <= kGrid && found < 2; ++i) {
    const double w = kMax * i / kGrid;
    const double f = disc(w);
    if ((f < 0.0) != (prev_f < 0.0)) roots[found++] = bisect(prev_w, w);
    prev_w = w;
    prev_f = f;
  }
  if (found < 2) {
    throw Error(ErrorCode::kNoOscillatoryBand,
                "a2^2 - 4 a0 has no negative band for phidot in (0, 20]");
  }
  CriticalSpeeds v;
  v.v1 = p.R * std::sqrt(p.g / (2.0 * p.R));
  v.v2 = p.R * roots[0];
  v.v3 = p.R * roots[1];
  return v;
}

ControllabilityReport Controllability(const Eigen::MatrixXd& A,
                                      const Eigen::MatrixXd& B,
                                      const Eigen::MatrixXd& C) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  Eigen::MatrixXd ctrb(n, n * m);
  Eigen::MatrixXd block = B;
  for (Eigen::Index k = 0; k < n; ++k) {
    ctrb.middleCols(k * m, m) = block;
    block = A * block;
  }
  ControllabilityReport r;
  r.state_rank = NumericalRank(ctrb);
  r.output_rank = NumericalRank(C * ctrb);
  return r;
}

ControllabilityReport Controllability(const LateralLTI& lti) {
  return Controllability(lti.A, lti.B, lti.C);
}

ControllabilityReport Controllability(const LongitudinalLTI& lti) {
  return Controllability(lti.A, lti.B, lti.C);
}

Eigen::VectorXd CharacteristicPolynomial(const Eigen::MatrixXd& A) {
  // Faddeev-LeVerrier recursion.
  const Eigen::Index n = A.rows();
  Eigen::VectorXd c(n + 1);
  c(n) = 1.0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    M = A * M + c(n - k + 1) * I;
    c(n - k) = -(A * M).trace() / static_cast<double>(k);
  }
  return c;
}

Eigen::Matrix<double, 1, 6> Gains::LateralRow() const {
  Eigen::Matrix<double, 1, 6> k;
  k << D_theta, D_r, P_chi, P_theta, P_r, P_eps;
  return k;
}

Eigen::Matrix<double, 1, 4> Gains::LongitudinalRow() const {
  Eigen::Matrix<double, 1, 4> k;
  k << D_phi, D_gamma, P_gamma, P_s;
  return k;
}

void PlaceLongitudinal(const LongitudinalLTI& lti, double target_pole,
                       Gains* gains) {
  const RankOneExpansion ex = Expand(lti.A, lti.B, lti.C);
  Eigen::VectorXd target = Eigen::VectorXd::Zero(6);
  target.tail(5) = PowerOfLinear(target_pole, 4);  // times lambda

  // phi feeds nothing, so the constant coefficient is zero for every gain
  // and only degrees 1..4 are matched.
  const Eigen::MatrixXd M = -ex.q.middleRows(1, 4);
  const Eigen::VectorXd k =
      SolveMatching(M, (target - ex.open).segment(1, 4), "longitudinal");
  CheckMatch(ex, k, target, "longitudinal");
  gains->D_phi = k(0);
  gains->D_gamma = k(1);
  gains->P_gamma = k(2);
  gains->P_s = k(3);
}

void PlaceLateral(const LateralLTI& lti, double target_pole, Gains* gains) {
  const RankOneExpansion ex = Expand(lti.A, lti.B, lti.C);
  const Eigen::VectorXd q = PowerOfLinear(target_pole, 6);

  // (lambda - p)^6 (lambda - beta) = lambda q - beta q.
  Eigen::VectorXd shifted = Eigen::VectorXd::Zero(8);
  shifted.tail(7) = q;

  // omega3 - a51 theta is conserved by the linear model for any input. The
  // zero root it produces cannot move, which shows up as a constant
  // coefficient that no gain touches; beta is then zero and only degrees
  // 1..6 are matched.
  bool zero_is_fixed = std::abs(ex.open(0)) <= kMatchTolerance * ex.open_size(0);
  for (Eigen::Index j = 0; j < ex.q.cols(); ++j) {
    zero_is_fixed = zero_is_fixed &&
                    std::abs(ex.q(0, j)) <= kMatchTolerance * ex.q_size(0, j);
  }

  Eigen::VectorXd k;
  double beta = 0.0;
  if (zero_is_fixed) {
    k = SolveMatching(-ex.q.middleRows(1, 6),
                      (shifted - ex.open).segment(1, 6), "lateral");
  } else {
    Eigen::MatrixXd M(7, 7);
    M.leftCols(6) = -ex.q.topRows(7);
    M.col(6) = q;
    const Eigen::VectorXd x =
        SolveMatching(M, (shifted - ex.open).head(7), "lateral");
    k = x.head(6);
    beta = x(6);
  }

  if (!zero_is_fixed && !(beta < 0.0)) {
    std::ostringstream msg;
    msg << "residual lateral pole beta = " << beta << " is not stable";
    throw Error(ErrorCode::kUnstableResidualPole, msg.str());
  }
  Eigen::VectorXd target = shifted;
  target.head(7) -= beta * q;
  CheckMatch(ex, k, target, "lateral");
  gains->D_theta = k(0);
  gains->D_r = k(1);
  gains->P_chi = k(2);
  gains->P_theta = k(3);
  gains->P_r = k(4);
  gains->P_eps = k(5);
  gains->beta = beta;
}

Gains SynthesizeGains(const UnicycleParams& p, double phidot_star,
                      double target_pole) {
  if (!std::isfinite(target_pole) || target_pole >= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "target_pole must be negative");
  }
  Gains g;
  g.target_pole = target_pole;
  g.scheduled_phidot = phidot_star;
  PlaceLongitudinal(LongitudinalMatrices(p), target_pole, &g);
  PlaceLateral(LateralMatrices(p, phidot_star), target_pole, &g);
  return g;
}

dynamics::Input Feedback(const UnicycleParams& p, const dynamics::State& x,
                         const Desired& desired, const Gains& gains) {
  dynamics::CheckTilt(x.theta);
  const double omega2_des = desired.v_des / p.R;
  const double sigma_gamma_des =
      omega2_des * p.R * std::cos(x.gamma) + x.omega3 * p.h * std::tan(x.theta);
  dynamics::Input u;
  u.F = gains.D_theta * x.omega1 + gains.D_r * x.sigma_r + gains.P_r * x.r +
        gains.P_theta * x.theta + gains.P_chi * x.chi + gains.P_eps * x.eps;
  u.T = gains.D_phi * (x.omega2 - omega2_des) +
        gains.D_gamma * (x.sigma_gamma - sigma_gamma_des) +
        gains.P_gamma * x.gamma + gains.P_s * (x.s - desired.s_des);
  return u;
}

}  // namespace unicycle::control
