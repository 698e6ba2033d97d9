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

#include "unicycle/planner/clothoid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "unicycle/error.hpp"
#include "unicycle/planner/fresnel.hpp"

namespace unicycle::planner {
namespace {

void RequirePositive(double value, const char* name) {
  if (!(value > 0.0)) {
    std::ostringstream msg;
    msg << "clothoid segment length " << name << " must be positive, got "
        << value;
    throw Error(ErrorCode::kNonPositiveLength, msg.str());
  }
}

// Boundary conditions expressed in the start frame: origin at (x_s, y_s) and
// heading psi_s = 0. The solution is then independent of rigid motions.
BoundaryConditions ToLocalFrame(const BoundaryConditions& bc) {
  const double dx = bc.x_f - bc.x_s;
  const double dy = bc.y_f - bc.y_s;
  const double c = std::cos(bc.psi_s);
  const double s = std::sin(bc.psi_s);
  BoundaryConditions local;
  local.kappa_s = bc.kappa_s;
  local.x_f = c * dx + s * dy;
  local.y_f = -s * dx + c * dy;
  local.psi_f = bc.psi_f - bc.psi_s;
  local.kappa_f = bc.kappa_f;
  return local;
}

ClothoidTriple BuildTriple(const BoundaryConditions& bc, double ratio,
                           double s1, double kp1) {
  const double s0 = ratio * s1;
  const EliminatedUnknowns e = EliminateUnknowns(bc, s0, s1, s0, kp1);
  ClothoidTriple t;
  t.s0 = s0;
  t.s1 = s1;
  t.s2 = s0;
  t.kappa_s = bc.kappa_s;
  t.kappa_m = e.kappa_m;
  t.kappa_f = bc.kappa_f;
  t.kp0 = e.kp0;
  t.kp1 = kp1;
  t.kp2 = e.kp2;
  t.psi_m = e.psi_m;
  t.x_m = e.x_m;
  t.y_m = e.y_m;
  t.ratio = ratio;
  return t;
}

struct Unknowns {
  double s1;
  double kp1;
};

class Newton {
 public:
  Newton(const BoundaryConditions& bc, double ratio, double chord,
         const ClothoidSolverOptions& options)
      : bc_(bc), ratio_(ratio), chord_(chord), options_(options) {}

  std::optional<Unknowns> Solve(Unknowns z) const {
    if (!(z.s1 > 0.0)) return std::nullopt;
    Residual r = ClothoidResidual(bc_, ratio_, z.s1, z.kp1);
    double norm = r.Norm();
    int polish = 0;
    for (int it = 0; it < options_.max_newton_iterations; ++it) {
      if (!std::isfinite(norm)) return std::nullopt;
      if (norm < options_.tolerance) {
        // A couple of extra steps push the residual to rounding level.
        if (polish++ >= 2 || norm < 1e-14 * chord_) return z;
      }
      const double h1 = options_.fd_relative_step * std::max(z.s1, chord_);
      const double h2 = options_.fd_relative_step *
                        std::max(std::abs(z.kp1), 1.0 / (chord_ * chord_));
      const Residual r1 = ClothoidResidual(bc_, ratio_, z.s1 + h1, z.kp1);
      const Residual r2 = ClothoidResidual(bc_, ratio_, z.s1, z.kp1 + h2);
      const double j11 = (r1.rx - r.rx) / h1, j12 = (r2.rx - r.rx) / h2;
      const double j21 = (r1.ry - r.ry) / h1, j22 = (r2.ry - r.ry) / h2;
      const double det = j11 * j22 - j12 * j21;
      if (!std::isfinite(det) || det == 0.0) return std::nullopt;
      const double d1 = (j22 * r.rx - j12 * r.ry) / det;
      const double d2 = (-j21 * r.rx + j11 * r.ry) / det;
      bool accepted = false;
      for (double step = 1.0; step > 1e-6; step *= 0.5) {
        const Unknowns trial{z.s1 - step * d1, z.kp1 - step * d2};
        if (!(trial.s1 > 0.0) || trial.s1 > kMaxLengthFactor * chord_ ||
            std::abs(trial.kp1) > kMaxSlope) {
          continue;
        }
        const Residual rt = ClothoidResidual(bc_, ratio_, trial.s1, trial.kp1);
        const double nt = rt.Norm();
        if (nt < norm) {
          z = trial;
          r = rt;
          norm = nt;
          accepted = true;
          break;
        }
      }
      if (!accepted) return norm < options_.tolerance ? std::optional(z) : std::nullopt;
    }
    return norm < options_.tolerance ? std::optional(z) : std::nullopt;
  }

  static constexpr double kMaxLengthFactor = 10.0;
  static constexpr double kMaxSlope = 10.0;  // 1/m^2

 private:
  const BoundaryConditions& bc_;
  double ratio_;
  double chord_;
  const ClothoidSolverOptions& options_;
};

bool SameRoot(const Unknowns& a, const Unknowns& b, double chord) {
  return std::abs(a.s1 - b.s1) <= 1e-6 * std::max(a.s1, b.s1) &&
         std::abs(a.kp1 - b.kp1) <=
             1e-6 * std::max({std::abs(a.kp1), std::abs(b.kp1),
                              1.0 / (chord * chord)});
}

// Multidimensional bisection over s1 in (0, 10 chord], kp1 in [-10, 10]:
// cells whose corner residuals change sign in both components bracket a root
// candidate and are refined once before a Newton polish. The kp1 axis is
// sampled through the middle piece's phase a1 = kp1 s1^2 / 4, which keeps the
// grid dense where the residual oscillates and skips wildly coiled paths.
std::vector<Unknowns> ScanCandidates(const BoundaryConditions& bc,
                                     double ratio, double chord, int cells) {
  const int n = std::max(cells, 4);
  std::vector<double> s1_grid(n + 1), phase_grid(n + 1);
  const double s1_lo = 0.02 * chord / (1.0 + 2.0 * ratio);
  const double s1_hi = Newton::kMaxLengthFactor * chord;
  constexpr double kKpMax = Newton::kMaxSlope;
  constexpr double kPhaseMax = 4.0 * std::numbers::pi;
  for (int i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / n;
    s1_grid[i] = s1_lo * std::pow(s1_hi / s1_lo, u);
    const double w = 2.0 * u - 1.0;
    phase_grid[i] = kPhaseMax * w * w * w;
  }
  auto kp_at = [&](double s1, double phase) {
    return std::clamp(4.0 * phase / (s1 * s1), -kKpMax, kKpMax);
  };
  auto sign_change = [](std::array<double, 4> v) {
    const bool pos = std::any_of(v.begin(), v.end(), [](double x) { return x >= 0; });
    const bool neg = std::any_of(v.begin(), v.end(), [](double x) { return x <= 0; });
    return pos && neg;
  };
  std::vector<Residual> grid((n + 1) * (n + 1));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      grid[i * (n + 1) + j] =
          ClothoidResidual(bc, ratio, s1_grid[i], kp_at(s1_grid[i], phase_grid[j]));
    }
  }
  std::vector<Unknowns> seeds;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Residual& a = grid[i * (n + 1) + j];
      const Residual& b = grid[(i + 1) * (n + 1) + j];
      const Residual& c = grid[i * (n + 1) + j + 1];
      const Residual& d = grid[(i + 1) * (n + 1) + j + 1];
      if (!sign_change({a.rx, b.rx, c.rx, d.rx}) ||
          !sign_change({a.ry, b.ry, c.ry, d.ry})) {
        continue;
      }
      // One bisection level: keep sub-cells that still bracket.
      bool any = false;
      for (int si = 0; si < 2; ++si) {
        for (int sj = 0; sj < 2; ++sj) {
          const double s_lo = s1_grid[i] + 0.5 * si * (s1_grid[i + 1] - s1_grid[i]);
          const double s_hi = s_lo + 0.5 * (s1_grid[i + 1] - s1_grid[i]);
          const double a_lo =
              phase_grid[j] + 0.5 * sj * (phase_grid[j + 1] - phase_grid[j]);
          const double a_hi = a_lo + 0.5 * (phase_grid[j + 1] - phase_grid[j]);
          const Residual p = ClothoidResidual(bc, ratio, s_lo, kp_at(s_lo, a_lo));
          const Residual q = ClothoidResidual(bc, ratio, s_hi, kp_at(s_hi, a_lo));
          const Residual r = ClothoidResidual(bc, ratio, s_lo, kp_at(s_lo, a_hi));
          const Residual t = ClothoidResidual(bc, ratio, s_hi, kp_at(s_hi, a_hi));
          if (sign_change({p.rx, q.rx, r.rx, t.rx}) &&
              sign_change({p.ry, q.ry, r.ry, t.ry})) {
            const double sm = 0.5 * (s_lo + s_hi);
            seeds.push_back({sm, kp_at(sm, 0.5 * (a_lo + a_hi))});
            any = true;
          }
        }
      }
      if (!any) {
        const double sm = 0.5 * (s1_grid[i] + s1_grid[i + 1]);
        seeds.push_back({sm, kp_at(sm, 0.5 * (phase_grid[j] + phase_grid[j + 1]))});
      }
    }
  }
  return seeds;
}

}  // namespace

void BoundaryConditions::Validate() const {
  for (double v : {x_s, y_s, psi_s, kappa_s, x_f, y_f, psi_f, kappa_f}) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "boundary conditions must be finite");
    }
  }
  if (x_s == x_f && y_s == y_f) {
    throw Error(ErrorCode::kInvalidArgument,
                "boundary conditions have coincident start and end points");
  }
}

double Residual::Norm() const { return std::hypot(rx, ry); }

EliminatedUnknowns EliminateUnknowns(const BoundaryConditions& bc, double s0,
                                     double s1, double s2, double kp1) {
  RequirePositive(s0, "s0");
  RequirePositive(s1, "s1");
  RequirePositive(s2, "s2");
  const double dpsi = bc.psi_f - bc.psi_s;
  const double ks = bc.kappa_s;
  const double kf = bc.kappa_f;
  const double denom = s0 + 2.0 * s1 + s2;

  EliminatedUnknowns e;
  e.kp0 = (2.0 * dpsi - kp1 * (s1 * s1 + s1 * s2) - kf * s2 -
           ks * (2.0 * s0 + 2.0 * s1 + s2)) /
          (s0 * denom);
  e.kp2 = (ks * s0 - kp1 * (s0 * s1 + s1 * s1) +
           kf * (s0 + 2.0 * s1 + 2.0 * s2) - 2.0 * dpsi) /
          (s2 * denom);
  e.kappa_m = (4.0 * dpsi + kp1 * (s0 * s1 - s1 * s2) - 2.0 * kf * s2 -
               2.0 * ks * s0) /
              (2.0 * denom);
  e.psi_m = (8.0 * bc.psi_f * (s0 + s1) + 8.0 * bc.psi_s * (s1 + s2) +
             ks * (4.0 * s0 * s1 + 4.0 * s0 * s2) -
             kf * (4.0 * s0 * s2 + 4.0 * s1 * s2) -
             kp1 * (3.0 * s0 * s1 * s1 + 4.0 * s0 * s1 * s2 +
                    2.0 * s1 * s1 * s1 + 3.0 * s1 * s1 * s2)) /
            (8.0 * denom);

  // The first half of the middle piece is traced backward from the midpoint,
  // hence the negated linear coefficient.
  const FresnelPair first = FresnelCS(e.kp0 * s0 * s0, ks * s0, bc.psi_s);
  const FresnelPair half = FresnelCS(0.25 * kp1 * s1 * s1,
                                     -0.5 * e.kappa_m * s1, e.psi_m);
  e.x_m = bc.x_s + s0 * first.c + 0.5 * s1 * half.c;
  e.y_m = bc.y_s + s0 * first.s + 0.5 * s1 * half.s;
  return e;
}

Residual ClothoidResidual(const BoundaryConditions& bc, double ratio,
                          double s1, double kp1) {
  if (!(ratio > 0.0)) {
    throw Error(ErrorCode::kNonPositiveLength, "clothoid ratio must be positive");
  }
  RequirePositive(s1, "s1");
  const double s0 = ratio * s1;
  const double s2 = s0;
  const EliminatedUnknowns e = EliminateUnknowns(bc, s0, s1, s2, kp1);
  const double a1 = 0.25 * kp1 * s1 * s1;
  const double b1 = 0.5 * e.kappa_m * s1;
  const FresnelPair p0 = FresnelCS(e.kp0 * s0 * s0, bc.kappa_s * s0, bc.psi_s);
  const FresnelPair p1 = FresnelCS(a1, b1, e.psi_m);
  const FresnelPair p1m = FresnelCS(a1, -b1, e.psi_m);
  const FresnelPair p2 = FresnelCS(e.kp2 * s2 * s2, -bc.kappa_f * s2, bc.psi_f);
  Residual r;
  r.rx = s0 * p0.c + 0.5 * s1 * (p1.c + p1m.c) + s2 * p2.c - (bc.x_f - bc.x_s);
  r.ry = s0 * p0.s + 0.5 * s1 * (p1.s + p1m.s) + s2 * p2.s - (bc.y_f - bc.y_s);
  return r;
}

double ClothoidTriple::CurvatureAt(double u) const {
  if (u <= s0) return kappa_s + kp0 * u;
  if (u <= s0 + s1) return kappa_m + kp1 * (u - s0 - 0.5 * s1);
  return kappa_f + kp2 * (u - Length());
}

double ClothoidTriple::MaxAbsCurvature() const {
  return std::max({std::abs(kappa_s), std::abs(CurvatureAt(s0)),
                   std::abs(CurvatureAt(s0 + s1)), std::abs(kappa_f)});
}

ClothoidSolution SolveThreeClothoid(const BoundaryConditions& bc, double ratio,
                                    const ClothoidSolverOptions& options) {
  bc.Validate();
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw Error(ErrorCode::kInvalidArgument,
                "clothoid segment ratio must be positive and finite");
  }
  const BoundaryConditions local = ToLocalFrame(bc);
  const double chord = std::hypot(local.x_f, local.y_f);
  const double chord_angle = std::atan2(local.y_f, local.x_f);
  if (std::abs(local.y_f) <= 1e-12 * chord && local.x_f > 0.0 &&
      std::abs(local.psi_f) <= 1e-12 && local.kappa_s == 0.0 &&
      local.kappa_f == 0.0) {
    throw Error(ErrorCode::kDegenerate,
                "boundary conditions describe a straight line; use a straight "
                "segment");
  }

  const Newton newton(local, ratio, chord, options);
  std::vector<Unknowns> roots;
  auto try_seed = [&](Unknowns seed) {
    const std::optional<Unknowns> z = newton.Solve(seed);
    if (!z) return;
    for (const Unknowns& known : roots) {
      if (SameRoot(known, *z, chord)) return;
    }
    roots.push_back(*z);
  };

  const double s1_guess = chord / (1.0 + 2.0 * ratio);
  // Peak curvature of a single arc bending through the chord's excess angle,
  // reversed over the middle piece.
  const double excess = chord_angle - 0.5 * local.psi_f;
  const double kp_guess = -4.0 * excess / (chord * s1_guess);
  const double kp_unit = 2.0 / (chord * s1_guess);
  for (double s_scale : {1.0, 1.5}) {
    for (double kp : {kp_guess, 2.0 * kp_guess, 4.0 * kp_guess,
                      0.5 * kp_guess, -kp_guess, 0.0, kp_unit, -kp_unit}) {
      try_seed({s_scale * s1_guess, kp});
    }
  }
  if (roots.empty() || options.scan_for_all_roots) {
    for (const Unknowns& seed :
         ScanCandidates(local, ratio, chord, options.scan_cells)) {
      try_seed(seed);
    }
  }
  if (roots.empty()) {
    std::ostringstream msg;
    msg << "no three-clothoid solution found for ratio " << ratio;
    throw Error(ErrorCode::kNoSolution, msg.str());
  }

  ClothoidSolution solution;
  double best_peak = std::numeric_limits<double>::infinity();
  for (const Unknowns& z : roots) {
    // Rebuild in the caller's frame; the lengths and slopes are frame free.
    ClothoidTriple t = BuildTriple(bc, ratio, z.s1, z.kp1);
    solution.roots.push_back(t);
    const double peak = t.MaxAbsCurvature();
    if (peak < best_peak) {
      best_peak = peak;
      solution.best = t;
      solution.residual_norm = ClothoidResidual(local, ratio, z.s1, z.kp1).Norm();
    }
  }
  return solution;
}

}  // namespace unicycle::planner
