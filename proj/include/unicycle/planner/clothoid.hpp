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

#ifndef UNICYCLE_PLANNER_CLOTHOID_HPP_
#define UNICYCLE_PLANNER_CLOTHOID_HPP_

#include <vector>

namespace unicycle::planner {

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
};

// Position, heading and curvature prescribed at both ends of a turning section.
struct BoundaryConditions {
  double x_s = 0.0, y_s = 0.0, psi_s = 0.0, kappa_s = 0.0;
  double x_f = 0.0, y_f = 0.0, psi_f = 0.0, kappa_f = 0.0;

  // Throws kInvalidArgument on non-finite fields or coincident endpoints.
  void Validate() const;
};

// The six unknowns of the three-clothoid problem that follow in closed form
// from the continuity conditions once s0, s1, s2 and kp1 are fixed.
struct EliminatedUnknowns {
  double kp0 = 0.0;
  double kp2 = 0.0;
  double kappa_m = 0.0;
  double psi_m = 0.0;
  double x_m = 0.0;
  double y_m = 0.0;
};

EliminatedUnknowns EliminateUnknowns(const BoundaryConditions& bc, double s0,
                                     double s1, double s2, double kp1);

struct Residual {
  double rx = 0.0;
  double ry = 0.0;
  double Norm() const;
};

// Mismatch of the end position reached by the three clothoids with
// s0 = s2 = ratio * s1 against (x_f, y_f).
Residual ClothoidResidual(const BoundaryConditions& bc, double ratio,
                          double s1, double kp1);

// Three G2-joined clothoid pieces. Curvature is piecewise linear in arc
// length; kp0/kp1/kp2 are the curvature slopes of the pieces.
struct ClothoidTriple {
  double s_s = 0.0;
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  double kappa_s = 0.0, kappa_m = 0.0, kappa_f = 0.0;
  double kp0 = 0.0, kp1 = 0.0, kp2 = 0.0;
  double psi_m = 0.0, x_m = 0.0, y_m = 0.0;
  double ratio = 0.0;

  double Length() const { return s0 + s1 + s2; }
  double EndArcLength() const { return s_s + Length(); }
  // Curvature at local arc length u in [0, Length()].
  double CurvatureAt(double u) const;
  double MaxAbsCurvature() const;
};

struct ClothoidSolverOptions {
  double tolerance = 1e-9;          // on the residual norm, metres
  int max_newton_iterations = 50;
  double fd_relative_step = 1e-7;
  bool scan_for_all_roots = false;  // run the bisection scan even if Newton converged
  int scan_cells = 48;              // per axis
};

struct ClothoidSolution {
  ClothoidTriple best;                 // minimum peak |kappa| among roots
  std::vector<ClothoidTriple> roots;   // every distinct root found
  double residual_norm = 0.0;          // of `best`
};

// Solves the G2 Hermite problem with three clothoids at the given segment
// ratio. The returned triple has s_s = 0. Throws kDegenerate for straight-line
// boundary conditions and kNoSolution when no root is located.
ClothoidSolution SolveThreeClothoid(const BoundaryConditions& bc, double ratio,
                                    const ClothoidSolverOptions& options = {});

}  // namespace unicycle::planner

#endif  // UNICYCLE_PLANNER_CLOTHOID_HPP_
