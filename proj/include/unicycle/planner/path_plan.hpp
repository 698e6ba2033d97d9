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

#ifndef UNICYCLE_PLANNER_PATH_PLAN_HPP_
#define UNICYCLE_PLANNER_PATH_PLAN_HPP_

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "unicycle/planner/clothoid.hpp"

namespace unicycle::planner {

// Straight section with the raised-cosine speed profile
//   v(t) = v_s + (v_f - v_s)/2 (1 - cos(pi t / delta_t)),  t in [0, delta_t].
struct StraightSegment {
  double s_s = 0.0;
  double delta_s = 0.0;
  double v_s = 0.0;
  double v_f = 0.0;
  double delta_t = 0.0;

  double VelocityAt(double tau) const;
  double ArcLengthAt(double tau) const;  // relative to s_s
  // Inverse of ArcLengthAt on [0, delta_s].
  double TimeAt(double u) const;
};

// Throws kZeroSpeedPair when both speeds vanish, kNonPositiveLength for
// delta_s <= 0 and kInvalidArgument for negative speeds.
StraightSegment StraightProfile(double v_s, double v_f, double delta_s);

// One element of a plan. Turning sections are driven at the constant
// `speed`, which is the speed at section entry.
struct Segment {
  std::variant<StraightSegment, ClothoidTriple> shape;
  double speed = 0.0;  // used by clothoid segments only

  bool IsStraight() const {
    return std::holds_alternative<StraightSegment>(shape);
  }
  double Length() const;
  double Duration() const;
  double StartArcLength() const;
};

struct DesiredMotion {
  double s_des = 0.0;
  double v_des = 0.0;
};

struct PathSample {
  double s, x, y, psi, kappa, t, v_des;
};

// Immutable sequence of abutting segments with cached start poses and start
// times. Safe to share between threads.
class PathPlan {
 public:
  PathPlan() = default;  // empty plan: zero length, zero duration

  // Validates continuity of position, heading and curvature at every
  // junction (tolerance 1e-6) and throws kDiscontinuousChain otherwise.
  static PathPlan FromSegments(const Pose& origin, std::vector<Segment> segments);

  bool empty() const { return segments_.empty(); }
  const Pose& origin() const { return origin_; }
  const std::vector<Segment>& segments() const { return segments_; }

  double Length() const;
  double Duration() const;

  // Both throw kOutOfRange outside [0, Length()].
  double CurvatureAt(double s) const;
  Pose PoseAt(double s) const;
  // Curvature with s clamped into the plan; used while integrating, where the
  // vehicle may run slightly past the final point.
  double CurvatureClamped(double s) const;

  // Reference arc length and speed at time t. Beyond the last segment the
  // reference continues at the final speed.
  DesiredMotion DesiredAt(double t) const;
  std::size_t SegmentIndexAtTime(double t) const;
  std::size_t SegmentIndexAt(double s) const;

  // Samples every `ds` metres including both end points.
  std::vector<PathSample> Sample(double ds) const;

 private:
  struct Piece {
    double s_start;  // global arc length
    double length;
    double kappa0;
    double slope;
    Pose start;
  };

  const Piece& PieceAt(double s) const;

  Pose origin_;
  std::vector<Segment> segments_;
  std::vector<double> seg_start_s_;
  std::vector<double> seg_start_t_;
  std::vector<Piece> pieces_;
  std::vector<std::size_t> piece_segment_;
};

struct StraightSpec {
  double delta_s = 0.0;
  double v_s = 0.0;
  double v_f = 0.0;
  std::optional<Pose> start;  // if present, must match the chain
};

// Turning section. Either relative to the chain end (dx, dy in the frame of
// the current heading, dpsi heading change) or fully absolute.
struct ClothoidSpec {
  double dx = 0.0;
  double dy = 0.0;
  double dpsi = 0.0;
  double kappa_f = 0.0;
  double ratio = 0.5;
  std::optional<BoundaryConditions> absolute;
  std::optional<double> speed;  // defaults to the previous segment's end speed
};

using SegmentSpec = std::variant<StraightSpec, ClothoidSpec>;

// Chains the specs from `origin`, solving each turning section. Throws
// kDiscontinuousChain on junction mismatch, kNoSolution/kDegenerate (with the
// offending segment index in the message) on solver failure.
PathPlan ComposeManeuver(const Pose& origin, const std::vector<SegmentSpec>& specs,
                         const ClothoidSolverOptions& options = {});

// The three-part maneuver: accelerate from standstill to `speed` over
// `accel_length`, change lane by (dx, dy, dpsi) at `ratio`, then hold the
// speed for `final_length`.
std::vector<SegmentSpec> LaneChangeManeuver(double speed, double ratio,
                                            double accel_length = 5.0,
                                            double dx = 10.0, double dy = 3.0,
                                            double dpsi = 0.0,
                                            double final_length = 5.0);

}  // namespace unicycle::planner

#endif  // UNICYCLE_PLANNER_PATH_PLAN_HPP_
