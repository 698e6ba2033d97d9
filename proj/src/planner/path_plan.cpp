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

#include "unicycle/planner/path_plan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "unicycle/error.hpp"
#include "unicycle/planner/fresnel.hpp"

namespace unicycle::planner {
namespace {

constexpr double kJunctionTolerance = 1e-6;

Pose AdvancePiece(const Pose& start, double kappa0, double slope, double u) {
  if (u == 0.0) return start;
  if (slope == 0.0 && kappa0 == 0.0) {
    return {start.x + u * std::cos(start.psi), start.y + u * std::sin(start.psi),
            start.psi};
  }
  const FresnelPair f = FresnelCS(slope * u * u, kappa0 * u, start.psi);
  return {start.x + u * f.c, start.y + u * f.s,
          start.psi + kappa0 * u + 0.5 * slope * u * u};
}

[[noreturn]] void ThrowChain(std::size_t index, const std::string& what) {
  std::ostringstream msg;
  msg << "segment " << index << ": " << what;
  throw Error(ErrorCode::kDiscontinuousChain, msg.str());
}

}  // namespace

double StraightSegment::VelocityAt(double tau) const {
  tau = std::clamp(tau, 0.0, delta_t);
  return v_s + 0.5 * (v_f - v_s) * (1.0 - std::cos(std::numbers::pi * tau / delta_t));
}

double StraightSegment::ArcLengthAt(double tau) const {
  tau = std::clamp(tau, 0.0, delta_t);
  const double dv = v_f - v_s;
  return (v_s + 0.5 * dv) * tau -
         dv * delta_t / (2.0 * std::numbers::pi) *
             std::sin(std::numbers::pi * tau / delta_t);
}

double StraightSegment::TimeAt(double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= delta_s) return delta_t;
  double lo = 0.0, hi = delta_t;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * delta_t; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ArcLengthAt(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

StraightSegment StraightProfile(double v_s, double v_f, double delta_s) {
  if (!(delta_s > 0.0) || !std::isfinite(delta_s)) {
    throw Error(ErrorCode::kNonPositiveLength,
                "straight segment length must be positive");
  }
  if (!(v_s >= 0.0) || !(v_f >= 0.0) || !std::isfinite(v_s) ||
      !std::isfinite(v_f)) {
    throw Error(ErrorCode::kInvalidArgument,
                "straight segment speeds must be finite and non-negative");
  }
  if (v_s + v_f == 0.0) {
    throw Error(ErrorCode::kZeroSpeedPair,
                "straight segment with zero start and end speed has no duration");
  }
  StraightSegment seg;
  seg.delta_s = delta_s;
  seg.v_s = v_s;
  seg.v_f = v_f;
  seg.delta_t = 2.0 * delta_s / (v_s + v_f);
  return seg;
}

double Segment::Length() const {
  if (const auto* st = std::get_if<StraightSegment>(&shape)) return st->delta_s;
  return std::get<ClothoidTriple>(shape).Length();
}

double Segment::Duration() const {
  if (const auto* st = std::get_if<StraightSegment>(&shape)) return st->delta_t;
  return std::get<ClothoidTriple>(shape).Length() / speed;
}

double Segment::StartArcLength() const {
  if (const auto* st = std::get_if<StraightSegment>(&shape)) return st->s_s;
  return std::get<ClothoidTriple>(shape).s_s;
}

PathPlan PathPlan::FromSegments(const Pose& origin, std::vector<Segment> segments) {
  PathPlan plan;
  plan.origin_ = origin;
  Pose pose = origin;
  double kappa = 0.0;
  double s = 0.0;
  double t = 0.0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& seg = segments[i];
    if (std::abs(seg.StartArcLength() - s) > kJunctionTolerance) {
      ThrowChain(i, "start arc length does not continue the previous segment");
    }
    plan.seg_start_s_.push_back(s);
    plan.seg_start_t_.push_back(t);
    if (const auto* st = std::get_if<StraightSegment>(&seg.shape)) {
      if (i > 0 && std::abs(kappa) > kJunctionTolerance) {
        ThrowChain(i, "straight segment follows nonzero curvature");
      }
      if (!(st->delta_s > 0.0) || !(st->delta_t > 0.0)) {
        throw Error(ErrorCode::kNonPositiveLength,
                    "straight segment needs positive length and duration");
      }
      plan.pieces_.push_back({s, st->delta_s, 0.0, 0.0, pose});
      plan.piece_segment_.push_back(i);
      pose = AdvancePiece(pose, 0.0, 0.0, st->delta_s);
      kappa = 0.0;
    } else {
      const auto& tr = std::get<ClothoidTriple>(seg.shape);
      if (!(tr.s0 > 0.0 && tr.s1 > 0.0 && tr.s2 > 0.0)) {
        throw Error(ErrorCode::kNonPositiveLength,
                    "clothoid segment lengths must be positive");
      }
      if (!(seg.speed > 0.0) || !std::isfinite(seg.speed)) {
        std::ostringstream msg;
        msg << "segment " << i << ": turning section needs a positive speed";
        throw Error(ErrorCode::kInvalidArgument, msg.str());
      }
      if (i > 0 && std::abs(tr.kappa_s - kappa) > kJunctionTolerance) {
        ThrowChain(i, "curvature jumps at the segment start");
      }
      const std::array<double, 3> lengths = {tr.s0, tr.s1, tr.s2};
      const std::array<double, 3> kappas = {tr.kappa_s,
                                            tr.kappa_m - 0.5 * tr.kp1 * tr.s1,
                                            tr.kappa_m + 0.5 * tr.kp1 * tr.s1};
      const std::array<double, 3> slopes = {tr.kp0, tr.kp1, tr.kp2};
      double offset = s;
      for (int k = 0; k < 3; ++k) {
        plan.pieces_.push_back({offset, lengths[k], kappas[k], slopes[k], pose});
        plan.piece_segment_.push_back(i);
        if (k == 1) {
          const Pose mid = AdvancePiece(pose, kappas[1], slopes[1], 0.5 * tr.s1);
          if (std::abs(mid.x - tr.x_m) > kJunctionTolerance ||
              std::abs(mid.y - tr.y_m) > kJunctionTolerance ||
              std::abs(mid.psi - tr.psi_m) > kJunctionTolerance) {
            ThrowChain(i, "clothoid midpoint does not lie on the chained path");
          }
        }
        pose = AdvancePiece(pose, kappas[k], slopes[k], lengths[k]);
        offset += lengths[k];
      }
      kappa = tr.kappa_f;
    }
    s += seg.Length();
    t += seg.Duration();
  }
  plan.segments_ = std::move(segments);
  return plan;
}

double PathPlan::Length() const {
  if (segments_.empty()) return 0.0;
  return seg_start_s_.back() + segments_.back().Length();
}

double PathPlan::Duration() const {
  if (segments_.empty()) return 0.0;
  return seg_start_t_.back() + segments_.back().Duration();
}

const PathPlan::Piece& PathPlan::PieceAt(double s) const {
  auto it = std::upper_bound(
      pieces_.begin(), pieces_.end(), s,
      [](double value, const Piece& p) { return value < p.s_start; });
  if (it != pieces_.begin()) --it;
  return *it;
}

double PathPlan::CurvatureAt(double s) const {
  if (segments_.empty() || !(s >= 0.0 && s <= Length())) {
    std::ostringstream msg;
    msg << "arc length " << s << " outside plan range [0, " << Length() << "]";
    throw Error(ErrorCode::kOutOfRange, msg.str());
  }
  const Piece& p = PieceAt(s);
  return p.kappa0 + p.slope * (s - p.s_start);
}

double PathPlan::CurvatureClamped(double s) const {
  if (segments_.empty()) return 0.0;
  return CurvatureAt(std::clamp(s, 0.0, Length()));
}

Pose PathPlan::PoseAt(double s) const {
  if (segments_.empty() || !(s >= 0.0 && s <= Length())) {
    std::ostringstream msg;
    msg << "arc length " << s << " outside plan range [0, " << Length() << "]";
    throw Error(ErrorCode::kOutOfRange, msg.str());
  }
  const Piece& p = PieceAt(s);
  return AdvancePiece(p.start, p.kappa0, p.slope, s - p.s_start);
}

std::size_t PathPlan::SegmentIndexAtTime(double t) const {
  if (segments_.empty()) return 0;
  auto it = std::upper_bound(seg_start_t_.begin(), seg_start_t_.end(), t);
  return it == seg_start_t_.begin() ? 0 : (it - seg_start_t_.begin()) - 1;
}

std::size_t PathPlan::SegmentIndexAt(double s) const {
  if (segments_.empty()) return 0;
  auto it = std::upper_bound(seg_start_s_.begin(), seg_start_s_.end(), s);
  return it == seg_start_s_.begin() ? 0 : (it - seg_start_s_.begin()) - 1;
}

DesiredMotion PathPlan::DesiredAt(double t) const {
  if (segments_.empty()) return {};
  const std::size_t i = SegmentIndexAtTime(std::max(t, 0.0));
  const Segment& seg = segments_[i];
  const double tau = std::max(t, 0.0) - seg_start_t_[i];
  const double s0 = seg_start_s_[i];
  if (const auto* st = std::get_if<StraightSegment>(&seg.shape)) {
    if (tau > st->delta_t) {  // only past the final segment
      return {s0 + st->delta_s + st->v_f * (tau - st->delta_t), st->v_f};
    }
    return {s0 + st->ArcLengthAt(tau), st->VelocityAt(tau)};
  }
  return {s0 + seg.speed * tau, seg.speed};
}

std::vector<PathSample> PathPlan::Sample(double ds) const {
  if (!(ds > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sample spacing must be positive");
  }
  std::vector<PathSample> out;
  if (segments_.empty()) return out;
  const double length = Length();
  const auto n = static_cast<std::size_t>(std::floor(length / ds + 1e-9));
  for (std::size_t k = 0; k <= n + 1; ++k) {
    double s = std::min(static_cast<double>(k) * ds, length);
    if (k == n + 1 && (out.empty() || out.back().s >= length)) break;
    const std::size_t i = SegmentIndexAt(s);
    const Segment& seg = segments_[i];
    const double u = s - seg_start_s_[i];
    double t = seg_start_t_[i];
    double v = seg.speed;
    if (const auto* st = std::get_if<StraightSegment>(&seg.shape)) {
      const double tau = st->TimeAt(u);
      t += tau;
      v = st->VelocityAt(tau);
    } else {
      t += u / seg.speed;
    }
    const Pose p = PoseAt(s);
    out.push_back({s, p.x, p.y, p.psi, CurvatureAt(s), t, v});
  }
  return out;
}

PathPlan ComposeManeuver(const Pose& origin, const std::vector<SegmentSpec>& specs,
                         const ClothoidSolverOptions& options) {
  if (specs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "maneuver has no segments");
  }
  Pose pose = origin;
  double kappa = 0.0;
  double s = 0.0;
  std::optional<double> end_speed;
  std::vector<Segment> segments;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (const auto* st = std::get_if<StraightSpec>(&specs[i])) {
      if (st->start &&
          (std::abs(st->start->x - pose.x) > kJunctionTolerance ||
           std::abs(st->start->y - pose.y) > kJunctionTolerance ||
           std::abs(st->start->psi - pose.psi) > kJunctionTolerance)) {
        ThrowChain(i, "straight segment start pose does not match the chain");
      }
      if (std::abs(kappa) > kJunctionTolerance) {
        ThrowChain(i, "straight segment follows nonzero curvature");
      }
      StraightSegment seg = StraightProfile(st->v_s, st->v_f, st->delta_s);
      seg.s_s = s;
      segments.push_back({seg, 0.0});
      pose = AdvancePiece(pose, 0.0, 0.0, st->delta_s);
      s += st->delta_s;
      end_speed = st->v_f;
      continue;
    }
    const auto& cl = std::get<ClothoidSpec>(specs[i]);
    BoundaryConditions bc;
    if (cl.absolute) {
      bc = *cl.absolute;
      if (std::abs(bc.x_s - pose.x) > kJunctionTolerance ||
          std::abs(bc.y_s - pose.y) > kJunctionTolerance ||
          std::abs(bc.psi_s - pose.psi) > kJunctionTolerance ||
          std::abs(bc.kappa_s - kappa) > kJunctionTolerance) {
        ThrowChain(i, "turning section start does not match the chain");
      }
    } else {
      const double c = std::cos(pose.psi), sn = std::sin(pose.psi);
      bc = {pose.x, pose.y, pose.psi, kappa,
            pose.x + c * cl.dx - sn * cl.dy, pose.y + sn * cl.dx + c * cl.dy,
            pose.psi + cl.dpsi, cl.kappa_f};
    }
    ClothoidTriple triple;
    try {
      triple = SolveThreeClothoid(bc, cl.ratio, options).best;
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "segment " << i << ": " << e.what();
      throw Error(e.code(), msg.str());
    }
    triple.s_s = s;
    const double speed = cl.speed ? *cl.speed : end_speed.value_or(0.0);
    segments.push_back({triple, speed});
    pose = {bc.x_f, bc.y_f, bc.psi_f};
    kappa = bc.kappa_f;
    s += triple.Length();
    end_speed = speed;
  }
  return PathPlan::FromSegments(origin, std::move(segments));
}

std::vector<SegmentSpec> LaneChangeManeuver(double speed, double ratio,
                                            double accel_length, double dx,
                                            double dy, double dpsi,
                                            double final_length) {
  std::vector<SegmentSpec> specs;
  specs.push_back(StraightSpec{accel_length, 0.0, speed, std::nullopt});
  ClothoidSpec turn;
  turn.dx = dx;
  turn.dy = dy;
  turn.dpsi = dpsi;
  turn.ratio = ratio;
  specs.push_back(turn);
  specs.push_back(StraightSpec{final_length, speed, speed, std::nullopt});
  return specs;
}

}  // namespace unicycle::planner
