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

#ifndef UNICYCLE_SIM_SIMULATOR_HPP_
#define UNICYCLE_SIM_SIMULATOR_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "unicycle/control/linear.hpp"
#include "unicycle/dynamics/contact.hpp"
#include "unicycle/dynamics/params.hpp"
#include "unicycle/dynamics/state.hpp"
#include "unicycle/error.hpp"
#include "unicycle/planner/path_plan.hpp"

namespace unicycle::sim {

using dynamics::Input;
using dynamics::State;
using dynamics::UnicycleParams;

struct SimConfig {
  double dt = 1e-3;               // integration and control step, s
  double phidot_min = 1.0;        // lower clamp of the scheduled pitch rate
  double target_pole = -12.0;     // 1/s
  double fall_threshold = 1.0;    // rad, on |theta| and |gamma|
  int sample_stride = 10;         // steps per recorded sample

  // Throws kInvalidArgument on out-of-range fields.
  void Validate() const;
};

enum class Phase : int { kI = 1, kII = 2, kIII = 3 };

struct TraceSample {
  double t = 0.0;
  State x;
  Input u;
  dynamics::ContactForce contact;
  double P_F = 0.0;
  double P_T = 0.0;
  double E = 0.0;
  double work = 0.0;  // integral of P_F + P_T since t = 0
  Phase phase = Phase::kI;
  double kappa = 0.0;
  double s_des = 0.0;
  double v_des = 0.0;
};

struct Trace {
  std::vector<TraceSample> samples;
  std::vector<std::string> events;  // e.g. gain reuse after a failed synthesis
};

struct Metrics {
  double max_abs_tilt = 0.0;   // |theta|
  double max_abs_gamma = 0.0;  // pendulum tilt
  double max_abs_r = 0.0;
  double max_abs_F = 0.0;
  double max_abs_T = 0.0;
  double mu_required = 0.0;
  double max_abs_P_F = 0.0;
  double max_abs_P_T = 0.0;
  bool fell = false;
  double final_eps = 0.0;
  double final_chi = 0.0;
  // Largest |E - E(0) - work| relative to max(1 J, max |E|).
  double energy_drift = 0.0;
};

// Outcome of a closed-loop run. Runtime failures end the run early and are
// reported here rather than thrown, so the partial trace survives.
struct SimulationResult {
  Trace trace;
  Metrics metrics;  // accumulated every integration step
  ErrorCode outcome = ErrorCode::kOk;
  std::string message;
  double end_time = 0.0;
};

// One classical RK4 step with the input held constant.
State Step(const UnicycleParams& p, const State& x, const Input& u,
           const planner::PathPlan& plan, double dt);
State Step(const UnicycleParams& p, const State& x, const Input& u,
           double kappa, double dt);

// Phase of the reference at time t: before the first clothoid segment is I,
// from its start through the last clothoid II, afterwards III.
Phase PhaseAt(const planner::PathPlan& plan, double t);

// Scheduled pitch rate omega2 - omega3 tan(theta), clamped below.
double ScheduledPitchRate(const State& x, double phidot_min);

SimulationResult Simulate(const planner::PathPlan& plan, const UnicycleParams& p,
                          const SimConfig& config);
// Same from a given initial state instead of x(0) = 0.
SimulationResult Simulate(const planner::PathPlan& plan, const UnicycleParams& p,
                          const SimConfig& config, const State& initial);

// As Simulate, but throws kFell, kLiftOff, kPathSingular (and any other
// failure) instead of returning it.
Trace RunManeuver(const planner::PathPlan& plan, const UnicycleParams& p,
                  const SimConfig& config);

// Throws kEmptyTrace for a trace without samples.
Metrics ComputeMetrics(const Trace& trace,
                       double fall_threshold = SimConfig{}.fall_threshold);

struct SweepRow {
  double ratio = 0.0;
  double speed = 0.0;
  Metrics metrics;
  ErrorCode outcome = ErrorCode::kOk;
  std::string message;
};

// Lane-change maneuver of LaneChangeManeuver for every (ratio, speed) pair,
// rows ordered ratio-major. threads <= 1 runs serially; results do not
// depend on the thread count.
std::vector<SweepRow> Sweep(const UnicycleParams& p, const SimConfig& config,
                            const std::vector<double>& ratios,
                            const std::vector<double>& speeds, int threads = 1);

// Default grids: ratios 0.05, 0.10, ..., 0.80 and speeds 1, 1.5, 3 m/s.
std::vector<double> DefaultRatios();
std::vector<double> DefaultSpeeds();

}  // namespace unicycle::sim

#endif  // UNICYCLE_SIM_SIMULATOR_HPP_
