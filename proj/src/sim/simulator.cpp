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

#include "unicycle/sim/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "unicycle/dynamics/equations.hpp"

namespace unicycle::sim {
namespace {

using dynamics::Vector12;

// State derivative plus actuator power, integrated together so the work
// term sees the same stages as the state.
struct Augmented {
  Vector12 dx;
  double power;
};

template <typename Kappa>
Augmented Derivative(const UnicycleParams& p, const Vector12& x, const Input& u,
                     const Kappa& kappa) {
  const State s = State::FromVector(x);
  const dynamics::ActuatorPowers pw = dynamics::ComputeActuatorPowers(p, s, u);
  return {dynamics::Rhs(p, s, u, kappa), pw.P_F + pw.P_T};
}

template <typename Kappa>
State Rk4(const UnicycleParams& p, const State& x, const Input& u,
          const Kappa& kappa, double dt, double* work) {
  const Vector12 x0 = x.ToVector();
  const Augmented k1 = Derivative(p, x0, u, kappa);
  const Augmented k2 = Derivative(p, x0 + 0.5 * dt * k1.dx, u, kappa);
  const Augmented k3 = Derivative(p, x0 + 0.5 * dt * k2.dx, u, kappa);
  const Augmented k4 = Derivative(p, x0 + dt * k3.dx, u, kappa);
  if (work != nullptr) {
    *work += dt / 6.0 * (k1.power + 2.0 * k2.power + 2.0 * k3.power + k4.power);
  }
  return State::FromVector(x0 + dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx));
}

// Running maxima shared by the per-step accumulation and ComputeMetrics.
class MetricsAccumulator {
 public:
  void Add(const TraceSample& s) {
    if (!have_energy_) {
      e0_ = s.E;
      have_energy_ = true;
    }
    m_.max_abs_tilt = std::max(m_.max_abs_tilt, std::abs(s.x.theta));
    m_.max_abs_gamma = std::max(m_.max_abs_gamma, std::abs(s.x.gamma));
    m_.max_abs_r = std::max(m_.max_abs_r, std::abs(s.x.r));
    m_.max_abs_F = std::max(m_.max_abs_F, std::abs(s.u.F));
    m_.max_abs_T = std::max(m_.max_abs_T, std::abs(s.u.T));
    m_.mu_required = std::max(m_.mu_required, s.contact.mu_required);
    m_.max_abs_P_F = std::max(m_.max_abs_P_F, std::abs(s.P_F));
    m_.max_abs_P_T = std::max(m_.max_abs_P_T, std::abs(s.P_T));
    m_.final_eps = s.x.eps;
    m_.final_chi = s.x.chi;
    max_energy_ = std::max(max_energy_, std::abs(s.E));
    max_drift_ = std::max(max_drift_, std::abs(s.E - e0_ - s.work));
  }
  void MarkFell() { m_.fell = true; }
  Metrics Get() const {
    Metrics m = m_;
    m.energy_drift = max_drift_ / std::max(1.0, max_energy_);
    return m;
  }

 private:
  Metrics m_;
  bool have_energy_ = false;
  double e0_ = 0.0;
  double max_energy_ = 0.0;
  double max_drift_ = 0.0;
};

bool Exceeds(const State& x, double threshold) {
  return std::abs(x.theta) > threshold || std::abs(x.gamma) > threshold;
}

}  // namespace

void SimConfig::Validate() const {
  auto bad = [](const char* what) {
    throw Error(ErrorCode::kInvalidArgument, what);
  };
  if (!(dt > 0.0) || !std::isfinite(dt)) bad("dt must be positive");
  if (!(phidot_min > 0.0) || !std::isfinite(phidot_min)) {
    bad("phidot_min must be positive");
  }
  if (!(target_pole < 0.0) || !std::isfinite(target_pole)) {
    bad("target_pole must be negative");
  }
  if (!(fall_threshold > 0.0 && fall_threshold < std::numbers::pi / 2.0)) {
    bad("fall_threshold must lie in (0, pi/2)");
  }
  if (sample_stride < 1) bad("sample_stride must be at least 1");
}

State Step(const UnicycleParams& p, const State& x, const Input& u,
           const planner::PathPlan& plan, double dt) {
  return Rk4(p, x, u, plan, dt, nullptr);
}

State Step(const UnicycleParams& p, const State& x, const Input& u,
           double kappa, double dt) {
  return Rk4(p, x, u, kappa, dt, nullptr);
}

Phase PhaseAt(const planner::PathPlan& plan, double t) {
  const auto& segs = plan.segments();
  std::size_t first = segs.size(), last = 0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (!segs[i].IsStraight()) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == segs.size()) return Phase::kI;
  const std::size_t i = plan.SegmentIndexAtTime(t);
  if (i < first) return Phase::kI;
  return i <= last ? Phase::kII : Phase::kIII;
}

double ScheduledPitchRate(const State& x, double phidot_min) {
  return std::max(x.omega2 - x.omega3 * std::tan(x.theta), phidot_min);
}

SimulationResult Simulate(const planner::PathPlan& plan, const UnicycleParams& p,
                          const SimConfig& config) {
  return Simulate(plan, p, config, State{});
}

SimulationResult Simulate(const planner::PathPlan& plan, const UnicycleParams& p,
                          const SimConfig& config, const State& initial) {
  p.Validate();
  config.Validate();
  SimulationResult result;
  const double duration = plan.Duration();
  if (plan.empty() || !(duration > 0.0)) return result;

  const auto steps = static_cast<long>(std::ceil(duration / config.dt - 1e-9));
  MetricsAccumulator acc;
  State x = initial;
  double work = 0.0;
  control::Gains gains;
  bool have_gains = false;
  bool reusing = false;
  double t = 0.0;

  try {
    for (long k = 0;; ++k) {
      t = std::min(static_cast<double>(k) * config.dt, duration);
      const planner::DesiredMotion desired = plan.DesiredAt(t);

      const double phidot = ScheduledPitchRate(x, config.phidot_min);
      try {
        gains = control::SynthesizeGains(p, phidot, config.target_pole);
        have_gains = true;
        reusing = false;
      } catch (const Error& e) {
        const bool recoverable = e.code() == ErrorCode::kPlacementSingular ||
                                 e.code() == ErrorCode::kUnstableResidualPole;
        if (!recoverable || !have_gains) throw;
        if (!reusing) {
          std::ostringstream msg;
          msg << "t=" << t << ": reusing gains for phidot "
              << gains.scheduled_phidot << " (" << e.what() << ")";
          result.trace.events.push_back(msg.str());
        }
        reusing = true;
      }

      TraceSample s;
      s.t = t;
      s.x = x;
      s.u = control::Feedback(p, x, {desired.s_des, desired.v_des}, gains);
      s.contact = dynamics::ComputeContactForce(p, x, s.u);
      const dynamics::ActuatorPowers pw = dynamics::ComputeActuatorPowers(p, x, s.u);
      s.P_F = pw.P_F;
      s.P_T = pw.P_T;
      s.E = dynamics::TotalEnergy(p, x);
      s.work = work;
      s.phase = PhaseAt(plan, t);
      s.kappa = plan.CurvatureClamped(x.s);
      s.s_des = desired.s_des;
      s.v_des = desired.v_des;
      acc.Add(s);

      const bool fell = Exceeds(x, config.fall_threshold);
      if (fell || k == steps || k % config.sample_stride == 0) {
        result.trace.samples.push_back(s);
      }
      if (fell) {
        acc.MarkFell();
        std::ostringstream msg;
        msg << "fell at t=" << t << " s (theta " << x.theta << ", gamma "
            << x.gamma << ")";
        throw Error(ErrorCode::kFell, msg.str());
      }
      if (k == steps) break;
      const double h = std::min(config.dt, duration - t);
      x = Rk4(p, x, s.u, plan, h, &work);
    }
  } catch (const Error& e) {
    result.outcome = e.code();
    std::ostringstream msg;
    if (e.code() == ErrorCode::kFell) {
      msg << e.what();
    } else {
      msg << "t=" << t << " s: " << e.what();
    }
    result.message = msg.str();
  }
  result.end_time = t;
  result.metrics = acc.Get();
  return result;
}

Trace RunManeuver(const planner::PathPlan& plan, const UnicycleParams& p,
                  const SimConfig& config) {
  SimulationResult r = Simulate(plan, p, config);
  if (r.outcome != ErrorCode::kOk) throw Error(r.outcome, r.message);
  return std::move(r.trace);
}

Metrics ComputeMetrics(const Trace& trace, double fall_threshold) {
  if (trace.samples.empty()) {
    throw Error(ErrorCode::kEmptyTrace, "trace has no samples");
  }
  MetricsAccumulator acc;
  for (const TraceSample& s : trace.samples) {
    acc.Add(s);
    if (Exceeds(s.x, fall_threshold)) acc.MarkFell();
  }
  return acc.Get();
}

std::vector<SweepRow> Sweep(const UnicycleParams& p, const SimConfig& config,
                            const std::vector<double>& ratios,
                            const std::vector<double>& speeds, int threads) {
  p.Validate();
  config.Validate();
  std::vector<SweepRow> rows;
  for (double ratio : ratios) {
    for (double speed : speeds) {
      SweepRow row;
      row.ratio = ratio;
      row.speed = speed;
      rows.push_back(row);
    }
  }

  auto run_cell = [&](SweepRow& row) {
    try {
      const planner::PathPlan plan = planner::ComposeManeuver(
          planner::Pose{}, planner::LaneChangeManeuver(row.speed, row.ratio));
      SimulationResult r = Simulate(plan, p, config);
      row.metrics = r.metrics;
      row.outcome = r.outcome;
      row.message = r.message;
    } catch (const Error& e) {
      row.outcome = e.code();
      row.message = e.what();
    }
  };

  const int workers =
      std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(rows.size(), 1)));
  if (workers == 1) {
    for (SweepRow& row : rows) run_cell(row);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < rows.size(); i = next++) run_cell(rows[i]);
    });
  }
  for (std::thread& th : pool) th.join();
  return rows;
}

std::vector<double> DefaultRatios() {
  std::vector<double> r;
  for (int i = 1; i <= 16; ++i) r.push_back(0.05 * i);
  return r;
}

std::vector<double> DefaultSpeeds() { return {1.0, 1.5, 3.0}; }

}  // namespace unicycle::sim
