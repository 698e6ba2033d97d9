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

#include "unicycle/app/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>

#include "unicycle/app/io.hpp"
#include "unicycle/control/linear.hpp"
#include "unicycle/sim/simulator.hpp"

namespace unicycle::app {
namespace {

namespace fs = std::filesystem;
std::string Num(double v) { return FormatNumber(v); }

std::string Join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string Short(double v, int digits = 5) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*g", digits, v);
  return buf.data();
}

// Runs `body`, turning any exception into a status on `result`.
CommandResult Guard(const std::function<void(CommandResult*)>& body) {
  CommandResult result;
  try {
    body(&result);
  } catch (const Error& e) {
    result.status = e.code();
    if (!result.summary.empty()) result.summary += "\n";
    result.summary += std::string("error (") + ErrorCodeName(e.code()) + "): " + e.what();
  } catch (const std::exception& e) {
    result.status = ErrorCode::kInternal;
    if (!result.summary.empty()) result.summary += "\n";
    result.summary += std::string("error (Internal): ") + e.what();
  }
  return result;
}

void Emit(CommandResult* result, const std::string& path, const std::string& content) {
  WriteFileAtomic(path, content);
  result->files.push_back(path);
}

std::vector<double> SpeedGrid(const AnalyzeGrid& g) {
  std::vector<double> out;
  const auto n = static_cast<long long>(std::floor((g.speed_max - g.speed_min) / g.speed_step + 1e-9));
  for (long long i = 0; i <= n; ++i) out.push_back(g.speed_min + static_cast<double>(i) * g.speed_step);
  return out;
}

std::vector<std::string> MetricsFields(const sim::Metrics& m) {
  return {Num(m.max_abs_tilt), Num(m.max_abs_gamma), Num(m.max_abs_r),
          Num(m.max_abs_F),    Num(m.max_abs_T),     Num(m.mu_required),
          Num(m.max_abs_P_F),  Num(m.max_abs_P_T),   m.fell ? "1" : "0",
          Num(m.final_eps),    Num(m.final_chi),     Num(m.energy_drift)};
}

std::vector<std::string> MetricsRow(double ratio, double speed, const sim::Metrics& m,
                                    ErrorCode outcome, const std::string& message) {
  std::vector<std::string> row = {Num(ratio), Num(speed)};
  for (auto& f : MetricsFields(m)) row.push_back(std::move(f));
  row.push_back(ErrorCodeName(outcome));
  row.push_back(message);
  return row;
}

// Ratio of the first turning section, or 0 for a plan without one.
double PlanRatio(const planner::PathPlan& plan) {
  for (const auto& seg : plan.segments()) {
    if (!seg.IsStraight()) return std::get<planner::ClothoidTriple>(seg.shape).ratio;
  }
  return 0.0;
}

// Highest reference speed reached along the plan.
double PlanSpeed(const planner::PathPlan& plan) {
  double v = 0.0;
  for (const auto& seg : plan.segments()) {
    if (seg.IsStraight()) {
      const auto& s = std::get<planner::StraightSegment>(seg.shape);
      v = std::max({v, s.v_s, s.v_f});
    } else {
      v = std::max(v, seg.speed);
    }
  }
  return v;
}

std::string RatioTag(double r) { return "S" + Num(r); }

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk:
      return 0;
    case ErrorCode::kConfig:
    case ErrorCode::kInvalidArgument:
      return 1;
    case ErrorCode::kFell:
    case ErrorCode::kTiltSingular:
      return 2;
    case ErrorCode::kLiftOff:
      return 3;
    default:
      return 4;
  }
}

const std::vector<std::string>& TraceColumns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = {"t"};
    for (const char* name : dynamics::State::kNames) c.emplace_back(name);
    for (const char* name : {"F", "T", "Kx", "Ky", "Kz", "mu", "P_F", "P_T", "E", "kappa",
                             "s_des", "v_des", "phase"}) {
      c.emplace_back(name);
    }
    return c;
  }();
  return cols;
}

const std::vector<std::string>& MetricsColumns() {
  static const std::vector<std::string> cols = {
      "ratio",       "speed",       "max_abs_tilt", "max_abs_gamma", "max_abs_r",
      "max_abs_F",   "max_abs_T",   "mu_required",  "max_abs_P_F",   "max_abs_P_T",
      "fell",        "final_eps",   "final_chi",    "energy_drift",  "outcome",
      "message"};
  return cols;
}

CommandResult CmdAnalyze(const RunConfig& config) {
  return Guard([&](CommandResult* result) {
    const auto& p = config.params;
    p.Validate();
    const std::vector<double> speeds = SpeedGrid(config.analyze);

    std::vector<std::string> header = {"speed", "phidot"};
    for (int i = 1; i <= 4; ++i) {
      header.push_back("re_" + std::to_string(i));
      header.push_back("im_" + std::to_string(i));
    }
    CsvTable roots(header);
    std::vector<std::vector<double>> re(4), im(4);
    for (double v : speeds) {
      const double phidot = v / p.R;
      auto lr = control::ComputeLateralRoots(p, phidot);
      auto r = lr.roots;
      // Descending real part, then imaginary part, so curves stay on their
      // branch across the grid.
      std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
      });
      std::vector<std::string> row = {Num(v), Num(phidot)};
      for (int i = 0; i < 4; ++i) {
        row.push_back(Num(r[i].real()));
        row.push_back(Num(r[i].imag()));
        re[i].push_back(r[i].real());
        im[i].push_back(r[i].imag());
      }
      roots.AddRow(row);
    }
    Emit(result, Join(config.out_dir, "roots.csv"), roots.str());

    const control::CriticalSpeeds cs = control::ComputeCriticalSpeeds(p);
    const double lon = control::LongitudinalRoot(p);
    CsvTable crit({"quantity", "value", "unit"});
    crit.AddRow({"v1", Num(cs.v1), "m/s"});
    crit.AddRow({"v2", Num(cs.v2), "m/s"});
    crit.AddRow({"v3", Num(cs.v3), "m/s"});
    crit.AddRow({"longitudinal_root_pos", Num(lon), "1/s"});
    crit.AddRow({"longitudinal_root_neg", Num(-lon), "1/s"});
    Emit(result, Join(config.out_dir, "critical_speeds.csv"), crit.str());

    if (config.svg) {
      Panel re_panel{"Real parts of the lateral roots", "speed [m/s]", "Re(lambda) [1/s]", {}};
      Panel im_panel{"Imaginary parts of the lateral roots", "speed [m/s]",
                     "Im(lambda) [1/s]", {}};
      for (int i = 0; i < 4; ++i) {
        re_panel.series.push_back({"root " + std::to_string(i + 1), speeds, re[i], true});
        im_panel.series.push_back({"root " + std::to_string(i + 1), speeds, im[i], true});
      }
      for (double vc : {cs.v1, cs.v2, cs.v3}) {
        re_panel.series.push_back({"critical " + Short(vc, 4), {vc, vc},
                                   {*std::min_element(re[3].begin(), re[3].end()),
                                    *std::max_element(re[0].begin(), re[0].end())},
                                   false});
      }
      Emit(result, Join(config.out_dir, "fig4.svg"),
           RenderSvg("Characteristic roots and critical speeds", {re_panel, im_panel}, 2));
    }

    result->summary = "critical speeds: v1 = " + Short(cs.v1) + " m/s, v2 = " +
                      Short(cs.v2) + " m/s, v3 = " + Short(cs.v3) +
                      " m/s\nlongitudinal roots: +-" + Short(lon, 6) + " 1/s\n" +
                      std::to_string(speeds.size()) + " grid speeds";
  });
}

CommandResult CmdPlan(const RunConfig& config) {
  return Guard([&](CommandResult* result) {
    std::vector<std::optional<double>> ratios;
    if (config.plan_ratios.empty()) {
      ratios.emplace_back(std::nullopt);
    } else {
      for (double r : config.plan_ratios) ratios.emplace_back(r);
    }
    Panel path{"Path", "x [m]", "y [m]", {}, true};
    Panel curv{"Curvature", "s [m]", "kappa [1/m]", {}};
    std::ostringstream summary;
    for (const auto& ratio : ratios) {
      const planner::PathPlan plan = BuildPlan(config, ratio);
      const std::string tag = ratio ? "_" + RatioTag(*ratio) : "";
      Emit(result, Join(config.out_dir, "plan" + tag + ".json"), PlanToJson(plan));

      CsvTable csv({"s", "x", "y", "psi", "kappa", "t", "v_des"});
      Series xy{ratio ? "S = " + Num(*ratio) : "path", {}, {}};
      Series k{xy.name, {}, {}};
      for (const auto& smp : plan.Sample(config.sample_ds)) {
        csv.AddRow({Num(smp.s), Num(smp.x), Num(smp.y), Num(smp.psi), Num(smp.kappa),
                    Num(smp.t), Num(smp.v_des)});
        xy.x.push_back(smp.x);
        xy.y.push_back(smp.y);
        k.x.push_back(smp.s);
        k.y.push_back(smp.kappa);
      }
      Emit(result, Join(config.out_dir, "path" + tag + ".csv"), csv.str());
      path.series.push_back(std::move(xy));
      curv.series.push_back(std::move(k));

      summary << "plan" << tag << ": length " << Short(plan.Length(), 6) << " m, duration "
              << Short(plan.Duration(), 6) << " s";
      for (const auto& seg : plan.segments()) {
        if (seg.IsStraight()) continue;
        const auto& c = std::get<planner::ClothoidTriple>(seg.shape);
        summary << "; breakpoints " << Short(c.s_s + c.s0, 6) << " / "
                << Short(c.s_s + c.s0 + c.s1, 6) << " / " << Short(c.s_s + c.Length(), 6)
                << " m, slopes " << Short(c.kp0, 4) << " / " << Short(c.kp1, 4) << " / "
                << Short(c.kp2, 4) << " 1/m^2";
      }
      summary << "\n";
    }
    if (config.svg) {
      Emit(result, Join(config.out_dir, "fig2.svg"),
           RenderSvg("Clothoid lane change", {path, curv}, 2));
    }
    result->summary = summary.str();
    if (!result->summary.empty()) result->summary.pop_back();
  });
}

CommandResult CmdSimulate(const RunConfig& config) {
  return Guard([&](CommandResult* result) {
    const planner::PathPlan plan =
        config.plan_file.empty() ? BuildPlan(config) : LoadPlan(config.plan_file);
    const sim::SimulationResult run = sim::Simulate(plan, config.params, config.sim);

    CsvTable trace(TraceColumns());
    for (const auto& smp : run.trace.samples) {
      std::vector<std::string> row = {Num(smp.t)};
      const dynamics::Vector12 x = smp.x.ToVector();
      for (int i = 0; i < dynamics::State::kSize; ++i) row.push_back(Num(x[i]));
      for (double v : {smp.u.F, smp.u.T, smp.contact.Kx, smp.contact.Ky, smp.contact.Kz,
                       smp.contact.mu_required, smp.P_F, smp.P_T, smp.E, smp.kappa,
                       smp.s_des, smp.v_des}) {
        row.push_back(Num(v));
      }
      row.push_back(std::to_string(static_cast<int>(smp.phase)));
      trace.AddRow(row);
    }
    Emit(result, Join(config.out_dir, "trace.csv"), trace.str());

    CsvTable metrics(MetricsColumns());
    metrics.AddRow(MetricsRow(PlanRatio(plan), PlanSpeed(plan), run.metrics, run.outcome,
                              run.message));
    Emit(result, Join(config.out_dir, "metrics.csv"), metrics.str());

    if (config.svg) {
      std::vector<double> t;
      std::array<std::vector<double>, 12> y;
      for (const auto& smp : run.trace.samples) {
        t.push_back(smp.t);
        const double v[12] = {smp.x.theta, smp.x.gamma, smp.x.eps, smp.x.chi,
                              smp.x.r,     smp.u.F,     smp.u.T,   smp.P_F,
                              smp.P_T,     smp.contact.mu_required,
                              smp.kappa,   smp.v_des};
        for (int i = 0; i < 12; ++i) y[static_cast<std::size_t>(i)].push_back(v[i]);
      }
      const std::vector<Panel> panels = {
          {"Tilt angles", "t [s]", "[rad]", {{"theta", t, y[0]}, {"gamma", t, y[1]}}},
          {"Path errors", "t [s]", "[m], [rad]", {{"eps [m]", t, y[2]}, {"chi [rad]", t, y[3]}}},
          {"Lateral mass position", "t [s]", "r [m]", {{"r", t, y[4]}}},
          {"Inputs", "t [s]", "[N], [N m]", {{"F [N]", t, y[5]}, {"T [N m]", t, y[6]}}},
          {"Actuator power", "t [s]", "[W]", {{"P_F", t, y[7]}, {"P_T", t, y[8]}}},
          {"Required friction", "t [s]", "mu", {{"mu", t, y[9]}}},
      };
      Emit(result, Join(config.out_dir, "fig5.svg"),
           RenderSvg("Lane change simulation", panels, 2));
    }

    const auto& m = run.metrics;
    std::ostringstream s;
    s << "outcome: " << ErrorCodeName(run.outcome) << " at t = " << Short(run.end_time, 6)
      << " s";
    if (!run.message.empty()) s << " (" << run.message << ")";
    s << "\nmax |theta| " << Short(m.max_abs_tilt, 4) << " rad, max |r| "
      << Short(m.max_abs_r, 4) << " m, max |F| " << Short(m.max_abs_F, 4) << " N, max |T| "
      << Short(m.max_abs_T, 4) << " N m\nmax |P_F| " << Short(m.max_abs_P_F, 4)
      << " W, max |P_T| " << Short(m.max_abs_P_T, 4) << " W, mu required "
      << Short(m.mu_required, 4) << "\nfinal eps " << Short(m.final_eps, 4)
      << " m, final chi " << Short(m.final_chi, 4) << " rad, energy drift "
      << Short(m.energy_drift, 3);
    result->summary = s.str();
    result->status = run.outcome;
  });
}

CommandResult CmdSweep(const RunConfig& config) {
  return Guard([&](CommandResult* result) {
    if (config.ratios.empty()) throw Error(ErrorCode::kConfig, "ratio list is empty");
    if (config.speeds.empty()) throw Error(ErrorCode::kConfig, "speed list is empty");
    const auto rows =
        sim::Sweep(config.params, config.sim, config.ratios, config.speeds, config.threads);

    CsvTable csv(MetricsColumns());
    int failed = 0;
    for (const auto& row : rows) {
      csv.AddRow(MetricsRow(row.ratio, row.speed, row.metrics, row.outcome, row.message));
      failed += row.outcome != ErrorCode::kOk;
    }
    Emit(result, Join(config.out_dir, "sweep.csv"), csv.str());

    if (config.svg) {
      for (double v : config.speeds) {
        std::vector<double> s, tilt, gamma, r, F, T, mu;
        for (const auto& row : rows) {
          if (row.speed != v) continue;
          s.push_back(row.ratio);
          tilt.push_back(row.metrics.max_abs_tilt);
          gamma.push_back(row.metrics.max_abs_gamma);
          r.push_back(row.metrics.max_abs_r);
          F.push_back(row.metrics.max_abs_F);
          T.push_back(row.metrics.max_abs_T);
          mu.push_back(row.metrics.mu_required);
        }
        const std::vector<Panel> panels = {
            {"Maximum tilt", "S", "[rad]", {{"max |theta|", s, tilt}, {"max |gamma|", s, gamma}}},
            {"Maximum lateral mass excursion", "S", "[m]", {{"max |r|", s, r}}},
            {"Maximum inputs", "S", "[N], [N m]", {{"max |F|", s, F}, {"max |T|", s, T}}},
            {"Required friction", "S", "mu", {{"mu required", s, mu}}},
        };
        Emit(result, Join(config.out_dir, "sweep_v" + Num(v) + ".svg"),
             RenderSvg("Sensitivity to the clothoid ratio at " + Num(v) + " m/s", panels, 2));
      }
    }
    result->summary = std::to_string(rows.size()) + " cells, " +
                      std::to_string(rows.size() - static_cast<std::size_t>(failed)) +
                      " completed, " + std::to_string(failed) + " failed";
  });
}

}  // namespace unicycle::app
