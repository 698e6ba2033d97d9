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

#include "unicycle/unicycle.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include "unicycle/app/commands.hpp"
#include "unicycle/app/config.hpp"
#include "unicycle/app/io.hpp"
#include "unicycle/control/linear.hpp"
#include "unicycle/error.hpp"
#include "unicycle/sim/simulator.hpp"

struct uc_config {
  unicycle::app::RunConfig config;
};

struct uc_plan {
  unicycle::planner::PathPlan plan;
};

struct uc_result {
  unicycle::app::CommandResult result;
};

namespace {

using unicycle::Error;
using unicycle::ErrorCode;

thread_local std::string last_error;

uc_status Fail(ErrorCode code, const std::string& message) {
  last_error = message;
  return static_cast<uc_status>(code);
}

// Runs `body` with the exception boundary every entry point needs.
template <typename F>
uc_status Call(F&& body) {
  try {
    last_error.clear();
    body();
    return UC_OK;
  } catch (const Error& e) {
    return Fail(e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(ErrorCode::kInternal, "out of memory");
  } catch (const std::exception& e) {
    return Fail(ErrorCode::kInternal, e.what());
  } catch (...) {
    return Fail(ErrorCode::kInternal, "unknown failure");
  }
}

void Require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

unicycle::dynamics::UnicycleParams ToParams(const uc_params* p) {
  Require(p != nullptr, "params is NULL");
  unicycle::dynamics::UnicycleParams out;
  out.m = p->m;
  out.m1 = p->m1;
  out.m2 = p->m2;
  out.h = p->h;
  out.R = p->R;
  out.g = p->g;
  out.Validate();
  return out;
}

std::vector<double> Grid(const char* spec) {
  Require(spec != nullptr, "grid spec is NULL");
  return unicycle::app::ParseGrid(spec);
}

using Command = unicycle::app::CommandResult (*)(const unicycle::app::RunConfig&);

uc_status RunCommand(Command cmd, const uc_config* config, uc_result** out) {
  if (out) *out = nullptr;
  uc_result* holder = nullptr;
  const uc_status st = Call([&] {
    Require(config != nullptr, "config is NULL");
    holder = new uc_result{cmd(config->config)};
  });
  if (st != UC_OK) return st;
  const uc_status outcome = static_cast<uc_status>(holder->result.status);
  if (outcome != UC_OK) last_error = holder->result.summary;
  if (out) {
    *out = holder;
  } else {
    delete holder;
  }
  return outcome;
}

}  // namespace

extern "C" {

const char* uc_version(void) { return "1.0.0"; }

const char* uc_status_name(uc_status status) {
  return unicycle::ErrorCodeName(static_cast<ErrorCode>(status));
}

const char* uc_last_error(void) { return last_error.c_str(); }

int uc_exit_code(uc_status status) {
  return unicycle::app::ExitCodeFor(static_cast<ErrorCode>(status));
}

void uc_params_default(uc_params* out) {
  if (!out) return;
  const unicycle::dynamics::UnicycleParams p;
  *out = {p.m, p.m1, p.m2, p.h, p.R, p.g};
}

uc_status uc_critical_speeds(const uc_params* p, double out[3]) {
  return Call([&] {
    Require(out != nullptr, "output is NULL");
    const auto cs = unicycle::control::ComputeCriticalSpeeds(ToParams(p));
    out[0] = cs.v1;
    out[1] = cs.v2;
    out[2] = cs.v3;
  });
}

uc_status uc_longitudinal_root(const uc_params* p, double* out) {
  return Call([&] {
    Require(out != nullptr, "output is NULL");
    *out = unicycle::control::LongitudinalRoot(ToParams(p));
  });
}

uc_status uc_lateral_roots(const uc_params* p, double phidot, double re[4], double im[4]) {
  return Call([&] {
    Require(re != nullptr && im != nullptr, "output is NULL");
    const auto lr = unicycle::control::ComputeLateralRoots(ToParams(p), phidot);
    for (int i = 0; i < 4; ++i) {
      re[i] = lr.roots[static_cast<std::size_t>(i)].real();
      im[i] = lr.roots[static_cast<std::size_t>(i)].imag();
    }
  });
}

uc_status uc_synthesize_gains(const uc_params* p, double phidot, double pole,
                              double lateral[6], double longitudinal[4], double* beta) {
  return Call([&] {
    const auto g = unicycle::control::SynthesizeGains(ToParams(p), phidot, pole);
    if (lateral) {
      const double v[6] = {g.D_theta, g.D_r, g.P_r, g.P_theta, g.P_chi, g.P_eps};
      for (int i = 0; i < 6; ++i) lateral[i] = v[i];
    }
    if (longitudinal) {
      const double v[4] = {g.D_phi, g.D_gamma, g.P_gamma, g.P_s};
      for (int i = 0; i < 4; ++i) longitudinal[i] = v[i];
    }
    if (beta) *beta = g.beta;
  });
}

uc_status uc_config_default(uc_config** out) {
  return Call([&] {
    Require(out != nullptr, "output is NULL");
    *out = new uc_config{unicycle::app::DefaultConfig()};
  });
}

uc_status uc_config_load(const char* path, uc_config** out) {
  return Call([&] {
    Require(out != nullptr, "output is NULL");
    *out = nullptr;
    Require(path != nullptr, "path is NULL");
    *out = new uc_config{unicycle::app::LoadConfig(path)};
  });
}

uc_status uc_config_parse(const char* text, const char* source, uc_config** out) {
  return Call([&] {
    Require(out != nullptr, "output is NULL");
    *out = nullptr;
    Require(text != nullptr, "text is NULL");
    *out = new uc_config{unicycle::app::ParseConfig(text, source ? source : "<config>")};
  });
}

uc_status uc_config_clone(const uc_config* config, uc_config** out) {
  return Call([&] {
    Require(config != nullptr && out != nullptr, "NULL argument");
    *out = new uc_config{config->config};
  });
}

void uc_config_free(uc_config* config) { delete config; }

uc_status uc_config_get_params(const uc_config* config, uc_params* out) {
  return Call([&] {
    Require(config != nullptr && out != nullptr, "NULL argument");
    const auto& p = config->config.params;
    *out = {p.m, p.m1, p.m2, p.h, p.R, p.g};
  });
}

uc_status uc_config_set_params(uc_config* config, const uc_params* params) {
  return Call([&] {
    Require(config != nullptr, "config is NULL");
    config->config.params = ToParams(params);
  });
}

uc_status uc_config_set_out_dir(uc_config* config, const char* dir) {
  return Call([&] {
    Require(config != nullptr, "config is NULL");
    Require(dir != nullptr && *dir != '\0', "output directory is empty");
    config->config.out_dir = dir;
  });
}

uc_status uc_config_set_dt(uc_config* config, double dt) {
  return Call([&] {
    Require(config != nullptr, "config is NULL");
    auto sim = config->config.sim;
    sim.dt = dt;
    sim.Validate();
    config->config.sim = sim;
  });
}

uc_status uc_config_set_fall_threshold(uc_config* config, double rad) {
  return Call([&] {
    Require(config != nullptr, "config is NULL");
    auto sim = config->config.sim;
    sim.fall_threshold = rad;
    sim.Validate();
    config->config.sim = sim;
  });
}

uc_status uc_config_set_svg(uc_config* config, int enabled) {
  return Call([&] {
    Require(config != nullptr, "config is NULL");
    config->config.svg = enabled != 0;
  });
}

uc_status uc_config_set_threads(uc_config* config, int threads) {
  return Call([&] {
    Require(config != nullptr, "config is NULL");
    Require(threads >= 1, "threads must be at least 1");
    config->config.threads = threads;
  });
}

uc_status uc_config_set_sweep_ratios(uc_config* config, const char* spec) {
  return Call([&] {
    Require(config != nullptr, "config is NULL");
    config->config.ratios = Grid(spec);
  });
}

uc_status uc_config_set_sweep_speeds(uc_config* config, const char* spec) {
  return Call([&] {
    Require(config != nullptr, "config is NULL");
    config->config.speeds = Grid(spec);
  });
}

uc_status uc_config_set_plan_ratios(uc_config* config, const char* spec) {
  return Call([&] {
    Require(config != nullptr, "config is NULL");
    config->config.plan_ratios = Grid(spec);
  });
}

uc_status uc_config_set_plan_file(uc_config* config, const char* path) {
  return Call([&] {
    Require(config != nullptr, "config is NULL");
    config->config.plan_file = path ? path : "";
  });
}

uc_status uc_plan_build(const uc_config* config, uc_plan** out) {
  return Call([&] {
    Require(config != nullptr && out != nullptr, "NULL argument");
    *out = nullptr;
    *out = new uc_plan{unicycle::app::BuildPlan(config->config)};
  });
}

uc_status uc_plan_load(const char* path, uc_plan** out) {
  return Call([&] {
    Require(path != nullptr && out != nullptr, "NULL argument");
    *out = nullptr;
    *out = new uc_plan{unicycle::app::LoadPlan(path)};
  });
}

uc_status uc_plan_save(const uc_plan* plan, const char* path) {
  return Call([&] {
    Require(plan != nullptr && path != nullptr, "NULL argument");
    unicycle::app::WriteFileAtomic(path, unicycle::app::PlanToJson(plan->plan));
  });
}

void uc_plan_free(uc_plan* plan) { delete plan; }

double uc_plan_length(const uc_plan* plan) { return plan ? plan->plan.Length() : 0.0; }

double uc_plan_duration(const uc_plan* plan) { return plan ? plan->plan.Duration() : 0.0; }

size_t uc_plan_segment_count(const uc_plan* plan) {
  return plan ? plan->plan.segments().size() : 0;
}

uc_status uc_plan_curvature_at(const uc_plan* plan, double s, double* out) {
  return Call([&] {
    Require(plan != nullptr && out != nullptr, "NULL argument");
    *out = plan->plan.CurvatureAt(s);
  });
}

uc_status uc_simulate(const uc_plan* plan, const uc_config* config, uc_metrics* out) {
  unicycle::sim::SimulationResult run;
  const uc_status st = Call([&] {
    Require(plan != nullptr && config != nullptr && out != nullptr, "NULL argument");
    run = unicycle::sim::Simulate(plan->plan, config->config.params, config->config.sim);
    const auto& m = run.metrics;
    *out = {m.max_abs_tilt, m.max_abs_gamma, m.max_abs_r,   m.max_abs_F,
            m.max_abs_T,    m.mu_required,   m.max_abs_P_F, m.max_abs_P_T,
            m.fell ? 1 : 0, m.final_eps,     m.final_chi,   m.energy_drift,
            run.end_time};
  });
  if (st != UC_OK) return st;
  if (run.outcome != ErrorCode::kOk) return Fail(run.outcome, run.message);
  return UC_OK;
}

uc_status uc_cmd_analyze(const uc_config* config, uc_result** out) {
  return RunCommand(unicycle::app::CmdAnalyze, config, out);
}

uc_status uc_cmd_plan(const uc_config* config, uc_result** out) {
  return RunCommand(unicycle::app::CmdPlan, config, out);
}

uc_status uc_cmd_simulate(const uc_config* config, uc_result** out) {
  return RunCommand(unicycle::app::CmdSimulate, config, out);
}

uc_status uc_cmd_sweep(const uc_config* config, uc_result** out) {
  return RunCommand(unicycle::app::CmdSweep, config, out);
}

uc_status uc_result_status(const uc_result* result) {
  return result ? static_cast<uc_status>(result->result.status) : UC_INVALID_ARGUMENT;
}

const char* uc_result_summary(const uc_result* result) {
  return result ? result->result.summary.c_str() : "";
}

size_t uc_result_file_count(const uc_result* result) {
  return result ? result->result.files.size() : 0;
}

const char* uc_result_file(const uc_result* result, size_t index) {
  if (!result || index >= result->result.files.size()) return nullptr;
  return result->result.files[index].c_str();
}

void uc_result_free(uc_result* result) { delete result; }

}  // extern "C"
