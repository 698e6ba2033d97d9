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

// Command-line front end over the C interface.

#include <cstdio>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "unicycle/unicycle.h"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string ratios;
  std::string speeds;
  std::string svg;
  std::string plan;
  double dt = 0.0;
  int threads = 0;
  bool seedless = false;
};

struct ConfigDeleter {
  void operator()(uc_config* c) const { uc_config_free(c); }
};
struct ResultDeleter {
  void operator()(uc_result* r) const { uc_result_free(r); }
};

int Report(uc_status status) {
  std::fprintf(stderr, "unicycle: %s: %s\n", uc_status_name(status), uc_last_error());
  return uc_exit_code(status);
}

// Applies the command-line overrides. `ratios_are_plan` routes --ratios to
// the plan family instead of the sweep grid.
uc_status Apply(const Options& o, uc_config* c, bool ratios_are_plan, CLI::App* sub) {
  uc_status st = UC_OK;
  auto chain = [&](uc_status next) {
    if (st == UC_OK) st = next;
  };
  auto given = [&](const char* name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (!o.out.empty()) chain(uc_config_set_out_dir(c, o.out.c_str()));
  if (given("--ratios")) {
    chain(ratios_are_plan ? uc_config_set_plan_ratios(c, o.ratios.c_str())
                          : uc_config_set_sweep_ratios(c, o.ratios.c_str()));
  }
  if (given("--speeds")) chain(uc_config_set_sweep_speeds(c, o.speeds.c_str()));
  if (!o.svg.empty()) chain(uc_config_set_svg(c, o.svg == "on"));
  if (given("--dt")) chain(uc_config_set_dt(c, o.dt));
  if (given("--threads")) chain(uc_config_set_threads(c, o.threads));
  if (given("--plan")) chain(uc_config_set_plan_file(c, o.plan.c_str()));
  return st;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unicycle lane-change planning, control and simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(uc_version()));

  Options o;
  struct Spec {
    const char* name;
    const char* help;
    uc_status (*run)(const uc_config*, uc_result**);
  };
  const Spec specs[] = {
      {"analyze", "Open-loop roots over a speed grid and the critical speeds", uc_cmd_analyze},
      {"plan", "Plan the configured maneuver and export it", uc_cmd_plan},
      {"simulate", "Closed-loop simulation of the maneuver", uc_cmd_simulate},
      {"sweep", "Clothoid-ratio sensitivity sweep", uc_cmd_sweep},
  };
  CLI::App* subs[4] = {};
  for (int i = 0; i < 4; ++i) {
    CLI::App* sub = app.add_subcommand(specs[i].name, specs[i].help);
    sub->add_option("--config", o.config, "JSON configuration file");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--svg", o.svg, "Write SVG figures")->check(CLI::IsMember({"on", "off"}));
    sub->add_flag("--seedless", o.seedless,
                  "Accepted for compatibility; every run is deterministic");
    const std::string name = specs[i].name;
    if (name == "plan" || name == "sweep") {
      sub->add_option("--ratios", o.ratios, "Clothoid ratios, a:b:step or a,b,c");
    }
    if (name == "sweep") {
      sub->add_option("--speeds", o.speeds, "Speeds in m/s, a:b:step or a,b,c");
      sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    }
    if (name == "simulate" || name == "sweep") {
      sub->add_option("--dt", o.dt, "Integration step in s")->check(CLI::PositiveNumber);
    }
    if (name == "simulate") sub->add_option("--plan", o.plan, "Plan JSON to simulate");
    subs[i] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : uc_exit_code(UC_CONFIG);
  }

  for (int i = 0; i < 4; ++i) {
    if (!subs[i]->parsed()) continue;
    uc_config* raw = nullptr;
    const uc_status loaded =
        o.config.empty() ? uc_config_default(&raw) : uc_config_load(o.config.c_str(), &raw);
    if (loaded != UC_OK) return Report(loaded);
    std::unique_ptr<uc_config, ConfigDeleter> config(raw);

    const uc_status applied = Apply(o, config.get(), i == 1, subs[i]);
    if (applied != UC_OK) {
      // Bad override values are usage errors.
      std::fprintf(stderr, "unicycle: %s: %s\n", uc_status_name(applied), uc_last_error());
      return uc_exit_code(UC_CONFIG);
    }

    uc_result* raw_result = nullptr;
    const uc_status st = specs[i].run(config.get(), &raw_result);
    std::unique_ptr<uc_result, ResultDeleter> result(raw_result);
    if (result) {
      std::printf("%s\n", uc_result_summary(result.get()));
      for (size_t k = 0; k < uc_result_file_count(result.get()); ++k) {
        std::printf("wrote %s\n", uc_result_file(result.get(), k));
      }
    }
    if (st != UC_OK) {
      std::fprintf(stderr, "unicycle: %s\n", uc_status_name(st));
      if (!result) std::fprintf(stderr, "%s\n", uc_last_error());
      return uc_exit_code(st);
    }
    return 0;
  }
  return uc_exit_code(UC_CONFIG);
}
