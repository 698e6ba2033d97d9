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

#ifndef UNICYCLE_APP_CONFIG_HPP_
#define UNICYCLE_APP_CONFIG_HPP_

#include <optional>
#include <string>
#include <vector>

#include "unicycle/dynamics/params.hpp"
#include "unicycle/planner/path_plan.hpp"
#include "unicycle/sim/simulator.hpp"

namespace unicycle::app {

struct ManeuverSegment {
  enum class Kind { kStraight, kLaneChange };
  Kind kind = Kind::kStraight;
  // straight
  double delta_s = 0.0;
  double v_s = 0.0;
  double v_f = 0.0;
  // lane_change, relative to the pose at its start
  double dx = 0.0;
  double dy = 0.0;
  double dpsi = 0.0;
  double kappa_f = 0.0;
  double ratio = 0.5;
  std::optional<double> speed;
};

struct AnalyzeGrid {
  double speed_min = 0.05;  // m/s
  double speed_max = 4.0;
  double speed_step = 0.05;
};

struct RunConfig {
  dynamics::UnicycleParams params;
  sim::SimConfig sim;
  planner::Pose origin;
  std::vector<ManeuverSegment> segments;  // defaults to the nominal lane change
  AnalyzeGrid analyze;
  std::vector<double> plan_ratios;        // plan: one plan per ratio if set
  double sample_ds = 0.01;                // path export resolution, m
  std::vector<double> ratios = sim::DefaultRatios();  // sweep grid
  std::vector<double> speeds = sim::DefaultSpeeds();
  int threads = 1;
  std::string out_dir = "out";
  bool svg = true;
  std::string plan_file;  // simulate: load this plan instead of planning

  // Throws kConfig describing the first invalid field.
  void Validate() const;
};

// Nominal maneuver: 5 m straight accelerating 0 -> 1.5 m/s, a 10 m x 3 m
// lane change at ratio 0.5, then 5 m at constant speed.
std::vector<ManeuverSegment> NominalManeuver();
RunConfig DefaultConfig();

// Strict parse: unknown keys and wrong types are errors. Messages start with
// "<source>:<line>:" so they point into the file. Throws kConfig.
RunConfig ParseConfig(const std::string& text, const std::string& source = "<config>");
// Throws kIo when the file cannot be read, kConfig otherwise.
RunConfig LoadConfig(const std::string& path);

// "a:b:step" (inclusive of b within rounding) or "a,b,c". Throws kConfig.
std::vector<double> ParseGrid(const std::string& spec);

std::vector<planner::SegmentSpec> ToSpecs(const std::vector<ManeuverSegment>& segments);
// Plans the configured maneuver, optionally with every lane-change ratio
// replaced.
planner::PathPlan BuildPlan(const RunConfig& config,
                            std::optional<double> ratio = std::nullopt);

}  // namespace unicycle::app

#endif  // UNICYCLE_APP_CONFIG_HPP_
