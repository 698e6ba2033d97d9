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

#ifndef UNICYCLE_APP_COMMANDS_HPP_
#define UNICYCLE_APP_COMMANDS_HPP_

#include <string>
#include <vector>

#include "unicycle/app/config.hpp"
#include "unicycle/error.hpp"

namespace unicycle::app {

// Commands never throw. Failures land in `status` with a readable summary;
// files already written are listed either way.
struct CommandResult {
  ErrorCode status = ErrorCode::kOk;
  std::string summary;             // human-readable, one or more lines
  std::vector<std::string> files;  // paths written, in order
};

// roots.csv, critical_speeds.csv and fig4.svg.
CommandResult CmdAnalyze(const RunConfig& config);
// plan.json and path.csv, or plan_S<r>.json and path_S<r>.csv per entry of
// plan_ratios; fig2.svg.
CommandResult CmdPlan(const RunConfig& config);
// trace.csv, metrics.csv and fig5.svg. Uses plan_file when set.
CommandResult CmdSimulate(const RunConfig& config);
// sweep.csv and sweep_v<speed>.svg per speed.
CommandResult CmdSweep(const RunConfig& config);

// Process exit status: 0 success, 1 configuration or usage, 2 fall or tilt
// singularity, 3 wheel lift-off, 4 solver, I/O and any other failure.
int ExitCodeFor(ErrorCode code);

// Column headers of the CSV outputs.
const std::vector<std::string>& TraceColumns();
const std::vector<std::string>& MetricsColumns();

}  // namespace unicycle::app

#endif  // UNICYCLE_APP_COMMANDS_HPP_
