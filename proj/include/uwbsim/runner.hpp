// SPDX-License-Identifier: Apache-2.0
//
// uwbsim  impulse-radio UWB link-level simulation library
// Copyright (C) 2026 the uwbsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef UWBSIM_RUNNER_H
#define UWBSIM_RUNNER_H

#include <string>
#include <vector>

#include "uwbsim/run_config.hpp"

namespace uwbsim {

struct RunOutcome {
    int exit_code = 0;
    std::vector<std::string> files;     // CSVs written (only on success)
    std::vector<std::string> messages;  // human-readable progress / pass-fail lines
};

// Dispatches a validated config to the matching experiment and writes its
// CSV artifacts under output_dir. Outputs are written to a temporary file
// and renamed, so partial files never appear.
RunOutcome run_experiment(const RunConfig& config, const std::string& output_dir);

} // namespace uwbsim

#endif
