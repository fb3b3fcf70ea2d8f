// Copyright 2026 The Cheaptalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "cheaptalk/sweep.hpp"

namespace cheaptalk {

// Baseline experiment: uniform-quadratic game with 6 types, alpha = 0.1,
// lambda = 5e-6, tau1 = 0.1, up to 1e7 periods.
SweepConfig default_config();

// Parses the JSON experiment config (blocks: game, learner, sim, sweep),
// filling baseline defaults for absent keys. Unknown keys are rejected.
// Errors carry the offending key and, where it can be located, the line.
SweepConfig parse_config(const std::string& path);
SweepConfig parse_config_text(const std::string& text,
                              const std::string& origin = "<config>");

}  // namespace cheaptalk
