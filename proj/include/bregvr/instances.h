// Copyright 2026 The bregvr Authors.
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

// Bundled desk-scale instances.

#ifndef BREGVR_INSTANCES_H_
#define BREGVR_INSTANCES_H_

#include <string>
#include <string_view>
#include <vector>

#include "bregvr/problem.h"
#include "bregvr/types.h"

namespace bregvr {

struct Instance {
  std::string name;
  std::string description;
  SaddleProblem problem;
  // Initial anchor (xbar_0, vbar_0).
  Vector x0;
  Vector v0;
};

// rps-game, quad-1d, lasso-saddle, strongly-convex-quad, entropy-game-20.
const std::vector<std::string>& builtin_instance_names();
bool is_builtin_instance(std::string_view name);

// Every builtin is generated from a fixed seed, so repeated calls return
// identical data. Throws ConfigError for unknown names.
Instance make_builtin_instance(std::string_view name);

}  // namespace bregvr

#endif  // BREGVR_INSTANCES_H_
