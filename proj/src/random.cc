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

#include "bregvr/random.h"

#include <cmath>

namespace bregvr {

Vector Rng::uniform_vector(Eigen::Index dim, double lo, double hi) {
  Vector out(dim);
  for (Eigen::Index i = 0; i < dim; ++i) out[i] = uniform(lo, hi);
  return out;
}

Vector Rng::dirichlet(Eigen::Index dim) {
  Vector out(dim);
  // 1 - U lies in (0, 1], so the logarithm stays finite.
  for (Eigen::Index i = 0; i < dim; ++i) out[i] = -std::log(1.0 - uniform());
  return out / out.sum();
}

}  // namespace bregvr
