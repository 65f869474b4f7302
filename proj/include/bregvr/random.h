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

#ifndef BREGVR_RANDOM_H_
#define BREGVR_RANDOM_H_

#include <cstdint>
#include <random>

#include "bregvr/types.h"

namespace bregvr {

// Seeded 64-bit stream. std::mt19937_64 is fully specified by the standard and
// the conversions below use only integer arithmetic and a fixed scaling, so a
// given seed produces the same doubles on every conforming platform (the
// std::*_distribution templates do not give that guarantee).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Vector uniform_vector(Eigen::Index dim, double lo, double hi);

  // Uniform point of the probability simplex (Dirichlet(1, ..., 1)).
  Vector dirichlet(Eigen::Index dim);

 private:
  std::mt19937_64 engine_;
};

}  // namespace bregvr

#endif  // BREGVR_RANDOM_H_
