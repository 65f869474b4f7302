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

// JSON form of instances and saddle oracles.
//
// Instance schema:
//   {
//     "name": "...", "description": "...",
//     "primal": {"geometry": "euclidean" | "entropy", "dim": d,
//                "simple": {"kind": "zero" | "simplex" | "box" | "l1" |
//                                   "scaled_geometry", "weight": w},
//                "terms": [TERM, ...], "init": [x0...]},
//     "dual":   {same fields for v, g* and l},
//     "coupling": {"rows": p, "cols": d, "data": [row-major entries]}
//   }
//   TERM = {"kind": "affine_quadratic", "A": {"rows", "cols", "data"},
//           "b": [...], "c": [...], "lipschitz": mu}
//        | {"kind": "linear", "c": [...], "lipschitz": mu}
// "init" and "lipschitz" are optional; Lipschitz constants must be given
// for all terms of a side or for none.

#ifndef BREGVR_INSTANCE_IO_H_
#define BREGVR_INSTANCE_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "bregvr/baselines.h"
#include "bregvr/instances.h"
#include "json.hpp"

namespace bregvr {

using Json = nlohmann::json;

Json vector_to_json(const Vector& x);
Vector vector_from_json(const Json& j);
Json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const Json& j);

Json instance_to_json(const Instance& instance);
// Throws ConfigError on schema violations.
Instance instance_from_json(const Json& j);

Instance load_instance_file(const std::filesystem::path& path);
void save_instance_file(const Instance& instance,
                        const std::filesystem::path& path);

// Sorted keys, no whitespace, shortest round-trip number formatting.
std::string canonical_json(const Instance& instance);
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t instance_hash(const Instance& instance);
// "0x" followed by 16 lowercase hex digits.
std::string hash_hex(std::uint64_t hash);

// {"method", "x", "v", "residual", "iterations"}.
Json oracle_to_json(const SaddleOracle& oracle);
SaddleOracle oracle_from_json(const Json& j);
SaddleOracle load_oracle_file(const std::filesystem::path& path);

}  // namespace bregvr

#endif  // BREGVR_INSTANCE_IO_H_
