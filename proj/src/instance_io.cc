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

#include "bregvr/instance_io.h"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "bregvr/errors.h"

namespace bregvr {
namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(std::string("missing field '") + key + "'");
  return j.at(key);
}

SimpleFunction simple_from_json(const Json& j) {
  const SimpleKind kind =
      simple_kind_from_string(field(j, "kind").get<std::string>());
  const double weight = j.value("weight", 0.0);
  switch (kind) {
    case SimpleKind::kZero:
      return SimpleFunction::zero();
    case SimpleKind::kSimplexIndicator:
      return SimpleFunction::simplex();
    case SimpleKind::kBoxIndicator:
      return SimpleFunction::box();
    case SimpleKind::kL1Norm:
      return SimpleFunction::l1(weight);
    case SimpleKind::kScaledGeometry:
      return SimpleFunction::scaled_geometry(weight);
  }
  throw ConfigError("unknown simple function");
}

Json term_to_json(const SmoothTerm& t, double lipschitz) {
  Json j;
  if (t.is_linear()) {
    j["kind"] = "linear";
  } else {
    j["kind"] = "affine_quadratic";
    j["A"] = matrix_to_json(t.a());
    j["b"] = vector_to_json(t.b());
  }
  j["c"] = vector_to_json(t.c());
  j["lipschitz"] = lipschitz;
  return j;
}

Json side_to_json(const LegendreGeometry& geom, const SimpleFunction& fn,
                  const FiniteSumSmooth& sum, const Vector& init) {
  Json j;
  j["geometry"] = std::string(to_string(geom.kind()));
  j["dim"] = geom.dim();
  j["simple"] = {{"kind", std::string(to_string(fn.kind))},
                 {"weight", fn.weight}};
  Json terms = Json::array();
  for (std::size_t i = 0; i < sum.count(); ++i)
    terms.push_back(term_to_json(sum.terms()[i], sum.lipschitz()[i]));
  j["terms"] = std::move(terms);
  j["init"] = vector_to_json(init);
  return j;
}

struct Side {
  LegendreGeometry geometry;
  SimpleFunction simple;
  FiniteSumSmooth sum;
  std::optional<Vector> init;
};

Side side_from_json(const Json& j) {
  const GeometryKind kind =
      geometry_kind_from_string(field(j, "geometry").get<std::string>());
  const auto dim = field(j, "dim").get<Eigen::Index>();
  if (dim < 1) throw ConfigError("dim must be positive");
  LegendreGeometry geometry(kind, dim);
  SimpleFunction simple = simple_from_json(field(j, "simple"));

  std::vector<SmoothTerm> terms;
  std::vector<double> lipschitz;
  for (const Json& t : field(j, "terms")) {
    const auto term_kind = field(t, "kind").get<std::string>();
    Vector c = vector_from_json(field(t, "c"));
    if (c.size() != dim) throw ConfigError("term vector c has wrong length");
    if (term_kind == "linear") {
      terms.push_back(SmoothTerm::linear(std::move(c)));
    } else if (term_kind == "affine_quadratic") {
      Matrix a = matrix_from_json(field(t, "A"));
      Vector b = vector_from_json(field(t, "b"));
      if (a.cols() != dim || b.size() != a.rows())
        throw ConfigError("affine_quadratic term has inconsistent shapes");
      terms.push_back(SmoothTerm::affine_quadratic(std::move(a), std::move(b),
                                                   std::move(c)));
    } else {
      throw ConfigError("unknown term kind '" + term_kind + "'");
    }
    if (t.contains("lipschitz")) lipschitz.push_back(t.at("lipschitz"));
  }
  if (terms.empty()) throw ConfigError("a finite sum needs at least one term");
  if (!lipschitz.empty() && lipschitz.size() != terms.size())
    throw ConfigError("give lipschitz for all terms of a side or for none");

  std::optional<Vector> init;
  if (j.contains("init")) {
    init = vector_from_json(j.at("init"));
    if (init->size() != dim) throw ConfigError("init has wrong length");
  }
  return Side{std::move(geometry), simple,
              FiniteSumSmooth(dim, std::move(terms), std::move(lipschitz)),
              std::move(init)};
}

}  // namespace

Json vector_to_json(const Vector& x) {
  return Json(std::vector<double>(x.data(), x.data() + x.size()));
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("expected an array of numbers");
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

Json matrix_to_json(const Matrix& a) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(a.size()));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k) data.push_back(a(i, k));
  return Json{{"rows", a.rows()}, {"cols", a.cols()}, {"data", data}};
}

Matrix matrix_from_json(const Json& j) {
  const auto rows = field(j, "rows").get<Eigen::Index>();
  const auto cols = field(j, "cols").get<Eigen::Index>();
  const auto data = field(j, "data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 ||
      static_cast<std::size_t>(rows * cols) != data.size())
    throw ConfigError("matrix data length does not match rows * cols");
  Matrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k)
      a(i, k) = data[static_cast<std::size_t>(i * cols + k)];
  return a;
}

Json instance_to_json(const Instance& instance) {
  const SaddleProblem& p = instance.problem;
  Json j;
  j["name"] = instance.name;
  j["description"] = instance.description;
  j["primal"] = side_to_json(p.primal_geometry(), p.f(), p.h(), instance.x0);
  j["dual"] = side_to_json(p.dual_geometry(), p.g_star(), p.ell(), instance.v0);
  j["coupling"] = matrix_to_json(p.coupling().matrix());
  return j;
}

Instance instance_from_json(const Json& j) {
  try {
    Side primal = side_from_json(field(j, "primal"));
    Side dual = side_from_json(field(j, "dual"));
    Matrix k = matrix_from_json(field(j, "coupling"));
    Vector x0 = primal.init.value_or(
        default_start(primal.geometry, primal.simple));
    Vector v0 = dual.init.value_or(default_start(dual.geometry, dual.simple));
    SaddleProblem problem(std::move(primal.geometry), std::move(dual.geometry),
                          std::move(primal.sum), std::move(dual.sum),
                          primal.simple, dual.simple, std::move(k));
    return Instance{j.value("name", std::string("custom")),
                    j.value("description", std::string()), std::move(problem),
                    std::move(x0), std::move(v0)};
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed instance: ") + e.what());
  }
}

Instance load_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open instance file " + path.string());
  try {
    return instance_from_json(Json::parse(in));
  } catch (const Json::parse_error& e) {
    throw ConfigError("instance file " + path.string() + ": " + e.what());
  }
}

void save_instance_file(const Instance& instance,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << instance_to_json(instance).dump(2) << '\n';
}

std::string canonical_json(const Instance& instance) {
  // nlohmann objects keep keys sorted; dump() emits no whitespace.
  return instance_to_json(instance).dump();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char ch : bytes) {
    hash ^= static_cast<unsigned char>(ch);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t instance_hash(const Instance& instance) {
  return fnv1a64(canonical_json(instance));
}

std::string hash_hex(std::uint64_t hash) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016" PRIx64, hash);
  return buf;
}

Json oracle_to_json(const SaddleOracle& oracle) {
  return Json{{"method", std::string(to_string(oracle.method))},
              {"x", vector_to_json(oracle.x)},
              {"v", vector_to_json(oracle.v)},
              {"residual", oracle.residual},
              {"iterations", oracle.iterations}};
}

SaddleOracle oracle_from_json(const Json& j) {
  try {
    SaddleOracle oracle;
    oracle.method = oracle_method_from_string(
        j.value("method", std::string("deterministic")));
    oracle.x = vector_from_json(field(j, "x"));
    oracle.v = vector_from_json(field(j, "v"));
    oracle.residual = j.value("residual", 0.0);
    oracle.iterations = j.value("iterations", std::int64_t{0});
    return oracle;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed oracle: ") + e.what());
  }
}

SaddleOracle load_oracle_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open oracle file " + path.string());
  try {
    return oracle_from_json(Json::parse(in));
  } catch (const Json::parse_error& e) {
    throw ConfigError("oracle file " + path.string() + ": " + e.what());
  }
}

}  // namespace bregvr
