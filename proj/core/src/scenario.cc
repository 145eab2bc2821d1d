// Copyright 2026 The OPMP Authors
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

#include "opmp/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <fmt/format.h>

#include "json.hpp"
#include "opmp/errors.hpp"

namespace opmp {

namespace {

using nlohmann::json;

Vector ToVector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Collects every problem found while reading a scenario document.
class Reader {
 public:
  void Error(const std::string& field, const std::string& message) {
    errors_.push_back(fmt::format("{}: {}", field, message));
  }

  bool Require(const json& obj, const std::string& key,
               const std::string& path) {
    if (obj.contains(key)) return true;
    Error(Join(path, key), "missing");
    return false;
  }

  void RejectUnknown(const json& obj, const std::set<std::string>& allowed,
                     const std::string& path) {
    for (const auto& item : obj.items()) {
      if (!allowed.count(item.key())) Error(Join(path, item.key()), "unknown field");
    }
  }

  std::optional<double> Number(const json& obj, const std::string& key,
                               const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      Error(Join(path, key), "expected a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<std::string> String(const json& obj, const std::string& key,
                                    const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_string()) {
      Error(Join(path, key), "expected a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  std::vector<double> Numbers(const json& obj, const std::string& key,
                              const std::string& path) {
    if (!obj.contains(key)) return {};
    const json& v = obj.at(key);
    std::vector<double> out;
    if (!v.is_array()) {
      Error(Join(path, key), "expected an array of numbers");
      return out;
    }
    for (const json& e : v) {
      if (!e.is_number()) {
        Error(Join(path, key), "expected an array of numbers");
        return {};
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

  const std::vector<std::string>& errors() const { return errors_; }

  static std::string Join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  std::vector<std::string> errors_;
};

[[noreturn]] void ThrowValidation(const std::vector<std::string>& errors) {
  std::string message = "invalid scenario:";
  for (const std::string& e : errors) message += "\n  " + e;
  throw ValidationError(message);
}

std::optional<AlgorithmKind> ParseAlgorithm(std::string_view name) {
  if (name == "ompd") return AlgorithmKind::kOmpd;
  if (name == "ompd-simplex") return AlgorithmKind::kOmpdSimplex;
  if (name == "pd-baseline") return AlgorithmKind::kPdBaseline;
  return std::nullopt;
}

void ParseBaseSet(Reader& r, const json& j, BaseSetSpec& spec) {
  const std::string path = "base_set";
  if (!j.is_object()) {
    r.Error(path, "expected an object");
    return;
  }
  r.RejectUnknown(j, {"kind", "center", "radius", "lower", "upper", "dim"},
                  path);
  const auto kind = r.String(j, "kind", path);
  if (!kind) {
    r.Require(j, "kind", path);
    return;
  }
  if (*kind == "ball") {
    spec.kind = BaseSetKind::kBall;
    if (r.Require(j, "center", path)) spec.center = r.Numbers(j, "center", path);
    if (r.Require(j, "radius", path)) {
      spec.radius = r.Number(j, "radius", path).value_or(spec.radius);
    }
  } else if (*kind == "box") {
    spec.kind = BaseSetKind::kBox;
    if (r.Require(j, "lower", path)) spec.lower = r.Numbers(j, "lower", path);
    if (r.Require(j, "upper", path)) spec.upper = r.Numbers(j, "upper", path);
  } else if (*kind == "simplex") {
    spec.kind = BaseSetKind::kSimplex;
    if (r.Require(j, "dim", path)) {
      spec.dim = static_cast<int>(r.Number(j, "dim", path).value_or(0));
    }
  } else {
    r.Error(path + ".kind", fmt::format("unknown base set '{}'", *kind));
  }
}

void ParseConstraints(Reader& r, const json& j,
                      std::vector<ConstraintSpec>& out) {
  if (!j.is_array()) {
    r.Error("constraints", "expected an array");
    return;
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = fmt::format("constraints[{}]", i);
    const json& c = j[i];
    if (!c.is_object()) {
      r.Error(path, "expected an object");
      continue;
    }
    r.RejectUnknown(c, {"kind", "a", "b", "center", "radius"}, path);
    ConstraintSpec spec;
    const auto kind = r.String(c, "kind", path);
    if (!kind) {
      r.Require(c, "kind", path);
      continue;
    }
    if (*kind == "linear") {
      spec.kind = ConstraintKind::kLinear;
      if (r.Require(c, "a", path)) spec.a = r.Numbers(c, "a", path);
      spec.b = r.Number(c, "b", path).value_or(0.0);
    } else if (*kind == "quadratic") {
      spec.kind = ConstraintKind::kQuadratic;
      if (r.Require(c, "center", path)) {
        spec.center = r.Numbers(c, "center", path);
      }
      if (r.Require(c, "radius", path)) {
        spec.radius = r.Number(c, "radius", path).value_or(0.0);
      }
    } else {
      r.Error(path + ".kind", fmt::format("unknown constraint '{}'", *kind));
    }
    out.push_back(std::move(spec));
  }
}

void ParseLoss(Reader& r, const json& j, LossSpec& spec) {
  const std::string path = "loss";
  if (!j.is_object()) {
    r.Error(path, "expected an object");
    return;
  }
  r.RejectUnknown(j,
                  {"family", "c", "c_alt", "u", "target", "target_shift",
                   "scale", "scale_shift", "sigma", "exponent"},
                  path);
  const auto family = r.String(j, "family", path);
  if (!family) {
    r.Require(j, "family", path);
  } else if (const auto parsed = ParseLossFamily(*family);
             parsed && *parsed != LossFamily::kCustom) {
    spec.family = *parsed;
  } else {
    r.Error(path + ".family", fmt::format("unknown loss family '{}'", *family));
  }
  spec.c = r.Numbers(j, "c", path);
  spec.c_alt = r.Numbers(j, "c_alt", path);
  spec.u = r.Numbers(j, "u", path);
  spec.target = r.Numbers(j, "target", path);
  spec.target_shift = r.Numbers(j, "target_shift", path);
  spec.scale = r.Number(j, "scale", path);
  spec.scale_shift = r.Number(j, "scale_shift", path);
  spec.sigma = r.Number(j, "sigma", path);
  spec.exponent = r.Number(j, "exponent", path);
}

int ConfigDim(const ScenarioConfig& c) {
  switch (c.base_set.kind) {
    case BaseSetKind::kBall:
      return static_cast<int>(c.base_set.center.size());
    case BaseSetKind::kBox:
      return static_cast<int>(c.base_set.lower.size());
    case BaseSetKind::kSimplex:
      return c.base_set.dim;
  }
  return 0;
}

json VectorJson(const std::vector<double>& v) { return json(v); }

}  // namespace

std::string_view ToString(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::kOmpd:
      return "ompd";
    case AlgorithmKind::kOmpdSimplex:
      return "ompd-simplex";
    case AlgorithmKind::kPdBaseline:
      return "pd-baseline";
  }
  return "unknown";
}

ScenarioConfig ParseScenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("invalid scenario: not valid JSON ({})",
                                      e.what()));
  }
  if (!doc.is_object()) {
    throw ValidationError("invalid scenario: top level must be an object");
  }

  Reader r;
  ScenarioConfig c;
  r.RejectUnknown(doc,
                  {"scenario_id", "geometry", "base_set", "constraints",
                   "slater", "loss", "T", "seed", "algorithm", "v_cap",
                   "constants", "baseline", "output"},
                  "");

  if (r.Require(doc, "scenario_id", "")) {
    c.scenario_id = r.String(doc, "scenario_id", "").value_or("");
  }
  if (r.Require(doc, "base_set", "")) ParseBaseSet(r, doc["base_set"], c.base_set);
  c.geometry = c.base_set.kind == BaseSetKind::kSimplex
                   ? GeometryKind::kEntropic
                   : GeometryKind::kEuclidean;
  if (const auto g = r.String(doc, "geometry", "")) {
    if (*g == "euclidean") {
      c.geometry = GeometryKind::kEuclidean;
    } else if (*g == "entropic") {
      c.geometry = GeometryKind::kEntropic;
    } else {
      r.Error("geometry", fmt::format("unknown geometry '{}'", *g));
    }
  }
  if (doc.contains("constraints")) {
    ParseConstraints(r, doc["constraints"], c.constraints);
  }
  if (doc.contains("slater")) {
    const json& s = doc["slater"];
    if (!s.is_object()) {
      r.Error("slater", "expected an object");
    } else {
      r.RejectUnknown(s, {"point", "margin"}, "slater");
      SlaterSpec spec;
      if (r.Require(s, "point", "slater")) {
        spec.point = r.Numbers(s, "point", "slater");
      }
      if (r.Require(s, "margin", "slater")) {
        spec.margin = r.Number(s, "margin", "slater").value_or(0.0);
      }
      c.slater = std::move(spec);
    }
  }
  if (r.Require(doc, "loss", "")) ParseLoss(r, doc["loss"], c.loss);
  if (r.Require(doc, "T", "")) {
    const json& t = doc["T"];
    if (!t.is_number_integer()) {
      r.Error("T", "expected an integer");
    } else {
      c.horizon = t.get<int>();
    }
  }
  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (!s.is_number_unsigned()) {
      r.Error("seed", "expected a nonnegative integer");
    } else {
      c.seed = s.get<std::uint64_t>();
    }
  }
  if (r.Require(doc, "algorithm", "")) {
    const auto name = r.String(doc, "algorithm", "");
    if (name) {
      if (const auto kind = ParseAlgorithm(*name)) {
        c.algorithm = *kind;
      } else {
        r.Error("algorithm", fmt::format("unknown algorithm '{}'", *name));
      }
    }
  }
  if (doc.contains("v_cap")) {
    const json& v = doc["v_cap"];
    if (v.is_string() && v.get<std::string>() == "exact") {
      c.v_cap.reset();
    } else if (v.is_number()) {
      c.v_cap = v.get<double>();
    } else {
      r.Error("v_cap", "expected \"exact\" or a number");
    }
  }
  if (doc.contains("constants")) {
    const json& k = doc["constants"];
    if (!k.is_object()) {
      r.Error("constants", "expected an object");
    } else {
      r.RejectUnknown(k, {"F", "L_f", "G", "H", "L_g"}, "constants");
      c.constants.loss_gradient_bound = r.Number(k, "F", "constants");
      c.constants.loss_smoothness = r.Number(k, "L_f", "constants");
      c.constants.constraint_bound = r.Number(k, "G", "constants");
      c.constants.constraint_lipschitz = r.Number(k, "H", "constants");
      c.constants.constraint_smoothness = r.Number(k, "L_g", "constants");
    }
  }
  if (doc.contains("baseline")) {
    const json& b = doc["baseline"];
    if (!b.is_object()) {
      r.Error("baseline", "expected an object");
    } else {
      r.RejectUnknown(b, {"step", "dual_step", "shrink"}, "baseline");
      c.baseline.step = r.Number(b, "step", "baseline").value_or(c.baseline.step);
      c.baseline.dual_step =
          r.Number(b, "dual_step", "baseline").value_or(c.baseline.dual_step);
      c.baseline.shrink =
          r.Number(b, "shrink", "baseline").value_or(c.baseline.shrink);
    }
  }
  if (const auto out = r.String(doc, "output", "")) c.output = *out;

  if (!r.errors().empty()) ThrowValidation(r.errors());
  ValidateScenario(c);
  return c;
}

ScenarioConfig LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseScenario(buffer.str());
}

std::string SerializeScenario(const ScenarioConfig& c, int indent) {
  json doc;
  doc["scenario_id"] = c.scenario_id;
  doc["geometry"] = std::string(ToString(c.geometry));

  json base;
  base["kind"] = std::string(ToString(c.base_set.kind));
  switch (c.base_set.kind) {
    case BaseSetKind::kBall:
      base["center"] = VectorJson(c.base_set.center);
      base["radius"] = c.base_set.radius;
      break;
    case BaseSetKind::kBox:
      base["lower"] = VectorJson(c.base_set.lower);
      base["upper"] = VectorJson(c.base_set.upper);
      break;
    case BaseSetKind::kSimplex:
      base["dim"] = c.base_set.dim;
      break;
  }
  doc["base_set"] = base;

  json constraints = json::array();
  for (const ConstraintSpec& s : c.constraints) {
    json item;
    if (s.kind == ConstraintKind::kLinear) {
      item["kind"] = "linear";
      item["a"] = VectorJson(s.a);
      item["b"] = s.b;
    } else {
      item["kind"] = "quadratic";
      item["center"] = VectorJson(s.center);
      item["radius"] = s.radius;
    }
    constraints.push_back(item);
  }
  doc["constraints"] = constraints;
  if (c.slater) {
    doc["slater"] = {{"point", VectorJson(c.slater->point)},
                     {"margin", c.slater->margin}};
  }

  json loss;
  loss["family"] = std::string(ToString(c.loss.family));
  auto put_vec = [&](const char* key, const std::vector<double>& v) {
    if (!v.empty()) loss[key] = VectorJson(v);
  };
  auto put_num = [&](const char* key, const std::optional<double>& v) {
    if (v) loss[key] = *v;
  };
  put_vec("c", c.loss.c);
  put_vec("c_alt", c.loss.c_alt);
  put_vec("u", c.loss.u);
  put_vec("target", c.loss.target);
  put_vec("target_shift", c.loss.target_shift);
  put_num("scale", c.loss.scale);
  put_num("scale_shift", c.loss.scale_shift);
  put_num("sigma", c.loss.sigma);
  put_num("exponent", c.loss.exponent);
  doc["loss"] = loss;

  doc["T"] = c.horizon;
  doc["seed"] = c.seed;
  doc["algorithm"] = std::string(ToString(c.algorithm));
  if (c.v_cap) {
    doc["v_cap"] = *c.v_cap;
  } else {
    doc["v_cap"] = "exact";
  }

  json constants = json::object();
  auto put_const = [&](const char* key, const std::optional<double>& v) {
    if (v) constants[key] = *v;
  };
  put_const("F", c.constants.loss_gradient_bound);
  put_const("L_f", c.constants.loss_smoothness);
  put_const("G", c.constants.constraint_bound);
  put_const("H", c.constants.constraint_lipschitz);
  put_const("L_g", c.constants.constraint_smoothness);
  if (!constants.empty()) doc["constants"] = constants;

  doc["baseline"] = {{"step", c.baseline.step},
                     {"dual_step", c.baseline.dual_step},
                     {"shrink", c.baseline.shrink}};
  doc["output"] = c.output;
  return doc.dump(indent);
}

void ValidateScenario(const ScenarioConfig& c) {
  std::vector<std::string> errors;
  auto error = [&](const std::string& field, const std::string& message) {
    errors.push_back(fmt::format("{}: {}", field, message));
  };
  if (c.scenario_id.empty()) error("scenario_id", "must be nonempty");
  if (c.horizon < 1) error("T", fmt::format("must be >= 1, got {}", c.horizon));

  const int d = ConfigDim(c);
  if (d < 1) error("base_set", "dimension must be >= 1");
  switch (c.base_set.kind) {
    case BaseSetKind::kBall:
      if (!(c.base_set.radius > 0.0)) error("base_set.radius", "must be > 0");
      break;
    case BaseSetKind::kBox:
      if (c.base_set.upper.size() != c.base_set.lower.size()) {
        error("base_set.upper", "length differs from base_set.lower");
      } else {
        for (std::size_t i = 0; i < c.base_set.lower.size(); ++i) {
          if (c.base_set.lower[i] > c.base_set.upper[i]) {
            error("base_set.lower", "must be <= base_set.upper componentwise");
            break;
          }
        }
      }
      break;
    case BaseSetKind::kSimplex:
      break;
  }

  const bool simplex = c.base_set.kind == BaseSetKind::kSimplex;
  if (simplex != (c.geometry == GeometryKind::kEntropic)) {
    error("geometry", "entropic geometry pairs with the simplex base set and "
                      "euclidean with ball or box");
  }
  if (c.algorithm == AlgorithmKind::kOmpdSimplex && !simplex) {
    error("algorithm", "ompd-simplex requires the simplex base set");
  }
  if (c.algorithm == AlgorithmKind::kOmpd && simplex) {
    error("algorithm", "the simplex base set requires ompd-simplex");
  }

  for (std::size_t i = 0; i < c.constraints.size(); ++i) {
    const ConstraintSpec& s = c.constraints[i];
    const std::string path = fmt::format("constraints[{}]", i);
    if (s.kind == ConstraintKind::kLinear) {
      if (static_cast<int>(s.a.size()) != d) {
        error(path + ".a", fmt::format("expected length {}", d));
      }
    } else {
      if (static_cast<int>(s.center.size()) != d) {
        error(path + ".center", fmt::format("expected length {}", d));
      }
      if (!(s.radius >= 0.0)) error(path + ".radius", "must be >= 0");
    }
  }
  if (c.slater) {
    if (static_cast<int>(c.slater->point.size()) != d) {
      error("slater.point", fmt::format("expected length {}", d));
    }
    if (!(c.slater->margin > 0.0)) error("slater.margin", "must be > 0");
  }

  const LossSpec& l = c.loss;
  auto need_vec = [&](const char* key, const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != d) {
      error(fmt::format("loss.{}", key), fmt::format("expected length {}", d));
    }
  };
  auto need_num = [&](const char* key, const std::optional<double>& v) {
    if (!v) error(fmt::format("loss.{}", key), "missing");
  };
  switch (l.family) {
    case LossFamily::kFixed:
      if (l.c.empty()) {
        need_vec("target", l.target);
        need_num("scale", l.scale);
      } else {
        need_vec("c", l.c);
      }
      break;
    case LossFamily::kLinearDrift:
      need_vec("c", l.c);
      need_vec("u", l.u);
      break;
    case LossFamily::kAlternating:
      need_vec("c", l.c);
      need_vec("c_alt", l.c_alt);
      break;
    case LossFamily::kQuadraticDrift:
      need_vec("target", l.target);
      need_vec("target_shift", l.target_shift);
      need_num("scale", l.scale);
      need_num("scale_shift", l.scale_shift);
      break;
    case LossFamily::kLinearJitter:
      need_vec("c", l.c);
      need_num("sigma", l.sigma);
      need_num("exponent", l.exponent);
      break;
    case LossFamily::kCustom:
      error("loss.family", "custom losses cannot be configured from a file");
      break;
  }
  if (c.v_cap && !(*c.v_cap >= 0.0)) error("v_cap", "must be >= 0");
  if (!(c.baseline.step > 0.0)) error("baseline.step", "must be > 0");
  if (!(c.baseline.dual_step >= 0.0)) error("baseline.dual_step", "must be >= 0");
  if (!(c.baseline.shrink >= 0.0)) error("baseline.shrink", "must be >= 0");

  if (!errors.empty()) ThrowValidation(errors);
}

std::uint64_t ConfigHash(const ScenarioConfig& config) {
  const std::string text = SerializeScenario(config, -1);
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 1099511628211ULL;
  }
  return hash;
}

BaseSet BuildBaseSet(const ScenarioConfig& c) {
  switch (c.base_set.kind) {
    case BaseSetKind::kBall:
      return BaseSet::Ball(ToVector(c.base_set.center), c.base_set.radius);
    case BaseSetKind::kBox:
      return BaseSet::Box(ToVector(c.base_set.lower),
                          ToVector(c.base_set.upper));
    case BaseSetKind::kSimplex:
      return BaseSet::Simplex(c.base_set.dim);
  }
  throw InternalError("unhandled base set kind");
}

LossSequencePtr BuildLosses(const ScenarioConfig& c) {
  const LossSpec& l = c.loss;
  const int T = c.horizon;
  switch (l.family) {
    case LossFamily::kFixed:
      if (!l.c.empty()) return MakeFixedLinear(ToVector(l.c), T);
      return MakeFixedQuadratic(ToVector(l.target), *l.scale, T);
    case LossFamily::kLinearDrift:
      return MakeLinearDrift(ToVector(l.c), ToVector(l.u), T);
    case LossFamily::kAlternating:
      return MakeAlternating(ToVector(l.c), ToVector(l.c_alt), T);
    case LossFamily::kQuadraticDrift:
      return MakeQuadraticDrift(ToVector(l.target), ToVector(l.target_shift),
                                *l.scale, *l.scale_shift, T);
    case LossFamily::kLinearJitter:
      return MakeLinearJitter(ToVector(l.c), *l.sigma, *l.exponent, T, c.seed);
    case LossFamily::kCustom:
      break;
  }
  throw UnsupportedError("custom losses have no configuration form");
}

Problem BuildProblem(const ScenarioConfig& c) {
  ValidateScenario(c);
  const int d = ConfigDim(c);
  const Geometry geom = c.geometry == GeometryKind::kEntropic
                            ? Geometry::Entropic(d)
                            : Geometry::Euclidean(d);
  std::vector<ConstraintTerm> terms;
  for (const ConstraintSpec& s : c.constraints) {
    if (s.kind == ConstraintKind::kLinear) {
      terms.emplace_back(LinearConstraint{ToVector(s.a), s.b});
    } else {
      terms.emplace_back(QuadraticConstraint{ToVector(s.center), s.radius});
    }
  }
  ConstraintBlock block(d, std::move(terms));
  if (c.slater) {
    try {
      block.set_slater({ToVector(c.slater->point), c.slater->margin});
    } catch (const ArgumentError& e) {
      throw ValidationError(fmt::format("invalid scenario:\n  slater: {}",
                                        e.what()));
    }
  }
  return MakeProblem(geom, BuildBaseSet(c), std::move(block), BuildLosses(c),
                     c.constants);
}

Variant VariantOf(AlgorithmKind kind) {
  return kind == AlgorithmKind::kOmpdSimplex ? Variant::kSimplex
                                             : Variant::kGeneral;
}

double ResolveVariationCap(const ScenarioConfig& c, const Problem& problem) {
  if (c.v_cap) return *c.v_cap;
  return problem.losses->GradientVariation(problem.geometry, problem.base);
}

HyperParams BuildHyperParams(const ScenarioConfig& c, const Problem& problem) {
  return HyperParamsFromVariation(ResolveVariationCap(c, problem),
                                  problem.constants.loss_smoothness, c.horizon,
                                  VariantOf(c.algorithm));
}

}  // namespace opmp
