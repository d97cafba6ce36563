#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sppa/problems.hpp"

namespace sppa {

using Json = nlohmann::json;

namespace cfg {

inline ConfigError field_error(const std::string& path, const std::string& what) {
  return ConfigError("config field '" + path + "': " + what);
}

inline const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw field_error(path + "." + key, "missing");
  return j.at(key);
}

inline double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw field_error(path, "expected a number");
  return j.get<double>();
}

inline long integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw field_error(path, "expected an integer");
  return j.get<long>();
}

inline Vector vector(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw field_error(path, "expected a non-empty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], path);
  return v;
}

inline Matrix matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw field_error(path, "expected an array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  Vector first = vector(j[0], path + "[0]");
  Matrix M(rows, first.size());
  M.row(0) = first;
  for (Eigen::Index r = 1; r < rows; ++r) {
    Vector row = vector(j[static_cast<size_t>(r)], path + "[" + std::to_string(r) + "]");
    if (row.size() != first.size()) throw field_error(path, "ragged rows");
    M.row(r) = row;
  }
  return M;
}

inline Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Json to_json(const Matrix& M) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) a.push_back(to_json(Vector(M.row(r))));
  return a;
}

inline ConvexSet set_from_json(const Json& j, const std::string& path) {
  const std::string type = member(j, "type", path).get<std::string>();
  if (type == "box")
    return Box{vector(member(j, "lower", path), path + ".lower"),
               vector(member(j, "upper", path), path + ".upper")};
  if (type == "halfspace")
    return Halfspace{vector(member(j, "normal", path), path + ".normal"),
                     number(member(j, "offset", path), path + ".offset")};
  if (type == "hyperplane")
    return Hyperplane{vector(member(j, "normal", path), path + ".normal"),
                      number(member(j, "offset", path), path + ".offset")};
  if (type == "ball")
    return Ball{vector(member(j, "center", path), path + ".center"),
                number(member(j, "radius", path), path + ".radius")};
  if (type == "intersection") {
    Intersection inter;
    const Json& ms = member(j, "members", path);
    if (!ms.is_array()) throw field_error(path + ".members", "expected an array");
    for (size_t i = 0; i < ms.size(); ++i)
      inter.members.push_back(set_from_json(ms[i], path + ".members[" + std::to_string(i) + "]"));
    return inter;
  }
  throw field_error(path + ".type", "unknown set type '" + type + "'");
}

inline Json set_to_json(const ConvexSet& s) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Box>)
          return {{"type", "box"}, {"lower", to_json(v.lower)}, {"upper", to_json(v.upper)}};
        else if constexpr (std::is_same_v<T, Halfspace>)
          return {{"type", "halfspace"}, {"normal", to_json(v.normal)}, {"offset", v.offset}};
        else if constexpr (std::is_same_v<T, Hyperplane>)
          return {{"type", "hyperplane"}, {"normal", to_json(v.normal)}, {"offset", v.offset}};
        else if constexpr (std::is_same_v<T, Ball>)
          return {{"type", "ball"}, {"center", to_json(v.center)}, {"radius", v.radius}};
        else {
          Json ms = Json::array();
          for (const ConvexSet& m : v.members) ms.push_back(set_to_json(m));
          return {{"type", "intersection"}, {"members", ms}};
        }
      },
      s);
}

inline ConvexFn fn_from_json(const Json& j, const std::string& path) {
  const std::string type = member(j, "type", path).get<std::string>();
  if (type == "quadratic")
    return Quadratic{matrix(member(j, "Q", path), path + ".Q"),
                     vector(member(j, "b", path), path + ".b")};
  if (type == "weighted_l1")
    return WeightedL1{vector(member(j, "weights", path), path + ".weights")};
  if (type == "linear") return LinearFn{vector(member(j, "b", path), path + ".b")};
  if (type == "indicator")
    return IndicatorFn{set_from_json(member(j, "set", path), path + ".set")};
  if (type == "sum") {
    SumFn sum;
    const Json& ts = member(j, "terms", path);
    if (!ts.is_array()) throw field_error(path + ".terms", "expected an array");
    for (size_t i = 0; i < ts.size(); ++i)
      sum.terms.push_back(fn_from_json(ts[i], path + ".terms[" + std::to_string(i) + "]"));
    return sum;
  }
  throw field_error(path + ".type", "unknown function type '" + type + "'");
}

inline Json fn_to_json(const ConvexFn& f) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Quadratic>)
          return {{"type", "quadratic"}, {"Q", to_json(v.Q)}, {"b", to_json(v.b)}};
        else if constexpr (std::is_same_v<T, WeightedL1>)
          return {{"type", "weighted_l1"}, {"weights", to_json(v.weights)}};
        else if constexpr (std::is_same_v<T, LinearFn>)
          return {{"type", "linear"}, {"b", to_json(v.b)}};
        else if constexpr (std::is_same_v<T, IndicatorFn>)
          return {{"type", "indicator"}, {"set", set_to_json(v.set)}};
        else {
          Json ts = Json::array();
          for (const ConvexFn& t : v.terms) ts.push_back(fn_to_json(t));
          return {{"type", "sum"}, {"terms", ts}};
        }
      },
      f);
}

inline OperatorSpec op_from_json(const Json& j, const std::string& path) {
  const std::string type = member(j, "type", path).get<std::string>();
  if (type == "affine")
    return AffineMonotone{matrix(member(j, "M", path), path + ".M"),
                          vector(member(j, "b", path), path + ".b")};
  if (type == "subdifferential")
    return Subdifferential{fn_from_json(member(j, "f", path), path + ".f")};
  if (type == "normal_cone")
    return NormalCone{set_from_json(member(j, "set", path), path + ".set")};
  if (type == "saddle")
    return SaddleBilinear{matrix(member(j, "P", path), path + ".P"),
                          matrix(member(j, "R", path), path + ".R"),
                          matrix(member(j, "K", path), path + ".K"),
                          vector(member(j, "c", path), path + ".c"),
                          vector(member(j, "d", path), path + ".d")};
  if (type == "scaled")
    return Scaled{number(member(j, "alpha", path), path + ".alpha"),
                  std::make_shared<OperatorSpec>(
                      op_from_json(member(j, "inner", path), path + ".inner"))};
  throw field_error(path + ".type", "unknown operator type '" + type + "'");
}

inline Json op_to_json(const OperatorSpec& op) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AffineMonotone>)
          return {{"type", "affine"}, {"M", to_json(v.M)}, {"b", to_json(v.b)}};
        else if constexpr (std::is_same_v<T, Subdifferential>)
          return {{"type", "subdifferential"}, {"f", fn_to_json(v.f)}};
        else if constexpr (std::is_same_v<T, NormalCone>)
          return {{"type", "normal_cone"}, {"set", set_to_json(v.set)}};
        else if constexpr (std::is_same_v<T, SaddleBilinear>)
          return {{"type", "saddle"},  {"P", to_json(v.P)}, {"R", to_json(v.R)},
                  {"K", to_json(v.K)}, {"c", to_json(v.c)}, {"d", to_json(v.d)}};
        else
          return {{"type", "scaled"}, {"alpha", v.alpha}, {"inner", op_to_json(*v.inner)}};
      },
      op);
}

}  // namespace cfg

struct ExperimentConfig {
  Json problem;  // kept verbatim for round-trip fidelity
  StepSchedule schedule;
  Vector x0;
  long iterations = 1000;
  long replicas = 1;
  uint64_t master_seed = 0;
  long trace_stride = 0;
  long workers = 0;  // 0 = hardware concurrency
};

inline ProblemInstance build_problem(const Json& j) {
  const std::string kind = cfg::member(j, "kind", "problem").get<std::string>();
  if (kind == "feasibility") {
    const Json& js = cfg::member(j, "sets", "problem");
    std::vector<ConvexSet> sets;
    for (size_t i = 0; i < js.size(); ++i)
      sets.push_back(cfg::set_from_json(js[i], "problem.sets[" + std::to_string(i) + "]"));
    Vector w = j.contains("weights")
                   ? cfg::vector(j.at("weights"), "problem.weights")
                   : Vector::Constant(static_cast<Eigen::Index>(sets.size()),
                                      1.0 / static_cast<double>(sets.size()));
    return build_feasibility(std::move(sets), std::move(w));
  }
  if (kind == "constrained_program") {
    const Json& jf = cfg::member(j, "functions", "problem");
    std::vector<std::pair<double, ConvexFn>> pool;
    for (size_t i = 0; i < jf.size(); ++i) {
      const std::string p = "problem.functions[" + std::to_string(i) + "]";
      pool.emplace_back(cfg::number(cfg::member(jf[i], "weight", p), p + ".weight"),
                        cfg::fn_from_json(jf[i], p));
    }
    const Json& js = cfg::member(j, "sets", "problem");
    std::vector<ConvexSet> sets;
    for (size_t i = 0; i < js.size(); ++i)
      sets.push_back(cfg::set_from_json(js[i], "problem.sets[" + std::to_string(i) + "]"));
    const double p0 = cfg::number(cfg::member(j, "p0", "problem"), "problem.p0");
    return build_constrained_program(pool, std::move(sets), p0);
  }
  if (kind == "saddle") {
    const Json& jm = cfg::member(j, "members", "problem");
    std::vector<SaddleBilinear> pool;
    Vector w(static_cast<Eigen::Index>(jm.size()));
    for (size_t i = 0; i < jm.size(); ++i) {
      const std::string p = "problem.members[" + std::to_string(i) + "]";
      OperatorSpec op = cfg::op_from_json(jm[i], p);
      auto* sb = std::get_if<SaddleBilinear>(&op);
      if (!sb) throw cfg::field_error(p, "expected a saddle operator");
      pool.push_back(std::move(*sb));
      w[static_cast<Eigen::Index>(i)] =
          cfg::number(cfg::member(jm[i], "weight", p), p + ".weight");
    }
    return build_saddle(std::move(pool), std::move(w));
  }
  if (kind == "strongly_monotone") {
    const Json& jm = cfg::member(j, "members", "problem");
    std::vector<AffineMonotone> pool;
    Vector w(static_cast<Eigen::Index>(jm.size()));
    for (size_t i = 0; i < jm.size(); ++i) {
      const std::string p = "problem.members[" + std::to_string(i) + "]";
      OperatorSpec op = cfg::op_from_json(jm[i], p);
      auto* am = std::get_if<AffineMonotone>(&op);
      if (!am) throw cfg::field_error(p, "expected an affine operator");
      pool.push_back(std::move(*am));
      w[static_cast<Eigen::Index>(i)] =
          cfg::number(cfg::member(jm[i], "weight", p), p + ".weight");
    }
    return build_strongly_monotone(std::move(pool), std::move(w));
  }
  if (kind == "family") {
    const Json& jm = cfg::member(j, "members", "problem");
    std::vector<OperatorSpec> members;
    for (size_t i = 0; i < jm.size(); ++i)
      members.push_back(cfg::op_from_json(jm[i], "problem.members[" + std::to_string(i) + "]"));
    Vector w = j.contains("weights")
                   ? cfg::vector(j.at("weights"), "problem.weights")
                   : Vector::Constant(static_cast<Eigen::Index>(members.size()),
                                      1.0 / static_cast<double>(members.size()));
    return ProblemInstance{make_family(std::move(members), std::move(w))};
  }
  throw cfg::field_error("problem.kind", "unknown problem kind '" + kind + "'");
}

inline ExperimentConfig parse_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  if (cfg::integer(cfg::member(j, "schema_version", "config"), "schema_version") != 1)
    throw cfg::field_error("schema_version", "unsupported (expected 1)");
  ExperimentConfig c;
  c.problem = cfg::member(j, "problem", "config");
  const Json& js = cfg::member(j, "schedule", "config");
  const double lambda0 = js.contains("lambda0") ? cfg::number(js.at("lambda0"), "schedule.lambda0") : 1.0;
  const double gamma = js.contains("gamma") ? cfg::number(js.at("gamma"), "schedule.gamma") : 0.75;
  const long n0 = js.contains("n0") ? cfg::integer(js.at("n0"), "schedule.n0") : 0;
  try {
    c.schedule = StepSchedule(lambda0, gamma, n0);
  } catch (const ConfigError& e) {
    throw cfg::field_error("schedule", e.what());
  }
  c.x0 = cfg::vector(cfg::member(j, "x0", "config"), "x0");
  c.iterations = cfg::integer(cfg::member(j, "iterations", "config"), "iterations");
  if (c.iterations < 1) throw cfg::field_error("iterations", "must be >= 1");
  if (j.contains("replicas")) c.replicas = cfg::integer(j.at("replicas"), "replicas");
  if (c.replicas < 1) throw cfg::field_error("replicas", "must be >= 1");
  if (j.contains("master_seed")) {
    if (!j.at("master_seed").is_number_integer())
      throw cfg::field_error("master_seed", "expected an integer");
    c.master_seed = j.at("master_seed").get<uint64_t>();
  }
  if (j.contains("trace_stride")) c.trace_stride = cfg::integer(j.at("trace_stride"), "trace_stride");
  if (c.trace_stride < 0) throw cfg::field_error("trace_stride", "must be >= 0");
  if (j.contains("workers")) c.workers = cfg::integer(j.at("workers"), "workers");
  if (c.workers < 0) throw cfg::field_error("workers", "must be >= 0");
  (void)build_problem(c.problem);  // validate eagerly so errors name their field
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

inline Json to_json(const ExperimentConfig& c) {
  return {{"schema_version", 1},
          {"problem", c.problem},
          {"schedule", {{"lambda0", c.schedule.lambda0}, {"gamma", c.schedule.gamma}, {"n0", c.schedule.n0}}},
          {"x0", cfg::to_json(c.x0)},
          {"iterations", c.iterations},
          {"replicas", c.replicas},
          {"master_seed", c.master_seed},
          {"trace_stride", c.trace_stride},
          {"workers", c.workers}};
}

// --- trace CSV ---

inline std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline constexpr const char* kTraceHeader =
    "n,lambda,xi_index,dist_to_solution,dist_to_domain,dist_avg_to_feasible,objective_avg,norm_x";

inline void write_trace_csv(std::ostream& out, const RunReport& report) {
  out << kTraceHeader << "\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_g17(*v) : std::string(); };
  for (const TraceRow& r : report.rows) {
    out << r.n << ',' << format_g17(r.lambda) << ',' << r.xi_index << ','
        << opt(r.dist_to_solution) << ',' << opt(r.dist_to_domain) << ','
        << opt(r.dist_avg_to_feasible) << ',' << opt(r.objective_avg) << ','
        << format_g17(r.norm_x) << "\n";
  }
}

}  // namespace sppa
