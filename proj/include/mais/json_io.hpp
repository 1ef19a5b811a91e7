#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mais/engine.hpp"

namespace mais {

inline constexpr const char* kToolName = "mais";
inline constexpr const char* kToolVersion = "0.1.0";

/// Parsed problem file. Constraints are stored normalized (c_i <= 1 with zero
/// constant term); parsing folds each optional "rhs" into the polynomial.
struct ProblemFile {
  SwitchedSystem system;
  SemiAlgebraicSet constraints;
  Eigen::VectorXd x_min, x_max;
  RunOptions options;
  double verify_margin = 1e-3;
};

struct StageTimings {
  double parse = 0.0;
  double solve = 0.0;
  double write = 0.0;
  double total = 0.0;
};

/// Strict schema: unknown keys anywhere raise std::invalid_argument.
ProblemFile parse_problem(const nlohmann::json& j);
ProblemFile load_problem(const std::string& path);

nlohmann::json serialize_problem(const ProblemFile& p);

nlohmann::json serialize_polynomial(const Polynomial& p);
Polynomial parse_polynomial(const nlohmann::json& j, int n);

nlohmann::json serialize_result(const ProblemFile& problem, const InvariantSetResult& result,
                                const StageTimings& timings, bool verbose_certificates);

/// Reload of a result file, sufficient for the verify/grid commands.
struct ResultFile {
  ProblemFile problem;
  int algorithm = 0;
  int iterations = 0;
  std::vector<Polynomial> polynomials;
  std::vector<Polynomial> reduced_polynomials;
  std::vector<bool> box_derived;
  HPolyhedron fixed_point;
};

ResultFile parse_result(const nlohmann::json& j);
ResultFile load_result(const std::string& path);

}  // namespace mais
