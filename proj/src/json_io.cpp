#include "mais/json_io.hpp"

#include <fstream>
#include <set>

namespace mais {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const char* where) {
  if (!j.is_object()) throw std::invalid_argument(std::string(where) + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      throw std::invalid_argument(std::string(where) + ": unknown key \"" + it.key() + "\"");
  }
}

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Eigen::VectorXd parse_vector(const json& j, const char* where) {
  require(j.is_array(), where);
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    require(j[i].is_number(), where);
    v[i] = j[i].get<double>();
  }
  return v;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json matrix_to_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) rows.push_back(vector_to_json(M.row(i).transpose()));
  return rows;
}

Eigen::MatrixXd parse_matrix(const json& j, const char* where) {
  require(j.is_array() && !j.empty(), where);
  const size_t cols = j[0].size();
  Eigen::MatrixXd M(j.size(), cols);
  for (size_t i = 0; i < j.size(); ++i) {
    require(j[i].is_array() && j[i].size() == cols, where);
    for (size_t k = 0; k < cols; ++k) M(i, k) = j[i][k].get<double>();
  }
  return M;
}

}  // namespace

json serialize_polynomial(const Polynomial& p) {
  json terms = json::array();
  for (const auto& t : p.terms()) {
    json e = json::array();
    for (int v : t.exponents) e.push_back(v);
    terms.push_back(json{{"exponents", e}, {"coeff", t.coeff}});
  }
  return terms;
}

Polynomial parse_polynomial(const json& j, int n) {
  require(j.is_array(), "polynomial: expected an array of terms");
  Polynomial p(n);
  for (const auto& tj : j) {
    check_keys(tj, {"exponents", "coeff"}, "polynomial term");
    require(tj.contains("exponents") && tj.contains("coeff"),
            "polynomial term: needs exponents and coeff");
    const auto& ej = tj["exponents"];
    require(ej.is_array() && static_cast<int>(ej.size()) == n,
            "polynomial term: exponent tuple length must equal n");
    Exponents e(n);
    for (int i = 0; i < n; ++i) {
      require(ej[i].is_number_integer() && ej[i].get<int>() >= 0,
              "polynomial term: exponents must be nonnegative integers");
      e[i] = ej[i].get<int>();
    }
    p.add_term(e, tj["coeff"].get<double>());
  }
  return p;
}

ProblemFile parse_problem(const json& j) {
  check_keys(j, {"n", "matrices", "constraints", "state_box", "options"}, "problem");
  require(j.contains("n") && j["n"].is_number_integer(), "problem: missing integer n");
  ProblemFile p;
  p.system.n = j["n"].get<int>();
  require(p.system.n >= 1, "problem: n must be >= 1");

  require(j.contains("matrices") && j["matrices"].is_array() && !j["matrices"].empty(),
          "problem: matrices must be a nonempty array");
  for (const auto& mj : j["matrices"]) {
    require(mj.is_array() && static_cast<int>(mj.size()) == p.system.n * p.system.n,
            "problem: each matrix is a flat row-major array of n*n floats");
    Eigen::MatrixXd A(p.system.n, p.system.n);
    for (int r = 0; r < p.system.n; ++r)
      for (int c = 0; c < p.system.n; ++c) A(r, c) = mj[r * p.system.n + c].get<double>();
    p.system.matrices.push_back(std::move(A));
  }

  require(j.contains("constraints") && j["constraints"].is_array() && !j["constraints"].empty(),
          "problem: constraints must be a nonempty array");
  for (const auto& cj : j["constraints"]) {
    check_keys(cj, {"terms", "rhs"}, "constraint");
    require(cj.contains("terms"), "constraint: missing terms");
    const double rhs = cj.contains("rhs") ? cj["rhs"].get<double>() : 1.0;
    const Polynomial raw = parse_polynomial(cj["terms"], p.system.n);
    p.constraints.polynomials.push_back(normalize_constraint(raw, rhs));
  }

  require(j.contains("state_box"), "problem: missing state_box");
  check_keys(j["state_box"], {"x_min", "x_max"}, "state_box");
  require(j["state_box"].contains("x_min") && j["state_box"].contains("x_max"),
          "state_box: needs x_min and x_max");
  p.x_min = parse_vector(j["state_box"]["x_min"], "state_box.x_min");
  p.x_max = parse_vector(j["state_box"]["x_max"], "state_box.x_max");
  require(p.x_min.size() == p.system.n && p.x_max.size() == p.system.n,
          "state_box: dimension mismatch");

  if (j.contains("options")) {
    const json& oj = j["options"];
    check_keys(oj,
               {"algorithm", "max_iter", "sos_degree", "delta", "jsr_depth", "sos_reduction",
                "tolerances"},
               "options");
    if (oj.contains("algorithm")) p.options.algorithm = oj["algorithm"].get<int>();
    if (oj.contains("max_iter")) p.options.max_iter = oj["max_iter"].get<int>();
    if (oj.contains("sos_degree")) p.options.sos_degree = oj["sos_degree"].get<int>();
    if (oj.contains("delta")) p.options.delta = oj["delta"].get<double>();
    if (oj.contains("jsr_depth")) p.options.jsr_depth = oj["jsr_depth"].get<int>();
    if (oj.contains("sos_reduction")) p.options.sos_reduction = oj["sos_reduction"].get<bool>();
    if (oj.contains("tolerances")) {
      check_keys(oj["tolerances"], {"verify_margin"}, "options.tolerances");
      if (oj["tolerances"].contains("verify_margin"))
        p.verify_margin = oj["tolerances"]["verify_margin"].get<double>();
    }
  }
  return p;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open problem file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("problem file is not valid JSON: " + std::string(e.what()));
  }
  return parse_problem(j);
}

json serialize_problem(const ProblemFile& p) {
  json mats = json::array();
  for (const auto& A : p.system.matrices) {
    json flat = json::array();
    for (int r = 0; r < A.rows(); ++r)
      for (int c = 0; c < A.cols(); ++c) flat.push_back(A(r, c));
    mats.push_back(flat);
  }
  json cons = json::array();
  for (const auto& c : p.constraints.polynomials)
    cons.push_back(json{{"terms", serialize_polynomial(c)}, {"rhs", 1.0}});
  json options{{"algorithm", p.options.algorithm},
               {"max_iter", p.options.max_iter},
               {"sos_degree", p.options.sos_degree},
               {"delta", p.options.delta},
               {"jsr_depth", p.options.jsr_depth},
               {"sos_reduction", p.options.sos_reduction},
               {"tolerances", json{{"verify_margin", p.verify_margin}}}};
  return json{{"n", p.system.n},
              {"matrices", mats},
              {"constraints", cons},
              {"state_box", json{{"x_min", vector_to_json(p.x_min)},
                                 {"x_max", vector_to_json(p.x_max)}}},
              {"options", options}};
}

namespace {

json serialize_certificate(const RedundancyCertificate& c, bool verbose) {
  json j{{"index", c.index},
         {"verdict", c.verdict == SOSVerdict::kRedundant ? "redundant" : "inconclusive"},
         {"epsilon_star", c.epsilon_star},
         {"multiplier_degree", c.multiplier_degree},
         {"identity_degree", c.identity_degree},
         {"identity_residual", c.identity_residual},
         {"solver_converged", c.solver_converged},
         {"exact_duplicate", c.exact_duplicate}};
  if (verbose) {
    json grams = json::array();
    for (const auto& Q : c.gram_matrices) grams.push_back(matrix_to_json(Q));
    j["gram_matrices"] = grams;
  }
  return j;
}

}  // namespace

json serialize_result(const ProblemFile& problem, const InvariantSetResult& result,
                      const StageTimings& timings, bool verbose_certificates) {
  json trace = json::array();
  for (const auto& r : result.trace) {
    json rec{{"index", r.index},
             {"rows_before", r.rows_before},
             {"rows_after", r.rows_after},
             {"lp_calls", r.lp_calls},
             {"monotone", r.monotone},
             {"seconds", r.seconds}};
    if (!r.note.empty()) rec["note"] = r.note;
    trace.push_back(rec);
  }
  json polys = json::array();
  for (const auto& p : result.polynomials) polys.push_back(serialize_polynomial(p));
  json reduced = json::array();
  for (const auto& p : result.reduced_polynomials) reduced.push_back(serialize_polynomial(p));
  json certs = json::array();
  for (const auto& c : result.sos_certificates)
    certs.push_back(serialize_certificate(c, verbose_certificates));
  json box_derived = json::array();
  for (bool f : result.box_derived) box_derived.push_back(f);

  json res{{"algorithm", result.algorithm},
           {"iterations", result.iterations},
           {"converged", true},
           {"stop_reason", result.stop_reason},
           {"fixed_point", json{{"A", matrix_to_json(result.fixed_point.A())},
                                {"b", vector_to_json(result.fixed_point.b())}}},
           {"polynomials", polys},
           {"box_derived", box_derived},
           {"reduced_polynomials", reduced},
           {"trace", json{{"iterations", trace}, {"notes", result.notes}}},
           {"certificates",
            json{{"jsr", json{{"lower", result.jsr.lower},
                              {"upper", result.jsr.upper},
                              {"depth", result.jsr.depth}}},
                 {"sos", certs}}},
           {"box", json{{"lo", vector_to_json(result.box.lo)},
                        {"hi", vector_to_json(result.box.hi)}}}};
  return json{{"tool", json{{"name", kToolName}, {"version", kToolVersion}}},
              {"timings", json{{"parse_seconds", timings.parse},
                               {"solve_seconds", timings.solve},
                               {"write_seconds", timings.write},
                               {"total_seconds", timings.total}}},
              {"problem", serialize_problem(problem)},
              {"result", res}};
}

ResultFile parse_result(const json& j) {
  require(j.is_object() && j.contains("problem") && j.contains("result"),
          "result file: needs problem and result");
  ResultFile r;
  r.problem = parse_problem(j["problem"]);
  const json& res = j["result"];
  require(res.contains("polynomials") && res["polynomials"].is_array() &&
              !res["polynomials"].empty(),
          "result file: missing polynomials");
  r.algorithm = res.value("algorithm", 0);
  r.iterations = res.value("iterations", 0);
  for (const auto& pj : res["polynomials"])
    r.polynomials.push_back(parse_polynomial(pj, r.problem.system.n));
  if (res.contains("reduced_polynomials"))
    for (const auto& pj : res["reduced_polynomials"])
      r.reduced_polynomials.push_back(parse_polynomial(pj, r.problem.system.n));
  if (res.contains("box_derived"))
    for (const auto& f : res["box_derived"]) r.box_derived.push_back(f.get<bool>());
  if (res.contains("fixed_point")) {
    const Eigen::MatrixXd A = parse_matrix(res["fixed_point"]["A"], "fixed_point.A");
    const Eigen::VectorXd b = parse_vector(res["fixed_point"]["b"], "fixed_point.b");
    r.fixed_point = HPolyhedron(A, b);
  }
  return r;
}

ResultFile load_result(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open result file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("result file is not valid JSON: " + std::string(e.what()));
  }
  return parse_result(j);
}

}  // namespace mais
