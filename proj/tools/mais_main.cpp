// mais: maximal admissible invariant sets of constrained switching linear
// systems, computed by Veronese lifting and polyhedral pre-image iteration.
//
// Subcommands: solve, check, grid, verify, lift. See README.md for the file
// formats and the exit-code contract.
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mais/engine.hpp"
#include "mais/json_io.hpp"

using namespace mais;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// exit codes
constexpr int kOk = 0;
constexpr int kInternalError = 1;
constexpr int kNonConvergence = 2;
constexpr int kGateFailure = 3;
constexpr int kParseError = 4;
constexpr int kVerifyViolations = 5;

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct CommonFlags {
  int algorithm = 0;  // 0: keep file option
  int max_iter = 0;
  int sos_degree = -1;
  double delta = -1.0;
  int jsr_depth = 0;
  bool no_sos_reduction = false;
  bool skip_gate = false;
};

void apply_flags(ProblemFile& p, const CommonFlags& f) {
  if (f.algorithm > 0) p.options.algorithm = f.algorithm;
  if (f.max_iter > 0) p.options.max_iter = f.max_iter;
  if (f.sos_degree >= 0) p.options.sos_degree = f.sos_degree;
  if (f.delta >= 0.0) p.options.delta = f.delta;
  if (f.jsr_depth > 0) p.options.jsr_depth = f.jsr_depth;
  if (f.no_sos_reduction) p.options.sos_reduction = false;
  if (f.skip_gate) p.options.skip_stability_gate = true;
}

double max_value(const std::vector<Polynomial>& polys, const VectorXd& x) {
  double v = -1e300;
  for (const auto& p : polys) v = std::max(v, p.eval(x));
  return v;
}

int cmd_solve(const std::string& problem_path, const std::string& output,
              const CommonFlags& flags, bool verbose) {
  StageTimings times;
  const double t0 = now();
  ProblemFile p = load_problem(problem_path);
  apply_flags(p, flags);
  times.parse = now() - t0;

  const double t1 = now();
  const InvariantSetResult res =
      solve(p.system, p.constraints, p.x_min, p.x_max, p.options);
  times.solve = now() - t1;

  const double t2 = now();
  times.total = now() - t0;
  const nlohmann::json j = serialize_result(p, res, times, verbose);
  std::ofstream out(output);
  if (!out) throw std::runtime_error("cannot write " + output);
  out << j.dump(2) << "\n";
  times.write = now() - t2;

  std::cout << "converged after " << res.iterations << " iterations ("
            << res.stop_reason << ")\n"
            << "fixed point: " << res.fixed_point.rows() << " half-spaces, "
            << res.polynomials.size() << " defining polynomials";
  if (!res.reduced_polynomials.empty() &&
      res.reduced_polynomials.size() < res.polynomials.size())
    std::cout << " (" << res.reduced_polynomials.size() << " after reduction)";
  std::cout << "\njsr bounds: [" << res.jsr.lower << ", " << res.jsr.upper
            << "] at depth " << res.jsr.depth << "\nresult written to " << output
            << "\n";
  return kOk;
}

int cmd_check(const std::string& problem_path, int jsr_depth) {
  const ProblemFile p = load_problem(problem_path);
  std::cout << "constraints: " << p.constraints.polynomials.size()
            << " polynomial(s), normalized to c_i(x) <= 1; origin interior: yes\n";

  const int depth = jsr_depth > 0 ? jsr_depth : p.options.jsr_depth;
  const StabilityGate gate = certify_stability(p.system.matrices, depth);
  std::cout << "jsr bounds: [" << gate.bounds.lower << ", " << gate.bounds.upper
            << "] at depth " << gate.bounds.depth << "\n";
  if (!gate.certified) {
    std::cout << "stability: NOT certified (upper bound >= 1); invariance verdict: "
                 "not-applicable\n";
    return kGateFailure;
  }
  std::cout << "stability: certified (upper bound < 1)\n";

  const LiftedProblem prob = build_lifted_problem(p.system, p.constraints);
  const auto inv = check_invariance(prob.X_lifted.A(), prob.lifted);
  if (inv.invariant()) {
    std::cout << "invariance of the constraint set: invariant (epsilon = "
              << inv.certificate->epsilon << ")\n";
  } else if (inv.feasible) {
    std::cout << "invariance of the constraint set: unknown (feasible but epsilon = "
              << inv.certificate->epsilon << " > 1)\n";
  } else {
    std::cout << "invariance of the constraint set: unknown (certificate LP infeasible)\n";
  }
  return kOk;
}

// marching-squares level-1 segments of a polynomial over the grid
void append_level_curve(std::ostream& svg, const Polynomial& poly, const VectorXd& lo,
                        const VectorXd& hi, int R, double sx, double sy,
                        const std::string& color) {
  std::vector<double> val((R + 1) * (R + 1));
  for (int i = 0; i <= R; ++i)
    for (int j = 0; j <= R; ++j) {
      VectorXd x(2);
      x << lo[0] + (hi[0] - lo[0]) * i / R, lo[1] + (hi[1] - lo[1]) * j / R;
      val[i * (R + 1) + j] = poly.eval(x) - 1.0;
    }
  auto px = [&](double x) { return (x - lo[0]) * sx; };
  auto py = [&](double y) { return (hi[1] - y) * sy; };
  svg << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" d=\"";
  for (int i = 0; i < R; ++i) {
    for (int j = 0; j < R; ++j) {
      const double x0 = lo[0] + (hi[0] - lo[0]) * i / R;
      const double x1 = lo[0] + (hi[0] - lo[0]) * (i + 1) / R;
      const double y0 = lo[1] + (hi[1] - lo[1]) * j / R;
      const double y1 = lo[1] + (hi[1] - lo[1]) * (j + 1) / R;
      const double v00 = val[i * (R + 1) + j], v10 = val[(i + 1) * (R + 1) + j];
      const double v01 = val[i * (R + 1) + j + 1], v11 = val[(i + 1) * (R + 1) + j + 1];
      struct Pt {
        double x, y;
      };
      std::vector<Pt> pts;
      auto cross = [&](double a, double b, double pax, double pay, double pbx,
                       double pby) {
        if ((a < 0) == (b < 0)) return;
        if (a == b) return;
        const double t = a / (a - b);
        pts.push_back({pax + t * (pbx - pax), pay + t * (pby - pay)});
      };
      cross(v00, v10, x0, y0, x1, y0);
      cross(v10, v11, x1, y0, x1, y1);
      cross(v01, v11, x0, y1, x1, y1);
      cross(v00, v01, x0, y0, x0, y1);
      if (pts.size() == 2)
        svg << "M" << px(pts[0].x) << " " << py(pts[0].y) << "L" << px(pts[1].x) << " "
            << py(pts[1].y);
      else if (pts.size() == 4) {
        svg << "M" << px(pts[0].x) << " " << py(pts[0].y) << "L" << px(pts[1].x) << " "
            << py(pts[1].y);
        svg << "M" << px(pts[2].x) << " " << py(pts[2].y) << "L" << px(pts[3].x) << " "
            << py(pts[3].y);
      }
    }
  }
  svg << "\"/>\n";
}

int cmd_grid(const std::string& result_path, int resolution, const std::string& out_prefix,
             std::vector<double> bounds) {
  const ResultFile r = load_result(result_path);
  const int n = r.problem.system.n;
  if (n < 2 || n > 3) throw std::invalid_argument("grid: state dimension must be 2 or 3");
  VectorXd lo = r.problem.x_min, hi = r.problem.x_max;
  if (!bounds.empty()) {
    if (static_cast<int>(bounds.size()) != 2 * n)
      throw std::invalid_argument("grid: --bounds needs 2n values (lo... hi...)");
    for (int i = 0; i < n; ++i) {
      lo[i] = bounds[i];
      hi[i] = bounds[n + i];
    }
  }
  const auto& polys = r.polynomials;

  const std::string csv_path = out_prefix + ".csv";
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot write " + csv_path);
  csv.precision(12);
  csv << (n == 2 ? "x1,x2,max_c,member\n" : "x1,x2,x3,max_c,member\n");
  long members = 0, rows = 0;
  std::vector<int> idx(n, 0);
  VectorXd x(n);
  while (true) {
    for (int i = 0; i < n; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * (idx[i] + 0.5) / resolution;
    const double v = max_value(polys, x);
    const int member = v <= 1.0 ? 1 : 0;
    members += member;
    ++rows;
    for (int i = 0; i < n; ++i) csv << x[i] << ",";
    csv << v << "," << member << "\n";
    int k = 0;
    while (k < n && ++idx[k] == resolution) idx[k++] = 0;
    if (k == n) break;
  }
  std::cout << "grid: " << rows << " rows, " << members << " members -> " << csv_path
            << "\n";

  if (n == 2) {
    const std::string svg_path = out_prefix + ".svg";
    std::ofstream svg(svg_path);
    if (!svg) throw std::runtime_error("cannot write " + svg_path);
    const int W = 640, H = 640;
    const double sx = W / (hi[0] - lo[0]), sy = H / (hi[1] - lo[1]);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
        << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
        << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    const double cw = static_cast<double>(W) / resolution,
                 ch = static_cast<double>(H) / resolution;
    for (int i = 0; i < resolution; ++i)
      for (int j = 0; j < resolution; ++j) {
        VectorXd q(2);
        q << lo[0] + (hi[0] - lo[0]) * (i + 0.5) / resolution,
            lo[1] + (hi[1] - lo[1]) * (j + 0.5) / resolution;
        if (max_value(polys, q) <= 1.0)
          svg << "<rect x=\"" << i * cw << "\" y=\"" << H - (j + 1) * ch << "\" width=\""
              << cw + 0.5 << "\" height=\"" << ch + 0.5 << "\" fill=\"#9ecae1\"/>\n";
      }
    // level-1 curves: inherited constraints in black, added active rows in
    // red, rows removed by the reduction step in grey
    const auto& inherited = r.problem.constraints.polynomials;
    for (const auto& p : polys) {
      bool is_inherited = false;
      for (const auto& c : inherited)
        if (p.coefficient_distance(c) <= 1e-9) is_inherited = true;
      bool removed = !r.reduced_polynomials.empty();
      for (const auto& c : r.reduced_polynomials)
        if (p.coefficient_distance(c) <= 1e-9) removed = false;
      const std::string color = is_inherited ? "black" : (removed ? "#aaaaaa" : "#d62728");
      append_level_curve(svg, p, lo, hi, 160, sx, sy, color);
    }
    svg << "</svg>\n";
    std::cout << "figure written to " << svg_path << "\n";
  }
  return kOk;
}

int cmd_verify(const std::string& problem_path, const std::string& result_path,
               int grid_res, int horizon) {
  const ProblemFile p = load_problem(problem_path);
  const ResultFile r = load_result(result_path);
  // the result must describe the same system and constraints (options such as
  // the algorithm choice may differ)
  auto essence = [](const ProblemFile& q) {
    nlohmann::json j = serialize_problem(q);
    j.erase("options");
    return j;
  };
  if (essence(p) != essence(r.problem))
    throw std::invalid_argument("verify: problem and result files do not match");
  const int T = horizon >= 0 ? horizon : r.iterations + 2;
  const auto rep = verify_by_simulation(p.system, p.constraints, r.polynomials, p.x_min,
                                        p.x_max, grid_res, T, p.verify_margin);
  std::cout << "verified " << rep.inside_checked << " member and " << rep.outside_checked
            << " non-member grid points (horizon " << T << ", " << rep.boundary_skipped
            << " boundary points skipped)\n";
  if (rep.clean()) {
    std::cout << "no violations\n";
    return kOk;
  }
  std::cout << rep.inside_violations.size() << " member violation(s), "
            << rep.outside_violations.size() << " non-member violation(s)\n";
  for (size_t i = 0; i < rep.inside_violations.size() && i < 5; ++i)
    std::cout << "  member escapes X from: " << rep.inside_violations[i].transpose()
              << "\n";
  for (size_t i = 0; i < rep.outside_violations.size() && i < 5; ++i)
    std::cout << "  non-member never exits X from: "
              << rep.outside_violations[i].transpose() << "\n";
  return kVerifyViolations;
}

int cmd_lift(const std::string& problem_path) {
  const ProblemFile p = load_problem(problem_path);
  const LiftedProblem prob = build_lifted_problem(p.system, p.constraints);
  std::cout << "degrees:";
  for (int d : prob.basis.degrees()) std::cout << " " << d;
  std::cout << "\nlifted dimension N = " << prob.basis.size() << "\ncoordinates:\n";
  for (int i = 0; i < prob.basis.size(); ++i) {
    std::cout << "  y" << (i + 1) << " = sqrt(" << multinomial(prob.basis.exponents_at(i))
              << ")";
    for (int k = 0; k < p.system.n; ++k) {
      const int e = prob.basis.exponents_at(i)[k];
      if (e > 0) {
        std::cout << " * x" << (k + 1);
        if (e > 1) std::cout << "^" << e;
      }
    }
    std::cout << "\n";
  }
  Eigen::IOFormat fmt(6, 0, ", ", "\n            ", "[", "]");
  for (size_t m = 0; m < prob.lifted.lifted.size(); ++m)
    std::cout << "mode " << (m + 1) << " lift:\n            "
              << prob.lifted.lifted[m].format(fmt) << "\n";
  std::cout << "lifted constraint rows (g_i, RHS 1):\n            "
            << prob.X_lifted.A().format(fmt) << "\n";
  const Box B = box_from_state_bounds(p.x_min, p.x_max, prob.basis, 0.0);
  std::cout << "bounding box: lo = " << B.lo.transpose() << "\n              hi = "
            << B.hi.transpose() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  // solver backend selection hook; only the builtin backend is compiled in
  if (const char* backend = std::getenv("MAIS_SOLVER")) {
    const std::string b = backend;
    if (!b.empty() && b != "builtin") {
      std::cerr << "error: unknown solver backend \"" << b
                << "\" (this build provides: builtin)\n";
      return kParseError;
    }
  }

  CLI::App app{"maximal admissible invariant sets of constrained switching "
               "linear systems"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string problem_path, result_path, output = "result.json", out_prefix = "grid";
  std::vector<double> bounds;
  bool verbose = false;
  int grid_res = 100, horizon = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--algorithm", flags.algorithm, "algorithm 1, 2 or 3")
        ->check(CLI::Range(1, 3));
    cmd->add_option("--max-iter", flags.max_iter, "iteration cap");
    cmd->add_option("--sos-degree", flags.sos_degree,
                    "identity degree cap for the SOS reduction (even)");
    cmd->add_option("--delta", flags.delta, "origin-interior margin for algorithm 3");
    cmd->add_option("--jsr-depth", flags.jsr_depth, "product depth of the stability gate");
    cmd->add_flag("--no-sos-reduction", flags.no_sos_reduction,
                  "skip the SOS post-processing step");
    cmd->add_flag("--skip-stability-gate", flags.skip_gate,
                  "run even when stability cannot be certified");
  };

  auto* solve_cmd = app.add_subcommand("solve", "compute the maximal admissible invariant set");
  solve_cmd->add_option("problem", problem_path, "problem JSON file")->required();
  solve_cmd->add_option("--output", output, "result JSON path");
  solve_cmd->add_flag("--verbose", verbose, "include Gram matrices in the result");
  add_common(solve_cmd);

  int check_depth = 0;
  auto* check_cmd = app.add_subcommand("check", "stability gate and invariance certificate");
  check_cmd->add_option("problem", problem_path, "problem JSON file")->required();
  check_cmd->add_option("--jsr-depth", check_depth, "product depth of the stability gate");

  auto* grid_cmd = app.add_subcommand("grid", "export membership grid (CSV, SVG for n=2)");
  grid_cmd->add_option("result", result_path, "result JSON file")->required();
  grid_cmd->add_option("--grid-res", grid_res, "points per axis");
  grid_cmd->add_option("--output", out_prefix, "output path prefix");
  grid_cmd->add_option("--bounds", bounds, "lo1 .. lon hi1 .. hin");

  auto* verify_cmd = app.add_subcommand("verify", "simulation oracle against a result file");
  verify_cmd->add_option("problem", problem_path, "problem JSON file")->required();
  verify_cmd->add_option("result", result_path, "result JSON file")->required();
  verify_cmd->add_option("--grid-res", grid_res, "points per axis");
  verify_cmd->add_option("--horizon", horizon, "switching horizon (default: iterations + 2)");

  auto* lift_cmd = app.add_subcommand("lift", "print the lifted system and constraints");
  lift_cmd->add_option("problem", problem_path, "problem JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(problem_path, output, flags, verbose);
    if (check_cmd->parsed()) return cmd_check(problem_path, check_depth);
    if (grid_cmd->parsed()) return cmd_grid(result_path, grid_res, out_prefix, bounds);
    if (verify_cmd->parsed()) return cmd_verify(problem_path, result_path, grid_res, horizon);
    if (lift_cmd->parsed()) return cmd_lift(problem_path);
  } catch (const StabilityGateFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGateFailure;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << " (" << e.trace.size()
              << " sets computed; see --max-iter)\n";
    return kNonConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}
