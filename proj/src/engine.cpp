#include "mais/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace mais {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct Interval {
  double lo, hi;
};

Interval power_interval(double lo, double hi, int e) {
  if (e == 0) return {1.0, 1.0};
  if (e % 2 == 1) return {std::pow(lo, e), std::pow(hi, e)};
  const double mhi = std::pow(std::max(std::abs(lo), std::abs(hi)), e);
  const double mlo = (lo <= 0.0 && hi >= 0.0)
                         ? 0.0
                         : std::pow(std::min(std::abs(lo), std::abs(hi)), e);
  return {mlo, mhi};
}

Interval mul(Interval a, Interval b) {
  const double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {std::min({c[0], c[1], c[2], c[3]}), std::max({c[0], c[1], c[2], c[3]})};
}

double max_poly_value(const std::vector<Polynomial>& polys, const VectorXd& x) {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& p : polys) v = std::max(v, p.eval(x));
  return v;
}

}  // namespace

Polynomial normalize_constraint(const Polynomial& p, double rhs) {
  const double c0 = p.constant_term();
  const double scale = rhs - c0;
  if (scale <= kCoeffTol)
    throw std::invalid_argument(
        "constraint cannot be normalized: origin is not in the interior "
        "(rhs minus constant term must be positive)");
  Polynomial q = p;
  q.add_term(Exponents(p.dimension(), 0), -c0);
  q *= 1.0 / scale;
  return q;
}

LiftedProblem build_lifted_problem(const SwitchedSystem& sys, const SemiAlgebraicSet& X) {
  if (sys.matrices.empty()) throw std::invalid_argument("system has no matrices");
  for (const auto& A : sys.matrices)
    if (A.rows() != sys.n || A.cols() != sys.n)
      throw std::invalid_argument("system matrix dimension mismatch");
  if (X.polynomials.empty()) throw std::invalid_argument("empty constraint set");
  for (const auto& p : X.polynomials) {
    if (p.dimension() != sys.n)
      throw std::invalid_argument("constraint dimension mismatch");
    if (std::abs(p.constant_term()) > kCoeffTol)
      throw std::invalid_argument("constraints must be normalized (zero constant term)");
  }

  ConstraintDecomposition dec = decompose_constraints(X.polynomials);
  const int N = dec.basis.size();
  MatrixXd G(X.polynomials.size(), N);
  for (int i = 0; i < static_cast<int>(dec.g.size()); ++i) G.row(i) = dec.g[i].transpose();

  LiftedProblem prob{sys, X, dec.basis, lift_matrix_set(sys.matrices, dec.basis),
                     HPolyhedron::with_unit_rhs(G)};

  // lowering the lifted rows must reproduce the constraints exactly
  const auto lowered = lower_polyhedron(prob.X_lifted, prob.basis);
  for (int i = 0; i < static_cast<int>(lowered.size()); ++i)
    if (lowered[i].coefficient_distance(X.polynomials[i]) > 1e-9)
      throw std::logic_error("lift/lower round trip failed");
  return prob;
}

Box box_from_state_bounds(const VectorXd& x_min, const VectorXd& x_max,
                          const LiftBasis& basis, double delta) {
  const int n = basis.state_dimension();
  if (x_min.size() != n || x_max.size() != n)
    throw std::invalid_argument("state box dimension mismatch");
  for (int i = 0; i < n; ++i)
    if (!(x_min[i] < 0.0 && 0.0 < x_max[i]))
      throw std::invalid_argument("state box must contain the origin in its interior");
  Box B;
  B.lo.resize(basis.size());
  B.hi.resize(basis.size());
  for (int k = 0; k < basis.size(); ++k) {
    const Exponents& alpha = basis.exponents_at(k);
    Interval r{1.0, 1.0};
    for (int i = 0; i < n; ++i) {
      if (alpha[i] == 0) continue;
      r = mul(r, power_interval(x_min[i], x_max[i], alpha[i]));
    }
    const double s = basis.sqrt_multinomial_at(k);
    B.lo[k] = s * r.lo;
    B.hi[k] = s * r.hi;
  }
  if (delta > 0.0)
    for (int k = 0; k < basis.size(); ++k) B.lo[k] = std::min(-delta, B.lo[k]);
  return B;
}

void validate_state_box(const SemiAlgebraicSet& X, const VectorXd& x_min,
                        const VectorXd& x_max, int sample_budget) {
  const int n = static_cast<int>(x_min.size());
  const int per_axis = std::max(2, static_cast<int>(std::round(
                                       std::pow(static_cast<double>(sample_budget), 1.0 / n))));
  // sample over the 1.5x inflated box; members outside the box are witnesses
  VectorXd c = 0.5 * (x_min + x_max);
  VectorXd half = 0.75 * (x_max - x_min);
  std::vector<int> idx(n, 0);
  VectorXd x(n);
  while (true) {
    for (int i = 0; i < n; ++i)
      x[i] = c[i] - half[i] + (2.0 * half[i]) * (idx[i] + 0.5) / per_axis;
    bool member = true;
    for (const auto& p : X.polynomials)
      if (p.eval(x) > 1.0) {
        member = false;
        break;
      }
    if (member) {
      bool inside_box = true;
      for (int i = 0; i < n; ++i)
        if (x[i] < x_min[i] || x[i] > x_max[i]) inside_box = false;
      if (!inside_box) {
        std::ostringstream os;
        os << "state box does not enclose the constraint set; witness x = [";
        for (int i = 0; i < n; ++i) os << (i ? ", " : "") << x[i];
        os << "]";
        throw std::invalid_argument(os.str());
      }
    }
    int k = 0;
    while (k < n && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == n) break;
  }
}

namespace {

struct TaggedPolyhedron {
  HPolyhedron poly;
  std::vector<bool> from_box;
};

TaggedPolyhedron reduce_tagged(const HPolyhedron& P, const std::vector<bool>& tags) {
  auto [red, kept] = remove_redundancy_indexed(P);
  std::vector<bool> out;
  out.reserve(kept.size());
  for (int k : kept) out.push_back(tags[k]);
  return {std::move(red), std::move(out)};
}

// bounded stop test, one-sided: Z_old cap B subset of Z_new cap B
// (the reverse inclusion holds by monotonicity)
bool box_criterion(const HPolyhedron& Znew, const HPolyhedron& Zold, const Box& B,
                   bool two_sided) {
  if (!contains_on(Znew, Zold, B).holds) return false;
  if (two_sided && !contains_on(Zold, Znew, B).holds) return false;
  return true;
}

struct VarietyStop {
  const LiftBasis* basis;
  int identity_degree;

  bool certified(const HPolyhedron& Znew, const HPolyhedron& Zold) const {
    const auto down_new = lower_polyhedron(Znew, *basis);
    const auto down_old = lower_polyhedron(Zold, *basis);
    // both inclusions: every polynomial of each description must carry a
    // certificate against the other description
    for (const auto& q : down_new) {
      const auto cert = sos_implication(down_old, q, identity_degree);
      if (cert.verdict != SOSVerdict::kRedundant) return false;
    }
    for (const auto& q : down_old) {
      const auto cert = sos_implication(down_new, q, identity_degree);
      if (cert.verdict != SOSVerdict::kRedundant) return false;
    }
    return true;
  }
};

InvariantSetResult run_iteration(const LiftedProblem& problem, const RunOptions& options,
                                 const TaggedPolyhedron& S0, const Box& stop_box,
                                 const VarietyStop* variety_stop) {
  InvariantSetResult res;
  res.algorithm = options.algorithm;
  res.box = stop_box;

  if (!options.skip_stability_gate) {
    const StabilityGate gate = certify_stability(problem.system.matrices, options.jsr_depth);
    res.jsr = gate.bounds;
    if (!gate.certified) {
      std::ostringstream os;
      os << "stability gate failed: joint spectral radius in ["
         << gate.bounds.lower << ", " << gate.bounds.upper << "] at depth "
         << gate.bounds.depth << " (upper bound must be < 1)";
      throw StabilityGateFailure(os.str(), gate.bounds);
    }
  } else {
    res.jsr = jsr_bounds(problem.system.matrices, std::max(1, options.jsr_depth / 2));
    res.notes.push_back("stability gate skipped by request");
  }

  TaggedPolyhedron Z = reduce_tagged(S0.poly, S0.from_box);
  {
    IterationRecord rec;
    rec.index = 0;
    rec.rows_before = S0.poly.rows();
    rec.rows_after = Z.poly.rows();
    res.trace.push_back(rec);
  }

  for (int step = 1; step <= options.max_iter; ++step) {
    const double t0 = now_seconds();
    IterationRecord rec;
    rec.index = step;

    const HPolyhedron pre = preimage(Z.poly, problem.lifted.lifted);
    std::vector<bool> pre_tags;
    pre_tags.reserve(pre.rows());
    for (size_t j = 0; j < problem.lifted.lifted.size(); ++j)
      pre_tags.insert(pre_tags.end(), Z.from_box.begin(), Z.from_box.end());

    HPolyhedron cand = intersect(pre, S0.poly);
    std::vector<bool> cand_tags = pre_tags;
    cand_tags.insert(cand_tags.end(), S0.from_box.begin(), S0.from_box.end());
    rec.rows_before = cand.rows();

    TaggedPolyhedron next = reduce_tagged(cand, cand_tags);
    rec.rows_after = next.poly.rows();
    rec.lp_calls = cand.rows();  // one redundancy LP per scanned row

    if (options.debug_checks) {
      // reduction soundness: the reduced description defines the same set
      if (!contains(next.poly, cand).holds || !contains(cand, next.poly).holds)
        throw std::logic_error("redundancy removal changed the set");
      rec.lp_calls += next.poly.rows() + cand.rows();
    }
    rec.monotone = contains(Z.poly, next.poly).holds;
    rec.lp_calls += Z.poly.rows();

    bool stopped = false;
    if (variety_stop != nullptr) {
      if (variety_stop->certified(next.poly, Z.poly)) {
        res.stop_reason = "variety equality certified by SOS";
        stopped = true;
      } else if (box_criterion(next.poly, Z.poly, stop_box, options.debug_checks)) {
        res.stop_reason = "box criterion (fallback)";
        rec.note = "sos test inconclusive; box fallback engaged";
        rec.lp_calls += next.poly.rows();
        stopped = true;
      } else {
        rec.note = "sos test inconclusive";
        rec.lp_calls += next.poly.rows();
      }
    } else if (box_criterion(next.poly, Z.poly, stop_box, options.debug_checks)) {
      res.stop_reason = "box criterion";
      rec.lp_calls += next.poly.rows();
      stopped = true;
    } else {
      rec.lp_calls += next.poly.rows();
    }

    rec.seconds = now_seconds() - t0;
    res.trace.push_back(rec);

    if (stopped) {
      res.iterations = step + 1;  // sets computed, counting the initial one
      res.fixed_point = Z.poly;
      res.box_derived = Z.from_box;
      // fixed-point check, two-sided on the criterion's scope; a stop by SOS
      // certificates is already a two-sided proof on the variety
      if (res.stop_reason == "variety equality certified by SOS") {
        res.notes.push_back("fixed point verified by SOS certificates on the variety");
      } else if (!equal_on(next.poly, Z.poly, stop_box)) {
        throw std::logic_error("fixed point failed the two-sided containment check");
      } else {
        res.notes.push_back("fixed point verified by mutual containment on the box");
      }
      res.polynomials = lower_polyhedron(res.fixed_point, problem.basis);
      if (options.sos_reduction) {
        const int dmax = options.sos_degree > 0 ? options.sos_degree : 0;
        MinimalDescription md = minimal_semialgebraic(res.polynomials, dmax);
        res.reduced_polynomials = std::move(md.kept);
        res.sos_certificates = std::move(md.certificates);
      }
      return res;
    }
    Z = std::move(next);
  }
  throw NonConvergence("iteration cap reached without convergence", res.trace);
}

}  // namespace

InvariantSetResult iterate(const LiftedProblem& problem, const HPolyhedron& S0,
                           const Box& stop_box, const RunOptions& options) {
  if (!S0.has_unit_rhs())
    throw std::invalid_argument("iterate: starting set must have unit RHS");
  if (options.max_iter < 1) throw std::invalid_argument("iterate: max_iter must be >= 1");
  TaggedPolyhedron tagged{S0, std::vector<bool>(S0.rows(), false)};
  return run_iteration(problem, options, tagged, stop_box, nullptr);
}

InvariantSetResult run_algorithm2(const LiftedProblem& problem, const VectorXd& x_min,
                                  const VectorXd& x_max, const RunOptions& options) {
  validate_state_box(problem.constraints, x_min, x_max);
  const Box B = box_from_state_bounds(x_min, x_max, problem.basis, 0.0);
  RunOptions opts = options;
  opts.algorithm = 2;
  return iterate(problem, problem.X_lifted, B, opts);
}

InvariantSetResult run_algorithm3(const LiftedProblem& problem, const VectorXd& x_min,
                                  const VectorXd& x_max, const RunOptions& options) {
  validate_state_box(problem.constraints, x_min, x_max);
  if (options.delta <= 0.0)
    throw std::invalid_argument("algorithm 3 requires delta > 0 (origin interior box)");
  const Box B = box_from_state_bounds(x_min, x_max, problem.basis, options.delta);
  // unit-normalized box rows so the whole iteration stays in {G y <= 1} form
  const HPolyhedron box_poly = B.to_polyhedron();
  MatrixXd rows(box_poly.rows() + problem.X_lifted.rows(), problem.basis.size());
  std::vector<bool> tags;
  for (int i = 0; i < box_poly.rows(); ++i) {
    const double bi = box_poly.b()[i];
    if (bi <= 0.0)
      throw std::invalid_argument("algorithm 3 box has a facet with nonpositive offset");
    rows.row(i) = box_poly.A().row(i) / bi;
    tags.push_back(true);
  }
  rows.bottomRows(problem.X_lifted.rows()) = problem.X_lifted.A();
  tags.insert(tags.end(), problem.X_lifted.rows(), false);
  TaggedPolyhedron S0{HPolyhedron::with_unit_rhs(std::move(rows)), std::move(tags)};
  RunOptions opts = options;
  opts.algorithm = 3;
  return run_iteration(problem, opts, S0, B, nullptr);
}

InvariantSetResult run_algorithm1(const LiftedProblem& problem, const VectorXd& x_min,
                                  const VectorXd& x_max, const RunOptions& options) {
  validate_state_box(problem.constraints, x_min, x_max);
  const Box B = box_from_state_bounds(x_min, x_max, problem.basis, 0.0);
  TaggedPolyhedron S0{problem.X_lifted,
                      std::vector<bool>(problem.X_lifted.rows(), false)};
  VarietyStop vs;
  vs.basis = &problem.basis;
  vs.identity_degree = options.sos_degree > 0
                           ? options.sos_degree
                           : default_identity_degree(problem.constraints.polynomials);
  RunOptions opts = options;
  opts.algorithm = 1;
  return run_iteration(problem, opts, S0, B, &vs);
}

InvariantSetResult solve(const SwitchedSystem& sys, const SemiAlgebraicSet& X,
                         const VectorXd& x_min, const VectorXd& x_max,
                         const RunOptions& options) {
  const LiftedProblem problem = build_lifted_problem(sys, X);
  switch (options.algorithm) {
    case 1:
      return run_algorithm1(problem, x_min, x_max, options);
    case 2:
      return run_algorithm2(problem, x_min, x_max, options);
    case 3:
      return run_algorithm3(problem, x_min, x_max, options);
    default:
      throw std::invalid_argument("algorithm must be 1, 2 or 3");
  }
}

VerificationReport verify_by_simulation(const SwitchedSystem& sys, const SemiAlgebraicSet& X,
                                        const std::vector<Polynomial>& invariant_set,
                                        const VectorXd& x_min, const VectorXd& x_max,
                                        int grid_resolution, int horizon, double margin) {
  if (sys.n > 3) throw std::invalid_argument("verify_by_simulation: n must be <= 3");
  const double budget = std::pow(static_cast<double>(sys.matrices.size()), horizon);
  if (budget > 5e6) throw std::invalid_argument("verify_by_simulation: horizon too large");

  VerificationReport rep;
  const int n = sys.n;
  const int R = grid_resolution;
  std::vector<int> idx(n, 0);
  VectorXd x(n);

  auto in_X = [&](const VectorXd& z) {
    for (const auto& p : X.polynomials)
      if (p.eval(z) > 1.0 + 1e-9) return false;
    return true;
  };

  while (true) {
    for (int i = 0; i < n; ++i)
      x[i] = x_min[i] + (x_max[i] - x_min[i]) * (idx[i] + 0.5) / R;
    if (in_X(x)) {
      const double v = max_poly_value(invariant_set, x);
      if (v <= 1.0 - margin) {
        ++rep.inside_checked;
        if (horizon > 0) {
          // every switching sequence must stay in X
          std::vector<VectorXd> frontier{x};
          bool ok = true;
          for (int t = 0; t < horizon && ok; ++t) {
            std::vector<VectorXd> next;
            next.reserve(frontier.size() * sys.matrices.size());
            for (const auto& z : frontier) {
              for (const auto& A : sys.matrices) {
                VectorXd w = A * z;
                if (!in_X(w)) {
                  ok = false;
                  break;
                }
                next.push_back(std::move(w));
              }
              if (!ok) break;
            }
            frontier = std::move(next);
          }
          if (!ok) rep.inside_violations.push_back(x);
        }
      } else if (v >= 1.0 + margin) {
        ++rep.outside_checked;
        if (horizon > 0) {
          // some sequence must leave X within the horizon
          std::vector<VectorXd> frontier{x};
          bool exited = false;
          for (int t = 0; t < horizon && !exited; ++t) {
            std::vector<VectorXd> next;
            next.reserve(frontier.size() * sys.matrices.size());
            for (const auto& z : frontier) {
              for (const auto& A : sys.matrices) {
                VectorXd w = A * z;
                if (!in_X(w)) {
                  exited = true;
                  break;
                }
                next.push_back(std::move(w));
              }
              if (exited) break;
            }
            frontier = std::move(next);
          }
          if (!exited) rep.outside_violations.push_back(x);
        }
      } else {
        ++rep.boundary_skipped;
      }
    }
    int k = 0;
    while (k < n && ++idx[k] == R) idx[k++] = 0;
    if (k == n) break;
  }
  return rep;
}

ConvexityReport convexity_check(const std::vector<Polynomial>& invariant_set,
                                const VectorXd& x_min, const VectorXd& x_max, int samples,
                                unsigned seed) {
  const int n = static_cast<int>(x_min.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto draw = [&] {
    VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = x_min[i] + (x_max[i] - x_min[i]) * unif(rng);
    return x;
  };
  auto member = [&](const VectorXd& x, double tol) {
    return max_poly_value(invariant_set, x) <= 1.0 + tol;
  };

  ConvexityReport rep;
  int done = 0;
  long attempts = 0;
  const long max_attempts = 400L * samples + 1000;
  VectorXd a, b;
  bool have_a = false;
  while (done < samples && attempts++ < max_attempts) {
    VectorXd x = draw();
    if (!member(x, 0.0)) continue;
    if (!have_a) {
      a = x;
      have_a = true;
      continue;
    }
    b = x;
    have_a = false;
    ++done;
    const VectorXd mid = 0.5 * (a + b);
    if (!member(mid, 1e-9)) {
      rep.convex = false;
      rep.witness_a = a;
      rep.witness_b = b;
      return rep;
    }
  }
  return rep;
}

}  // namespace mais
