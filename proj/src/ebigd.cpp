#include "bigd/ebigd.hpp"

#include <algorithm>
#include <cmath>

#include "bigd/solver_util.hpp"

namespace bigd {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool contains(const std::vector<BranchCode>& set, const BranchCode& c) {
  return std::find(set.begin(), set.end(), c) != set.end();
}

double recovery_objective(const std::vector<double>& values,
                          const std::vector<Vector>& gradients, double z,
                          const Vector& s) {
  double obj = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double r = z + gradients[i].dot(s) - values[i];
    obj += r * r;
  }
  const double s2 = s.squaredNorm();
  return obj + s2 * s2;
}

}  // namespace

void EbigdConfig::validate() const {
  require(rho0 > 0 && rho0 < 1, "rho0 must lie in (0,1)");
  require(alpha > 0, "alpha must be positive");
  require(gamma > 0 && gamma < 1, "gamma must lie in (0,1)");
  require(max_iter >= 1, "max_iter must be positive");
  require(time_limit_s > 0, "time limit must be positive");
  require(tau_rec > 0, "tau_rec must be positive");
  require(branch_cap >= 1, "branch_cap must be positive");
}

RecoverySolution solve_quartic_recovery(const std::vector<double>& values,
                                        const std::vector<Vector>& gradients,
                                        double tau_rec) {
  require(!values.empty(), "recovery needs at least one branch");
  require(values.size() == gradients.size(), "values/gradients length mismatch");
  const int n = static_cast<int>(gradients.front().size());
  const int m = static_cast<int>(values.size());

  // Start from the residual-free point for s = 0.
  double z = 0.0;
  for (double v : values) z += v;
  z /= m;
  Vector s = Vector::Zero(n);
  double obj = recovery_objective(values, gradients, z, s);

  // The convergence test scales with the data so that it stays attainable
  // above the rounding noise of the residuals.
  double scale = 1.0;
  for (int i = 0; i < m; ++i)
    scale = std::max(scale, (1.0 + std::abs(values[i])) * (1.0 + gradients[i].norm()));
  const double tol = tau_rec * scale;

  double lev = 1e-8;
  int iters = 0;
  const int cap = 500;
  while (true) {
    // Gradient and Hessian of the objective in (z, s).
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(n + 1);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int i = 0; i < m; ++i) {
      const double r = z + gradients[i].dot(s) - values[i];
      grad[0] += 2.0 * r;
      grad.tail(n) += 2.0 * r * gradients[i];
      hess(0, 0) += 2.0;
      hess.block(0, 1, 1, n) += 2.0 * gradients[i].transpose();
      hess.block(1, 0, n, 1) += 2.0 * gradients[i];
      hess.block(1, 1, n, n) += 2.0 * gradients[i] * gradients[i].transpose();
    }
    const double s2 = s.squaredNorm();
    grad.tail(n) += 4.0 * s2 * s;
    hess.block(1, 1, n, n) += 4.0 * s2 * Eigen::MatrixXd::Identity(n, n);
    hess.block(1, 1, n, n) += 8.0 * s * s.transpose();

    if (grad.norm() <= tol) break;
    if (iters >= cap)
      throw IterationCapError("quartic recovery hit its iteration cap");
    ++iters;

    // Levenberg-damped Newton step; damping grows on rejected steps.
    Eigen::MatrixXd damped =
        hess + lev * Eigen::MatrixXd::Identity(n + 1, n + 1);
    Eigen::VectorXd step = damped.ldlt().solve(-grad);
    const double z_new = z + step[0];
    const Vector s_new = s + step.tail(n);
    const double obj_new = recovery_objective(values, gradients, z_new, s_new);
    if (step.allFinite() && obj_new <= obj) {
      // A step below rounding resolution means the iterate is numerically
      // optimal even if the gradient test has not cleared.
      if (step.norm() <= 1e-14 * (1.0 + std::abs(z) + s.norm())) break;
      z = z_new;
      s = s_new;
      obj = obj_new;
      lev = std::max(lev / 10.0, 1e-12);
    } else {
      lev *= 10.0;
      if (lev > 1e16) break;  // damping exhausted at rounding scale
    }
  }

  RecoverySolution out;
  out.z_star = z;
  out.s_star = s;
  out.objective = obj;
  out.newton_iters = iters;
  return out;
}

SequentialSelection branch_selection_sequential(const CountingFunction& f,
                                                const Vector& x, double alpha,
                                                double rho0, int cap,
                                                double tol_stat, double* qp_time_s) {
  require(alpha > 0, "alpha must be positive");
  require(rho0 > 0 && rho0 < 1, "rho0 must lie in (0,1)");
  const EvalRecord at_x = f.evaluate(x);
  SequentialSelection sel;
  sel.codes.push_back(at_x.primary_code);

  while (true) {
    std::vector<std::pair<BranchCode, Vector>> pairs;
    for (const BranchCode& c : sel.codes) pairs.emplace_back(c, x);
    const JointGradient jg = timed_joint_gradient(f, pairs, qp_time_s);
    sel.direction = jg.direction;
    if (std::sqrt(jg.norm_sq) <= tol_stat) return sel;

    const Vector trial = x - alpha * jg.direction;
    EvalRecord at_trial;
    try {
      at_trial = f.evaluate(trial);
    } catch (const DomainError&) {
      sel.capped = true;  // trial left the domain; nothing to add
      return sel;
    }
    sel.rho = (at_x.value - at_trial.value) / (alpha * jg.norm_sq);
    if (sel.rho >= rho0) return sel;

    const BranchCode& next = at_trial.primary_code;
    if (contains(sel.codes, next) || !f.is_feasible_branch(next, x)) {
      // Fixed point of the selection loop: no admissible branch to add.
      sel.capped = true;
      return sel;
    }
    sel.codes.push_back(next);
    if (static_cast<int>(sel.codes.size()) >= cap) {
      sel.capped = true;
      return sel;
    }
  }
}

GapReductionResult gap_reduction(const CountingFunction& f, const Vector& x,
                                 double gamma, std::vector<BranchCode> codes,
                                 const EbigdConfig& cfg) {
  require(!codes.empty(), "gap reduction needs a nonempty code set");
  const double fx = f.value(x);

  GapReductionResult out;
  out.codes = std::move(codes);
  Vector y = x;
  double fy = fx;

  for (int round = 0; round <= cfg.branch_cap; ++round) {
    std::vector<double> values;
    std::vector<Vector> grads;
    for (const BranchCode& c : out.codes) {
      values.push_back(f.branch_value(c, x));
      grads.push_back(f.branch_gradient(c, x));
    }
    const RecoverySolution rs = solve_quartic_recovery(values, grads, cfg.tau_rec);
    y = x - gamma * rs.s_star;

    EvalRecord at_y;
    try {
      at_y = f.evaluate(y);
    } catch (const DomainError&) {
      out.y = x;
      out.reduction = 0.0;
      out.y_value = fx;
      return out;
    }
    fy = at_y.value;

    bool intersects = false;
    for (const BranchCode& c : f.active_branches(y, cfg.branch_cap).codes) {
      if (contains(out.codes, c)) {
        intersects = true;
        break;
      }
    }
    if (intersects) break;
    const BranchCode& extra = at_y.primary_code;
    if (contains(out.codes, extra) || !f.is_feasible_branch(extra, x)) break;
    out.codes.push_back(extra);
  }

  if (fx - fy >= 0.0) {
    out.y = y;
    out.reduction = fx - fy;
    out.y_value = fy;
  } else {
    out.y = x;
    out.reduction = 0.0;
    out.y_value = fx;
  }
  return out;
}

double gap(const EncodableFunction& f, const Vector& x,
           const std::vector<BranchCode>& codes) {
  require(!codes.empty(), "gap needs a nonempty code set");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const BranchCode& c : codes) {
    const double v = f.branch_value(c, x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

SolverRun solve_ebigd(const EncodableFunction& fn, const Vector& x0,
                      const EbigdConfig& cfg) {
  cfg.validate();
  const CountingFunction f(fn);
  const Stopwatch clock;
  SolverRun run;

  Vector x = x0;
  double fx = f.value(x);
  double qp_time = 0.0;
  long k = 0;
  int starved = 0;  // consecutive iterations with no usable decrease
  std::vector<BranchCode> visited;

  for (;; ++k) {
    if (k >= cfg.max_iter) {
      run.status = SolveStatus::kIterLimit;
      break;
    }
    if (clock.seconds() > cfg.time_limit_s) {
      run.status = SolveStatus::kTimeLimit;
      break;
    }

    // Clarke stationarity at x: joint gradient of the branches active at x.
    {
      std::vector<std::pair<BranchCode, Vector>> pairs;
      for (const BranchCode& c : f.active_branches(x, cfg.branch_cap).codes)
        pairs.emplace_back(c, x);
      const JointGradient cl = timed_joint_gradient(f, pairs, &qp_time);
      if (std::sqrt(cl.norm_sq) <= cfg.tol_stat) {
        run.status = SolveStatus::kStationaryFound;
        break;
      }
    }

    SequentialSelection sel = branch_selection_sequential(
        f, x, cfg.alpha, cfg.rho0, cfg.branch_cap, cfg.tol_stat, &qp_time);
    const double dnorm = sel.direction.norm();
    run.final_branch_set = sel.codes;
    for (const BranchCode& c : sel.codes)
      if (!contains(visited, c)) visited.push_back(c);

    IterationRecord rec;
    rec.iter = k;
    rec.wall_s = clock.seconds();
    rec.f = fx;
    rec.d_norm = dnorm;
    rec.n_effective = static_cast<int>(sel.codes.size());
    rec.qp_time_s = qp_time;

    // Joint-gradient candidate; the zero-direction case keeps x.
    Vector y1 = x;
    double f1 = fx;
    double red1 = 0.0;
    if (dnorm > cfg.tol_stat) {
      y1 = x - cfg.alpha * sel.direction;
      try {
        f1 = f.value(y1);
        red1 = fx - f1;
      } catch (const DomainError&) {
        y1 = x;
        f1 = fx;
        red1 = 0.0;
      }
    }

    // Gap-reduction candidate.
    const GapReductionResult gr = gap_reduction(f, x, cfg.gamma, sel.codes, cfg);
    for (const BranchCode& c : gr.codes)
      if (!contains(visited, c)) visited.push_back(c);

    if (red1 >= gr.reduction && red1 > 0.0) {
      x = y1;
      fx = f1;
      rec.accepted = true;
      starved = 0;
    } else if (gr.reduction > 0.0) {
      x = gr.y;
      fx = gr.y_value;
      rec.accepted = true;
      starved = 0;
    } else {
      ++starved;
    }

    rec.f = fx;
    rec.n_visited = static_cast<int>(visited.size());
    rec.func_evals = f.func_evals();
    rec.grad_evals = f.grad_evals();
    run.trace.push_back(rec);

    if (starved >= 3) {
      // Both mechanisms exhausted. A vanished selection direction with a
      // closed branch-value gap is the practical stationarity certificate.
      if (dnorm <= cfg.tol_stat &&
          gap(fn, x, sel.codes) <= cfg.tol_stat * (1.0 + std::abs(fx))) {
        run.status = SolveStatus::kStationaryFound;
      } else {
        run.status = SolveStatus::kIterLimit;
        run.note = "neither reduction step made progress";
      }
      break;
    }
  }

  run.final_point = x;
  run.final_value = fx;
  run.iterations = k;
  run.func_evals = f.func_evals();
  run.grad_evals = f.grad_evals();
  run.qp_time_s = qp_time;
  run.eval_time_s = f.eval_time_s();
  run.wall_time_s = clock.seconds();
  return run;
}

}  // namespace bigd
