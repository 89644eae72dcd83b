#include "bigd/bigd.hpp"

#include <algorithm>
#include <cmath>

#include "bigd/solver_util.hpp"

namespace bigd {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Trial evaluation for line searches. A trial that leaves the function
// domain simply rejects the step.
bool try_value(const CountingFunction& f, const Vector& x, double* out) {
  try {
    *out = f.value(x);
  } catch (const DomainError&) {
    return false;
  }
  if (std::isnan(*out)) throw std::runtime_error("non-finite trial value");
  return true;
}

void try_branch_point_update(BranchStore& store, const Vector& x,
                             const Vector& x_trial, const CountingFunction& f,
                             int cap) {
  try {
    branch_point_update(store, x, x_trial, f.inner(), cap);
  } catch (const DomainError&) {
    // Points outside the domain carry no branch information.
  }
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kStationaryFound:
      return "StationaryFound";
    case SolveStatus::kToleranceMet:
      return "ToleranceMet";
    case SolveStatus::kIterLimit:
      return "IterLimit";
    case SolveStatus::kTimeLimit:
      return "TimeLimit";
  }
  return "?";
}

void BigdConfig::validate() const {
  require(r0 > 0, "r0 must be positive");
  require(alpha_max > 0, "alpha_max must be positive");
  require(rho0 > 0 && rho0 < 1, "rho0 must lie in (0,1)");
  require(mu_dec > 0 && mu_dec < 1, "mu_dec must lie in (0,1)");
  require(branch_cap >= 1, "branch_cap must be positive");
  require(max_outer >= 1, "max_outer must be positive");
  require(time_limit_s > 0, "time limit must be positive");
}

void PracticalConfig::validate() const {
  require(eps0 > 0 && nu0 > 0, "eps0 and nu0 must be positive");
  require(gamma > 0 && gamma < 1, "gamma must lie in (0,1)");
  require(eps_opt > 0 && nu_opt > 0, "eps_opt and nu_opt must be positive");
  require(theta_eps > 0 && theta_eps < 1, "theta_eps must lie in (0,1)");
  require(theta_nu > 0 && theta_nu < 1, "theta_nu must lie in (0,1)");
  require(rho0 > 0 && rho0 < 1, "rho0 must lie in (0,1)");
  require(branch_cap >= 1, "branch_cap must be positive");
  require(max_iter >= 1, "max_iter must be positive");
  require(time_limit_s > 0, "time limit must be positive");
}

LineSearchResult line_search(const CountingFunction& f, BranchStore& store,
                             const Vector& x, const Vector& d, double r, double eta,
                             int k, const BigdConfig& cfg) {
  const double dn2 = d.squaredNorm();
  require(dn2 > 0, "line search needs a nonzero direction");
  const double fx = f.value(x);
  const double floor = min_step(x);

  LineSearchResult res;
  res.eta = eta;
  double alpha = std::min(cfg.alpha_max, cfg.r0 / std::sqrt(dn2));
  while (true) {
    const Vector trial = x - alpha * d;
    double ftrial = 0.0;
    const bool in_domain = try_value(f, trial, &ftrial);
    const double rho =
        in_domain ? (fx - ftrial) / (alpha * dn2) : -std::numeric_limits<double>::infinity();
    if (rho >= cfg.rho0) {
      if (fx - ftrial > res.eta) {
        res.eta = fx - ftrial;
        res.signal = 1;
      }
      try_branch_point_update(store, trial, trial, f, cfg.branch_cap);
      break;
    }
    if (in_domain) try_branch_point_update(store, x, trial, f, cfg.branch_cap);
    if (k == 1 || (k >= 2 && alpha * std::sqrt(dn2) > r)) {
      alpha *= cfg.mu_dec;
      if (alpha * std::sqrt(dn2) < floor) {
        res.stagnated = true;
        break;
      }
    } else {
      break;
    }
  }
  res.alpha = alpha;
  return res;
}

TerminationCheck termination_check(const CountingFunction& f, BranchStore& store,
                                   const Vector& x, double tol_stat, int branch_cap) {
  const ActiveBranches active = f.active_branches(x, branch_cap);
  std::vector<std::pair<BranchCode, Vector>> pairs;
  pairs.reserve(active.codes.size());
  for (const BranchCode& c : active.codes) pairs.emplace_back(c, x);
  TerminationCheck out;
  const JointGradient jg = timed_joint_gradient(f, pairs, &out.qp_time_s);
  out.d_norm = std::sqrt(jg.norm_sq);
  if (out.d_norm <= tol_stat) {
    out.stationary = true;
  } else {
    branch_point_update(store, x, x, f.inner(), branch_cap);
  }
  return out;
}

SolverRun solve_bigd(const EncodableFunction& fn, const Vector& x_init,
                     const BigdConfig& cfg) {
  cfg.validate();
  const CountingFunction f(fn);
  const Stopwatch clock;
  SolverRun run;
  BranchStore store;

  Vector x = x_init;
  double fx = f.value(x);
  double qp_time = 0.0;

  long n = 0;
  while (true) {
    TerminationCheck tc = termination_check(f, store, x, cfg.tol_stat, cfg.branch_cap);
    qp_time += tc.qp_time_s;
    if (tc.stationary) {
      run.status = SolveStatus::kStationaryFound;
      break;
    }
    if (n >= cfg.max_outer) {
      run.status = SolveStatus::kIterLimit;
      break;
    }
    if (clock.seconds() > cfg.time_limit_s) {
      run.status = SolveStatus::kTimeLimit;
      break;
    }
    ++n;

    // Inner candidates: k nearest distinct representatives, first within
    // the r0 neighborhood, then (if nothing moved) over the whole store.
    double eta = 0.0;
    double best_alpha = 0.0;
    Vector best_d;
    int best_T = 0;
    double best_dnorm = 0.0;

    // Line-search updates can merge representative points mid-iteration,
    // so the k bounds are re-evaluated against the live store.
    const auto distinct_within = [&](double r) {
      int c = 0;
      for (const Vector& p : store.distinct_points())
        if ((p - x).norm() <= r) ++c;
      return c;
    };

    for (const bool full_pass : {false, true}) {
      for (int k = 1;; ++k) {
        const int avail = full_pass
                              ? static_cast<int>(store.distinct_points().size())
                              : distinct_within(cfg.r0);
        if (k > avail) break;
        BranchSelection sel = branch_selection(store, x, k, fn, cfg.branch_cap);
        auto pairs = pairs_from_store(store, sel.codes, sel.points.back());
        const JointGradient jg = timed_joint_gradient(f, pairs, &qp_time);
        if (std::sqrt(jg.norm_sq) <= cfg.tol_stat) continue;
        LineSearchResult ls =
            line_search(f, store, x, jg.direction, sel.radius, eta, k, cfg);
        if (ls.signal) {
          eta = ls.eta;
          best_alpha = ls.alpha;
          best_d = jg.direction;
          best_T = static_cast<int>(sel.codes.size());
          best_dnorm = std::sqrt(jg.norm_sq);
        }
      }
      if (eta > 0.0) break;
    }

    if (eta <= 0.0) {
      run.status = SolveStatus::kIterLimit;
      run.note = "no descent direction over the full store";
      break;
    }

    x = x - best_alpha * best_d;
    fx = f.value(x);

    IterationRecord rec;
    rec.iter = n;
    rec.wall_s = clock.seconds();
    rec.f = fx;
    rec.d_norm = best_dnorm;
    rec.n_effective = best_T;
    rec.n_visited = store.size();
    rec.func_evals = f.func_evals();
    rec.grad_evals = f.grad_evals();
    rec.qp_time_s = qp_time;
    rec.accepted = true;
    run.trace.push_back(rec);
  }

  run.final_point = x;
  run.final_value = fx;
  run.final_branch_set = f.active_branches(x, cfg.branch_cap).codes;
  run.iterations = n;
  run.func_evals = f.func_evals();
  run.grad_evals = f.grad_evals();
  run.qp_time_s = qp_time;
  run.eval_time_s = f.eval_time_s();
  run.wall_time_s = clock.seconds();
  return run;
}

SolverRun solve_practical(const EncodableFunction& fn, const Vector& x0,
                          const PracticalConfig& cfg) {
  cfg.validate();
  const CountingFunction f(fn);
  const Stopwatch clock;
  SolverRun run;
  BranchStore store;

  Vector x = x0;
  EvalRecord rec0 = f.evaluate(x);
  double fx = rec0.value;
  store.insert(rec0.primary_code, x);

  double eps = cfg.eps0;
  double nu = cfg.nu0;
  double qp_time = 0.0;
  long k = 0;

  for (;; ++k) {
    if (k >= cfg.max_iter) {
      run.status = SolveStatus::kIterLimit;
      break;
    }
    if (clock.seconds() > cfg.time_limit_s) {
      run.status = SolveStatus::kTimeLimit;
      break;
    }

    const std::vector<BranchCode> T = store.within(x, eps);
    run.final_branch_set = T;
    const auto pairs = pairs_from_store(store, T, x);
    const JointGradient jg = timed_joint_gradient(f, pairs, &qp_time);
    const double gnorm = std::sqrt(jg.norm_sq);

    IterationRecord rec;
    rec.iter = k;
    rec.wall_s = clock.seconds();
    rec.f = fx;
    rec.d_norm = gnorm;
    rec.n_effective = static_cast<int>(T.size());
    rec.n_visited = store.size();
    rec.qp_time_s = qp_time;

    if (gnorm <= cfg.nu_opt && eps <= cfg.eps_opt) {
      rec.func_evals = f.func_evals();
      rec.grad_evals = f.grad_evals();
      run.trace.push_back(rec);
      run.status = SolveStatus::kToleranceMet;
      break;
    }
    if (gnorm <= nu) {
      nu *= cfg.theta_nu;
      eps *= cfg.theta_eps;
      rec.func_evals = f.func_evals();
      rec.grad_evals = f.grad_evals();
      run.trace.push_back(rec);
      continue;
    }

    // Line search along the normalized joint gradient; the acceptance
    // ratio is measured against alpha * |g|.
    const Vector d = jg.direction / gnorm;
    double alpha = 1.0;
    const double floor = min_step(x);
    bool stagnated = false;
    Vector trial;
    double ftrial = 0.0;
    while (true) {
      trial = x - alpha * d;
      const bool in_domain = try_value(f, trial, &ftrial);
      const double rho = in_domain
                             ? (fx - ftrial) / (alpha * gnorm)
                             : -std::numeric_limits<double>::infinity();
      if (rho >= cfg.rho0) {
        try_branch_point_update(store, trial, trial, f, cfg.branch_cap);
        break;
      }
      if (in_domain) try_branch_point_update(store, x, trial, f, cfg.branch_cap);
      alpha *= cfg.gamma;
      if (alpha < floor) {
        stagnated = true;
        break;
      }
    }
    if (stagnated) {
      rec.func_evals = f.func_evals();
      rec.grad_evals = f.grad_evals();
      run.trace.push_back(rec);
      run.status = SolveStatus::kIterLimit;
      run.note = "line search stagnated below the machine step floor";
      break;
    }

    x = trial;
    fx = ftrial;
    rec.accepted = true;
    rec.f = fx;
    rec.func_evals = f.func_evals();
    rec.grad_evals = f.grad_evals();
    rec.n_visited = store.size();
    run.trace.push_back(rec);
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
