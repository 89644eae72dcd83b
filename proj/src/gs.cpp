#include "bigd/gs.hpp"

#include <cmath>

#include "bigd/minnorm.hpp"
#include "bigd/rng.hpp"

namespace bigd {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void GsConfig::validate() const {
  require(sample_size != 0, "sample size must be at least 1");
  require(eps0 > 0 && nu0 > 0, "eps0 and nu0 must be positive");
  require(eps_shrink > 0 && eps_shrink < 1, "eps shrink factor must lie in (0,1)");
  require(nu_shrink > 0 && nu_shrink < 1, "nu shrink factor must lie in (0,1)");
  require(eps_opt > 0 && nu_opt > 0, "eps_opt and nu_opt must be positive");
  require(armijo_beta > 0 && armijo_beta < 1, "armijo beta must lie in (0,1)");
  require(backtrack > 0 && backtrack < 1, "backtrack factor must lie in (0,1)");
  require(max_iter >= 1, "max_iter must be positive");
  require(time_limit_s > 0, "time limit must be positive");
}

SolverRun solve_gs(const BlackBoxFunction& f, const Vector& x0, const GsConfig& cfg) {
  cfg.validate();
  const int n = f.dimension();
  const int m = cfg.resolved_sample_size(n);
  require(m >= 1, "sample size must be at least 1");

  const Stopwatch clock;
  NormalSampler rng(cfg.seed);
  SolverRun run;

  Vector x = x0;
  double fx = f.value(x);
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

    std::vector<Vector> grads;
    grads.reserve(m + 1);
    grads.push_back(f.gradient(x));
    for (int i = 0; i < m; ++i) {
      const Vector u = rng.ball(x, eps);
      try {
        grads.push_back(f.gradient(u));
      } catch (const DomainError&) {
        // Sample fell outside the domain; draw on without it.
      }
    }
    Stopwatch qp_sw;
    const JointGradient jg = min_norm_point(grads);
    qp_time += qp_sw.seconds();
    const double gnorm = std::sqrt(jg.norm_sq);

    IterationRecord rec;
    rec.iter = k;
    rec.wall_s = clock.seconds();
    rec.f = fx;
    rec.d_norm = gnorm;
    rec.n_effective = static_cast<int>(grads.size());
    rec.n_visited = 0;  // no branch store in the sampling baseline
    rec.qp_time_s = qp_time;

    if (gnorm <= cfg.nu_opt && eps <= cfg.eps_opt) {
      rec.func_evals = f.func_evals();
      rec.grad_evals = f.grad_evals();
      run.trace.push_back(rec);
      run.status = SolveStatus::kToleranceMet;
      break;
    }
    if (gnorm <= nu) {
      nu *= cfg.nu_shrink;
      eps *= cfg.eps_shrink;
      rec.func_evals = f.func_evals();
      rec.grad_evals = f.grad_evals();
      run.trace.push_back(rec);
      continue;
    }

    const Vector d = jg.direction / gnorm;
    double alpha = 1.0;
    const double floor = min_step(x);
    bool stepped = false;
    Vector trial;
    double ftrial = 0.0;
    while (alpha >= floor) {
      trial = x - alpha * d;
      bool in_domain = true;
      try {
        ftrial = f.value(trial);
      } catch (const DomainError&) {
        in_domain = false;
      }
      if (in_domain && fx - ftrial >= cfg.armijo_beta * alpha * gnorm) {
        stepped = true;
        break;
      }
      alpha *= cfg.backtrack;
    }
    if (stepped) {
      x = trial;
      fx = ftrial;
      rec.accepted = true;
      rec.f = fx;
    } else {
      // Backtracking exhausted: refine the sampling neighborhood instead.
      nu *= cfg.nu_shrink;
      eps *= cfg.eps_shrink;
    }
    rec.func_evals = f.func_evals();
    rec.grad_evals = f.grad_evals();
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
