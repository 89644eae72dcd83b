#pragma once

#include "bigd/minnorm.hpp"
#include "bigd/solver_run.hpp"
#include "bigd/store.hpp"

namespace bigd {

struct BigdConfig {
  double r0 = 0.1;         // neighborhood radius
  double alpha_max = 1.0;  // step cap
  double rho0 = 0.01;      // sufficient-decrease threshold
  double mu_dec = 0.5;     // step shrink factor
  int branch_cap = kDefaultBranchCap;
  long max_outer = 100000;
  double time_limit_s = 300.0;
  double tol_stat = 1e-8;  // stationarity tolerance for the termination check
  void validate() const;
};

struct PracticalConfig {
  double eps0 = 0.1;    // initial exploration radius
  double nu0 = 1e-3;    // initial stationarity target
  double gamma = 0.5;   // line-search shrink factor
  double eps_opt = 1e-5;
  double nu_opt = 1e-4;
  double theta_eps = 0.1;
  double theta_nu = 0.9;
  double rho0 = 1e-2;
  int branch_cap = kDefaultBranchCap;
  long max_iter = 100000;
  double time_limit_s = 300.0;
  void validate() const;
};

struct LineSearchResult {
  double alpha = 0.0;
  double eta = 0.0;   // best decrease seen so far (updated when beaten)
  int signal = 0;     // 1 iff this search improved on the incoming eta
  bool stagnated = false;
};

// Descent line search along -d starting from alpha = min(alpha_max,
// r0/|d|). Every trial point updates the branch store. For k >= 2 the step
// only shrinks while the trial stays outside radius r. Trial points whose
// evaluation leaves the function domain reject the step.
LineSearchResult line_search(const CountingFunction& f, BranchStore& store,
                             const Vector& x, const Vector& d, double r, double eta,
                             int k, const BigdConfig& cfg);

struct TerminationCheck {
  bool stationary = false;
  double d_norm = 0.0;
  double qp_time_s = 0.0;
};

// Joint gradient over the branches active at x (gradients taken at x
// itself). Stationary iff its norm is at most tol_stat; otherwise x is
// recorded in the store.
TerminationCheck termination_check(const CountingFunction& f, BranchStore& store,
                                   const Vector& x, double tol_stat,
                                   int branch_cap = kDefaultBranchCap);

SolverRun solve_bigd(const EncodableFunction& f, const Vector& x_init,
                     const BigdConfig& cfg = {});

SolverRun solve_practical(const EncodableFunction& f, const Vector& x0,
                          const PracticalConfig& cfg = {});

}  // namespace bigd
