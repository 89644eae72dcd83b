#pragma once

#include "bigd/minnorm.hpp"
#include "bigd/solver_run.hpp"

namespace bigd {

struct EbigdConfig {
  double rho0 = 0.01;
  double alpha = 0.05;  // constant step along the joint gradient
  double gamma = 0.5;   // gap-reduction step
  long max_iter = 10000;
  double time_limit_s = 300.0;
  double tau_rec = 1e-10;  // recovery-solver gradient tolerance
  int branch_cap = kDefaultBranchCap;
  double tol_stat = 1e-8;
  void validate() const;
};

struct RecoverySolution {
  double z_star = 0.0;
  Vector s_star;
  double objective = 0.0;
  int newton_iters = 0;
};

// Minimizes sum_i (z + <g_i, s> - f_i)^2 + |s|^4 over (z, s) by damped
// Newton with Levenberg regularization (the quartic's Hessian vanishes at
// s = 0). Converged when the objective gradient norm is at most tau_rec.
RecoverySolution solve_quartic_recovery(const std::vector<double>& values,
                                        const std::vector<Vector>& gradients,
                                        double tau_rec = 1e-10);

struct SequentialSelection {
  std::vector<BranchCode> codes;
  Vector direction;
  double rho = 0.0;
  bool capped = false;  // loop hit the cap or its fixed point
};

// Grows a branch set from one active branch at x, adding the branch taken
// at each rejected trial step, until the decrease ratio clears rho0 or the
// joint gradient vanishes.
SequentialSelection branch_selection_sequential(const CountingFunction& f,
                                                const Vector& x, double alpha,
                                                double rho0, int cap,
                                                double tol_stat = 1e-8,
                                                double* qp_time_s = nullptr);

struct GapReductionResult {
  Vector y;
  double reduction = 0.0;
  double y_value = 0.0;
  std::vector<BranchCode> codes;
};

// Moves along the recovered displacement s* to shrink the spread of branch
// values over `codes`; re-solves with one extra branch whenever no active
// branch at the trial point lies in the set.
GapReductionResult gap_reduction(const CountingFunction& f, const Vector& x,
                                 double gamma, std::vector<BranchCode> codes,
                                 const EbigdConfig& cfg);

// Spread of branch values over a code set: max f_theta(x) - min f_theta(x).
double gap(const EncodableFunction& f, const Vector& x,
           const std::vector<BranchCode>& codes);

SolverRun solve_ebigd(const EncodableFunction& f, const Vector& x0,
                      const EbigdConfig& cfg = {});

}  // namespace bigd
