#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bigd/common.hpp"
#include "bigd/expr.hpp"

namespace bigd {

enum class SolveStatus { kStationaryFound, kToleranceMet, kIterLimit, kTimeLimit };

std::string to_string(SolveStatus s);

struct IterationRecord {
  long iter = 0;
  double wall_s = 0.0;
  double f = 0.0;
  double d_norm = 0.0;
  int n_effective = 0;  // |T|: branches feeding the direction QP
  int n_visited = 0;    // |Theta_disc|
  long func_evals = 0;  // cumulative
  long grad_evals = 0;  // cumulative
  double qp_time_s = 0.0;
  bool accepted = false;  // the iterate moved this iteration
};

struct SolverRun {
  SolveStatus status = SolveStatus::kIterLimit;
  Vector final_point;
  double final_value = std::nan("");
  double f_star = std::nan("");  // filled by the harness when known
  // Branches backing the final direction query (the epsilon-active set at
  // the returned point); empty for black-box solvers.
  std::vector<BranchCode> final_branch_set;
  std::vector<IterationRecord> trace;
  long iterations = 0;
  long func_evals = 0;
  long grad_evals = 0;
  double qp_time_s = 0.0;
  double eval_time_s = 0.0;
  double wall_time_s = 0.0;
  std::string note;
};

// Instruments evaluate / branch_gradient calls; solvers report these
// counters and the harness cross-checks them.
class CountingFunction {
 public:
  explicit CountingFunction(const EncodableFunction& f) : f_(&f) {}

  int dimension() const { return f_->dimension(); }
  const EncodableFunction& inner() const { return *f_; }

  EvalRecord evaluate(const Vector& x) const {
    Stopwatch sw;
    ++func_evals_;
    EvalRecord r = f_->evaluate(x);
    eval_time_s_ += sw.seconds();
    return r;
  }
  double value(const Vector& x) const { return evaluate(x).value; }

  Vector branch_gradient(const BranchCode& code, const Vector& x) const {
    Stopwatch sw;
    ++grad_evals_;
    Vector g = f_->branch_gradient(code, x);
    eval_time_s_ += sw.seconds();
    return g;
  }

  ActiveBranches active_branches(const Vector& x, int cap = kDefaultBranchCap) const {
    return f_->active_branches(x, cap);
  }
  double branch_value(const BranchCode& code, const Vector& x) const {
    return f_->branch_value(code, x);
  }
  bool is_feasible_branch(const BranchCode& code, const Vector& x) const noexcept {
    return f_->is_feasible_branch(code, x);
  }

  long func_evals() const { return func_evals_; }
  long grad_evals() const { return grad_evals_; }
  double eval_time_s() const { return eval_time_s_; }

 private:
  const EncodableFunction* f_;
  mutable long func_evals_ = 0;
  mutable long grad_evals_ = 0;
  mutable double eval_time_s_ = 0.0;
};

}  // namespace bigd
