#pragma once

#include "bigd/solver_run.hpp"

namespace bigd {

// Value-and-gradient access only: the sampling solver never sees branch
// codes or the branch store. The gradient is that of the branch taken at
// the query point.
class BlackBoxFunction {
 public:
  explicit BlackBoxFunction(const EncodableFunction& f) : f_(&f) {}

  int dimension() const { return f_->dimension(); }

  double value(const Vector& x) const {
    Stopwatch sw;
    ++func_evals_;
    const double v = f_->evaluate(x).value;
    eval_time_s_ += sw.seconds();
    return v;
  }

  Vector gradient(const Vector& x) const {
    Stopwatch sw;
    ++func_evals_;
    ++grad_evals_;
    const EvalRecord rec = f_->evaluate(x);
    Vector g = f_->branch_gradient(rec.primary_code, x);
    eval_time_s_ += sw.seconds();
    return g;
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

struct GsConfig {
  int sample_size = -1;  // gradients sampled per iteration; -1 means 2n
  double eps0 = 0.1;
  double eps_shrink = 0.1;
  double nu0 = 1e-3;
  double nu_shrink = 0.9;
  double eps_opt = 1e-5;
  double nu_opt = 1e-4;
  double armijo_beta = 0.01;
  double backtrack = 0.5;
  std::uint64_t seed = 0;
  long max_iter = 100000;
  double time_limit_s = 300.0;
  void validate() const;

  int resolved_sample_size(int n) const { return sample_size < 0 ? 2 * n : sample_size; }
};

// Gradient sampling: per iteration draws sample_size points uniformly from
// the eps-ball at x, projects the origin onto the hull of their gradients
// (plus the gradient at x), and backtracks along the normalized direction.
SolverRun solve_gs(const BlackBoxFunction& f, const Vector& x0,
                   const GsConfig& cfg = {});

}  // namespace bigd
