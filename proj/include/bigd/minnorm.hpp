#pragma once

#include <utility>
#include <vector>

#include "bigd/common.hpp"
#include "bigd/expr.hpp"

namespace bigd {

// Solution of the simplex-constrained minimum-norm program over a finite
// vector set: the minimizing convex weights, the combined vector, and its
// squared norm. Weights are indexed like the input list; exact duplicate
// inputs carry zero weight except the first occurrence.
struct JointGradient {
  std::vector<double> weights;
  Vector direction;
  double norm_sq = 0.0;
};

inline constexpr double kMinNormTol = 1e-12;

// Minimum-norm point of conv{vectors} via Wolfe's corral iteration.
// Guarantees <v_i, direction> >= norm_sq - 10*tol*(1 + max ||v_i||^2) for
// every input. Throws IterationCapError after 50*(k+n) cycles.
JointGradient min_norm_point(const std::vector<Vector>& vectors,
                             double tol = kMinNormTol);

// Joint gradient of the listed branches: evaluates grad f_code(point) per
// (code, point) pair and projects the origin onto the hull of the results.
JointGradient joint_gradient_at(
    const EncodableFunction& f,
    const std::vector<std::pair<BranchCode, Vector>>& pairs,
    double tol = kMinNormTol);

}  // namespace bigd
