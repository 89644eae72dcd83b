#pragma once

#include <utility>
#include <vector>

#include "bigd/minnorm.hpp"
#include "bigd/solver_run.hpp"
#include "bigd/store.hpp"

namespace bigd {

// Gradient gathering through the counting wrapper, with the QP time booked
// separately from evaluation time.
inline JointGradient timed_joint_gradient(
    const CountingFunction& f,
    const std::vector<std::pair<BranchCode, Vector>>& pairs, double* qp_time_s) {
  std::vector<Vector> grads;
  grads.reserve(pairs.size());
  for (const auto& [code, z] : pairs) grads.push_back(f.branch_gradient(code, z));
  Stopwatch sw;
  JointGradient jg = min_norm_point(grads);
  if (qp_time_s) *qp_time_s += sw.seconds();
  return jg;
}

// Pairs each code with its stored representative; codes missing from the
// store fall back to the supplied point.
inline std::vector<std::pair<BranchCode, Vector>> pairs_from_store(
    const BranchStore& store, const std::vector<BranchCode>& codes,
    const Vector& fallback) {
  std::vector<std::pair<BranchCode, Vector>> pairs;
  pairs.reserve(codes.size());
  for (const BranchCode& c : codes) {
    const int i = store.find(c);
    pairs.emplace_back(c, i >= 0 ? store.entry(i).z : fallback);
  }
  return pairs;
}

}  // namespace bigd
