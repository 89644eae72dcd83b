#include "bigd/minnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bigd {

namespace {

constexpr double kWeightFloor = 1e-14;

// Affine minimizer over the corral: solve (ee^T + G) w = e and normalize,
// where G is the Gram matrix of the corral vectors. The rank-revealing
// decomposition keeps nearly affinely dependent corrals from derailing the
// iteration.
bool affine_minimizer(const std::vector<Vector>& u, const std::vector<int>& corral,
                      Eigen::VectorXd& mu) {
  const int s = static_cast<int>(corral.size());
  Eigen::MatrixXd B(s, s);
  for (int a = 0; a < s; ++a)
    for (int b = a; b < s; ++b)
      B(a, b) = B(b, a) = 1.0 + u[corral[a]].dot(u[corral[b]]);
  Eigen::VectorXd w =
      B.completeOrthogonalDecomposition().solve(Eigen::VectorXd::Ones(s));
  if (!w.allFinite()) return false;
  const double total = w.sum();
  if (total == 0.0 || !std::isfinite(total)) return false;
  mu = w / total;
  return true;
}

}  // namespace

JointGradient min_norm_point(const std::vector<Vector>& vectors, double tol) {
  if (vectors.empty()) throw std::invalid_argument("empty vector list");
  const auto n = vectors.front().size();
  for (const Vector& v : vectors) {
    if (v.size() != n) throw std::invalid_argument("inconsistent vector lengths");
    if (!v.allFinite()) throw std::invalid_argument("non-finite input vector");
  }

  // Exact-duplicate inputs are merged onto their first occurrence.
  std::vector<Vector> u;
  std::vector<int> first_index;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    bool dup = false;
    for (const Vector& w : u) {
      if (w == vectors[i]) {
        dup = true;
        break;
      }
    }
    if (!dup) {
      u.push_back(vectors[i]);
      first_index.push_back(static_cast<int>(i));
    }
  }
  const int k = static_cast<int>(u.size());

  double max_sq = 0.0;
  for (const Vector& v : u) max_sq = std::max(max_sq, v.squaredNorm());
  const double stop_tol = tol * (1.0 + max_sq);

  int start = 0;
  for (int j = 1; j < k; ++j)
    if (u[j].squaredNorm() < u[start].squaredNorm()) start = j;

  std::vector<int> corral = {start};
  std::vector<double> lam = {1.0};
  Vector x = u[start];

  const long cap = 50L * (static_cast<long>(vectors.size()) + n);
  long cycles = 0;
  const double progress_tol = 1e-16 * (1.0 + max_sq);

  while (true) {
    if (++cycles > cap)
      throw IterationCapError("min-norm point iteration cap exceeded");

    // Entering vector: most violating inner product, lowest index on ties.
    int enter = 0;
    double best = u[0].dot(x);
    for (int j = 1; j < k; ++j) {
      const double d = u[j].dot(x);
      if (d < best) {
        best = d;
        enter = j;
      }
    }
    if (best >= x.squaredNorm() - stop_tol) break;
    if (std::find(corral.begin(), corral.end(), enter) != corral.end()) break;
    const double prev_norm_sq = x.squaredNorm();
    const std::vector<int> prev_corral = corral;
    const std::vector<double> prev_lam = lam;
    corral.push_back(enter);
    lam.push_back(0.0);

    while (true) {
      if (++cycles > cap)
        throw IterationCapError("min-norm point iteration cap exceeded");
      Eigen::VectorXd mu;
      if (!affine_minimizer(u, corral, mu)) {
        // Numerically dependent corral: drop the weakest member and retry.
        int weakest = static_cast<int>(
            std::min_element(lam.begin(), lam.end()) - lam.begin());
        corral.erase(corral.begin() + weakest);
        lam.erase(lam.begin() + weakest);
        if (corral.size() <= 1) break;
        continue;
      }
      if (mu.minCoeff() > kWeightFloor) {
        for (int a = 0; a < mu.size(); ++a) lam[a] = mu[a];
        break;
      }
      // Move toward mu until the first weight hits zero, then drop it.
      double theta = 1.0;
      for (int a = 0; a < mu.size(); ++a) {
        if (mu[a] <= kWeightFloor) {
          const double denom = lam[a] - mu[a];
          if (denom > 0.0) theta = std::min(theta, lam[a] / denom);
        }
      }
      for (int a = 0; a < mu.size(); ++a)
        lam[a] = (1.0 - theta) * lam[a] + theta * mu[a];
      for (int a = static_cast<int>(corral.size()) - 1; a >= 0; --a) {
        if (lam[a] <= kWeightFloor) {
          corral.erase(corral.begin() + a);
          lam.erase(lam.begin() + a);
        }
      }
      if (corral.empty()) {
        corral = {enter};
        lam = {1.0};
        break;
      }
    }

    double total = 0.0;
    for (double l : lam) total += l;
    for (double& l : lam) l /= total;
    x.setZero(n);
    for (std::size_t a = 0; a < corral.size(); ++a) x += lam[a] * u[corral[a]];
    // Each major cycle must shrink the norm; a stall means the remaining
    // improvement sits below double precision. Keep the better iterate.
    if (x.squaredNorm() >= prev_norm_sq - progress_tol) {
      if (x.squaredNorm() > prev_norm_sq) {
        corral = prev_corral;
        lam = prev_lam;
        x.setZero(n);
        for (std::size_t a = 0; a < corral.size(); ++a) x += lam[a] * u[corral[a]];
      }
      break;
    }
  }

  JointGradient out;
  out.weights.assign(vectors.size(), 0.0);
  double total = 0.0;
  for (double l : lam) total += l;
  for (std::size_t a = 0; a < corral.size(); ++a)
    out.weights[first_index[corral[a]]] = lam[a] / total;
  out.direction = Vector::Zero(n);
  for (std::size_t i = 0; i < vectors.size(); ++i)
    if (out.weights[i] != 0.0) out.direction += out.weights[i] * vectors[i];
  out.norm_sq = out.direction.squaredNorm();
  return out;
}

JointGradient joint_gradient_at(
    const EncodableFunction& f,
    const std::vector<std::pair<BranchCode, Vector>>& pairs, double tol) {
  if (pairs.empty()) throw std::invalid_argument("empty branch/point list");
  std::vector<Vector> grads;
  grads.reserve(pairs.size());
  for (const auto& [code, z] : pairs) grads.push_back(f.branch_gradient(code, z));
  return min_norm_point(grads, tol);
}

}  // namespace bigd
