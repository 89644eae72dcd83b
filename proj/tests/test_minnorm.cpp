#include <doctest.h>

#include <cmath>

#include "bigd/minnorm.hpp"
#include "bigd/problems.hpp"
#include "bigd/rng.hpp"
#include "oracles.hpp"

using namespace bigd;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

void check_invariants(const std::vector<Vector>& vs, const JointGradient& jg,
                      double tol = kMinNormTol) {
  double sum = 0.0;
  for (double w : jg.weights) {
    CHECK(w >= 0.0);
    sum += w;
  }
  CHECK(std::abs(sum - 1.0) <= 1e-12);
  Vector combo = Vector::Zero(vs.front().size());
  for (std::size_t i = 0; i < vs.size(); ++i) combo += jg.weights[i] * vs[i];
  CHECK((combo - jg.direction).cwiseAbs().maxCoeff() <= 1e-12);
  double max_sq = 0.0;
  for (const Vector& v : vs) max_sq = std::max(max_sq, v.squaredNorm());
  const double tau_qp = 10.0 * tol * (1.0 + max_sq);
  for (const Vector& v : vs) CHECK(v.dot(jg.direction) >= jg.norm_sq - tau_qp);
}

std::vector<Vector> random_instance(NormalSampler& rng, int max_k, int max_n) {
  const int k = 1 + static_cast<int>(rng.uniform() * max_k);
  const int n = 1 + static_cast<int>(rng.uniform() * max_n);
  std::vector<Vector> vs;
  for (int i = 0; i < k; ++i) vs.push_back(3.0 * rng.normal_vector(n));
  return vs;
}

}  // namespace

TEST_CASE("singleton hull is the vector itself") {
  const std::vector<Vector> vs = {v2(3.0, -4.0)};
  const JointGradient jg = min_norm_point(vs);
  CHECK(jg.weights[0] == doctest::Approx(1.0));
  CHECK((jg.direction - vs[0]).norm() == doctest::Approx(0.0));
}

TEST_CASE("symmetric pair straddles the origin") {
  const JointGradient jg = min_norm_point({v2(1.0, 0.0), v2(-1.0, 0.0)});
  CHECK(jg.direction.norm() <= 1e-12);
  CHECK(jg.weights[0] == doctest::Approx(0.5));
  CHECK(jg.weights[1] == doctest::Approx(0.5));
}

TEST_CASE("projection onto a segment") {
  const std::vector<Vector> vs = {v2(2.0, 0.0), v2(0.0, 1.0)};
  const JointGradient jg = min_norm_point(vs);
  CHECK(jg.direction[0] == doctest::Approx(0.4));
  CHECK(jg.direction[1] == doctest::Approx(0.8));
  CHECK(jg.weights[0] == doctest::Approx(0.2));
  CHECK(jg.weights[1] == doctest::Approx(0.8));
  CHECK(jg.norm_sq == doctest::Approx(0.8));
  CHECK(jg.direction.norm() <= oracles::grid_min_norm(vs) + 1e-3);
  check_invariants(vs, jg);
}

TEST_CASE("duplicate vectors merge onto the first occurrence") {
  const std::vector<Vector> vs = {v2(1.0, 2.0), v2(1.0, 2.0), v2(-1.0, -2.0)};
  const JointGradient jg = min_norm_point(vs);
  CHECK(jg.weights[1] == 0.0);
  CHECK(jg.direction.norm() <= 1e-12);
  check_invariants(vs, jg);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS((void)min_norm_point({}), std::invalid_argument);
  Vector bad(2);
  bad << 1.0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS((void)min_norm_point({bad}), std::invalid_argument);
  CHECK_THROWS_AS((void)min_norm_point({v2(1, 1), Vector::Zero(3)}),
                  std::invalid_argument);
}

TEST_CASE("joint gradient of the worked three-piece example") {
  const Fixture fx = fixtures()[0];
  const Vector x = Vector::Constant(1, 0.8);
  const JointGradient jg = joint_gradient_at(
      fx.fn, {{BranchCode({1}), x}, {BranchCode({2}), x}});
  CHECK(jg.direction.norm() <= 1e-12);
  CHECK(jg.weights[0] == doctest::Approx(0.2));
  CHECK(jg.weights[1] == doctest::Approx(0.8));
}

TEST_CASE("joint gradient vanishes at the chained quadratic minimizer") {
  const Problem p = make_problem("Chained_LQ", 2);
  const Vector x = Vector::Constant(2, 1.0 / std::sqrt(2.0));
  const auto active = p.fn.active_branches(x);
  REQUIRE(active.codes.size() == 2);
  std::vector<std::pair<BranchCode, Vector>> pairs;
  for (const BranchCode& c : active.codes) pairs.emplace_back(c, x);
  CHECK(joint_gradient_at(p.fn, pairs).direction.norm() <= 1e-8);
}

TEST_CASE("single pair returns that branch gradient") {
  const Problem p = make_problem("gen_MAXQ", 3);
  Vector x(3);
  x << 2.0, 1.0, 0.5;
  const JointGradient jg =
      joint_gradient_at(p.fn, {{BranchCode({1}), x}});
  CHECK((jg.direction - p.fn.branch_gradient(BranchCode({1}), x)).norm() == 0.0);
}

TEST_CASE("projection inequality holds on random instances") {
  NormalSampler rng(101);
  for (int t = 0; t < 200; ++t) {
    const auto vs = random_instance(rng, 10, 20);
    check_invariants(vs, min_norm_point(vs));
  }
}

TEST_CASE("solver matches the simplex grid oracle on small instances") {
  NormalSampler rng(202);
  for (int t = 0; t < 50; ++t) {
    const auto vs = random_instance(rng, 3, 3);
    const JointGradient jg = min_norm_point(vs);
    CHECK(jg.direction.norm() <= oracles::grid_min_norm(vs) + 1e-3);
  }
}

TEST_CASE("perturbed inputs track the unperturbed norm") {
  std::vector<std::vector<Vector>> instances = {
      {v2(1, 0), v2(-1, 0)}, {v2(2, 0), v2(0, 1)}, {v2(3, 1), v2(1, 3), v2(2, -2)}};
  NormalSampler extra(303);
  instances.push_back(random_instance(extra, 5, 5));
  for (const auto& vs : instances) {
    const double base = min_norm_point(vs).direction.norm();
    double prev_err = std::numeric_limits<double>::infinity();
    for (double delta : {1e-2, 1e-4, 1e-6}) {
      NormalSampler rng(404);
      std::vector<Vector> perturbed;
      for (const Vector& v : vs) {
        Vector u = rng.normal_vector(v.size());
        perturbed.push_back(v + delta * u / u.norm());
      }
      const double err =
          std::abs(min_norm_point(perturbed).direction.norm() - base);
      CHECK(err <= 2.0 * delta);
      CHECK(err <= prev_err + 1e-12);
      prev_err = err;
    }
  }
}

TEST_CASE("identical inputs give identical weights") {
  NormalSampler rng(505);
  for (int t = 0; t < 20; ++t) {
    const auto vs = random_instance(rng, 8, 6);
    const JointGradient a = min_norm_point(vs);
    const JointGradient b = min_norm_point(vs);
    CHECK(a.weights == b.weights);
    CHECK(a.direction == b.direction);
  }
}
