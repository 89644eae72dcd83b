#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bigd {

using Vector = Eigen::VectorXd;

// Relative tolerance used to decide whether two branch values tie at a
// point: values within kActiveTol * (1 + |f(x)|) of f(x) count as active.
inline constexpr double kActiveTol = 1e-10;

// Default cap on the number of branch codes enumerated at one point.
inline constexpr int kDefaultBranchCap = 64;

// Smallest admissible line-search step, relative to the iterate scale.
inline double min_step(const Vector& x) { return 1e-16 * (1.0 + x.norm()); }

// Evaluation outside the domain of a primitive or a rule-based piece.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A branch code was applied at a point outside the coded piece's domain.
class InfeasibleBranchError : public std::runtime_error {
 public:
  explicit InfeasibleBranchError(const std::string& what)
      : std::runtime_error(what) {}
};

// An iterative numerical routine hit its iteration cap.
class IterationCapError : public std::runtime_error {
 public:
  explicit IterationCapError(const std::string& what)
      : std::runtime_error(what) {}
};

class Stopwatch {
 public:
  Stopwatch() : start_(clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_;
};

}  // namespace bigd
