#pragma once

#include <string>
#include <vector>

#include "bigd/expr.hpp"

namespace bigd {

struct ProblemSpec {
  std::string name;
  int dimension = 0;
  double f_star = 0.0;
  bool convex = false;
  Vector preset_x0;
};

struct Problem {
  EncodableFunction fn;
  ProblemSpec spec;
};

enum class InitMode { kPreset, kRandom };

InitMode parse_init_mode(const std::string& s);

// Exact benchmark vocabulary, in canonical order.
const std::vector<std::string>& problem_names();

// Builds one of the nine benchmark objectives at dimension n.
Problem make_problem(const std::string& name, int n);

// Preset mode returns the conventional per-problem starting point; random
// mode returns seeded standard-normal coordinates (pure function of the
// arguments, identical across solvers for a given seed).
Vector initial_point(const std::string& name, int n, InitMode mode,
                     std::uint64_t seed);

// Hand-built worked examples with their expected active-branch sets.
struct FixtureProbe {
  Vector x;
  std::vector<BranchCode> expected_active;
};

struct Fixture {
  std::string name;
  EncodableFunction fn;
  std::vector<FixtureProbe> probes;
};

// Fixture 0: max of three 1-d affine pieces.
// Fixture 1: crescent-type chain with the absolute values kept as operator
//            sites (three sites per chain term), built at n = 3.
// Fixture 2: rule-based 1-d function with overlapping open piece domains.
std::vector<Fixture> fixtures();

}  // namespace bigd
