#include "bigd/problems.hpp"

#include <cmath>
#include <stdexcept>

#include "bigd/rng.hpp"

namespace bigd {

namespace {

void require_dim(const std::string& name, int n, int min_n) {
  if (n < min_n)
    throw std::invalid_argument(name + ": dimension must be at least " +
                                std::to_string(min_n));
}

EncodableFunction build_gen_maxq(int n) {
  FunctionBuilder b(n);
  std::vector<Expr> args;
  for (int i = 0; i < n; ++i) args.push_back(b.square(b.var(i)));
  return b.build(b.max_of(args));
}

EncodableFunction build_gen_mxhilb(int n) {
  FunctionBuilder b(n);
  std::vector<Expr> args;
  for (int i = 1; i <= n; ++i) {
    std::vector<Expr> vars;
    std::vector<double> coeffs;
    for (int j = 1; j <= n; ++j) {
      vars.push_back(b.var(j - 1));
      coeffs.push_back(1.0 / (i + j - 1));
    }
    args.push_back(b.abs(b.sum(vars, coeffs)));
  }
  return b.build(b.max_of(args));
}

EncodableFunction build_chained_lq(int n) {
  FunctionBuilder b(n);
  std::vector<Expr> terms;
  for (int i = 0; i + 1 < n; ++i) {
    Expr lin = b.sum({b.var(i), b.var(i + 1)}, {-1.0, -1.0});
    Expr quad = b.sum({b.var(i), b.var(i + 1), b.square(b.var(i)), b.square(b.var(i + 1))},
                      {-1.0, -1.0, 1.0, 1.0}, -1.0);
    terms.push_back(b.max_of({lin, quad}));
  }
  return b.build(b.sum(terms));
}

Expr cb3_term1(FunctionBuilder& b, int i) {  // x_i^4 + x_{i+1}^2
  return b.add(b.pow_const(b.var(i), 4.0), b.square(b.var(i + 1)));
}
Expr cb3_term2(FunctionBuilder& b, int i) {  // (2-x_i)^2 + (2-x_{i+1})^2
  return b.add(b.square(b.sum({b.var(i)}, {-1.0}, 2.0)),
               b.square(b.sum({b.var(i + 1)}, {-1.0}, 2.0)));
}
Expr cb3_term3(FunctionBuilder& b, int i) {  // 2 e^{-x_i + x_{i+1}}
  return b.scale(2.0, b.exp(b.sum({b.var(i), b.var(i + 1)}, {-1.0, 1.0})));
}

EncodableFunction build_chained_cb3_i(int n) {
  FunctionBuilder b(n);
  std::vector<Expr> terms;
  for (int i = 0; i + 1 < n; ++i)
    terms.push_back(b.max_of({cb3_term1(b, i), cb3_term2(b, i), cb3_term3(b, i)}));
  return b.build(b.sum(terms));
}

EncodableFunction build_chained_cb3_ii(int n) {
  FunctionBuilder b(n);
  std::vector<Expr> s1, s2, s3;
  for (int i = 0; i + 1 < n; ++i) {
    s1.push_back(cb3_term1(b, i));
    s2.push_back(cb3_term2(b, i));
    s3.push_back(cb3_term3(b, i));
  }
  return b.build(b.max_of({b.sum(s1), b.sum(s2), b.sum(s3)}));
}

EncodableFunction build_num_active_faces(int n) {
  FunctionBuilder b(n);
  std::vector<Expr> args;
  std::vector<Expr> vars;
  for (int j = 0; j < n; ++j) vars.push_back(b.var(j));
  args.push_back(b.log(b.abs(b.sum(vars))));
  for (int i = 0; i < n; ++i) args.push_back(b.log(b.abs(b.var(i))));
  return b.build(b.max_of(args));
}

EncodableFunction build_brown_func2(int n) {
  FunctionBuilder b(n);
  std::vector<Expr> terms;
  for (int i = 0; i + 1 < n; ++i) {
    Expr p1 = b.pow_expr(b.abs(b.var(i)), b.shift(b.square(b.var(i + 1)), 1.0));
    Expr p2 = b.pow_expr(b.abs(b.var(i + 1)), b.shift(b.square(b.var(i)), 1.0));
    terms.push_back(b.add(p1, p2));
  }
  return b.build(b.sum(terms));
}

Expr crescent_term1(FunctionBuilder& b, int i) {  // x_i^2 + (x_{i+1}-1)^2 + x_{i+1} - 1
  return b.sum({b.square(b.var(i)), b.square(b.shift(b.var(i + 1), -1.0)), b.var(i + 1)},
               {1.0, 1.0, 1.0}, -1.0);
}
Expr crescent_term2(FunctionBuilder& b, int i) {  // -x_i^2 - (x_{i+1}-1)^2 + x_{i+1} + 1
  return b.sum({b.square(b.var(i)), b.square(b.shift(b.var(i + 1), -1.0)), b.var(i + 1)},
               {-1.0, -1.0, 1.0}, 1.0);
}

EncodableFunction build_crescent_i(int n) {
  FunctionBuilder b(n);
  std::vector<Expr> s1, s2;
  for (int i = 0; i + 1 < n; ++i) {
    s1.push_back(crescent_term1(b, i));
    s2.push_back(crescent_term2(b, i));
  }
  return b.build(b.max_of({b.sum(s1), b.sum(s2)}));
}

EncodableFunction build_crescent_ii(int n) {
  FunctionBuilder b(n);
  std::vector<Expr> terms;
  for (int i = 0; i + 1 < n; ++i)
    terms.push_back(b.max_of({crescent_term1(b, i), crescent_term2(b, i)}));
  return b.build(b.sum(terms));
}

}  // namespace

InitMode parse_init_mode(const std::string& s) {
  if (s == "preset") return InitMode::kPreset;
  if (s == "random") return InitMode::kRandom;
  throw std::invalid_argument("unknown init mode: " + s);
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names = {
      "gen_MAXQ",         "gen_MXHILB",  "Chained_LQ",
      "Chained_CB3_I",    "Chained_CB3_II", "num_active_faces",
      "brown_func2",      "Chained_Crescent_I", "Chained_Crescent_II"};
  return names;
}

Problem make_problem(const std::string& name, int n) {
  Problem p;
  p.spec.name = name;
  p.spec.dimension = n;
  p.spec.preset_x0 = initial_point(name, n, InitMode::kPreset, 0);
  if (name == "gen_MAXQ") {
    require_dim(name, n, 1);
    p.fn = build_gen_maxq(n);
    p.spec.f_star = 0.0;
    p.spec.convex = true;
  } else if (name == "gen_MXHILB") {
    require_dim(name, n, 1);
    p.fn = build_gen_mxhilb(n);
    p.spec.f_star = 0.0;
    p.spec.convex = true;
  } else if (name == "Chained_LQ") {
    require_dim(name, n, 2);
    p.fn = build_chained_lq(n);
    p.spec.f_star = -std::sqrt(2.0) * (n - 1);
    p.spec.convex = true;
  } else if (name == "Chained_CB3_I") {
    require_dim(name, n, 2);
    p.fn = build_chained_cb3_i(n);
    p.spec.f_star = 2.0 * (n - 1);
    p.spec.convex = true;
  } else if (name == "Chained_CB3_II") {
    require_dim(name, n, 2);
    p.fn = build_chained_cb3_ii(n);
    p.spec.f_star = 2.0 * (n - 1);
    p.spec.convex = true;
  } else if (name == "num_active_faces") {
    require_dim(name, n, 1);
    p.fn = build_num_active_faces(n);
    p.spec.f_star = 0.0;
    p.spec.convex = false;
  } else if (name == "brown_func2") {
    require_dim(name, n, 2);
    p.fn = build_brown_func2(n);
    p.spec.f_star = 0.0;
    p.spec.convex = false;
  } else if (name == "Chained_Crescent_I") {
    require_dim(name, n, 2);
    p.fn = build_crescent_i(n);
    p.spec.f_star = 0.0;
    p.spec.convex = false;
  } else if (name == "Chained_Crescent_II") {
    require_dim(name, n, 2);
    p.fn = build_crescent_ii(n);
    p.spec.f_star = 0.0;
    p.spec.convex = false;
  } else {
    throw std::invalid_argument("unknown problem name: " + name);
  }
  return p;
}

Vector initial_point(const std::string& name, int n, InitMode mode,
                     std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  if (mode == InitMode::kRandom) {
    NormalSampler rng(seed);
    return rng.normal_vector(n);
  }
  // Conventional starting points for this classical test family.
  Vector x(n);
  if (name == "gen_MAXQ") {
    for (int i = 1; i <= n; ++i) x[i - 1] = i <= n / 2 ? i : -i;
  } else if (name == "gen_MXHILB" || name == "num_active_faces") {
    x.setOnes();
  } else if (name == "Chained_LQ") {
    x.setConstant(-0.5);
  } else if (name == "Chained_CB3_I" || name == "Chained_CB3_II") {
    x.setConstant(2.0);
  } else if (name == "brown_func2") {
    for (int i = 1; i <= n; ++i) x[i - 1] = i % 2 == 1 ? -1.0 : 1.0;
  } else if (name == "Chained_Crescent_I" || name == "Chained_Crescent_II") {
    for (int i = 1; i <= n; ++i) x[i - 1] = i % 2 == 1 ? -1.5 : 2.0;
  } else {
    throw std::invalid_argument("unknown problem name: " + name);
  }
  return x;
}

std::vector<Fixture> fixtures() {
  std::vector<Fixture> out;

  {  // max of three affine pieces in one variable
    FunctionBuilder b(1);
    Expr f1 = b.sum({b.var(0)}, {-1.0}, 1.0);   // -x + 1
    Expr f2 = b.sum({b.var(0)}, {0.25});        // x / 4
    Expr f3 = b.sum({b.var(0)}, {1.0}, -6.0);   // x - 6
    Fixture fx;
    fx.name = "three_piece_max";
    fx.fn = b.build(b.max_of({f1, f2, f3}));
    auto probe = [&](double t, std::vector<std::uint16_t> sels) {
      FixtureProbe pr;
      pr.x = Vector::Constant(1, t);
      for (auto s : sels) pr.expected_active.push_back(BranchCode({s}));
      return pr;
    };
    fx.probes = {probe(0.0, {1}), probe(0.8, {1, 2}), probe(4.0, {2}),
                 probe(8.0, {2, 3}), probe(10.0, {3})};
    out.push_back(std::move(fx));
  }

  {  // crescent chain with explicit absolute-value sites, n = 3
    const int n = 3;
    FunctionBuilder b(n);
    std::vector<Expr> terms;
    for (int i = 0; i + 1 < n; ++i) {
      Expr a1 = b.sum({b.square(b.var(i)), b.square(b.shift(b.var(i + 1), -1.0)),
                       b.abs(b.shift(b.var(i + 1), -1.0))});
      Expr a2 = b.sum({b.square(b.var(i)), b.square(b.shift(b.var(i + 1), -1.0)),
                       b.abs(b.shift(b.var(i + 1), 1.0))},
                      {-1.0, -1.0, 1.0});
      terms.push_back(b.max_of({a1, a2}));
    }
    Fixture fx;
    fx.name = "crescent_chain_abs";
    fx.fn = b.build(b.sum(terms));
    out.push_back(std::move(fx));
  }

  {  // rule-based piecewise function on (0, 6)
    FunctionBuilder b(1);
    RulePieceSpec p1{b.sum({b.square(b.var(0)), b.var(0)}, {-0.5, 2.0}),
                     0.0, 3.0, 0.0, 2.0, false, true};
    RulePieceSpec p2{b.sum({b.square(b.var(0)), b.var(0)}, {0.5, -4.0}, 8.0),
                     1.0, 5.0, 2.0, 4.0, false, true};
    RulePieceSpec p3{b.sum({b.var(0)}, {1.5}, -6.0),
                     3.0, 6.0, 4.0, 6.0, false, false};
    Fixture fx;
    fx.name = "rule_based_quadratics";
    fx.fn = b.build(b.rule(0, {p1, p2, p3}));
    auto probe = [&](double t, std::vector<std::uint16_t> sels) {
      FixtureProbe pr;
      pr.x = Vector::Constant(1, t);
      for (auto s : sels) pr.expected_active.push_back(BranchCode({s}));
      return pr;
    };
    fx.probes = {probe(1.0, {1}), probe(2.0, {1, 2}), probe(3.0, {2}),
                 probe(4.0, {2, 3}), probe(5.0, {3})};
    out.push_back(std::move(fx));
  }

  return out;
}

}  // namespace bigd
