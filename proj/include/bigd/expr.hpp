#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bigd/common.hpp"

namespace bigd {

// Identifies one smooth branch of a piecewise-differentiable function: one
// 1-based selection per nonsmooth operator site, in registry order.
class BranchCode {
 public:
  BranchCode() = default;
  explicit BranchCode(std::vector<std::uint16_t> selections)
      : sel_(std::move(selections)) {}

  std::size_t size() const { return sel_.size(); }
  std::uint16_t at(std::size_t i) const { return sel_[i]; }
  const std::vector<std::uint16_t>& selections() const { return sel_; }

  bool operator==(const BranchCode& o) const { return sel_ == o.sel_; }
  bool operator!=(const BranchCode& o) const { return sel_ != o.sel_; }
  bool operator<(const BranchCode& o) const { return sel_ < o.sel_; }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ull;
    for (std::uint16_t s : sel_) {
      h ^= s;
      h *= 1099511628211ull;
    }
    return h;
  }

  std::string to_string() const;

 private:
  std::vector<std::uint16_t> sel_;
};

struct BranchCodeHash {
  std::size_t operator()(const BranchCode& c) const { return c.hash(); }
};

// Result of one plain evaluation: the value, the branch actually taken
// (ties broken toward the lowest selection index at each site), and each
// site's distance-to-tie in branch-value units.
struct EvalRecord {
  double value = 0.0;
  BranchCode primary_code;
  std::vector<double> per_site_margins;
};

// Active branch enumeration; `truncated` flags that the cross product of
// tied selections exceeded the cap and only the first `cap` codes are
// returned (callers treat the set as partial).
struct ActiveBranches {
  std::vector<BranchCode> codes;
  bool truncated = false;
};

namespace detail {

enum class NodeKind : std::uint8_t {
  kConstant,
  kVariable,
  kSum,      // bias + sum of coeff[j] * child[j]
  kProduct,  // child[0] * child[1]
  kSquare,
  kPowConst,  // child^value, value a real constant
  kExp,
  kLog,      // domain: argument > 1e-300
  kPowExpr,  // |child0|^child1, even continuation across child0 = 0
  kMax,      // operator site
  kMin,      // operator site
  kAbs,      // operator site: branch 1 = +u, branch 2 = -u
  kPos,      // operator site: branch 1 = u, branch 2 = 0
  kRule,     // operator site: rule-based pieces with interval predicates
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool hi_closed = false;
};

struct RulePiece {
  Interval open_domain;  // definition domain (open interval)
  Interval region;       // rule region deciding the taken piece
};

struct Node {
  NodeKind kind{};
  double value = 0.0;  // constant / exponent
  int var = -1;
  int site = -1;  // registry index when this node is an operator site
  std::vector<std::int32_t> kids;
  std::vector<double> coeffs;  // kSum
  double bias = 0.0;           // kSum
  std::vector<RulePiece> pieces;
  int rule_var = -1;  // variable the rule predicates test
};

}  // namespace detail

class FunctionBuilder;

// A piecewise-differentiable function represented as an expression tree
// whose nonsmooth operators (max/min/abs/pos/rule) report their active
// selections during evaluation. Immutable after construction and safe to
// share across concurrently running solvers; evaluation state is per call.
class EncodableFunction {
 public:
  int dimension() const { return dimension_; }
  int num_sites() const { return static_cast<int>(sites_.size()); }
  int site_arity(int site) const;

  // Evaluates f(x) and records the taken branch and per-site tie margins.
  EvalRecord evaluate(const Vector& x) const;

  // Enumerates the branch codes active at x (within the relative tie
  // tolerance) as the cross product of tied per-site selections, in
  // lexicographic order, stopping after `cap` codes.
  ActiveBranches active_branches(const Vector& x, int cap = kDefaultBranchCap) const;

  // Value of the smooth branch selected by `code` at x.
  double branch_value(const BranchCode& code, const Vector& x) const;

  // Exact gradient of the coded branch via forward derivative propagation.
  Vector branch_gradient(const BranchCode& code, const Vector& x) const;

  // True iff the coded branch is evaluable at x: x satisfies the domain
  // predicates of the coded rule pieces and every primitive on the coded
  // path is defined. Always true for max/min/abs/pos trees over globally
  // defined smooth arguments.
  bool is_feasible_branch(const BranchCode& code, const Vector& x) const noexcept;

  // Optional diagnostic constants (uniform gradient Lipschitz bound and
  // gradient norm bound); informational only, never consulted at runtime.
  std::optional<double> grad_lipschitz_bound;
  std::optional<double> grad_norm_bound;

 private:
  friend class FunctionBuilder;
  friend class Serializer;

  int dimension_ = 0;
  std::int32_t root_ = -1;
  std::vector<detail::Node> nodes_;
  std::vector<std::int32_t> sites_;  // node ids in registry (pre)order

  struct SiteObservation {
    std::vector<double> branch_values;  // candidate value per selection
    std::vector<bool> feasible;         // rule sites only; empty otherwise
    int primary = 0;                    // 0-based winning selection
  };

  double eval_plain(std::int32_t id, const Vector& x,
                    std::vector<SiteObservation>* obs) const;
  double eval_fixed(std::int32_t id, const Vector& x, const BranchCode& code) const;
  double eval_fixed_grad(std::int32_t id, const Vector& x, const BranchCode& code,
                         Vector& grad) const;
  void check_input(const Vector& x) const;
  void check_code(const BranchCode& code) const;
};

// Lightweight handle used while assembling an expression tree.
class Expr {
 public:
  Expr() = default;

 private:
  friend class FunctionBuilder;
  Expr(FunctionBuilder* b, std::int32_t id) : builder_(b), id_(id) {}
  FunctionBuilder* builder_ = nullptr;
  std::int32_t id_ = -1;
};

struct RulePieceSpec {
  Expr expr;
  double domain_lo;  // open definition interval (domain_lo, domain_hi)
  double domain_hi;
  double region_lo;  // rule region picking this piece
  double region_hi;
  bool region_lo_closed = false;
  bool region_hi_closed = true;
};

// Programmatic construction of EncodableFunction instances. Operator sites
// are registered in pre-order (parent before children, children left to
// right) when build() is called, so codes read top-down left-right.
class FunctionBuilder {
 public:
  explicit FunctionBuilder(int dimension);

  Expr constant(double c);
  Expr var(int index);
  Expr sum(const std::vector<Expr>& terms, const std::vector<double>& coeffs = {},
           double bias = 0.0);
  Expr add(Expr a, Expr b);
  Expr sub(Expr a, Expr b);
  Expr neg(Expr a);
  Expr scale(double c, Expr a);
  Expr shift(Expr a, double b);
  Expr mul(Expr a, Expr b);
  Expr square(Expr a);
  Expr pow_const(Expr a, double exponent);
  Expr exp(Expr a);
  Expr log(Expr a);
  Expr pow_expr(Expr base, Expr exponent);

  Expr max_of(const std::vector<Expr>& args);
  Expr min_of(const std::vector<Expr>& args);
  Expr abs(Expr a);
  Expr pos(Expr a);
  Expr rule(int var, const std::vector<RulePieceSpec>& pieces);

  EncodableFunction build(Expr root);

 private:
  friend class Serializer;
  std::int32_t push(detail::Node n);
  std::int32_t id_of(Expr e) const;

  int dimension_;
  std::vector<detail::Node> nodes_;
  bool built_ = false;
};

}  // namespace bigd
