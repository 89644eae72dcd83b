#include "bigd/expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace bigd {

using detail::Interval;
using detail::Node;
using detail::NodeKind;

namespace {

constexpr double kLogFloor = 1e-300;

bool region_contains(const Interval& r, double t) {
  const bool lo_ok = r.lo_closed ? t >= r.lo : t > r.lo;
  const bool hi_ok = r.hi_closed ? t <= r.hi : t < r.hi;
  return lo_ok && hi_ok;
}

// Open definition intervals admit their boundary up to the active-branch
// slack so that closed active domains remain representable.
bool open_domain_contains(const Interval& d, double t) {
  const double s = kActiveTol * (1.0 + std::abs(t));
  return t > d.lo - s && t < d.hi + s;
}

double pow_const_value(double a, double c) {
  if (a > 0.0) return std::pow(a, c);
  const double ri = std::nearbyint(c);
  if (ri == c) return std::pow(a, c);  // integer exponent, any base
  if (a == 0.0) {
    if (c > 0.0) return 0.0;
    throw DomainError("pow: zero base with nonpositive fractional exponent");
  }
  throw DomainError("pow: negative base with fractional exponent");
}

double pow_const_slope(double a, double c) {
  if (a == 0.0) {
    if (c > 1.0) return 0.0;
    if (c == 1.0) return 1.0;
    throw DomainError("pow: derivative undefined at zero base");
  }
  return c * pow_const_value(a, c - 1.0);
}

}  // namespace

std::string BranchCode::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < sel_.size(); ++i) {
    if (i) os << ',';
    os << sel_[i];
  }
  os << ')';
  return os.str();
}

int EncodableFunction::site_arity(int site) const {
  const Node& n = nodes_[sites_[site]];
  switch (n.kind) {
    case NodeKind::kMax:
    case NodeKind::kMin:
      return static_cast<int>(n.kids.size());
    case NodeKind::kAbs:
    case NodeKind::kPos:
      return 2;
    case NodeKind::kRule:
      return static_cast<int>(n.pieces.size());
    default:
      return 0;
  }
}

void EncodableFunction::check_input(const Vector& x) const {
  if (x.size() != dimension_)
    throw std::invalid_argument("point has wrong dimension");
  if (!x.allFinite()) throw std::invalid_argument("point has non-finite entries");
}

void EncodableFunction::check_code(const BranchCode& code) const {
  if (code.size() != sites_.size())
    throw std::invalid_argument("branch code length does not match operator sites");
  for (std::size_t s = 0; s < code.size(); ++s) {
    const int arity = site_arity(static_cast<int>(s));
    if (code.at(s) < 1 || static_cast<int>(code.at(s)) > arity)
      throw std::invalid_argument("branch code selection out of range");
  }
}

double EncodableFunction::eval_plain(std::int32_t id, const Vector& x,
                                     std::vector<SiteObservation>* obs) const {
  const Node& n = nodes_[id];
  switch (n.kind) {
    case NodeKind::kConstant:
      return n.value;
    case NodeKind::kVariable:
      return x[n.var];
    case NodeKind::kSum: {
      double v = n.bias;
      for (std::size_t j = 0; j < n.kids.size(); ++j)
        v += n.coeffs[j] * eval_plain(n.kids[j], x, obs);
      return v;
    }
    case NodeKind::kProduct:
      return eval_plain(n.kids[0], x, obs) * eval_plain(n.kids[1], x, obs);
    case NodeKind::kSquare: {
      const double a = eval_plain(n.kids[0], x, obs);
      return a * a;
    }
    case NodeKind::kPowConst:
      return pow_const_value(eval_plain(n.kids[0], x, obs), n.value);
    case NodeKind::kExp:
      return std::exp(eval_plain(n.kids[0], x, obs));
    case NodeKind::kLog: {
      const double a = eval_plain(n.kids[0], x, obs);
      if (a <= kLogFloor) throw DomainError("log: argument at or below 1e-300");
      return std::log(a);
    }
    case NodeKind::kPowExpr: {
      const double b = eval_plain(n.kids[0], x, obs);
      const double p = eval_plain(n.kids[1], x, obs);
      if (b == 0.0) {
        if (p > 0.0) return 0.0;
        throw DomainError("pow: zero base with nonpositive exponent");
      }
      return std::pow(std::abs(b), p);
    }
    case NodeKind::kMax:
    case NodeKind::kMin: {
      const bool is_max = n.kind == NodeKind::kMax;
      std::vector<double> vals(n.kids.size());
      for (std::size_t j = 0; j < n.kids.size(); ++j)
        vals[j] = eval_plain(n.kids[j], x, obs);
      int best = 0;
      for (std::size_t j = 1; j < vals.size(); ++j) {
        if (is_max ? vals[j] > vals[best] : vals[j] < vals[best])
          best = static_cast<int>(j);
      }
      if (obs) {
        auto& o = (*obs)[n.site];
        o.branch_values = std::move(vals);
        o.primary = best;
        return o.branch_values[best];
      }
      return vals[best];
    }
    case NodeKind::kAbs: {
      const double u = eval_plain(n.kids[0], x, obs);
      if (obs) {
        auto& o = (*obs)[n.site];
        o.branch_values = {u, -u};
        o.primary = u >= 0.0 ? 0 : 1;
      }
      return std::abs(u);
    }
    case NodeKind::kPos: {
      const double u = eval_plain(n.kids[0], x, obs);
      if (obs) {
        auto& o = (*obs)[n.site];
        o.branch_values = {u, 0.0};
        o.primary = u >= 0.0 ? 0 : 1;
      }
      return std::max(u, 0.0);
    }
    case NodeKind::kRule: {
      const double t = x[n.rule_var];
      int taken = -1;
      for (std::size_t j = 0; j < n.pieces.size(); ++j) {
        if (region_contains(n.pieces[j].region, t)) {
          taken = static_cast<int>(j);
          break;
        }
      }
      if (taken < 0) throw DomainError("rule: point outside every piece region");
      double taken_value = 0.0;
      if (obs) {
        auto& o = (*obs)[n.site];
        o.branch_values.assign(n.pieces.size(),
                               std::numeric_limits<double>::quiet_NaN());
        o.feasible.assign(n.pieces.size(), false);
        for (std::size_t j = 0; j < n.pieces.size(); ++j) {
          if (!open_domain_contains(n.pieces[j].open_domain, t)) continue;
          o.feasible[j] = true;
          o.branch_values[j] = eval_plain(n.kids[j], x, obs);
        }
        o.primary = taken;
        taken_value = o.branch_values[taken];
      } else {
        taken_value = eval_plain(n.kids[taken], x, obs);
      }
      return taken_value;
    }
  }
  throw std::logic_error("unreachable node kind");
}

EvalRecord EncodableFunction::evaluate(const Vector& x) const {
  check_input(x);
  std::vector<SiteObservation> obs(sites_.size());
  EvalRecord rec;
  rec.value = eval_plain(root_, x, &obs);

  // Exact value ties already resolve to the lowest selection index inside
  // eval_plain, so the primary code reproduces the evaluation bit for bit.
  std::vector<std::uint16_t> primary(sites_.size());
  rec.per_site_margins.resize(sites_.size());
  for (std::size_t s = 0; s < sites_.size(); ++s) {
    const auto& o = obs[s];
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < o.branch_values.size(); ++j) {
      if (static_cast<int>(j) == o.primary) continue;
      if (!o.feasible.empty() && !o.feasible[j]) continue;
      const double gap = std::abs(o.branch_values[j] - o.branch_values[o.primary]);
      margin = std::min(margin, gap);
    }
    primary[s] = static_cast<std::uint16_t>(o.primary + 1);
    rec.per_site_margins[s] = margin;
  }
  rec.primary_code = BranchCode(std::move(primary));
  return rec;
}

ActiveBranches EncodableFunction::active_branches(const Vector& x, int cap) const {
  check_input(x);
  if (cap < 1) throw std::invalid_argument("branch cap must be positive");
  std::vector<SiteObservation> obs(sites_.size());
  const double value = eval_plain(root_, x, &obs);
  const double tol = kActiveTol * (1.0 + std::abs(value));

  const auto evaluable = [&](const BranchCode& code) {
    try {
      (void)eval_fixed(root_, x, code);
      return true;
    } catch (...) {
      return false;
    }
  };

  std::vector<std::uint16_t> primary(sites_.size());
  for (std::size_t s = 0; s < sites_.size(); ++s)
    primary[s] = static_cast<std::uint16_t>(obs[s].primary + 1);

  // Per-site tie candidates; a tied selection must also keep the branch
  // inside its definition domain (checked by deviating from the taken
  // path one site at a time). The taken selection leads each list so that
  // capped enumerations always contain the primary code.
  std::vector<std::vector<std::uint16_t>> tied(sites_.size());
  for (std::size_t s = 0; s < sites_.size(); ++s) {
    const auto& o = obs[s];
    tied[s].push_back(primary[s]);
    for (std::size_t j = 0; j < o.branch_values.size(); ++j) {
      if (static_cast<int>(j) == o.primary) continue;
      if (!o.feasible.empty() && !o.feasible[j]) continue;
      if (std::abs(o.branch_values[j] - o.branch_values[o.primary]) > tol) continue;
      std::vector<std::uint16_t> probe = primary;
      probe[s] = static_cast<std::uint16_t>(j + 1);
      if (!evaluable(BranchCode(std::move(probe)))) continue;
      tied[s].push_back(static_cast<std::uint16_t>(j + 1));
    }
  }

  // Enumeration order: the primary code, then codes taking the j-th tied
  // alternative uniformly at every site, then single-site deviations, then
  // the lexicographic cross product. Capped prefixes of exponentially tied
  // sets then still span the per-site variation (the uniform codes are the
  // ones whose hull certifies stationarity for chain-structured sums).
  ActiveBranches out;
  std::set<std::vector<std::uint16_t>> seen;
  std::size_t total = 1;
  for (const auto& t : tied) {
    if (total > std::size_t(cap) * 8) break;
    total *= t.size();
  }
  const auto emit = [&](std::vector<std::uint16_t> sel, bool check) {
    if (static_cast<int>(out.codes.size()) >= cap) return;
    if (!seen.insert(sel).second) return;
    BranchCode code(std::move(sel));
    if (check && !evaluable(code)) return;
    out.codes.push_back(std::move(code));
  };

  emit(primary, false);
  std::size_t max_ties = 1;
  for (const auto& t : tied) max_ties = std::max(max_ties, t.size());
  for (std::size_t j = 1; j < max_ties; ++j) {
    std::vector<std::uint16_t> sel(sites_.size());
    for (std::size_t s = 0; s < sites_.size(); ++s)
      sel[s] = tied[s][std::min(j, tied[s].size() - 1)];
    emit(std::move(sel), true);
  }
  for (std::size_t s = 0; s < sites_.size(); ++s) {
    for (std::size_t j = 1; j < tied[s].size(); ++j) {
      std::vector<std::uint16_t> sel = primary;
      sel[s] = tied[s][j];
      emit(std::move(sel), false);  // single deviations were domain-checked
    }
  }

  std::vector<std::size_t> idx(sites_.size(), 0);
  long budget = 8L * cap;
  bool exhausted = false;
  while (static_cast<int>(out.codes.size()) < cap && budget-- > 0) {
    std::vector<std::uint16_t> sel(sites_.size());
    int deviations = 0;
    for (std::size_t s = 0; s < sites_.size(); ++s) {
      sel[s] = tied[s][idx[s]];
      if (sel[s] != primary[s]) ++deviations;
    }
    emit(std::move(sel), deviations >= 2);
    int s = static_cast<int>(sites_.size()) - 1;
    while (s >= 0 && idx[s] + 1 == tied[s].size()) {
      idx[s] = 0;
      --s;
    }
    if (s < 0) {
      exhausted = true;
      break;
    }
    ++idx[s];
  }
  out.truncated = !exhausted && out.codes.size() < total;
  return out;
}

double EncodableFunction::eval_fixed(std::int32_t id, const Vector& x,
                                     const BranchCode& code) const {
  const Node& n = nodes_[id];
  switch (n.kind) {
    case NodeKind::kConstant:
      return n.value;
    case NodeKind::kVariable:
      return x[n.var];
    case NodeKind::kSum: {
      double v = n.bias;
      for (std::size_t j = 0; j < n.kids.size(); ++j)
        v += n.coeffs[j] * eval_fixed(n.kids[j], x, code);
      return v;
    }
    case NodeKind::kProduct:
      return eval_fixed(n.kids[0], x, code) * eval_fixed(n.kids[1], x, code);
    case NodeKind::kSquare: {
      const double a = eval_fixed(n.kids[0], x, code);
      return a * a;
    }
    case NodeKind::kPowConst:
      return pow_const_value(eval_fixed(n.kids[0], x, code), n.value);
    case NodeKind::kExp:
      return std::exp(eval_fixed(n.kids[0], x, code));
    case NodeKind::kLog: {
      const double a = eval_fixed(n.kids[0], x, code);
      if (a <= kLogFloor) throw DomainError("log: argument at or below 1e-300");
      return std::log(a);
    }
    case NodeKind::kPowExpr: {
      const double b = eval_fixed(n.kids[0], x, code);
      const double p = eval_fixed(n.kids[1], x, code);
      if (b == 0.0) {
        if (p > 0.0) return 0.0;
        throw DomainError("pow: zero base with nonpositive exponent");
      }
      return std::pow(std::abs(b), p);
    }
    case NodeKind::kMax:
    case NodeKind::kMin:
      return eval_fixed(n.kids[code.at(n.site) - 1], x, code);
    case NodeKind::kAbs: {
      const double u = eval_fixed(n.kids[0], x, code);
      return code.at(n.site) == 1 ? u : -u;
    }
    case NodeKind::kPos:
      return code.at(n.site) == 1 ? eval_fixed(n.kids[0], x, code) : 0.0;
    case NodeKind::kRule: {
      const int sel = code.at(n.site) - 1;
      const double t = x[n.rule_var];
      if (!open_domain_contains(n.pieces[sel].open_domain, t))
        throw InfeasibleBranchError("rule piece domain excludes the point");
      return eval_fixed(n.kids[sel], x, code);
    }
  }
  throw std::logic_error("unreachable node kind");
}

double EncodableFunction::eval_fixed_grad(std::int32_t id, const Vector& x,
                                          const BranchCode& code, Vector& grad) const {
  const Node& n = nodes_[id];
  switch (n.kind) {
    case NodeKind::kConstant:
      grad.setZero(dimension_);
      return n.value;
    case NodeKind::kVariable:
      grad.setZero(dimension_);
      grad[n.var] = 1.0;
      return x[n.var];
    case NodeKind::kSum: {
      double v = n.bias;
      grad.setZero(dimension_);
      Vector g(dimension_);
      for (std::size_t j = 0; j < n.kids.size(); ++j) {
        v += n.coeffs[j] * eval_fixed_grad(n.kids[j], x, code, g);
        grad += n.coeffs[j] * g;
      }
      return v;
    }
    case NodeKind::kProduct: {
      Vector ga(dimension_), gb(dimension_);
      const double a = eval_fixed_grad(n.kids[0], x, code, ga);
      const double b = eval_fixed_grad(n.kids[1], x, code, gb);
      grad = b * ga + a * gb;
      return a * b;
    }
    case NodeKind::kSquare: {
      const double a = eval_fixed_grad(n.kids[0], x, code, grad);
      grad *= 2.0 * a;
      return a * a;
    }
    case NodeKind::kPowConst: {
      const double a = eval_fixed_grad(n.kids[0], x, code, grad);
      const double v = pow_const_value(a, n.value);
      grad *= pow_const_slope(a, n.value);
      return v;
    }
    case NodeKind::kExp: {
      const double a = eval_fixed_grad(n.kids[0], x, code, grad);
      const double v = std::exp(a);
      grad *= v;
      return v;
    }
    case NodeKind::kLog: {
      const double a = eval_fixed_grad(n.kids[0], x, code, grad);
      if (a <= kLogFloor) throw DomainError("log: argument at or below 1e-300");
      grad /= a;
      return std::log(a);
    }
    case NodeKind::kPowExpr: {
      Vector gb(dimension_), gp(dimension_);
      const double b = eval_fixed_grad(n.kids[0], x, code, gb);
      const double p = eval_fixed_grad(n.kids[1], x, code, gp);
      if (b == 0.0) {
        if (p > 0.0) {
          // One-sided analytic continuation: zero slope for exponent >= 1.
          grad.setZero(dimension_);
          return 0.0;
        }
        throw DomainError("pow: zero base with nonpositive exponent");
      }
      const double v = std::pow(std::abs(b), p);
      grad = v * (std::log(std::abs(b)) * gp + (p / b) * gb);
      return v;
    }
    case NodeKind::kMax:
    case NodeKind::kMin:
      return eval_fixed_grad(n.kids[code.at(n.site) - 1], x, code, grad);
    case NodeKind::kAbs: {
      const double u = eval_fixed_grad(n.kids[0], x, code, grad);
      if (code.at(n.site) == 1) return u;
      grad = -grad;
      return -u;
    }
    case NodeKind::kPos: {
      if (code.at(n.site) == 1) return eval_fixed_grad(n.kids[0], x, code, grad);
      grad.setZero(dimension_);
      return 0.0;
    }
    case NodeKind::kRule: {
      const int sel = code.at(n.site) - 1;
      const double t = x[n.rule_var];
      if (!open_domain_contains(n.pieces[sel].open_domain, t))
        throw InfeasibleBranchError("rule piece domain excludes the point");
      return eval_fixed_grad(n.kids[sel], x, code, grad);
    }
  }
  throw std::logic_error("unreachable node kind");
}

double EncodableFunction::branch_value(const BranchCode& code, const Vector& x) const {
  check_input(x);
  check_code(code);
  return eval_fixed(root_, x, code);
}

Vector EncodableFunction::branch_gradient(const BranchCode& code, const Vector& x) const {
  check_input(x);
  check_code(code);
  Vector g(dimension_);
  eval_fixed_grad(root_, x, code, g);
  return g;
}

bool EncodableFunction::is_feasible_branch(const BranchCode& code,
                                           const Vector& x) const noexcept {
  try {
    check_input(x);
    check_code(code);
    (void)eval_fixed(root_, x, code);
    return true;
  } catch (...) {
    return false;
  }
}

FunctionBuilder::FunctionBuilder(int dimension) : dimension_(dimension) {
  if (dimension < 0) throw std::invalid_argument("negative dimension");
}

std::int32_t FunctionBuilder::push(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t FunctionBuilder::id_of(Expr e) const {
  if (e.builder_ != this || e.id_ < 0)
    throw std::invalid_argument("expression does not belong to this builder");
  return e.id_;
}

Expr FunctionBuilder::constant(double c) {
  Node n;
  n.kind = NodeKind::kConstant;
  n.value = c;
  return Expr(this, push(std::move(n)));
}

Expr FunctionBuilder::var(int index) {
  if (index < 0 || index >= dimension_)
    throw std::invalid_argument("variable index out of range");
  Node n;
  n.kind = NodeKind::kVariable;
  n.var = index;
  return Expr(this, push(std::move(n)));
}

Expr FunctionBuilder::sum(const std::vector<Expr>& terms,
                          const std::vector<double>& coeffs, double bias) {
  Node n;
  n.kind = NodeKind::kSum;
  n.bias = bias;
  for (Expr e : terms) n.kids.push_back(id_of(e));
  n.coeffs = coeffs.empty() ? std::vector<double>(terms.size(), 1.0) : coeffs;
  if (n.coeffs.size() != n.kids.size())
    throw std::invalid_argument("coefficient count mismatch");
  return Expr(this, push(std::move(n)));
}

Expr FunctionBuilder::add(Expr a, Expr b) { return sum({a, b}); }
Expr FunctionBuilder::sub(Expr a, Expr b) { return sum({a, b}, {1.0, -1.0}); }
Expr FunctionBuilder::neg(Expr a) { return sum({a}, {-1.0}); }
Expr FunctionBuilder::scale(double c, Expr a) { return sum({a}, {c}); }
Expr FunctionBuilder::shift(Expr a, double b) { return sum({a}, {1.0}, b); }

Expr FunctionBuilder::mul(Expr a, Expr b) {
  Node n;
  n.kind = NodeKind::kProduct;
  n.kids = {id_of(a), id_of(b)};
  return Expr(this, push(std::move(n)));
}

Expr FunctionBuilder::square(Expr a) {
  Node n;
  n.kind = NodeKind::kSquare;
  n.kids = {id_of(a)};
  return Expr(this, push(std::move(n)));
}

Expr FunctionBuilder::pow_const(Expr a, double exponent) {
  Node n;
  n.kind = NodeKind::kPowConst;
  n.kids = {id_of(a)};
  n.value = exponent;
  return Expr(this, push(std::move(n)));
}

Expr FunctionBuilder::exp(Expr a) {
  Node n;
  n.kind = NodeKind::kExp;
  n.kids = {id_of(a)};
  return Expr(this, push(std::move(n)));
}

Expr FunctionBuilder::log(Expr a) {
  Node n;
  n.kind = NodeKind::kLog;
  n.kids = {id_of(a)};
  return Expr(this, push(std::move(n)));
}

Expr FunctionBuilder::pow_expr(Expr base, Expr exponent) {
  Node n;
  n.kind = NodeKind::kPowExpr;
  n.kids = {id_of(base), id_of(exponent)};
  return Expr(this, push(std::move(n)));
}

Expr FunctionBuilder::max_of(const std::vector<Expr>& args) {
  if (args.empty()) throw std::invalid_argument("max needs at least one argument");
  Node n;
  n.kind = NodeKind::kMax;
  for (Expr e : args) n.kids.push_back(id_of(e));
  return Expr(this, push(std::move(n)));
}

Expr FunctionBuilder::min_of(const std::vector<Expr>& args) {
  if (args.empty()) throw std::invalid_argument("min needs at least one argument");
  Node n;
  n.kind = NodeKind::kMin;
  for (Expr e : args) n.kids.push_back(id_of(e));
  return Expr(this, push(std::move(n)));
}

Expr FunctionBuilder::abs(Expr a) {
  Node n;
  n.kind = NodeKind::kAbs;
  n.kids = {id_of(a)};
  return Expr(this, push(std::move(n)));
}

Expr FunctionBuilder::pos(Expr a) {
  Node n;
  n.kind = NodeKind::kPos;
  n.kids = {id_of(a)};
  return Expr(this, push(std::move(n)));
}

Expr FunctionBuilder::rule(int var, const std::vector<RulePieceSpec>& pieces) {
  if (pieces.empty()) throw std::invalid_argument("rule needs at least one piece");
  if (var < 0 || var >= dimension_)
    throw std::invalid_argument("rule variable index out of range");
  Node n;
  n.kind = NodeKind::kRule;
  n.rule_var = var;
  for (const auto& p : pieces) {
    n.kids.push_back(id_of(p.expr));
    detail::RulePiece rp;
    rp.open_domain = Interval{p.domain_lo, p.domain_hi, false, false};
    rp.region = Interval{p.region_lo, p.region_hi, p.region_lo_closed,
                         p.region_hi_closed};
    n.pieces.push_back(rp);
  }
  return Expr(this, push(std::move(n)));
}

EncodableFunction FunctionBuilder::build(Expr root) {
  if (built_) throw std::logic_error("builder already consumed");
  EncodableFunction f;
  f.dimension_ = dimension_;
  f.root_ = id_of(root);
  f.nodes_ = std::move(nodes_);
  built_ = true;

  // Register operator sites in pre-order: parent before children, children
  // left to right, so code positions read top-down.
  std::vector<bool> seen(f.nodes_.size(), false);
  std::vector<std::int32_t> stack = {f.root_};
  while (!stack.empty()) {
    const std::int32_t id = stack.back();
    stack.pop_back();
    if (seen[id])
      throw std::invalid_argument("expression must be a tree (no shared subtrees)");
    seen[id] = true;
    Node& n = f.nodes_[id];
    switch (n.kind) {
      case NodeKind::kMax:
      case NodeKind::kMin:
      case NodeKind::kAbs:
      case NodeKind::kPos:
      case NodeKind::kRule:
        n.site = static_cast<int>(f.sites_.size());
        f.sites_.push_back(id);
        break;
      default:
        break;
    }
    for (auto it = n.kids.rbegin(); it != n.kids.rend(); ++it) stack.push_back(*it);
  }
  return f;
}

}  // namespace bigd
