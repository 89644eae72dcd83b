#include "bigd/serialize.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace bigd {

using detail::Node;
using detail::NodeKind;

namespace {

void fmt_num(std::ostringstream& os, double v) {
  os << std::setprecision(17) << v;
}

struct Token {
  enum Kind { kOpen, kClose, kSymbol, kNumber } kind;
  std::string text;
  double number = 0.0;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == ';') {  // comment to end of line
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '(') {
      out.push_back({Token::kOpen, "("});
      ++i;
    } else if (c == ')') {
      out.push_back({Token::kClose, ")"});
      ++i;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
             text[j] != '(' && text[j] != ')' && text[j] != ';')
        ++j;
      std::string word = text.substr(i, j - i);
      i = j;
      char* end = nullptr;
      const double v = std::strtod(word.c_str(), &end);
      if (end && *end == '\0' && end != word.c_str())
        out.push_back({Token::kNumber, word, v});
      else
        out.push_back({Token::kSymbol, word});
    }
  }
  return out;
}

}  // namespace

class Serializer {
 public:
  static std::string print(const EncodableFunction& f) {
    std::ostringstream os;
    os << "(fn " << f.dimension_ << ' ';
    print_node(f, f.root_, os);
    os << ")";
    return os.str();
  }

  static EncodableFunction parse(const std::string& text) {
    const auto tokens = tokenize(text);
    std::size_t pos = 0;
    expect_open(tokens, pos);
    expect_symbol(tokens, pos, "fn");
    const int dim = static_cast<int>(expect_number(tokens, pos));
    FunctionBuilder b(dim);
    Expr root = parse_expr(tokens, pos, b);
    expect_close(tokens, pos);
    if (pos != tokens.size()) throw std::invalid_argument("trailing input");
    return b.build(root);
  }

 private:
  static void print_node(const EncodableFunction& f, std::int32_t id,
                         std::ostringstream& os) {
    const Node& n = f.nodes_[id];
    switch (n.kind) {
      case NodeKind::kConstant:
        fmt_num(os, n.value);
        return;
      case NodeKind::kVariable:
        os << 'x' << n.var;
        return;
      case NodeKind::kSum: {
        os << "(affine ";
        fmt_num(os, n.bias);
        for (std::size_t j = 0; j < n.kids.size(); ++j) {
          os << ' ';
          fmt_num(os, n.coeffs[j]);
          os << ' ';
          print_node(f, n.kids[j], os);
        }
        os << ')';
        return;
      }
      case NodeKind::kProduct:
        print_fixed(f, n, os, "*");
        return;
      case NodeKind::kSquare:
        print_fixed(f, n, os, "sq");
        return;
      case NodeKind::kPowConst:
        os << "(pow ";
        print_node(f, n.kids[0], os);
        os << ' ';
        fmt_num(os, n.value);
        os << ')';
        return;
      case NodeKind::kExp:
        print_fixed(f, n, os, "exp");
        return;
      case NodeKind::kLog:
        print_fixed(f, n, os, "log");
        return;
      case NodeKind::kPowExpr:
        print_fixed(f, n, os, "powx");
        return;
      case NodeKind::kMax:
        print_fixed(f, n, os, "max");
        return;
      case NodeKind::kMin:
        print_fixed(f, n, os, "min");
        return;
      case NodeKind::kAbs:
        print_fixed(f, n, os, "abs");
        return;
      case NodeKind::kPos:
        print_fixed(f, n, os, "pos");
        return;
      case NodeKind::kRule: {
        os << "(rule x" << n.rule_var;
        for (std::size_t j = 0; j < n.pieces.size(); ++j) {
          const auto& p = n.pieces[j];
          os << " (piece ";
          fmt_num(os, p.open_domain.lo);
          os << ' ';
          fmt_num(os, p.open_domain.hi);
          os << ' ';
          fmt_num(os, p.region.lo);
          os << ' ';
          fmt_num(os, p.region.hi);
          os << ' ' << (p.region.lo_closed ? 'c' : 'o')
             << (p.region.hi_closed ? 'c' : 'o') << ' ';
          print_node(f, n.kids[j], os);
          os << ')';
        }
        os << ')';
        return;
      }
    }
  }

  static void print_fixed(const EncodableFunction& f, const Node& n,
                          std::ostringstream& os, const char* op) {
    os << '(' << op;
    for (std::int32_t kid : n.kids) {
      os << ' ';
      print_node(f, kid, os);
    }
    os << ')';
  }

  static void expect_open(const std::vector<Token>& t, std::size_t& pos) {
    if (pos >= t.size() || t[pos].kind != Token::kOpen)
      throw std::invalid_argument("expected '('");
    ++pos;
  }
  static void expect_close(const std::vector<Token>& t, std::size_t& pos) {
    if (pos >= t.size() || t[pos].kind != Token::kClose)
      throw std::invalid_argument("expected ')'");
    ++pos;
  }
  static void expect_symbol(const std::vector<Token>& t, std::size_t& pos,
                            const std::string& sym) {
    if (pos >= t.size() || t[pos].kind != Token::kSymbol || t[pos].text != sym)
      throw std::invalid_argument("expected symbol '" + sym + "'");
    ++pos;
  }
  static double expect_number(const std::vector<Token>& t, std::size_t& pos) {
    if (pos >= t.size() || t[pos].kind != Token::kNumber)
      throw std::invalid_argument("expected number");
    return t[pos++].number;
  }
  static int expect_var(const std::vector<Token>& t, std::size_t& pos) {
    if (pos >= t.size() || t[pos].kind != Token::kSymbol || t[pos].text.size() < 2 ||
        t[pos].text[0] != 'x')
      throw std::invalid_argument("expected variable xK");
    return std::stoi(t[pos++].text.substr(1));
  }

  static Expr parse_expr(const std::vector<Token>& t, std::size_t& pos,
                         FunctionBuilder& b) {
    if (pos >= t.size()) throw std::invalid_argument("unexpected end of input");
    if (t[pos].kind == Token::kNumber) return b.constant(t[pos++].number);
    if (t[pos].kind == Token::kSymbol) return b.var(expect_var(t, pos));
    expect_open(t, pos);
    if (pos >= t.size() || t[pos].kind != Token::kSymbol)
      throw std::invalid_argument("expected operator symbol");
    const std::string op = t[pos++].text;
    Expr result;
    if (op == "affine") {
      const double bias = expect_number(t, pos);
      std::vector<double> coeffs;
      std::vector<Expr> kids;
      while (pos < t.size() && t[pos].kind != Token::kClose) {
        coeffs.push_back(expect_number(t, pos));
        kids.push_back(parse_expr(t, pos, b));
      }
      result = b.sum(kids, coeffs, bias);
    } else if (op == "+") {
      std::vector<Expr> kids;
      while (pos < t.size() && t[pos].kind != Token::kClose)
        kids.push_back(parse_expr(t, pos, b));
      result = b.sum(kids);
    } else if (op == "*") {
      Expr a = parse_expr(t, pos, b);
      Expr c = parse_expr(t, pos, b);
      result = b.mul(a, c);
    } else if (op == "sq") {
      result = b.square(parse_expr(t, pos, b));
    } else if (op == "pow") {
      Expr a = parse_expr(t, pos, b);
      result = b.pow_const(a, expect_number(t, pos));
    } else if (op == "exp") {
      result = b.exp(parse_expr(t, pos, b));
    } else if (op == "log") {
      result = b.log(parse_expr(t, pos, b));
    } else if (op == "powx") {
      Expr a = parse_expr(t, pos, b);
      Expr e = parse_expr(t, pos, b);
      result = b.pow_expr(a, e);
    } else if (op == "max" || op == "min") {
      std::vector<Expr> kids;
      while (pos < t.size() && t[pos].kind != Token::kClose)
        kids.push_back(parse_expr(t, pos, b));
      result = op == "max" ? b.max_of(kids) : b.min_of(kids);
    } else if (op == "abs") {
      result = b.abs(parse_expr(t, pos, b));
    } else if (op == "pos") {
      result = b.pos(parse_expr(t, pos, b));
    } else if (op == "rule") {
      const int var = expect_var(t, pos);
      std::vector<RulePieceSpec> pieces;
      while (pos < t.size() && t[pos].kind != Token::kClose) {
        expect_open(t, pos);
        expect_symbol(t, pos, "piece");
        RulePieceSpec p;
        p.domain_lo = expect_number(t, pos);
        p.domain_hi = expect_number(t, pos);
        p.region_lo = expect_number(t, pos);
        p.region_hi = expect_number(t, pos);
        if (pos >= t.size() || t[pos].kind != Token::kSymbol ||
            t[pos].text.size() != 2)
          throw std::invalid_argument("expected region bound flags (oo/oc/co/cc)");
        p.region_lo_closed = t[pos].text[0] == 'c';
        p.region_hi_closed = t[pos].text[1] == 'c';
        ++pos;
        p.expr = parse_expr(t, pos, b);
        expect_close(t, pos);
        pieces.push_back(p);
      }
      result = b.rule(var, pieces);
    } else {
      throw std::invalid_argument("unknown operator: " + op);
    }
    expect_close(t, pos);
    return result;
  }
};

std::string to_text(const EncodableFunction& f) { return Serializer::print(f); }

EncodableFunction parse_function(const std::string& text) {
  return Serializer::parse(text);
}

EncodableFunction load_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_function(ss.str());
}

void save_function(const EncodableFunction& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << to_text(f) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace bigd
