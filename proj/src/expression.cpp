#include "g2lab/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace g2lab {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

using Node = Expr::Node;
using NodePtr = Expr::NodePtr;
using Kind = Expr::Kind;
using Func = Expr::Func;

NodePtr make_number(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->value = value;
  return n;
}

NodePtr make_variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->name = std::move(name);
  return n;
}

NodePtr make_unary(Kind kind, NodePtr child) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(child);
  return n;
}

NodePtr make_binary(Kind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_power(NodePtr base, double exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->lhs = std::move(base);
  n->value = exponent;
  return n;
}

NodePtr make_call(Func func, NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->func = func;
  n->lhs = std::move(arg);
  return n;
}

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Exp: return "exp";
  }
  return "?";
}

bool lookup_func(std::string_view name, Func& out) {
  static const std::pair<const char*, Func> table[] = {
      {"sin", Func::Sin}, {"cos", Func::Cos}, {"sinh", Func::Sinh}, {"cosh", Func::Cosh}, {"exp", Func::Exp}};
  for (const auto& [n, f] : table)
    if (name == n) {
      out = f;
      return true;
    }
  return false;
}

double eval_node(const Node& n, double u, double v, const Parameters& params) {
  switch (n.kind) {
    case Kind::Number: return n.value;
    case Kind::Variable:
      if (n.name == "u") return u;
      if (n.name == "v") return v;
      {
        const auto it = params.find(n.name);
        if (it == params.end()) throw DomainError("unbound parameter '" + n.name + "'");
        return it->second;
      }
    case Kind::Negate: return -eval_node(*n.lhs, u, v, params);
    case Kind::Add: return eval_node(*n.lhs, u, v, params) + eval_node(*n.rhs, u, v, params);
    case Kind::Subtract: return eval_node(*n.lhs, u, v, params) - eval_node(*n.rhs, u, v, params);
    case Kind::Multiply: return eval_node(*n.lhs, u, v, params) * eval_node(*n.rhs, u, v, params);
    case Kind::Divide: return eval_node(*n.lhs, u, v, params) / eval_node(*n.rhs, u, v, params);
    case Kind::Power: {
      const double base = eval_node(*n.lhs, u, v, params);
      const int k = static_cast<int>(n.value);
      // repeated multiplication keeps integer powers exact for small k
      double acc = 1.0;
      for (int i = 0; i < std::abs(k); ++i) acc *= base;
      return k < 0 ? 1.0 / acc : acc;
    }
    case Kind::Call: {
      const double x = eval_node(*n.lhs, u, v, params);
      switch (n.func) {
        case Func::Sin: return std::sin(x);
        case Func::Cos: return std::cos(x);
        case Func::Sinh: return std::sinh(x);
        case Func::Cosh: return std::cosh(x);
        case Func::Exp: return std::exp(x);
      }
    }
  }
  return 0.0;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::Number: out += format_number(n.value); return;
    case Kind::Variable: out += n.name; return;
    case Kind::Negate:
      out += "(-";
      print_node(*n.lhs, out);
      out += ")";
      return;
    case Kind::Power:
      out += "(";
      print_node(*n.lhs, out);
      out += " ^ " + format_number(n.value) + ")";
      return;
    case Kind::Call:
      out += func_name(n.func);
      out += "(";
      print_node(*n.lhs, out);
      out += ")";
      return;
    default: break;
  }
  const char* op = n.kind == Kind::Add ? " + " : n.kind == Kind::Subtract ? " - " : n.kind == Kind::Multiply ? " * " : " / ";
  out += "(";
  print_node(*n.lhs, out);
  out += op;
  print_node(*n.rhs, out);
  out += ")";
}

bool equal_nodes(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Number: return a.value == b.value;
    case Kind::Variable: return a.name == b.name;
    case Kind::Power: return a.value == b.value && equal_nodes(*a.lhs, *b.lhs);
    case Kind::Call: return a.func == b.func && equal_nodes(*a.lhs, *b.lhs);
    case Kind::Negate: return equal_nodes(*a.lhs, *b.lhs);
    default: return equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
  }
}

// Light folding so repeated differentiation does not blow up.
bool is_const(const NodePtr& n, double value) { return n->kind == Kind::Number && n->value == value; }

NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return make_binary(Kind::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return make_unary(Kind::Negate, std::move(b));
  return make_binary(Kind::Subtract, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_number(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return make_binary(Kind::Multiply, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return make_number(0.0);
  if (is_const(b, 1.0)) return a;
  return make_binary(Kind::Divide, std::move(a), std::move(b));
}

NodePtr neg(NodePtr a) {
  if (is_const(a, 0.0)) return a;
  return make_unary(Kind::Negate, std::move(a));
}

NodePtr diff_node(const NodePtr& n, std::string_view var) {
  switch (n->kind) {
    case Kind::Number: return make_number(0.0);
    case Kind::Variable: return make_number(n->name == var ? 1.0 : 0.0);
    case Kind::Negate: return neg(diff_node(n->lhs, var));
    case Kind::Add: return add(diff_node(n->lhs, var), diff_node(n->rhs, var));
    case Kind::Subtract: return sub(diff_node(n->lhs, var), diff_node(n->rhs, var));
    case Kind::Multiply:
      return add(mul(diff_node(n->lhs, var), n->rhs), mul(n->lhs, diff_node(n->rhs, var)));
    case Kind::Divide: {
      // (a/b)' = a'/b - a b' / b^2
      const NodePtr da = diff_node(n->lhs, var), db = diff_node(n->rhs, var);
      return sub(div(da, n->rhs), div(mul(n->lhs, db), make_power(n->rhs, 2.0)));
    }
    case Kind::Power: {
      const double k = n->value;
      if (k == 0.0) return make_number(0.0);
      const NodePtr inner = k == 2.0 ? n->lhs : make_power(n->lhs, k - 1.0);
      const NodePtr base = k == 1.0 ? make_number(1.0) : inner;
      return mul(mul(make_number(k), base), diff_node(n->lhs, var));
    }
    case Kind::Call: {
      const NodePtr& x = n->lhs;
      const NodePtr dx = diff_node(x, var);
      if (is_const(dx, 0.0)) return dx;
      NodePtr outer;
      switch (n->func) {
        case Func::Sin: outer = make_call(Func::Cos, x); break;
        case Func::Cos: outer = neg(make_call(Func::Sin, x)); break;
        case Func::Sinh: outer = make_call(Func::Cosh, x); break;
        case Func::Cosh: outer = make_call(Func::Sinh, x); break;
        case Func::Exp: outer = n; break;
      }
      return mul(outer, dx);
    }
  }
  return make_number(0.0);
}

class Parser {
 public:
  Parser(std::string_view text, const std::set<std::string>& params) : text_(text), params_(params) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character", {"operator", "end of input"});
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const {
    std::ostringstream msg;
    msg << what << " at offset " << pos_;
    if (!expected.empty()) msg << "; expected one of: " << join(expected);
    throw ParseError(msg.str(), pos_, std::move(expected));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make_binary(Kind::Add, lhs, term());
      else if (accept('-')) lhs = make_binary(Kind::Subtract, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make_binary(Kind::Multiply, lhs, unary());
      else if (accept('/')) lhs = make_binary(Kind::Divide, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (++depth_ > kMaxDepth) fail("expression nested too deeply", {});
    NodePtr out = accept('-') ? make_unary(Kind::Negate, unary()) : power();
    --depth_;
    return out;
  }

  NodePtr power() {
    NodePtr base = primary();
    if (!accept('^')) return base;
    const std::size_t at = pos_;
    const double k = exponent();
    if (!std::isfinite(k) || k != std::round(k) || std::abs(k) > 64) {
      pos_ = at;
      fail("exponent must be an integer constant with |k| <= 64", {"integer"});
    }
    return make_power(base, k);
  }

  // Exponents fold to a constant immediately; they may not mention variables.
  double exponent() {
    if (++depth_ > kMaxDepth) fail("expression nested too deeply", {});
    double out;
    if (accept('-')) {
      out = -exponent();
    } else {
      skip_space();
      const std::size_t at = pos_;
      const NodePtr p = power();
      if (!is_constant(*p)) {
        pos_ = at;
        fail("exponent must be an integer constant", {"integer"});
      }
      out = eval_node(*p, 0.0, 0.0, {});
    }
    --depth_;
    return out;
  }

  static bool is_constant(const Node& n) {
    switch (n.kind) {
      case Kind::Number: return true;
      case Kind::Variable: return false;
      case Kind::Negate:
      case Kind::Power:
      case Kind::Call: return is_constant(*n.lhs);
      default: return is_constant(*n.lhs) && is_constant(*n.rhs);
    }
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input", {"number", "identifier", "("});
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      if (++depth_ > kMaxDepth) fail("expression nested too deeply", {});
      NodePtr inner = expr();
      --depth_;
      if (!accept(')')) fail("unbalanced parenthesis", {")"});
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected character '") + c + "'", {"number", "identifier", "("});
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
      if (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) {
        pos_ = q;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || end != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number", {"number"});
    }
    return make_number(value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    Func f;
    if (lookup_func(name, f)) {
      if (!accept('(')) fail("expected '(' after function name", {"("});
      if (++depth_ > kMaxDepth) fail("expression nested too deeply", {});
      NodePtr arg = expr();
      --depth_;
      if (!accept(')')) fail("unbalanced parenthesis", {")"});
      return make_call(f, arg);
    }
    if (name == "u" || name == "v" || params_.count(name)) return make_variable(name);
    pos_ = start;
    std::vector<std::string> expected{"u", "v"};
    expected.insert(expected.end(), params_.begin(), params_.end());
    fail("unknown identifier '" + name + "'", expected);
  }

  static constexpr int kMaxDepth = 256;
  std::string_view text_;
  const std::set<std::string>& params_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t offset, std::vector<std::string> expected)
    : DomainError(message), offset_(offset), expected_(std::move(expected)) {}

Expr Expr::number(double value) { return Expr(make_number(value)); }
Expr Expr::variable(std::string name) { return Expr(make_variable(std::move(name))); }

double Expr::evaluate(double u, double v, const Parameters& params) const {
  if (!root_) throw DomainError("evaluating an empty expression");
  return eval_node(*root_, u, v, params);
}

std::string Expr::to_string() const {
  std::string out;
  if (root_) print_node(*root_, out);
  return out;
}

Expr Expr::derivative(std::string_view var) const {
  if (!root_) throw DomainError("differentiating an empty expression");
  return Expr(diff_node(root_, var));
}

bool operator==(const Expr& a, const Expr& b) {
  if (!a.root_ || !b.root_) return !a.root_ && !b.root_;
  return equal_nodes(*a.root_, *b.root_);
}

Expr parse_expression(std::string_view text, const std::set<std::string>& parameters) {
  return Expr(Parser(text, parameters).parse());
}

ImmersionExpr::ImmersionExpr(const std::array<std::string, kDim>& components, Parameters params)
    : params_(std::move(params)) {
  std::set<std::string> names;
  for (const auto& [k, _] : params_) names.insert(k);
  for (int i = 0; i < kDim; ++i) {
    try {
      components_[i] = parse_expression(components[i], names);
    } catch (const ParseError& err) {
      throw ParseError("component " + std::to_string(i + 1) + ": " + err.what(), err.offset(), err.expected());
    }
    du_[i] = components_[i].derivative("u");
    dv_[i] = components_[i].derivative("v");
    duu_[i] = du_[i].derivative("u");
    duv_[i] = du_[i].derivative("v");
    dvv_[i] = dv_[i].derivative("v");
  }
}

Vector7 ImmersionExpr::evaluate(double u, double v) const {
  Vector7 out;
  for (int i = 0; i < kDim; ++i) out[i] = components_[i].evaluate(u, v, params_);
  return out;
}

ImmersionExpr::Jet ImmersionExpr::exact_jet(double u, double v) const {
  Jet j;
  for (int i = 0; i < kDim; ++i) {
    j.f[i] = components_[i].evaluate(u, v, params_);
    j.fu[i] = du_[i].evaluate(u, v, params_);
    j.fv[i] = dv_[i].evaluate(u, v, params_);
    j.fuu[i] = duu_[i].evaluate(u, v, params_);
    j.fuv[i] = duv_[i].evaluate(u, v, params_);
    j.fvv[i] = dvv_[i].evaluate(u, v, params_);
  }
  return j;
}

}  // namespace g2lab
