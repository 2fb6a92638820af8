// Small expression language for immersion components.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' exponent)?        right-associative
//   exponent:= '-' exponent | power           must fold to an integer constant
//   primary := number | identifier | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | sinh | cosh | exp
//
// Identifiers are u, v and named parameters bound at evaluation time.
#pragma once

#include <array>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "g2lab/algebra.hpp"

namespace g2lab {

class ParseError : public DomainError {
 public:
  ParseError(const std::string& message, std::size_t offset, std::vector<std::string> expected);

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

using Parameters = std::map<std::string, double>;

class Expr {
 public:
  enum class Kind { Number, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Call };
  enum class Func { Sin, Cos, Sinh, Cosh, Exp };

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  struct Node {
    Kind kind;
    double value = 0.0;  // Number, or the integer exponent of Power
    std::string name;    // Variable
    Func func = Func::Sin;
    NodePtr lhs;
    NodePtr rhs;
  };

  Expr() = default;
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  static Expr number(double value);
  static Expr variable(std::string name);

  double evaluate(double u, double v, const Parameters& params = {}) const;
  /// Fully parenthesised text that parses back to the same tree.
  std::string to_string() const;
  /// Symbolic partial derivative with respect to "u" or "v".
  Expr derivative(std::string_view var) const;

  const Node& root() const { return *root_; }
  bool empty() const { return !root_; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  NodePtr root_;
};

/// Parses text; identifiers other than u, v must appear in `parameters`.
Expr parse_expression(std::string_view text, const std::set<std::string>& parameters = {});

/// Seven component expressions plus their parameter bindings.
class ImmersionExpr {
 public:
  ImmersionExpr(const std::array<std::string, kDim>& components, Parameters params);

  Vector7 evaluate(double u, double v) const;
  const Expr& component(int i) const { return components_.at(i); }
  const Parameters& parameters() const { return params_; }

  /// Exact first and second partials from symbolic differentiation.
  struct Jet {
    Vector7 f, fu, fv, fuu, fuv, fvv;
  };
  Jet exact_jet(double u, double v) const;

 private:
  std::array<Expr, kDim> components_;
  std::array<Expr, kDim> du_, dv_, duu_, duv_, dvv_;
  Parameters params_;
};

}  // namespace g2lab
