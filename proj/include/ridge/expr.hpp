#pragma once

// Scalar arithmetic expressions over named real variables.
//
// Grammar (whitespace ignored):
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | name | func '(' sum ')' | '(' sum ')'
//   name    := [a-z][a-z0-9_]*
//   func    := sin | cos | exp | log | sqrt | abs
//   number  := digits ['.' digits] [('e'|'E') ['+'|'-'] digits]

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ridge {

enum class Func { Sin, Cos, Exp, Log, Sqrt, Abs };

class Expr {
 public:
  enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Node {
    Kind kind;
    double value = 0.0;  // Number
    std::string name;    // Variable
    Func func = Func::Sin;
    NodePtr lhs;  // operand for Negate / Call
    NodePtr rhs;
  };

  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }

  /// Fully parenthesized text that parses back to the same tree.
  std::string to_string() const;

  /// Sorted, deduplicated variable names.
  std::vector<std::string> free_variables() const;

  /// True when the tree is the literal 1.
  bool is_literal_one() const;

  bool structurally_equal(const Expr& other) const;

 private:
  NodePtr root_;
};

Expr parse(std::string_view source);

/// Evaluates with a name-to-value map. Throws EvalError on an unbound variable
/// or a domain error.
double eval(const Expr& e, const std::map<std::string, double>& bindings);

inline std::vector<std::string> free_variables(const Expr& e) { return e.free_variables(); }

/// Expression with variable names resolved to slots once, for repeated
/// evaluation at many points. Immutable and safe to call concurrently.
class CompiledExpr {
 public:
  /// `slots[k]` names the variable read from `point[k]`. Every free variable
  /// of `e` must appear in `slots`.
  CompiledExpr(const Expr& e, std::span<const std::string> slots);

  double operator()(std::span<const double> point) const;

  const Expr& source() const { return source_; }

 private:
  struct Op {
    Expr::Kind kind;
    double value;
    std::size_t slot;
    Func func;
    const Expr::Node* node;  // for error messages
  };

  Expr source_;
  std::vector<Op> code_;  // postfix
  std::size_t max_depth_ = 0;
};

}  // namespace ridge
