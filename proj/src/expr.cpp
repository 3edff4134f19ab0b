#include "ridge/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>

#include "ridge/error.hpp"

namespace ridge {
namespace {

using Kind = Expr::Kind;
using Node = Expr::Node;
using NodePtr = Expr::NodePtr;

struct FuncName {
  const char* name;
  Func func;
};

constexpr FuncName kFunctions[] = {
    {"sin", Func::Sin}, {"cos", Func::Cos},   {"exp", Func::Exp},
    {"log", Func::Log}, {"sqrt", Func::Sqrt}, {"abs", Func::Abs},
};

const char* func_name(Func f) {
  for (const auto& entry : kFunctions) {
    if (entry.func == f) return entry.name;
  }
  return "?";
}

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->value = v;
  return n;
}

NodePtr make_variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->name = std::move(name);
  return n;
}

NodePtr make_unary(Kind kind, NodePtr operand, Func f = Func::Sin) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->func = f;
  n->lhs = std::move(operand);
  return n;
}

NodePtr make_binary(Kind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    skip_space();
    if (pos_ == src_.size()) throw ParseError("empty expression", 0);
    NodePtr e = sum();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Kind::Add, lhs, product());
      } else if (accept('-')) {
        lhs = make_binary(Kind::Sub, lhs, product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr product() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Kind::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make_binary(Kind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_unary(Kind::Negate, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make_binary(Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ == src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c >= 'a' && c <= 'z') return name();
    if (accept('(')) {
      NodePtr inner = sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t k = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++k;
      }
      return k;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent");
    }
    const std::string text(src_.substr(start, pos_ - start));
    const double v = std::strtod(text.c_str(), nullptr);
    if (!std::isfinite(v)) {
      pos_ = start;
      fail("number out of range");
    }
    return make_number(v);
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if ((c >= 'a' && c <= 'z') || std::isdigit(static_cast<unsigned char>(c)) || c == '_') {
        ++pos_;
      } else {
        break;
      }
    }
    std::string id(src_.substr(start, pos_ - start));
    const auto known = std::find_if(std::begin(kFunctions), std::end(kFunctions),
                                    [&](const FuncName& f) { return id == f.name; });
    skip_space();
    const bool call = pos_ < src_.size() && src_[pos_] == '(';
    if (call) {
      if (known == std::end(kFunctions)) {
        pos_ = start;
        fail("unknown function '" + id + "'");
      }
      ++pos_;
      NodePtr arg = sum();
      if (!accept(')')) fail("expected ')'");
      return make_unary(Kind::Call, arg, known->func);
    }
    if (known != std::end(kFunctions)) {
      pos_ = start;
      fail("function '" + id + "' requires an argument");
    }
    return make_variable(std::move(id));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print(const Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::Number:
      out += format_number(n.value);
      return;
    case Kind::Variable:
      out += n.name;
      return;
    case Kind::Negate:
      out += "(-";
      print(*n.lhs, out);
      out += ')';
      return;
    case Kind::Call:
      out += func_name(n.func);
      out += '(';
      print(*n.lhs, out);
      out += ')';
      return;
    default:
      break;
  }
  static constexpr const char* kOps = "+-*/^";
  const char op = kOps[static_cast<int>(n.kind) - static_cast<int>(Kind::Add)];
  out += '(';
  print(*n.lhs, out);
  out += ' ';
  out += op;
  out += ' ';
  print(*n.rhs, out);
  out += ')';
}

void collect(const Node& n, std::set<std::string>& names) {
  if (n.kind == Kind::Variable) names.insert(n.name);
  if (n.lhs) collect(*n.lhs, names);
  if (n.rhs) collect(*n.rhs, names);
}

bool equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Number:
      return a.value == b.value;
    case Kind::Variable:
      return a.name == b.name;
    case Kind::Call:
      if (a.func != b.func) return false;
      break;
    default:
      break;
  }
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
  if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  if (a.lhs && !equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !equal(*a.rhs, *b.rhs)) return false;
  return true;
}

std::string describe(const Node& n) {
  std::string s;
  print(n, s);
  return s;
}

[[noreturn]] void domain_error(const std::string& what, const Node& n) {
  throw EvalError(what + " in " + describe(n));
}

double apply_func(Func f, double x, const Node& n) {
  switch (f) {
    case Func::Sin:
      return std::sin(x);
    case Func::Cos:
      return std::cos(x);
    case Func::Exp:
      return std::exp(x);
    case Func::Log:
      if (!(x > 0.0)) domain_error("log of nonpositive value", n);
      return std::log(x);
    case Func::Sqrt:
      if (x < 0.0) domain_error("sqrt of negative value", n);
      return std::sqrt(x);
    case Func::Abs:
      return std::fabs(x);
  }
  return 0.0;
}

double apply_binary(Kind k, double a, double b, const Node& n) {
  switch (k) {
    case Kind::Add:
      return a + b;
    case Kind::Sub:
      return a - b;
    case Kind::Mul:
      return a * b;
    case Kind::Div:
      if (b == 0.0) domain_error("division by zero", n);
      return a / b;
    case Kind::Pow:
      if (a < 0.0 && b != std::trunc(b)) domain_error("negative base with non-integer exponent", n);
      if (a == 0.0 && b < 0.0) domain_error("division by zero", n);
      return std::pow(a, b);
    default:
      return 0.0;
  }
}

double checked(double v, const Node& n) {
  if (!std::isfinite(v)) domain_error("non-finite result", n);
  return v;
}

double eval_node(const Node& n, const std::map<std::string, double>& bindings) {
  switch (n.kind) {
    case Kind::Number:
      return n.value;
    case Kind::Variable: {
      const auto it = bindings.find(n.name);
      if (it == bindings.end()) throw EvalError("unbound variable '" + n.name + "'");
      return it->second;
    }
    case Kind::Negate:
      return -eval_node(*n.lhs, bindings);
    case Kind::Call:
      return checked(apply_func(n.func, eval_node(*n.lhs, bindings), n), n);
    default:
      return checked(
          apply_binary(n.kind, eval_node(*n.lhs, bindings), eval_node(*n.rhs, bindings), n), n);
  }
}

}  // namespace

Expr parse(std::string_view source) { return Expr(Parser(source).parse_all()); }

std::string Expr::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

std::vector<std::string> Expr::free_variables() const {
  std::set<std::string> names;
  collect(*root_, names);
  return {names.begin(), names.end()};
}

bool Expr::is_literal_one() const { return root_->kind == Kind::Number && root_->value == 1.0; }

bool Expr::structurally_equal(const Expr& other) const { return equal(*root_, *other.root_); }

double eval(const Expr& e, const std::map<std::string, double>& bindings) {
  return eval_node(e.root(), bindings);
}

CompiledExpr::CompiledExpr(const Expr& e, std::span<const std::string> slots) : source_(e) {
  std::size_t depth = 0;
  auto emit = [&](auto&& self, const Node& n) -> void {
    Op op{n.kind, n.value, 0, n.func, &n};
    if (n.kind == Kind::Variable) {
      const auto it = std::find(slots.begin(), slots.end(), n.name);
      if (it == slots.end()) throw EvalError("unbound variable '" + n.name + "'");
      op.slot = static_cast<std::size_t>(it - slots.begin());
    }
    if (n.lhs) self(self, *n.lhs);
    if (n.rhs) self(self, *n.rhs);
    code_.push_back(op);
    if (n.kind == Kind::Number || n.kind == Kind::Variable) {
      ++depth;
      max_depth_ = std::max(max_depth_, depth);
    } else if (n.rhs) {
      --depth;
    }
  };
  emit(emit, e.root());
}

double CompiledExpr::operator()(std::span<const double> point) const {
  constexpr std::size_t kInline = 32;
  double inline_stack[kInline] = {};
  std::vector<double> heap_stack;
  double* stack = inline_stack;
  if (max_depth_ > kInline) {
    heap_stack.resize(max_depth_);
    stack = heap_stack.data();
  }
  std::size_t top = 0;
  for (const Op& op : code_) {
    switch (op.kind) {
      case Kind::Number:
        stack[top++] = op.value;
        break;
      case Kind::Variable:
        stack[top++] = point[op.slot];
        break;
      case Kind::Negate:
        stack[top - 1] = -stack[top - 1];
        break;
      case Kind::Call:
        stack[top - 1] = checked(apply_func(op.func, stack[top - 1], *op.node), *op.node);
        break;
      default: {
        const double b = stack[--top];
        stack[top - 1] = checked(apply_binary(op.kind, stack[top - 1], b, *op.node), *op.node);
        break;
      }
    }
  }
  return stack[0];
}

}  // namespace ridge
