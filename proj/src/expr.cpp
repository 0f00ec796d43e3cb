#include "mapgeo/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace mapgeo {

VarList make_vars(std::vector<std::string> names) {
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

namespace detail {

enum class Kind { Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

struct Node {
  Kind kind;
  double value = 0.0;          // Constant
  int var = -1;                // Variable
  Expression::Fn fn{};         // Call
  NodePtr a, b;                // children; only `a` for Neg/Call
};

namespace {

NodePtr raw(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr constant(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = v;
  return n;
}

NodePtr variable(int i) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->var = i;
  return n;
}

NodePtr call_raw(Expression::Fn fn, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->fn = fn;
  n->a = std::move(a);
  return n;
}

bool is_const(const NodePtr& n, double v) {
  return n->kind == Kind::Constant && n->value == v;
}

bool is_const(const NodePtr& n) { return n->kind == Kind::Constant; }

double eval_fn(Expression::Fn fn, double x) {
  using Fn = Expression::Fn;
  switch (fn) {
    case Fn::Sin: return std::sin(x);
    case Fn::Cos: return std::cos(x);
    case Fn::Tan: return std::tan(x);
    case Fn::Exp: return std::exp(x);
    case Fn::Log: return std::log(x);
    case Fn::Sqrt: return std::sqrt(x);
    case Fn::Sinh: return std::sinh(x);
    case Fn::Cosh: return std::cosh(x);
    case Fn::Tanh: return std::tanh(x);
  }
  return 0.0;
}

const char* fn_name(Expression::Fn fn) {
  using Fn = Expression::Fn;
  switch (fn) {
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Tan: return "tan";
    case Fn::Exp: return "exp";
    case Fn::Log: return "log";
    case Fn::Sqrt: return "sqrt";
    case Fn::Sinh: return "sinh";
    case Fn::Cosh: return "cosh";
    case Fn::Tanh: return "tanh";
  }
  return "?";
}

bool fn_defined_at(Expression::Fn fn, double x) {
  using Fn = Expression::Fn;
  if (fn == Fn::Log) return x > 0.0;
  if (fn == Fn::Sqrt) return x >= 0.0;
  return true;
}

// Folding constructors.  These keep derivative output small; they never
// change the value of a defined evaluation.

NodePtr add(NodePtr l, NodePtr r);
NodePtr sub(NodePtr l, NodePtr r);
NodePtr mul(NodePtr l, NodePtr r);
NodePtr divide(NodePtr l, NodePtr r);
NodePtr power(NodePtr l, NodePtr r);
NodePtr neg(NodePtr x);
NodePtr call(Expression::Fn fn, NodePtr a);

NodePtr add(NodePtr l, NodePtr r) {
  if (is_const(l) && is_const(r)) return constant(l->value + r->value);
  if (is_const(l, 0.0)) return r;
  if (is_const(r, 0.0)) return l;
  return raw(Kind::Add, std::move(l), std::move(r));
}

NodePtr sub(NodePtr l, NodePtr r) {
  if (is_const(l) && is_const(r)) return constant(l->value - r->value);
  if (is_const(r, 0.0)) return l;
  if (is_const(l, 0.0)) return neg(std::move(r));
  return raw(Kind::Sub, std::move(l), std::move(r));
}

NodePtr mul(NodePtr l, NodePtr r) {
  if (is_const(l) && is_const(r)) return constant(l->value * r->value);
  if (is_const(l, 0.0) || is_const(r, 0.0)) return constant(0.0);
  if (is_const(l, 1.0)) return r;
  if (is_const(r, 1.0)) return l;
  return raw(Kind::Mul, std::move(l), std::move(r));
}

NodePtr divide(NodePtr l, NodePtr r) {
  if (is_const(l) && is_const(r) && r->value != 0.0)
    return constant(l->value / r->value);
  if (is_const(l, 0.0)) return constant(0.0);
  if (is_const(r, 1.0)) return l;
  return raw(Kind::Div, std::move(l), std::move(r));
}

NodePtr power(NodePtr l, NodePtr r) {
  if (is_const(r, 1.0)) return l;
  if (is_const(r, 0.0)) return constant(1.0);
  if (is_const(l) && is_const(r)) {
    double v = std::pow(l->value, r->value);
    if (std::isfinite(v)) return constant(v);
  }
  return raw(Kind::Pow, std::move(l), std::move(r));
}

NodePtr neg(NodePtr x) {
  if (is_const(x)) return constant(-x->value);
  if (x->kind == Kind::Neg) return x->a;
  return raw(Kind::Neg, std::move(x));
}

NodePtr call(Expression::Fn fn, NodePtr a) {
  if (is_const(a) && fn_defined_at(fn, a->value)) {
    double v = eval_fn(fn, a->value);
    if (std::isfinite(v)) return constant(v);
  }
  return call_raw(fn, std::move(a));
}

using Names = std::vector<std::string>;

std::string unparse_node(const Node* n, const Names* names);

[[noreturn]] void domain_error(const std::string& message, const Node* term,
                               const Names* names) {
  throw DomainError(message, unparse_node(term, names));
}

double eval_node(const Node* n, std::span<const double> p, const Names* names) {
  switch (n->kind) {
    case Kind::Constant: return n->value;
    case Kind::Variable: return p[static_cast<std::size_t>(n->var)];
    case Kind::Neg: return -eval_node(n->a.get(), p, names);
    case Kind::Add:
      return eval_node(n->a.get(), p, names) + eval_node(n->b.get(), p, names);
    case Kind::Sub:
      return eval_node(n->a.get(), p, names) - eval_node(n->b.get(), p, names);
    case Kind::Mul:
      return eval_node(n->a.get(), p, names) * eval_node(n->b.get(), p, names);
    case Kind::Div: {
      double num = eval_node(n->a.get(), p, names);
      double den = eval_node(n->b.get(), p, names);
      if (den == 0.0) domain_error("division by zero", n, names);
      return num / den;
    }
    case Kind::Pow: {
      double base = eval_node(n->a.get(), p, names);
      double ex = eval_node(n->b.get(), p, names);
      if (base == 0.0 && ex < 0.0)
        domain_error("zero raised to a negative power", n, names);
      if (base < 0.0 && ex != std::floor(ex))
        domain_error("negative base raised to a non-integer power", n, names);
      return std::pow(base, ex);
    }
    case Kind::Call: {
      double x = eval_node(n->a.get(), p, names);
      if (n->fn == Expression::Fn::Log && x <= 0.0)
        domain_error("log of a non-positive value", n, names);
      if (n->fn == Expression::Fn::Sqrt && x < 0.0)
        domain_error("sqrt of a negative value", n, names);
      return eval_fn(n->fn, x);
    }
  }
  return 0.0;
}

NodePtr diff_node(const NodePtr& n, int var) {
  using Fn = Expression::Fn;
  switch (n->kind) {
    case Kind::Constant: return constant(0.0);
    case Kind::Variable: return constant(n->var == var ? 1.0 : 0.0);
    case Kind::Neg: return neg(diff_node(n->a, var));
    case Kind::Add: return add(diff_node(n->a, var), diff_node(n->b, var));
    case Kind::Sub: return sub(diff_node(n->a, var), diff_node(n->b, var));
    case Kind::Mul:
      return add(mul(diff_node(n->a, var), n->b), mul(n->a, diff_node(n->b, var)));
    case Kind::Div:
      // (f/g)' = (f'g - fg') / g^2
      return divide(sub(mul(diff_node(n->a, var), n->b), mul(n->a, diff_node(n->b, var))),
                    power(n->b, constant(2.0)));
    case Kind::Pow: {
      NodePtr f = n->a, g = n->b;
      NodePtr df = diff_node(f, var), dg = diff_node(g, var);
      if (is_const(g)) {
        // (f^c)' = c f^(c-1) f'
        return mul(mul(g, power(f, constant(g->value - 1.0))), df);
      }
      // General: f^g (g' log f + g f'/f)
      return mul(power(f, g),
                 add(mul(dg, call(Fn::Log, f)), mul(g, divide(df, f))));
    }
    case Kind::Call: {
      NodePtr x = n->a;
      NodePtr dx = diff_node(x, var);
      NodePtr outer;
      switch (n->fn) {
        case Fn::Sin: outer = call(Fn::Cos, x); break;
        case Fn::Cos: outer = neg(call(Fn::Sin, x)); break;
        case Fn::Tan:
          outer = divide(constant(1.0), power(call(Fn::Cos, x), constant(2.0)));
          break;
        case Fn::Exp: outer = call(Fn::Exp, x); break;
        case Fn::Log: outer = divide(constant(1.0), x); break;
        case Fn::Sqrt:
          outer = divide(constant(1.0), mul(constant(2.0), call(Fn::Sqrt, x)));
          break;
        case Fn::Sinh: outer = call(Fn::Cosh, x); break;
        case Fn::Cosh: outer = call(Fn::Sinh, x); break;
        case Fn::Tanh:
          outer = divide(constant(1.0), power(call(Fn::Cosh, x), constant(2.0)));
          break;
      }
      return mul(outer, dx);
    }
  }
  return constant(0.0);
}

NodePtr fold_node(const NodePtr& n) {
  switch (n->kind) {
    case Kind::Constant:
    case Kind::Variable: return n;
    case Kind::Neg: return neg(fold_node(n->a));
    case Kind::Add: return add(fold_node(n->a), fold_node(n->b));
    case Kind::Sub: return sub(fold_node(n->a), fold_node(n->b));
    case Kind::Mul: return mul(fold_node(n->a), fold_node(n->b));
    case Kind::Div: return divide(fold_node(n->a), fold_node(n->b));
    case Kind::Pow: return power(fold_node(n->a), fold_node(n->b));
    case Kind::Call: return call(n->fn, fold_node(n->a));
  }
  return n;
}

// Precedence levels used by both the parser and the unparser.
constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecUnary = 3;
constexpr int kPrecPow = 4;
constexpr int kPrecAtom = 5;

int precedence(const Node* n) {
  switch (n->kind) {
    case Kind::Add:
    case Kind::Sub: return kPrecAdd;
    case Kind::Mul:
    case Kind::Div: return kPrecMul;
    case Kind::Neg: return kPrecUnary;
    case Kind::Pow: return kPrecPow;
    default: return kPrecAtom;
  }
}

std::string format_constant(double v) {
  // Moderate integers print without an exponent.
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char plain[40];
    std::snprintf(plain, sizeof(plain), "%.0f", v);
    return plain;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // Trim to the shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(shorter, "%lf", &back);
    if (back == v) return shorter;
  }
  return buf;
}

void unparse_into(const Node* n, const Names* names, std::string& out);

void child(const Node* c, int min_prec, const Names* names, std::string& out) {
  if (precedence(c) < min_prec) {
    out += '(';
    unparse_into(c, names, out);
    out += ')';
  } else {
    unparse_into(c, names, out);
  }
}

void unparse_into(const Node* n, const Names* names, std::string& out) {
  switch (n->kind) {
    case Kind::Constant: out += format_constant(n->value); return;
    case Kind::Variable:
      if (names) out += (*names)[static_cast<std::size_t>(n->var)];
      else out += "x" + std::to_string(n->var);
      return;
    case Kind::Neg:
      out += '-';
      child(n->a.get(), kPrecUnary, names, out);
      return;
    case Kind::Add:
      child(n->a.get(), kPrecAdd, names, out);
      out += " + ";
      child(n->b.get(), kPrecAdd + 1, names, out);
      return;
    case Kind::Sub:
      child(n->a.get(), kPrecAdd, names, out);
      out += " - ";
      child(n->b.get(), kPrecAdd + 1, names, out);
      return;
    case Kind::Mul:
      child(n->a.get(), kPrecMul, names, out);
      out += "*";
      child(n->b.get(), kPrecMul + 1, names, out);
      return;
    case Kind::Div:
      child(n->a.get(), kPrecMul, names, out);
      out += "/";
      child(n->b.get(), kPrecMul + 1, names, out);
      return;
    case Kind::Pow:
      child(n->a.get(), kPrecAtom, names, out);
      out += "^";
      child(n->b.get(), kPrecUnary, names, out);
      return;
    case Kind::Call:
      out += fn_name(n->fn);
      out += '(';
      unparse_into(n->a.get(), names, out);
      out += ')';
      return;
  }
}

std::string unparse_node(const Node* n, const Names* names) {
  std::string out;
  unparse_into(n, names, out);
  return out;
}

bool same_node(const Node* a, const Node* b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Constant: return a->value == b->value;
    case Kind::Variable: return a->var == b->var;
    case Kind::Neg: return same_node(a->a.get(), b->a.get());
    case Kind::Call:
      return a->fn == b->fn && same_node(a->a.get(), b->a.get());
    default:
      return same_node(a->a.get(), b->a.get()) && same_node(a->b.get(), b->b.get());
  }
}

NodePtr remap_node(const NodePtr& n, const std::vector<int>& index_map) {
  switch (n->kind) {
    case Kind::Constant: return n;
    case Kind::Variable: {
      int mapped = index_map.at(static_cast<std::size_t>(n->var));
      return variable(mapped);
    }
    case Kind::Neg: return raw(Kind::Neg, remap_node(n->a, index_map));
    case Kind::Call: return call_raw(n->fn, remap_node(n->a, index_map));
    default:
      return raw(n->kind, remap_node(n->a, index_map), remap_node(n->b, index_map));
  }
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over a token stream.

struct Parser {
  const std::string& src;
  const std::vector<std::string>& vars;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  NodePtr parse_sum() {
    NodePtr left = parse_product();
    for (;;) {
      if (eat('+')) left = raw(Kind::Add, left, parse_product());
      else if (eat('-')) left = raw(Kind::Sub, left, parse_product());
      else return left;
    }
  }

  NodePtr parse_product() {
    NodePtr left = parse_unary();
    for (;;) {
      if (eat('*')) left = raw(Kind::Mul, left, parse_unary());
      else if (eat('/')) left = raw(Kind::Div, left, parse_unary());
      else return left;
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) return raw(Kind::Neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (eat('^')) return raw(Kind::Pow, base, parse_unary());
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos >= src.size()) throw SyntaxError(pos, "unexpected end of input");
    char c = src[pos];
    if (c == '(') {
      ++pos;
      NodePtr inner = parse_sum();
      if (!eat(')')) throw SyntaxError(pos, "expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
    throw SyntaxError(pos, std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    std::size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos < src.size() && src[pos] == '.') {
      ++pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      std::size_t mark = pos;
      ++pos;
      if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
      if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      } else {
        pos = mark;  // 'e' belongs to a following identifier, not this literal
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src.data() + start, src.data() + pos, value);
    if (ec != std::errc() || ptr != src.data() + pos)
      throw SyntaxError(start, "malformed number literal");
    return constant(value);
  }

  NodePtr parse_name() {
    std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    std::string name = src.substr(start, pos - start);

    static const std::pair<const char*, Expression::Fn> kFns[] = {
        {"sin", Expression::Fn::Sin},   {"cos", Expression::Fn::Cos},
        {"tan", Expression::Fn::Tan},   {"exp", Expression::Fn::Exp},
        {"log", Expression::Fn::Log},   {"sqrt", Expression::Fn::Sqrt},
        {"sinh", Expression::Fn::Sinh}, {"cosh", Expression::Fn::Cosh},
        {"tanh", Expression::Fn::Tanh}};
    for (const auto& [fname, fn] : kFns) {
      if (name == fname) {
        if (!eat('(')) throw SyntaxError(pos, "expected '(' after function name");
        NodePtr arg = parse_sum();
        if (!eat(')')) throw SyntaxError(pos, "expected ')'");
        return call_raw(fn, arg);
      }
    }
    if (name == "pi") return constant(M_PI);
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == name) return variable(static_cast<int>(i));
    throw UnknownIdentifier(name);
  }
};

}  // namespace
}  // namespace detail

using detail::Node;
using detail::NodePtr;

Expression Expression::constant(double value, VarList vars) {
  return Expression(detail::constant(value), std::move(vars));
}

Expression Expression::variable(int index, VarList vars) {
  if (!vars || index < 0 || index >= static_cast<int>(vars->size()))
    throw ShapeMismatch("variable index out of range");
  return Expression(detail::variable(index), std::move(vars));
}

Expression Expression::parse(const std::string& source, VarList vars) {
  if (!vars) throw ShapeMismatch("expression requires a coordinate list");
  detail::Parser parser{source, *vars};
  NodePtr root = parser.parse_sum();
  parser.skip_ws();
  if (parser.pos != source.size())
    throw SyntaxError(parser.pos, "unexpected trailing input");
  return Expression(std::move(root), std::move(vars));
}

int Expression::num_vars() const {
  return vars_ ? static_cast<int>(vars_->size()) : 0;
}

double Expression::evaluate(std::span<const double> point) const {
  if (!root_) throw ShapeMismatch("evaluating an empty expression");
  if (static_cast<int>(point.size()) != num_vars())
    throw ShapeMismatch("point dimension does not match coordinate list");
  return detail::eval_node(root_.get(), point, vars_.get());
}

Expression Expression::derivative(int var) const {
  if (!root_) throw ShapeMismatch("differentiating an empty expression");
  if (var < 0 || var >= num_vars()) throw ShapeMismatch("derivative index out of range");
  return Expression(detail::diff_node(root_, var), vars_);
}

Expression Expression::derivative(const std::string& name) const {
  for (std::size_t i = 0; i < vars_->size(); ++i)
    if ((*vars_)[i] == name) return derivative(static_cast<int>(i));
  throw UnknownIdentifier(name);
}

Expression Expression::folded() const {
  if (!root_) return *this;
  return Expression(detail::fold_node(root_), vars_);
}

std::string Expression::unparse() const {
  if (!root_) return "";
  return detail::unparse_node(root_.get(), vars_.get());
}

bool Expression::same_structure(const Expression& other) const {
  if (!root_ || !other.root_) return root_ == other.root_;
  return detail::same_node(root_.get(), other.root_.get());
}

bool Expression::is_constant(double value) const {
  return root_ && detail::is_const(root_, value);
}

Expression Expression::remapped(VarList new_vars, const std::vector<int>& index_map) const {
  if (!root_) return *this;
  for (int idx : index_map)
    if (idx < 0 || idx >= static_cast<int>(new_vars->size()))
      throw ShapeMismatch("remap index out of range");
  return Expression(detail::remap_node(root_, index_map), std::move(new_vars));
}

namespace {
void require_same_vars(const Expression& a, const Expression& b) {
  if (a.vars() != b.vars() && (!a.vars() || !b.vars() || *a.vars() != *b.vars()))
    throw ShapeMismatch("expressions are over different coordinate lists");
}
}  // namespace

Expression operator+(const Expression& a, const Expression& b) {
  require_same_vars(a, b);
  return Expression(detail::add(a.root_, b.root_), a.vars_);
}

Expression operator-(const Expression& a, const Expression& b) {
  require_same_vars(a, b);
  return Expression(detail::sub(a.root_, b.root_), a.vars_);
}

Expression operator*(const Expression& a, const Expression& b) {
  require_same_vars(a, b);
  return Expression(detail::mul(a.root_, b.root_), a.vars_);
}

Expression operator/(const Expression& a, const Expression& b) {
  require_same_vars(a, b);
  return Expression(detail::divide(a.root_, b.root_), a.vars_);
}

Expression operator-(const Expression& a) {
  return Expression(detail::neg(a.root_), a.vars_);
}

Expression pow(const Expression& base, const Expression& exponent) {
  require_same_vars(base, exponent);
  return Expression(detail::power(base.root_, exponent.root_), base.vars_);
}

Expression pow(const Expression& base, double exponent) {
  return Expression(detail::power(base.root_, detail::constant(exponent)), base.vars_);
}

Expression apply(Expression::Fn fn, const Expression& argument) {
  return Expression(detail::call(fn, argument.root_), argument.vars_);
}

}  // namespace mapgeo
