#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mapgeo/errors.hpp"

namespace mapgeo {

/// Shared, immutable list of coordinate names an expression may reference.
using VarList = std::shared_ptr<const std::vector<std::string>>;

VarList make_vars(std::vector<std::string> names);

namespace detail {
struct Node;
using NodePtr = std::shared_ptr<const Node>;
}  // namespace detail

/// Immutable scalar expression over a fixed coordinate list.
///
/// Supports exact symbolic differentiation to any order; evaluation is plain
/// IEEE double arithmetic.  Instances are value types backed by shared
/// immutable AST nodes, so copies are cheap and concurrent evaluation from
/// multiple threads is safe.
class Expression {
 public:
  Expression() = default;  // empty; most operations require a parsed value

  static Expression constant(double value, VarList vars);
  static Expression variable(int index, VarList vars);

  /// Parses source text against the given coordinate names.
  ///
  /// Grammar (in precedence order, '^' binds tightest and associates right):
  ///   sum     := product (('+'|'-') product)*
  ///   product := unary (('*'|'/') unary)*
  ///   unary   := '-' unary | power
  ///   power   := atom ('^' unary)?
  ///   atom    := number | name | name '(' sum ')' | '(' sum ')'
  /// Builtin functions: sin cos tan exp log sqrt sinh cosh tanh.
  /// Builtin constant: pi.
  /// Throws SyntaxError / UnknownIdentifier.
  static Expression parse(const std::string& source, VarList vars);

  bool valid() const { return root_ != nullptr; }
  const VarList& vars() const { return vars_; }
  int num_vars() const;

  /// Evaluates at a point given in coordinate order.  Throws DomainError for
  /// log of a non-positive value, division by an exact zero, sqrt of a
  /// negative value, or a forbidden power; the error names the subterm.
  double evaluate(std::span<const double> point) const;

  /// Exact symbolic partial derivative with constant folding applied.
  Expression derivative(int var) const;
  Expression derivative(const std::string& name) const;

  /// Returns an equivalent expression with constant subtrees folded.
  Expression folded() const;

  /// Renders to source text that reparses to a structurally equal tree.
  std::string unparse() const;

  /// Structural equality (same tree shape, identical constants).
  bool same_structure(const Expression& other) const;

  /// True when the expression is the literal constant `value`.
  bool is_constant(double value) const;

  /// Rebuilds the expression over a new coordinate list; old variable i
  /// becomes new variable index_map[i].
  Expression remapped(VarList new_vars, const std::vector<int>& index_map) const;

  // Arithmetic on expressions over the same coordinate list (folds constants).
  friend Expression operator+(const Expression&, const Expression&);
  friend Expression operator-(const Expression&, const Expression&);
  friend Expression operator*(const Expression&, const Expression&);
  friend Expression operator/(const Expression&, const Expression&);
  friend Expression operator-(const Expression&);
  friend Expression pow(const Expression& base, const Expression& exponent);
  friend Expression pow(const Expression& base, double exponent);

  enum class Fn { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh };
  friend Expression apply(Fn fn, const Expression& argument);

 private:
  Expression(detail::NodePtr root, VarList vars)
      : root_(std::move(root)), vars_(std::move(vars)) {}

  detail::NodePtr root_;
  VarList vars_;
};

}  // namespace mapgeo
