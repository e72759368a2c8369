#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace stlopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/* Atomic predicate mu := h(x) >= 0 with a smooth h and its exact gradient. */
struct Predicate {
  std::string name;
  std::function<double(const Vec&)> h;
  std::function<Vec(const Vec&)> grad;
};

/* Predicate for -h (used when negation is pushed onto a leaf). */
Predicate negate(const Predicate& p);

/* Inclusive integer time-step interval [lo, hi], 0 <= lo <= hi. */
struct Interval {
  int lo = 0;
  int hi = 0;
};

enum class Op { Pred, Not, And, Or, Always, Eventually, Until };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/* Immutable formula AST. And/Or are n-ary (>= 2 children); Not has one
 * child; Always/Eventually one child plus an interval; Until two children
 * plus an interval. */
struct Formula {
  Op op = Op::Pred;
  Predicate pred;                   // Op::Pred only
  Interval interval;                // temporal operators only
  std::vector<FormulaPtr> children; // empty for Op::Pred
};

FormulaPtr make_pred(Predicate p);
FormulaPtr make_not(FormulaPtr f);
FormulaPtr make_and(std::vector<FormulaPtr> fs);
FormulaPtr make_or(std::vector<FormulaPtr> fs);
FormulaPtr make_always(Interval i, FormulaPtr f);
FormulaPtr make_eventually(Interval i, FormulaPtr f);
FormulaPtr make_until(Interval i, FormulaPtr lhs, FormulaPtr rhs);

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  size_t position;
};

/* Looks up a predicate by name; throws std::out_of_range if unknown. */
using PredicateLookup = std::function<Predicate(const std::string&)>;

/* Parses formula text. Grammar, loosest to tightest binding:
 *   or_expr    := and_expr ('or' and_expr)*
 *   and_expr   := until_expr ('and' until_expr)*
 *   until_expr := unary ('U' '[' int ',' int ']' until_expr)?
 *   unary      := 'not' unary | 'G[a,b]' unary | 'F[a,b]' unary
 *               | '(' or_expr ')' | identifier
 * 'and'/'or' chains flatten into a single n-ary node. */
FormulaPtr parse(const std::string& text, const PredicateLookup& lookup);

/* Negation normal form: no Not nodes remain; negations land on predicates
 * as sign flips. Not over Until is rejected (std::invalid_argument). */
FormulaPtr to_nnf(const FormulaPtr& f);

/* Largest time index the formula can reference relative to t = 0. */
int horizon(const Formula& f);

struct Trajectory {
  Mat states;  // n x (T+1)
  Mat inputs;  // m x (T+1)
  int T = 0;
};

/* Discrete robustness rho^phi(x, t) with exact min/max. Until evaluates
 * the left child over t..t'-1 and the right child at t'. Throws
 * std::out_of_range if t + horizon(f) > x.T. */
double eval_robustness(const Formula& f, const Trajectory& x, int t);

/* Boolean satisfaction with the same time conventions; independent of the
 * robustness path, used as an oracle in tests. */
bool eval_boolean(const Formula& f, const Trajectory& x, int t);

}  // namespace stlopt
