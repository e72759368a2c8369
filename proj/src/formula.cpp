#include "stlopt/formula.hpp"

#include <algorithm>
#include <cctype>

namespace stlopt {

Predicate negate(const Predicate& p) {
  Predicate q;
  q.name = "-" + p.name;
  auto h = p.h;
  auto g = p.grad;
  q.h = [h](const Vec& x) { return -h(x); };
  q.grad = [g](const Vec& x) { return Vec(-g(x)); };
  return q;
}

FormulaPtr make_pred(Predicate p) {
  auto f = std::make_shared<Formula>();
  f->op = Op::Pred;
  f->pred = std::move(p);
  return f;
}

FormulaPtr make_not(FormulaPtr c) {
  auto f = std::make_shared<Formula>();
  f->op = Op::Not;
  f->children = {std::move(c)};
  return f;
}

static FormulaPtr make_nary(Op op, std::vector<FormulaPtr> fs) {
  if (fs.size() < 2)
    throw std::invalid_argument("and/or need at least two children");
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->children = std::move(fs);
  return f;
}

FormulaPtr make_and(std::vector<FormulaPtr> fs) { return make_nary(Op::And, std::move(fs)); }
FormulaPtr make_or(std::vector<FormulaPtr> fs) { return make_nary(Op::Or, std::move(fs)); }

static void check_interval(Interval i) {
  if (i.lo < 0 || i.hi < i.lo)
    throw std::invalid_argument("interval must satisfy 0 <= lo <= hi");
}

static FormulaPtr make_temporal(Op op, Interval i, std::vector<FormulaPtr> cs) {
  check_interval(i);
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->interval = i;
  f->children = std::move(cs);
  return f;
}

FormulaPtr make_always(Interval i, FormulaPtr c) {
  return make_temporal(Op::Always, i, {std::move(c)});
}
FormulaPtr make_eventually(Interval i, FormulaPtr c) {
  return make_temporal(Op::Eventually, i, {std::move(c)});
}
FormulaPtr make_until(Interval i, FormulaPtr lhs, FormulaPtr rhs) {
  return make_temporal(Op::Until, i, {std::move(lhs), std::move(rhs)});
}

/* ------------------------------ parser ------------------------------ */

namespace {

struct Token {
  enum Kind { Ident, Not, And, Or, G, F, U, LParen, RParen, End } kind;
  std::string text;
  Interval interval;  // for G/F/U
  size_t pos;
};

class Lexer {
public:
  explicit Lexer(const std::string& s) : s_(s) {}

  Token next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    size_t start = i_;
    if (i_ >= s_.size()) return {Token::End, "", {}, start};
    char c = s_[i_];
    if (c == '(') { ++i_; return {Token::LParen, "(", {}, start}; }
    if (c == ')') { ++i_; return {Token::RParen, ")", {}, start}; }
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_')
      throw ParseError("unexpected character '" + std::string(1, c) + "'", start);
    while (i_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
      ++i_;
    std::string word = s_.substr(start, i_ - start);
    if (word == "not") return {Token::Not, word, {}, start};
    if (word == "and") return {Token::And, word, {}, start};
    if (word == "or") return {Token::Or, word, {}, start};
    if (word == "G" || word == "F" || word == "U") {
      Token::Kind k = word == "G" ? Token::G : word == "F" ? Token::F : Token::U;
      return {k, word, read_interval(word, start), start};
    }
    return {Token::Ident, word, {}, start};
  }

private:
  Interval read_interval(const std::string& op, size_t op_pos) {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ >= s_.size() || s_[i_] != '[')
      throw ParseError(op == "U" ? "until requires an interval"
                                 : op + " requires an interval", op_pos);
    ++i_;
    int lo = read_int();
    skip(',');
    int hi = read_int();
    skip(']');
    if (hi < lo) throw ParseError("reversed interval bounds", op_pos);
    return {lo, hi};
  }

  int read_int() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ == start) {
      // catch "1.5" style bounds explicitly
      if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '.'))
        throw ParseError("interval bounds must be non-negative integers", i_);
      throw ParseError("expected integer interval bound", start);
    }
    if (i_ < s_.size() && s_[i_] == '.')
      throw ParseError("interval bounds must be integers", start);
    return std::stoi(s_.substr(start, i_ - start));
  }

  void skip(char c) {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ >= s_.size() || s_[i_] != c)
      throw ParseError("expected '" + std::string(1, c) + "' in interval", i_);
    ++i_;
  }

  const std::string& s_;
  size_t i_ = 0;
};

class Parser {
public:
  Parser(const std::string& text, const PredicateLookup& lookup)
      : lexer_(text), lookup_(lookup) {
    advance();
  }

  FormulaPtr parse_all() {
    FormulaPtr f = or_expr();
    if (cur_.kind != Token::End)
      throw ParseError("unexpected token '" + cur_.text + "'", cur_.pos);
    return f;
  }

private:
  void advance() { cur_ = lexer_.next(); }

  FormulaPtr or_expr() {
    std::vector<FormulaPtr> parts{and_expr()};
    while (cur_.kind == Token::Or) {
      advance();
      FormulaPtr rhs = and_expr();
      // flatten nested or chains into one n-ary node
      if (rhs->op == Op::Or)
        parts.insert(parts.end(), rhs->children.begin(), rhs->children.end());
      else
        parts.push_back(rhs);
    }
    if (parts.size() == 1) return parts[0];
    return make_or(std::move(parts));
  }

  FormulaPtr and_expr() {
    std::vector<FormulaPtr> parts{until_expr()};
    while (cur_.kind == Token::And) {
      advance();
      FormulaPtr rhs = until_expr();
      if (rhs->op == Op::And)
        parts.insert(parts.end(), rhs->children.begin(), rhs->children.end());
      else
        parts.push_back(rhs);
    }
    if (parts.size() == 1) return parts[0];
    return make_and(std::move(parts));
  }

  FormulaPtr until_expr() {
    FormulaPtr lhs = unary();
    if (cur_.kind == Token::U) {
      Interval iv = cur_.interval;
      advance();
      FormulaPtr rhs = until_expr();  // right associative
      return make_until(iv, lhs, rhs);
    }
    return lhs;
  }

  FormulaPtr unary() {
    switch (cur_.kind) {
      case Token::Not: {
        advance();
        return make_not(unary());
      }
      case Token::G: {
        Interval iv = cur_.interval;
        advance();
        return make_always(iv, unary());
      }
      case Token::F: {
        Interval iv = cur_.interval;
        advance();
        return make_eventually(iv, unary());
      }
      case Token::LParen: {
        advance();
        FormulaPtr f = or_expr();
        if (cur_.kind != Token::RParen)
          throw ParseError("expected ')'", cur_.pos);
        advance();
        return f;
      }
      case Token::Ident: {
        std::string name = cur_.text;
        size_t pos = cur_.pos;
        advance();
        try {
          return make_pred(lookup_(name));
        } catch (const std::out_of_range&) {
          throw ParseError("unknown predicate '" + name + "'", pos);
        }
      }
      default:
        throw ParseError("unexpected token '" + cur_.text + "'", cur_.pos);
    }
  }

  Lexer lexer_;
  const PredicateLookup& lookup_;
  Token cur_;
};

}  // namespace

FormulaPtr parse(const std::string& text, const PredicateLookup& lookup) {
  return Parser(text, lookup).parse_all();
}

/* ------------------------------- NNF -------------------------------- */

static FormulaPtr nnf_impl(const FormulaPtr& f, bool negated) {
  switch (f->op) {
    case Op::Pred:
      return negated ? make_pred(negate(f->pred)) : f;
    case Op::Not:
      return nnf_impl(f->children[0], !negated);
    case Op::And:
    case Op::Or: {
      std::vector<FormulaPtr> cs;
      cs.reserve(f->children.size());
      for (const auto& c : f->children) cs.push_back(nnf_impl(c, negated));
      bool is_and = (f->op == Op::And) != negated;  // De Morgan
      return is_and ? make_and(std::move(cs)) : make_or(std::move(cs));
    }
    case Op::Always:
    case Op::Eventually: {
      FormulaPtr c = nnf_impl(f->children[0], negated);
      bool is_always = (f->op == Op::Always) != negated;  // duality
      return is_always ? make_always(f->interval, c)
                       : make_eventually(f->interval, c);
    }
    case Op::Until: {
      if (negated)
        throw std::invalid_argument(
            "negation over until is not supported (no release operator)");
      return make_until(f->interval, nnf_impl(f->children[0], false),
                        nnf_impl(f->children[1], false));
    }
  }
  throw std::logic_error("unreachable");
}

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf_impl(f, false); }

/* ----------------------------- semantics ---------------------------- */

int horizon(const Formula& f) {
  switch (f.op) {
    case Op::Pred:
      return 0;
    case Op::Not:
      return horizon(*f.children[0]);
    case Op::And:
    case Op::Or: {
      int h = 0;
      for (const auto& c : f.children) h = std::max(h, horizon(*c));
      return h;
    }
    case Op::Always:
    case Op::Eventually:
      return f.interval.hi + horizon(*f.children[0]);
    case Op::Until:
      return f.interval.hi +
             std::max(horizon(*f.children[0]), horizon(*f.children[1]));
  }
  throw std::logic_error("unreachable");
}

static void check_horizon(const Formula& f, const Trajectory& x, int t) {
  if (t < 0 || t + horizon(f) > x.T)
    throw std::out_of_range("formula horizon exceeds trajectory length");
}

static double eval_impl(const Formula& f, const Trajectory& x, int t) {
  switch (f.op) {
    case Op::Pred:
      return f.pred.h(x.states.col(t));
    case Op::Not:
      return -eval_impl(*f.children[0], x, t);
    case Op::And: {
      double v = eval_impl(*f.children[0], x, t);
      for (size_t i = 1; i < f.children.size(); ++i)
        v = std::min(v, eval_impl(*f.children[i], x, t));
      return v;
    }
    case Op::Or: {
      double v = eval_impl(*f.children[0], x, t);
      for (size_t i = 1; i < f.children.size(); ++i)
        v = std::max(v, eval_impl(*f.children[i], x, t));
      return v;
    }
    case Op::Always: {
      double v = eval_impl(*f.children[0], x, t + f.interval.lo);
      for (int tp = f.interval.lo + 1; tp <= f.interval.hi; ++tp)
        v = std::min(v, eval_impl(*f.children[0], x, t + tp));
      return v;
    }
    case Op::Eventually: {
      double v = eval_impl(*f.children[0], x, t + f.interval.lo);
      for (int tp = f.interval.lo + 1; tp <= f.interval.hi; ++tp)
        v = std::max(v, eval_impl(*f.children[0], x, t + tp));
      return v;
    }
    case Op::Until: {
      // left child over t..t+tp-1, right child at t+tp (tree convention)
      double best = -std::numeric_limits<double>::infinity();
      for (int tp = f.interval.lo; tp <= f.interval.hi; ++tp) {
        double block = eval_impl(*f.children[1], x, t + tp);
        for (int j = 0; j < tp; ++j)
          block = std::min(block, eval_impl(*f.children[0], x, t + j));
        best = std::max(best, block);
      }
      return best;
    }
  }
  throw std::logic_error("unreachable");
}

double eval_robustness(const Formula& f, const Trajectory& x, int t) {
  check_horizon(f, x, t);
  return eval_impl(f, x, t);
}

static bool bool_impl(const Formula& f, const Trajectory& x, int t) {
  switch (f.op) {
    case Op::Pred:
      return f.pred.h(x.states.col(t)) >= 0.0;
    case Op::Not:
      return !bool_impl(*f.children[0], x, t);
    case Op::And:
      return std::all_of(f.children.begin(), f.children.end(),
                         [&](const FormulaPtr& c) { return bool_impl(*c, x, t); });
    case Op::Or:
      return std::any_of(f.children.begin(), f.children.end(),
                         [&](const FormulaPtr& c) { return bool_impl(*c, x, t); });
    case Op::Always: {
      for (int tp = f.interval.lo; tp <= f.interval.hi; ++tp)
        if (!bool_impl(*f.children[0], x, t + tp)) return false;
      return true;
    }
    case Op::Eventually: {
      for (int tp = f.interval.lo; tp <= f.interval.hi; ++tp)
        if (bool_impl(*f.children[0], x, t + tp)) return true;
      return false;
    }
    case Op::Until: {
      for (int tp = f.interval.lo; tp <= f.interval.hi; ++tp) {
        bool ok = bool_impl(*f.children[1], x, t + tp);
        for (int j = 0; ok && j < tp; ++j)
          ok = bool_impl(*f.children[0], x, t + j);
        if (ok) return true;
      }
      return false;
    }
  }
  throw std::logic_error("unreachable");
}

bool eval_boolean(const Formula& f, const Trajectory& x, int t) {
  check_horizon(f, x, t);
  return bool_impl(f, x, t);
}

}  // namespace stlopt
