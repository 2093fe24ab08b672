#include "wsp/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>

namespace wsp {

namespace {

struct FuncName {
  std::string_view name;
  Func func;
};

constexpr FuncName kFunctions[] = {
    {"exp", Func::exp},   {"log", Func::log}, {"sin", Func::sin},
    {"cos", Func::cos},   {"sqrt", Func::sqrt}, {"abs", Func::abs},
    {"atan", Func::atan},
};

std::string_view func_name(Func f) {
  for (const auto &entry : kFunctions)
    if (entry.func == f)
      return entry.name;
  return "?";
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  Node parse() {
    Node n = expression();
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return n;
  }

private:
  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void unexpected() {
    if (pos_ >= src_.size())
      throw ParseError("unexpected end of input", pos_);
    throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
  }

  static Node binary(Node::Kind kind, Node lhs, Node rhs, std::size_t at) {
    Node n;
    n.kind = kind;
    n.offset = at;
    n.args.push_back(std::move(lhs));
    n.args.push_back(std::move(rhs));
    return n;
  }

  Node expression() {
    Node lhs = term();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('+'))
        lhs = binary(Node::Kind::add, std::move(lhs), term(), at);
      else if (accept('-'))
        lhs = binary(Node::Kind::sub, std::move(lhs), term(), at);
      else
        return lhs;
    }
  }

  Node term() {
    Node lhs = unary();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('*'))
        lhs = binary(Node::Kind::mul, std::move(lhs), unary(), at);
      else if (accept('/'))
        lhs = binary(Node::Kind::div, std::move(lhs), unary(), at);
      else
        return lhs;
    }
  }

  Node unary() {
    skip_ws();
    const std::size_t at = pos_;
    if (accept('-')) {
      Node n;
      n.kind = Node::Kind::negate;
      n.offset = at;
      n.args.push_back(unary());
      return n;
    }
    if (accept('+'))
      return unary();
    return power();
  }

  Node power() {
    Node base = primary();
    skip_ws();
    const std::size_t at = pos_;
    if (accept('^'))
      return binary(Node::Kind::pow, std::move(base), unary(), at);
    return base;
  }

  Node primary() {
    skip_ws();
    if (pos_ >= src_.size())
      unexpected();
    const std::size_t at = pos_;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return number();
    if (is_ident_start(c)) {
      while (pos_ < src_.size() && is_ident_char(src_[pos_]))
        ++pos_;
      std::string name(src_.substr(at, pos_ - at));
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == '(') {
        auto it = std::find_if(std::begin(kFunctions), std::end(kFunctions),
                               [&](const FuncName &f) { return f.name == name; });
        if (it == std::end(kFunctions))
          throw ParseError("unknown function '" + name + "'", at);
        ++pos_;
        Node n;
        n.kind = Node::Kind::call;
        n.func = it->func;
        n.text = name;
        n.offset = at;
        n.args.push_back(expression());
        if (!accept(')'))
          unexpected();
        return n;
      }
      Node n;
      n.kind = Node::Kind::symbol;
      n.text = std::move(name);
      n.offset = at;
      return n;
    }
    if (accept('(')) {
      Node n = expression();
      if (!accept(')'))
        unexpected();
      return n;
    }
    unexpected();
  }

  Node number() {
    const std::size_t at = pos_;
    auto digits = [&] {
      std::size_t count = 0;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++count;
      }
      return count;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0)
      throw ParseError("malformed number", at);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
        ++pos_;
      if (digits() == 0)
        pos_ = save; // "2e" is 2 followed by the symbol e
    }
    Node n;
    n.kind = Node::Kind::number;
    n.text = std::string(src_.substr(at, pos_ - at));
    n.offset = at;
    return n;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

void format_node(const Node &n, std::string &out) {
  switch (n.kind) {
  case Node::Kind::number:
  case Node::Kind::symbol:
    out += n.text;
    return;
  case Node::Kind::negate:
    out += "(-";
    format_node(n.args[0], out);
    out += ')';
    return;
  case Node::Kind::call:
    out += func_name(n.func);
    out += '(';
    format_node(n.args[0], out);
    out += ')';
    return;
  default:
    break;
  }
  char op = '+';
  switch (n.kind) {
  case Node::Kind::sub: op = '-'; break;
  case Node::Kind::mul: op = '*'; break;
  case Node::Kind::div: op = '/'; break;
  case Node::Kind::pow: op = '^'; break;
  default: break;
  }
  out += '(';
  format_node(n.args[0], out);
  out += op;
  format_node(n.args[1], out);
  out += ')';
}

void visit(const Node &n, const std::function<void(const Node &)> &fn) {
  fn(n);
  for (const auto &a : n.args)
    visit(a, fn);
}

bool uses_symbol(const Node &n, std::string_view name) {
  if (n.kind == Node::Kind::symbol && n.text == name)
    return true;
  return std::any_of(n.args.begin(), n.args.end(),
                     [&](const Node &a) { return uses_symbol(a, name); });
}

} // namespace

Expr::Expr(Node root, std::string source)
    : root_(std::make_shared<const Node>(std::move(root))),
      source_(std::move(source)) {}

Expr Expr::parse(std::string_view text) {
  return Expr(Parser(text).parse(), std::string(text));
}

std::string Expr::format() const {
  std::string out;
  format_node(*root_, out);
  return out;
}

std::set<std::string> Expr::symbols() const {
  std::set<std::string> out;
  visit(*root_, [&](const Node &n) {
    if (n.kind == Node::Kind::symbol)
      out.insert(n.text);
  });
  return out;
}

bool Expr::uses(std::string_view symbol) const {
  return uses_symbol(*root_, symbol);
}

std::vector<Expr> Expr::abs_arguments() const {
  std::vector<Expr> out;
  visit(*root_, [&](const Node &n) {
    if (n.kind == Node::Kind::call && n.func == Func::abs) {
      Node copy = n.args[0];
      std::string text;
      format_node(copy, text);
      out.push_back(Expr(std::move(copy), std::move(text)));
    }
  });
  return out;
}

Expr Expr::negated() const {
  Node n;
  n.kind = Node::Kind::negate;
  n.args.push_back(*root_);
  return Expr(std::move(n), "-(" + source_ + ")");
}

// ---------------------------------------------------------------------------
// Binding and evaluation

namespace {

using Instr = BoundExpr::Instr;
using Op = Instr::Op;

void compile(const Node &n, const Params &params, std::vector<Instr> &code);

real run_constant(const std::vector<Instr> &code);

void compile(const Node &n, const Params &params, std::vector<Instr> &code) {
  Instr in;
  in.offset = n.offset;
  switch (n.kind) {
  case Node::Kind::number:
    in.op = Op::constant;
    in.value = real(n.text);
    code.push_back(in);
    return;
  case Node::Kind::symbol: {
    if (n.text == "x") {
      in.op = Op::var;
    } else if (auto it = params.find(n.text); it != params.end()) {
      in.op = Op::constant;
      in.value = it->second;
    } else if (n.text == "pi") {
      in.op = Op::constant;
      in.value = pi();
    } else {
      throw EvalError("unbound symbol '" + n.text + "'", n.offset);
    }
    code.push_back(in);
    return;
  }
  case Node::Kind::negate:
    compile(n.args[0], params, code);
    in.op = Op::neg;
    code.push_back(in);
    return;
  case Node::Kind::call:
    compile(n.args[0], params, code);
    in.op = Op::call;
    in.func = n.func;
    code.push_back(in);
    return;
  case Node::Kind::pow:
    compile(n.args[0], params, code);
    if (!uses_symbol(n.args[1], "x")) {
      std::vector<Instr> sub;
      compile(n.args[1], params, sub);
      in.op = Op::pow_const;
      in.value = run_constant(sub);
    } else {
      compile(n.args[1], params, code);
      in.op = Op::pow;
    }
    code.push_back(in);
    return;
  default:
    break;
  }
  compile(n.args[0], params, code);
  compile(n.args[1], params, code);
  switch (n.kind) {
  case Node::Kind::add: in.op = Op::add; break;
  case Node::Kind::sub: in.op = Op::sub; break;
  case Node::Kind::mul: in.op = Op::mul; break;
  default: in.op = Op::div; break;
  }
  code.push_back(in);
}

template <class T> struct is_jet : std::false_type {};
template <class S> struct is_jet<Jet<S>> : std::true_type {};

// Scalar kernels mirror the constant-term arithmetic of the jet kernels so
// that evaluating on a jet reproduces the scalar value bit for bit.
template <class S> S scalar_ipow(const S &x, long long p, std::size_t at) {
  if (p < 0) {
    if (x == S(0))
      throw EvalError("division by zero in negative power", at);
    return S(1) / scalar_ipow(x, -p, at);
  }
  S result(1);
  S base = x;
  bool first = true;
  while (p > 0) {
    if (p & 1) {
      result = first ? base : result * base;
      first = false;
    }
    p >>= 1;
    if (p > 0)
      base = base * base;
  }
  return result;
}

template <class S> S scalar_pow(const S &x, const real &p, std::size_t at) {
  using std::pow;
  const real rounded = round(p);
  if (rounded == p && abs(p) < real(1e15))
    return scalar_ipow(x, static_cast<long long>(rounded), at);
  if (x <= S(0))
    throw EvalError("fractional power of non-positive value", at);
  return pow(x, static_cast<S>(p));
}

template <class S> S scalar_call(Func f, const S &v, std::size_t at) {
  using std::atan;
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  switch (f) {
  case Func::exp: return exp(v);
  case Func::log:
    if (v <= S(0))
      throw EvalError("log of non-positive value", at);
    return log(v);
  case Func::sin: return sin(v);
  case Func::cos: return cos(v);
  case Func::sqrt:
    if (v < S(0))
      throw EvalError("sqrt of negative value", at);
    return sqrt(v);
  case Func::abs: return v < S(0) ? S(-v) : v;
  case Func::atan: return atan(v);
  }
  return v;
}

template <class S> Jet<S> jet_call(Func f, const Jet<S> &v) {
  switch (f) {
  case Func::exp: return exp(v);
  case Func::log: return log(v);
  case Func::sin: return sin(v);
  case Func::cos: return cos(v);
  case Func::sqrt: return sqrt(v);
  case Func::abs: return abs(v);
  case Func::atan: return atan(v);
  }
  return v;
}

template <class T> T lift(const real &v, const T &like) {
  if constexpr (is_jet<T>::value) {
    using S = typename T::value_type;
    return T::constant(static_cast<S>(v), like.degree(), like.base_point());
  } else {
    (void)like;
    return static_cast<T>(v);
  }
}

template <class T>
T run(const std::vector<Instr> &code, std::size_t depth, const T &x) {
  std::vector<T> stack;
  stack.reserve(depth);
  auto pop = [&] {
    T v = std::move(stack.back());
    stack.pop_back();
    return v;
  };
  for (const Instr &in : code) {
    switch (in.op) {
    case Op::constant:
      stack.push_back(lift(in.value, x));
      break;
    case Op::var:
      stack.push_back(x);
      break;
    case Op::neg:
      stack.back() = -stack.back();
      break;
    case Op::add: {
      T b = pop();
      stack.back() = stack.back() + b;
      break;
    }
    case Op::sub: {
      T b = pop();
      stack.back() = stack.back() - b;
      break;
    }
    case Op::mul: {
      T b = pop();
      stack.back() = stack.back() * b;
      break;
    }
    case Op::div: {
      T b = pop();
      if constexpr (is_jet<T>::value) {
        if (b[0] == typename T::value_type(0))
          throw EvalError("division by zero", in.offset);
      } else {
        if (b == T(0))
          throw EvalError("division by zero", in.offset);
      }
      stack.back() = stack.back() / b;
      break;
    }
    case Op::pow_const:
      if constexpr (is_jet<T>::value) {
        try {
          stack.back() = pow(stack.back(),
                             static_cast<typename T::real_type>(in.value));
        } catch (const std::domain_error &e) {
          throw EvalError(e.what(), in.offset);
        }
      } else {
        stack.back() = scalar_pow(stack.back(), in.value, in.offset);
      }
      break;
    case Op::pow:
      if constexpr (is_jet<T>::value) {
        throw EvalError("power of a jet needs an exponent independent of x",
                        in.offset);
      } else {
        using std::pow;
        T e = pop();
        T v = pow(stack.back(), e);
        if (v != v)
          throw EvalError("invalid power", in.offset);
        stack.back() = v;
      }
      break;
    case Op::call:
      if constexpr (is_jet<T>::value) {
        try {
          stack.back() = jet_call(in.func, stack.back());
        } catch (const std::domain_error &e) {
          throw EvalError(e.what(), in.offset);
        }
      } else {
        stack.back() = scalar_call(in.func, stack.back(), in.offset);
      }
      break;
    }
  }
  return std::move(stack.back());
}

std::size_t stack_depth(const std::vector<Instr> &code) {
  std::size_t depth = 0, best = 0;
  for (const Instr &in : code) {
    switch (in.op) {
    case Op::constant:
    case Op::var: ++depth; break;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
    case Op::pow: --depth; break;
    default: break;
    }
    best = std::max(best, depth);
  }
  return best;
}

real run_constant(const std::vector<Instr> &code) {
  return run<real>(code, stack_depth(code), real(0));
}

} // namespace

BoundExpr::BoundExpr(const Expr &e, const Params &params) {
  compile(e.root(), params, code_);
  max_depth_ = stack_depth(code_);
}

template <class T> T BoundExpr::operator()(const T &x) const {
  return run<T>(code_, max_depth_, x);
}

template double BoundExpr::operator()(const double &) const;
template real BoundExpr::operator()(const real &) const;
template Jet<double> BoundExpr::operator()(const Jet<double> &) const;
template Jet<real> BoundExpr::operator()(const Jet<real> &) const;

double eval_real(const Expr &e, double x, const Params &params) {
  return BoundExpr(e, params)(x);
}

} // namespace wsp
