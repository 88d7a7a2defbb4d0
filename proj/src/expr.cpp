#include "projgeom/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace projgeom::expr {

SyntaxError::SyntaxError(const std::string& what, std::size_t offset)
    : ValidationError(what + " at offset " + std::to_string(offset)), offset_(offset) {}

namespace {

NodePtr make(Op op, std::vector<NodePtr> args = {}, double constant = 0.0, int index = 0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->constant = constant;
  n->index = index;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  Parser(const std::string& src, int m) : s_(src), m_(m) {}

  NodePtr parse_all() {
    skip();
    if (pos_ >= s_.size()) throw SyntaxError("empty expression", pos_);
    NodePtr e = expression();
    skip();
    if (pos_ < s_.size()) throw SyntaxError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw SyntaxError(std::string("expected '") + c + "'", pos_);
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Op::Add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(Op::Sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Op::Mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Op::Div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    while (accept('^')) {
      skip();
      const std::size_t start = pos_;
      bool negative = false;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
        negative = s_[pos_] == '-';
        ++pos_;
      }
      const std::size_t digits = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == digits) throw SyntaxError("exponent must be an integer literal", start);
      if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E')) {
        throw SyntaxError("exponent must be an integer literal", start);
      }
      if (pos_ - digits > 6) throw SyntaxError("exponent too large", start);
      int n = std::stoi(s_.substr(digits, pos_ - digits));
      base = make(Op::Pow, {base}, 0.0, negative ? -n : n);
    }
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) throw SyntaxError("unexpected end of input", pos_);
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t from = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ - from;
    };
    std::size_t n = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) throw SyntaxError("malformed number", start);
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw SyntaxError("malformed exponent", start);
    }
    return make(Op::Constant, {}, std::stod(s_.substr(start, pos_ - start)));
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name = s_.substr(start, pos_ - start);
    static const std::pair<const char*, Op> functions[] = {
        {"sin", Op::Sin}, {"cos", Op::Cos},   {"exp", Op::Exp},
        {"log", Op::Log}, {"sqrt", Op::Sqrt}, {"abs", Op::Abs}};
    for (const auto& [fname, op] : functions) {
      if (name == fname) {
        expect('(');
        NodePtr arg = expression();
        expect(')');
        return make(op, {arg});
      }
    }
    if (name == "pi") return make(Op::Constant, {}, 3.14159265358979323846);
    if (name.size() >= 2 && name[0] == 'y' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      if (name.size() > 8) throw UnknownIdentifier("parameter index too large: " + name);
      const int idx = std::stoi(name.substr(1));
      if (idx >= m_) {
        throw UnknownIdentifier("parameter " + name + " out of range (param_dim " +
                                std::to_string(m_) + ")");
      }
      return make(Op::Param, {}, 0.0, idx);
    }
    throw UnknownIdentifier("unknown identifier '" + name + "' at offset " + std::to_string(start));
  }

  const std::string& s_;
  int m_;
  std::size_t pos_ = 0;
};

const char* op_name(Op op) {
  switch (op) {
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Neg: return "neg";
    case Op::Pow: return "pow";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    case Op::Abs: return "abs";
    default: return "?";
  }
}

void print(const Node& n, std::ostringstream& os) {
  if (n.op == Op::Constant) {
    os << n.constant;
    return;
  }
  if (n.op == Op::Param) {
    os << "param " << n.index;
    return;
  }
  os << op_name(n.op) << '(';
  for (std::size_t i = 0; i < n.args.size(); ++i) {
    if (i) os << ", ";
    print(*n.args[i], os);
  }
  if (n.op == Op::Pow) os << ", " << n.index;
  os << ')';
}

// u^n for integer n, with 0^0 = 1.
double ipow(double u, int n) {
  if (n == 0) return 1.0;
  return std::pow(u, n);
}

// Chain rule for a scalar function applied to a jet: f(u), f'(u), f''(u).
Jet2 compose(const Jet2& u, double f, double df, double d2f, int order) {
  Jet2 r;
  r.value = f;
  if (order >= 1) r.grad = df * u.grad;
  if (order >= 2) r.hess = df * u.hess + d2f * u.grad * u.grad.transpose();
  return r;
}

Jet2 eval_node(const Node& n, const Vec& y, int order, int m) {
  switch (n.op) {
    case Op::Constant: {
      Jet2 r;
      r.value = n.constant;
      if (order >= 1) r.grad = Vec::Zero(m);
      if (order >= 2) r.hess = Mat::Zero(m, m);
      return r;
    }
    case Op::Param: {
      Jet2 r;
      r.value = y[n.index];
      if (order >= 1) r.grad = Vec::Unit(m, n.index);
      if (order >= 2) r.hess = Mat::Zero(m, m);
      return r;
    }
    case Op::Add:
    case Op::Sub: {
      Jet2 a = eval_node(*n.args[0], y, order, m);
      const Jet2 b = eval_node(*n.args[1], y, order, m);
      const double s = n.op == Op::Add ? 1.0 : -1.0;
      a.value += s * b.value;
      if (order >= 1) a.grad += s * b.grad;
      if (order >= 2) a.hess += s * b.hess;
      return a;
    }
    case Op::Neg: {
      Jet2 a = eval_node(*n.args[0], y, order, m);
      a.value = -a.value;
      if (order >= 1) a.grad = -a.grad;
      if (order >= 2) a.hess = -a.hess;
      return a;
    }
    case Op::Mul: {
      const Jet2 a = eval_node(*n.args[0], y, order, m);
      const Jet2 b = eval_node(*n.args[1], y, order, m);
      Jet2 r;
      r.value = a.value * b.value;
      if (order >= 1) r.grad = a.grad * b.value + b.grad * a.value;
      if (order >= 2) {
        r.hess = a.hess * b.value + b.hess * a.value + a.grad * b.grad.transpose() +
                 b.grad * a.grad.transpose();
      }
      return r;
    }
    case Op::Div: {
      const Jet2 a = eval_node(*n.args[0], y, order, m);
      const Jet2 b = eval_node(*n.args[1], y, order, m);
      if (b.value == 0.0) throw DomainError("division by zero");
      const double u = b.value;
      const Jet2 inv = compose(b, 1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u), order);
      Jet2 r;
      r.value = a.value * inv.value;
      if (order >= 1) r.grad = a.grad * inv.value + inv.grad * a.value;
      if (order >= 2) {
        r.hess = a.hess * inv.value + inv.hess * a.value + a.grad * inv.grad.transpose() +
                 inv.grad * a.grad.transpose();
      }
      return r;
    }
    case Op::Pow: {
      const Jet2 u = eval_node(*n.args[0], y, order, m);
      const int k = n.index;
      if (k < 0 && u.value == 0.0) throw DomainError("negative power of zero");
      const double df = k == 0 ? 0.0 : k * ipow(u.value, k - 1);
      const double d2f = (k == 0 || k == 1) ? 0.0 : k * (k - 1) * ipow(u.value, k - 2);
      return compose(u, ipow(u.value, k), df, d2f, order);
    }
    case Op::Sin: {
      const Jet2 u = eval_node(*n.args[0], y, order, m);
      const double s = std::sin(u.value);
      return compose(u, s, std::cos(u.value), -s, order);
    }
    case Op::Cos: {
      const Jet2 u = eval_node(*n.args[0], y, order, m);
      const double c = std::cos(u.value);
      return compose(u, c, -std::sin(u.value), -c, order);
    }
    case Op::Exp: {
      const Jet2 u = eval_node(*n.args[0], y, order, m);
      const double e = std::exp(u.value);
      return compose(u, e, e, e, order);
    }
    case Op::Log: {
      const Jet2 u = eval_node(*n.args[0], y, order, m);
      if (!(u.value > 0.0)) throw DomainError("log of non-positive value");
      return compose(u, std::log(u.value), 1.0 / u.value, -1.0 / (u.value * u.value), order);
    }
    case Op::Sqrt: {
      const Jet2 u = eval_node(*n.args[0], y, order, m);
      if (u.value < 0.0) throw DomainError("sqrt of negative value");
      if (u.value == 0.0) {
        if (order >= 1) throw DomainError("sqrt is not differentiable at 0");
        return compose(u, 0.0, 0.0, 0.0, 0);
      }
      const double s = std::sqrt(u.value);
      return compose(u, s, 0.5 / s, -0.25 / (s * u.value), order);
    }
    case Op::Abs: {
      const Jet2 u = eval_node(*n.args[0], y, order, m);
      if (u.value == 0.0 && order >= 1) throw DomainError("abs is not differentiable at 0");
      const double sg = u.value > 0.0 ? 1.0 : -1.0;
      return compose(u, std::abs(u.value), sg, 0.0, order);
    }
  }
  throw DomainError("malformed expression node");
}

}  // namespace

std::string Ast::to_string() const {
  std::ostringstream os;
  os.precision(17);
  print(*root_, os);
  return os.str();
}

double Ast::eval(const Vec& y) const { return eval_jet2(y, 0).value; }

Jet2 Ast::eval_jet2(const Vec& y, int order) const {
  if (y.size() != param_dim_) throw DimensionMismatch("expression: parameter vector size");
  if (!y.allFinite()) throw DomainError("expression: non-finite parameters");
  Jet2 r = eval_node(*root_, y, order, param_dim_);
  if (!std::isfinite(r.value)) throw DomainError("expression: non-finite value");
  return r;
}

Ast parse(const std::string& src, int param_dim) {
  if (param_dim < 0) throw PreconditionError("parse: negative param_dim");
  Parser p(src, param_dim);
  return Ast(p.parse_all(), param_dim);
}

Chart expression_chart(const std::vector<std::string>& components, int param_dim, Box domain) {
  if (components.empty()) throw PreconditionError("expression chart: no components");
  if (domain.dim() != param_dim) throw DimensionMismatch("expression chart: domain dimension");
  std::vector<Ast> asts;
  for (const std::string& c : components) asts.push_back(parse(c, param_dim));
  const int d = static_cast<int>(asts.size());
  const int m = param_dim;
  auto jet = [asts, d, m](const Vec& y, int order, ChartJet& out) {
    out.value.resize(d);
    if (order >= 1) out.jacobian.resize(d, m);
    if (order >= 2) out.hessians.resize(d);
    for (int k = 0; k < d; ++k) {
      Jet2 j = asts[k].eval_jet2(y, order);
      out.value[k] = j.value;
      if (order >= 1) out.jacobian.row(k) = j.grad.transpose();
      if (order >= 2) out.hessians[k] = std::move(j.hess);
    }
  };
  return Chart::analytic(m, d, std::move(domain), jet);
}

}  // namespace projgeom::expr
