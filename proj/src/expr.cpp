#include "gsdde/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <utility>

#include "gsdde/error.hpp"

namespace gsdde {

char var_name(Var v) noexcept {
  switch (v) {
    case Var::X: return 'x';
    case Var::Y: return 'y';
    case Var::T: return 't';
    case Var::U: return 'u';
  }
  return '?';
}

namespace {

struct FuncInfo {
  const char* name;
  Func func;
  std::size_t arity;
};

constexpr FuncInfo kFunctions[] = {
    {"exp", Func::Exp, 1}, {"sin", Func::Sin, 1}, {"cos", Func::Cos, 1},
    {"abs", Func::Abs, 1}, {"pow", Func::Pow, 2}, {"min", Func::Min, 2},
    {"max", Func::Max, 2},
};

const FuncInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (name == f.name) return &f;
  }
  return nullptr;
}

const FuncInfo& function_info(Func func) {
  for (const auto& f : kFunctions) {
    if (f.func == func) return f;
  }
  return kFunctions[0];
}

bool lookup_variable(std::string_view name, Var& out) {
  if (name.size() != 1) return false;
  switch (name[0]) {
    case 'x': out = Var::X; return true;
    case 'y': out = Var::Y; return true;
    case 't': out = Var::T; return true;
    case 'u': out = Var::U; return true;
    default: return false;
  }
}

Node make_binary(NodeKind kind, Node lhs, Node rhs) {
  Node n;
  n.kind = kind;
  n.children.reserve(2);
  n.children.push_back(std::move(lhs));
  n.children.push_back(std::move(rhs));
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Node parse() {
    Node e = expr();
    skip_ws();
    if (pos_ != text_.size()) {
      fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' ||
            text_[pos_] == '\n')) {
      ++pos_;
    }
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c && pos_ < text_.size()) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    skip_ws();
    std::ostringstream msg;
    msg << "parse error at offset " << pos_ << ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg << (i + 1 == expected.size() ? " or " : ", ");
      msg << expected[i];
    }
    if (pos_ < text_.size()) {
      msg << ", found '" << text_[pos_] << "'";
    } else {
      msg << ", found end of input";
    }
    throw ParseError(pos_, std::move(expected), msg.str());
  }

  Node expr() {
    Node lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(NodeKind::Add, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = make_binary(NodeKind::Sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  Node term() {
    Node lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(NodeKind::Mul, std::move(lhs), factor());
      } else if (accept('/')) {
        lhs = make_binary(NodeKind::Div, std::move(lhs), factor());
      } else {
        return lhs;
      }
    }
  }

  Node factor() {
    if (accept('-')) {
      Node n;
      n.kind = NodeKind::Neg;
      n.children.push_back(power());
      return n;
    }
    return power();
  }

  Node power() {
    Node base = atom();
    if (accept('^')) {
      return make_binary(NodeKind::Pow, std::move(base), power());
    }
    return base;
  }

  Node atom() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Node inner = expr();
      if (!accept(')')) fail({"')'"});
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (is_ident_start(c)) return identifier();
    fail({"number", "identifier", "'('", "'-'"});
  }

  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
  }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  Node number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    std::size_t digits = 0;
    while (end < text_.size() && is_digit(text_[end])) { ++end; ++digits; }
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      while (end < text_.size() && is_digit(text_[end])) { ++end; ++digits; }
    }
    if (digits == 0) fail({"digit"});
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t exp_end = end + 1;
      if (exp_end < text_.size() && (text_[exp_end] == '+' || text_[exp_end] == '-')) {
        ++exp_end;
      }
      std::size_t exp_digits = 0;
      while (exp_end < text_.size() && is_digit(text_[exp_end])) {
        ++exp_end;
        ++exp_digits;
      }
      if (exp_digits == 0) {
        pos_ = exp_end;
        fail({"exponent digits"});
      }
      end = exp_end;
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      fail({"finite number"});
    }
    pos_ = end;
    Node n;
    n.kind = NodeKind::Number;
    n.number = value;
    return n;
  }

  Node identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    Var var;
    if (lookup_variable(name, var)) {
      if (peek() == '(') {
        throw Error(Errc::UnknownIdentifier,
                    "'" + std::string(name) + "' at offset " +
                        std::to_string(start) + " is a variable, not a function");
      }
      Node n;
      n.kind = NodeKind::Variable;
      n.var = var;
      return n;
    }
    const FuncInfo* info = find_function(name);
    if (info == nullptr) {
      throw Error(Errc::UnknownIdentifier,
                  "unknown identifier '" + std::string(name) + "' at offset " +
                      std::to_string(start));
    }
    if (!accept('(')) fail({"'('"});
    Node call;
    call.kind = NodeKind::Call;
    call.func = info->func;
    if (peek() != ')') {
      call.children.push_back(expr());
      while (accept(',')) call.children.push_back(expr());
    }
    if (!accept(')')) fail({"','", "')'"});
    if (call.children.size() != info->arity) {
      throw Error(Errc::ArityMismatch,
                  std::string(info->name) + " expects " +
                      std::to_string(info->arity) + " argument(s), got " +
                      std::to_string(call.children.size()) + " at offset " +
                      std::to_string(start));
    }
    return call;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

// Postfix program. Evaluation walks it with a fixed-size stack.
struct Expr::Instr {
  NodeKind kind;
  Func func;
  Var var;
  double number;
};

struct Expr::Impl {
  Node root;
  std::string source;
  std::vector<Instr> program;
  std::size_t max_depth = 0;
  std::uint8_t vars = 0;
};

namespace {

template <class InstrT>
void compile_node(const Node& n, std::vector<InstrT>& out, std::size_t depth,
                  std::size_t& max_depth, std::uint8_t& vars) {
  std::size_t d = depth;
  for (const Node& c : n.children) {
    compile_node(c, out, d, max_depth, vars);
    ++d;
  }
  if (n.children.empty()) {
    d = depth + 1;
  }
  if (d > max_depth) max_depth = d;
  if (n.kind == NodeKind::Variable) {
    vars |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(n.var));
  }
  out.push_back(InstrT{n.kind, n.func, n.var, n.number});
}

}  // namespace

Expr::Expr() : Expr(Node{}, "0") {}

Expr::Expr(Node root, std::string source) {
  auto impl = std::make_shared<Impl>();
  impl->root = std::move(root);
  impl->source = std::move(source);
  compile_node(impl->root, impl->program, 0, impl->max_depth, impl->vars);
  impl_ = std::move(impl);
}

Expr Expr::constant(double value) {
  Node n;
  n.kind = NodeKind::Number;
  n.number = value;
  Expr e(n, "");
  auto impl = std::make_shared<Impl>(*e.impl_);
  impl->source = to_string(e);
  e.impl_ = std::move(impl);
  return e;
}

const Node& Expr::root() const noexcept { return impl_->root; }
std::uint8_t Expr::variables() const noexcept { return impl_->vars; }
const std::string& Expr::source() const noexcept { return impl_->source; }

bool Expr::is_zero_literal() const noexcept {
  return root().kind == NodeKind::Number && root().number == 0.0;
}

namespace {

inline double apply_call(Func f, double a, double b) noexcept {
  switch (f) {
    case Func::Exp: return std::exp(a);
    case Func::Sin: return std::sin(a);
    case Func::Cos: return std::cos(a);
    case Func::Abs: return std::fabs(a);
    case Func::Pow: return std::pow(a, b);
    case Func::Min: return std::fmin(a, b);
    case Func::Max: return std::fmax(a, b);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double Expr::eval(const std::array<double, kVarCount>& v) const noexcept {
  constexpr std::size_t kInline = 32;
  double inline_stack[kInline] = {};
  std::vector<double> heap_stack;
  double* stack = inline_stack;
  if (impl_->max_depth > kInline) {
    heap_stack.resize(impl_->max_depth);
    stack = heap_stack.data();
  }
  std::size_t sp = 0;
  for (const Instr& in : impl_->program) {
    switch (in.kind) {
      case NodeKind::Number: stack[sp++] = in.number; break;
      case NodeKind::Variable: stack[sp++] = v[static_cast<std::size_t>(in.var)]; break;
      case NodeKind::Neg: stack[sp - 1] = -stack[sp - 1]; break;
      case NodeKind::Add: --sp; stack[sp - 1] += stack[sp]; break;
      case NodeKind::Sub: --sp; stack[sp - 1] -= stack[sp]; break;
      case NodeKind::Mul: --sp; stack[sp - 1] *= stack[sp]; break;
      case NodeKind::Div: --sp; stack[sp - 1] /= stack[sp]; break;
      case NodeKind::Pow: --sp; stack[sp - 1] = std::pow(stack[sp - 1], stack[sp]); break;
      case NodeKind::Call:
        if (function_info(in.func).arity == 2) {
          --sp;
          stack[sp - 1] = apply_call(in.func, stack[sp - 1], stack[sp]);
        } else {
          stack[sp - 1] = apply_call(in.func, stack[sp - 1], 0.0);
        }
        break;
    }
  }
  return stack[0];
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case NodeKind::Number:
      if (a.number != b.number) return false;
      break;
    case NodeKind::Variable:
      if (a.var != b.var) return false;
      break;
    case NodeKind::Call:
      if (a.func != b.func) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(a.children[i], b.children[i])) return false;
  }
  return true;
}

bool operator==(const Expr& a, const Expr& b) {
  return structurally_equal(a.root(), b.root());
}

Expr parse_expr(std::string_view text) {
  Parser p(text);
  Node root = p.parse();
  return Expr(std::move(root), std::string(text));
}

double eval_expr(const Expr& e, const Bindings& bindings) {
  const std::uint8_t missing = e.variables() & ~bindings.mask_bits();
  if (missing != 0) {
    for (unsigned i = 0; i < kVarCount; ++i) {
      if (missing & (1u << i)) {
        throw Error(Errc::UnboundVariable,
                    std::string("variable '") + var_name(static_cast<Var>(i)) +
                        "' is not bound in '" + e.source() + "'");
      }
    }
  }
  const double value = e.eval(bindings.values());
  if (!std::isfinite(value)) {
    throw Error(Errc::DomainError,
                "non-finite result evaluating '" + e.source() + "'");
  }
  return value;
}

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void print_node(const Node& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print_node(n.children[0], out);
    out += op;
    print_node(n.children[1], out);
    out += ')';
  };
  switch (n.kind) {
    case NodeKind::Number: out += format_number(n.number); break;
    case NodeKind::Variable: out += var_name(n.var); break;
    case NodeKind::Neg:
      out += "(-";
      print_node(n.children[0], out);
      out += ')';
      break;
    case NodeKind::Add: binary(" + "); break;
    case NodeKind::Sub: binary(" - "); break;
    case NodeKind::Mul: binary(" * "); break;
    case NodeKind::Div: binary(" / "); break;
    case NodeKind::Pow: binary(" ^ "); break;
    case NodeKind::Call:
      out += function_info(n.func).name;
      out += '(';
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += ", ";
        print_node(n.children[i], out);
      }
      out += ')';
      break;
  }
}

void shape_node(const Node& n, std::string& out) {
  auto with_children = [&](const char* name) {
    out += name;
    out += '(';
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i) out += ',';
      shape_node(n.children[i], out);
    }
    out += ')';
  };
  switch (n.kind) {
    case NodeKind::Number: out += format_number(n.number); break;
    case NodeKind::Variable: out += var_name(n.var); break;
    case NodeKind::Neg: with_children("Neg"); break;
    case NodeKind::Add: with_children("Add"); break;
    case NodeKind::Sub: with_children("Sub"); break;
    case NodeKind::Mul: with_children("Mul"); break;
    case NodeKind::Div: with_children("Div"); break;
    case NodeKind::Pow: with_children("Pow"); break;
    case NodeKind::Call: with_children(function_info(n.func).name); break;
  }
}

// Moves x by +-h where h is representable relative to x.
double representable_step(double x, double step) {
  const double h = step * std::fmax(1.0, std::fabs(x));
  volatile double moved = x + h;
  return moved - x;
}

double checked_at(const Expr& e, Bindings b, Var var, double value) {
  b.set(var, value);
  const double r = e.eval(b.values());
  if (!std::isfinite(r)) {
    throw Error(Errc::DomainError,
                std::string("non-finite stencil value of '") + e.source() +
                    "' at " + var_name(var) + "=" + format_number(value));
  }
  return r;
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print_node(e.root(), out);
  return out;
}

std::string shape(const Expr& e) {
  std::string out;
  shape_node(e.root(), out);
  return out;
}

double partial_derivative(const Expr& e, Var var, const Bindings& point,
                          double step) {
  const double x = point.get(var);
  const double h = representable_step(x, step);
  const double fp = checked_at(e, point, var, x + h);
  const double fm = checked_at(e, point, var, x - h);
  return (fp - fm) / (2.0 * h);
}

double second_partial_derivative(const Expr& e, Var var, const Bindings& point,
                                 double step) {
  const double x = point.get(var);
  const double h = representable_step(x, step);
  const double fp = checked_at(e, point, var, x + h);
  const double f0 = checked_at(e, point, var, x);
  const double fm = checked_at(e, point, var, x - h);
  return (fp - 2.0 * f0 + fm) / (h * h);
}

}  // namespace gsdde
