#include "ctrait/value.h"

#include <pthread.h>

#include <exception>

#include "ctrait/printer.h"

namespace ctrait {

bool operator==(const Value& a, const Value& b) {
  if (a.v.index() != b.v.index()) return false;
  if (a.IsInt()) return a.AsInt() == b.AsInt();
  if (a.IsBool()) return a.AsBool() == b.AsBool();
  if (a.IsString()) return a.AsString() == b.AsString();
  if (a.IsObject()) return a.AsObject().class_name == b.AsObject().class_name;
  return a.AsTrait() == b.AsTrait();
}

std::string Render(const Value& v) {
  if (v.IsInt()) return v.AsInt().str();
  if (v.IsBool()) return v.AsBool() ? "true" : "false";
  if (v.IsString()) return QuoteString(v.AsString());
  if (v.IsObject()) return "new " + v.AsObject().class_name + "()";
  std::string out = "Trait{";
  bool first = true;
  for (const auto& [name, m] : v.AsTrait().methods) {
    if (!m.IsPublic()) continue;
    if (!first) out += ", ";
    out += name;
    first = false;
  }
  return out + "}";
}

std::string Stringify(const Value& v) {
  return v.IsString() ? v.AsString() : Render(v);
}

std::string Render(const Bindings& bindings) {
  std::string out;
  for (const auto& [name, value] : bindings) {
    if (!out.empty()) out += ", ";
    out += name + "=" + Render(value);
  }
  return out;
}

const char* Code(RuntimeErrorKind kind) {
  switch (kind) {
    case RuntimeErrorKind::DivideByZero: return "DivideByZero";
    case RuntimeErrorKind::NegativeExponent: return "NegativeExponent";
    case RuntimeErrorKind::ExponentTooLarge: return "ExponentTooLarge";
    case RuntimeErrorKind::IntegerTooLarge: return "IntegerTooLarge";
    case RuntimeErrorKind::NoSuchMethod: return "NoSuchMethod";
    case RuntimeErrorKind::AbstractCall: return "AbstractCall";
    case RuntimeErrorKind::MissingReturn: return "MissingReturn";
    case RuntimeErrorKind::DepthLimit: return "DepthLimit";
    case RuntimeErrorKind::Unsupported: return "Unsupported";
  }
  return "RuntimeError";
}

const char* Code(ContractKind kind) {
  return kind == ContractKind::Requires ? "Requires" : "Ensures";
}

ContractViolation::ContractViolation(std::string method, ContractKind kind,
                                     ExprPtr predicate, Bindings bindings)
    : std::runtime_error(std::string(Code(kind)) + " violation in " + method +
                         ": " + Print(predicate) + " [" + Render(bindings) +
                         "]"),
      method_(std::move(method)),
      kind_(kind),
      predicate_(std::move(predicate)),
      predicate_text_(Print(predicate_)),
      bindings_(std::move(bindings)) {}

namespace {

unsigned long long BitLength(const BigInt& x) {
  return x == 0 ? 0 : boost::multiprecision::msb(abs(x)) + 1;
}

void CheckWidth(unsigned long long bits, const char* what) {
  if (bits > kMaxIntBits) {
    throw RuntimeError(RuntimeErrorKind::IntegerTooLarge,
                       std::string(what) + " would exceed " +
                           std::to_string(kMaxIntBits) + " bits");
  }
}

}  // namespace

BigInt IntPow(const BigInt& base, const BigInt& exponent) {
  if (exponent < 0) {
    throw RuntimeError(RuntimeErrorKind::NegativeExponent,
                       "negative exponent: " + base.str() + " ** " +
                           exponent.str());
  }
  if (exponent > kMaxExponent) {
    throw RuntimeError(RuntimeErrorKind::ExponentTooLarge,
                       "exponent too large: " + exponent.str());
  }
  unsigned e = exponent.convert_to<unsigned>();
  if (abs(base) > 1) CheckWidth((BitLength(base) - 1) * e, "power");
  return boost::multiprecision::pow(base, e);
}

namespace {

[[noreturn]] void BadOperands(const char* op, const Value& a,
                              const Value* b = nullptr) {
  std::string message = std::string("unsupported operands for '") + op +
                        "': " + Render(a);
  if (b) message += ", " + Render(*b);
  throw RuntimeError(RuntimeErrorKind::Unsupported, message);
}

}  // namespace

Value Evaluator::Apply(BinaryOp op, const Value& a, const Value& b) {
  const char* spelling = Spelling(op);
  switch (op) {
    case BinaryOp::Eq: return Value(a == b);
    case BinaryOp::Ne: return Value(a != b);
    case BinaryOp::And:
    case BinaryOp::Or:
      if (!a.IsBool() || !b.IsBool()) BadOperands(spelling, a, &b);
      return Value(op == BinaryOp::And ? a.AsBool() && b.AsBool()
                                       : a.AsBool() || b.AsBool());
    case BinaryOp::Add:
      if (a.IsString() || b.IsString()) {
        return Value(Stringify(a) + Stringify(b));
      }
      break;
    default:
      break;
  }
  if (a.IsString() && b.IsString()) {
    const auto& x = a.AsString();
    const auto& y = b.AsString();
    switch (op) {
      case BinaryOp::Lt: return Value(x < y);
      case BinaryOp::Le: return Value(x <= y);
      case BinaryOp::Gt: return Value(x > y);
      case BinaryOp::Ge: return Value(x >= y);
      default: BadOperands(spelling, a, &b);
    }
  }
  if (!a.IsInt() || !b.IsInt()) BadOperands(spelling, a, &b);
  const BigInt& x = a.AsInt();
  const BigInt& y = b.AsInt();
  switch (op) {
    case BinaryOp::Add: return Value(BigInt(x + y));
    case BinaryOp::Sub: return Value(BigInt(x - y));
    case BinaryOp::Mul:
      CheckWidth(BitLength(x) + BitLength(y), "product");
      return Value(BigInt(x * y));
    case BinaryOp::Div:
    case BinaryOp::Mod:
      if (y == 0) {
        throw RuntimeError(RuntimeErrorKind::DivideByZero,
                           "division by zero: " + x.str() + " " + spelling +
                               " 0");
      }
      // cpp_int truncates toward zero; the remainder takes the dividend's sign.
      return Value(op == BinaryOp::Div ? BigInt(x / y) : BigInt(x % y));
    case BinaryOp::Pow: return Value(IntPow(x, y));
    case BinaryOp::Lt: return Value(x < y);
    case BinaryOp::Le: return Value(x <= y);
    case BinaryOp::Gt: return Value(x > y);
    case BinaryOp::Ge: return Value(x >= y);
    default: BadOperands(spelling, a, &b);
  }
}

Value Evaluator::Apply(UnaryOp op, const Value& a) {
  if (op == UnaryOp::Neg) {
    if (!a.IsInt()) BadOperands("-", a);
    return Value(BigInt(-a.AsInt()));
  }
  if (!a.IsBool()) BadOperands("!", a);
  return Value(!a.AsBool());
}

Value Evaluator::Eval(const Expr& e, const Env& env) {
  if (const auto* x = e.As<expr::IntLit>()) return Value(x->value);
  if (const auto* x = e.As<expr::BoolLit>()) return Value(x->value);
  if (const auto* x = e.As<expr::StrLit>()) return Value(x->value);
  if (const auto* x = e.As<expr::Var>()) {
    auto it = env.find(x->name);
    return it != env.end() ? it->second : Global(x->name);
  }
  if (e.Is<expr::This>()) {
    throw RuntimeError(RuntimeErrorKind::Unsupported,
                       "'this' is only usable as a call receiver");
  }
  if (const auto* x = e.As<expr::Unary>()) {
    return Apply(x->op, Eval(*x->operand, env));
  }
  if (const auto* x = e.As<expr::Binary>()) {
    Value lhs = Eval(*x->lhs, env);
    if (x->op == BinaryOp::And || x->op == BinaryOp::Or) {
      if (!lhs.IsBool()) BadOperands(Spelling(x->op), lhs);
      if (lhs.AsBool() == (x->op == BinaryOp::Or)) return lhs;
      Value rhs = Eval(*x->rhs, env);
      if (!rhs.IsBool()) BadOperands(Spelling(x->op), rhs);
      return rhs;
    }
    Value rhs = Eval(*x->rhs, env);
    if (x->op == BinaryOp::Add && lhs.IsTrait() && rhs.IsTrait()) {
      return TraitSum(lhs, rhs);
    }
    return Apply(x->op, lhs, rhs);
  }
  if (const auto* x = e.As<expr::Call>()) {
    if (IsSiblingCall(*x)) {
      std::vector<Value> args;
      for (const auto& a : x->args) args.push_back(Eval(*a, env));
      return CallUnqualified(x->name, std::move(args));
    }
    Value receiver = Eval(*x->receiver, env);
    std::vector<Value> args;
    for (const auto& a : x->args) args.push_back(Eval(*a, env));
    return CallOn(receiver, x->name, std::move(args));
  }
  if (const auto* x = e.As<expr::New>()) return New(x->class_name);
  return TraitExpr(e, env);
}

std::optional<Value> Evaluator::ExecStmt(const Stmt& s, Env& env) {
  if (const auto* x = std::get_if<stmt::LocalDecl>(&s.node)) {
    env[x->name] = Eval(*x->init, env);
    return std::nullopt;
  }
  if (const auto* x = std::get_if<stmt::Assign>(&s.node)) {
    env[x->name] = Eval(*x->value, env);
    return std::nullopt;
  }
  if (const auto* x = std::get_if<stmt::Return>(&s.node)) {
    return Eval(*x->value, env);
  }
  const auto& branch = std::get<stmt::If>(s.node);
  Value cond = Eval(*branch.cond, env);
  if (!cond.IsBool()) BadOperands("if", cond);
  if (cond.AsBool()) return ExecStmt(*branch.then, env);
  return std::nullopt;
}

Value Evaluator::Exec(const Body& body, Env& env, const std::string& where) {
  for (const auto& s : body) {
    if (auto result = ExecStmt(*s, env)) return std::move(*result);
  }
  throw RuntimeError(RuntimeErrorKind::MissingReturn,
                     where + " finished without returning");
}

Value Evaluator::CallOn(const Value& receiver, const std::string& name,
                        std::vector<Value>) {
  throw RuntimeError(RuntimeErrorKind::Unsupported,
                     "cannot call " + name + " on " + Render(receiver));
}

Value Evaluator::New(const std::string& class_name) {
  throw RuntimeError(RuntimeErrorKind::Unsupported,
                     "cannot instantiate " + class_name + " here");
}

Value Evaluator::Global(const std::string& name) {
  throw RuntimeError(RuntimeErrorKind::Unsupported, "unbound name " + name);
}

Value Evaluator::TraitExpr(const Expr&, const Env&) {
  throw RuntimeError(RuntimeErrorKind::Unsupported,
                     "trait expressions are only evaluated at compile time");
}

Value Evaluator::TraitSum(const Value&, const Value&) {
  throw RuntimeError(RuntimeErrorKind::Unsupported,
                     "trait expressions are only evaluated at compile time");
}

namespace {

thread_local bool on_large_stack = false;

struct ThreadTask {
  const std::function<void()>* fn;
  std::exception_ptr error;
};

void* RunTask(void* arg) {
  auto* task = static_cast<ThreadTask*>(arg);
  on_large_stack = true;
  try {
    (*task->fn)();
  } catch (...) {
    task->error = std::current_exception();
  }
  return nullptr;
}

}  // namespace

void RunWithLargeStack(const std::function<void()>& fn) {
  if (on_large_stack) {
    fn();
    return;
  }
  constexpr size_t kStackBytes = size_t{1} << 30;
  ThreadTask task{&fn, nullptr};
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, kStackBytes);
  pthread_t thread;
  int rc = pthread_create(&thread, &attr, RunTask, &task);
  pthread_attr_destroy(&attr);
  if (rc != 0) {
    fn();
    return;
  }
  pthread_join(thread, nullptr);
  if (task.error) std::rethrow_exception(task.error);
}

}  // namespace ctrait
