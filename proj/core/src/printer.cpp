#include "ctrait/printer.h"

#include <algorithm>
#include <sstream>

namespace ctrait {
namespace {

// Binding strength, loosest first. Must agree with the parser.
enum Prec {
  kOr = 1,
  kAnd,
  kCompare,
  kAdditive,
  kMultiplicative,
  kPower,
  kUnary,
  kPostfix,
};

int PrecOf(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return kOr;
    case BinaryOp::And: return kAnd;
    case BinaryOp::Eq: case BinaryOp::Ne: case BinaryOp::Lt:
    case BinaryOp::Le: case BinaryOp::Gt: case BinaryOp::Ge:
      return kCompare;
    case BinaryOp::Add: case BinaryOp::Sub: return kAdditive;
    case BinaryOp::Mul: case BinaryOp::Div: case BinaryOp::Mod:
      return kMultiplicative;
    case BinaryOp::Pow: return kPower;
  }
  return kPostfix;
}

int PrecOf(const Expr& e) {
  if (const auto* b = e.As<expr::Binary>()) return PrecOf(b->op);
  if (e.Is<expr::Sum>()) return kAdditive;
  if (e.Is<expr::Unary>()) return kUnary;
  if (const auto* lit = e.As<expr::IntLit>(); lit && lit->value < 0) {
    return kUnary;
  }
  return kPostfix;
}

std::string Indent(int n) { return std::string(static_cast<size_t>(n), ' '); }

class Printer {
 public:
  explicit Printer(int indent) : indent_(indent) {}

  std::string Expr(const ctrait::Expr& e, int min_prec = 0) {
    std::string text = Raw(e);
    if (PrecOf(e) < min_prec) return "(" + text + ")";
    return text;
  }

 private:
  std::string Raw(const ctrait::Expr& e) {
    return std::visit(
        [&](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, expr::IntLit>) {
            return x.value.str();
          } else if constexpr (std::is_same_v<T, expr::BoolLit>) {
            return x.value ? "true" : "false";
          } else if constexpr (std::is_same_v<T, expr::StrLit>) {
            return QuoteString(x.value);
          } else if constexpr (std::is_same_v<T, expr::Var>) {
            return x.name;
          } else if constexpr (std::is_same_v<T, expr::This>) {
            return "this";
          } else if constexpr (std::is_same_v<T, expr::Unary>) {
            // A literal or another unary as operand would fold or glue
            // (`- -x`, `-3`), so it is always parenthesized.
            const auto& operand = *x.operand;
            bool paren = std::holds_alternative<expr::IntLit>(operand.node) ||
                         std::holds_alternative<expr::Unary>(operand.node) || PrecOf(operand) < kUnary;
            std::string inner = Raw(operand);
            return std::string(Spelling(x.op)) +
                   (paren ? "(" + inner + ")" : inner);
          } else if constexpr (std::is_same_v<T, expr::Binary>) {
            int p = PrecOf(x.op);
            int lhs_min = p;
            int rhs_min = p + 1;
            if (x.op == BinaryOp::Pow) {
              lhs_min = p + 1;
              rhs_min = p;
            } else if (p == kCompare) {
              lhs_min = p + 1;
            }
            return Expr(*x.lhs, lhs_min) + " " + Spelling(x.op) + " " +
                   Expr(*x.rhs, rhs_min);
          } else if constexpr (std::is_same_v<T, expr::Sum>) {
            return Expr(*x.lhs, kAdditive) + " + " +
                   Expr(*x.rhs, kAdditive + 1);
          } else if constexpr (std::is_same_v<T, expr::Call>) {
            std::string out;
            if (x.receiver) out = Expr(*x.receiver, kPostfix) + ".";
            out += x.name + "(";
            for (size_t i = 0; i < x.args.size(); ++i) {
              if (i) out += ", ";
              out += Expr(*x.args[i]);
            }
            return out + ")";
          } else if constexpr (std::is_same_v<T, expr::New>) {
            return "new " + x.class_name + "()";
          } else if constexpr (std::is_same_v<T, expr::TraitLit>) {
            return Print(ToTraitValue(x.methods), indent_);
          } else {
            static_assert(std::is_same_v<T, expr::Adapt>);
            std::string out = Expr(*x.target, kPostfix) + "[";
            if (const auto* r = std::get_if<RenameAdaptation>(&x.adaptation)) {
              out += "rename ";
              for (size_t i = 0; i < r->mappings.size(); ++i) {
                if (i) out += ", ";
                out += PrintSigRef(r->mappings[i].first) + " -> " +
                       PrintSigRef(r->mappings[i].second);
              }
            } else {
              const auto& h = std::get<HideAdaptation>(x.adaptation);
              out += "hide ";
              for (size_t i = 0; i < h.names.size(); ++i) {
                if (i) out += ", ";
                out += PrintSigRef(h.names[i]);
              }
            }
            return out + "]";
          }
        },
        e.node);
  }

  int indent_;
};

std::string PrintBody(const Body& body, int indent) {
  std::string out;
  for (const auto& s : body) out += Print(*s, indent);
  return out;
}

std::string StmtInline(const Stmt& s, int indent) {
  Printer p(indent);
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, stmt::LocalDecl>) {
          return ToString(x.type) + " " + x.name + " = " + p.Expr(*x.init) +
                 ";";
        } else if constexpr (std::is_same_v<T, stmt::Assign>) {
          return x.name + " = " + p.Expr(*x.value) + ";";
        } else if constexpr (std::is_same_v<T, stmt::Return>) {
          return "return " + p.Expr(*x.value) + ";";
        } else {
          return "if (" + p.Expr(*x.cond) + ") " + StmtInline(*x.then, indent);
        }
      },
      s.node);
}

}  // namespace

std::string QuoteString(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string Print(const Expr& e) { return Printer(0).Expr(e); }

std::string Print(const ExprPtr& e) { return e ? Print(*e) : "<null>"; }

std::string Print(const Stmt& s, int indent) {
  return Indent(indent) + StmtInline(s, indent) + "\n";
}

std::string PrintSignature(const Signature& sig) {
  std::string out = ToString(sig.ret) + " " + sig.name + "(";
  for (size_t i = 0; i < sig.params.size(); ++i) {
    if (i) out += ", ";
    out += ToString(sig.params[i].type) + " " + sig.params[i].name;
  }
  return out + ")";
}

std::string PrintSigRef(const SigRef& ref) {
  std::string out = ref.name + "(";
  for (size_t i = 0; i < ref.params.size(); ++i) {
    if (i) out += ", ";
    out += ref.params[i];
  }
  return out + ")";
}

std::string PrintContract(const Contract& c, int indent) {
  std::string out;
  for (const auto& p : c.pre) {
    out += Indent(indent) + "@requires(" + Printer(indent).Expr(*p) + ")\n";
  }
  for (const auto& p : c.post) {
    out += Indent(indent) + "@ensures(" + Printer(indent).Expr(*p) + ")\n";
  }
  return out;
}

std::string Print(const MethodDecl& m, int indent) {
  std::string out = PrintContract(m.contract, indent);
  out += Indent(indent);
  if (!m.IsPublic()) out += "private ";
  if (m.IsAbstract()) return out + "abstract " + PrintSignature(m.sig) + ";\n";
  out += PrintSignature(m.sig) + " {\n";
  out += PrintBody(*m.body, indent + 2);
  return out + Indent(indent) + "}\n";
}

std::string Print(const TraitValue& t, int indent) {
  std::string out = "class {\n";
  for (const auto& [name, m] : t.methods) out += Print(m, indent + 2);
  return out + Indent(indent) + "}";
}

std::string Print(const Program& p) {
  std::string out;
  for (size_t i = 0; i < p.decls.size(); ++i) {
    if (i) out += "\n";
    const Decl& d = p.decls[i];
    if (const auto* t = std::get_if<TraitDecl>(&d)) {
      out += "Trait " + t->name + " = " + Printer(0).Expr(*t->init) + "\n";
    } else if (const auto* c = std::get_if<ClassDecl>(&d)) {
      out += "class " + c->name + ": " + Printer(0).Expr(*c->init) + "\n";
    } else {
      const auto& f = std::get<FunDecl>(d);
      out += PrintContract(f.contract, 0);
      out += PrintSignature(f.sig) + " {\n" + PrintBody(f.body, 2) + "}\n";
    }
  }
  return out;
}

}  // namespace ctrait
