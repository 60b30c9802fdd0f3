#include "ctrait/parser.h"

#include <set>

#include "lexer.h"

namespace ctrait {

ParseError::ParseError(SourceSpan span, std::string message,
                       std::vector<std::string> expected)
    : std::runtime_error(span.file + ":" + std::to_string(span.start_line) +
                         ":" + std::to_string(span.start_col) + ": " +
                         message),
      span_(std::move(span)),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

namespace {

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file)
      : toks_(std::move(tokens)), file_(std::move(file)) {}

  Program ParseProgram() {
    Program p;
    while (!At(Tok::End)) {
      p.decls.push_back(ParseDecl());
      Accept(Tok::Semi);
    }
    return p;
  }

  ExprPtr ParseStandaloneExpr() {
    ExprPtr e = ParseExpr();
    Expect(Tok::End);
    return e;
  }

 private:
  // -- token plumbing -------------------------------------------------------

  const Token& Cur() const { return toks_[pos_]; }
  const Token& PeekTok(size_t n) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  bool At(Tok k) const { return Cur().kind == k; }

  const Token& Next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    last_ = &t;
    return t;
  }

  bool Accept(Tok k) {
    if (!At(k)) return false;
    Next();
    return true;
  }

  [[noreturn]] void Fail(std::vector<Tok> expected,
                         const std::string& what = {}) {
    std::vector<std::string> names;
    std::string list;
    for (size_t i = 0; i < expected.size(); ++i) {
      names.emplace_back(Describe(expected[i]));
      if (i) list += i + 1 == expected.size() ? " or " : ", ";
      list += names.back();
    }
    std::string found =
        At(Tok::End) ? "end of input" : "'" + Cur().text + "'";
    std::string message = "expected " + (what.empty() ? list : what) +
                          ", found " + found;
    throw ParseError(SpanOf(Cur()), message, std::move(names));
  }

  [[noreturn]] void FailAt(const Token& t, const std::string& message) {
    throw ParseError(SpanOf(t), message, {});
  }

  const Token& Expect(Tok k) {
    if (!At(k)) Fail({k});
    return Next();
  }

  SourceSpan SpanOf(const Token& t) const {
    return {file_, t.line, t.col, t.end_line, t.end_col};
  }

  SourceSpan SpanFrom(const Token& start) const {
    const Token& end = last_ ? *last_ : start;
    return {file_, start.line, start.col, end.end_line, end.end_col};
  }

  // -- declarations ---------------------------------------------------------

  static bool IsTypeTok(Tok k) {
    return k == Tok::KwIntType || k == Tok::KwBoolType ||
           k == Tok::KwStringType || k == Tok::KwTrait;
  }

  Decl ParseDecl() {
    const Token& start = Cur();
    if (At(Tok::KwTrait) && PeekTok(1).kind == Tok::Ident &&
        PeekTok(2).kind == Tok::Assign) {
      Next();
      std::string name = Next().text;
      Next();
      ExprPtr init = ParseExpr();
      trait_globals_.insert(name);
      return TraitDecl{name, init, SpanFrom(start)};
    }
    if (At(Tok::KwClass) && PeekTok(1).kind == Tok::Ident) {
      Next();
      std::string name = Next().text;
      Expect(Tok::Colon);
      ExprPtr init = ParseExpr();
      return ClassDecl{name, init, SpanFrom(start)};
    }
    if (!At(Tok::AtRequires) && !At(Tok::AtEnsures) && !IsTypeTok(Cur().kind)) {
      Fail({}, "a declaration ('Trait', 'class', or a function)");
    }
    return ParseFunction();
  }

  FunDecl ParseFunction() {
    const Token& start = Cur();
    FunDecl f;
    f.contract = ParseContracts();
    f.sig = ParseSignature();
    if (f.sig.ret.base == BaseType::Trait) trait_functions_.insert(f.sig.name);
    std::set<std::string> saved = trait_locals_;
    trait_locals_.clear();
    for (const auto& p : f.sig.params) {
      if (p.type.base == BaseType::Trait) trait_locals_.insert(p.name);
    }
    bool saved_assign = allow_assign_;
    allow_assign_ = true;
    f.body = ParseBlock();
    allow_assign_ = saved_assign;
    trait_locals_ = std::move(saved);
    f.span = SpanFrom(start);
    return f;
  }

  Contract ParseContracts() {
    Contract c;
    while (At(Tok::AtRequires) || At(Tok::AtEnsures)) {
      bool pre = At(Tok::AtRequires);
      Next();
      Expect(Tok::LParen);
      ExprPtr e = ParseExpr();
      Expect(Tok::RParen);
      (pre ? c.pre : c.post).push_back(e);
    }
    return c;
  }

  TypeName ParseType() {
    switch (Cur().kind) {
      case Tok::KwIntType: Next(); return TypeName::Int();
      case Tok::KwBoolType: Next(); return TypeName::Bool();
      case Tok::KwStringType: Next(); return TypeName::String();
      case Tok::KwTrait: Next(); return TypeName::Trait();
      default:
        Fail({Tok::KwIntType, Tok::KwBoolType, Tok::KwStringType,
              Tok::KwTrait});
    }
  }

  Signature ParseSignature() {
    Signature sig;
    sig.ret = ParseType();
    sig.name = Expect(Tok::Ident).text;
    Expect(Tok::LParen);
    if (!At(Tok::RParen)) {
      do {
        Param p;
        p.type = ParseType();
        p.name = Expect(Tok::Ident).text;
        sig.params.push_back(std::move(p));
      } while (Accept(Tok::Comma));
    }
    Expect(Tok::RParen);
    return sig;
  }

  MethodDecl ParseMethod() {
    const Token& start = Cur();
    MethodDecl m;
    m.contract = ParseContracts();
    m.declared_abstract = Accept(Tok::KwAbstract);
    m.sig = ParseSignature();
    if (Accept(Tok::Semi)) {
      m.span = SpanFrom(start);
      return m;
    }
    if (!At(Tok::LBrace)) Fail({Tok::LBrace, Tok::Semi});
    std::set<std::string> saved = trait_locals_;
    trait_locals_.clear();
    bool saved_assign = allow_assign_;
    allow_assign_ = false;
    m.body = ParseBlock();
    allow_assign_ = saved_assign;
    trait_locals_ = std::move(saved);
    m.span = SpanFrom(start);
    return m;
  }

  Body ParseBlock() {
    Expect(Tok::LBrace);
    Body body;
    while (!At(Tok::RBrace)) {
      if (At(Tok::End)) Fail({Tok::RBrace});
      body.push_back(ParseStmt());
    }
    Next();
    return body;
  }

  StmtPtr ParseStmt() {
    const Token& start = Cur();
    if (Accept(Tok::KwReturn)) {
      ExprPtr e = ParseExpr();
      Expect(Tok::Semi);
      return MakeReturn(e, SpanFrom(start));
    }
    if (Accept(Tok::KwIf)) {
      Expect(Tok::LParen);
      ExprPtr cond = ParseExpr();
      Expect(Tok::RParen);
      StmtPtr then = ParseStmt();
      return MakeIf(cond, then, SpanFrom(start));
    }
    if (IsTypeTok(Cur().kind)) {
      TypeName type = ParseType();
      std::string name = Expect(Tok::Ident).text;
      Expect(Tok::Assign);
      ExprPtr init = ParseExpr();
      Expect(Tok::Semi);
      if (type.base == BaseType::Trait) trait_locals_.insert(name);
      return MakeLocal(type, name, init, SpanFrom(start));
    }
    if (allow_assign_ && At(Tok::Ident) && PeekTok(1).kind == Tok::Assign) {
      std::string name = Next().text;
      Next();
      ExprPtr value = ParseExpr();
      Expect(Tok::Semi);
      return MakeAssign(name, value, SpanFrom(start));
    }
    Fail({}, "a statement ('return', 'if', or a local declaration)");
  }

  // -- expressions ----------------------------------------------------------

  // Decides whether `+` is trait sum. Trait-ness is syntactic here: literals,
  // adaptations, sums, names bound to traits, and calls of Trait-returning
  // functions. The typechecker rejects any `+` this misclassifies.
  bool IsTraitExpr(const Expr& e) const {
    if (e.Is<expr::TraitLit>() || e.Is<expr::Adapt>() || e.Is<expr::Sum>()) {
      return true;
    }
    if (const auto* v = e.As<expr::Var>()) {
      return trait_locals_.count(v->name) || trait_globals_.count(v->name);
    }
    if (const auto* c = e.As<expr::Call>()) {
      return c->receiver == nullptr && trait_functions_.count(c->name);
    }
    return false;
  }

  ExprPtr ParseExpr() { return ParseOr(); }

  ExprPtr ParseOr() {
    const Token& start = Cur();
    ExprPtr lhs = ParseAnd();
    while (Accept(Tok::OrOr)) {
      ExprPtr rhs = ParseAnd();
      lhs = MakeBinary(BinaryOp::Or, lhs, rhs, SpanFrom(start));
    }
    return lhs;
  }

  ExprPtr ParseAnd() {
    const Token& start = Cur();
    ExprPtr lhs = ParseCompare();
    while (Accept(Tok::AndAnd)) {
      ExprPtr rhs = ParseCompare();
      lhs = MakeBinary(BinaryOp::And, lhs, rhs, SpanFrom(start));
    }
    return lhs;
  }

  static std::optional<BinaryOp> CompareOp(Tok k) {
    switch (k) {
      case Tok::EqEq: return BinaryOp::Eq;
      case Tok::NotEq: return BinaryOp::Ne;
      case Tok::Lt: return BinaryOp::Lt;
      case Tok::Le: return BinaryOp::Le;
      case Tok::Gt: return BinaryOp::Gt;
      case Tok::Ge: return BinaryOp::Ge;
      default: return std::nullopt;
    }
  }

  ExprPtr ParseCompare() {
    const Token& start = Cur();
    ExprPtr lhs = ParseAdditive();
    if (auto op = CompareOp(Cur().kind)) {
      Next();
      ExprPtr rhs = ParseAdditive();
      lhs = MakeBinary(*op, lhs, rhs, SpanFrom(start));
      if (CompareOp(Cur().kind)) {
        FailAt(Cur(), "comparison operators are non-associative; "
                      "parenthesize the operands");
      }
    }
    return lhs;
  }

  ExprPtr ParseAdditive() {
    const Token& start = Cur();
    ExprPtr lhs = ParseMultiplicative();
    for (;;) {
      if (Accept(Tok::Plus)) {
        ExprPtr rhs = ParseMultiplicative();
        if (IsTraitExpr(*lhs) || IsTraitExpr(*rhs)) {
          lhs = MakeSum(lhs, rhs, SpanFrom(start));
        } else {
          lhs = MakeBinary(BinaryOp::Add, lhs, rhs, SpanFrom(start));
        }
      } else if (Accept(Tok::Minus)) {
        ExprPtr rhs = ParseMultiplicative();
        lhs = MakeBinary(BinaryOp::Sub, lhs, rhs, SpanFrom(start));
      } else {
        return lhs;
      }
    }
  }

  ExprPtr ParseMultiplicative() {
    const Token& start = Cur();
    ExprPtr lhs = ParsePower();
    for (;;) {
      BinaryOp op;
      if (At(Tok::Star)) {
        op = BinaryOp::Mul;
      } else if (At(Tok::Slash)) {
        op = BinaryOp::Div;
      } else if (At(Tok::Percent)) {
        op = BinaryOp::Mod;
      } else {
        return lhs;
      }
      Next();
      ExprPtr rhs = ParsePower();
      lhs = MakeBinary(op, lhs, rhs, SpanFrom(start));
    }
  }

  ExprPtr ParsePower() {
    const Token& start = Cur();
    ExprPtr base = ParseUnary();
    if (Accept(Tok::StarStar)) {
      ExprPtr exponent = ParsePower();
      return MakeBinary(BinaryOp::Pow, base, exponent, SpanFrom(start));
    }
    return base;
  }

  ExprPtr ParseUnary() {
    const Token& start = Cur();
    if (Accept(Tok::Minus)) {
      ExprPtr operand = ParseUnary();
      // `-3` is a literal, so that printing a negative literal round-trips.
      if (const auto* lit = operand->As<expr::IntLit>();
          lit && start.line == operand->span.start_line &&
          start.col + 1 == operand->span.start_col && lit->value >= 0) {
        return MakeInt(-lit->value, SpanFrom(start));
      }
      return MakeUnary(UnaryOp::Neg, operand, SpanFrom(start));
    }
    if (Accept(Tok::Bang)) {
      ExprPtr operand = ParseUnary();
      return MakeUnary(UnaryOp::Not, operand, SpanFrom(start));
    }
    return ParsePostfix();
  }

  ExprPtr ParsePostfix() {
    const Token& start = Cur();
    ExprPtr e = ParsePrimary();
    for (;;) {
      if (Accept(Tok::Dot)) {
        std::string name = Expect(Tok::Ident).text;
        std::vector<ExprPtr> args = ParseArgs();
        e = MakeCall(e, name, std::move(args), SpanFrom(start));
      } else if (Accept(Tok::LBracket)) {
        Adaptation a = ParseAdaptation();
        Expect(Tok::RBracket);
        e = MakeAdapt(e, std::move(a), SpanFrom(start));
      } else {
        return e;
      }
    }
  }

  std::vector<ExprPtr> ParseArgs() {
    Expect(Tok::LParen);
    std::vector<ExprPtr> args;
    if (!At(Tok::RParen)) {
      do {
        args.push_back(ParseExpr());
      } while (Accept(Tok::Comma));
    }
    Expect(Tok::RParen);
    return args;
  }

  SigRef ParseSigRef() {
    const Token& start = Cur();
    SigRef ref;
    ref.name = Expect(Tok::Ident).text;
    Expect(Tok::LParen);
    if (!At(Tok::RParen)) {
      do {
        ref.params.push_back(Expect(Tok::Ident).text);
      } while (Accept(Tok::Comma));
    }
    Expect(Tok::RParen);
    ref.span = SpanFrom(start);
    return ref;
  }

  Adaptation ParseAdaptation() {
    if (Accept(Tok::KwRename)) {
      RenameAdaptation r;
      do {
        SigRef from = ParseSigRef();
        Expect(Tok::Arrow);
        SigRef to = ParseSigRef();
        r.mappings.emplace_back(std::move(from), std::move(to));
      } while (Accept(Tok::Comma));
      return r;
    }
    if (Accept(Tok::KwHide)) {
      HideAdaptation h;
      do {
        h.names.push_back(ParseSigRef());
      } while (Accept(Tok::Comma));
      return h;
    }
    Fail({Tok::KwRename, Tok::KwHide});
  }

  ExprPtr ParsePrimary() {
    const Token& start = Cur();
    switch (Cur().kind) {
      case Tok::Int: {
        BigInt value(Next().text);
        return MakeInt(value, SpanFrom(start));
      }
      case Tok::Str: return MakeStr(Next().text, SpanFrom(start));
      case Tok::KwTrue: Next(); return MakeBool(true, SpanFrom(start));
      case Tok::KwFalse: Next(); return MakeBool(false, SpanFrom(start));
      case Tok::KwThis: Next(); return MakeThis(SpanFrom(start));
      case Tok::KwNew: {
        Next();
        std::string name = Expect(Tok::Ident).text;
        Expect(Tok::LParen);
        Expect(Tok::RParen);
        return MakeNew(name, SpanFrom(start));
      }
      case Tok::KwClass: {
        Next();
        Expect(Tok::LBrace);
        std::vector<MethodDecl> methods;
        while (!At(Tok::RBrace)) {
          if (At(Tok::End)) Fail({Tok::RBrace});
          methods.push_back(ParseMethod());
        }
        Next();
        return MakeTraitLit(std::move(methods), SpanFrom(start));
      }
      case Tok::LParen: {
        Next();
        ExprPtr e = ParseExpr();
        Expect(Tok::RParen);
        return e;
      }
      case Tok::Ident: {
        std::string name = Next().text;
        if (At(Tok::LParen)) {
          std::vector<ExprPtr> args = ParseArgs();
          return MakeCall(nullptr, name, std::move(args), SpanFrom(start));
        }
        return MakeVar(name, SpanFrom(start));
      }
      default:
        Fail({}, "an expression");
    }
  }

  std::vector<Token> toks_;
  std::string file_;
  size_t pos_ = 0;
  const Token* last_ = nullptr;
  bool allow_assign_ = false;
  std::set<std::string> trait_globals_;
  std::set<std::string> trait_functions_;
  std::set<std::string> trait_locals_;
};

}  // namespace

Program ParseProgram(std::string_view source, std::string file) {
  return Parser(Lex(source, file), file).ParseProgram();
}

ExprPtr ParseExpr(std::string_view source, std::string file) {
  return Parser(Lex(source, file), file).ParseStandaloneExpr();
}

}  // namespace ctrait
