#include "generator.h"

#include <algorithm>
#include <set>

#include "ctrait/compose.h"
#include "ctrait/parser.h"
#include "ctrait/printer.h"

namespace ctrait::testgen {

const std::vector<LibrarySpec>& Library() {
  static const std::vector<LibrarySpec> kLibrary = {
      {"k0", "@ensures(result == 3) Int k0()",
       {"{ return 3; }", "{ return 1 + 2; }"}},
      {"k1", "@ensures(result > 0) Int k1()",
       {"{ return 5; }", "{ return 2; }"}},
      {"inc", "@requires(x >= -8 && x <= 8) @ensures(result == x + 1) Int inc(Int x)",
       {"{ return x + 1; }", "{ Int y = x + 1; return y; }"}},
      {"dbl", "@ensures(result == 2 * x) Int dbl(Int x)",
       {"{ return x + x; }", "{ return 2 * x; }"}},
      {"sq", "@ensures(result == x * x) Int sq(Int x)",
       {"{ return x * x; }", "{ Int y = x; return y * x; }"}},
      {"neg", "@ensures(result == -x) Int neg(Int x)",
       {"{ return 0 - x; }", "{ return -x; }"}},
      {"absv",
       "@ensures(result >= 0) @ensures(result == x || result == -x) Int absv(Int x)",
       {"{ if (x < 0) return -x; return x; }",
        "{ if (x >= 0) return x; return 0 - x; }"}},
      {"pos", "@ensures(result == (x > 0)) Bool pos(Int x)",
       {"{ return x > 0; }", "{ return !(x <= 0); }"}},
      {"clamp", "@ensures(result >= -5) @ensures(result <= 5) Int clamp(Int x)",
       {"{ if (x > 5) return 5; if (x < -5) return -5; return x; }",
        "{ Int lo = -5; if (x < lo) return lo; if (x > 5) return 5; return x; }"}},
      {"lbl", "@ensures(result == \"n\" + x) String lbl(Int x)",
       {"{ return \"n\" + x; }"}},
  };
  return kLibrary;
}

const std::vector<ClientSpec>& Clients() {
  static const std::vector<ClientSpec> kClients = {
      {"f", "@ensures(result == 2 * x + 1) Int f(Int x) { return inc(dbl(x)); }",
       {"inc", "dbl"}},
      {"g", "@ensures(result >= 0) Int g(Int x) { return sq(x) + absv(x); }",
       {"sq", "absv"}},
      {"h", "@ensures(result > 3) Int h() { return k0() + k1(); }",
       {"k0", "k1"}},
      {"q", "@ensures(result == (x != 0)) Bool q(Int x) { return pos(sq(x)); }",
       {"pos", "sq"}},
      {"cube",
       "@requires(x >= -4 && x <= 4) @ensures(result == x * x * x) "
       "Int cube(Int x) { Int s = sq(x); return s * x; }",
       {"sq"}},
      {"sq1", "@ensures(result == sq(x) + 1) Int sq1(Int x) { return sq(x) + 1; }",
       {"sq"}},
      {"pdec", "@requires(pos(x)) @ensures(result >= 0) Int pdec(Int x) { return x - 1; }",
       {"pos"}},
      {"sgn",
       "@ensures(result >= -1 && result <= 1) Int sgn(Int x) "
       "{ if (pos(x)) return 1; if (x == 0) return 0; return -1; }",
       {"pos"}},
      {"tag",
       "@ensures(result == \"n\" + (x + 1)) String tag(Int x) { return lbl(inc(x)); }",
       {"lbl", "inc"}},
      {"mix", "@ensures(result == 2 * x + 4) Int mix(Int x) { return f(x) + k0(); }",
       {"f", "k0"}},
      {"cs", "@ensures(result <= 5) Int cs(Int x) { return clamp(sq(x)); }",
       {"clamp", "sq"}},
      {"twice", "@ensures(result == 4 * x) Int twice(Int x) { Int d = dbl(x); return dbl(d); }",
       {"dbl"}},
  };
  return kClients;
}

MethodDecl ParseMethod(const std::string& text) {
  Program p = ParseProgram("Trait t = class { " + text + " }", "<generated>");
  const auto& lit =
      std::get<TraitDecl>(p.decls.at(0)).init->As<expr::TraitLit>();
  return lit->methods.at(0);
}

namespace {

const LibrarySpec* FindLibrary(const std::string& name) {
  for (const auto& s : Library()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const ClientSpec* FindClient(const std::string& name) {
  for (const auto& c : Clients()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string SigRefText(const MethodDecl& m, const std::string& name) {
  std::string out = name + "(";
  for (size_t i = 0; i < m.Arity(); ++i) {
    out += (i ? ", " : "") + m.sig.params[i].name;
  }
  return out + ")";
}

SigRef MakeRef(const MethodDecl& m, const std::string& name) {
  SigRef ref;
  ref.name = name;
  for (const auto& p : m.sig.params) ref.params.push_back(p.name);
  return ref;
}

std::vector<std::string> PublicNames(const TraitValue& t) {
  std::vector<std::string> out;
  for (const auto& [name, m] : t.methods) {
    if (m.IsPublic()) out.push_back(name);
  }
  return out;
}

}  // namespace

MethodDecl Generator::Provide(const std::string& spec_name,
                              const std::string& name) {
  const LibrarySpec* spec = FindLibrary(spec_name);
  const auto& body = spec->bodies[Uniform(0, spec->bodies.size() - 1)];
  MethodDecl m = ParseMethod(spec->header + " " + body);
  m.sig.name = name;
  return m;
}

TraitValue Generator::SourceTrait() {
  TraitValue t;
  std::vector<std::string> work;
  int clients = Uniform(1, 3);
  for (int i = 0; i < clients; ++i) {
    work.push_back(Clients()[Uniform(0, Clients().size() - 1)].name);
  }
  int extra = Uniform(0, 2);
  for (int i = 0; i < extra; ++i) {
    work.push_back(Library()[Uniform(0, Library().size() - 1)].name);
  }
  while (!work.empty()) {
    std::string name = work.back();
    work.pop_back();
    if (t.Has(name)) continue;
    if (const ClientSpec* c = FindClient(name)) {
      t.methods.emplace(name, ParseMethod(c->source));
      work.insert(work.end(), c->deps.begin(), c->deps.end());
    } else if (Coin(0.6)) {
      t.methods.emplace(name, Provide(name, name));
    } else {
      t.methods.emplace(name, ParseMethod(FindLibrary(name)->header + ";"));
    }
  }
  return t;
}

TraitValue Generator::CompleteTrait() {
  TraitValue t = SourceTrait();
  TraitValue provider;
  for (const auto& [name, m] : t.methods) {
    if (m.IsAbstract()) provider.methods.emplace(name, Provide(name, name));
  }
  return Sum(t, provider);
}

std::optional<Pipeline> Generator::NextPipeline(int max_depth) {
  std::vector<std::string> decls;
  std::map<std::string, std::string> spec_of;
  int trait_count = 0;
  auto add_source = [&](TraitValue& t) {
    t = SourceTrait();
    std::string name = "t" + std::to_string(++trait_count);
    decls.push_back("Trait " + name + " = " + Print(t) + "\n");
    for (const auto& [m, _] : t.methods) {
      if (FindLibrary(m)) spec_of[m] = m;
    }
    return name;
  };

  Pipeline out;
  TraitValue cur;
  std::string expr = add_source(cur);
  int ops = Uniform(1, std::max(1, max_depth - 1));
  try {
    for (int i = 0; i < ops; ++i) {
      int kind = Uniform(0, 2);
      auto names = PublicNames(cur);
      if (kind == 0 || names.empty()) {
        TraitValue next;
        std::string name = add_source(next);
        cur = Sum(cur, next);
        expr = "(" + expr + " + " + name + ")";
      } else if (kind == 1) {
        std::shuffle(names.begin(), names.end(), rng_);
        int count = std::min<int>(names.size(), Uniform(1, 2));
        std::vector<std::pair<SigRef, SigRef>> mappings;
        std::string text;
        for (int k = 0; k < count; ++k) {
          const MethodDecl& m = *cur.Find(names[k]);
          std::string target = names[k] + "_r" + std::to_string(++fresh_);
          mappings.emplace_back(MakeRef(m, names[k]), MakeRef(m, target));
          text += std::string(k ? ", " : "") + SigRefText(m, names[k]) +
                  " -> " + SigRefText(m, target);
          if (auto it = spec_of.find(names[k]); it != spec_of.end()) {
            spec_of[target] = it->second;
          }
        }
        cur = Rename(cur, mappings);
        expr += "[rename " + text + "]";
      } else {
        const std::string& name = names[Uniform(0, names.size() - 1)];
        const MethodDecl& m = *cur.Find(name);
        std::string text = SigRefText(m, name);
        cur = Hide(cur, {MakeRef(m, name)});
        expr += "[hide " + text + "]";
      }
      ++out.depth;
    }
    TraitValue provider;
    for (const auto& [name, m] : cur.methods) {
      if (m.IsAbstract()) {
        provider.methods.emplace(name, Provide(spec_of.at(name), name));
      }
    }
    if (!provider.methods.empty()) {
      cur = Sum(cur, provider);
      decls.push_back("Trait prov = " + Print(provider) + "\n");
      expr = "(" + expr + " + prov)";
      ++out.depth;
    }
  } catch (const ComposeError&) {
    return std::nullopt;
  }
  for (const auto& d : decls) out.source += d + "\n";
  out.source += "class P: " + expr + "\n";
  out.expression = expr;
  return out;
}

ExprPtr Generator::ArbitraryExpr(int depth, bool boolean) {
  if (boolean) {
    int pick = depth <= 0 ? Uniform(0, 1) : Uniform(0, 5);
    switch (pick) {
      case 0: return MakeBool(Coin());
      case 1:
      case 2: {
        static const BinaryOp kCmp[] = {BinaryOp::Eq, BinaryOp::Ne, BinaryOp::Lt,
                                        BinaryOp::Le, BinaryOp::Gt, BinaryOp::Ge};
        return MakeBinary(kCmp[Uniform(0, 5)], ArbitraryExpr(depth - 1, false),
                          ArbitraryExpr(depth - 1, false));
      }
      case 3: return MakeUnary(UnaryOp::Not, ArbitraryExpr(depth - 1, true));
      default:
        return MakeBinary(Coin() ? BinaryOp::And : BinaryOp::Or,
                          ArbitraryExpr(depth - 1, true),
                          ArbitraryExpr(depth - 1, true));
    }
  }
  int pick = depth <= 0 ? Uniform(0, 1) : Uniform(0, 5);
  switch (pick) {
    case 0: return MakeInt(BigInt(Uniform(-20, 20)));
    case 1: {
      static const char* kVars[] = {"x", "y", "result"};
      return MakeVar(kVars[Uniform(0, 2)]);
    }
    case 2: return MakeUnary(UnaryOp::Neg, ArbitraryExpr(depth - 1, false));
    case 3: {
      std::vector<ExprPtr> args;
      int n = Uniform(0, 2);
      for (int i = 0; i < n; ++i) args.push_back(ArbitraryExpr(depth - 1, false));
      return MakeCall(Coin() ? nullptr : MakeThis(),
                      "m" + std::to_string(n), std::move(args));
    }
    default: {
      static const BinaryOp kArith[] = {BinaryOp::Add, BinaryOp::Sub,
                                        BinaryOp::Mul, BinaryOp::Div,
                                        BinaryOp::Mod, BinaryOp::Pow};
      return MakeBinary(kArith[Uniform(0, 5)], ArbitraryExpr(depth - 1, false),
                        ArbitraryExpr(depth - 1, false));
    }
  }
}

TraitValue Generator::ArbitraryTrait() {
  TraitValue t;
  int count = Uniform(1, 4);
  for (int i = 0; i < count; ++i) {
    MethodDecl m;
    m.sig.name = "m" + std::to_string(i);
    int arity = Uniform(0, 2);
    static const char* kParams[] = {"x", "y"};
    for (int k = 0; k < arity; ++k) {
      m.sig.params.push_back({kParams[k], TypeName::Int()});
    }
    m.sig.ret = Coin(0.8) ? TypeName::Int() : TypeName::Bool();
    int pre = Uniform(0, 2);
    for (int k = 0; k < pre; ++k) m.contract.pre.push_back(ArbitraryExpr(3, true));
    int post = Uniform(0, 2);
    for (int k = 0; k < post; ++k) m.contract.post.push_back(ArbitraryExpr(3, true));
    if (Coin(0.8)) {
      Body body;
      int locals = Uniform(0, 2);
      for (int k = 0; k < locals; ++k) {
        body.push_back(MakeLocal(TypeName::Int(), "v" + std::to_string(k),
                                 ArbitraryExpr(3, false)));
      }
      bool boolean = m.sig.ret == TypeName::Bool();
      if (Coin()) {
        body.push_back(MakeIf(ArbitraryExpr(2, true),
                              MakeReturn(ArbitraryExpr(3, boolean))));
      }
      body.push_back(MakeReturn(ArbitraryExpr(4, boolean)));
      m.body = std::move(body);
    }
    t.methods.emplace(m.sig.name, std::move(m));
  }
  return t;
}

}  // namespace ctrait::testgen
