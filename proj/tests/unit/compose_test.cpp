#include <gtest/gtest.h>

#include "ctrait/compose.h"
#include "ctrait/printer.h"
#include "generator.h"
#include "helpers.h"

namespace ctrait {
namespace {

using testgen::TraitOf;

SigRef Ref(std::string name, std::vector<std::string> params = {}) {
  SigRef r;
  r.name = std::move(name);
  r.params = std::move(params);
  return r;
}

ComposeErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ComposeError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no ComposeError";
  return ComposeErrorKind::BothConcrete;
}

TEST(Sum, ConcreteSideWins) {
  TraitValue a = TraitOf("class { Int f() { return 1; } }");
  TraitValue b = TraitOf("class { abstract Int f(); Int g() { return f(); } }");
  TraitValue s = Sum(a, b);
  ASSERT_EQ(s.methods.size(), 2u);
  EXPECT_FALSE(s.Find("f")->IsAbstract());
  EXPECT_TRUE(StructurallyEqual(Sum(a, b), Sum(b, a)));
}

TEST(Sum, Conflicts) {
  TraitValue a = TraitOf("class { Int f() { return 1; } }");
  EXPECT_EQ(KindOf([&] { Sum(a, a); }), ComposeErrorKind::BothConcrete);
  TraitValue b = TraitOf("class { abstract Bool f(); }");
  EXPECT_EQ(KindOf([&] { Sum(a, b); }), ComposeErrorKind::SignatureMismatch);
  TraitValue c = TraitOf("class { abstract Int f(Int x); }");
  EXPECT_EQ(KindOf([&] { Sum(a, c); }), ComposeErrorKind::SignatureMismatch);
  TraitValue d = TraitOf("class { @ensures(result > 0) abstract Int f(); }");
  EXPECT_EQ(KindOf([&] { Sum(a, d); }), ComposeErrorKind::ContractMismatch);
}

TEST(Sum, ContractsCompareUpToParameterNames) {
  TraitValue a = TraitOf(
      "class { @requires(x > 0) @ensures(result == x + 1) Int f(Int x) "
      "{ return x + 1; } }");
  TraitValue b = TraitOf(
      "class { @ensures(result == y + 1) @requires(y > 0) abstract Int f(Int y); }");
  EXPECT_NO_THROW(Sum(a, b));
  TraitValue c = TraitOf(
      "class { @requires(y > 0) @ensures(result == 1 + y) abstract Int f(Int y); }");
  EXPECT_EQ(KindOf([&] { Sum(a, c); }), ComposeErrorKind::ContractMismatch);
}

TEST(Sum, MismatchReportsBothContracts) {
  TraitValue a = TraitOf("class { @ensures(result >= 0) Int f() { return 1; } }");
  TraitValue b = TraitOf("class { @ensures(result > 0) abstract Int f(); }");
  try {
    Sum(a, b);
    FAIL();
  } catch (const ComposeError& e) {
    EXPECT_EQ(e.method(), "f");
    EXPECT_NE(e.left_contract().find("result >= 0"), std::string::npos);
    EXPECT_NE(e.right_contract().find("result > 0"), std::string::npos);
  }
}

TEST(Sum, PrivateNamesClash) {
  TraitValue priv =
      TraitOf("class { Int k() { return 2; } Int g() { return k() + k(); } }");
  priv.methods.at("k").visibility = Visibility::Private;
  TraitValue other = TraitOf("class { Int k() { return 3; } }");
  EXPECT_EQ(KindOf([&] { Sum(priv, other); }), ComposeErrorKind::PrivateNameClash);
}

TEST(Rename, RenamesDeclarationsCallsAndContracts) {
  TraitValue t = TraitOf(
      "class { @ensures(result > 0) Int e() { return 1; } "
      "@ensures(result == x ** e()) Int p(Int x) { return x; } }");
  TraitValue r = Rename(t, {{Ref("e"), Ref("_e")}, {Ref("p", {"x"}), Ref("_p", {"x"})}});
  ASSERT_TRUE(r.Has("_e"));
  ASSERT_TRUE(r.Has("_p"));
  EXPECT_FALSE(r.Has("e"));
  EXPECT_EQ(Print(r.Find("_p")->contract.post[0]), "result == x ** _e()");
}

TEST(Rename, IsSimultaneous) {
  TraitValue t = TraitOf(
      "class { Int a() { return 1; } Int b() { return a() + 1; } }");
  TraitValue r = Rename(t, {{Ref("a"), Ref("b")}, {Ref("b"), Ref("a")}});
  EXPECT_EQ(Print(*r.Find("a")->body->at(0)), "return b() + 1;\n");
  EXPECT_EQ(Print(*r.Find("b")->body->at(0)), "return 1;\n");
}

TEST(Rename, Errors) {
  TraitValue t = TraitOf("class { Int a() { return 1; } Int b(Int x) { return x; } }");
  EXPECT_EQ(KindOf([&] { Rename(t, {{Ref("zz"), Ref("y")}}); }),
            ComposeErrorKind::UnknownMethod);
  EXPECT_EQ(KindOf([&] { Rename(t, {{Ref("a"), Ref("b")}}); }),
            ComposeErrorKind::RenameCollision);
  EXPECT_EQ(KindOf([&] { Rename(t, {{Ref("a"), Ref("c")}, {Ref("a"), Ref("d")}}); }),
            ComposeErrorKind::RenameCollision);
  EXPECT_EQ(KindOf([&] {
              Rename(t, {{Ref("a"), Ref("c")}, {Ref("b", {"x"}), Ref("c", {"x"})}});
            }),
            ComposeErrorKind::RenameCollision);
  EXPECT_EQ(KindOf([&] { Rename(t, {{Ref("b"), Ref("c")}}); }),
            ComposeErrorKind::SignatureMismatch);
}

TEST(Hide, InlinesHelloIntoWorld) {
  TraitValue ab = Sum(TraitOf("class { Int hello() { return 1; } }"),
                      TraitOf("class { abstract Int hello(); String world() "
                              "{ return \"[\" + this.hello() + \"]\"; } }"));
  TraitValue h = Hide(ab, {Ref("hello")});
  ASSERT_EQ(h.methods.size(), 1u);
  EXPECT_EQ(Print(h), "class {\n  String world() {\n    return \"[\" + 1 + \"]\";\n  }\n}");
}

TEST(Hide, HoistsArgumentsAsFreshLocals) {
  TraitValue t = TraitOf(
      "class { Int sq(Int x) { return x * x; } "
      "Int four(Int x) { return sq(sq(x)); } }");
  TraitValue h = Hide(t, {Ref("sq", {"x"})});
  ASSERT_EQ(h.methods.size(), 1u);
  EXPECT_EQ(Print(*h.Find("four")),
            "Int four(Int x) {\n  Int x0 = x;\n  Int x1 = x0 * x0;\n"
            "  return x1 * x1;\n}\n");
}

TEST(Hide, KeepsRecursiveAndBranchingHelpersPrivate) {
  TraitValue t = TraitOf(
      "class { Int ab(Int x) { if (x < 0) return -x; return x; } "
      "Int f(Int x) { return ab(x) + 1; } }");
  TraitValue h = Hide(t, {Ref("ab", {"x"})});
  ASSERT_TRUE(h.Has("ab"));
  EXPECT_FALSE(h.Find("ab")->IsPublic());
  EXPECT_EQ(Print(*h.Find("f")->body->at(0)), "return ab(x) + 1;\n");
}

TEST(Hide, DropsUnreachablePrivateMethods) {
  TraitValue t = TraitOf(
      "class { Int u() { return 1; } Int f() { return 2; } }");
  TraitValue h = Hide(t, {Ref("u")});
  EXPECT_FALSE(h.Has("u"));
}

TEST(Hide, ContractsMentioningHiddenMethods) {
  TraitValue t = TraitOf(
      "class { Int k() { return 3; } "
      "@ensures(result > 0) @ensures(result == k()) Int f() { return 3; } }");
  std::vector<ComposeWarning> warnings;
  TraitValue h = Hide(t, {Ref("k")}, &warnings);
  ASSERT_EQ(h.Find("f")->contract.post.size(), 1u);
  EXPECT_EQ(Print(h.Find("f")->contract.post[0]), "result > 0");
  ASSERT_FALSE(warnings.empty());
  EXPECT_EQ(warnings[0].kind, ComposeWarning::ContractMentionsHidden);

  TraitValue r = TraitOf(
      "class { Bool ok(Int x) { return x > 0; } "
      "@requires(ok(x)) Int f(Int x) { return x; } }");
  EXPECT_EQ(KindOf([&] { Hide(r, {Ref("ok", {"x"})}); }),
            ComposeErrorKind::RequiresMentionsHidden);
}

TEST(Hide, AbstractMethods) {
  TraitValue unused = TraitOf("class { abstract Int a(); Int f() { return 1; } }");
  std::vector<ComposeWarning> warnings;
  TraitValue h = Hide(unused, {Ref("a")}, &warnings);
  EXPECT_FALSE(h.Has("a"));
  ASSERT_FALSE(warnings.empty());
  EXPECT_EQ(warnings.back().kind, ComposeWarning::HiddenAbstractDeleted);

  TraitValue used = TraitOf("class { abstract Int a(); Int f() { return a(); } }");
  EXPECT_EQ(KindOf([&] { Hide(used, {Ref("a")}); }),
            ComposeErrorKind::HiddenAbstractStillCalled);
}

TEST(Hide, Errors) {
  TraitValue t = TraitOf("class { Int a(Int x) { return x; } }");
  EXPECT_EQ(KindOf([&] { Hide(t, {Ref("b")}); }), ComposeErrorKind::UnknownMethod);
  EXPECT_EQ(KindOf([&] { Hide(t, {Ref("a")}); }),
            ComposeErrorKind::SignatureMismatch);
}

TEST(Shape, IgnoresParameterNamesAndContractOrder) {
  TraitValue a = TraitOf(
      "class { @ensures(result > 0) @ensures(result > x) Int f(Int x) "
      "{ return x + 1; } }");
  TraitValue b = TraitOf(
      "class { @ensures(result > y) @ensures(result > 0) Int f(Int y) "
      "{ return y + 1; } }");
  EXPECT_EQ(StructuralShape(a), StructuralShape(b));
  TraitValue c = TraitOf(
      "class { @ensures(result > 0) Int f(Int y) { return y + 1; } }");
  EXPECT_NE(StructuralShape(a), StructuralShape(c));
}

TEST(Compose, ResultsSatisfyInvariants) {
  testgen::Generator gen(5);
  for (int i = 0; i < 200; ++i) {
    TraitValue a = gen.SourceTrait();
    EXPECT_EQ(Validate(a), std::nullopt) << Print(a);
    TraitValue c = gen.CompleteTrait();
    EXPECT_EQ(Validate(c), std::nullopt) << Print(c);
    for (const auto& [n, m] : c.methods) EXPECT_FALSE(m.IsAbstract()) << n;
    TraitValue d = InlineAndDrop(c);
    EXPECT_EQ(Validate(d), std::nullopt) << Print(d);
  }
}

}  // namespace
}  // namespace ctrait
