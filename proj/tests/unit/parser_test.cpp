#include <gtest/gtest.h>

#include "ctrait/corpus.h"
#include "ctrait/parser.h"
#include "ctrait/printer.h"
#include "generator.h"
#include "helpers.h"

namespace ctrait {
namespace {

using testgen::CorpusFile;

const char* kCorpusFiles[] = {
    "10-hello-world.trait", "11-hello-world-named.trait",
    "20-pow-recursive.trait", "21-pow7.trait", "30-pow.trait", "40-pown.trait",
};

TEST(Parser, CorpusRoundTrips) {
  for (const char* name : kCorpusFiles) {
    SCOPED_TRACE(name);
    Program p = ParseProgram(ReadFile(CorpusFile(name)), name);
    std::string printed = Print(p);
    Program again = ParseProgram(printed);
    EXPECT_TRUE(StructurallyEqual(p, again)) << printed;
    EXPECT_EQ(Print(again), printed);
  }
}

TEST(Parser, PowDeclarations) {
  Program p = ParseProgram(ReadFile(CorpusFile("30-pow.trait")));
  std::vector<std::string> names;
  for (const auto& d : p.decls) names.push_back(DeclName(d));
  EXPECT_EQ(names, (std::vector<std::string>{"base", "even", "odd", "compose",
                                             "generate", "Pow1", "Pow7",
                                             "Pow12"}));
  const auto& gen = std::get<FunDecl>(p.decls[4]);
  ASSERT_EQ(gen.contract.pre.size(), 1u);
  EXPECT_EQ(Print(gen.contract.pre[0]), "exp > 0");
  EXPECT_EQ(gen.sig.ret, TypeName::Trait());
  EXPECT_EQ(gen.body.size(), 3u);
}

TEST(Parser, MultipleContractClausesKeepOrder) {
  Program p = ParseProgram(
      "Trait t = class { @requires(x > 0) @ensures(result > 0) "
      "@requires(x < 9) @ensures(result == x) Int f(Int x) { return x; } }");
  auto lit = std::get<TraitDecl>(p.decls[0]).init->As<expr::TraitLit>();
  const auto& c = lit->methods[0].contract;
  ASSERT_EQ(c.pre.size(), 2u);
  ASSERT_EQ(c.post.size(), 2u);
  EXPECT_EQ(Print(c.pre[1]), "x < 9");
  EXPECT_EQ(Print(c.post[0]), "result > 0");
}

TEST(Parser, Precedence) {
  EXPECT_EQ(Print(ParseExpr("1 + 2 * 3")), "1 + 2 * 3");
  EXPECT_EQ(Print(ParseExpr("(1 + 2) * 3")), "(1 + 2) * 3");
  EXPECT_EQ(Print(ParseExpr("2 ** 3 ** 2")), "2 ** 3 ** 2");
  EXPECT_EQ(Print(ParseExpr("(2 ** 3) ** 2")), "(2 ** 3) ** 2");
  EXPECT_EQ(Print(ParseExpr("a || b && c")), "a || b && c");
  EXPECT_EQ(Print(ParseExpr("(a || b) && c")), "(a || b) && c");
  EXPECT_EQ(Print(ParseExpr("1 - (2 - 3)")), "1 - (2 - 3)");
  EXPECT_EQ(Print(ParseExpr("1 - 2 - 3")), "1 - 2 - 3");
  auto e = ParseExpr("2 ** 3 ** 2");
  const auto* pow = e->As<expr::Binary>();
  ASSERT_TRUE(pow);
  EXPECT_TRUE(pow->rhs->Is<expr::Binary>());
}

TEST(Parser, NegativeLiteralsFold) {
  auto e = ParseExpr("-3");
  ASSERT_TRUE(e->Is<expr::IntLit>());
  EXPECT_EQ(e->As<expr::IntLit>()->value, -3);
  EXPECT_TRUE(ParseExpr("- 3")->Is<expr::Unary>());
  EXPECT_TRUE(ParseExpr("-x")->Is<expr::Unary>());
  auto sub = ParseExpr("x - -3");
  ASSERT_TRUE(sub->Is<expr::Binary>());
  EXPECT_EQ(sub->As<expr::Binary>()->rhs->As<expr::IntLit>()->value, -3);
}

TEST(Parser, ComparisonsDoNotChain) {
  EXPECT_THROW(ParseExpr("1 < 2 < 3"), ParseError);
  EXPECT_NO_THROW(ParseExpr("(1 < 2) == true"));
}

TEST(Parser, AdaptationsAndSums) {
  Program p = ParseProgram(
      "Trait a = class { Int f() { return 1; } }\n"
      "Trait b = (a + a)[rename f() -> g()][hide g()]\n");
  const auto& init = std::get<TraitDecl>(p.decls[1]).init;
  const auto* hide = init->As<expr::Adapt>();
  ASSERT_TRUE(hide);
  EXPECT_TRUE(std::holds_alternative<HideAdaptation>(hide->adaptation));
  const auto* rename = hide->target->As<expr::Adapt>();
  ASSERT_TRUE(rename);
  const auto& m = std::get<RenameAdaptation>(rename->adaptation).mappings;
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].first.name, "f");
  EXPECT_EQ(m[0].second.name, "g");
  EXPECT_TRUE(rename->target->Is<expr::Sum>());
}

TEST(Parser, ErrorsCarrySpans) {
  try {
    ParseProgram("Trait t = class {\n  Int f( { return 1; }\n}", "bad.trait");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().file, "bad.trait");
    EXPECT_EQ(e.span().start_line, 2);
    EXPECT_FALSE(e.expected().empty());
  }
  EXPECT_THROW(ParseProgram("Trait = class {}"), ParseError);
  EXPECT_THROW(ParseProgram("class C base"), ParseError);
  EXPECT_THROW(ParseProgram("Trait t = class { Int f() { return \"x; } }"),
               ParseError);
  EXPECT_THROW(ParseExpr("1 +"), ParseError);
}

TEST(Parser, CommentsAndEmptyInput) {
  EXPECT_TRUE(ParseProgram("").decls.empty());
  EXPECT_TRUE(ParseProgram("// nothing\n/* at all */").decls.empty());
}

TEST(Parser, StringEscapesRoundTrip) {
  auto e = ParseExpr(R"("a\"b\\c\n")");
  ASSERT_TRUE(e->Is<expr::StrLit>());
  EXPECT_EQ(e->As<expr::StrLit>()->value, "a\"b\\c\n");
  EXPECT_TRUE(StructurallyEqual(e, ParseExpr(Print(e))));
}

TEST(Parser, GeneratedTraitsRoundTrip) {
  testgen::Generator gen(1234);
  for (int i = 0; i < 500; ++i) {
    TraitValue t = gen.ArbitraryTrait();
    std::string text = "Trait t = " + Print(t);
    Program p = ParseProgram(text);
    auto lit = std::get<TraitDecl>(p.decls[0]).init->As<expr::TraitLit>();
    ASSERT_TRUE(lit) << text;
    EXPECT_TRUE(StructurallyEqual(ToTraitValue(lit->methods), t)) << text;
  }
}

TEST(Parser, GeneratedExpressionsRoundTrip) {
  testgen::Generator gen(99);
  for (int i = 0; i < 2000; ++i) {
    ExprPtr e = gen.ArbitraryExpr(5, i % 2 == 0);
    std::string text = Print(e);
    ExprPtr again = ParseExpr(text);
    EXPECT_TRUE(StructurallyEqual(e, again)) << text << "\n" << Print(again);
  }
}

TEST(Parser, PipelineProgramsParse) {
  testgen::Generator gen(7);
  int produced = 0;
  for (int i = 0; i < 50; ++i) {
    auto pipeline = gen.NextPipeline();
    if (!pipeline) continue;
    ++produced;
    Program p = ParseProgram(pipeline->source);
    EXPECT_TRUE(StructurallyEqual(p, ParseProgram(Print(p))));
  }
  EXPECT_GT(produced, 10);
}

}  // namespace
}  // namespace ctrait
