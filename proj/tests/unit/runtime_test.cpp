#include <gtest/gtest.h>

#include "ctrait/parser.h"
#include "ctrait/runtime.h"
#include "helpers.h"

namespace ctrait {
namespace {

using testgen::Build;
using testgen::CorpusFile;

Value Eval(const MetaEnv& env, const std::string& expr,
           Mode mode = Mode::Checked) {
  Runtime rt(env.classes, {mode});
  return rt.EvalExpr(*ParseExpr(expr));
}

RuntimeErrorKind FaultOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const RuntimeError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no RuntimeError";
  return RuntimeErrorKind::Unsupported;
}

TEST(Runtime, Arithmetic) {
  MetaEnv env;
  EXPECT_EQ(Eval(env, "7 / 2"), Value(3));
  EXPECT_EQ(Eval(env, "-7 / 2"), Value(-3));
  EXPECT_EQ(Eval(env, "7 % -2"), Value(1));
  EXPECT_EQ(Eval(env, "-7 % 2"), Value(-1));
  EXPECT_EQ(Eval(env, "2 ** 10"), Value(1024));
  EXPECT_EQ(Eval(env, "0 ** 0"), Value(1));
  EXPECT_EQ(Eval(env, "-2 ** 3"), Value(-8));
  EXPECT_EQ(Eval(env, "2 ** 100").AsInt(),
            BigInt("1267650600228229401496703205376"));
  EXPECT_EQ(Eval(env, "\"a\" + 1 + true"), Value("a1true"));
  EXPECT_EQ(Eval(env, "1 + 2 == 3 && !(1 > 2)"), Value(true));
  EXPECT_EQ(FaultOf([&] { Eval(env, "1 / 0"); }), RuntimeErrorKind::DivideByZero);
  EXPECT_EQ(FaultOf([&] { Eval(env, "1 % 0"); }), RuntimeErrorKind::DivideByZero);
  EXPECT_EQ(FaultOf([&] { Eval(env, "2 ** -1"); }),
            RuntimeErrorKind::NegativeExponent);
  EXPECT_EQ(FaultOf([&] { Eval(env, "2 ** 100000"); }),
            RuntimeErrorKind::ExponentTooLarge);
  EXPECT_EQ(FaultOf([&] { Eval(env, "(2 ** 65536) ** 20"); }),
            RuntimeErrorKind::IntegerTooLarge);
  EXPECT_EQ(FaultOf([&] { Eval(env, "(2 ** 60000) * (2 ** 60000) * (2 ** 60000) "
                                    "* (2 ** 60000) * (2 ** 60000) * (2 ** 60000) "
                                    "* (2 ** 60000) * (2 ** 60000) * (2 ** 60000) "
                                    "* (2 ** 60000) * (2 ** 60000) * (2 ** 60000) "
                                    "* (2 ** 60000) * (2 ** 60000) * (2 ** 60000) "
                                    "* (2 ** 60000) * (2 ** 60000) * (2 ** 60000)"); }),
            RuntimeErrorKind::IntegerTooLarge);
  EXPECT_EQ(Eval(env, "(-1) ** 65536"), Value(1));
  EXPECT_EQ(Eval(env, "0 ** 65536"), Value(0));
}

TEST(Runtime, ShortCircuit) {
  MetaEnv env;
  EXPECT_EQ(Eval(env, "false && 1 / 0 == 1"), Value(false));
  EXPECT_EQ(Eval(env, "true || 1 / 0 == 1"), Value(true));
}

TEST(Runtime, PowClasses) {
  MetaEnv env = testgen::BuildFiles({CorpusFile("30-pow.trait")});
  EXPECT_EQ(Eval(env, "new Pow7().pow(3)"), Value(2187));
  EXPECT_EQ(Eval(env, "new Pow7().exp()"), Value(7));
  EXPECT_EQ(Eval(env, "new Pow12().pow(2)"), Value(4096));
  EXPECT_EQ(Eval(env, "new Pow1().pow(-5)"), Value(-5));
  EXPECT_EQ(Eval(env, "new Pow7().pow(-2)", Mode::Unchecked), Value(-128));
}

TEST(Runtime, ContractViolations) {
  MetaEnv env = testgen::BuildFiles({CorpusFile("20-pow-recursive.trait")});
  try {
    Eval(env, "new PowRec().pow(2, -1)");
    FAIL();
  } catch (const ContractViolation& v) {
    EXPECT_EQ(v.method(), "PowRec.pow");
    EXPECT_EQ(v.kind(), ContractKind::Requires);
    EXPECT_EQ(v.predicate_text(), "exp > 0");
    ASSERT_EQ(v.bindings().size(), 2u);
    EXPECT_EQ(v.bindings()[1].second, Value(-1));
  }
  // Unchecked mode skips contracts; the recursion never reaches exp == 1 and
  // squares x on the way down.
  EXPECT_EQ(FaultOf([&] { Eval(env, "new PowRec().pow(2, -1)", Mode::Unchecked); }),
            RuntimeErrorKind::IntegerTooLarge);
}

TEST(Runtime, EnsuresViolation) {
  MetaEnv env = testgen::BuildFiles({testgen::Fixture("wrong-class.trait")});
  try {
    Eval(env, "new Cube().pow(2)");
    FAIL();
  } catch (const ContractViolation& v) {
    EXPECT_EQ(v.kind(), ContractKind::Ensures);
    EXPECT_EQ(v.bindings().back().first, "result");
  }
}

TEST(Runtime, PrivateMethodsAreNotCallableFromOutside) {
  MetaEnv env = Build(
      "Trait t = class { Int ab(Int x) { if (x < 0) return -x; return x; } "
      "Int f(Int x) { return ab(x); } }[hide ab(x)]\n"
      "class C: t");
  EXPECT_EQ(Eval(env, "new C().f(-3)"), Value(3));
  EXPECT_EQ(FaultOf([&] { Eval(env, "new C().ab(-3)"); }),
            RuntimeErrorKind::NoSuchMethod);
}

TEST(Runtime, Invoke) {
  MetaEnv env = testgen::BuildFiles({CorpusFile("30-pow.trait")});
  Runtime rt(env.classes);
  EXPECT_EQ(rt.Invoke("Pow7", "pow", {Value(2)}), Value(128));
  EXPECT_GT(rt.calls(), 0);
}

TEST(Runtime, DeepRecursionDoesNotOverflow) {
  MetaEnv env = Build(
      "Trait t = class { Int down(Int n) { if (n == 0) return 0; "
      "return 1 + down(n - 1); } }\nclass D: t");
  EXPECT_EQ(Eval(env, "new D().down(9000)"), Value(9000));
  EXPECT_EQ(FaultOf([&] { Eval(env, "new D().down(20000)"); }),
            RuntimeErrorKind::DepthLimit);
}

}  // namespace
}  // namespace ctrait
