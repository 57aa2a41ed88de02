#include <wpkind/pgcl/parser.hpp>
#include <wpkind/pgcl/printer.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace wpkind;
using namespace wpkind::pgcl;

namespace {

const char* kGeo = R"(
    nat c;
    nat f;

    while(f=1){
        {f := 0}[0.5]{c := c+1}
    }
)";

// Structural identity via the canonical printer.
template <typename T>
std::string key(const T& t) {
  return pgcl::to_string(t);
}

}  // namespace

TEST_CASE("rational parsing is exact") {
  CHECK(*parse_rational("0.99") == Rational(99, 100));
  CHECK(*parse_rational("1/3") == Rational(1, 3));
  CHECK(*parse_rational("7") == Rational(7));
  CHECK(*parse_rational("0.999999999999") == Rational(Nat("999999999999"), Nat("1000000000000")));
  CHECK(!parse_rational("x").has_value());
  CHECK(!parse_rational("1/0").has_value());
}

TEST_CASE("geo listing parses to the expected structure") {
  Program p = parse_program(kGeo);
  REQUIRE(p.declarations == std::vector<std::string>{"c", "f"});
  CHECK(key(p.guard) == key(eq(var("f"), lit(1))));
  auto* choice = std::get_if<Stmt::PChoice>(&p.body->node());
  REQUIRE(choice != nullptr);
  CHECK(choice->prob == Rational(1, 2));
  auto* lhs = std::get_if<Stmt::Assign>(&choice->lhs->node());
  REQUIRE(lhs != nullptr);
  CHECK(lhs->var == "f");
  auto* rhs = std::get_if<Stmt::Assign>(&choice->rhs->node());
  REQUIRE(rhs != nullptr);
  CHECK(rhs->var == "c");
  CHECK(key(rhs->expr) == key(add(var("c"), lit(1))));
}

TEST_CASE("trivial false-guard loop parses") {
  Program p = parse_program("while(false){skip;}");
  State s;
  CHECK(!eval_bool(*p.guard, s));
}

TEST_CASE("categorical weights must sum to one") {
  CHECK_THROWS_AS(parse_program("nat x; while(x<1){ x := 0 : 1/2 + 1 : 1/3; }"), ParseError);
  CHECK_THROWS_WITH(parse_program("nat x; while(x<1){ x := 0 : 1/2 + 1 : 1/3; }"),
                    Catch::Matchers::ContainsSubstring("weights sum"));
}

TEST_CASE("parser rejects ill-formed programs") {
  CHECK_THROWS_AS(parse_program("nat x; while(x<1){ while(x<1){skip;} }"), ParseError);
  CHECK_THROWS_AS(parse_program("nat x; x := 1; while(x<1){skip;}"), ParseError);
  CHECK_THROWS_AS(parse_program("while(y<1){skip;}"), ParseError);        // undeclared
  CHECK_THROWS_AS(parse_program("nat x; while(x<1){ x := 0.5; }"), ParseError);
  CHECK_THROWS_AS(parse_program("nat x; while(x<1){ {skip;}[3/2]{skip;} }"), ParseError);
}

TEST_CASE("comments and both conditional forms are accepted") {
  Program p = parse_program(R"(
      nat i;  # counter
      nat phase;
      while(1<i || phase=1){
          if(phase=0){ i := i-1; }{ phase := 0; }   # paper-style if
          if(phase=0){ skip; } else { skip; }
      }
  )");
  CHECK(p.declarations.size() == 2);
}

TEST_CASE("monus evaluates as truncated subtraction") {
  State s;
  CHECK(eval_nat(*monus(lit(5), lit(7)), s) == 0);
  s["x"] = 3;
  CHECK(eval_nat(*var("x"), s) == 3);
  CHECK(eval_nat(*monus(var("x"), lit(1)), s) == 2);
}

TEST_CASE("chain guard evaluates per the worked example") {
  State s{{"count", Nat(0)}, {"f", Nat(1)}};
  BoolPtr guard = land(less(var("count"), lit(5)), lnot(less(var("f"), lit(1))));
  CHECK(eval_bool(*guard, s));
  s["f"] = 0;
  CHECK(!eval_bool(*guard, s));
}

TEST_CASE("desugaring categorical assignments") {
  SECTION("two even options become one choice") {
    Program p = parse_program("nat r; while(r<1){ r := 0 : 1/2 + 1 : 1/2; }");
    StmtPtr d = desugar(p.body);
    auto* choice = std::get_if<Stmt::PChoice>(&d->node());
    REQUIRE(choice != nullptr);
    CHECK(choice->prob == Rational(1, 2));
    CHECK(std::holds_alternative<Stmt::Assign>(choice->lhs->node()));
    CHECK(std::holds_alternative<Stmt::Assign>(choice->rhs->node()));
  }
  SECTION("three-way choice renormalizes the tail") {
    Program p = parse_program("nat r; while(r<1){ r := 1 : 1/3 + 2 : 1/3 + 3 : 1/3; }");
    StmtPtr d = desugar(p.body);
    auto* outer = std::get_if<Stmt::PChoice>(&d->node());
    REQUIRE(outer != nullptr);
    CHECK(outer->prob == Rational(1, 3));
    auto* inner = std::get_if<Stmt::PChoice>(&outer->rhs->node());
    REQUIRE(inner != nullptr);
    CHECK(inner->prob == Rational(1, 2));
  }
  SECTION("single option collapses to an assignment") {
    Program p = parse_program("nat r; while(r<1){ r := 5 : 1; }");
    StmtPtr d = desugar(p.body);
    auto* a = std::get_if<Stmt::Assign>(&d->node());
    REQUIRE(a != nullptr);
    CHECK(key(a->expr) == key(lit(5)));
  }
}

namespace {

// Independent naive evaluator used as an oracle for eval_nat.
Nat naive_eval(const Term& t, const State& s) {
  if (auto* c = std::get_if<Term::Const>(&t.node())) {
    if (!is_natural(c->value)) throw std::runtime_error("non-natural");
    return numerator(c->value);
  }
  if (auto* v = std::get_if<Term::Var>(&t.node())) return state_get(s, v->name);
  if (auto* sc = std::get_if<Term::Scale>(&t.node()))
    return numerator(sc->factor) * naive_eval(*sc->operand, s) / denominator(sc->factor);
  if (auto* a = std::get_if<Term::Add>(&t.node()))
    return naive_eval(*a->lhs, s) + naive_eval(*a->rhs, s);
  auto* m = std::get_if<Term::Monus>(&t.node());
  Nat l = naive_eval(*m->lhs, s), r = naive_eval(*m->rhs, s);
  return l >= r ? l - r : Nat(0);
}

TermPtr random_nat_term(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 4);
  switch (pick(rng)) {
    case 0: return lit(static_cast<long>(rng() % 20));
    case 1: return var(std::string(1, static_cast<char>('a' + rng() % 4)));
    case 2: return scale(Rational(1 + rng() % 5), random_nat_term(rng, depth - 1));
    case 3: return add(random_nat_term(rng, depth - 1), random_nat_term(rng, depth - 1));
    default: return monus(random_nat_term(rng, depth - 1), random_nat_term(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("eval agrees with an independent big-integer evaluator") {
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    TermPtr t = random_nat_term(rng, 4);
    State s;
    for (char v = 'a'; v <= 'd'; ++v) s[std::string(1, v)] = Nat(rng() % 50);
    Nat expect = naive_eval(*t, s);
    CHECK(eval_nat(*t, s) == expect);
    CHECK(eval_nat(*t, s) >= 0);
  }
}

TEST_CASE("parse/print round trip is structurally stable") {
  for (const char* src : {kGeo,
                          "nat x; nat n; nat r; while (x < n) { r := 0 : 1/2 + 1 : 1/2; x := x + r; tick(1); }",
                          "nat h; nat t; while (h <= t) { t := t + 1; { h := h + 1; } [1/2] { h := h + 0; } }",
                          "nat a; nat b; while ((0 < a & 0 < b)) { { a := a - 1; } [1/2] { b := b - 1; } }"}) {
    Program p = parse_program(src);
    std::string printed = pgcl::to_string(p);
    Program q = parse_program(printed);
    CHECK(pgcl::to_string(q) == printed);
    CHECK(key(q.guard) == key(p.guard));
    CHECK(pgcl::to_string(*q.body) == pgcl::to_string(*p.body));
  }
}

TEST_CASE("substitution composes in execution order") {
  // c1: x := x+1 ; c2: y := x. Running c1 then c2 yields y = x+1.
  Subst t1{{"x", add(var("x"), lit(1))}};
  Subst t2{{"y", var("x")}};
  Subst both = compose(t1, t2);
  State s{{"x", Nat(4)}};
  CHECK(eval_nat(*subst(var("y"), both), s) == 5);
  CHECK(eval_nat(*subst(var("x"), both), s) == 5);
}
