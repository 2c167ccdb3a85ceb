#include <catch2/catch_amalgamated.hpp>

#include "adapt/syntax.hpp"
#include "support/gen.hpp"

using namespace adapt;

TEST_CASE("parsing the surface syntax") {
  auto t = parse_process("a[b.0] | a{c.0}.0");
  REQUIRE(t->kind == Kind::Par);
  REQUIRE(t->children.size() == 2);
  CHECK(t->children[0]->kind == Kind::Loc);
  CHECK(t->children[1]->branches[0].prefix.kind == PrefixKind::Update);

  auto r = parse_process("!p1.(e + p1!)");
  REQUIRE(r->kind == Kind::Repl);
  CHECK(r->prefix.kind == PrefixKind::In);
  CHECK(r->prefix.name == "p1");
  REQUIRE(r->body->kind == Kind::Sum);
  REQUIRE(r->body->branches.size() == 2);
  CHECK(r->body->branches[0].prefix.name == "e");
  CHECK(r->body->branches[0].cont->kind == Kind::Nil);
  CHECK(r->body->branches[1].prefix.kind == PrefixKind::Out);

  auto u = parse_process("a{b[@|@]}.0");
  auto& payload = u->branches[0].prefix.payload;
  CHECK(numholes(payload) == 2);
}

TEST_CASE("precedence: dot over plus over bar") {
  CHECK(congruent(parse_process("a.b.0 + c.0"), sum({Branch{in("a"), act(in("b"), nil())},
                                                     Branch{in("c"), nil()}})));
  CHECK(congruent(parse_process("a.0 + b.0 | c.0"),
                  par({sum({Branch{in("a"), nil()}, Branch{in("b"), nil()}}), act(in("c"), nil())})));
  CHECK(congruent(parse_process("a.(b.0 | c.0)"),
                  act(in("a"), par({act(in("b"), nil()), act(in("c"), nil())}))));
}

TEST_CASE("parser diagnostics") {
  CHECK_THROWS_AS(parse_process("a["), ParseError);
  CHECK_THROWS_AS(parse_process("a.0 +"), ParseError);
  CHECK_THROWS_AS(parse_process("0 + a.0"), ParseError);
  CHECK_THROWS_AS(parse_process("a.0 | @"), ParseError);   // hole outside payload
  CHECK_THROWS_AS(parse_process("err.0"), ParseError);     // reserved name
  CHECK_THROWS_AS(parse_process("a[err!.0]"), ParseError);
  CHECK_THROWS_AS(parse_process("x{err[0]}.0"), ParseError);
  try {
    parse_process("a.0 |\n  ]");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.span.line == 2);
  }
}

TEST_CASE("comments and whitespace") {
  auto t = parse_process("# heading\na.0 | # trailing\n b!.0\n");
  CHECK(congruent(t, parse_process("a.0|b!.0")));
}

TEST_CASE("render examples") {
  CHECK(render(nil()) == "0");
  CHECK(render(par({act(in("a"), nil()), act(out("b"), nil())})) == "a.0 | b!.0");
  CHECK(render(loc("a", hole())) == "a[@]");
  CHECK(render(parse_process("a.(b.0 + c!.0)")) == "a.(b.0 + c!.0)");
}

TEST_CASE("round trip on random terms") {
  gen::Rng g(23);
  gen::Opts o;
  o.payload_class = PatternClass::P1;
  for (int i = 0; i < 1000; ++i) {
    auto t = gen_process(g, o, 4);
    auto back = parse_process(render(t));
    CAPTURE(render(t));
    CHECK(congruent(back, t));
  }
}

TEST_CASE("minsky machine files") {
  auto m = parse_mm("r0=0\nr1=0\n1: INC r0\n2: DECJ r0 3\n3: HALT\n");
  REQUIRE(m.size() == 3);
  CHECK(m.at(1).op == Op::Inc);
  CHECK(m.at(2).op == Op::DecJ);
  CHECK(m.at(2).target == 3);
  CHECK(m.at(3).op == Op::Halt);

  auto m2 = parse_mm("r0=2\n1: HALT");
  CHECK(m2.init_r0 == 2);

  CHECK_THROWS(parse_mm("1: DECJ r0 5"));                  // dangling target
  CHECK_THROWS(parse_mm("1: INC r0\n1: HALT"));            // duplicate index
  CHECK_THROWS(parse_mm("r0=-1\n1: HALT"));                // negative register
  CHECK_THROWS(parse_mm("1: INC r7"));
  CHECK_THROWS(parse_mm(""));

  // round trip
  auto m3 = parse_mm(render_mm(m));
  CHECK(m3.size() == 3);
  CHECK(m3.at(2).target == 3);
}
