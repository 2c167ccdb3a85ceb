#include <catch2/catch_amalgamated.hpp>

#include "adapt/syntax.hpp"
#include "adapt/term.hpp"
#include "support/gen.hpp"

using namespace adapt;

static TermPtr P(const std::string& s) { return parse_process(s); }

TEST_CASE("canonical forms quotient commutativity and associativity") {
  CHECK(congruent(P("a.0 | b.0"), P("b.0 | a.0")));
  CHECK(congruent(P("(a.0 | b.0) | c.0"), P("a.0 | (b.0 | c.0)")));
  CHECK(congruent(P("a[x.0 | y.0]"), P("a[y.0 | x.0]")));
  CHECK_FALSE(congruent(P("a.0 | 0"), P("a.0")));  // no absorption law
  CHECK_FALSE(congruent(P("a.b.0"), P("b.a.0")));
}

TEST_CASE("canonicalize is idempotent and congruent under shuffles") {
  gen::Rng g(7);
  gen::Opts o;
  for (int i = 0; i < 300; ++i) {
    auto t = gen_process(g, o, 4);
    auto c1 = canonicalize(t);
    CHECK(serialize(canonicalize(c1)) == serialize(c1));
    auto shuffled = gen::shuffle_par(g, t);
    CHECK(serialize(canonicalize(shuffled)) == serialize(c1));
  }
}

TEST_CASE("fill replaces structural holes only") {
  // payload holes survive, structural holes are filled
  auto u1 = par({loc("a", hole()), act(out("b"), nil())});
  CHECK(congruent(fill(u1, P("c.0")), P("a[c.0] | b!.0")));

  auto inner = act(update("x", hole()), hole());  // x{@}.@
  auto filled = fill(inner, P("d.0"));
  CHECK(filled->kind == Kind::Sum);
  CHECK(filled->branches[0].prefix.payload->kind == Kind::Hole);  // payload untouched
  CHECK(congruent(filled->branches[0].cont, P("d.0")));

  auto u3 = par({hole(), hole()});
  CHECK(congruent(fill(u3, nil()), P("0 | 0")));
}

TEST_CASE("counting functions") {
  // b!.d{@ | 0}.0 | b[a.@ | @]  ->  numap 1, numholes 2, numph 1
  auto u = par({act(out("b"), act(update("d", par({hole(), nil()})), nil())),
                loc("b", par({act(in("a"), hole()), hole()}))});
  CHECK(numap(u) == 1);
  CHECK(numholes(u) == 2);
  CHECK(numph(u) == 1);

  CHECK(numap(nil()) == 0);
  CHECK(numholes(nil()) == 0);
  CHECK(numph(nil()) == 0);

  auto u2 = loc("a", loc("b", hole()));
  CHECK(numap(u2) == 2);
  CHECK(numholes(u2) == 1);
  CHECK(numph(u2) == 0);
}

TEST_CASE("counts agree with the naive oracle") {
  gen::Rng g(11);
  gen::Opts o;
  o.payload_class = PatternClass::P1;
  for (int i = 0; i < 1000; ++i) {
    auto u = gen_pattern(g, o, 4, PatternClass::P1);
    auto n = gen::naive_counts(u);
    CAPTURE(serialize(u));
    CHECK(numap(u) == n.ap);
    CHECK(numholes(u) == n.holes);
    CHECK(numph(u) == n.ph);
  }
}

TEST_CASE("containment structure denotation") {
  auto r = P("0 | d[0]");
  auto d = cstr(r);
  REQUIRE(d.children.size() == 1);
  CHECK(*d.children[0].label == "d");

  // a.P2 | b[P3] | a[c[S]]  vs  P1 | b[P2] | a[P3 | c[S]]
  auto p = P("a.x.0 | b[y.0] | a[c[s.0]]");
  auto q = P("z.0 | b[w.0] | a[v.0 | c[s.0]]");
  CHECK(cstr(p) == cstr(q));

  CHECK(cstr(P("x.y.z!.0")).children.empty());
}

TEST_CASE("cstrs collects location denotations") {
  auto ts = cstrs(P("a[b[0]]"));
  REQUIRE(ts.size() == 2);  // eps->a->b and eps->b
  CHECK(cstrs(P("x.0")).empty());

  // subterms inside payloads count too
  auto with_payload = P("x{d[0]}.0");
  auto ds = cstrs(with_payload);
  REQUIRE(ds.size() == 1);
  CHECK(*ds[0].children[0].label == "d");
}

TEST_CASE("classification: topology and pattern class") {
  auto disrupt = P("a[x.y.0] | a{z.0}.0");
  auto c1 = classify(disrupt);
  CHECK(c1.topology == Topology::DynamicOnly);
  CHECK(c1.pattern == PatternClass::P2);

  auto interrupt = P("a[x.y.0] | a{z.0 | t.@}.0");
  auto c2 = classify(interrupt);
  CHECK(c2.topology == Topology::DynamicOnly);
  CHECK(c2.pattern == PatternClass::P1);

  auto preserving = P("x{x[@ | v.0]}.0");
  auto c3 = classify(preserving);
  CHECK(c3.topology == Topology::Static);
  CHECK(c3.pattern == PatternClass::P3);

  // no updates at all: member of every class
  auto plain = P("a[x.0] | y!.0");
  auto c4 = classify(plain);
  CHECK(c4.topology == Topology::Static);
  CHECK(c4.pattern == PatternClass::P3);

  // static shape but a sibling A beside the recreated location
  auto with_sibling = P("x{x[@] | w.0}.0");
  CHECK(classify(with_sibling).topology == Topology::Static);

  // location behind a prefix is never static
  CHECK(classify(P("x.a[0]")).topology == Topology::DynamicOnly);
}

TEST_CASE("pattern class implications on generated terms") {
  gen::Rng g(13);
  gen::Opts o;
  for (int i = 0; i < 200; ++i) {
    o.payload_class = PatternClass::P3;
    auto t3 = gen_process(g, o, 3);
    CHECK(classify(t3).pattern == PatternClass::P3);
    o.payload_class = PatternClass::P2;
    auto t2 = gen_process(g, o, 3);
    auto c = classify(t2);
    CHECK(c.pattern != PatternClass::P1);
    CHECK(c.pattern != PatternClass::None);
  }
  for (int i = 0; i < 100; ++i) {
    auto s = gen_static(g, o, 3, PatternClass::P1);
    CHECK(classify(s).topology == Topology::Static);
    auto s3 = gen_es3(g, o, 3);
    auto c = classify(s3);
    CHECK(c.topology == Topology::Static);
    CHECK(c.pattern == PatternClass::P3);
  }
}

TEST_CASE("inventories") {
  auto inv1 = inventories({P("a.b!.0")});
  REQUIRE(inv1.subp.size() == 3);  // a.b!.0, b!.0, 0
  CHECK(inv1.cnames.empty());
  std::set<std::string> keys;
  for (auto& t : inv1.subp) keys.insert(canon_key(t));
  CHECK(keys.count(canon_key(P("a.b!.0"))));
  CHECK(keys.count(canon_key(P("b!.0"))));
  CHECK(keys.count(canon_key(nil())));

  auto inv2 = inventories({P("a[c.0] | x{d[0]}.0")});
  CHECK(inv2.cnames == std::set<Name>{"a", "d"});
  REQUIRE(inv2.upd.size() == 1);
  CHECK(congruent(inv2.upd[0], P("d[0]")));

  auto pieces = par_of(P("x.0 | b[y.0] | a[z.0]"));
  REQUIRE(pieces.size() == 3);
}

TEST_CASE("valid names") {
  CHECK(valid_name("abc_1"));
  CHECK(valid_name("k$a3"));
  CHECK_FALSE(valid_name(""));
  CHECK_FALSE(valid_name("1ab"));
  CHECK_FALSE(valid_name("a-b"));
}
