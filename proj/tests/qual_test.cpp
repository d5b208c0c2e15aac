#include <catch2/catch_amalgamated.hpp>

#include "gen.hpp"
#include "reachck/instrument.hpp"
#include "reachck/qual.hpp"
#include "support.hpp"

using namespace rt;

namespace {

// Fixpoint of the variable and self rules, computed without ordering.
Qual naive_expose(const Context& ctx, Qual q) {
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : ctx.entries()) {
      if (e.k == BK::Self) {
        if (!q.has(e.name)) continue;
        for (const auto& v : e.q.vars)
          if (!q.has(v)) q.add(v), changed = true;
      } else if (!q.has(e.qname()) && !e.q.fresh && !e.q.hole && e.q.plain().subset_of(q.plain())) {
        q.add(e.qname());
        changed = true;
      }
    }
  }
  return q;
}

Ctx abc() {
  Ctx c;
  c.var("a", "Ref[Unit]^{*}").var("b", "Ref[Unit]^{*}").var("c", "Ref[Unit]^{a,b}");
  return c;
}

}  // namespace

TEST_CASE("exposure adds what the qualifier already covers", "[qual]") {
  CHECK(expose(Context{}, {}) == Qual{});
  Ctx c = abc();
  CHECK(naive_expose(c, Q("a,b")) == Q("a,b,c"));
  CHECK(expose(c, Q("a,b")) == Q("a,b,c"));
  Ctx s;
  s.var("x", "Ref[Unit]^{*}").self("f", Q("x"));
  CHECK(naive_expose(s, Q("f")) == Q("f,x"));
  CHECK(expose(s, Q("f")) == Q("f,x"));
}

TEST_CASE("qual_check decides inclusion after exposure", "[qual]") {
  Ctx c = abc();
  CHECK(qual_check(c, Q("c"), Q("a,b")));
  // incomparable: neither direction holds
  CHECK_FALSE(qual_check(c, Q("b"), Q("c")));
  CHECK_FALSE(qual_check(c, Q("c"), Q("b")));
  CHECK(qual_check(c, {}, Q("a")));
  CHECK(qual_check(Context{}, {}, {}));
}

TEST_CASE("unification records residual variables into holes", "[qual]") {
  Ctx c = abc();
  auto same = unify(c, Q("a"), Q("a,b"));
  REQUIRE(same);
  CHECK(*same == c.ctx);

  Ctx h;
  h.var("x", "Ref[Unit]^{*}").self("f", H("f"));
  auto out = unify(h, Q("x"), Q("f"));
  REQUIRE(out);
  CHECK(out->at(1).q == H("f", "x"));
  CHECK(ctx_subsumes(h, *out));

  Ctx a;
  a.var("a", "Ref[Unit]^{*}");
  UnifyFailure why;
  CHECK_FALSE(unify(a, Q("a"), {}, &why));
  CHECK(why.escapes);
  CHECK(why.var == "a");

  auto inf = qual_infer(c, Q("c"), Q("a,b"));
  REQUIRE(inf);
  CHECK(*inf == c.ctx);
}

TEST_CASE("unification picks the earliest self introduced after the variable", "[qual]") {
  Ctx h;
  h.self("g", H("g")).var("x", "Ref[Unit]^{*}").self("f1", H("f1")).self("f2", H("f2"));
  auto out = qual_infer(h, Q("x"), Q("g,f1,f2"));
  REQUIRE(out);
  CHECK(out->at(0).q == H("g"));
  CHECK(out->at(2).q == H("f1", "x"));
  CHECK(out->at(3).q == H("f2"));
}

TEST_CASE("unification upcasts through recorded qualifiers", "[qual]") {
  Ctx c;
  c.var("a", "Ref[Unit]^{*}").var("c", "Ref[Unit]^{a}");
  auto out = unify(c, Q("c"), Q("a"));
  REQUIRE(out);
  CHECK(*out == c.ctx);
  CHECK_FALSE(unify(c, Q("*"), Q("a")));
}

TEST_CASE("qual properties on random contexts", "[qual]") {
  Gen g(0x9A1);
  stats().reset_counters();
  for (int i = 0; i < 400; ++i) {
    INFO("case " << i);
    Context ctx = g.context(6, 4);
    const Name f = global_names().fresh("h");
    if (g.coin()) ctx.push_self(f, Qual::hole_of(f));
    const auto names = Gen::qual_names(ctx);
    Qual q = g.qual(names, 3, 0.3);
    Qual p = g.qual(names, 3, 0.0);
    Qual e = expose(ctx, q);
    CHECK(expose(ctx, e) == e);
    CHECK(e == naive_expose(ctx, q));
    CHECK(q.subset_of(e));
    auto out = qual_infer(ctx, p, q);
    if (out) {
      CHECK(ctx_subsumes(ctx, *out));
      for (std::size_t k = 0; k < ctx.size(); ++k)
        if (ctx.at(k).k != BK::Self || !ctx.at(k).q.hole) CHECK(ctx.at(k).q == out->at(k).q);
      CHECK(qual_check(*out, p, q));
    }
  }
  CHECK(stats().max_expose_ratio_violations == 0);
}
