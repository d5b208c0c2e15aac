#include <catch2/catch_amalgamated.hpp>

#include "gen.hpp"
#include "support.hpp"

using namespace rt;

TEST_CASE("qual_subst replaces a present variable only", "[core]") {
  CHECK(qual_subst(Q("x,a"), Q("b,c"), "x") == Q("a,b,c"));
  CHECK(qual_subst(Q("a"), Q("b"), "x") == Q("a"));
  CHECK(qual_subst(Q("x"), Q("a"), "x") == Q("a"));
  CHECK(qual_subst(Q("x"), Q("*"), "x") == Q("*"));
}

TEST_CASE("type_subst_var rewrites every qualifier", "[core]") {
  Ctx c;
  c.var("a", "Ref[Unit]^{*}").var("b", "Ref[Unit]^{*}").var("x", "Ref[Unit]^{*}");
  CHECK(alpha_eq(type_subst_var(T("Ref[Unit^{x}]"), Q("a"), "x"), T("Ref[Unit^{a}]")));
  CHECK(alpha_eq(type_subst_var(T("f(y: Unit^{x}) -> Unit^{x}"), Q("a,b"), "x"),
                 T("f(y: Unit^{a,b}) -> Unit^{a,b}")));
  // the identity function applied to a: its result qualifier {x} becomes {a}
  QType res = qtype_subst_var(QT("Ref[Unit]^{x}"), Q("a"), "x");
  CHECK(show(res) == "Ref[Unit]^{a}");
}

TEST_CASE("type_subst_tvar replaces the variable and its qualifier", "[core]") {
  QType body = qt(mk_tvar("X"), Q("x"));
  QType r = qtype_subst_tvar(body, mk_base(), Q("a"), "X", "x");
  CHECK(r.ty->k == TK::Base);
  CHECK(r.q == Q("a"));
  TypeP ref = mk_ref(qt(mk_tvar("X")));
  CHECK(type_eq(type_subst_tvar(ref, mk_base(), {}, "X", "x"), mk_ref(qt(mk_base()))));
  // try[Unit] instantiates A^{a} as Unit^{s}
  QType A = qt(mk_tvar("A"), Q("a"));
  CHECK(show(qtype_subst_tvar(A, mk_base(), Q("s"), "A", "a")) == "Unit^{s}");
}

TEST_CASE("saturation follows entry qualifiers and flags markers", "[core]") {
  CHECK(saturate(Context{}, {}) == Saturation{});
  Ctx c;
  c.var("a", "Ref[Unit]^{*}").var("c", "Ref[Unit]^{a}");
  CHECK(saturate(c, Q("c")) == Saturation{{"a", "c"}, true, false});
  Ctx h;
  h.self("f", H("f"));
  CHECK(saturate(h, Q("f")) == Saturation{{"f"}, false, true});
  CHECK_THROWS_AS(saturate(c, Q("nope")), MalformedQualifier);
}

TEST_CASE("overlap intersects saturations and always holds the marker", "[core]") {
  Ctx sep;
  sep.var("a", "Ref[Unit]^{*}").var("b", "Ref[Unit]^{*}");
  CHECK(overlap(sep, Q("a"), Q("b")) == Q("*"));
  Ctx alias;
  alias.var("a", "Ref[Unit]^{*}").var("c", "Ref[Unit]^{a}");
  CHECK(overlap(alias, Q("a"), Q("c")) == Q("*,a"));
  CHECK(overlap(Context{}, {}, {}) == Q("*"));
}

TEST_CASE("occurrence respects polarity", "[core]") {
  CHECK_FALSE(occurs("x", mk_base(), Polarity::Any));
  TypeP F = mk_fun("f", "x", qt(mk_base()), qt(mk_base(), Q("z")));
  CHECK(occurs("z", F, Polarity::Pos));
  CHECK_FALSE(occurs("z", F, Polarity::Neg));
  TypeP R = mk_ref(qt(mk_base(), Q("f")));
  CHECK(occurs("f", R, Polarity::Neg));
  CHECK(occurs("f", R, Polarity::Pos));
  TypeP D = mk_fun("f", "x", qt(mk_base(), Q("z")), qt(mk_base()));
  CHECK(occurs("z", D, Polarity::Neg));
  CHECK_FALSE(occurs("z", D, Polarity::Pos));
}

TEST_CASE("core properties on random inputs", "[core]") {
  Gen g(0xC0DE);
  for (int i = 0; i < 300; ++i) {
    Context ctx = g.context(6, 4);
    const auto names = Gen::qual_names(ctx);
    Qual q = g.qual(names, 4, 0.3);
    Qual p = g.qual(names, 4, 0.3);
    const Name x = names[g.below(static_cast<int>(names.size()))];
    INFO("case " << i);
    CHECK(qual_subst(q, Qual{x}, x) == q);

    Saturation s = saturate(ctx, q.plain());
    CHECK(saturate(ctx, Qual(s.vars)) == s);

    CHECK(overlap(ctx, p, q) == overlap(ctx, q, p));
    CHECK(overlap(ctx, p, q).fresh);

    TypeP T = g.type(names, 2);
    for (const auto& y : names)
      if (!occurs(y, T, Polarity::Any)) {
        CHECK_FALSE(occurs(y, T, Polarity::Pos));
        CHECK_FALSE(occurs(y, T, Polarity::Neg));
      }
    const Name unused = global_names().fresh("unused");
    CHECK(type_eq(type_subst_var(T, Q("zz"), unused), T));
  }
}
