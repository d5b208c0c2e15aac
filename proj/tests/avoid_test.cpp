#include <catch2/catch_amalgamated.hpp>

#include "gen.hpp"
#include "reachck/avoid.hpp"
#include "support.hpp"

using namespace rt;

TEST_CASE("polarized substitution follows variance", "[avoid]") {
  TypeP F = T("f(y: Unit^{z}) -> Unit^{z}");
  auto pos = polarized_subst(F, Q("r"), "z", Polarity::Pos);
  REQUIRE(pos);
  CHECK(alpha_eq(*pos, T("f(y: Unit) -> Unit^{r}")));
  auto neg = polarized_subst(F, Q("r"), "z", Polarity::Neg);
  REQUIRE(neg);
  CHECK(alpha_eq(*neg, T("f(y: Unit^{r}) -> Unit")));
  // references are invariant, so an occurrence inside one cannot move
  CHECK_FALSE(polarized_subst(T("Ref[Unit^{z}]"), Q("r"), "z", Polarity::Pos));
  CHECK_FALSE(polarized_subst(T("f(y: Ref[Unit^{z}]) -> Unit"), Q("r"), "z", Polarity::Neg));
  // no occurrence: nothing changes
  TypeP R = T("Ref[Unit^{w}]");
  CHECK(*polarized_subst(R, Q("r"), "z", Polarity::Pos) == R);
}

TEST_CASE("avoidance goes through the outermost self-reference", "[avoid]") {
  TypeP T0 = T("f(u: Unit) -> (g(v: Unit) -> Ref[Unit]^{x})^{x}");
  auto a = avoid_var(T0, "x");
  REQUIRE(a);
  CHECK(a->delta == Q("x"));
  CHECK(a->type->self == T0->self);
  CHECK(alpha_eq(a->type, T("f(u: Unit) -> (g(v: Unit) -> Ref[Unit]^{f})^{f}")));
  CHECK_FALSE(occurs("x", a->type, Polarity::Any));
}

TEST_CASE("avoidance drops the variable from contravariant positions", "[avoid]") {
  auto a = avoid_var(T("f(y: Ref[Unit]^{x}) -> Ref[Unit]^{x}"), "x");
  REQUIRE(a);
  CHECK(alpha_eq(a->type, T("f(y: Ref[Unit]) -> Ref[Unit]^{f}")));
  CHECK_FALSE(avoid_var(T("Ref[Unit^{x}]"), "x"));
  CHECK_FALSE(avoid_var(T("f(y: Unit) -> Ref[Unit^{x}]"), "x"));
  auto none = avoid_var(T("Ref[Unit]"), "x");
  REQUIRE(none);
  CHECK(none->delta.empty());
}

TEST_CASE("application avoidance for a fresh argument", "[avoid]") {
  QType Q0 = QT("(g() -> Ref[Unit]^{x})^{x}");
  auto kept = avoid_app("f", {}, "x", Q("a"), Q0);
  REQUIRE(kept);
  CHECK(kept->ty == Q0.ty);
  CHECK(kept->q == Q("x"));
  auto r = avoid_app("f", {}, "x", Q("*"), Q0);
  REQUIRE(r);
  CHECK(alpha_eq(r->ty, T("g() -> Ref[Unit]^{g}")));
  CHECK(r->q == Q("x"));
  Name failed;
  CHECK_FALSE(avoid_app("f", Q("*"), "x", {}, QT("Ref[Unit^{f}]"), &failed));
  CHECK(failed == "f");
}

TEST_CASE("avoidance properties on random types", "[avoid]") {
  Gen g(0xA701D);
  int moved = 0;
  for (int i = 0; i < 500; ++i) {
    INFO("case " << i);
    const Name z = global_names().fresh("z");
    TypeP T0 = g.type({z, "k"}, 3);
    auto a = avoid_var(T0, z);
    if (!a) {
      CHECK(occurs(z, T0, Polarity::Any));
      continue;
    }
    CHECK_FALSE(occurs(z, a->type, Polarity::Any));
    CHECK((a->delta.empty() || a->delta == Qual{z}));
    if (!occurs(z, T0, Polarity::Any)) CHECK(a->delta.empty());
    auto again = avoid_var(a->type, z);
    REQUIRE(again);
    CHECK(again->delta.empty());
    CHECK(type_eq(again->type, a->type));
    if (!a->delta.empty()) ++moved;
  }
  CHECK(moved > 50);
}
