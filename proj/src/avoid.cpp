#include "reachck/avoid.hpp"

namespace reachck {

namespace {

Polarity flip(Polarity p) { return p == Polarity::Pos ? Polarity::Neg : Polarity::Pos; }

}  // namespace

std::optional<TypeP> polarized_subst(const TypeP& T, const Qual& r, const Name& y, Polarity pol) {
  if (!occurs(y, T, Polarity::Any)) return T;
  switch (T->k) {
    case TK::Base:
    case TK::Top:
    case TK::TVar:
      return T;
    case TK::Ref:
      return std::nullopt;
    case TK::Fun:
    case TK::All: {
      auto dom = polarized_subst(T->dom.ty, r, y, flip(pol));
      if (!dom) return std::nullopt;
      auto cod = polarized_subst(T->cod.ty, r, y, pol);
      if (!cod) return std::nullopt;
      Qual p = pol == Polarity::Pos ? T->dom.q.without(y) : qual_subst(T->dom.q, r, y);
      Qual q = pol == Polarity::Pos ? qual_subst(T->cod.q, r, y) : T->cod.q.without(y);
      if (T->k == TK::Fun) return mk_fun(T->self, T->arg, {*dom, p}, {*cod, q});
      return mk_all(T->self, T->tvar, T->arg, {*dom, p}, {*cod, q});
    }
  }
  return std::nullopt;
}

std::optional<Avoided> avoid_var(const TypeP& T, const Name& z) {
  if (!occurs(z, T, Polarity::Any)) return Avoided{{}, T};
  if (T->k != TK::Fun && T->k != TK::All) return std::nullopt;
  const Qual f{T->self};
  auto dom = polarized_subst(T->dom.ty, f, z, Polarity::Neg);
  if (!dom) return std::nullopt;
  auto cod = polarized_subst(T->cod.ty, f, z, Polarity::Pos);
  if (!cod) return std::nullopt;
  QType d{*dom, T->dom.q.without(z)};
  QType c{*cod, qual_subst(T->cod.q, f, z)};
  TypeP out = T->k == TK::Fun ? mk_fun(T->self, T->arg, d, c) : mk_all(T->self, T->tvar, T->arg, d, c);
  return Avoided{Qual{z}, out};
}

std::optional<QType> avoid_app(const Name& f, const Qual& q, const Name& x, const Qual& p, const QType& Q,
                               Name* failed_on) {
  Avoided a1{{}, Q.ty};
  if (q.fresh) {
    auto r = avoid_var(Q.ty, f);
    if (!r) {
      if (failed_on) *failed_on = f;
      return std::nullopt;
    }
    a1 = *r;
  }
  Avoided a2{{}, a1.type};
  if (p.fresh) {
    auto r = avoid_var(a1.type, x);
    if (!r) {
      if (failed_on) *failed_on = x;
      return std::nullopt;
    }
    a2 = *r;
  }
  return QType{a2.type, Q.q | a1.delta | a2.delta};
}

}  // namespace reachck
