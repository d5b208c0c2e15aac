#include "reachck/sub.hpp"

#include <utility>
#include <vector>

#include "reachck/instrument.hpp"
#include "reachck/pretty.hpp"
#include "reachck/qual.hpp"

namespace reachck {

TypeP self_unpack(const TypeP& T, const Qual& q) {
  if ((T->k != TK::Fun && T->k != TK::All) || q.fresh) return T;
  const Name& f = T->self;
  QType dom{type_subst_var(T->dom.ty, q, f), T->dom.q};
  QType cod = qtype_subst_var(T->cod, q, f);
  return T->k == TK::Fun ? mk_fun(f, T->arg, dom, cod) : mk_all(f, T->tvar, T->arg, dom, cod);
}

TypeP type_expose(const Context& ctx, const TypeP& T) {
  TypeP t = T;
  while (t->k == TK::TVar) {
    auto i = ctx.find_t(t->tvar);
    if (!i) throw MalformedQualifier("unbound type variable " + t->tvar);
    t = ctx.at(*i).ty;
  }
  return t;
}

namespace {

struct Checker {
  Context& ctx;
  std::string* why;
  std::size_t depth = 0;

  std::optional<Qual> fail(const std::string& msg) {
    if (why && why->empty()) *why = msg;
    return std::nullopt;
  }

  bool infer_q(const Qual& p, const Qual& q) {
    UnifyFailure uf;
    if (qual_infer_into(ctx, p, q, &uf)) return true;
    fail("qualifier " + show(p) + " is not bounded by " + show(q) + (uf.reason.empty() ? "" : ": " + uf.reason));
    return false;
  }

  // Rename T's own binders away from names already in the context.
  TypeP avoid_clash(const TypeP& T) {
    std::map<Name, Name> m;
    if (ctx.binds_q(T->self)) m[T->self] = global_names().fresh(T->self);
    if (ctx.binds_q(T->arg)) m[T->arg] = global_names().fresh(T->arg);
    if (T->k == TK::All && ctx.find_t(T->tvar)) m[T->tvar] = global_names().fresh(T->tvar);
    return m.empty() ? T : rename(T, m);
  }

  static TypeP align(const TypeP& T1, const TypeP& T2) {
    std::map<Name, Name> m;
    if (T2->self != T1->self) m[T2->self] = T1->self;
    if (T2->arg != T1->arg) m[T2->arg] = T1->arg;
    if (T2->k == TK::All && T2->tvar != T1->tvar) m[T2->tvar] = T1->tvar;
    return m.empty() ? T2 : rename(T2, m);
  }

  std::optional<Qual> rec(const TypeP& T1, const Qual& o, const TypeP& T2) {
    struct Depth {
      std::size_t& d;
      explicit Depth(std::size_t& d_) : d(d_) {
        ++d;
        if (d > stats().sub_depth_max) stats().sub_depth_max = d;
      }
      ~Depth() { --d; }
    } guard(depth);

    if (T1->k == TK::Base && T2->k == TK::Base) return Qual{};
    if (T2->k == TK::Top) return Qual{};
    if (T1->k == TK::TVar && T2->k == TK::TVar && T1->tvar == T2->tvar) return Qual{};
    if (T1->k == TK::TVar) {
      auto i = ctx.find_t(T1->tvar);
      if (!i) return fail("unbound type variable " + T1->tvar);
      return rec(ctx.at(*i).ty, o, T2);
    }
    if (T1->k == TK::Ref && T2->k == TK::Ref) return ref(T1, T2);
    if (T1->k == TK::Fun && T2->k == TK::Fun) return fun(avoid_clash(T1), o, T2);
    if (T1->k == TK::All && T2->k == TK::All) return all(avoid_clash(T1), o, T2);
    return fail(show(T1) + " is not a subtype of " + show(T2));
  }

  std::optional<Qual> ref(const TypeP& T1, const TypeP& T2) {
    const Qual fr = Qual::fresh_only();
    auto d1 = rec(T1->dom.ty, fr, T2->dom.ty);
    if (!d1) return std::nullopt;
    if (!d1->empty()) return fail("reference referents differ");
    auto d2 = rec(T2->dom.ty, fr, T1->dom.ty);
    if (!d2) return std::nullopt;
    if (!d2->empty()) return fail("reference referents differ");
    if (!infer_q(T1->dom.q, T2->dom.q)) return std::nullopt;
    if (!infer_q(T2->dom.q, T1->dom.q)) return std::nullopt;
    return Qual{};
  }

  std::optional<Qual> fun(const TypeP& T1, const Qual& o, const TypeP& T2u) {
    const TypeP T2 = align(T1, T2u);
    const Name &f = T1->self, &x = T1->arg;
    const std::size_t n = ctx.size();
    Qual of = o;
    of.hole = f;
    ctx.push_self(f, of);
    auto done = [&](std::optional<Qual> r) {
      ctx.truncate(n);
      return r;
    };
    auto d1 = rec(T2->dom.ty, Qual::fresh_only(), T1->dom.ty);
    if (!d1) return done(std::nullopt);
    const Qual& p1 = T1->dom.q;
    if (!(p1.fresh && p1.has(f))) {
      if (!infer_q(T2->dom.q | *d1, p1)) return done(std::nullopt);
    }
    ctx.push_var(x, T2->dom);
    Qual xs = *d1;
    xs.add(x);
    const QType U1 = qtype_subst_var(T1->cod, xs, x);
    auto d2 = rec(U1.ty, Qual::fresh_only(), T2->cod.ty);
    if (!d2) return done(std::nullopt);
    if (!infer_q(U1.q | *d2, T2->cod.q)) return done(std::nullopt);
    Qual d0 = ctx.at(n).q.plain();
    for (const auto& v : o.vars) d0.remove(v);
    Qual d = d0 | *d1 | *d2;
    d.fresh = false;
    d.remove(f).remove(x);
    return done(d);
  }

  std::optional<Qual> all(const TypeP& T1, const Qual& o, const TypeP& T2u) {
    const TypeP T2 = align(T1, T2u);
    if (!alpha_eq(T1->dom.ty, T2->dom.ty)) return fail("quantifier bounds differ");
    const Name &f = T1->self, &x = T1->arg;
    const std::size_t n = ctx.size();
    Qual of = o;
    of.hole = f;
    ctx.push_self(f, of);
    auto done = [&](std::optional<Qual> r) {
      ctx.truncate(n);
      return r;
    };
    const Qual& p1 = T1->dom.q;
    if (!(p1.fresh && p1.has(f))) {
      if (!infer_q(T2->dom.q, p1)) return done(std::nullopt);
    }
    ctx.push_tvar(T1->tvar, x, T2->dom);
    auto d2 = rec(T1->cod.ty, Qual::fresh_only(), T2->cod.ty);
    if (!d2) return done(std::nullopt);
    if (!infer_q(T1->cod.q | *d2, T2->cod.q)) return done(std::nullopt);
    Qual d0 = ctx.at(n).q.plain();
    for (const auto& v : o.vars) d0.remove(v);
    Qual d = d0 | *d2;
    d.fresh = false;
    d.remove(f).remove(x);
    return done(d);
  }

};

}  // namespace

std::optional<Qual> subtype_into(Context& ctx, const TypeP& T1, const Qual& q, const TypeP& T2, std::string* why) {
  OpAudit audit(ctx, "subtype_check");
  std::vector<std::pair<std::size_t, Qual>> snap;
  for (std::size_t i = 0; i < ctx.size(); ++i)
    if (ctx.at(i).k == BK::Self && ctx.at(i).q.hole) snap.emplace_back(i, ctx.at(i).q);
  Checker c{ctx, why};
  auto r = c.rec(self_unpack(T1, q), q, T2);
  if (!r)
    for (auto& [i, sq] : snap) ctx.set_qual(i, sq);
  return r;
}

std::optional<SubResult> subtype_check(const Context& ctx, const TypeP& T1, const Qual& q, const TypeP& T2,
                                       std::string* why) {
  Context out = ctx;
  auto d = subtype_into(out, T1, q, T2, why);
  if (!d) return std::nullopt;
  return SubResult{*d, std::move(out)};
}

}  // namespace reachck
