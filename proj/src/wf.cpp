#include "reachck/wf.hpp"

namespace reachck {

const char* wf_kind_name(WfKind k) {
  switch (k) {
    case WfKind::HoleInQualifier:
      return "hole-in-qualifier";
    case WfKind::UnboundVariable:
      return "unbound-variable";
    case WfKind::SelfInBadPolarity:
      return "self-in-bad-polarity";
    case WfKind::SelfWithoutFresh:
      return "self-without-fresh";
    case WfKind::HoleOutsideSelf:
      return "hole-outside-self";
    case WfKind::UnboundTypeVar:
      return "unbound-type-variable";
  }
  return "?";
}

namespace {

WfResult at_path(WfResult r, const std::string& step) {
  if (r) r->location = r->location.empty() ? step : step + "/" + r->location;
  return r;
}

bool binders_clash(const Context& ctx, const TypeP& T) {
  return ctx.binds_q(T->self) || ctx.binds_q(T->arg) || (T->k == TK::All && ctx.find_t(T->tvar));
}

}  // namespace

WfResult wf_qual(const Context& ctx, const Qual& q) {
  if (q.hole) return WfError{WfKind::HoleInQualifier, "", "hole of " + *q.hole};
  for (const auto& v : q.vars)
    if (!ctx.binds_q(v)) return WfError{WfKind::UnboundVariable, "", v};
  return std::nullopt;
}

WfResult wf_self_domain(const Name& f, const QType& dom) {
  if (occurs(f, dom.ty, Polarity::Pos)) return WfError{WfKind::SelfInBadPolarity, "dom", f};
  if (dom.q.has(f) && !dom.q.fresh) return WfError{WfKind::SelfWithoutFresh, "dom", f};
  return std::nullopt;
}

WfResult wf_qtype(Context& ctx, const QType& Q) {
  if (auto e = wf_type(ctx, Q.ty)) return e;
  return wf_qual(ctx, Q.q);
}

WfResult wf_type(Context& ctx, const TypeP& T) {
  switch (T->k) {
    case TK::Base:
    case TK::Top:
      return std::nullopt;
    case TK::TVar:
      if (!ctx.find_t(T->tvar)) return WfError{WfKind::UnboundTypeVar, "", T->tvar};
      return std::nullopt;
    case TK::Ref:
      return at_path(wf_qtype(ctx, T->dom), "ref");
    case TK::Fun:
    case TK::All: {
      if (binders_clash(ctx, T)) return wf_type(ctx, freshen(T));
      if (auto e = wf_self_domain(T->self, T->dom)) return e;
      if (occurs(T->self, T->cod.ty, Polarity::Neg)) return WfError{WfKind::SelfInBadPolarity, "cod", T->self};
      const std::size_t n = ctx.size();
      ctx.push_self(T->self, Qual::fresh_only());
      WfResult r = at_path(wf_qtype(ctx, T->dom), "dom");
      if (!r) {
        if (T->k == TK::Fun)
          ctx.push_var(T->arg, T->dom);
        else
          ctx.push_tvar(T->tvar, T->arg, T->dom);
        r = at_path(wf_qtype(ctx, T->cod), "cod");
      }
      ctx.truncate(n);
      return r;
    }
  }
  return std::nullopt;
}

WfResult wf_context(const Context& ctx) {
  Context prefix;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const Entry& e = ctx.at(i);
    const std::string loc = "entry " + std::to_string(i) + " (" + e.name + ")";
    if (e.k == BK::Self) {
      Qual q = e.q;
      if (q.hole && *q.hole != e.name) return WfError{WfKind::HoleOutsideSelf, loc, "foreign hole " + *q.hole};
      q.hole.reset();
      if (auto r = wf_qual(prefix, q)) return at_path(r, loc);
    } else {
      if (e.q.hole) return WfError{WfKind::HoleOutsideSelf, loc, "hole of " + *e.q.hole};
      if (auto r = wf_qtype(prefix, QType{e.ty, e.q})) return at_path(r, loc);
    }
    prefix.push(e);
  }
  return std::nullopt;
}

bool ctx_subsumes(const Context& g1, const Context& g2) {
  if (g1.size() != g2.size()) return false;
  for (std::size_t i = 0; i < g1.size(); ++i) {
    const Entry &a = g1.at(i), &b = g2.at(i);
    if (a.k != b.k || a.name != b.name || a.qvar != b.qvar || !type_eq(a.ty, b.ty)) return false;
    if (a.q == b.q) continue;
    if (a.k != BK::Self || !a.q.hole) return false;
    // q' = q[{hole, d}/hole] with d fresh-free and closed under the prefix
    if (b.q.hole != a.q.hole || b.q.fresh != a.q.fresh) return false;
    if (!a.q.subset_of(b.q)) return false;
    for (const auto& v : b.q.vars) {
      if (a.q.has(v)) continue;
      auto j = g1.find_q(v);
      if (!j || *j >= i) return false;
    }
  }
  return true;
}

}  // namespace reachck
