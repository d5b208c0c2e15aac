#include "reachck/infer.hpp"

#include <ostream>
#include <unordered_map>

#include "reachck/avoid.hpp"
#include "reachck/instrument.hpp"
#include "reachck/pretty.hpp"
#include "reachck/qual.hpp"
#include "reachck/sub.hpp"
#include "reachck/wf.hpp"

namespace reachck {

const char* code_name(DiagCode c) {
  switch (c) {
    case DiagCode::Syntax:
      return "syntax";
    case DiagCode::Unbound:
      return "unbound";
    case DiagCode::AnnotationIllFormed:
      return "annotation-ill-formed";
    case DiagCode::MissingAnnotation:
      return "missing-annotation";
    case DiagCode::TypeMismatch:
      return "type-mismatch";
    case DiagCode::ExposureMismatch:
      return "exposure-mismatch";
    case DiagCode::FreshEscape:
      return "fresh-escape";
    case DiagCode::ConformanceFailure:
      return "conformance-failure";
    case DiagCode::AvoidanceFailure:
      return "avoidance-failure";
    case DiagCode::QualifierBound:
      return "qualifier-bound";
    case DiagCode::Internal:
      return "internal";
  }
  return "internal";
}

namespace {

struct TypeErr {
  Diagnostic d;
};

std::vector<std::string> atoms_of(const Qual& q) {
  std::vector<std::string> out;
  for (const auto& v : q.vars) out.push_back(display_name(v));
  if (q.fresh) out.push_back("*");
  return out;
}

Qual strip(Qual q, const Name& f, const Name& x) {
  q = q.plain();
  q.remove(f).remove(x);
  return q;
}

struct Typed {
  Qual obs;
  QType qt;
};

struct Synth {
  Qual obs;
  Qual q;
};

struct TopLevelHooks {
  std::unordered_map<const Term*, std::size_t> index;
  std::function<void(std::size_t)> on_begin;
  std::function<void(std::size_t, const Typed&)> on_done;
};

class Typer {
 public:
  Typer(Context& ctx, const TypingOptions& opt, TopLevelHooks* hooks = nullptr)
      : ctx_(ctx), opt_(opt), hooks_(hooks) {}

  Typed infer(const TermP& t) {
    OpAudit audit(ctx_, "infer");
    ++depth_;
    Typed r = infer_rule(t);
    --depth_;
    trace("=>", t, show(r.qt));
    return r;
  }

  Synth check(const TermP& t, const TypeP& T) {
    OpAudit audit(ctx_, "check_infer_qual");
    ++depth_;
    Synth r = check_rule(t, T);
    --depth_;
    trace("<=", t, show(T) + " ~> " + show(r.q));
    return r;
  }

  Qual check_full(const TermP& t, const QType& Q) {
    OpAudit audit(ctx_, "check_full");
    Synth s = check(t, Q.ty);
    UnifyFailure uf;
    if (!qual_infer_into(ctx_, s.q, Q.q, &uf)) {
      Diagnostic d;
      d.code = uf.escapes ? DiagCode::FreshEscape : DiagCode::QualifierBound;
      d.rule = "tq-sub";
      d.span = t->span;
      d.expected = show(Q.q);
      d.actual = show(s.q);
      d.message = uf.escapes ? "a fresh value reachable through " + display_name(uf.var) + " escapes into " + show(Q.q)
                             : "qualifier " + show(s.q) + " is not bounded by " + show(Q.q);
      if (!uf.var.empty()) d.atoms = {display_name(uf.var)};
      throw TypeErr{d};
    }
    return s.obs | Q.q.plain();
  }

  Qual conformance(const Name& f, const Qual& q, const Qual& s, const Qual& p, Span span) {
    OpAudit audit(ctx_, "conformance");
    if (p.fresh && p.has(f)) return {};
    if (qual_infer_into(ctx_, s, p)) return {};
    Diagnostic d;
    d.code = DiagCode::ConformanceFailure;
    d.rule = "fa-fresh";
    d.span = span;
    d.expected = show(p);
    d.actual = show(s);
    if (!p.fresh) {
      d.rule = "fa-sub";
      d.message = "argument qualifier " + show(s) + " does not conform to " + show(p);
      d.atoms = atoms_of(s.plain());
      throw TypeErr{d};
    }
    Qual ov = overlap(ctx_, s, q);
    d.atoms = atoms_of(ov.plain());
    if (saturate(ctx_, s).hole_seen || saturate(ctx_, q).hole_seen) {
      d.message = "overlap " + show(ov) + " passes through an uninstantiated self-reference";
      throw TypeErr{d};
    }
    Qual bound = p;
    bound.add_fresh();
    if (!qual_infer_into(ctx_, ov, bound)) {
      d.message = "argument may reach " + show(ov.plain()) + " shared with the function, which " + show(p) +
                  " does not permit";
      throw TypeErr{d};
    }
    return ov.plain();
  }

 private:
  Context& ctx_;
  const TypingOptions& opt_;
  TopLevelHooks* hooks_;
  int depth_ = 0;

  void trace(const char* dir, const TermP& t, const std::string& res) {
    if (!opt_.trace) return;
    std::string s = show(t);
    if (s.size() > 60) s = s.substr(0, 57) + "...";
    *opt_.trace << std::string(2 * depth_, ' ') << s << ' ' << dir << ' ' << res << '\n';
  }

  [[noreturn]] void fail(DiagCode c, const char* rule, Span span, std::string msg) {
    Diagnostic d;
    d.code = c;
    d.rule = rule;
    d.span = span;
    d.message = std::move(msg);
    throw TypeErr{d};
  }

  void check_annotation(const QType& Q, Span span) {
    if (auto e = wf_qtype(ctx_, Q))
      fail(DiagCode::AnnotationIllFormed, "wf", span,
           "annotation " + show(Q) + " is ill-formed (" + wf_kind_name(e->kind) + " at " +
               (e->location.empty() ? "top" : e->location) + ": " + e->detail + ")");
  }

  // Binder domain under the context extended by the self-reference.
  void check_domain(const Name& f, const QType& dom, Span span) {
    const std::size_t n = ctx_.size();
    ctx_.push_self(f, Qual::fresh_only());
    auto e = wf_qtype(ctx_, dom);
    ctx_.truncate(n);
    if (!e) e = wf_self_domain(f, dom);
    if (e)
      fail(DiagCode::AnnotationIllFormed, "wf", span,
           "parameter annotation " + show(dom) + " is ill-formed (" + wf_kind_name(e->kind) + ": " + e->detail + ")");
  }

  TypeP expose_to(const TypeP& T, TK want, const char* rule, Span span) {
    TypeP E = type_expose(ctx_, T);
    if (E->k != want) {
      const char* what = want == TK::Ref ? "a reference" : want == TK::Fun ? "a function" : "a type abstraction";
      Diagnostic d;
      d.code = DiagCode::ExposureMismatch;
      d.rule = rule;
      d.span = span;
      d.actual = show(T);
      d.message = "expected " + std::string(what) + ", found " + show(T);
      throw TypeErr{d};
    }
    return E;
  }

  struct AbsOut {
    Qual r;
    TypeP body_ty;
    Qual body_q;
    Qual obs_extra;
  };

  // Shared by ti-abs, ti-tabs and ti-let: the body under the self-reference
  // and parameter bindings, with the codomain cleaned of negative self uses.
  AbsOut abs_body(const Name& f, const Entry& param, const TermP& body, const char* rule) {
    const std::size_t n = ctx_.size();
    ctx_.push_self(f, Qual::hole_of(f));
    ctx_.push(param);
    Typed b;
    try {
      b = infer(body);
    } catch (...) {
      ctx_.truncate(n);
      throw;
    }
    const Qual qf = ctx_.at(n).q;
    ctx_.truncate(n);
    auto V = polarized_subst(b.qt.ty, Qual{f}, f, Polarity::Pos);
    if (!V)
      fail(DiagCode::AvoidanceFailure, rule, body->span,
           "the result type " + show(b.qt.ty) + " mentions the enclosing function inside a reference");
    const Name& x = param.qname();
    Qual r = strip(param.q | qf.plain() | b.obs, f, x);
    return AbsOut{r, *V, b.qt.q, {}};
  }

  Typed app_result(const Name& f, const Qual& q, const Name& x, const Qual& s, const QType& Q, Span span,
                   const char* rule) {
    Name bad;
    auto out = avoid_app(f, q, x, s, Q, &bad);
    if (!out) {
      Diagnostic d;
      d.code = DiagCode::AvoidanceFailure;
      d.rule = rule;
      d.span = span;
      d.atoms = {display_name(bad)};
      d.actual = show(Q);
      d.message = "cannot eliminate the fresh " + std::string(bad == f ? "function" : "argument") + " from " + show(Q);
      throw TypeErr{d};
    }
    return Typed{strip(out->q, f, x), *out};
  }

  Typed infer_rule(const TermP& t) {
    switch (t->k) {
      case EK::Unit:
        return {{}, qt(mk_base())};
      case EK::Var: {
        auto i = ctx_.find_q(t->name);
        if (!i || ctx_.at(*i).k == BK::TVar)
          fail(DiagCode::Unbound, "ti-var", t->span, "unbound variable " + display_name(t->name));
        return {Qual{t->name}, qt(ctx_.at(*i).ty, Qual{t->name})};
      }
      case EK::Ref: {
        Typed a = infer(t->a);
        if (a.qt.q.fresh) {
          Diagnostic d;
          d.code = DiagCode::FreshEscape;
          d.rule = "ti-ref";
          d.span = t->a->span;
          d.actual = show(a.qt);
          d.message = "a reference cannot hold a fresh value; bind it with val first";
          throw TypeErr{d};
        }
        return {a.obs, qt(mk_ref(a.qt), Qual::fresh_only())};
      }
      case EK::Deref: {
        Typed a = infer(t->a);
        TypeP R = expose_to(a.qt.ty, TK::Ref, "ti-deref", t->a->span);
        return {a.obs | R->dom.q.plain(), R->dom};
      }
      case EK::Assign: {
        Typed a = infer(t->a);
        TypeP R = expose_to(a.qt.ty, TK::Ref, "ti-assign", t->a->span);
        Qual phi = check_full(t->b, R->dom);
        return {a.obs | phi, qt(mk_base())};
      }
      case EK::Abs: {
        if (!t->ann)
          fail(DiagCode::MissingAnnotation, "ti-abs", t->span,
               "cannot infer the parameter type of " + display_name(t->arg) + "; annotate it or use it where a " +
                   "function type is expected");
        check_domain(t->self, *t->ann, t->span);
        AbsOut o = abs_body(t->self, Entry{BK::Var, t->arg, {}, t->ann->ty, t->ann->q}, t->a, "ti-abs");
        TypeP F = mk_fun(t->self, t->arg, *t->ann, qt(o.body_ty, o.body_q));
        return {o.r, qt(F, o.r)};
      }
      case EK::TAbs: {
        check_domain(t->self, *t->ann, t->span);
        AbsOut o = abs_body(t->self, Entry{BK::TVar, t->tvar, t->arg, t->ann->ty, t->ann->q}, t->a, "ti-tabs");
        TypeP F = mk_all(t->self, t->tvar, t->arg, *t->ann, qt(o.body_ty, o.body_q));
        return {o.r, qt(F, o.r)};
      }
      case EK::Let: {
        Typed rhs;
        auto it = hooks_ ? hooks_->index.find(t.get()) : decltype(hooks_->index.end()){};
        const bool top = hooks_ && it != hooks_->index.end();
        if (top) hooks_->on_begin(it->second);
        rhs = infer(t->a);
        if (top) hooks_->on_done(it->second, rhs);
        const Name& f = t->self;
        const Name& x = t->arg;
        AbsOut o = abs_body(f, Entry{BK::Var, x, {}, rhs.qt.ty, rhs.qt.q}, t->b, "ti-let");
        QType Q{o.body_ty, o.body_q};
        Typed r = app_result(f, o.r, x, rhs.qt.q, Q, t->span, "ti-let");
        QType res = qtype_subst_var(qtype_subst_var(r.qt, rhs.qt.q, x), o.r, f);
        return {o.r | rhs.obs | r.obs, res};
      }
      case EK::App: {
        Typed fn = infer(t->a);
        TypeP F = expose_to(fn.qt.ty, TK::Fun, "ti-app", t->a->span);
        const Qual& q = fn.qt.q;
        const Name& f = F->self;
        const Name& x = F->arg;
        if (q.fresh && occurs(f, F->dom.ty, Polarity::Any))
          fail(DiagCode::FreshEscape, "ti-app", t->a->span,
               "a fresh function whose parameter type refers to itself cannot be applied");
        TypeP T = type_subst_var(F->dom.ty, q, f);
        Synth arg = check(t->b, T);
        Qual phi3 = conformance(f, q, arg.q, F->dom.q, t->b->span);
        Typed r = app_result(f, q, x, arg.q, F->cod, t->span, "ti-app");
        QType res = qtype_subst_var(qtype_subst_var(r.qt, arg.q, x), q, f);
        return {fn.obs | arg.obs | phi3 | r.obs, res};
      }
      case EK::TApp: {
        const QType& A = *t->ann;
        check_annotation(A, t->span);
        Typed fn = infer(t->a);
        TypeP F = expose_to(fn.qt.ty, TK::All, "ti-tapp", t->a->span);
        const Qual& q = fn.qt.q;
        const Name& f = F->self;
        const Name& x = F->arg;
        if (q.fresh && occurs(f, F->dom.ty, Polarity::Any))
          fail(DiagCode::FreshEscape, "ti-tapp", t->a->span,
               "a fresh type abstraction whose bound refers to itself cannot be instantiated");
        TypeP T = type_subst_var(F->dom.ty, q, f);
        std::string why;
        auto delta = subtype_into(ctx_, A.ty, Qual::fresh_only(), T, &why);
        if (!delta || !delta->plain().empty()) {
          Diagnostic d;
          d.code = DiagCode::TypeMismatch;
          d.rule = "ti-tapp";
          d.span = t->span;
          d.expected = show(T);
          d.actual = show(A.ty);
          d.message = "type argument " + show(A.ty) + " is not within the bound " + show(T) + (why.empty() ? "" : ": " + why);
          throw TypeErr{d};
        }
        Qual phi2 = conformance(f, q, A.q, F->dom.q, t->span);
        Typed r = app_result(f, q, x, A.q, F->cod, t->span, "ti-tapp");
        QType res = qtype_subst_var(qtype_subst_tvar(r.qt, A.ty, A.q, F->tvar, x), q, f);
        return {fn.obs | phi2 | strip(A.q, f, x) | r.obs, res};
      }
      case EK::Ascribe: {
        check_annotation(*t->ann, t->span);
        Qual phi = check_full(t->a, *t->ann);
        return {phi, *t->ann};
      }
    }
    fail(DiagCode::Internal, "infer", t->span, "unknown term");
  }

  Synth check_rule(const TermP& t, const TypeP& T) {
    if (t->k == EK::Ref && T->k == TK::Ref) {
      Qual phi = check_full(t->a, T->dom);
      return {phi, Qual::fresh_only()};
    }
    if (t->k == EK::Abs && !t->ann && T->k == TK::Fun) {
      const Name& f = t->self;
      const Name& x = t->arg;
      TypeP F = rename(T, {{T->self, f}, {T->arg, x}});
      const std::size_t n = ctx_.size();
      ctx_.push_self(f, Qual::hole_of(f));
      ctx_.push_var(x, F->dom);
      Qual phi;
      try {
        phi = check_full(t->a, F->cod);
      } catch (...) {
        ctx_.truncate(n);
        throw;
      }
      const Qual qf = ctx_.at(n).q;
      ctx_.truncate(n);
      Qual r = strip(F->dom.q | qf.plain() | phi, f, x);
      return {r, r};
    }
    Typed a = infer(t);
    std::string why;
    auto delta = subtype_into(ctx_, a.qt.ty, a.qt.q, T, &why);
    if (!delta) {
      Diagnostic d;
      d.code = DiagCode::TypeMismatch;
      d.rule = "tc-sub";
      d.span = t->span;
      d.expected = show(T);
      d.actual = show(a.qt.ty);
      d.message = "expected " + show(T) + ", found " + show(a.qt.ty) + (why.empty() ? "" : ": " + why);
      throw TypeErr{d};
    }
    Qual q = a.qt.q | *delta;
    return {a.obs | delta->plain() | a.qt.q.plain(), q};
  }
};

template <class T, class F>
Outcome<T> run(const Context& ctx, F&& body) {
  Outcome<T> out;
  Context work = ctx;
  try {
    out.value = body(work);
  } catch (const TypeErr& e) {
    out.diag = e.d;
  } catch (const MalformedQualifier& e) {
    Diagnostic d;
    d.code = DiagCode::Unbound;
    d.rule = "wf";
    d.message = e.what();
    out.diag = d;
  }
  return out;
}

}  // namespace

Outcome<TypedResult> infer(const Context& ctx, const TermP& t, const TypingOptions& opt) {
  return run<TypedResult>(ctx, [&](Context& w) {
    Typer ty(w, opt);
    Typed r = ty.infer(t);
    return TypedResult{r.obs, r.qt, w};
  });
}

Outcome<CheckResult> check_infer_qual(const Context& ctx, const TermP& t, const TypeP& T, const TypingOptions& opt) {
  return run<CheckResult>(ctx, [&](Context& w) {
    Typer ty(w, opt);
    Synth s = ty.check(t, T);
    return CheckResult{s.obs, s.q, w};
  });
}

Outcome<FullCheckResult> check_full(const Context& ctx, const TermP& t, const QType& Q, const TypingOptions& opt) {
  return run<FullCheckResult>(ctx, [&](Context& w) {
    Typer ty(w, opt);
    Qual phi = ty.check_full(t, Q);
    return FullCheckResult{phi, w};
  });
}

Outcome<FullCheckResult> conformance(const Context& ctx, const Name& f, const Qual& q, const Qual& s, const Qual& p) {
  TypingOptions opt;
  return run<FullCheckResult>(ctx, [&](Context& w) {
    Typer ty(w, opt);
    Qual phi = ty.conformance(f, q, s, p, {});
    return FullCheckResult{phi, w};
  });
}

TermP program_term(const std::vector<Decl>& decls) {
  TermP body = t_unit();
  for (auto it = decls.rbegin(); it != decls.rend(); ++it)
    body = t_let(it->name, global_names().fresh("let_" + display_name(it->name)), it->rhs, body, it->span);
  return body;
}

ProgramReport typecheck_program(const std::vector<Decl>& decls, const TypingOptions& opt) {
  ProgramReport rep;
  for (const auto& d : decls) {
    DeclReport r;
    r.name = d.name;
    r.is_expr = d.is_expr;
    r.from_prelude = d.from_prelude;
    rep.decls.push_back(r);
  }
  TermP prog = program_term(decls);
  TopLevelHooks hooks;
  {
    const Term* cur = prog.get();
    for (std::size_t i = 0; i < decls.size(); ++i, cur = cur->b.get()) hooks.index[cur] = i;
  }
  std::optional<std::size_t> current;
  hooks.on_begin = [&](std::size_t i) { current = i; };
  hooks.on_done = [&](std::size_t i, const Typed& t) {
    rep.decls[i].checked = true;
    rep.decls[i].ok = true;
    rep.decls[i].qt = t.qt;
    rep.decls[i].obs = t.obs;
    current.reset();
  };
  Context ctx;
  auto out = run<TypedResult>(ctx, [&](Context& w) {
    Typer ty(w, opt, &hooks);
    Typed r = ty.infer(prog);
    return TypedResult{r.obs, r.qt, w};
  });
  if (out.ok()) {
    rep.result = out.value->qt;
    rep.result_obs = out.value->obs;
    rep.hole_free = !has_hole(out.value->qt.ty) && !out.value->qt.q.hole && out.value->out_ctx.empty();
    rep.ok = rep.hole_free;
    if (!rep.hole_free) {
      Diagnostic d;
      d.code = DiagCode::Internal;
      d.rule = "program";
      d.message = "result of the program mentions an uninstantiated self-reference";
      rep.program_diags.push_back(d);
    }
    return rep;
  }
  if (current) {
    rep.decls[*current].checked = true;
    rep.decls[*current].diags.push_back(*out.diag);
  } else {
    rep.program_diags.push_back(*out.diag);
  }
  return rep;
}

}  // namespace reachck
