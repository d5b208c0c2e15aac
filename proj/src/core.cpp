#include "reachck/core.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>

namespace reachck {

// ===========================================================================
// Qual
// ===========================================================================

Qual& Qual::join(const Qual& o) {
  vars.insert(o.vars.begin(), o.vars.end());
  fresh = fresh || o.fresh;
  if (o.hole) {
    if (hole && *hole != *o.hole) throw std::logic_error("qualifier with two holes: " + *hole + ", " + *o.hole);
    hole = o.hole;
  }
  return *this;
}

bool Qual::subset_of(const Qual& o) const {
  if (fresh && !o.fresh) return false;
  if (hole && o.hole != hole) return false;
  return std::includes(o.vars.begin(), o.vars.end(), vars.begin(), vars.end());
}

Qual qual_subst(const Qual& q, const Qual& p, const Name& x) {
  if (!q.has(x)) return q;
  Qual r = q.without(x);
  r.join(p);
  return r;
}

// ===========================================================================
// Type construction
// ===========================================================================

namespace {

TypeP mk(Type t) { return std::make_shared<const Type>(std::move(t)); }

}  // namespace

TypeP mk_base() {
  static const TypeP b = mk(Type{TK::Base, {}, {}, {}, {}, {}});
  return b;
}
TypeP mk_top() {
  static const TypeP t = mk(Type{TK::Top, {}, {}, {}, {}, {}});
  return t;
}
TypeP mk_tvar(const Name& X) { return mk(Type{TK::TVar, {}, {}, X, {}, {}}); }
TypeP mk_ref(QType referent) { return mk(Type{TK::Ref, {}, {}, {}, std::move(referent), {}}); }
TypeP mk_fun(const Name& f, const Name& x, QType dom, QType cod) {
  return mk(Type{TK::Fun, f, x, {}, std::move(dom), std::move(cod)});
}
TypeP mk_all(const Name& f, const Name& X, const Name& x, QType bound, QType body) {
  return mk(Type{TK::All, f, x, X, std::move(bound), std::move(body)});
}

// ===========================================================================
// Equality
// ===========================================================================

bool qtype_eq(const QType& a, const QType& b) { return a.q == b.q && type_eq(a.ty, b.ty); }

bool type_eq(const TypeP& a, const TypeP& b) {
  if (a == b) return true;
  if (!a || !b || a->k != b->k) return false;
  switch (a->k) {
    case TK::Base:
    case TK::Top:
      return true;
    case TK::TVar:
      return a->tvar == b->tvar;
    case TK::Ref:
      return qtype_eq(a->dom, b->dom);
    case TK::Fun:
    case TK::All:
      return a->self == b->self && a->arg == b->arg && a->tvar == b->tvar && qtype_eq(a->dom, b->dom) &&
             qtype_eq(a->cod, b->cod);
  }
  return false;
}

namespace {

Qual rename_qual(const Qual& q, const std::map<Name, Name>& m) {
  Qual r;
  r.fresh = q.fresh;
  if (q.hole) {
    auto it = m.find(*q.hole);
    r.hole = it == m.end() ? *q.hole : it->second;
  }
  for (const auto& v : q.vars) {
    auto it = m.find(v);
    r.vars.insert(it == m.end() ? v : it->second);
  }
  return r;
}

Name rn(const Name& n, const std::map<Name, Name>& m) {
  auto it = m.find(n);
  return it == m.end() ? n : it->second;
}

QType rename_qt(const QType& Q, const std::map<Name, Name>& m) { return {rename(Q.ty, m), rename_qual(Q.q, m)}; }

// Canonical binder names, so that alpha-equivalent types become equal.
TypeP canon(const TypeP& T, std::map<Name, Name>& m, std::size_t& ctr) {
  switch (T->k) {
    case TK::Base:
    case TK::Top:
      return T;
    case TK::TVar:
      return mk_tvar(rn(T->tvar, m));
    case TK::Ref:
      return mk_ref({canon(T->dom.ty, m, ctr), rename_qual(T->dom.q, m)});
    case TK::Fun:
    case TK::All: {
      auto saved = m;
      Name f = "#" + std::to_string(ctr++);
      Name x = "#" + std::to_string(ctr++);
      Name X = "#" + std::to_string(ctr++);
      m[T->self] = f;
      QType dom;
      if (T->k == TK::Fun) {
        dom = {canon(T->dom.ty, m, ctr), rename_qual(T->dom.q, m)};
        m[T->arg] = x;
      } else {
        dom = {canon(T->dom.ty, m, ctr), rename_qual(T->dom.q, m)};
        m[T->arg] = x;
        m[T->tvar] = X;
      }
      QType cod{canon(T->cod.ty, m, ctr), rename_qual(T->cod.q, m)};
      m = saved;
      return T->k == TK::Fun ? mk_fun(f, x, dom, cod) : mk_all(f, X, x, dom, cod);
    }
  }
  return T;
}

}  // namespace

bool alpha_eq(const TypeP& a, const TypeP& b) {
  std::map<Name, Name> ma, mb;
  std::size_t ca = 0, cb = 0;
  return type_eq(canon(a, ma, ca), canon(b, mb, cb));
}

bool alpha_eq(const QType& a, const QType& b) { return a.q == b.q && alpha_eq(a.ty, b.ty); }

// ===========================================================================
// Substitution
// ===========================================================================

TypeP rename(const TypeP& T, const std::map<Name, Name>& m) {
  if (m.empty()) return T;
  switch (T->k) {
    case TK::Base:
    case TK::Top:
      return T;
    case TK::TVar:
      return mk_tvar(rn(T->tvar, m));
    case TK::Ref:
      return mk_ref(rename_qt(T->dom, m));
    case TK::Fun:
      return mk_fun(rn(T->self, m), rn(T->arg, m), rename_qt(T->dom, m), rename_qt(T->cod, m));
    case TK::All:
      return mk_all(rn(T->self, m), rn(T->tvar, m), rn(T->arg, m), rename_qt(T->dom, m), rename_qt(T->cod, m));
  }
  return T;
}

namespace {

TypeP freshen_rec(const TypeP& T, std::map<Name, Name>& m) {
  switch (T->k) {
    case TK::Base:
    case TK::Top:
      return T;
    case TK::TVar:
      return mk_tvar(rn(T->tvar, m));
    case TK::Ref:
      return mk_ref({freshen_rec(T->dom.ty, m), rename_qual(T->dom.q, m)});
    case TK::Fun:
    case TK::All: {
      auto saved = m;
      Name f = global_names().fresh(T->self);
      Name x = global_names().fresh(T->arg);
      m[T->self] = f;
      QType dom{freshen_rec(T->dom.ty, m), rename_qual(T->dom.q, m)};
      m[T->arg] = x;
      Name X;
      if (T->k == TK::All) {
        X = global_names().fresh(T->tvar);
        m[T->tvar] = X;
      }
      QType cod{freshen_rec(T->cod.ty, m), rename_qual(T->cod.q, m)};
      m = saved;
      return T->k == TK::Fun ? mk_fun(f, x, dom, cod) : mk_all(f, X, x, dom, cod);
    }
  }
  return T;
}

}  // namespace

TypeP freshen(const TypeP& T) {
  std::map<Name, Name> m;
  return freshen_rec(T, m);
}

QType qtype_subst_var(const QType& Q, const Qual& p, const Name& x) {
  return {type_subst_var(Q.ty, p, x), qual_subst(Q.q, p, x)};
}

TypeP type_subst_var(const TypeP& T, const Qual& p, const Name& x) {
  if (!occurs(x, T, Polarity::Any)) return T;
  switch (T->k) {
    case TK::Base:
    case TK::Top:
    case TK::TVar:
      return T;
    case TK::Ref:
      return mk_ref(qtype_subst_var(T->dom, p, x));
    case TK::Fun:
      return mk_fun(T->self, T->arg, qtype_subst_var(T->dom, p, x), qtype_subst_var(T->cod, p, x));
    case TK::All:
      return mk_all(T->self, T->tvar, T->arg, qtype_subst_var(T->dom, p, x), qtype_subst_var(T->cod, p, x));
  }
  return T;
}

QType qtype_subst_tvar(const QType& Q, const TypeP& V, const Qual& s, const Name& X, const Name& x) {
  return {type_subst_tvar(Q.ty, V, s, X, x), qual_subst(Q.q, s, x)};
}

TypeP type_subst_tvar(const TypeP& T, const TypeP& V, const Qual& s, const Name& X, const Name& x) {
  switch (T->k) {
    case TK::Base:
    case TK::Top:
      return T;
    case TK::TVar:
      return T->tvar == X ? freshen(V) : T;
    case TK::Ref:
      return mk_ref(qtype_subst_tvar(T->dom, V, s, X, x));
    case TK::Fun:
      return mk_fun(T->self, T->arg, qtype_subst_tvar(T->dom, V, s, X, x), qtype_subst_tvar(T->cod, V, s, X, x));
    case TK::All:
      return mk_all(T->self, T->tvar, T->arg, qtype_subst_tvar(T->dom, V, s, X, x),
                    qtype_subst_tvar(T->cod, V, s, X, x));
  }
  return T;
}

// ===========================================================================
// Occurrence
// ===========================================================================

bool occurs(const Name& y, const TypeP& T, Polarity pol) {
  switch (T->k) {
    case TK::Base:
    case TK::Top:
    case TK::TVar:
      return false;
    case TK::Ref:
      // invariant position: counts at every polarity
      return T->dom.q.has(y) || occurs(y, T->dom.ty, Polarity::Any);
    case TK::Fun:
    case TK::All:
      switch (pol) {
        case Polarity::Any:
          return T->dom.q.has(y) || T->cod.q.has(y) || occurs(y, T->dom.ty, Polarity::Any) ||
                 occurs(y, T->cod.ty, Polarity::Any);
        case Polarity::Pos:
          return occurs(y, T->dom.ty, Polarity::Neg) || occurs(y, T->cod.ty, Polarity::Pos) || T->cod.q.has(y);
        case Polarity::Neg:
          return occurs(y, T->dom.ty, Polarity::Pos) || T->dom.q.has(y) || occurs(y, T->cod.ty, Polarity::Neg);
      }
  }
  return false;
}

void collect_vars(const TypeP& T, NameSet& out) {
  switch (T->k) {
    case TK::Base:
    case TK::Top:
    case TK::TVar:
      return;
    case TK::Ref:
      out.insert(T->dom.q.vars.begin(), T->dom.q.vars.end());
      collect_vars(T->dom.ty, out);
      return;
    case TK::Fun:
    case TK::All:
      out.insert(T->dom.q.vars.begin(), T->dom.q.vars.end());
      out.insert(T->cod.q.vars.begin(), T->cod.q.vars.end());
      collect_vars(T->dom.ty, out);
      collect_vars(T->cod.ty, out);
      return;
  }
}

namespace {

void fv(const TypeP& T, NameSet& bq, NameSet& bt, NameSet& qv, NameSet& tv) {
  switch (T->k) {
    case TK::Base:
    case TK::Top:
      return;
    case TK::TVar:
      if (!bt.count(T->tvar)) tv.insert(T->tvar);
      return;
    case TK::Ref:
      for (const auto& v : T->dom.q.vars)
        if (!bq.count(v)) qv.insert(v);
      fv(T->dom.ty, bq, bt, qv, tv);
      return;
    case TK::Fun:
    case TK::All: {
      NameSet bq2 = bq, bt2 = bt;
      bq2.insert(T->self);
      for (const auto& v : T->dom.q.vars)
        if (!bq2.count(v)) qv.insert(v);
      fv(T->dom.ty, bq2, bt2, qv, tv);
      bq2.insert(T->arg);
      if (T->k == TK::All) bt2.insert(T->tvar);
      for (const auto& v : T->cod.q.vars)
        if (!bq2.count(v)) qv.insert(v);
      fv(T->cod.ty, bq2, bt2, qv, tv);
      return;
    }
  }
}

}  // namespace

void free_vars(const TypeP& T, NameSet& qvars, NameSet& tvars) {
  NameSet bq, bt;
  fv(T, bq, bt, qvars, tvars);
}

std::size_t type_size(const TypeP& T) {
  switch (T->k) {
    case TK::Base:
    case TK::Top:
    case TK::TVar:
      return 1;
    case TK::Ref:
      return 2 + type_size(T->dom.ty);
    case TK::Fun:
    case TK::All:
      return 3 + type_size(T->dom.ty) + type_size(T->cod.ty);
  }
  return 1;
}

bool has_hole(const TypeP& T) {
  switch (T->k) {
    case TK::Base:
    case TK::Top:
    case TK::TVar:
      return false;
    case TK::Ref:
      return T->dom.q.hole.has_value() || has_hole(T->dom.ty);
    case TK::Fun:
    case TK::All:
      return T->dom.q.hole.has_value() || T->cod.q.hole.has_value() || has_hole(T->dom.ty) ||
             has_hole(T->cod.ty);
  }
  return false;
}

// ===========================================================================
// Terms
// ===========================================================================

namespace {

TermP mkt(Term t) { return std::make_shared<const Term>(std::move(t)); }

}  // namespace

TermP t_unit(Span s) {
  Term t;
  t.k = EK::Unit;
  t.span = s;
  return mkt(std::move(t));
}
TermP t_var(const Name& x, Span s) {
  Term t;
  t.k = EK::Var;
  t.name = x;
  t.span = s;
  return mkt(std::move(t));
}
TermP t_ref(TermP a, Span s) {
  Term t;
  t.k = EK::Ref;
  t.a = std::move(a);
  t.span = s;
  return mkt(std::move(t));
}
TermP t_deref(TermP a, Span s) {
  Term t;
  t.k = EK::Deref;
  t.a = std::move(a);
  t.span = s;
  return mkt(std::move(t));
}
TermP t_assign(TermP l, TermP r, Span s) {
  Term t;
  t.k = EK::Assign;
  t.a = std::move(l);
  t.b = std::move(r);
  t.span = s;
  return mkt(std::move(t));
}
TermP t_abs(const Name& f, const Name& x, std::optional<QType> ann, TermP body, Span s) {
  Term t;
  t.k = EK::Abs;
  t.self = f;
  t.arg = x;
  t.ann = std::move(ann);
  t.a = std::move(body);
  t.span = s;
  return mkt(std::move(t));
}
TermP t_app(TermP f, TermP a, Span s) {
  Term t;
  t.k = EK::App;
  t.a = std::move(f);
  t.b = std::move(a);
  t.span = s;
  return mkt(std::move(t));
}
TermP t_tabs(const Name& f, const Name& X, const Name& x, QType bound, TermP body, Span s) {
  Term t;
  t.k = EK::TAbs;
  t.self = f;
  t.tvar = X;
  t.arg = x;
  t.ann = std::move(bound);
  t.a = std::move(body);
  t.span = s;
  return mkt(std::move(t));
}
TermP t_tapp(TermP a, QType arg, Span s) {
  Term t;
  t.k = EK::TApp;
  t.a = std::move(a);
  t.ann = std::move(arg);
  t.span = s;
  return mkt(std::move(t));
}
TermP t_ascribe(TermP a, QType q, Span s) {
  Term t;
  t.k = EK::Ascribe;
  t.a = std::move(a);
  t.ann = std::move(q);
  t.span = s;
  return mkt(std::move(t));
}
TermP t_let(const Name& x, const Name& self, TermP rhs, TermP body, Span s) {
  Term t;
  t.k = EK::Let;
  t.arg = x;
  t.self = self;
  t.a = std::move(rhs);
  t.b = std::move(body);
  t.span = s;
  return mkt(std::move(t));
}

std::size_t term_size(const TermP& t) {
  if (!t) return 0;
  std::size_t n = 1;
  if (t->ann) n += type_size(t->ann->ty) + 1;
  return n + term_size(t->a) + term_size(t->b);
}

namespace {

void tfv(const TermP& t, NameSet& bound, NameSet& out) {
  if (!t) return;
  switch (t->k) {
    case EK::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case EK::Abs:
    case EK::TAbs: {
      bool s1 = bound.insert(t->self).second;
      bool s2 = bound.insert(t->arg).second;
      tfv(t->a, bound, out);
      if (s1) bound.erase(t->self);
      if (s2) bound.erase(t->arg);
      return;
    }
    case EK::Let: {
      tfv(t->a, bound, out);
      bool s1 = bound.insert(t->self).second;
      bool s2 = bound.insert(t->arg).second;
      tfv(t->b, bound, out);
      if (s1) bound.erase(t->self);
      if (s2) bound.erase(t->arg);
      return;
    }
    default:
      tfv(t->a, bound, out);
      tfv(t->b, bound, out);
  }
}

}  // namespace

NameSet term_free_vars(const TermP& t) {
  NameSet bound, out;
  tfv(t, bound, out);
  return out;
}

// ===========================================================================
// Context
// ===========================================================================

void Context::push(Entry e) {
  const std::size_t i = es_.size();
  if (e.k == BK::TVar) {
    if (!tidx_.emplace(e.name, i).second) throw std::logic_error("duplicate type variable " + e.name);
  }
  if (!qidx_.emplace(e.qname(), i).second) throw std::logic_error("duplicate binding " + e.qname());
  es_.push_back(std::move(e));
}

void Context::pop() {
  const Entry& e = es_.back();
  qidx_.erase(e.qname());
  if (e.k == BK::TVar) tidx_.erase(e.name);
  es_.pop_back();
}

void Context::truncate(std::size_t n) {
  while (es_.size() > n) pop();
}

std::optional<std::size_t> Context::find_q(const Name& x) const {
  auto it = qidx_.find(x);
  if (it == qidx_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Context::find_t(const Name& X) const {
  auto it = tidx_.find(X);
  if (it == tidx_.end()) return std::nullopt;
  return it->second;
}

void Context::instantiate_hole(std::size_t i, const Qual& d) {
  Entry& e = es_.at(i);
  if (e.k != BK::Self || !e.q.hole) throw std::logic_error("instantiating a non-hole entry");
  e.q.vars.insert(d.vars.begin(), d.vars.end());
}

bool operator==(const Context& a, const Context& b) {
  if (a.es_.size() != b.es_.size()) return false;
  for (std::size_t i = 0; i < a.es_.size(); ++i) {
    const Entry &x = a.es_[i], &y = b.es_[i];
    if (x.k != y.k || x.name != y.name || x.qvar != y.qvar || x.q != y.q || !type_eq(x.ty, y.ty)) return false;
  }
  return true;
}

// ===========================================================================
// Saturation
// ===========================================================================

Saturation saturate(const Context& ctx, const Qual& q) {
  Saturation s;
  s.fresh_seen = q.fresh;
  s.hole_seen = q.hole.has_value();
  std::deque<Name> work(q.vars.begin(), q.vars.end());
  while (!work.empty()) {
    Name x = work.front();
    work.pop_front();
    if (!s.vars.insert(x).second) continue;
    auto i = ctx.find_q(x);
    if (!i) throw MalformedQualifier("unbound variable in qualifier: " + x);
    const Qual& eq = ctx.at(*i).q;
    s.fresh_seen = s.fresh_seen || eq.fresh;
    s.hole_seen = s.hole_seen || eq.hole.has_value();
    for (const auto& y : eq.vars)
      if (!s.vars.count(y)) work.push_back(y);
  }
  return s;
}

Qual overlap(const Context& ctx, const Qual& p, const Qual& q) {
  const Saturation sp = saturate(ctx, p), sq = saturate(ctx, q);
  Qual r = Qual::fresh_only();
  std::set_intersection(sp.vars.begin(), sp.vars.end(), sq.vars.begin(), sq.vars.end(),
                        std::inserter(r.vars, r.vars.end()));
  return r;
}

// ===========================================================================
// Names
// ===========================================================================

namespace {
std::mutex names_mu;
}

void NameSupply::reserve(const Name& n) {
  std::lock_guard<std::mutex> lk(names_mu);
  used_.insert(n);
}

Name NameSupply::fresh(const Name& base) {
  std::lock_guard<std::mutex> lk(names_mu);
  Name b = display_name(base);
  if (used_.insert(b).second) return b;
  for (;;) {
    Name c = b + "'" + std::to_string(++next_[b]);
    if (used_.insert(c).second) return c;
  }
}

Name display_name(const Name& n) {
  auto p = n.find('\'');
  return p == Name::npos ? n : n.substr(0, p);
}

NameSupply& global_names() {
  static NameSupply s;
  return s;
}

}  // namespace reachck
