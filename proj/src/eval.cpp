#include "reachck/eval.hpp"

#include "reachck/pretty.hpp"

namespace reachck {

ValueP v_unit() {
  static const ValueP u = std::make_shared<Value>();
  return u;
}

ValueP v_loc(Loc l) {
  auto v = std::make_shared<Value>();
  v->k = VK::Loc;
  v->loc = l;
  return v;
}

namespace {

struct Stuck {
  std::string why;
};
struct NoFuel {};

class Machine {
 public:
  Machine(Store store, std::size_t fuel) : store_(std::move(store)), fuel_(fuel) {}

  ValueP eval(const Env& env, const TermP& t) {
    switch (t->k) {
      case EK::Unit:
        return v_unit();
      case EK::Var: {
        auto it = env.find(t->name);
        if (it == env.end()) throw Stuck{"unbound variable " + display_name(t->name)};
        return it->second;
      }
      case EK::Ref: {
        ValueP v = eval(env, t->a);
        const Loc l = store_.cells.size();
        store_.cells.push_back(v);
        trace_.fresh_locs.insert(l);
        return v_loc(l);
      }
      case EK::Deref: {
        ValueP v = eval(env, t->a);
        if (v->k != VK::Loc) throw Stuck{"dereference of a non-location"};
        trace_.reads.insert(v->loc);
        return store_.cells.at(v->loc);
      }
      case EK::Assign: {
        ValueP l = eval(env, t->a);
        ValueP v = eval(env, t->b);
        if (l->k != VK::Loc) throw Stuck{"assignment to a non-location"};
        store_.cells.at(l->loc) = v;
        trace_.writes.insert(l->loc);
        return v_unit();
      }
      case EK::Abs:
      case EK::TAbs: {
        auto c = std::make_shared<Value>();
        c->k = t->k == EK::Abs ? VK::Closure : VK::TypeClosure;
        c->self = t->self;
        c->arg = t->arg;
        c->tvar = t->tvar;
        c->body = t->a;
        NameSet fv = term_free_vars(t);
        for (const auto& x : fv) {
          auto it = env.find(x);
          if (it == env.end()) throw Stuck{"unbound variable " + display_name(x)};
          c->env.emplace(x, it->second);
        }
        return c;
      }
      case EK::App: {
        ValueP f = eval(env, t->a);
        ValueP a = eval(env, t->b);
        if (f->k != VK::Closure) throw Stuck{"application of a non-function"};
        return enter(f, a);
      }
      case EK::TApp: {
        ValueP f = eval(env, t->a);
        if (f->k != VK::TypeClosure) throw Stuck{"type application of a non-abstraction"};
        return enter(f, nullptr);
      }
      case EK::Ascribe:
        return eval(env, t->a);
      case EK::Let: {
        ValueP v = eval(env, t->a);
        spend();
        Env e = env;
        e[t->arg] = v;
        return eval(e, t->b);
      }
    }
    throw Stuck{"unknown term"};
  }

  Store store_;
  AuditTrace trace_;
  std::size_t fuel_;

 private:
  void spend() {
    if (fuel_ == 0) throw NoFuel{};
    --fuel_;
  }

  ValueP enter(const ValueP& c, const ValueP& arg) {
    spend();
    Env e = c->env;
    e[c->self] = c;
    if (arg) e[c->arg] = arg;
    return eval(e, c->body);
  }
};

}  // namespace

EvalResult evaluate(const Env& env, Store store, const TermP& t, std::size_t fuel) {
  Machine m(std::move(store), fuel);
  EvalResult r;
  try {
    r.value = m.eval(env, t);
  } catch (const Stuck& s) {
    r.status = EvalStatus::Stuck;
    r.stuck_reason = s.why;
  } catch (const NoFuel&) {
    r.status = EvalStatus::OutOfFuel;
  }
  r.store = std::move(m.store_);
  r.trace = std::move(m.trace_);
  r.fuel_left = m.fuel_;
  return r;
}

LocSet reachable_locs(const ValueP& v) {
  LocSet out;
  switch (v->k) {
    case VK::Unit:
      break;
    case VK::Loc:
      out.insert(v->loc);
      break;
    case VK::Closure:
    case VK::TypeClosure:
      for (const auto& [x, w] : v->env) {
        LocSet s = reachable_locs(w);
        out.insert(s.begin(), s.end());
      }
      break;
  }
  return out;
}

bool AuditReport::ok() const {
  for (const auto& d : decls)
    if (!d.no_stuck || !d.reach_ok || !d.writes_ok) return false;
  return true;
}

namespace {

LocSet denote(const Env& env, const Qual& q) {
  LocSet out;
  for (const auto& x : q.vars) {
    auto it = env.find(x);
    if (it == env.end()) continue;
    LocSet s = reachable_locs(it->second);
    out.insert(s.begin(), s.end());
  }
  return out;
}

bool subset(const LocSet& a, const LocSet& b) {
  for (Loc l : a)
    if (!b.count(l)) return false;
  return true;
}

std::string locs(const LocSet& s) {
  std::string r = "{";
  bool first = true;
  for (Loc l : s) {
    r += (first ? "" : ",") + std::to_string(l);
    first = false;
  }
  return r + "}";
}

}  // namespace

AuditReport dynamic_check(const std::vector<Decl>& decls, const ProgramReport& rep, std::size_t fuel,
                          const std::map<Name, Qual>& q_override) {
  AuditReport out;
  Env env;
  Store store;
  std::size_t budget = fuel;
  for (std::size_t i = 0; i < decls.size(); ++i) {
    const Decl& d = decls[i];
    DeclAudit a;
    a.name = d.name;
    if (i >= rep.decls.size() || !rep.decls[i].qt) {
      a.detail = "not checked";
      out.decls.push_back(a);
      break;
    }
    Qual q = rep.decls[i].qt->q;
    if (auto it = q_override.find(d.name); it != q_override.end()) q = it->second;
    const Qual& phi = rep.decls[i].obs;
    EvalResult r = evaluate(env, store, d.rhs, budget);
    a.evaluated = true;
    if (r.status == EvalStatus::OutOfFuel) {
      a.out_of_fuel = true;
      out.inconclusive = true;
      out.decls.push_back(a);
      break;
    }
    if (r.status == EvalStatus::Stuck) {
      a.no_stuck = false;
      a.detail = "stuck: " + r.stuck_reason;
      out.decls.push_back(a);
      break;
    }
    budget = r.fuel_left;
    a.fresh = r.trace.fresh_locs;
    a.reach = reachable_locs(r.value);
    a.reach_allowed = denote(env, q);
    if (q.fresh) a.reach_allowed.insert(a.fresh.begin(), a.fresh.end());
    a.filter_allowed = denote(env, phi);
    a.filter_allowed.insert(a.fresh.begin(), a.fresh.end());
    a.writes = r.trace.writes;
    a.reads = r.trace.reads;
    a.reach_ok = subset(a.reach, a.reach_allowed);
    a.writes_ok = subset(a.writes, a.filter_allowed);
    a.reads_ok = subset(a.reads, a.filter_allowed);
    if (!a.reach_ok) a.detail += "value reaches " + locs(a.reach) + " outside " + locs(a.reach_allowed) + "; ";
    if (!a.writes_ok) a.detail += "writes " + locs(a.writes) + " outside " + locs(a.filter_allowed) + "; ";
    store = std::move(r.store);
    env[d.name] = r.value;
    out.decls.push_back(a);
  }
  return out;
}

}  // namespace reachck
