#include "reachck/pretty.hpp"

#include <algorithm>
#include <vector>

namespace reachck {

namespace {

std::string nm(const Name& n, const PrettyOptions& o) { return o.raw_names ? n : display_name(n); }

bool unit_domain(const TypeP& T) {
  return T->k == TK::Fun && T->dom.ty->k == TK::Base && T->dom.q.empty() &&
         !occurs(T->arg, T->cod.ty, Polarity::Any) && !T->cod.q.has(T->arg);
}

bool self_used(const TypeP& T) {
  return T->dom.q.has(T->self) || T->cod.q.has(T->self) || occurs(T->self, T->dom.ty, Polarity::Any) ||
         occurs(T->self, T->cod.ty, Polarity::Any);
}

std::string qual_body(const Qual& q, const PrettyOptions& o) {
  std::vector<std::string> items;
  for (const auto& v : q.vars) items.push_back(nm(v, o));
  // distinct atoms that display alike keep their suffixes
  const std::vector<std::string> shown = items;
  std::size_t i = 0;
  for (const auto& v : q.vars) {
    if (std::count(shown.begin(), shown.end(), shown[i]) > 1) items[i] = v;
    ++i;
  }
  std::sort(items.begin(), items.end());
  if (q.fresh) items.push_back(o.unicode ? "♦" : "*");
  if (q.hole) items.push_back("?" + nm(*q.hole, o));
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) s += (i ? "," : "") + items[i];
  return s;
}

std::string ty(const TypeP& T, const PrettyOptions& o);

std::string qtype(const QType& Q, const PrettyOptions& o) {
  const bool compound = Q.ty->k == TK::Fun || Q.ty->k == TK::All;
  if (Q.q.empty()) return ty(Q.ty, o);
  std::string t = ty(Q.ty, o);
  if (compound) t = "(" + t + ")";
  return t + "^{" + qual_body(Q.q, o) + "}";
}

std::string ty(const TypeP& T, const PrettyOptions& o) {
  switch (T->k) {
    case TK::Base:
      return "Unit";
    case TK::Top:
      return "Top";
    case TK::TVar:
      return nm(T->tvar, o);
    case TK::Ref:
      return "Ref[" + qtype(T->dom, o) + "]";
    case TK::Fun: {
      std::string self = (o.raw_names || self_used(T)) ? nm(T->self, o) : "";
      const bool arg_used = occurs(T->arg, T->cod.ty, Polarity::Any) || T->cod.q.has(T->arg);
      std::string params = o.raw_names ? nm(T->arg, o) + ": " + qtype(T->dom, o)
                           : unit_domain(T) ? ""
                           : arg_used       ? nm(T->arg, o) + ": " + qtype(T->dom, o)
                                            : qtype(T->dom, o);
      return self + "(" + params + ") -> " + qtype(T->cod, o);
    }
    case TK::All: {
      std::string self = (o.raw_names || self_used(T)) ? nm(T->self, o) : "";
      return "forall " + self + "[" + nm(T->tvar, o) + "^" + nm(T->arg, o) + " <: " + qtype(T->dom, o) + "]. " +
             qtype(T->cod, o);
    }
  }
  return "?";
}

// Term printing. Levels: 0 = binder bodies extend right, 1 = assignment,
// 2 = application, 3 = prefix operators, 4 = type application.
std::string tm(const TermP& t, int lvl, const PrettyOptions& o);

std::string paren(bool need, const std::string& s) { return need ? "(" + s + ")" : s; }

std::string tm(const TermP& t, int lvl, const PrettyOptions& o) {
  switch (t->k) {
    case EK::Unit:
      return "unit";
    case EK::Var:
      return nm(t->name, o);
    case EK::Ref:
      return paren(lvl > 3, "ref " + tm(t->a, 3, o));
    case EK::Deref:
      return paren(lvl > 3, "!" + tm(t->a, 3, o));
    case EK::Assign:
      return paren(lvl > 1, tm(t->a, 2, o) + " := " + tm(t->b, 2, o));
    case EK::App:
      return paren(lvl > 2, tm(t->a, 2, o) + " " + tm(t->b, 3, o));
    case EK::Abs: {
      std::string param = nm(t->arg, o);
      if (t->ann) param += ": " + qtype(*t->ann, o);
      return paren(lvl > 0, "\\" + nm(t->self, o) + "(" + param + ") => " + tm(t->a, 0, o));
    }
    case EK::TAbs:
      return paren(lvl > 0, "/\\" + nm(t->self, o) + "[" + nm(t->tvar, o) + "^" + nm(t->arg, o) + " <: " +
                                qtype(*t->ann, o) + "] => " + tm(t->a, 0, o));
    case EK::TApp:
      return paren(lvl > 4, tm(t->a, 4, o) + "[" + qtype(*t->ann, o) + "]");
    case EK::Ascribe:
      return "(" + tm(t->a, 0, o) + " : " + qtype(*t->ann, o) + ")";
    case EK::Let:
      return paren(lvl > 0, "val " + nm(t->arg, o) + " = " + tm(t->a, 0, o) + "; " + tm(t->b, 0, o));
  }
  return "?";
}

}  // namespace

std::string show(const Qual& q, const PrettyOptions& o) { return "{" + qual_body(q, o) + "}"; }
std::string show(const TypeP& T, const PrettyOptions& o) { return ty(T, o); }
std::string show(const QType& Q, const PrettyOptions& o) { return qtype(Q, o); }
std::string show(const TermP& t, const PrettyOptions& o) { return tm(t, 0, o); }

}  // namespace reachck
