#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace reachck {

using Name = std::string;
using NameSet = std::set<Name>;

// ---------------------------------------------------------------------------
// Qualifiers
// ---------------------------------------------------------------------------

/// A reachability qualifier: term variables, the fresh marker and at most one
/// hole. A hole is named by the self binding that owns it.
struct Qual {
  NameSet vars;
  bool fresh = false;
  std::optional<Name> hole;

  Qual() = default;
  Qual(std::initializer_list<Name> vs) : vars(vs) {}
  explicit Qual(NameSet vs, bool fr = false) : vars(std::move(vs)), fresh(fr) {}

  static Qual fresh_only() {
    Qual q;
    q.fresh = true;
    return q;
  }
  static Qual hole_of(const Name& owner) {
    Qual q;
    q.hole = owner;
    return q;
  }

  bool empty() const { return vars.empty() && !fresh && !hole; }
  bool has(const Name& x) const { return vars.count(x) != 0; }

  Qual& add(const Name& x) {
    vars.insert(x);
    return *this;
  }
  Qual& add_fresh() {
    fresh = true;
    return *this;
  }
  Qual& remove(const Name& x) {
    vars.erase(x);
    return *this;
  }

  Qual without(const Name& x) const {
    Qual r = *this;
    r.vars.erase(x);
    return r;
  }
  /// q with the fresh marker and any hole removed.
  Qual plain() const {
    Qual r;
    r.vars = vars;
    return r;
  }
  Qual no_fresh() const {
    Qual r = *this;
    r.fresh = false;
    return r;
  }

  Qual& join(const Qual& o);
  friend Qual operator|(Qual a, const Qual& b) { return a.join(b); }

  /// Set inclusion over all atoms.
  bool subset_of(const Qual& o) const;

  friend bool operator==(const Qual& a, const Qual& b) {
    return a.fresh == b.fresh && a.hole == b.hole && a.vars == b.vars;
  }
  friend bool operator!=(const Qual& a, const Qual& b) { return !(a == b); }
  friend bool operator<(const Qual& a, const Qual& b) {
    if (a.fresh != b.fresh) return a.fresh < b.fresh;
    if (a.hole != b.hole) return a.hole < b.hole;
    return a.vars < b.vars;
  }
};

/// q[p/x]
Qual qual_subst(const Qual& q, const Qual& p, const Name& x);

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class TK { Base, Ref, Fun, TVar, Top, All };

struct Type;
using TypeP = std::shared_ptr<const Type>;

struct QType {
  TypeP ty;
  Qual q;
};

/// Fun: self, arg, dom, cod.  All: self, tvar, arg (the qualifier variable),
/// dom (the bound), cod (the body).  Ref: dom is the referent.
struct Type {
  TK k = TK::Base;
  Name self, arg, tvar;
  QType dom, cod;
};

TypeP mk_base();
TypeP mk_top();
TypeP mk_tvar(const Name& X);
TypeP mk_ref(QType referent);
TypeP mk_fun(const Name& f, const Name& x, QType dom, QType cod);
TypeP mk_all(const Name& f, const Name& X, const Name& x, QType bound, QType body);

inline QType qt(TypeP t, Qual q = {}) { return QType{std::move(t), std::move(q)}; }

/// Structural equality, binder names included.
bool type_eq(const TypeP& a, const TypeP& b);
bool qtype_eq(const QType& a, const QType& b);
/// Equality up to consistent renaming of bound names.
bool alpha_eq(const TypeP& a, const TypeP& b);
bool alpha_eq(const QType& a, const QType& b);

/// Apply q[p/x] to every qualifier inside T.
TypeP type_subst_var(const TypeP& T, const Qual& p, const Name& x);
QType qtype_subst_var(const QType& Q, const Qual& p, const Name& x);
/// Replace TVar X by V and x by s.
TypeP type_subst_tvar(const TypeP& T, const TypeP& V, const Qual& s, const Name& X, const Name& x);
QType qtype_subst_tvar(const QType& Q, const TypeP& V, const Qual& s, const Name& X, const Name& x);
/// Rename bound or free variable names (qualifier atoms and type variables).
TypeP rename(const TypeP& T, const std::map<Name, Name>& m);
/// Give every binder inside T a fresh unique name.
TypeP freshen(const TypeP& T);

enum class Polarity { Any, Pos, Neg };

/// True iff y occurs in T at the requested polarity.
bool occurs(const Name& y, const TypeP& T, Polarity pol);

/// Every qualifier variable mentioned anywhere in T (free or bound).
void collect_vars(const TypeP& T, NameSet& out);
/// Qualifier variables and type variables free in T.
void free_vars(const TypeP& T, NameSet& qvars, NameSet& tvars);
/// Number of nodes, counting qualifiers as one each.
std::size_t type_size(const TypeP& T);
bool has_hole(const TypeP& T);

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

struct Span {
  std::size_t begin = 0, end = 0;
};

enum class EK { Unit, Var, Ref, Deref, Assign, Abs, App, TAbs, TApp, Ascribe, Let };

struct Term;
using TermP = std::shared_ptr<const Term>;

/// Abs: self, arg, optional ann, a = body.  TAbs: self, tvar, arg (qvar),
/// ann = bound, a = body.  TApp: a, ann.  Ascribe: a, ann.  Let: arg = bound
/// name, self = self name of the implicit lambda, a = rhs, b = body.
struct Term {
  EK k = EK::Unit;
  Name name, self, arg, tvar;
  std::optional<QType> ann;
  TermP a, b;
  Span span;
};

TermP t_unit(Span s = {});
TermP t_var(const Name& x, Span s = {});
TermP t_ref(TermP t, Span s = {});
TermP t_deref(TermP t, Span s = {});
TermP t_assign(TermP l, TermP r, Span s = {});
TermP t_abs(const Name& f, const Name& x, std::optional<QType> ann, TermP body, Span s = {});
TermP t_app(TermP f, TermP a, Span s = {});
TermP t_tabs(const Name& f, const Name& X, const Name& x, QType bound, TermP body, Span s = {});
TermP t_tapp(TermP t, QType arg, Span s = {});
TermP t_ascribe(TermP t, QType q, Span s = {});
TermP t_let(const Name& x, const Name& self, TermP rhs, TermP body, Span s = {});

std::size_t term_size(const TermP& t);
/// Free term variables of t.
NameSet term_free_vars(const TermP& t);

// ---------------------------------------------------------------------------
// Contexts
// ---------------------------------------------------------------------------

enum class BK { Var, TVar, Self };

/// Var: name : ty^q.  TVar: name^qvar <: ty^q.  Self: name : Top^q.
struct Entry {
  BK k = BK::Var;
  Name name;
  Name qvar;
  TypeP ty;
  Qual q;

  /// The name qualifiers use to refer to this entry.
  const Name& qname() const { return k == BK::TVar ? qvar : name; }
};

struct MalformedQualifier : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Context {
 public:
  Context() = default;

  std::size_t size() const { return es_.size(); }
  bool empty() const { return es_.empty(); }
  const Entry& at(std::size_t i) const { return es_[i]; }
  const std::vector<Entry>& entries() const { return es_; }

  void push(Entry e);
  void push_var(const Name& x, QType Q) { push(Entry{BK::Var, x, {}, std::move(Q.ty), std::move(Q.q)}); }
  void push_tvar(const Name& X, const Name& x, QType bound) {
    push(Entry{BK::TVar, X, x, std::move(bound.ty), std::move(bound.q)});
  }
  void push_self(const Name& f, Qual q) { push(Entry{BK::Self, f, {}, mk_top(), std::move(q)}); }
  void pop();
  /// Pop entries until size() == n.
  void truncate(std::size_t n);

  /// Index of the entry a qualifier variable refers to.
  std::optional<std::size_t> find_q(const Name& x) const;
  /// Index of the entry binding type variable X.
  std::optional<std::size_t> find_t(const Name& X) const;
  bool binds_q(const Name& x) const { return find_q(x).has_value(); }

  /// Extend the hole of self entry i with the atoms of d.
  void instantiate_hole(std::size_t i, const Qual& d);
  void set_qual(std::size_t i, Qual q) { es_[i].q = std::move(q); }

  friend bool operator==(const Context& a, const Context& b);

 private:
  std::vector<Entry> es_;
  std::unordered_map<Name, std::size_t> qidx_, tidx_;
};

// ---------------------------------------------------------------------------
// Saturation and overlap
// ---------------------------------------------------------------------------

struct Saturation {
  NameSet vars;
  bool fresh_seen = false;
  bool hole_seen = false;

  friend bool operator==(const Saturation& a, const Saturation& b) {
    return a.vars == b.vars && a.fresh_seen == b.fresh_seen && a.hole_seen == b.hole_seen;
  }
};

/// Transitive closure of q through entry qualifiers. Throws
/// MalformedQualifier on an unbound variable.
Saturation saturate(const Context& ctx, const Qual& q);

/// {fresh} with the intersection of both saturations.
Qual overlap(const Context& ctx, const Qual& p, const Qual& q);

// ---------------------------------------------------------------------------
// Unique names
// ---------------------------------------------------------------------------

/// Source of globally unique identifiers: base name plus a `'N` suffix.
class NameSupply {
 public:
  Name fresh(const Name& base);
  /// Register a name as taken so fresh() never returns it.
  void reserve(const Name& n);

 private:
  std::unordered_map<Name, std::size_t> next_;
  std::set<Name> used_;
};

/// Drop the uniqueness suffix added by NameSupply.
Name display_name(const Name& n);

NameSupply& global_names();

}  // namespace reachck
