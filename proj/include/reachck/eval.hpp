#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "reachck/core.hpp"
#include "reachck/infer.hpp"

namespace reachck {

struct Value;
using ValueP = std::shared_ptr<const Value>;
using Env = std::map<Name, ValueP>;
using Loc = std::size_t;
using LocSet = std::set<Loc>;

enum class VK { Unit, Loc, Closure, TypeClosure };

/// Closures capture exactly the free variables of their body.
struct Value {
  VK k = VK::Unit;
  Loc loc = 0;
  Env env;
  Name self, arg, tvar;
  TermP body;
};

ValueP v_unit();
ValueP v_loc(Loc l);

/// Append-only store.
struct Store {
  std::vector<ValueP> cells;
};

struct AuditTrace {
  LocSet fresh_locs, writes, reads;
};

enum class EvalStatus { Ok, Stuck, OutOfFuel };

struct EvalResult {
  EvalStatus status = EvalStatus::Ok;
  ValueP value;
  Store store;
  AuditTrace trace;
  std::string stuck_reason;
  std::size_t fuel_left = 0;
};

/// Call-by-value big-step evaluation. Fuel is spent per beta step.
EvalResult evaluate(const Env& env, Store store, const TermP& t, std::size_t fuel);

/// Shallow reachability: a location reaches itself only.
LocSet reachable_locs(const ValueP& v);

struct DeclAudit {
  Name name;
  bool evaluated = false;
  bool no_stuck = true;        // clause (a)
  bool reach_ok = true;        // clause (b)
  bool writes_ok = true;       // clause (c)
  bool reads_ok = true;        // reads covered by the filter, informational
  bool out_of_fuel = false;
  LocSet reach, reach_allowed, writes, reads, filter_allowed, fresh;
  std::string detail;
};

struct AuditReport {
  std::vector<DeclAudit> decls;
  bool inconclusive = false;  // fuel ran out
  bool ok() const;
};

/// Evaluate every declaration of a checked program in order and audit each
/// result against its qualifier and filter. `q_override` replaces the checked
/// qualifier of the named declarations (used for negative controls).
AuditReport dynamic_check(const std::vector<Decl>& decls, const ProgramReport& rep, std::size_t fuel,
                          const std::map<Name, Qual>& q_override = {});

}  // namespace reachck
