#include "reachck/qual.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include "reachck/instrument.hpp"
#include "reachck/wf.hpp"

namespace reachck {

Stats& stats() {
  thread_local Stats s;
  return s;
}

OpAudit::OpAudit(const Context& ctx, const char* op) : ctx_(ctx), op_(op) {
  if (stats().audit) before_ = ctx;
}

OpAudit::~OpAudit() {
  if (!before_) return;
  Stats& s = stats();
  ++s.audited_ops;
  if (!ctx_subsumes(*before_, ctx_))
    s.violations.push_back(std::string(op_) + ": output context does not subsume input");
}

namespace {

// Exposure of q as marks over context positions; atoms of q outside the
// context are answered by q itself.
struct Exposure {
  const Context& ctx;
  const Qual& q;
  std::vector<char> mark;

  Exposure(const Context& c, const Qual& q0, bool expand) : ctx(c), q(q0), mark(c.size(), 0) {
    for (const auto& v : q.vars)
      if (auto i = ctx.find_q(v)) mark[*i] = 1;
    if (!expand) return;
    std::size_t steps = 0;
    // stage 1: self entries, latest first
    for (std::size_t i = ctx.size(); i-- > 0;) {
      ++steps;
      const Entry& e = ctx.at(i);
      if (e.k != BK::Self || !mark[i]) continue;
      for (const auto& v : e.q.vars)
        if (auto j = ctx.find_q(v)) mark[*j] = 1;
    }
    // stage 2: variables whose recorded qualifier is already covered
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      ++steps;
      const Entry& e = ctx.at(i);
      if (e.k == BK::Self || mark[i] || e.q.fresh || e.q.hole) continue;
      bool covered = true;
      for (const auto& v : e.q.vars)
        if (!has(v)) {
          covered = false;
          break;
        }
      if (covered) mark[i] = 1;
    }
    Stats& s = stats();
    ++s.expose_calls;
    s.expose_steps += steps;
    if (steps > 2 * ctx.size()) ++s.max_expose_ratio_violations;
  }

  bool has(const Name& v) const {
    if (auto i = ctx.find_q(v)) return mark[*i];
    return q.has(v);
  }

  Qual materialize() const {
    Qual out = q;
    for (std::size_t i = 0; i < ctx.size(); ++i)
      if (mark[i]) out.vars.insert(ctx.at(i).qname());
    return out;
  }
};

}  // namespace

Qual expose(const Context& ctx, const Qual& q) { return Exposure(ctx, q, true).materialize(); }

bool qual_check(const Context& ctx, const Qual& p, const Qual& q) {
  if (wf_qual(ctx, p) || wf_qual(ctx, q)) return false;
  if (p.fresh && !q.fresh) return false;
  if (p.hole && p.hole != q.hole) return false;
  Exposure ex(ctx, q, true);
  return std::all_of(p.vars.begin(), p.vars.end(), [&](const Name& v) { return ex.has(v); });
}

namespace {

std::size_t pos_of(const Context& ctx, const Name& x) {
  auto i = ctx.find_q(x);
  if (!i) throw MalformedQualifier("unbound variable in qualifier: " + x);
  return *i;
}

// Computes the hole instantiations without touching ctx.
bool unify_plan(const Context& ctx, Qual p, const Exposure& q, std::vector<std::pair<std::size_t, Name>>& inst,
                UnifyFailure* why) {
  auto fail = [&](Name v, bool esc, std::string r) {
    if (why) *why = UnifyFailure{std::move(v), esc, std::move(r)};
    return false;
  };
  for (;;) {
    if (p.fresh && !q.q.fresh) return fail("", true, "fresh marker not permitted");
    if (p.hole && p.hole != q.q.hole) return fail("", false, "hole on the left");
    // latest residual variable first
    Name x;
    std::size_t px = 0;
    for (const auto& v : p.vars) {
      if (q.has(v)) continue;
      std::size_t i = pos_of(ctx, v);
      if (x.empty() || i > px) {
        x = v;
        px = i;
      }
    }
    if (x.empty()) return true;
    // a holed self in q introduced after x, earliest such
    std::optional<std::size_t> best;
    for (std::size_t i = px + 1; i < ctx.size(); ++i) {
      const Entry& e = ctx.at(i);
      if (q.mark[i] && e.k == BK::Self && e.q.hole) {
        best = i;
        break;
      }
    }
    if (best) {
      inst.emplace_back(*best, x);
      p.remove(x);
      continue;
    }
    const Entry& ex = ctx.at(px);
    // a self name has no upper bound of its own to upcast to
    if (ex.k == BK::Self) return fail(x, false, x + " is a self reference outside the target");
    if (ex.q.fresh) return fail(x, true, x + " reaches a fresh value");
    if (ex.q.hole) return fail(x, false, x + " has an uninstantiated hole");
    p = qual_subst(p, ex.q, x);
  }
}

}  // namespace

namespace {

bool unify_exposed(Context& ctx, const Qual& p, const Qual& q, bool expand, UnifyFailure* why) {
  OpAudit audit(ctx, "unify");
  std::vector<std::pair<std::size_t, Name>> inst;
  {
    Exposure ex(ctx, q, expand);
    if (!unify_plan(ctx, p, ex, inst, why)) return false;
  }
  for (const auto& [i, x] : inst) {
    Qual d;
    d.add(x);
    ctx.instantiate_hole(i, d);
  }
  if (!inst.empty()) ++stats().unifications;
  return true;
}

}  // namespace

bool unify_into(Context& ctx, const Qual& p, const Qual& q, UnifyFailure* why) {
  return unify_exposed(ctx, p, q, false, why);
}

bool qual_infer_into(Context& ctx, const Qual& p, const Qual& q, UnifyFailure* why) {
  ++stats().inferences;
  return unify_exposed(ctx, p, q, true, why);
}

std::optional<Context> unify(const Context& ctx, const Qual& p, const Qual& q, UnifyFailure* why) {
  Context out = ctx;
  if (!unify_into(out, p, q, why)) return std::nullopt;
  return out;
}

std::optional<Context> qual_infer(const Context& ctx, const Qual& p, const Qual& q, UnifyFailure* why) {
  Context out = ctx;
  if (!qual_infer_into(out, p, q, why)) return std::nullopt;
  return out;
}

}  // namespace reachck
