#pragma once

// Randomized suites shared by the Catch2 property tests and the acceptance
// driver. Each returns its case count and every violation it saw.

#include <chrono>
#include <string>
#include <vector>

#include "gen.hpp"
#include "reachck/avoid.hpp"
#include "reachck/oracle.hpp"
#include "reachck/pretty.hpp"
#include "reachck/qual.hpp"
#include "reachck/sub.hpp"

namespace rt {

struct SuiteResult {
  int cases = 0;
  int interesting = 0;  // cases that exercised the non-trivial path
  std::vector<std::string> violations;
  double seconds = 0;
};

namespace detail {

inline std::string ctx_str(const Context& ctx) {
  std::string s;
  for (const auto& e : ctx.entries()) s += e.qname() + ":" + show(e.q, {true}) + " ";
  return s;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace detail

/// qual_check against the bounded declarative search, three pairs per context.
inline SuiteResult oracle_differential(std::uint64_t seed, int contexts, int depth = 8) {
  SuiteResult r;
  detail::Timer t;
  Gen g(seed);
  for (int i = 0; i < contexts; ++i) {
    Context ctx = g.context(6, 5);
    const auto names = Gen::qual_names(ctx);
    for (int k = 0; k < 3; ++k) {
      Qual p = g.qual(names, 5, 0.3);
      Qual q = g.qual(names, 5, 0.3);
      const bool alg = qual_check(ctx, p, q);
      const bool decl = decl_subqual(ctx, p, q, depth);
      if (alg) ++r.interesting;
      if (alg != decl)
        r.violations.push_back(detail::ctx_str(ctx) + "| " + show(p, {true}) + " <: " + show(q, {true}) +
                               " algorithm=" + (alg ? "yes" : "no") + " oracle=" + (decl ? "yes" : "no"));
    }
    ++r.cases;
  }
  r.seconds = t.seconds();
  return r;
}

/// The postconditions of avoid_var on random well-formed types that may
/// mention a variable z bound last in the context.
inline SuiteResult avoidance_suite(std::uint64_t seed, int types) {
  SuiteResult r;
  detail::Timer t;
  Gen g(seed);
  while (r.cases < types) {
    Context ctx = g.context(4, 3);
    const Name z = global_names().fresh("z");
    ctx.push_var(z, qt(mk_ref(qt(mk_base())), g.qual(Gen::qual_names(ctx), 2, 0.5)));
    const auto names = Gen::qual_names(ctx);
    TypeP T = g.type(names, 3);
    if (wf_type(ctx, T)) continue;
    ++r.cases;
    auto a = avoid_var(T, z);
    if (!a) continue;
    if (!a->delta.empty()) ++r.interesting;
    const TypeP& T2 = a->type;
    const Qual q = g.qual(names, 3, 0.3);
    auto fail = [&](const std::string& what) {
      r.violations.push_back(what + ": " + detail::ctx_str(ctx) + "| " + show(T, {true}) + " ~> " +
                             show(T2, {true}) + " q=" + show(q, {true}));
    };
    // (1) T <:^q_delta T'
    auto s1 = subtype_check(ctx, T, q, T2);
    if (!s1 || !s1->delta.subset_of(a->delta)) fail("clause 1");
    // (2) delta within {z}
    if (!a->delta.subset_of(Qual{z})) fail("clause 2");
    // (3) z gone
    if (occurs(z, T2, Polarity::Any)) fail("clause 3");
    // (4) and (5) no new occurrences, no new negative occurrences
    for (const auto& x : names) {
      if (!occurs(x, T, Polarity::Any) && occurs(x, T2, Polarity::Any)) fail("clause 4 on " + x);
      if (!occurs(x, T, Polarity::Neg) && occurs(x, T2, Polarity::Neg)) fail("clause 5 on " + x);
    }
    Qual qz = q;
    qz.add(z);
    auto s2 = subtype_check(ctx, T, qz, T2);
    if (!s2 || !s2->delta.subset_of(Qual{z})) fail("subtype with z");
    if (wf_type(ctx, T2)) fail("result ill-formed");
  }
  r.seconds = t.seconds();
  return r;
}

/// Self unpacking is an equivalence for non-fresh qualifiers.
inline SuiteResult self_unpack_suite(std::uint64_t seed, int pairs) {
  SuiteResult r;
  detail::Timer t;
  Gen g(seed);
  while (r.cases < pairs) {
    Context ctx = g.context(5, 3);
    const auto names = Gen::qual_names(ctx);
    TypeP T = g.type(names, 3);
    if (wf_type(ctx, T)) continue;
    const Qual q = g.qual(names, 3, 0);
    ++r.cases;
    const TypeP U = self_unpack(T, q);
    if (U != T) ++r.interesting;
    auto fail = [&](const std::string& what, const std::optional<SubResult>& s) {
      r.violations.push_back(what + (s ? " delta=" + show(s->delta, {true}) : std::string(" failed")) + ": " +
                             detail::ctx_str(ctx) + "| " + show(T, {true}) + " q=" + show(q, {true}));
    };
    auto fwd = subtype_check(ctx, T, q, U);
    if (!fwd || !fwd->delta.empty()) fail("T <: unpacked", fwd);
    auto bwd = subtype_check(ctx, U, q, T);
    if (!bwd || !bwd->delta.empty()) fail("unpacked <: T", bwd);
  }
  r.seconds = t.seconds();
  return r;
}

}  // namespace rt
