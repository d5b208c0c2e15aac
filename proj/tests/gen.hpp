#pragma once

// Seeded random generators for property tests.

#include <random>
#include <string>
#include <vector>

#include "reachck/core.hpp"
#include "reachck/wf.hpp"

namespace rt {

using namespace reachck;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::mt19937_64& rng() { return rng_; }

  /// A subset of `pool` with at most `max_atoms` variables, plus the fresh
  /// marker with probability `pf`.
  Qual qual(const std::vector<Name>& pool, int max_atoms, double pf) {
    Qual q;
    if (!pool.empty()) {
      const int n = below(std::min<int>(max_atoms, static_cast<int>(pool.size())) + 1);
      for (int i = 0; i < n; ++i) q.add(pool[below(static_cast<int>(pool.size()))]);
    }
    if (coin(pf)) q.fresh = true;
    return q;
  }

  /// A hole-free context of at most `max_entries` entries. Names are
  /// prefixed so they never meet parser-generated names.
  Context context(int max_entries, int max_atoms) {
    Context ctx;
    std::vector<Name> names;
    const int n = 1 + below(max_entries);
    for (int i = 0; i < n; ++i) {
      const int kind = below(6);
      Qual q = qual(names, max_atoms, 0.45);
      if (kind <= 3) {
        Name x = global_names().fresh("v" + std::to_string(i));
        ctx.push_var(x, qt(coin(0.8) ? mk_ref(qt(mk_base())) : mk_base(), q));
        names.push_back(x);
      } else if (kind == 4) {
        Name f = global_names().fresh("s" + std::to_string(i));
        ctx.push_self(f, q);
        names.push_back(f);
      } else {
        Name X = global_names().fresh("T" + std::to_string(i));
        Name x = global_names().fresh("t" + std::to_string(i));
        ctx.push_tvar(X, x, qt(mk_top(), q));
        names.push_back(x);
      }
    }
    return ctx;
  }

  static std::vector<Name> qual_names(const Context& ctx) {
    std::vector<Name> out;
    for (const auto& e : ctx.entries()) out.push_back(e.qname());
    return out;
  }

  /// A random type over the qualifier variables in `pool`. Not necessarily
  /// well-formed; callers filter with wf_type.
  TypeP type(std::vector<Name> pool, int depth) {
    const int pick = depth <= 0 ? below(3) : below(7);
    switch (pick) {
      case 0:
        return mk_base();
      case 1:
        return mk_top();
      case 2:
        return mk_ref(qt(mk_base(), coin(0.3) ? qual(pool, 2, 0) : Qual{}));
      default: {
        Name f = global_names().fresh("f");
        Name x = global_names().fresh("x");
        std::vector<Name> inner = pool;
        inner.push_back(f);
        QType dom = qt(type(inner, depth - 1), qual(inner, 2, 0.4));
        inner.push_back(x);
        QType cod = qt(type(inner, depth - 1), qual(inner, 3, 0.1));
        if (pick == 6) {
          Name X = global_names().fresh("X");
          return mk_all(f, X, x, qt(mk_top(), dom.q), cod);
        }
        return mk_fun(f, x, dom, cod);
      }
    }
  }

  /// Retry until wf_type accepts, up to `tries` attempts.
  TypeP wf_type_in(Context& ctx, int depth, int tries = 200) {
    const auto pool = qual_names(ctx);
    for (int i = 0; i < tries; ++i) {
      TypeP T = type(pool, depth);
      if (!wf_type(ctx, T)) return T;
    }
    return mk_base();
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace rt
