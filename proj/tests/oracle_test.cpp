#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "gen.hpp"
#include "reachck/oracle.hpp"
#include "support.hpp"

using namespace rt;

namespace {

using Mask = std::uint64_t;

// The same rules searched top down with memoized depths; slow but written
// independently of the table construction.
class Search {
 public:
  Search(const Context& ctx, const Qual& p, const Qual& q) {
    index_fresh();
    for (const auto& e : ctx.entries()) {
      atom(e.qname());
      for (const auto& v : e.q.vars) atom(v);
      if (e.q.hole) throw std::invalid_argument("hole");
    }
    for (const auto& v : p.vars) atom(v);
    for (const auto& v : q.vars) atom(v);
    if (names_.size() > 20) throw std::invalid_argument("universe");
    universe_ = (Mask{1} << names_.size()) - 1;
    for (const auto& e : ctx.entries()) {
      const Mask x = Mask{1} << idx_.at(e.qname());
      const Mask m = mask(e.q);
      if (e.k == BK::Self)
        selfs_.push_back({x, m & ~fresh_bit()});
      else if (!e.q.fresh)
        vars_.push_back({x, m});
    }
  }

  Mask mask(const Qual& q) const {
    Mask m = q.fresh ? fresh_bit() : 0;
    for (const auto& v : q.vars) m |= Mask{1} << idx_.at(v);
    return m;
  }

  bool derive(Mask p, Mask q, int d) {
    if ((p & ~q) == 0) return true;  // q-sub
    if (leaf(p, q)) return true;
    const Key k{p, q};
    auto& memo = memo_[k];
    if (d <= memo.known_false) return false;
    if (memo.known_true >= 0 && d >= memo.known_true) return true;
    bool ok = split(p, q, d);
    if (!ok && d > 0) {
      // q-trans through every intermediate drawn from the atom universe
      for (Mask r = 0; r <= universe_ && !ok; ++r) {
        if (r == p || r == q) continue;
        ok = derive(p, r, d - 1) && derive(r, q, d - 1);
      }
    }
    auto& m = memo_[k];
    if (ok) {
      if (m.known_true < 0 || d < m.known_true) m.known_true = d;
    } else if (d > m.known_false) {
      m.known_false = d;
    }
    return ok;
  }

 private:
  struct Key {
    Mask p, q;
    bool operator==(const Key& o) const { return p == o.p && q == o.q; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return std::hash<Mask>()(k.p * 1000003u ^ k.q); }
  };
  struct Memo {
    int known_false = -1;  // largest depth known to fail
    int known_true = -1;   // smallest depth known to succeed
  };

  std::map<Name, int> idx_;
  std::vector<Name> names_;
  Mask universe_ = 0;
  std::vector<std::pair<Mask, Mask>> vars_, selfs_;  // (atom, recorded qualifier)
  std::unordered_map<Key, Memo, KeyHash> memo_;

  void index_fresh() {
    idx_["*"] = 0;
    names_.push_back("*");
  }
  Mask fresh_bit() const { return 1; }

  void atom(const Name& n) {
    if (idx_.count(n)) return;
    idx_[n] = static_cast<int>(names_.size());
    names_.push_back(n);
  }

  // q-var, q-tvar and q-self, each closed under congruence with a subsumption
  // on the side (so the leaf is upward closed in q).
  bool leaf(Mask p, Mask q) const {
    for (const auto& [x, r] : vars_)
      if (p == x && (r & ~q) == 0) return true;
    for (const auto& [f, r] : selfs_)
      if ((q & f) && (p & r) == r && ((p & ~r) & ~q) == 0) return true;
    return false;
  }

  // q-cong with both premises bounded by q: every disjoint split of p.
  bool split(Mask p, Mask q, int d) {
    const Mask low = p & (~p + 1);
    const Mask rest = p & ~low;
    // p1 always holds the lowest atom; p2 must be nonempty
    for (Mask s = rest;; s = (s - 1) & rest) {
      const Mask p1 = low | s;
      const Mask p2 = p & ~p1;
      if (p2 != 0 && derive(p1, q, d) && derive(p2, q, d)) return true;
      if (s == 0) break;
    }
    return false;
  }
};

bool reference_subqual(const Context& ctx, const Qual& p, const Qual& q, int depth) {
  Search s(ctx, p, q);
  return s.derive(s.mask(p), s.mask(q), depth);
}

}  // namespace

TEST_CASE("declarative derivations on small contexts", "[oracle]") {
  Ctx c;
  c.var("a", "Ref[Unit]^{*}").var("b", "Ref[Unit]^{*}").var("c", "Ref[Unit]^{a,b}");
  CHECK(decl_subqual(c, Q("c"), Q("a,b"), 0));
  CHECK(decl_subqual(c, Q("a"), Q("a,b"), 0));
  CHECK_FALSE(decl_subqual(c, Q("b"), Q("c"), 8));
  CHECK_FALSE(decl_subqual(c, Q("c"), Q("b"), 8));
  // fresh variables have no upper bound but themselves
  CHECK_FALSE(decl_subqual(c, Q("a"), {}, 8));
  CHECK_FALSE(decl_subqual(c, Q("*"), Q("a"), 8));
  CHECK(decl_subqual(c, Q("*,c"), Q("*,a,b"), 0));

  Ctx s;
  s.var("x", "Ref[Unit]^{*}").self("f", Q("x"));
  CHECK(decl_subqual(s, Q("x"), Q("f"), 0));
  CHECK(decl_subqual(s, Q("x,f"), Q("f"), 0));
  CHECK_FALSE(decl_subqual(s, Q("f"), Q("x"), 8));
}

TEST_CASE("transitivity costs depth", "[oracle]") {
  Ctx c;
  c.var("a", "Ref[Unit]^{*}").var("c", "Ref[Unit]^{a}").var("d", "Ref[Unit]^{c}").var("e", "Ref[Unit]^{d}");
  CHECK_FALSE(decl_subqual(c, Q("d"), Q("a"), 0));
  CHECK(decl_subqual(c, Q("d"), Q("a"), 1));
  CHECK_FALSE(decl_subqual(c, Q("e"), Q("a"), 1));
  CHECK(decl_subqual(c, Q("e"), Q("a"), 2));
}

TEST_CASE("holes are rejected", "[oracle]") {
  Ctx h;
  h.self("f", H("f"));
  CHECK_THROWS_AS(decl_subqual(h, Q("f"), Q("f"), 1), std::invalid_argument);
  CHECK_THROWS_AS(decl_subqual(Context{}, H("f"), {}, 1), std::invalid_argument);
}

TEST_CASE("derivability is monotone in depth", "[oracle]") {
  Gen g(0x0AC1E);
  for (int i = 0; i < 200; ++i) {
    INFO("case " << i);
    Context ctx = g.context(5, 3);
    const auto names = Gen::qual_names(ctx);
    Qual p = g.qual(names, 3, 0.2);
    Qual q = g.qual(names, 3, 0.2);
    bool prev = false;
    for (int d = 0; d <= 4; ++d) {
      const bool now = decl_subqual(ctx, p, q, d);
      if (prev) CHECK(now);
      prev = now;
    }
    if (p.subset_of(q)) CHECK(decl_subqual(ctx, p, q, 0));
  }
}

TEST_CASE("the table agrees with a top-down search", "[oracle]") {
  Gen g(0x70D0);
  for (int i = 0; i < 150; ++i) {
    INFO("case " << i);
    Context ctx = g.context(5, 4);
    const auto names = Gen::qual_names(ctx);
    for (int k = 0; k < 3; ++k) {
      Qual p = g.qual(names, 4, 0.3);
      Qual q = g.qual(names, 4, 0.3);
      for (int d = 0; d <= 3; ++d) CHECK(decl_subqual(ctx, p, q, d) == reference_subqual(ctx, p, q, d));
    }
  }
}
