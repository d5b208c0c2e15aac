#include "reachck/oracle.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace reachck {

namespace {

using Mask = std::uint32_t;

// Derivable pairs as a table: row p holds the set of q with p <: q. Built
// bottom up by depth, which is the number of transitivity steps allowed.
class Table {
 public:
  Table(const Context& ctx, const Qual& p, const Qual& q) {
    atom("*");
    for (const auto& e : ctx.entries()) {
      if (e.q.hole) throw std::invalid_argument("decl_subqual needs a hole-free context");
      atom(e.qname());
      for (const auto& v : e.q.vars) atom(v);
    }
    for (const auto& v : p.vars) atom(v);
    for (const auto& v : q.vars) atom(v);
    if (names_.size() > 10) throw std::invalid_argument("decl_subqual atom universe too large");
    n_ = Mask{1} << names_.size();
    words_ = (n_ + 63) / 64;
    leaves_.assign(n_ * words_, 0);
    // q-sub
    for (Mask a = 0; a < n_; ++a) add_supersets(a, a);
    for (const auto& e : ctx.entries()) {
      const Mask x = Mask{1} << idx_.at(e.qname());
      const Mask r = mask(e.q);
      if (e.k == BK::Self) {
        // q-self: r <: f, with congruence and subsumption folded in
        const Mask rs = r & ~Mask{1};
        for (Mask a = 0; a < n_; ++a)
          if ((a & rs) == rs) add_supersets(a, (a & ~rs) | x);
      } else if (!e.q.fresh) {
        // q-var and q-tvar
        add_supersets(x, r);
      }
    }
  }

  Mask mask(const Qual& q) const {
    Mask m = q.fresh ? 1 : 0;
    for (const auto& v : q.vars) m |= Mask{1} << idx_.at(v);
    return m;
  }

  bool derive(Mask p, Mask q, int depth) const {
    std::vector<std::uint64_t> d = leaves_;
    split_close(d);
    for (int k = 0; k < depth && !bit(d, p, q); ++k) {
      std::vector<std::uint64_t> next = leaves_;
      // q-trans: p <: r and r <: q
      for (Mask a = 0; a < n_; ++a)
        for (Mask r = 0; r < n_; ++r)
          if (bit(d, a, r))
            for (Mask w = 0; w < words_; ++w) next[a * words_ + w] |= d[r * words_ + w];
      split_close(next);
      if (next == d) break;
      d = std::move(next);
    }
    return bit(d, p, q);
  }

 private:
  std::map<Name, int> idx_;
  std::vector<Name> names_;
  Mask n_ = 0, words_ = 0;
  std::vector<std::uint64_t> leaves_;

  void atom(const Name& v) {
    if (idx_.count(v)) return;
    idx_[v] = static_cast<int>(names_.size());
    names_.push_back(v);
  }

  bool bit(const std::vector<std::uint64_t>& d, Mask p, Mask q) const {
    return (d[p * words_ + q / 64] >> (q % 64)) & 1;
  }

  // Row a gains every q that contains `low`.
  void add_supersets(Mask a, Mask low) {
    for (Mask q = 0; q < n_; ++q)
      if ((q & low) == low) leaves_[a * words_ + q / 64] |= std::uint64_t{1} << (q % 64);
  }

  // q-cong: p <: q when a disjoint split of p has both halves below q. Both
  // halves are numerically smaller than p, so one ascending pass suffices.
  void split_close(std::vector<std::uint64_t>& d) const {
    for (Mask p = 1; p < n_; ++p) {
      const Mask low = p & (~p + 1);
      const Mask rest = p & ~low;
      for (Mask s = rest;; s = (s - 1) & rest) {
        const Mask p1 = low | s, p2 = p & ~p1;
        if (p2 != 0)
          for (Mask w = 0; w < words_; ++w) d[p * words_ + w] |= d[p1 * words_ + w] & d[p2 * words_ + w];
        if (s == 0) break;
      }
    }
  }
};

}  // namespace

bool decl_subqual(const Context& ctx, const Qual& p, const Qual& q, int depth) {
  if (p.hole || q.hole) throw std::invalid_argument("decl_subqual needs hole-free qualifiers");
  Table t(ctx, p, q);
  return t.derive(t.mask(p), t.mask(q), depth);
}

}  // namespace reachck
