#pragma once

#include "reachck/core.hpp"

namespace reachck {

/// Bounded search for a declarative derivation of p <: q over a hole-free
/// context. Depth bounds the nesting of transitivity steps;
/// congruence splits and subsumption leaves are free. Intermediate
/// qualifiers range over the atoms of ctx, p and q.
bool decl_subqual(const Context& ctx, const Qual& p, const Qual& q, int depth);

}  // namespace reachck
