#pragma once

#include <optional>

#include "reachck/core.hpp"

namespace reachck {

/// T[r/+y] (Pos) or T[r/-y] (Neg). Fails when y occurs inside a reference.
std::optional<TypeP> polarized_subst(const TypeP& T, const Qual& r, const Name& y, Polarity pol);

struct Avoided {
  Qual delta;  // {} or {z}
  TypeP type;
};

/// Eliminate z from T through T's outermost self-reference.
std::optional<Avoided> avoid_var(const TypeP& T, const Name& z);

/// Application avoidance: drop f when the function is fresh, then x when the
/// argument is fresh. The result qualifier grows by both increments.
std::optional<QType> avoid_app(const Name& f, const Qual& q, const Name& x, const Qual& p, const QType& Q,
                               Name* failed_on = nullptr);

}  // namespace reachck
