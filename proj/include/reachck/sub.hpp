#pragma once

#include <optional>
#include <string>

#include "reachck/core.hpp"

namespace reachck {

struct SubResult {
  Qual delta;  // increment required on the supertype side
  Context out_ctx;
};

/// Substitute a non-fresh q for the self-reference of a function or
/// quantified type (domain type and whole codomain; the domain qualifier is
/// kept). Other types are returned unchanged.
TypeP self_unpack(const TypeP& T, const Qual& q);

/// T1 <:^q_delta T2 under ctx: self unpacking followed by the recursive check.
std::optional<SubResult> subtype_check(const Context& ctx, const TypeP& T1, const Qual& q, const TypeP& T2,
                                       std::string* why = nullptr);

/// In-place form; ctx is restored on failure. Returns delta.
std::optional<Qual> subtype_into(Context& ctx, const TypeP& T1, const Qual& q, const TypeP& T2,
                                 std::string* why = nullptr);

/// Unfold type-variable heads through their bounds.
TypeP type_expose(const Context& ctx, const TypeP& T);

}  // namespace reachck
