#pragma once

#include <optional>
#include <string>

#include "reachck/core.hpp"

namespace reachck {

/// Why a unification failed.
struct UnifyFailure {
  Name var;              // residual variable, empty when the marker itself is stuck
  bool escapes = false;  // the residual expansion is fresh: a fresh value would escape
  std::string reason;
};

/// The largest superset of q that is still a subqualifier of q.
Qual expose(const Context& ctx, const Qual& q);

/// p <: q by exposure and inclusion.
bool qual_check(const Context& ctx, const Qual& p, const Qual& q);

/// Unify p against an exposed q, instantiating holes. Returns the output
/// context, or nullopt.
std::optional<Context> unify(const Context& ctx, const Qual& p, const Qual& q, UnifyFailure* why = nullptr);
/// Expose q, then unify.
std::optional<Context> qual_infer(const Context& ctx, const Qual& p, const Qual& q, UnifyFailure* why = nullptr);

/// In-place forms: ctx is changed only on success.
bool unify_into(Context& ctx, const Qual& p, const Qual& q, UnifyFailure* why = nullptr);
bool qual_infer_into(Context& ctx, const Qual& p, const Qual& q, UnifyFailure* why = nullptr);

}  // namespace reachck
