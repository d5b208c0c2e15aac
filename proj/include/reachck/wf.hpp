#pragma once

#include <optional>
#include <string>

#include "reachck/core.hpp"

namespace reachck {

enum class WfKind { HoleInQualifier, UnboundVariable, SelfInBadPolarity, SelfWithoutFresh, HoleOutsideSelf, UnboundTypeVar };

struct WfError {
  WfKind kind;
  std::string location;  // slash-separated path, e.g. "cod/dom"
  std::string detail;
};

const char* wf_kind_name(WfKind k);

using WfResult = std::optional<WfError>;  // nullopt means ok

WfResult wf_qual(const Context& ctx, const Qual& q);
WfResult wf_type(Context& ctx, const TypeP& T);
WfResult wf_qtype(Context& ctx, const QType& Q);
WfResult wf_context(const Context& ctx);

/// The c-fun self constraints on a domain: f not positive in T, and
/// f in p implies {fresh, f} in p.
WfResult wf_self_domain(const Name& f, const QType& dom);

/// g2 results from g1 by extending holes with fresh-free qualifiers closed
/// under the corresponding prefix.
bool ctx_subsumes(const Context& g1, const Context& g2);

}  // namespace reachck
