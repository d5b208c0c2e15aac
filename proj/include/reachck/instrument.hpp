#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "reachck/core.hpp"

namespace reachck {

/// Per-thread counters and the optional context-monotonicity audit.
struct Stats {
  std::size_t unifications = 0;  // qualifier unifications that instantiated a hole
  std::size_t inferences = 0;    // qual_infer calls
  std::size_t expose_steps = 0;
  std::size_t expose_calls = 0;
  std::size_t max_expose_ratio_violations = 0;  // expose visited > 2|ctx| entries
  std::size_t sub_depth_max = 0;

  bool audit = false;  // check ctx_subsumes(in, out) around every operation
  std::size_t audited_ops = 0;
  std::vector<std::string> violations;

  void reset_counters() {
    unifications = inferences = expose_steps = expose_calls = max_expose_ratio_violations = 0;
    sub_depth_max = 0;
    audited_ops = 0;
    violations.clear();
  }
};

Stats& stats();

/// Snapshots the context on entry and, when auditing, checks on exit that the
/// output subsumes the input and has the same length.
class OpAudit {
 public:
  OpAudit(const Context& ctx, const char* op);
  ~OpAudit();
  OpAudit(const OpAudit&) = delete;
  OpAudit& operator=(const OpAudit&) = delete;

 private:
  const Context& ctx_;
  const char* op_;
  std::optional<Context> before_;
};

}  // namespace reachck
