#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "reachck/core.hpp"

namespace reachck {

enum class DiagCode {
  Syntax,
  Unbound,
  AnnotationIllFormed,
  MissingAnnotation,
  TypeMismatch,
  ExposureMismatch,
  FreshEscape,
  ConformanceFailure,
  AvoidanceFailure,
  QualifierBound,
  Internal,
};

const char* code_name(DiagCode c);

struct Diagnostic {
  DiagCode code = DiagCode::Internal;
  std::string rule;  // the typing rule that failed
  std::string message;
  Span span;
  std::string expected, actual;
  std::vector<std::string> atoms;  // offending atom set, display names
};

/// Result of the inference mode: observation, qualified type, output context.
struct TypedResult {
  Qual obs;
  QType qt;
  Context out_ctx;
};

/// Result of the checking mode that synthesizes a qualifier.
struct CheckResult {
  Qual obs;
  Qual q;
  Context out_ctx;
};

struct FullCheckResult {
  Qual obs;
  Context out_ctx;
};

template <class T>
struct Outcome {
  std::optional<T> value;
  std::optional<Diagnostic> diag;
  bool ok() const { return value.has_value(); }
};

struct TypingOptions {
  std::ostream* trace = nullptr;
};

Outcome<TypedResult> infer(const Context& ctx, const TermP& t, const TypingOptions& opt = {});
Outcome<CheckResult> check_infer_qual(const Context& ctx, const TermP& t, const TypeP& T,
                                      const TypingOptions& opt = {});
Outcome<FullCheckResult> check_full(const Context& ctx, const TermP& t, const QType& Q,
                                    const TypingOptions& opt = {});
/// Application conformance s :: p for a function f ~ q.
Outcome<FullCheckResult> conformance(const Context& ctx, const Name& f, const Qual& q, const Qual& s, const Qual& p);

// ---------------------------------------------------------------------------
// Programs
// ---------------------------------------------------------------------------

struct Decl {
  Name name;  // unique bound name; "_" style names for bare expressions
  TermP rhs;
  bool is_expr = false;
  bool from_prelude = false;
  Span span;
};

struct DeclReport {
  Name name;
  bool is_expr = false;
  bool from_prelude = false;
  bool ok = false;
  bool checked = false;  // false when an earlier declaration failed
  std::optional<QType> qt;
  Qual obs;
  std::vector<Diagnostic> diags;
};

struct ProgramReport {
  std::vector<DeclReport> decls;
  bool ok = false;
  std::optional<QType> result;  // type of the whole let chain
  Qual result_obs;
  std::vector<Diagnostic> program_diags;  // failures after every declaration checked
  bool hole_free = true;
};

/// Nest the declarations into a let chain and infer it under the empty
/// context, reporting each declaration's right-hand side.
ProgramReport typecheck_program(const std::vector<Decl>& decls, const TypingOptions& opt = {});

/// The nested let term typecheck_program checks.
TermP program_term(const std::vector<Decl>& decls);

}  // namespace reachck
