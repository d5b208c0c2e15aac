#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "reachck/core.hpp"
#include "reachck/infer.hpp"

namespace reachck {

/// A type alias `type N[X^x, ...] = T`, expanded at every use.
struct Alias {
  std::vector<std::pair<Name, Name>> params;  // (type variable, qualifier variable)
  QType body;
};

/// Names visible to later declarations: source name to unique name.
struct Scope {
  std::map<Name, Name> terms;
  std::map<Name, Alias> aliases;
};

struct SourceProgram {
  std::vector<Decl> decls;
  Scope scope;  // scope after the last declaration
};

struct ParseResult {
  std::optional<SourceProgram> program;
  std::optional<Diagnostic> diag;
};

/// Parse a whole file. Every binder is renamed to a unique name; references
/// resolve through `outer` (the prelude scope) and earlier declarations.
ParseResult parse_program(const std::string& src, const Scope& outer = {}, bool from_prelude = false);

/// Single-phrase parsers, mainly for tests. Throw std::runtime_error on syntax errors.
TermP parse_term(const std::string& src, const Scope& outer = {});
QType parse_qtype(const std::string& src, const Scope& outer = {});

struct Prelude {
  std::vector<Decl> decls;
  Scope scope;
};

/// Explicit path, then the REACHCK_PRELUDE environment variable, then the
/// bundled file.
std::string prelude_path(const std::optional<std::string>& explicit_path);
/// Parse a prelude file; throws std::runtime_error with the diagnostic text.
Prelude load_prelude(const std::string& path);

/// Line and column (1-based) of a byte offset.
std::pair<std::size_t, std::size_t> line_col(const std::string& src, std::size_t offset);

struct FileResult {
  std::string path;
  std::string source;
  std::optional<Diagnostic> syntax;
  ProgramReport report;
  std::vector<Decl> decls;  // prelude followed by the file's declarations
  bool ok() const;
};

FileResult check_source(const std::string& path, const std::string& source, const Prelude& prelude,
                        const TypingOptions& opt = {});

/// One JSON object per user declaration, each on its own line.
void write_json(std::ostream& os, const FileResult& r);
/// Human-readable report.
void write_text(std::ostream& os, const FileResult& r);

/// The command-line driver. Returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace reachck
