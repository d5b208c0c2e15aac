#pragma once

// The checked-in corpus and its `// expect:` headers. No test framework here,
// so the acceptance driver can share it.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "reachck/front.hpp"

namespace rt {

struct CorpusFile {
  std::string path;
  std::string name;    // file stem
  std::string source;
  bool expect_ok = false;
  std::string expect_code;  // diagnostic code when an error is expected
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string source_dir() { return REACHCK_SOURCE_DIR; }

inline std::vector<CorpusFile> load_corpus() {
  std::vector<CorpusFile> out;
  for (const auto& e : std::filesystem::directory_iterator(source_dir() + "/corpus")) {
    if (e.path().extension() != ".rt") continue;
    CorpusFile f;
    f.path = e.path().string();
    f.name = e.path().stem().string();
    f.source = slurp(f.path);
    const std::string tag = "// expect: ";
    const std::string first = f.source.substr(0, f.source.find('\n'));
    if (first.rfind(tag, 0) == 0) {
      std::istringstream rest(first.substr(tag.size()));
      std::string verdict;
      rest >> verdict >> f.expect_code;
      f.expect_ok = verdict == "ok";
    }
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const CorpusFile& a, const CorpusFile& b) { return a.name < b.name; });
  return out;
}

/// The first diagnostic of a checked file, if any.
inline std::optional<reachck::Diagnostic> first_diag(const reachck::FileResult& r) {
  if (r.syntax) return r.syntax;
  for (const auto& d : r.report.decls)
    if (!d.diags.empty()) return d.diags.front();
  if (!r.report.program_diags.empty()) return r.report.program_diags.front();
  return std::nullopt;
}

}  // namespace rt
