#include "reachck/front.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "reachck/bench.hpp"
#include "reachck/eval.hpp"
#include "reachck/pretty.hpp"

#ifndef REACHCK_BUNDLED_PRELUDE
#define REACHCK_BUNDLED_PRELUDE "prelude/prelude.rt"
#endif

namespace reachck {

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> atom_list(const Qual& q) {
  std::vector<std::string> out;
  for (const auto& v : q.vars) out.push_back(display_name(v));
  std::sort(out.begin(), out.end());
  if (q.fresh) out.push_back("*");
  return out;
}

nlohmann::json diag_json(const Diagnostic& d, const std::string& src) {
  auto [line, col] = line_col(src, d.span.begin);
  nlohmann::json j;
  j["code"] = code_name(d.code);
  j["rule"] = d.rule;
  j["message"] = d.message;
  j["span"] = {{"begin", d.span.begin}, {"end", d.span.end}, {"line", line}, {"column", col}};
  if (!d.expected.empty()) j["expected"] = d.expected;
  if (!d.actual.empty()) j["actual"] = d.actual;
  std::vector<std::string> atoms = d.atoms;
  std::sort(atoms.begin(), atoms.end());
  j["atoms"] = atoms;
  return j;
}

std::string diag_text(const Diagnostic& d, const std::string& path, const std::string& src) {
  auto [line, col] = line_col(src, d.span.begin);
  std::string s = path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": error[" + code_name(d.code) +
                  "] " + d.message;
  if (!d.rule.empty()) s += " (" + d.rule + ")";
  return s;
}

}  // namespace

std::string prelude_path(const std::optional<std::string>& explicit_path) {
  if (explicit_path) return *explicit_path;
  if (const char* env = std::getenv("REACHCK_PRELUDE"); env && *env) return env;
  return REACHCK_BUNDLED_PRELUDE;
}

Prelude load_prelude(const std::string& path) {
  auto src = read_file(path);
  if (!src) throw std::runtime_error("cannot read prelude " + path);
  ParseResult pr = parse_program(*src, {}, true);
  if (!pr.program) throw std::runtime_error(diag_text(*pr.diag, path, *src));
  return Prelude{pr.program->decls, pr.program->scope};
}

bool FileResult::ok() const { return !syntax && report.ok; }

FileResult check_source(const std::string& path, const std::string& source, const Prelude& prelude,
                        const TypingOptions& opt) {
  FileResult r;
  r.path = path;
  r.source = source;
  ParseResult pr = parse_program(source, prelude.scope);
  if (!pr.program) {
    r.syntax = pr.diag;
    return r;
  }
  r.decls = prelude.decls;
  r.decls.insert(r.decls.end(), pr.program->decls.begin(), pr.program->decls.end());
  r.report = typecheck_program(r.decls, opt);
  return r;
}

void write_json(std::ostream& os, const FileResult& r) {
  auto base = [&](const std::string& name) {
    nlohmann::json j;
    j["schema"] = 1;
    j["file"] = r.path;
    j["name"] = name;
    return j;
  };
  if (r.syntax) {
    nlohmann::json j = base("<program>");
    j["status"] = "error";
    j["diagnostics"] = nlohmann::json::array({diag_json(*r.syntax, r.source)});
    os << j.dump() << '\n';
    return;
  }
  for (std::size_t i = 0; i < r.report.decls.size(); ++i) {
    const DeclReport& d = r.report.decls[i];
    if (d.from_prelude && d.ok) continue;
    nlohmann::json j = base(d.is_expr ? "_" : display_name(d.name));
    j["status"] = d.ok ? "ok" : d.checked ? "error" : "skipped";
    j["type"] = d.qt ? nlohmann::json(show(d.qt->ty)) : nlohmann::json(nullptr);
    j["qualifier"] = d.qt ? nlohmann::json(atom_list(d.qt->q)) : nlohmann::json(nullptr);
    j["filter"] = d.ok ? nlohmann::json(atom_list(d.obs)) : nlohmann::json(nullptr);
    nlohmann::json ds = nlohmann::json::array();
    for (const auto& g : d.diags) ds.push_back(diag_json(g, r.source));
    j["diagnostics"] = ds;
    os << j.dump() << '\n';
  }
  if (!r.report.program_diags.empty()) {
    nlohmann::json j = base("<program>");
    j["status"] = "error";
    nlohmann::json ds = nlohmann::json::array();
    for (const auto& g : r.report.program_diags) ds.push_back(diag_json(g, r.source));
    j["diagnostics"] = ds;
    os << j.dump() << '\n';
  }
}

void write_text(std::ostream& os, const FileResult& r) {
  if (r.syntax) {
    os << diag_text(*r.syntax, r.path, r.source) << '\n';
    return;
  }
  for (const auto& d : r.report.decls) {
    if (d.from_prelude && d.ok) continue;
    if (d.ok) {
      os << (d.is_expr ? "_" : display_name(d.name)) << " : " << show(*d.qt) << '\n';
    } else {
      for (const auto& g : d.diags) os << diag_text(g, r.path, r.source) << '\n';
    }
  }
  for (const auto& g : r.report.program_diags) os << diag_text(g, r.path, r.source) << '\n';
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reachability type checker"};
  std::vector<std::string> files;
  bool emit_json = false, eval = false, trace = false, bench = false;
  std::size_t fuel = 1000000;
  std::optional<std::string> prelude_opt;
  std::string prelude_arg;
  unsigned jobs = 1;
  app.add_option("files", files, "source files (.rt)");
  app.add_flag("--emit-json", emit_json, "one JSON object per declaration");
  app.add_flag("--eval", eval, "run and audit the program after checking");
  app.add_flag("--trace", trace, "print every typing step");
  app.add_option("--fuel", fuel, "evaluation fuel")->check(CLI::PositiveNumber);
  app.add_option("--prelude", prelude_arg, "prelude file");
  app.add_flag("--bench", bench, "run the Church numeral scaling family");
  app.add_option("--jobs", jobs, "files checked concurrently")->check(CLI::Range(1u, 256u));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << '\n';
    return 2;
  }
  if (!prelude_arg.empty()) prelude_opt = prelude_arg;
  if (files.empty() && !bench) {
    err << "no input files\n" << app.help();
    return 2;
  }

  Prelude prelude;
  try {
    prelude = load_prelude(prelude_path(prelude_opt));
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return 2;
  }

  if (bench) {
    auto pts = run_church_bench(prelude, {25, 50, 100, 150, 200, 300, 400}, 3);
    out << "size term_size millis\n";
    for (const auto& p : pts) out << p.size << ' ' << p.term_size << ' ' << p.millis << (p.ok ? "" : " FAILED") << '\n';
    if (files.empty()) return 0;
  }

  std::vector<std::optional<std::string>> sources(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    sources[i] = read_file(files[i]);
    if (!sources[i]) {
      err << "cannot read " << files[i] << '\n';
      return 2;
    }
  }

  std::vector<std::string> outputs(files.size());
  std::vector<bool> ok(files.size(), false);
  auto work = [&](std::size_t i) {
    std::ostringstream o, tr;
    TypingOptions opt;
    if (trace) opt.trace = &tr;
    FileResult r = check_source(files[i], *sources[i], prelude, opt);
    if (trace) o << tr.str();
    if (emit_json)
      write_json(o, r);
    else
      write_text(o, r);
    bool good = r.ok();
    if (good && eval) {
      AuditReport a = dynamic_check(r.decls, r.report, fuel);
      for (std::size_t k = 0; k < a.decls.size(); ++k) {
        const DeclAudit& d = a.decls[k];
        if (r.decls[k].from_prelude && d.no_stuck && d.reach_ok && d.writes_ok) continue;
        const bool pass = d.no_stuck && d.reach_ok && d.writes_ok;
        o << "audit " << display_name(d.name) << ": "
          << (d.out_of_fuel ? "inconclusive (out of fuel)" : pass ? "pass" : "FAIL " + d.detail) << '\n';
      }
      if (!a.ok()) good = false;
    }
    outputs[i] = o.str();
    ok[i] = good;
  };
  if (jobs <= 1 || files.size() <= 1) {
    for (std::size_t i = 0; i < files.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, files.size()); ++t)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < files.size();) work(i);
      });
    for (auto& th : pool) th.join();
  }
  int code = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    out << outputs[i];
    if (!ok[i]) code = 1;
  }
  return code;
}

}  // namespace reachck
