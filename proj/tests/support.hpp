#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "reachck/core.hpp"
#include "reachck/front.hpp"
#include "reachck/pretty.hpp"

namespace rt {

using namespace reachck;

/// "a,b,*" to a qualifier; `*` is the fresh marker.
inline Qual Q(std::string_view s) {
  Qual q;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = s.find(',', i);
    if (j == std::string_view::npos) j = s.size();
    std::string atom(s.substr(i, j - i));
    atom.erase(0, atom.find_first_not_of(' '));
    atom.erase(atom.find_last_not_of(' ') + 1);
    if (atom == "*")
      q.fresh = true;
    else if (!atom.empty())
      q.add(atom);
    i = j + 1;
  }
  return q;
}

inline Qual H(const Name& owner, std::string_view rest = "") {
  Qual q = Q(rest);
  q.hole = owner;
  return q;
}

inline QType QT(const std::string& s) { return parse_qtype(s); }
inline TypeP T(const std::string& s) { return parse_qtype(s).ty; }

/// Context builder; reserves names so parsed binders never collide with them.
struct Ctx {
  Context ctx;
  Ctx& var(const Name& x, const std::string& qtype) {
    global_names().reserve(x);
    ctx.push_var(x, QT(qtype));
    return *this;
  }
  Ctx& var(const Name& x, TypeP ty, Qual q) {
    global_names().reserve(x);
    ctx.push_var(x, qt(std::move(ty), std::move(q)));
    return *this;
  }
  Ctx& self(const Name& f, Qual q) {
    global_names().reserve(f);
    ctx.push_self(f, std::move(q));
    return *this;
  }
  Ctx& tvar(const Name& X, const Name& x, QType bound) {
    global_names().reserve(X);
    global_names().reserve(x);
    ctx.push_tvar(X, x, std::move(bound));
    return *this;
  }
  operator const Context&() const { return ctx; }
};

inline TypeP ref_unit() { return mk_ref(qt(mk_base())); }

/// The bundled prelude, loaded once.
inline const Prelude& prelude() {
  static const Prelude p = load_prelude(prelude_path(std::nullopt));
  return p;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rt

template <>
struct Catch::StringMaker<reachck::Qual> {
  static std::string convert(const reachck::Qual& q) { return reachck::show(q, {true}); }
};
