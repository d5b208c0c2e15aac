#include <cctype>
#include <stdexcept>

#include "reachck/front.hpp"

namespace reachck {

namespace {

enum class Tok {
  Ident,
  LParen,
  RParen,
  LBrack,
  RBrack,
  LBrace,
  RBrace,
  Comma,
  Semi,
  Colon,
  ColonEq,
  Eq,
  FatArrow,
  Arrow,
  Caret,
  Star,
  Backslash,
  BigLambda,
  Dot,
  SubOf,
  Bang,
  End,
};

struct Token {
  Tok k;
  std::string text;
  std::size_t begin, end;
};

struct SyntaxErr {
  std::string msg;
  Span span;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back({k, s.substr(i, len), i, i + len});
    i += len;
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (s.compare(i, 2, "//") == 0) {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    if (s.compare(i, 2, "/*") == 0) {
      const std::size_t close = s.find("*/", i + 2);
      if (close == std::string::npos) throw SyntaxErr{"unterminated comment", {i, s.size()}};
      i = close + 2;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      // uniqueness suffix as printed in raw mode: name'N
      if (j + 1 < s.size() && s[j] == '\'' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      }
      push(Tok::Ident, j - i);
      continue;
    }
    if (s.compare(i, 2, ":=") == 0) { push(Tok::ColonEq, 2); continue; }
    if (s.compare(i, 2, "=>") == 0) { push(Tok::FatArrow, 2); continue; }
    if (s.compare(i, 2, "->") == 0) { push(Tok::Arrow, 2); continue; }
    if (s.compare(i, 2, "<:") == 0) { push(Tok::SubOf, 2); continue; }
    if (s.compare(i, 2, "/\\") == 0) { push(Tok::BigLambda, 2); continue; }
    switch (c) {
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '[': push(Tok::LBrack, 1); continue;
      case ']': push(Tok::RBrack, 1); continue;
      case '{': push(Tok::LBrace, 1); continue;
      case '}': push(Tok::RBrace, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      case ';': push(Tok::Semi, 1); continue;
      case ':': push(Tok::Colon, 1); continue;
      case '=': push(Tok::Eq, 1); continue;
      case '^': push(Tok::Caret, 1); continue;
      case '*': push(Tok::Star, 1); continue;
      case '\\': push(Tok::Backslash, 1); continue;
      case '.': push(Tok::Dot, 1); continue;
      case '!': push(Tok::Bang, 1); continue;
      default:
        break;
    }
    // the diamond marker is accepted as a synonym for *
    if (s.compare(i, 3, "\xE2\x99\xA6") == 0) { push(Tok::Star, 3); continue; }
    throw SyntaxErr{std::string("unexpected character '") + c + "'", {i, i + 1}};
  }
  out.push_back({Tok::End, "", s.size(), s.size()});
  return out;
}

const char* tok_desc(Tok k) {
  switch (k) {
    case Tok::Ident: return "identifier";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::ColonEq: return "':='";
    case Tok::Eq: return "'='";
    case Tok::FatArrow: return "'=>'";
    case Tok::Arrow: return "'->'";
    case Tok::Caret: return "'^'";
    case Tok::Star: return "'*'";
    case Tok::Backslash: return "'\\'";
    case Tok::BigLambda: return "'/\\'";
    case Tok::Dot: return "'.'";
    case Tok::SubOf: return "'<:'";
    case Tok::Bang: return "'!'";
    case Tok::End: return "end of input";
  }
  return "token";
}

bool keyword(const std::string& s) {
  static const char* kws[] = {"unit", "ref", "val", "def", "type", "forall", "mu", "Unit", "Top", "Ref", "new"};
  for (const char* k : kws)
    if (s == k) return true;
  return false;
}

class Parser {
 public:
  Parser(const std::string& src, const Scope& outer) : toks_(lex(src)), scope_(outer) {}

  SourceProgram program(bool from_prelude) {
    SourceProgram p;
    while (!at(Tok::End)) {
      if (accept(Tok::Semi)) continue;
      const std::size_t b = peek().begin;
      if (at_kw("type")) {
        type_decl();
      } else if (at_kw("val")) {
        next();
        Token id = ident("a name");
        std::optional<QType> ann;
        if (accept(Tok::Colon)) ann = qtype();
        expect(Tok::Eq);
        TermP rhs = term();
        if (ann) rhs = t_ascribe(rhs, *ann, rhs->span);
        Name u = bind_fresh(id.text);
        p.decls.push_back(Decl{u, rhs, false, from_prelude, {b, prev_end()}});
      } else if (at_kw("def")) {
        next();
        Token id = ident("a function name");
        Name u = global_names().fresh(id.text);
        TermP rhs = def_body(id.text);
        scope_.terms[id.text] = u;
        p.decls.push_back(Decl{u, rhs, false, from_prelude, {b, prev_end()}});
      } else {
        TermP e = term();
        p.decls.push_back(Decl{global_names().fresh("_"), e, true, from_prelude, {b, prev_end()}});
      }
      if (!at(Tok::End)) expect(Tok::Semi);
    }
    p.scope = scope_;
    return p;
  }

  TermP whole_term() {
    TermP t = term();
    expect(Tok::End);
    return t;
  }

  QType whole_qtype() {
    QType q = qtype();
    expect(Tok::End);
    return q;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Scope scope_;
  std::map<Name, Name> tvars_;  // type variables in scope

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().k == k; }
  bool at_kw(const char* kw) const { return peek().k == Tok::Ident && peek().text == kw; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  std::size_t prev_end() const { return pos_ ? toks_[pos_ - 1].end : 0; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }

  [[noreturn]] void error(const std::string& what) {
    const Token& t = peek();
    throw SyntaxErr{"expected " + what + ", found " + (t.k == Tok::Ident ? "'" + t.text + "'" : tok_desc(t.k)),
                    {t.begin, t.end}};
  }

  const Token& expect(Tok k) {
    if (!at(k)) error(tok_desc(k));
    return next();
  }

  void expect_kw(const char* kw) {
    if (!at_kw(kw)) error(std::string("'") + kw + "'");
    next();
  }

  Token ident(const char* what) {
    if (!at(Tok::Ident) || keyword(peek().text)) error(what);
    return next();
  }

  Name bind_fresh(const Name& src) {
    Name u = global_names().fresh(src);
    scope_.terms[src] = u;
    return u;
  }

  Name resolve(const Name& src) const {
    auto it = scope_.terms.find(src);
    return it == scope_.terms.end() ? src : it->second;
  }

  // Run f with extra term bindings, restoring the scope afterwards.
  template <class F>
  auto scoped(const std::vector<std::pair<Name, Name>>& binds, F&& f) {
    auto saved = scope_.terms;
    for (const auto& [s, u] : binds) scope_.terms[s] = u;
    auto r = f();
    scope_.terms = std::move(saved);
    return r;
  }

  template <class F>
  auto scoped_tvar(const Name& src, const Name& u, F&& f) {
    auto saved = tvars_;
    tvars_[src] = u;
    auto r = f();
    tvars_ = std::move(saved);
    return r;
  }

  // ----- qualifiers and types -----

  Qual qual() {
    expect(Tok::LBrace);
    Qual q;
    if (!at(Tok::RBrace)) {
      do {
        if (accept(Tok::Star)) {
          q.fresh = true;
        } else {
          Token id = ident("a qualifier atom");
          q.add(resolve(id.text));
        }
      } while (accept(Tok::Comma));
    }
    expect(Tok::RBrace);
    return q;
  }

  QType qtype() {
    const std::size_t b = peek().begin;
    QType Q = type();
    if (accept(Tok::Caret)) {
      if (!Q.q.empty()) throw SyntaxErr{"type is qualified twice", {b, prev_end()}};
      Q.q = qual();
    }
    return Q;
  }

  // Parameter `x: QT` or `()` for a unit parameter.
  struct Param {
    Name src;
    QType ty;
    bool unit = false;
  };

  QType fun_rest(const Name& self_src) {
    // after the self name (if any), at '('
    expect(Tok::LParen);
    const Name f = global_names().fresh(self_src.empty() ? "f" : self_src);
    std::vector<std::pair<Name, Name>> fb;
    if (!self_src.empty()) fb.push_back({self_src, f});
    Name xsrc, x;
    QType dom;
    if (at(Tok::RParen)) {
      x = global_names().fresh("u");
      dom = qt(mk_base());
    } else {
      xsrc = ident("a parameter name").text;
      x = global_names().fresh(xsrc);
      expect(Tok::Colon);
      dom = scoped(fb, [&] { return qtype(); });
    }
    expect(Tok::RParen);
    expect(Tok::Arrow);
    auto cb = fb;
    if (!xsrc.empty()) cb.push_back({xsrc, x});
    QType cod = scoped(cb, [&] { return qtype(); });
    return qt(mk_fun(f, x, dom, cod));
  }

  QType type() {
    const Token& t = peek();
    if (t.k == Tok::Ident && t.text == "Unit") {
      next();
      return qt(mk_base());
    }
    if (t.k == Tok::Ident && t.text == "Top") {
      next();
      return qt(mk_top());
    }
    if (t.k == Tok::Ident && t.text == "Ref") {
      next();
      expect(Tok::LBrack);
      QType r = qtype();
      expect(Tok::RBrack);
      return qt(mk_ref(r));
    }
    if (t.k == Tok::Ident && t.text == "mu") {
      // mu l. T names the self-reference of the function or quantified type T
      next();
      const Token id = ident("a self name");
      expect(Tok::Dot);
      const Name l = global_names().fresh(id.text);
      QType body = scoped({{id.text, l}}, [&] { return qtype(); });
      if (body.ty->k != TK::Fun && body.ty->k != TK::All)
        throw SyntaxErr{"mu needs a function or quantified type", {id.begin, prev_end()}};
      body.ty = rename(body.ty, {{body.ty->self, l}});
      return body;
    }
    if (t.k == Tok::Ident && t.text == "forall") {
      next();
      Name fsrc;
      if (at(Tok::Ident)) fsrc = ident("a self name").text;
      const Name f = global_names().fresh(fsrc.empty() ? "f" : fsrc);
      std::vector<std::pair<Name, Name>> fb;
      if (!fsrc.empty()) fb.push_back({fsrc, f});
      expect(Tok::LBrack);
      const Name Xs = ident("a type variable").text;
      expect(Tok::Caret);
      const Name xs = ident("a qualifier variable").text;
      // an omitted bound admits any argument: Top^{*,f}
      QType bound = qt(mk_top(), Qual{f}.add_fresh());
      if (accept(Tok::SubOf)) bound = scoped(fb, [&] { return qtype(); });
      expect(Tok::RBrack);
      expect(Tok::Dot);
      const Name X = global_names().fresh(Xs);
      const Name x = global_names().fresh(xs);
      auto bb = fb;
      bb.push_back({xs, x});
      QType body = scoped(bb, [&] { return scoped_tvar(Xs, X, [&] { return qtype(); }); });
      return qt(mk_all(f, X, x, bound, body));
    }
    if (t.k == Tok::LParen) {
      // `(x: T) -> U`, `() -> U`, or a parenthesized qualified type
      if ((peek(1).k == Tok::Ident && peek(2).k == Tok::Colon) ||
          (peek(1).k == Tok::RParen && peek(2).k == Tok::Arrow))
        return fun_rest("");
      next();
      QType q = qtype();
      expect(Tok::RParen);
      if (accept(Tok::Arrow)) {
        // `(T) -> U`: a function whose parameter is not named
        QType cod = qtype();
        return qt(mk_fun(global_names().fresh("f"), global_names().fresh("u"), q, cod));
      }
      return q;
    }
    if (t.k == Tok::Ident && !keyword(t.text)) {
      if (peek(1).k == Tok::LParen) {
        const Name self = next().text;
        return fun_rest(self);
      }
      const Token id = next();
      if (auto it = tvars_.find(id.text); it != tvars_.end()) return qt(mk_tvar(it->second));
      if (auto it = scope_.aliases.find(id.text); it != scope_.aliases.end()) return expand(id, it->second);
      throw SyntaxErr{"unknown type '" + id.text + "'", {id.begin, id.end}};
    }
    error("a type");
  }

  QType expand(const Token& id, const Alias& al) {
    std::vector<QType> args;
    if (accept(Tok::LBrack)) {
      do args.push_back(qtype());
      while (accept(Tok::Comma));
      expect(Tok::RBrack);
    }
    if (args.size() != al.params.size())
      throw SyntaxErr{"type '" + id.text + "' expects " + std::to_string(al.params.size()) + " arguments",
                      {id.begin, prev_end()}};
    QType out = al.body;
    for (std::size_t i = 0; i < args.size(); ++i)
      out = qtype_subst_tvar(out, args[i].ty, args[i].q, al.params[i].first, al.params[i].second);
    out.ty = freshen(out.ty);
    return out;
  }

  void type_decl() {
    expect_kw("type");
    Token id = ident("a type name");
    Alias al;
    auto saved_terms = scope_.terms;
    auto saved_tvars = tvars_;
    if (accept(Tok::LBrack)) {
      do {
        const Name Xs = ident("a type parameter").text;
        expect(Tok::Caret);
        const Name xs = ident("a qualifier parameter").text;
        const Name X = global_names().fresh(Xs), x = global_names().fresh(xs);
        tvars_[Xs] = X;
        scope_.terms[xs] = x;
        al.params.push_back({X, x});
      } while (accept(Tok::Comma));
      expect(Tok::RBrack);
    }
    expect(Tok::Eq);
    al.body = qtype();
    scope_.terms = std::move(saved_terms);
    tvars_ = std::move(saved_tvars);
    scope_.aliases[id.text] = al;
  }

  // ----- terms -----

  bool starts_prefix() const {
    const Token& t = peek();
    switch (t.k) {
      case Tok::LParen:
      case Tok::LBrace:
      case Tok::Bang:
        return true;
      case Tok::Ident:
        return !keyword(t.text) || t.text == "unit" || t.text == "ref" || t.text == "new";
      default:
        return false;
    }
  }

  TermP term() {
    const std::size_t b = peek().begin;
    if (at_kw("val")) {
      next();
      Token id = ident("a name");
      std::optional<QType> ann;
      if (accept(Tok::Colon)) ann = qtype();
      expect(Tok::Eq);
      TermP rhs = term();
      if (ann) rhs = t_ascribe(rhs, *ann, rhs->span);
      expect(Tok::Semi);
      const Name x = global_names().fresh(id.text);
      const Name self = global_names().fresh("let");
      TermP body = scoped({{id.text, x}}, [&] { return term(); });
      return t_let(x, self, rhs, body, {b, prev_end()});
    }
    if (at(Tok::Backslash)) return lambda();
    if (at(Tok::BigLambda)) return tlambda();
    TermP l = app();
    if (accept(Tok::ColonEq)) {
      TermP r = app();
      return t_assign(l, r, {b, prev_end()});
    }
    return l;
  }

  TermP lambda() {
    const std::size_t b = expect(Tok::Backslash).begin;
    Name fsrc;
    if (at(Tok::Ident)) fsrc = ident("a self name").text;
    const Name f = global_names().fresh(fsrc.empty() ? "f" : fsrc);
    expect(Tok::LParen);
    Name xsrc, x;
    std::optional<QType> ann;
    std::vector<std::pair<Name, Name>> binds;
    if (!fsrc.empty()) binds.push_back({fsrc, f});
    if (at(Tok::RParen)) {
      x = global_names().fresh("u");
      ann = qt(mk_base());
    } else {
      xsrc = ident("a parameter name").text;
      x = global_names().fresh(xsrc);
      if (accept(Tok::Colon)) ann = scoped(binds, [&] { return qtype(); });
    }
    expect(Tok::RParen);
    expect(Tok::FatArrow);
    if (!xsrc.empty()) binds.push_back({xsrc, x});
    TermP body = scoped(binds, [&] { return term(); });
    return t_abs(f, x, ann, body, {b, prev_end()});
  }

  TermP tlambda() {
    const std::size_t b = expect(Tok::BigLambda).begin;
    Name fsrc;
    if (at(Tok::Ident)) fsrc = ident("a self name").text;
    const Name f = global_names().fresh(fsrc.empty() ? "f" : fsrc);
    std::vector<std::pair<Name, Name>> binds;
    if (!fsrc.empty()) binds.push_back({fsrc, f});
    expect(Tok::LBrack);
    const Name Xs = ident("a type variable").text;
    expect(Tok::Caret);
    const Name xs = ident("a qualifier variable").text;
    QType bound = qt(mk_top(), Qual{f}.add_fresh());
    if (accept(Tok::SubOf)) bound = scoped(binds, [&] { return qtype(); });
    expect(Tok::RBrack);
    expect(Tok::FatArrow);
    const Name X = global_names().fresh(Xs), x = global_names().fresh(xs);
    binds.push_back({xs, x});
    TermP body = scoped(binds, [&] { return scoped_tvar(Xs, X, [&] { return term(); }); });
    return t_tabs(f, X, x, bound, body, {b, prev_end()});
  }

  // def name(p1)(p2)...: R = body, curried into annotated lambdas.
  TermP def_body(const Name& fname) {
    struct Group {
      Name self, x, xsrc;
      QType ann;
    };
    std::vector<Group> groups;
    auto saved = scope_.terms;
    const Name self0 = global_names().fresh(fname);
    scope_.terms[fname] = self0;
    while (at(Tok::LParen)) {
      Group g;
      g.self = groups.empty() ? self0 : global_names().fresh("f");
      next();
      if (at(Tok::RParen)) {
        g.x = global_names().fresh("u");
        g.ann = qt(mk_base());
      } else {
        g.xsrc = ident("a parameter name").text;
        expect(Tok::Colon);
        g.ann = qtype();
        g.x = global_names().fresh(g.xsrc);
      }
      expect(Tok::RParen);
      if (!g.xsrc.empty()) scope_.terms[g.xsrc] = g.x;
      groups.push_back(g);
    }
    if (groups.empty()) error("a parameter list");
    std::optional<QType> ret;
    if (accept(Tok::Colon)) ret = qtype();
    expect(Tok::Eq);
    TermP body = term();
    scope_.terms = std::move(saved);
    if (ret) body = t_ascribe(body, *ret, body->span);
    for (auto it = groups.rbegin(); it != groups.rend(); ++it) body = t_abs(it->self, it->x, it->ann, body, body->span);
    return body;
  }

  TermP app() {
    const std::size_t b = peek().begin;
    TermP t = prefix();
    while (starts_prefix()) {
      TermP a = prefix();
      t = t_app(t, a, {b, prev_end()});
    }
    return t;
  }

  TermP prefix() {
    const std::size_t b = peek().begin;
    if (accept(Tok::Bang)) {
      TermP a = prefix();
      return t_deref(a, {b, prev_end()});
    }
    if (at_kw("ref")) {
      next();
      TermP a = prefix();
      return t_ref(a, {b, prev_end()});
    }
    if (at_kw("new")) {
      next();
      expect_kw("Ref");
      expect(Tok::LParen);
      TermP a = term();
      expect(Tok::RParen);
      return t_ref(a, {b, prev_end()});
    }
    return postfix();
  }

  TermP postfix() {
    const std::size_t b = peek().begin;
    TermP t = atom();
    while (accept(Tok::LBrack)) {
      QType A = qtype();
      expect(Tok::RBrack);
      t = t_tapp(t, A, {b, prev_end()});
    }
    return t;
  }

  TermP atom() {
    const Token& t = peek();
    const std::size_t b = t.begin;
    if (t.k == Tok::Ident && t.text == "unit") {
      next();
      return t_unit({b, prev_end()});
    }
    if (t.k == Tok::Ident && !keyword(t.text)) {
      next();
      return t_var(resolve(t.text), {b, prev_end()});
    }
    if (t.k == Tok::LParen) {
      next();
      if (accept(Tok::RParen)) return t_unit({b, prev_end()});
      TermP e = term();
      if (accept(Tok::Colon)) {
        QType A = qtype();
        expect(Tok::RParen);
        return t_ascribe(e, A, {b, prev_end()});
      }
      expect(Tok::RParen);
      return e;
    }
    if (t.k == Tok::LBrace) {
      next();
      TermP e = term();
      expect(Tok::RBrace);
      return t_abs(global_names().fresh("f"), global_names().fresh("u"), qt(mk_base()), e, {b, prev_end()});
    }
    error("a term");
  }
};

Diagnostic syntax_diag(const SyntaxErr& e) {
  Diagnostic d;
  d.code = DiagCode::Syntax;
  d.rule = "parse";
  d.message = e.msg;
  d.span = e.span;
  return d;
}

}  // namespace

ParseResult parse_program(const std::string& src, const Scope& outer, bool from_prelude) {
  ParseResult r;
  try {
    Parser p(src, outer);
    r.program = p.program(from_prelude);
  } catch (const SyntaxErr& e) {
    r.diag = syntax_diag(e);
  }
  return r;
}

TermP parse_term(const std::string& src, const Scope& outer) {
  try {
    Parser p(src, outer);
    return p.whole_term();
  } catch (const SyntaxErr& e) {
    throw std::runtime_error("syntax error at " + std::to_string(e.span.begin) + ": " + e.msg);
  }
}

QType parse_qtype(const std::string& src, const Scope& outer) {
  try {
    Parser p(src, outer);
    return p.whole_qtype();
  } catch (const SyntaxErr& e) {
    throw std::runtime_error("syntax error at " + std::to_string(e.span.begin) + ": " + e.msg);
  }
}

std::pair<std::size_t, std::size_t> line_col(const std::string& src, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < src.size(); ++i) {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace reachck
