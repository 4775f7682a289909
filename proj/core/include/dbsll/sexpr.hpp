#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace dbsll {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Minimal S-expressions: atoms and lists. An atom is a maximal run of
// non-delimiter characters; a brace-delimited span inside an atom is taken
// verbatim, so grade annotations like ?{2*(X1+1)} stay one token even though
// they contain parentheses.
struct SExpr {
  bool is_atom = false;
  std::string atom;
  std::vector<SExpr> items;

  static SExpr make_atom(std::string s) {
    SExpr e;
    e.is_atom = true;
    e.atom = std::move(s);
    return e;
  }
  static SExpr make_list(std::vector<SExpr> xs = {}) {
    SExpr e;
    e.items = std::move(xs);
    return e;
  }
  const SExpr& at(std::size_t k) const {
    if (is_atom || k >= items.size())
      throw ParseError("malformed expression: missing argument " + std::to_string(k));
    return items[k];
  }
  std::size_t size() const { return items.size(); }
  const std::string& head() const {
    if (is_atom || items.empty() || !items[0].is_atom)
      throw ParseError("malformed expression: expected a tagged list");
    return items[0].atom;
  }
};

namespace sexprdetail {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;

  explicit Lexer(const std::string& s) : src(s) {}

  void skip() {
    for (;;) {
      while (pos < src.size() && is_space(src[pos])) ++pos;
      if (pos < src.size() && src[pos] == ';') { // line comments
        while (pos < src.size() && src[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
  }

  bool done() {
    skip();
    return pos >= src.size();
  }

  // returns "(", ")", or an atom
  std::string next() {
    skip();
    if (pos >= src.size()) throw ParseError("unexpected end of input");
    char c = src[pos];
    if (c == '(' || c == ')') {
      ++pos;
      return std::string(1, c);
    }
    std::string out;
    while (pos < src.size()) {
      c = src[pos];
      if (is_space(c) || c == '(' || c == ')' || c == ';') break;
      if (c == '{') {
        std::size_t close = src.find('}', pos);
        if (close == std::string::npos) throw ParseError("unterminated '{' in token");
        out += src.substr(pos, close - pos + 1);
        pos = close + 1;
        continue;
      }
      out += c;
      ++pos;
    }
    if (out.empty()) throw ParseError("empty token");
    return out;
  }
};

inline SExpr parse_one(Lexer& lex) {
  std::string tok = lex.next();
  if (tok == ")") throw ParseError("unexpected ')'");
  if (tok != "(") return SExpr::make_atom(std::move(tok));
  SExpr list = SExpr::make_list();
  for (;;) {
    lex.skip();
    if (lex.pos >= lex.src.size()) throw ParseError("missing ')'");
    if (lex.src[lex.pos] == ')') {
      ++lex.pos;
      return list;
    }
    list.items.push_back(parse_one(lex));
  }
}

} // namespace sexprdetail

inline SExpr parse_sexpr(const std::string& src) {
  sexprdetail::Lexer lex(src);
  SExpr e = sexprdetail::parse_one(lex);
  if (!lex.done()) throw ParseError("trailing input after expression");
  return e;
}

inline void print_sexpr(const SExpr& e, std::string& out) {
  if (e.is_atom) {
    out += e.atom;
    return;
  }
  out += '(';
  for (std::size_t k = 0; k < e.items.size(); ++k) {
    if (k) out += ' ';
    print_sexpr(e.items[k], out);
  }
  out += ')';
}

inline std::string print_sexpr(const SExpr& e) {
  std::string out;
  print_sexpr(e, out);
  return out;
}

} // namespace dbsll
