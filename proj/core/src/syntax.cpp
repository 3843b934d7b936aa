#include "mil/syntax.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace mil {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { ident, var, number, quoted, punct, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t col;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto is_word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    std::size_t l = line, k = col, start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      advance(1);
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) advance(1);
      if (i + 1 < src.size() && src[i] == '.' && std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
        advance(1);
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) advance(1);
      }
      out.push_back({Tok::number, std::string(src.substr(start, i - start)), l, k});
    } else if (std::islower(static_cast<unsigned char>(c)) || c == '$') {
      advance(1);
      while (i < src.size() && is_word(src[i])) advance(1);
      out.push_back({Tok::ident, std::string(src.substr(start, i - start)), l, k});
    } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      advance(1);
      while (i < src.size() && is_word(src[i])) advance(1);
      out.push_back({Tok::var, std::string(src.substr(start, i - start)), l, k});
    } else if (c == '\'') {
      advance(1);
      std::string text;
      while (i < src.size() && src[i] != '\'') {
        if (src[i] == '\\' && i + 1 < src.size()) advance(1);
        text += src[i];
        advance(1);
      }
      if (i >= src.size()) throw ParseError("unterminated quoted atom", l, k);
      advance(1);
      out.push_back({Tok::quoted, text, l, k});
    } else if (src.substr(i, 2) == ":-") {
      advance(2);
      out.push_back({Tok::punct, ":-", l, k});
    } else if (src.substr(i, 3) == "\xE2\x86\x90") {  // ←
      i += 3;
      ++col;
      out.push_back({Tok::punct, ":-", l, k});
    } else if (std::string_view("()[]|,.").find(c) != std::string_view::npos) {
      advance(1);
      out.push_back({Tok::punct, std::string(1, c), l, k});
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", l, k);
    }
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, Mode mode) : toks_(lex(src)), mode_(mode) {}

  Term term() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::number:
      case Tok::quoted: return Term::constant(t.text);
      case Tok::var: {
        if (t.text == "_") return Term::var("_G" + std::to_string(anon_++));
        if (mode_ == Mode::metarule) return Term::var(t.text, Order::first, Quant::existential);
        return Term::var(t.text);
      }
      case Tok::ident: {
        if (peek_is("(")) {
          next();
          return Term::compound(t.text, args_until(")"));
        }
        if (mode_ == Mode::metarule && t.text.front() != '$') return Term::var(t.text);
        return Term::constant(t.text);
      }
      case Tok::punct:
        if (t.text == "[") return list_rest();
        [[fallthrough]];
      default: fail(t, "expected a term");
    }
  }

  Atom atom() {
    const Token& t = next();
    if (t.kind == Tok::var) {
      if (peek_is("(")) {
        next();
        Quant q = mode_ == Mode::metarule ? Quant::existential : Quant::universal;
        return Atom(Term::var(t.text, Order::second, q), args_until(")"));
      }
      if (mode_ == Mode::metarule) return Atom::atom_var(t.text);
      fail(t, "atom variables are only allowed in metarules");
    }
    if (t.kind == Tok::ident || t.kind == Tok::quoted || t.kind == Tok::number) {
      std::vector<Term> args;
      if (peek_is("(")) {
        next();
        args = args_until(")");
      }
      return Atom(Term::constant(t.text), std::move(args));
    }
    fail(t, "expected an atom");
  }

  Clause clause() {
    Atom head = atom();
    std::vector<Atom> body;
    if (peek_is(":-")) {
      next();
      body.push_back(atom());
      while (peek_is(",")) {
        next();
        body.push_back(atom());
      }
    }
    if (peek_is(".")) next();
    return Clause(std::move(head), std::move(body));
  }

  void expect_end() {
    if (toks_[pos_].kind != Tok::end) fail(toks_[pos_], "unexpected trailing input");
  }

 private:
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool peek_is(std::string_view p) const {
    return toks_[pos_].kind == Tok::punct && toks_[pos_].text == p;
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(msg + (t.kind == Tok::end ? " (end of input)" : " near '" + t.text + "'"), t.line,
                     t.col);
  }
  void expect(std::string_view p) {
    const Token& t = next();
    if (t.kind != Tok::punct || t.text != p) fail(t, "expected '" + std::string(p) + "'");
  }

  std::vector<Term> args_until(std::string_view close) {
    std::vector<Term> args;
    args.push_back(term());
    while (peek_is(",")) {
      next();
      args.push_back(term());
    }
    expect(close);
    return args;
  }

  Term list_rest() {
    if (peek_is("]")) {
      next();
      return Term::constant("[]");
    }
    std::vector<Term> items{term()};
    while (peek_is(",")) {
      next();
      items.push_back(term());
    }
    std::optional<Term> tail;
    if (peek_is("|")) {
      next();
      tail = term();
    }
    expect("]");
    return Term::list(items, tail);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Mode mode_;
  int anon_ = 0;
};

bool plain_symbol(const std::string& s) {
  if (s.empty()) return false;
  if (s == "[]") return true;
  if (std::islower(static_cast<unsigned char>(s[0])) || s[0] == '$') {
    for (char c : s)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$')) return false;
    return true;
  }
  bool digits = true;
  std::size_t start = s[0] == '-' ? 1 : 0;
  if (start == s.size()) return false;
  for (std::size_t i = start; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i])) && s[i] != '.') digits = false;
  return digits;
}

bool is_number(const std::string& s) {
  return !s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-') && plain_symbol(s);
}

void print_symbol(std::ostream& os, const std::string& s, Mode mode) {
  bool quote = !plain_symbol(s) || (mode == Mode::metarule && !is_number(s) && s != "[]" && s[0] != '$');
  if (quote) {
    os << '\'';
    for (char c : s) {
      if (c == '\'' || c == '\\') os << '\\';
      os << c;
    }
    os << '\'';
  } else {
    os << s;
  }
}

// Case carries meaning in both modes, so it is forced on the first letter.
void print_var(std::ostream& os, const Term& v, Mode mode) {
  std::string name = v.name().str();
  bool upper = mode == Mode::object || v.order() != Order::first || v.quant() == Quant::existential;
  if (!name.empty() && std::isalpha(static_cast<unsigned char>(name[0])))
    name[0] = static_cast<char>(upper ? std::toupper(static_cast<unsigned char>(name[0]))
                                      : std::tolower(static_cast<unsigned char>(name[0])));
  os << name;
  if (v.gen() != 0) os << '_' << v.gen();
}

void print_term(std::ostream& os, const Term& t, Mode mode) {
  switch (t.kind()) {
    case Term::Kind::variable: print_var(os, t, mode); return;
    case Term::Kind::constant: print_symbol(os, t.name().str(), mode); return;
    case Term::Kind::compound: break;
  }
  if (t.name().str() == "." && t.arity() == 2) {
    os << '[';
    const Term* cur = &t;
    bool first = true;
    while (cur->is_compound() && cur->name().str() == "." && cur->arity() == 2) {
      if (!first) os << ',';
      first = false;
      print_term(os, cur->args()[0], mode);
      cur = &cur->args()[1];
    }
    if (!(cur->is_constant() && cur->name().str() == "[]")) {
      os << '|';
      print_term(os, *cur, mode);
    }
    os << ']';
    return;
  }
  print_symbol(os, t.name().str(), Mode::object);
  os << '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) os << ',';
    print_term(os, t.args()[i], mode);
  }
  os << ')';
}

void print_atom(std::ostream& os, const Atom& a, Mode mode) {
  if (a.pred().is_var())
    print_var(os, a.pred(), mode);
  else
    print_symbol(os, a.pred().name().str(), Mode::object);
  if (a.arity() == 0) return;
  os << '(';
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (i) os << ',';
    print_term(os, a.args()[i], mode);
  }
  os << ')';
}

}  // namespace

Term parse_term(std::string_view text, Mode mode) {
  Parser p(text, mode);
  Term t = p.term();
  p.expect_end();
  return t;
}

Atom parse_atom(std::string_view text, Mode mode) {
  Parser p(text, mode);
  Atom a = p.atom();
  p.expect_end();
  return a;
}

Clause parse_clause(std::string_view text, Mode mode) {
  Parser p(text, mode);
  Clause c = p.clause();
  p.expect_end();
  return c;
}

std::string to_string(const Term& t, Mode mode) {
  std::ostringstream os;
  print_term(os, t, mode);
  return os.str();
}

std::string to_string(const Atom& a, Mode mode) {
  std::ostringstream os;
  print_atom(os, a, mode);
  return os.str();
}

std::string to_string(const Clause& c, Mode mode) {
  std::ostringstream os;
  if (c.is_definite()) {
    print_atom(os, c.head(), mode);
    auto body = c.body();
    if (!body.empty()) os << " :- ";
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (i) os << ", ";
      print_atom(os, body[i], mode);
    }
    os << '.';
    return os.str();
  }
  os << '{';
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) os << ", ";
    if (!c.literals()[i].positive) os << '~';
    print_atom(os, c.literals()[i].atom, mode);
  }
  os << '}';
  return os.str();
}

std::string to_arrow_string(const Clause& c) {
  std::ostringstream os;
  print_atom(os, c.head(), Mode::metarule);
  auto body = c.body();
  os << "\xE2\x86\x90";
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) os << ',';
    print_atom(os, body[i], Mode::metarule);
  }
  return os.str();
}

}  // namespace mil
