#include "sortedlp/parser.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>

#include "sortedlp/errors.hpp"
#include "sortedlp/type_registry.hpp"

namespace sortedlp {
namespace {

enum class Tok {
  End,
  Ident,   // lowercase-initial identifier
  VarTok,  // uppercase or '_' initial identifier
  Number,
  String,
  Iri,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Bar,
  Comma,
  Dot,
  Colon,
  Neck,  // :-
  Op,    // > < >= =< =
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

bool isIdentChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : s_(src) {}

  Token next() {
    skipSpaceAndComments();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= s_.size()) return t;
    const char c = s_[pos_];
    if (std::islower(static_cast<unsigned char>(c))) {
      t.kind = Tok::Ident;
      t.text = takeWhile(isIdentChar);
      return t;
    }
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::VarTok;
      t.text = takeWhile(isIdentChar);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
      t.kind = Tok::Number;
      t.text = number();
      return t;
    }
    if (c == '"' || c == '\'') {
      t.kind = Tok::String;
      t.text = quoted(c, t);
      return t;
    }
    if (c == '<') {
      if (auto iri = tryIri()) {
        t.kind = Tok::Iri;
        t.text = *iri;
        return t;
      }
    }
    auto punct = [&](Tok k, std::size_t len) {
      t.kind = k;
      t.text = std::string(s_.substr(pos_, len));
      advance(len);
      return t;
    };
    switch (c) {
      case '(': return punct(Tok::LParen, 1);
      case ')': return punct(Tok::RParen, 1);
      case '[': return punct(Tok::LBracket, 1);
      case ']': return punct(Tok::RBracket, 1);
      case '|': return punct(Tok::Bar, 1);
      case ',': return punct(Tok::Comma, 1);
      case '.': return punct(Tok::Dot, 1);
      case ':': return peek(1) == '-' ? punct(Tok::Neck, 2) : punct(Tok::Colon, 1);
      case '>': return peek(1) == '=' ? punct(Tok::Op, 2) : punct(Tok::Op, 1);
      case '<': return punct(Tok::Op, 1);
      case '=': return peek(1) == '<' ? punct(Tok::Op, 2) : punct(Tok::Op, 1);
      default: break;
    }
    throw ParseError(line_, column_, std::string("unexpected character '") + c + "'");
  }

 private:
  char peek(std::size_t ahead) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i) {
      if (s_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
      ++pos_;
    }
  }

  void skipSpaceAndComments() {
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else if (c == '%') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance(1);
      } else if (c == '/' && peek(1) == '*') {
        const std::size_t line = line_;
        const std::size_t col = column_;
        advance(2);
        while (pos_ < s_.size() && !(s_[pos_] == '*' && peek(1) == '/')) advance(1);
        if (pos_ >= s_.size()) throw ParseError(line, col, "unterminated block comment");
        advance(2);
      } else {
        break;
      }
    }
  }

  template <class Pred>
  std::string takeWhile(Pred pred) {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && pred(s_[pos_])) advance(1);
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string number() {
    const std::size_t start = pos_;
    if (s_[pos_] == '-') advance(1);
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) advance(1);
    if (pos_ + 1 < s_.size() && s_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
      advance(1);
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) advance(1);
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string quoted(char quote, const Token& at) {
    advance(1);
    std::string out;
    while (true) {
      if (pos_ >= s_.size()) throw ParseError(at.line, at.column, "unterminated string");
      const char c = s_[pos_];
      if (c == quote) {
        advance(1);
        return out;
      }
      if (c == '\n') throw ParseError(line_, column_, "newline in string");
      if (c == '\\') {
        advance(1);
        if (pos_ >= s_.size()) throw ParseError(at.line, at.column, "unterminated string");
        const char e = s_[pos_];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '\\': out += '\\'; break;
          case '"': out += '"'; break;
          case '\'': out += '\''; break;
          default: throw ParseError(line_, column_, std::string("invalid escape '\\") + e + "'");
        }
        advance(1);
        continue;
      }
      out += c;
      advance(1);
    }
  }

  // <scheme:rest> with no whitespace, quotes or angle brackets inside.
  std::optional<std::string> tryIri() {
    std::size_t i = pos_ + 1;
    if (i >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[i]))) return std::nullopt;
    while (i < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i])) || s_[i] == '+' || s_[i] == '.' ||
                             s_[i] == '-')) {
      ++i;
    }
    if (i >= s_.size() || s_[i] != ':') return std::nullopt;
    ++i;
    while (i < s_.size() && s_[i] != '>') {
      const char c = s_[i];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '"') return std::nullopt;
      ++i;
    }
    if (i >= s_.size()) return std::nullopt;
    std::string iri(s_.substr(pos_ + 1, i - pos_ - 1));
    advance(i + 1 - pos_);
    return iri;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

struct UnresolvedPrefix {
  std::string token;
  std::size_t line;
  std::size_t column;
};

struct VarInfo {
  TypeRef type;
  std::size_t line;
  std::size_t column;
};

class Parser {
 public:
  Parser(std::string_view text, const PrefixTable& prefixes, PrefixTable* mutablePrefixes)
      : lexer_(text), prefixes_(prefixes), mutablePrefixes_(mutablePrefixes) {
    tok_ = lexer_.next();
  }

  Script script() {
    Script out;
    while (tok_.kind != Tok::End) {
      clauseVars_.clear();
      if (tok_.kind == Tok::Neck) {
        out.program.queries.push_back(queryClause());
        continue;
      }
      const Token start = tok_;
      Literal head = literal(false);
      if (tok_.kind == Tok::Dot && !head.negated) {
        if (auto d = directive(head, start)) {
          advance();
          out.directives.push_back(std::move(*d));
          continue;
        }
      }
      if (isComparisonPredicate(head.predicate)) fail(start, "a comparison cannot be a clause head");
      Clause c;
      c.head = std::move(head);
      if (tok_.kind == Tok::Neck) {
        advance();
        c.body = conjunction();
      }
      expect(Tok::Dot, "'.' at end of clause");
      out.program.clauses.push_back(finishClause(std::move(c)));
    }
    reportUnresolved();
    return out;
  }

  Clause query() {
    clauseVars_.clear();
    Clause c;
    if (tok_.kind == Tok::Neck) {
      c = queryClause();
    } else {
      c.body = conjunction();
      expect(Tok::Dot, "'.' at end of query");
      c = finishClause(std::move(c));
    }
    if (tok_.kind != Tok::End) fail(tok_, "unexpected input after query");
    reportUnresolved();
    return c;
  }

 private:
  [[noreturn]] static void fail(const Token& at, const std::string& msg) { throw ParseError(at.line, at.column, msg); }

  void advance() { tok_ = lexer_.next(); }

  Token expect(Tok kind, const char* what) {
    if (tok_.kind != kind) {
      fail(tok_, std::string("expected ") + what + (tok_.kind == Tok::End ? " but reached end of input"
                                                                          : ", found '" + tok_.text + "'"));
    }
    Token t = tok_;
    advance();
    return t;
  }

  Clause queryClause() {
    expect(Tok::Neck, "':-'");
    const Token name = expect(Tok::Ident, "solve or eval");
    if (name.text != "solve" && name.text != "eval") fail(name, "expected solve(...) or eval(...)");
    expect(Tok::LParen, "'('");
    Clause c;
    c.body = conjunction();
    expect(Tok::RParen, "')'");
    expect(Tok::Dot, "'.' at end of query");
    return finishClause(std::move(c));
  }

  std::vector<Literal> conjunction() {
    std::vector<Literal> body;
    body.push_back(literal(true));
    while (tok_.kind == Tok::Comma) {
      advance();
      body.push_back(literal(true));
    }
    return body;
  }

  Literal literal(bool allowNot) {
    if (tok_.kind == Tok::Ident && tok_.text == "not") {
      const Token at = tok_;
      advance();
      if (tok_.kind == Tok::LParen) {
        if (!allowNot) fail(at, "not(...) is only allowed in rule bodies and queries");
        advance();
        Literal inner = literal(false);
        expect(Tok::RParen, "')' closing not(");
        inner.defaultNegated = true;
        return inner;
      }
      return atomFrom(Term::constant("not"), at);
    }
    if (tok_.kind == Tok::Ident && tok_.text == "neg") {
      const Token at = tok_;
      advance();
      if (tok_.kind == Tok::LParen) {
        advance();
        Literal inner = atom();
        expect(Tok::RParen, "')' closing neg(");
        if (isComparisonPredicate(inner.predicate)) fail(at, "neg(...) cannot wrap a comparison");
        inner.negated = true;
        return inner;
      }
      return atomFrom(Term::constant("neg"), at);
    }
    return atom();
  }

  Literal atom() {
    const Token start = tok_;
    Term lhs = term();
    return atomFrom(std::move(lhs), start);
  }

  Literal atomFrom(Term lhs, const Token& start) {
    if (tok_.kind == Tok::Op) {
      const std::string op = tok_.text;
      advance();
      Term rhs = term();
      return Literal(op, {std::move(lhs), std::move(rhs)});
    }
    if (lhs.isVariable() || lhs.isTyped() || lhs.name().str() == kNilName || lhs.name().str() == kConsName) {
      fail(start, "expected an atom");
    }
    if (start.kind != Tok::Ident) fail(start, "predicate names must start with a lowercase letter");
    return Literal(lhs.name(), std::vector<Term>(lhs.args().begin(), lhs.args().end()));
  }

  Term term() {
    const Token t = tok_;
    switch (t.kind) {
      case Tok::VarTok: {
        advance();
        std::string name = t.text;
        if (name == "_") name = "_G" + std::to_string(++anonymous_);
        TypeRef type;
        if (tok_.kind == Tok::Colon) {
          advance();
          type = typeToken();
        }
        return variable(name, type, t);
      }
      case Tok::Number:
      case Tok::String:
        advance();
        return Term::constant(t.text);
      case Tok::Iri: {
        advance();
        if (tok_.kind == Tok::Colon) {
          advance();
          return Term::constant(constantName(), TypeRef(t.text));
        }
        return Term::constant(t.text);
      }
      case Tok::Ident: {
        advance();
        if (tok_.kind == Tok::LParen) {
          advance();
          std::vector<Term> args;
          args.push_back(term());
          while (tok_.kind == Tok::Comma) {
            advance();
            args.push_back(term());
          }
          expect(Tok::RParen, "')'");
          return Term::compound(t.text, std::move(args));
        }
        if (tok_.kind == Tok::Colon) {
          advance();
          const TypeRef type = resolveType(t);
          return Term::constant(constantName(), type);
        }
        return Term::constant(t.text);
      }
      case Tok::LBracket:
        return list();
      default:
        fail(t, t.kind == Tok::End ? "unexpected end of input, expected a term"
                                   : "unexpected '" + t.text + "', expected a term");
    }
  }

  Term list() {
    expect(Tok::LBracket, "'['");
    std::vector<Term> elements;
    std::optional<Term> tail;
    if (tok_.kind != Tok::RBracket) {
      elements.push_back(term());
      while (tok_.kind == Tok::Comma) {
        advance();
        elements.push_back(term());
      }
      if (tok_.kind == Tok::Bar) {
        advance();
        tail = term();
      }
    }
    expect(Tok::RBracket, "']'");
    return Term::list(std::move(elements), std::move(tail));
  }

  std::string constantName() {
    const Token t = tok_;
    if (t.kind == Tok::Ident || t.kind == Tok::VarTok || t.kind == Tok::Number || t.kind == Tok::String) {
      advance();
      return t.text;
    }
    fail(t, "expected a constant name after ':'");
  }

  TypeRef typeToken() {
    const Token t = tok_;
    if (t.kind == Tok::Iri) {
      advance();
      return TypeRef(t.text);
    }
    if (t.kind == Tok::Ident) {
      advance();
      return resolveType(t);
    }
    fail(t, "expected a type (ns_Local or <iri>)");
  }

  TypeRef resolveType(const Token& t) {
    const auto underscore = t.text.find('_');
    if (underscore == std::string::npos || underscore == 0 || underscore + 1 == t.text.size()) {
      fail(t, "type '" + t.text + "' must have the form prefix_Local");
    }
    if (auto iri = prefixes().expand(t.text)) return TypeRef(*iri);
    unresolved_.push_back(UnresolvedPrefix{t.text, t.line, t.column});
    return TypeRef("urn:sortedlp:unresolved:" + t.text);
  }

  const PrefixTable& prefixes() const { return mutablePrefixes_ ? *mutablePrefixes_ : prefixes_; }

  Term variable(const std::string& name, TypeRef type, const Token& at) {
    const Symbol sym = Symbol::intern(name);
    auto it = clauseVars_.find(sym);
    if (!type.isTop()) {
      if (it == clauseVars_.end() || it->second.type.isTop()) {
        clauseVars_[sym] = VarInfo{type, at.line, at.column};
      } else if (it->second.type != type) {
        fail(at, "variable " + name + " is annotated with <" + std::string(type.iri()) + "> but was <" +
                     std::string(it->second.type.iri()) + "> at line " + std::to_string(it->second.line) +
                     ", column " + std::to_string(it->second.column));
      }
    } else if (it == clauseVars_.end()) {
      clauseVars_[sym] = VarInfo{type, at.line, at.column};
    }
    return Term::variable(sym.str(), type);
  }

  Term inheritTypes(const Term& t) const {
    switch (t.kind()) {
      case Term::Kind::Variable: {
        auto it = clauseVars_.find(t.name());
        if (it != clauseVars_.end() && it->second.type != t.type()) return t.withType(it->second.type);
        return t;
      }
      case Term::Kind::Compound: {
        std::vector<Term> args;
        for (const Term& a : t.args()) args.push_back(inheritTypes(a));
        return Term::compound(t.name(), std::move(args), t.type());
      }
      case Term::Kind::Constant:
        return t;
    }
    return t;
  }

  Clause finishClause(Clause c) const {
    auto fix = [&](Literal& l) {
      for (Term& a : l.args) a = inheritTypes(a);
    };
    if (c.head) fix(*c.head);
    for (Literal& l : c.body) fix(l);
    return c;
  }

  static std::string textArgument(const Term& t, const Token& at, const char* what) {
    if (!t.isConstant() || t.isTyped()) fail(at, std::string(what) + " must be a constant or string");
    return std::string(t.name().str());
  }

  TypeRef typeArgument(const Term& t, const Token& at) {
    if (!t.isConstant() || t.isTyped()) fail(at, "sort types must be prefix_Local names or <iri>");
    const std::string name(t.name().str());
    if (looksLikeIri(name) && name.find('_') == std::string::npos) return TypeRef(name);
    if (auto iri = prefixes().expand(name)) return TypeRef(*iri);
    if (looksLikeIri(name)) return TypeRef(name);
    unresolved_.push_back(UnresolvedPrefix{name, at.line, at.column});
    return TypeRef("urn:sortedlp:unresolved:" + name);
  }

  std::optional<Directive> directive(const Literal& head, const Token& at) {
    const std::string_view pred = head.predicate.str();
    Directive d;
    d.line = at.line;
    if (pred == "import" && head.arity() == 1) {
      d.kind = Directive::Kind::Import;
      d.argument = textArgument(head.args[0], at, "import location");
      return d;
    }
    if (pred == "reasoner" && head.arity() == 1) {
      d.kind = Directive::Kind::Reasoner;
      d.argument = textArgument(head.args[0], at, "reasoner mode");
      if (!classifyReasonerMode(d.argument)) fail(at, "unknown reasoner \"" + d.argument + "\"");
      return d;
    }
    if (pred == "prefix" && head.arity() == 2) {
      d.kind = Directive::Kind::Prefix;
      d.argument = textArgument(head.args[0], at, "prefix abbreviation");
      d.iri = textArgument(head.args[1], at, "prefix IRI");
      if (!mutablePrefixes_) fail(at, "prefix directives are not allowed here");
      try {
        mutablePrefixes_->declare(d.argument, d.iri);
      } catch (const Error& e) {
        fail(at, e.what());
      }
      return d;
    }
    if (pred == "sort" && head.arity() == 4) {
      d.kind = Directive::Kind::Sort;
      d.functor = Symbol::intern(textArgument(head.args[0], at, "sort functor"));
      const Term& arity = head.args[1];
      const std::string arityText = textArgument(arity, at, "sort arity");
      if (arityText.empty() || arityText.find_first_not_of("0123456789") != std::string::npos) {
        fail(at, "sort arity must be a non-negative integer");
      }
      d.arity = std::stoul(arityText);
      Term cell = head.args[2];
      while (cell.isCompound() && cell.name().str() == kConsName && cell.arity() == 2) {
        d.argumentTypes.push_back(typeArgument(cell.args()[0], at));
        cell = cell.args()[1];
      }
      if (!cell.isConstant() || cell.name().str() != kNilName) fail(at, "sort argument types must be a list");
      d.result = typeArgument(head.args[3], at);
      if (d.argumentTypes.size() != d.arity) fail(at, "sort arity does not match the number of argument types");
      return d;
    }
    return std::nullopt;
  }

  void reportUnresolved() const {
    if (unresolved_.empty()) return;
    std::ostringstream msg;
    msg << "unknown namespace prefix in";
    for (std::size_t i = 0; i < unresolved_.size(); ++i) {
      const auto& u = unresolved_[i];
      msg << (i ? ", " : " ") << "'" << u.token << "' (line " << u.line << ", column " << u.column << ")";
    }
    throw ParseError(unresolved_.front().line, unresolved_.front().column, msg.str());
  }

  Lexer lexer_;
  Token tok_;
  const PrefixTable& prefixes_;
  PrefixTable* mutablePrefixes_;
  std::map<Symbol, VarInfo> clauseVars_;
  std::vector<UnresolvedPrefix> unresolved_;
  std::size_t anonymous_ = 0;
};

bool isBareName(std::string_view name) {
  if (name.empty()) return false;
  if (std::islower(static_cast<unsigned char>(name.front()))) {
    for (char c : name) {
      if (!isIdentChar(c)) return false;
    }
    return true;
  }
  std::size_t i = name.front() == '-' ? 1 : 0;
  if (i >= name.size()) return false;
  std::size_t digits = 0;
  while (i < name.size() && std::isdigit(static_cast<unsigned char>(name[i]))) {
    ++i;
    ++digits;
  }
  if (digits == 0) return false;
  if (i == name.size()) return true;
  if (name[i] != '.') return false;
  ++i;
  std::size_t fraction = 0;
  while (i < name.size() && std::isdigit(static_cast<unsigned char>(name[i]))) {
    ++i;
    ++fraction;
  }
  return fraction > 0 && i == name.size();
}

std::string quoteName(std::string_view name) {
  if (isBareName(name)) return std::string(name);
  std::string out = "\"";
  for (char c : name) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

// Typed constant names may also be written as bare variable-style tokens.
std::string quoteTypedName(std::string_view name) {
  if (!name.empty() && std::isupper(static_cast<unsigned char>(name.front()))) {
    bool ok = true;
    for (char c : name) ok = ok && isIdentChar(c);
    if (ok) return std::string(name);
  }
  return quoteName(name);
}

bool isNil(const Term& t) { return t.isConstant() && !t.isTyped() && t.name().str() == kNilName; }
bool isCons(const Term& t) {
  return t.isCompound() && t.arity() == 2 && t.name().str() == kConsName && !t.isTyped();
}

}  // namespace

bool isComparisonPredicate(Symbol predicate) {
  const std::string_view p = predicate.str();
  return p == ">" || p == "<" || p == ">=" || p == "=<" || p == "=";
}

Clause propagateVariableTypes(Clause c) {
  std::map<Var, TypeRef> types;
  auto collect = [&](const Term& t, auto&& self) -> void {
    if (t.isVariable() && t.isTyped()) {
      auto [it, inserted] = types.emplace(t.var(), t.type());
      if (!inserted && it->second != t.type()) {
        throw Error("variable " + std::string(t.name().str()) + " is annotated with both <" +
                    std::string(it->second.iri()) + "> and <" + std::string(t.type().iri()) + ">");
      }
    }
    for (const Term& a : t.args()) self(a, self);
  };
  auto install = [&](const Term& t, auto&& self) -> Term {
    if (t.isVariable()) {
      auto it = types.find(t.var());
      return it == types.end() ? t : t.withType(it->second);
    }
    if (!t.isCompound()) return t;
    std::vector<Term> args;
    for (const Term& a : t.args()) args.push_back(self(a, self));
    return Term::compound(t.name(), std::move(args), t.type());
  };
  if (c.head) {
    for (const Term& a : c.head->args) collect(a, collect);
  }
  for (const Literal& l : c.body) {
    for (const Term& a : l.args) collect(a, collect);
  }
  if (c.head) {
    for (Term& a : c.head->args) a = install(a, install);
  }
  for (Literal& l : c.body) {
    for (Term& a : l.args) a = install(a, install);
  }
  return c;
}

Script parseProgram(std::string_view text, PrefixTable& prefixes) {
  Parser p(text, prefixes, &prefixes);
  return p.script();
}

Clause parseQuery(std::string_view text, const PrefixTable& prefixes) {
  Parser p(text, prefixes, nullptr);
  return p.query();
}

std::string printType(TypeRef type, const PrefixTable& prefixes) {
  if (auto q = prefixes.compact(type.iri())) return *q;
  return "<" + std::string(type.iri()) + ">";
}

std::string printTerm(const Term& t, const PrefixTable& prefixes) {
  switch (t.kind()) {
    case Term::Kind::Variable: {
      std::string out(t.name().str());
      if (t.isTyped()) out += ":" + printType(t.type(), prefixes);
      return out;
    }
    case Term::Kind::Constant:
      if (t.isTyped()) return printType(t.type(), prefixes) + ":" + quoteTypedName(t.name().str());
      if (isNil(t)) return "[]";
      return quoteName(t.name().str());
    case Term::Kind::Compound: {
      if (isCons(t)) {
        std::string out = "[";
        Term cell = t;
        bool first = true;
        while (isCons(cell)) {
          if (!first) out += ", ";
          first = false;
          out += printTerm(cell.args()[0], prefixes);
          cell = cell.args()[1];
        }
        if (!isNil(cell)) out += " | " + printTerm(cell, prefixes);
        return out + "]";
      }
      std::string out = quoteName(t.name().str()) + "(";
      for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i) out += ", ";
        out += printTerm(t.args()[i], prefixes);
      }
      return out + ")";
    }
  }
  return {};
}

std::string printLiteral(const Literal& lit, const PrefixTable& prefixes) {
  std::string atom;
  if (isComparisonPredicate(lit.predicate) && lit.arity() == 2) {
    atom = printTerm(lit.args[0], prefixes) + " " + std::string(lit.predicate.str()) + " " +
           printTerm(lit.args[1], prefixes);
  } else {
    atom = std::string(lit.predicate.str());
    if (!lit.args.empty()) {
      atom += "(";
      for (std::size_t i = 0; i < lit.args.size(); ++i) {
        if (i) atom += ", ";
        atom += printTerm(lit.args[i], prefixes);
      }
      atom += ")";
    }
  }
  if (lit.negated) atom = "neg(" + atom + ")";
  if (lit.defaultNegated) atom = "not(" + atom + ")";
  return atom;
}

namespace {
std::string printBody(const std::vector<Literal>& body, const PrefixTable& prefixes) {
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out += ", ";
    out += printLiteral(body[i], prefixes);
  }
  return out;
}
}  // namespace

std::string printClause(const Clause& c, const PrefixTable& prefixes) {
  if (c.isGoal()) return ":- solve(" + printBody(c.body, prefixes) + ").";
  std::string out = printLiteral(*c.head, prefixes);
  if (!c.body.empty()) out += " :- " + printBody(c.body, prefixes);
  return out + ".";
}

std::string printDirective(const Directive& d, const PrefixTable& prefixes) {
  switch (d.kind) {
    case Directive::Kind::Import:
      return "import(" + quoteName(d.argument) + ").";
    case Directive::Kind::Reasoner:
      return "reasoner(\"" + d.argument + "\").";
    case Directive::Kind::Prefix:
      return "prefix(" + d.argument + ", " + quoteName(d.iri) + ").";
    case Directive::Kind::Sort: {
      std::string out = "sort(" + quoteName(d.functor.str()) + ", " + std::to_string(d.arity) + ", [";
      for (std::size_t i = 0; i < d.argumentTypes.size(); ++i) {
        if (i) out += ", ";
        out += printType(d.argumentTypes[i], prefixes);
      }
      return out + "], " + printType(d.result, prefixes) + ").";
    }
  }
  return {};
}

std::string printScript(const Script& s, const PrefixTable& prefixes) {
  std::string out;
  for (const Directive& d : s.directives) out += printDirective(d, prefixes) + "\n";
  for (const Clause& c : s.program.clauses) out += printClause(c, prefixes) + "\n";
  for (const Clause& q : s.program.queries) out += printClause(q, prefixes) + "\n";
  return out;
}

void checkProgramTypes(const Program& program, const TypeRegistry& registry) {
  std::map<std::string, std::pair<TypeRef, std::string>> annotations;  // constant -> first annotation
  auto visit = [&](const Term& t, auto&& self) -> void {
    if (t.isCompound()) {
      for (const Term& a : t.args()) self(a, self);
      return;
    }
    if (!t.isTyped()) return;
    if (!registry.knows(t.type())) throw UnknownTypeError(std::string(t.type().iri()));
    if (!t.isConstant()) return;
    const std::string name = registry.prefixes().resolveName(t.name().str());
    for (TypeRef asserted : registry.assertedTypes(name)) {
      if (registry.areDisjoint(t.type(), asserted)) {
        throw InconsistencyError("constant " + std::string(t.name().str()) + " is annotated <" +
                                 std::string(t.type().iri()) + "> but is asserted into disjoint class <" +
                                 std::string(asserted.iri()) + ">");
      }
    }
    auto [it, inserted] = annotations.emplace(name, std::make_pair(t.type(), std::string(t.name().str())));
    if (!inserted && it->second.first != t.type() && registry.areDisjoint(t.type(), it->second.first)) {
      throw InconsistencyError("constant " + std::string(t.name().str()) + " is annotated with disjoint classes <" +
                               std::string(it->second.first.iri()) + "> and <" + std::string(t.type().iri()) +
                               ">");
    }
  };
  auto visitLiteral = [&](const Literal& l) {
    for (const Term& a : l.args) visit(a, visit);
  };
  for (const Clause& c : program.clauses) {
    if (c.head) visitLiteral(*c.head);
    for (const Literal& l : c.body) visitLiteral(l);
  }
  for (const Clause& q : program.queries) {
    for (const Literal& l : q.body) visitLiteral(l);
  }
}

}  // namespace sortedlp
