#include "sortedlp/ntriples.hpp"

#include <cctype>

#include "sortedlp/errors.hpp"

namespace sortedlp {
namespace {

void appendUtf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t lineNo) : s_(line), line_(lineNo) {}

  bool atEnd() {
    skipSpace();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  NTriple triple() {
    NTriple t;
    t.line = line_;
    t.subject = node(false);
    if (t.subject.kind == RdfNode::Kind::Literal) fail("subject cannot be a literal");
    t.predicate = node(false);
    if (!t.predicate.isIri()) fail("predicate must be an IRI");
    t.object = node(true);
    skipSpace();
    expect('.');
    if (!atEnd()) fail("unexpected content after '.'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, pos_ + 1, msg); }

  void skipSpace() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }

  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  unsigned long hex(std::size_t digits) {
    if (pos_ + digits > s_.size()) fail("truncated unicode escape");
    unsigned long v = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      const char c = s_[pos_++];
      v <<= 4;
      if (c >= '0' && c <= '9') {
        v |= static_cast<unsigned long>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        v |= static_cast<unsigned long>(c - 'a' + 10);
      } else if (c >= 'A' && c <= 'F') {
        v |= static_cast<unsigned long>(c - 'A' + 10);
      } else {
        --pos_;
        fail("bad hex digit in escape");
      }
    }
    return v;
  }

  std::string iri() {
    expect('<');
    std::string out;
    while (true) {
      if (pos_ >= s_.size()) fail("unterminated IRI");
      const char c = s_[pos_];
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == ' ' || c == '<' || c == '"') fail("invalid character in IRI");
      if (c == '\\') {
        ++pos_;
        if (pos_ >= s_.size()) fail("unterminated escape");
        const char e = s_[pos_++];
        if (e == 'u') {
          appendUtf8(out, hex(4));
        } else if (e == 'U') {
          appendUtf8(out, hex(8));
        } else {
          --pos_;
          fail("invalid escape in IRI");
        }
        continue;
      }
      out += c;
      ++pos_;
    }
    if (out.empty()) fail("empty IRI");
    return out;
  }

  RdfNode node(bool allowLiteral) {
    skipSpace();
    if (pos_ >= s_.size()) fail("unexpected end of line");
    const char c = s_[pos_];
    if (c == '<') return RdfNode{RdfNode::Kind::Iri, iri()};
    if (c == '_') {
      const std::size_t start = pos_;
      ++pos_;
      expect(':');
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                  s_[pos_] == '-' || s_[pos_] == '.')) {
        ++pos_;
      }
      // A trailing '.' belongs to the statement terminator.
      while (pos_ > start + 2 && s_[pos_ - 1] == '.') --pos_;
      if (pos_ == start + 2) fail("empty blank node label");
      return RdfNode{RdfNode::Kind::Blank, std::string(s_.substr(start, pos_ - start))};
    }
    if (c == '"') {
      if (!allowLiteral) fail("literal not allowed here");
      return RdfNode{RdfNode::Kind::Literal, literal()};
    }
    fail("expected IRI, blank node or literal");
  }

  std::string literal() {
    expect('"');
    std::string out;
    while (true) {
      if (pos_ >= s_.size()) fail("unterminated literal");
      const char c = s_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ >= s_.size()) fail("unterminated escape");
      const char e = s_[pos_++];
      switch (e) {
        case 't': out += '\t'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case '"': out += '"'; break;
        case '\'': out += '\''; break;
        case '\\': out += '\\'; break;
        case 'u': appendUtf8(out, hex(4)); break;
        case 'U': appendUtf8(out, hex(8)); break;
        default:
          --pos_;
          fail("invalid escape in literal");
      }
    }
    if (pos_ < s_.size() && s_[pos_] == '@') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-')) ++pos_;
      if (pos_ == start) fail("empty language tag");
    } else if (pos_ + 1 < s_.size() && s_[pos_] == '^' && s_[pos_ + 1] == '^') {
      pos_ += 2;
      iri();
    }
    return out;
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<NTriple> parseNTriples(std::string_view text) {
  std::vector<NTriple> out;
  std::size_t lineNo = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    const std::string_view line =
        text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++lineNo;
    LineParser p(line, lineNo);
    if (!p.atEnd()) out.push_back(p.triple());
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace sortedlp
