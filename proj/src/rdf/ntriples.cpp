#include "litrank/rdf/ntriples.hpp"

#include <cstdint>
#include <cstdio>

#include "litrank/rdf/input.hpp"
#include "litrank/util/error.hpp"

namespace litrank::rdf {

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Cursor over one line. Every failure throws ParseError with the line number.
class LineReader {
 public:
  LineReader(std::string_view text, std::size_t line_no) : s_(text), line_(line_no) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_, what + " at column " + std::to_string(pos_ + 1));
  }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }

  void skip_ws() {
    while (!at_end() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  // \uXXXX or \UXXXXXXXX after the backslash and marker have been consumed.
  std::uint32_t read_uchar(int digits) {
    if (pos_ + digits > s_.size()) fail("truncated unicode escape");
    std::uint32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      const int v = hex_value(s_[pos_ + i]);
      if (v < 0) fail("bad hex digit in unicode escape");
      cp = (cp << 4) | static_cast<std::uint32_t>(v);
    }
    pos_ += digits;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("invalid code point in escape");
    return cp;
  }

  // Reads an IRIREF into out (escapes decoded). Returns true if the IRI contained
  // characters the grammar forbids but which we tolerate.
  bool read_iri(std::string& out) {
    expect('<');
    out.clear();
    bool lenient = false;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      const char c = s_[pos_];
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '\\') {
        ++pos_;
        const char m = peek();
        if (m == 'u') {
          ++pos_;
          append_utf8(out, read_uchar(4));
        } else if (m == 'U') {
          ++pos_;
          append_utf8(out, read_uchar(8));
        } else {
          // Raw backslash inside an IRI: a dump quirk, kept verbatim.
          out.push_back('\\');
          lenient = true;
        }
        continue;
      }
      const auto u = static_cast<unsigned char>(c);
      if (u < 0x20 || c == '<') fail("illegal character in IRI");
      if (c == ' ' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`') {
        lenient = true;
      }
      out.push_back(c);
      ++pos_;
    }
    if (out.empty()) fail("empty IRI");
    if (!has_scheme(out)) fail("relative IRI '" + out + "'");
    return lenient;
  }

  void read_string_literal(std::string& out) {
    expect('"');
    out.clear();
    while (true) {
      if (at_end()) fail("unterminated string literal");
      const char c = s_[pos_++];
      if (c == '"') return;
      if (c == '\n' || c == '\r') fail("raw line break in literal");
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (at_end()) fail("dangling escape");
      const char e = s_[pos_++];
      switch (e) {
        case 't': out.push_back('\t'); break;
        case 'b': out.push_back('\b'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 'f': out.push_back('\f'); break;
        case '"': out.push_back('"'); break;
        case '\'': out.push_back('\''); break;
        case '\\': out.push_back('\\'); break;
        case 'u': append_utf8(out, read_uchar(4)); break;
        case 'U': append_utf8(out, read_uchar(8)); break;
        default: fail(std::string("unknown escape '\\") + e + "'");
      }
    }
  }

  std::string read_langtag() {
    expect('@');
    const std::size_t start = pos_;
    if (!is_alpha(peek())) fail("empty language tag");
    while (is_alpha(peek())) ++pos_;
    while (peek() == '-') {
      ++pos_;
      if (!is_alpha(peek()) && !is_digit(peek())) fail("bad language tag subtag");
      while (is_alpha(peek()) || is_digit(peek())) ++pos_;
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  void finish() {
    skip_ws();
    expect('.');
    skip_ws();
    if (!at_end() && peek() != '#') fail("trailing content after '.'");
  }

 private:
  static bool has_scheme(std::string_view iri) {
    if (iri.empty() || !is_alpha(iri[0])) return false;
    for (std::size_t i = 1; i < iri.size(); ++i) {
      const char c = iri[i];
      if (c == ':') return true;
      if (!is_alpha(c) && !is_digit(c) && c != '+' && c != '-' && c != '.') return false;
    }
    return false;
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

void append_escaped_iri(std::string& out, std::string_view iri) {
  char buf[8];
  for (const char c : iri) {
    const auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
        c == '^' || c == '`' || c == '\\') {
      std::snprintf(buf, sizeof buf, "\\u%04X", u);
      out += buf;
    } else {
      out.push_back(c);
    }
  }
}

}  // namespace

NTriplesParser::NTriplesParser(InternTable& table, ParseOptions options)
    : table_(table), options_(options) {}

std::optional<Triple> NTriplesParser::parse_line(std::string_view line, std::size_t line_no) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  LineReader r(line, line_no);
  r.skip_ws();
  if (r.at_end() || r.peek() == '#') return std::nullopt;

  // Validate and intern in order, but only intern once the whole line parsed,
  // so malformed lines never grow the table.
  std::string& subject = subject_;
  std::string& predicate = predicate_;
  std::string& object_iri = object_iri_;
  std::string& datatype = datatype_;
  datatype.clear();
  bool lenient = false;

  if (r.peek() == '_') r.fail("blank node subjects are not supported");
  lenient |= r.read_iri(subject);
  r.skip_ws();
  if (r.peek() != '<') r.fail("predicate must be an IRI");
  lenient |= r.read_iri(predicate);
  r.skip_ws();

  Literal literal;
  bool object_is_iri = false;
  switch (r.peek()) {
    case '<':
      lenient |= r.read_iri(object_iri);
      object_is_iri = true;
      break;
    case '"':
      r.read_string_literal(literal.lexical);
      if (r.peek() == '@') {
        literal.lang = r.read_langtag();
      } else if (r.peek() == '^') {
        r.expect('^');
        r.expect('^');
        lenient |= r.read_iri(datatype);
      }
      break;
    case '_':
      r.fail("blank node objects are not supported");
    default:
      r.fail("expected IRI or literal object");
  }
  r.finish();

  if (lenient) {
    if (options_.strict) throw ParseError(line_no, "IRI contains characters outside the grammar");
    ++stats_.lenient_iris;
  }

  Triple t;
  t.subject = table_.intern(subject);
  t.predicate = table_.intern(predicate);
  if (object_is_iri) {
    t.object = Iri{table_.intern(object_iri)};
  } else {
    if (!datatype.empty()) literal.datatype = table_.intern(datatype);
    t.object = std::move(literal);
  }
  return t;
}

std::size_t NTriplesParser::parse_stream(std::istream& in, const TripleSink& sink) {
  std::size_t emitted = 0;
  std::size_t line_no = 0;
  std::string& line = scratch_;
  while (std::getline(in, line)) {
    ++line_no;
    ++stats_.lines;
    try {
      if (auto t = parse_line(line, line_no)) {
        sink(*t);
        ++emitted;
        ++stats_.triples;
      }
    } catch (const ParseError& e) {
      if (options_.strict) throw;
      ++stats_.malformed;
      if (stats_.errors.size() < options_.max_recorded_errors) {
        stats_.errors.push_back({e.line(), e.what()});
      }
    }
  }
  return emitted;
}

std::size_t parse_stream(std::istream& in, InternTable& table, const TripleSink& sink,
                         const ParseOptions& options, ParseStats* stats) {
  DecodedInput decoded(in);
  NTriplesParser parser(table, options);
  const auto n = parser.parse_stream(decoded.stream(), sink);
  if (stats) *stats = parser.stats();
  return n;
}

std::size_t parse_file(const std::filesystem::path& path, InternTable& table,
                       const TripleSink& sink, const ParseOptions& options, ParseStats* stats) {
  InputFile file(path);
  NTriplesParser parser(table, options);
  const auto n = parser.parse_stream(file.stream(), sink);
  if (stats) *stats = parser.stats();
  return n;
}

std::string iri_to_ntriples(std::string_view iri) {
  std::string out;
  out.reserve(iri.size() + 2);
  out.push_back('<');
  append_escaped_iri(out, iri);
  out.push_back('>');
  return out;
}

std::string literal_to_ntriples(const Literal& lit, const InternTable& table) {
  std::string out;
  out.reserve(lit.lexical.size() + 2);
  out.push_back('"');
  for (const char c : lit.lexical) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  if (lit.lang) {
    out.push_back('@');
    out += *lit.lang;
  } else if (lit.datatype) {
    out += "^^";
    out += iri_to_ntriples(table.text(*lit.datatype));
  }
  return out;
}

std::string to_ntriples(const Triple& t, const InternTable& table) {
  std::string out = iri_to_ntriples(table.text(t.subject));
  out.push_back(' ');
  out += iri_to_ntriples(table.text(t.predicate));
  out.push_back(' ');
  if (const auto* lit = as_literal(t.object)) {
    out += literal_to_ntriples(*lit, table);
  } else {
    out += iri_to_ntriples(table.text(std::get<Iri>(t.object).id));
  }
  out += " .";
  return out;
}

}  // namespace litrank::rdf
