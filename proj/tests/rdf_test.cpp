#include <gtest/gtest.h>

#include <boost/iostreams/copy.hpp>
#include <boost/iostreams/filter/bzip2.hpp>
#include <boost/iostreams/filter/gzip.hpp>
#include <boost/iostreams/filter/lzma.hpp>
#include <boost/iostreams/filter/zstd.hpp>
#include <boost/iostreams/filtering_stream.hpp>
#include <json.hpp>

#include <algorithm>
#include <random>
#include <sstream>
#include <streambuf>

#include "litrank/rdf/input.hpp"
#include "litrank/rdf/ntriples.hpp"
#include "litrank/util/error.hpp"
#include "support.hpp"

using namespace litrank;
using namespace litrank::rdf;
using testing_support::fixture;

namespace {

std::vector<Triple> parse_all(const std::string& text, InternTable& table, ParseStats* stats = nullptr,
                              ParseOptions opts = {}) {
  std::istringstream in(text);
  std::vector<Triple> out;
  parse_stream(in, table, [&](const Triple& t) { out.push_back(t); }, opts, stats);
  return out;
}

Triple parse_one(const std::string& line, InternTable& table) {
  NTriplesParser p(table);
  auto t = p.parse_line(line, 1);
  EXPECT_TRUE(t.has_value()) << line;
  return *t;
}

std::string compress(const std::string& data, Compression c) {
  namespace io = boost::iostreams;
  std::string out;
  io::filtering_ostream os;
  switch (c) {
    case Compression::gzip: os.push(io::gzip_compressor()); break;
    case Compression::bzip2: os.push(io::bzip2_compressor()); break;
    case Compression::xz: os.push(io::lzma_compressor()); break;
    case Compression::zstd: os.push(io::zstd_compressor()); break;
    case Compression::none: break;
  }
  os.push(io::back_inserter(out));
  os << data;
  os.reset();
  return out;
}

std::string sample_document(int lines) {
  std::string s = "# generated\n";
  for (int i = 0; i < lines; ++i) {
    s += "<http://example.org/s" + std::to_string(i % 97) + "> <http://example.org/p> \"v" +
         std::to_string(i) + "\"@en .\n";
  }
  return s;
}

}  // namespace

TEST(NTriples, MinimalTriple) {
  InternTable t;
  const auto tr = parse_one("<http://a> <http://p> <http://b> .", t);
  EXPECT_EQ(t.text(tr.subject), "http://a");
  EXPECT_EQ(t.text(tr.predicate), "http://p");
  ASSERT_TRUE(is_iri(tr.object));
  EXPECT_EQ(t.text(*iri_id(tr.object)), "http://b");
}

TEST(NTriples, TypedLiteral) {
  InternTable t;
  const auto tr = parse_one(
      "<http://a> <http://p> \"1820\"^^<http://www.w3.org/2001/XMLSchema#integer> .", t);
  const auto* lit = as_literal(tr.object);
  ASSERT_NE(lit, nullptr);
  EXPECT_EQ(lit->lexical, "1820");
  EXPECT_FALSE(lit->lang);
  ASSERT_TRUE(lit->datatype);
  EXPECT_EQ(t.text(*lit->datatype), "http://www.w3.org/2001/XMLSchema#integer");
}

TEST(NTriples, LanguageTaggedLiteral) {
  InternTable t;
  const auto tr = parse_one("<http://a> <http://p> \"colour\"@en-GB .", t);
  const auto* lit = as_literal(tr.object);
  ASSERT_NE(lit, nullptr);
  EXPECT_EQ(lit->lang, "en-GB");
  EXPECT_FALSE(lit->datatype);
}

TEST(NTriples, CommentOnlyInputYieldsNothing) {
  InternTable t;
  ParseStats st;
  EXPECT_TRUE(parse_all("# comment\n", t, &st).empty());
  EXPECT_EQ(st.triples, 0u);
  EXPECT_EQ(st.malformed, 0u);
}

TEST(NTriples, BlankAndWhitespaceLines) {
  InternTable t;
  ParseStats st;
  const auto out = parse_all("\n   \n\t\n<http://a> <http://p> <http://b> .\r\n", t, &st);
  EXPECT_EQ(out.size(), 1u);
  EXPECT_EQ(st.malformed, 0u);
}

TEST(NTriples, EscapesAreDecoded) {
  InternTable t;
  const auto tr = parse_one(
      R"(<http://a> <http://p> "a\tb\"c\\d\neé\U0001F600" .)", t);
  EXPECT_EQ(as_literal(tr.object)->lexical, "a\tb\"c\\d\ne\xC3\xA9\xF0\x9F\x98\x80");
}

TEST(NTriples, IriEscapesAreDecoded) {
  InternTable t;
  const auto tr = parse_one(R"(<http://example.org/café> <http://p> <http://b> .)", t);
  EXPECT_EQ(t.text(tr.subject), "http://example.org/caf\xC3\xA9");
}

TEST(NTriples, MalformedLinesAreRejected) {
  const char* bad[] = {
      "<http://a> <http://p> <http://b>",
      "<http://a> <http://p> \"open .",
      "<rel> <http://p> <http://b> .",
      "<> <http://p> <http://b> .",
      "_:b1 <http://p> <http://b> .",
      "<http://a> <http://p> _:b2 .",
      "\"lit\" <http://p> <http://b> .",
      "<http://a> \"lit\" <http://b> .",
      "<http://a> <http://p> \"x\\q\" .",
      "<http://a> <http://p> \"x\\u12\" .",
      "<http://a> <http://p> \"x\\uD800\" .",
      "<http://a> <http://p> \"x\"@ .",
      "<http://a> <http://p> \"x\"^^ .",
      "<http://a> <http://p> \"x\"@en^^<http://t> .",
      "<http://a> <http://p> <http://b> . <http://c>",
      "<http://a> <http://p> .",
  };
  for (const auto* line : bad) {
    InternTable t;
    NTriplesParser p(t);
    EXPECT_THROW(p.parse_line(line, 7), ParseError) << line;
  }
}

TEST(NTriples, ParseErrorCarriesLineNumber) {
  InternTable t;
  NTriplesParser p(t);
  try {
    p.parse_line("<http://a> <http://p>", 42);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 42u);
  }
}

TEST(NTriples, FailedLineInternsNothing) {
  InternTable t;
  NTriplesParser p(t);
  EXPECT_THROW(p.parse_line("<http://a> <http://p> \"open .", 1), ParseError);
  EXPECT_EQ(t.size(), 0u);
}

TEST(NTriples, RecoveryContinuesAfterBadLines) {
  InternTable t;
  ParseStats st;
  const auto out = parse_all(
      "<http://a> <http://p> <http://b> .\n"
      "garbage\n"
      "<http://a> <http://p> \"x\" .\n"
      "<http://a> <http://p>\n"
      "<http://c> <http://p> <http://d> .\n",
      t, &st);
  EXPECT_EQ(out.size(), 3u);
  EXPECT_EQ(st.malformed, 2u);
  ASSERT_EQ(st.errors.size(), 2u);
  EXPECT_EQ(st.errors[0].line, 2u);
  EXPECT_EQ(st.errors[1].line, 4u);
}

TEST(NTriples, StrictModeAborts) {
  InternTable t;
  ParseOptions opts;
  opts.strict = true;
  EXPECT_THROW(parse_all("<http://a> <http://p> <http://b> .\nbad\n", t, nullptr, opts),
               ParseError);
}

TEST(NTriples, RecordedErrorsAreCapped) {
  InternTable t;
  ParseStats st;
  ParseOptions opts;
  opts.max_recorded_errors = 3;
  std::string text;
  for (int i = 0; i < 10; ++i) text += "bad line\n";
  parse_all(text, t, &st, opts);
  EXPECT_EQ(st.malformed, 10u);
  EXPECT_EQ(st.errors.size(), 3u);
}

TEST(NTriples, RawSpaceInIriIsAcceptedAndCounted) {
  InternTable t;
  ParseStats st;
  const auto out = parse_all("<http://dbpedia.org/resource/A B> <http://p> <http://b> .\n", t, &st);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(t.text(out[0].subject), "http://dbpedia.org/resource/A B");
  EXPECT_EQ(st.lenient_iris, 1u);

  InternTable t2;
  ParseOptions strict;
  strict.strict = true;
  EXPECT_THROW(parse_all("<http://dbpedia.org/resource/A B> <http://p> <http://b> .\n", t2,
                         nullptr, strict),
               ParseError);
}

TEST(NTriples, GoldenFileMatchesReferenceParse) {
  const auto ref = nlohmann::json::parse(testing_support::read_text(
      fixture("ntriples/conformance.reference.json")));
  InternTable t;
  std::vector<std::pair<std::size_t, Triple>> got;
  NTriplesParser parser(t);
  std::istringstream in(testing_support::read_text(fixture("ntriples/conformance.nt")));
  std::string line;
  std::size_t n = 0;
  std::vector<std::size_t> rejected;
  while (std::getline(in, line)) {
    ++n;
    try {
      if (auto tr = parser.parse_line(line, n)) got.emplace_back(n, *tr);
    } catch (const ParseError&) {
      rejected.push_back(n);
    }
  }
  EXPECT_EQ(rejected, ref["rejected_lines"].get<std::vector<std::size_t>>());
  ASSERT_EQ(got.size(), ref["triples"].size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    const auto& r = ref["triples"][i];
    const auto& [line_no, tr] = got[i];
    SCOPED_TRACE("line " + std::to_string(line_no));
    EXPECT_EQ(line_no, r["line"].get<std::size_t>());
    EXPECT_EQ(t.text(tr.subject), r["subject"].get<std::string>());
    EXPECT_EQ(t.text(tr.predicate), r["predicate"].get<std::string>());
    const auto& o = r["object"];
    if (o.contains("iri")) {
      ASSERT_TRUE(is_iri(tr.object));
      EXPECT_EQ(t.text(*iri_id(tr.object)), o["iri"].get<std::string>());
    } else {
      const auto* lit = as_literal(tr.object);
      ASSERT_NE(lit, nullptr);
      EXPECT_EQ(lit->lexical, o["lexical"].get<std::string>());
      EXPECT_EQ(lit->lang.value_or(""), o.value("lang", ""));
      EXPECT_EQ(lit->datatype ? t.text(*lit->datatype) : "", o.value("datatype", ""));
    }
  }
}

TEST(NTriples, GoldenFileStreamCounts) {
  InternTable t;
  ParseStats st;
  const auto n = parse_file(fixture("ntriples/conformance.nt"), t, [](const Triple&) {}, {}, &st);
  EXPECT_EQ(n, 20u);
  EXPECT_EQ(st.triples, 20u);
  EXPECT_EQ(st.malformed, 10u);
}

TEST(NTriples, FixtureRoundTripPreservesMultiset) {
  InternTable t;
  std::vector<std::string> first;
  parse_file(fixture("ntriples/conformance.nt"), t,
             [&](const Triple& tr) { first.push_back(to_ntriples(tr, t)); });
  std::string doc;
  for (const auto& s : first) doc += s + "\n";
  InternTable t2;
  std::vector<std::string> second;
  ParseStats st;
  for (const auto& tr : parse_all(doc, t2, &st)) second.push_back(to_ntriples(tr, t2));
  EXPECT_EQ(st.malformed, 0u);
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  EXPECT_EQ(first, second);
}

namespace {

// Random UTF-8 text over a pool that includes every character needing an escape.
std::string random_text(std::mt19937_64& rng, bool for_iri) {
  static const std::vector<std::string> pool = {
      "a", "Z", "0", " ", "_", "-", "%", "/", "#", "\xC3\xA9", "\xE6\x9D\xB1", "\xF0\x9F\x98\x80"};
  static const std::vector<std::string> literal_only = {"\"", "\\", "\n", "\r", "\t", "<", ">", "'"};
  std::uniform_int_distribution<int> len(0, 12);
  std::string s;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    const bool special = !for_iri && rng() % 4 == 0;
    const auto& src = special ? literal_only : pool;
    auto piece = src[rng() % src.size()];
    if (for_iri && piece == " ") piece = "_";
    s += piece;
  }
  return s;
}

}  // namespace

TEST(NTriples, RandomTriplesSurviveSerialization) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 300; ++round) {
    InternTable t;
    std::vector<Triple> triples;
    for (int i = 0; i < 5; ++i) {
      Triple tr;
      tr.subject = t.intern("http://example.org/" + random_text(rng, true));
      tr.predicate = t.intern("http://example.org/p" + std::to_string(rng() % 3));
      switch (rng() % 3) {
        case 0: tr.object = Iri{t.intern("urn:x:" + random_text(rng, true))}; break;
        case 1: tr.object = Literal{random_text(rng, false), "en-GB", std::nullopt}; break;
        default:
          tr.object = Literal{random_text(rng, false), std::nullopt,
                              t.intern("http://www.w3.org/2001/XMLSchema#string")};
      }
      triples.push_back(tr);
    }
    std::string doc;
    for (const auto& tr : triples) doc += to_ntriples(tr, t) + "\n";
    InternTable t2;
    ParseStats st;
    const auto back = parse_all(doc, t2, &st);
    ASSERT_EQ(st.malformed, 0u) << doc;
    ASSERT_EQ(back.size(), triples.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      EXPECT_EQ(to_ntriples(back[i], t2), to_ntriples(triples[i], t)) << doc;
    }
  }
}

TEST(InternTable, Idempotent) {
  InternTable t;
  const auto a = t.intern("http://a");
  EXPECT_EQ(t.intern("http://a"), a);
  EXPECT_NE(t.intern("http://b"), a);
  EXPECT_EQ(t.text(a), "http://a");
  EXPECT_EQ(t.find("http://b"), 1u);
  EXPECT_FALSE(t.find("http://c"));
}

TEST(InternTable, MillionDistinctIrisGetDenseIds) {
  InternTable t;
  constexpr std::uint32_t n = 1'000'000;
  for (std::uint32_t i = 0; i < n; ++i) {
    ASSERT_EQ(t.intern("http://example.org/r/" + std::to_string(i)), i);
  }
  EXPECT_EQ(t.size(), n);
  for (std::uint32_t i = 0; i < n; i += 9973) {
    EXPECT_EQ(t.text(i), "http://example.org/r/" + std::to_string(i));
    EXPECT_EQ(t.find(t.text(i)), i);
  }
}

TEST(InternTable, CopyIsIndependent) {
  InternTable a;
  a.intern("http://x");
  InternTable b = a;
  b.intern("http://y");
  EXPECT_EQ(a.size(), 1u);
  EXPECT_EQ(b.size(), 2u);
  EXPECT_EQ(b.find("http://x"), 0u);
}

TEST(Compression, DetectedByMagicBytes) {
  auto head = [](std::initializer_list<unsigned char> b) { return std::vector<unsigned char>(b); };
  EXPECT_EQ(detect_compression(head({0x1f, 0x8b, 0x08})), Compression::gzip);
  EXPECT_EQ(detect_compression(head({'B', 'Z', 'h', '9'})), Compression::bzip2);
  EXPECT_EQ(detect_compression(head({0xFD, '7', 'z', 'X', 'Z', 0x00})), Compression::xz);
  EXPECT_EQ(detect_compression(head({0x28, 0xB5, 0x2F, 0xFD})), Compression::zstd);
  EXPECT_EQ(detect_compression(head({'<', 'h'})), Compression::none);
  EXPECT_EQ(detect_compression(head({})), Compression::none);
}

TEST(Compression, EveryContainerParsesLikePlainText) {
  const auto doc = sample_document(2000);
  InternTable plain_table;
  const auto plain = parse_all(doc, plain_table);
  for (const auto c : {Compression::gzip, Compression::bzip2, Compression::xz, Compression::zstd}) {
    SCOPED_TRACE(to_string(c));
    std::istringstream raw(compress(doc, c));
    DecodedInput in(raw);
    EXPECT_EQ(in.compression(), c);
    InternTable t;
    std::vector<Triple> out;
    NTriplesParser p(t);
    p.parse_stream(in.stream(), [&](const Triple& tr) { out.push_back(tr); });
    ASSERT_EQ(out.size(), plain.size());
    for (std::size_t i = 0; i < out.size(); i += 97) {
      EXPECT_EQ(to_ntriples(out[i], t), to_ntriples(plain[i], plain_table));
    }
  }
}

TEST(Compression, CompressionIsNotGuessedFromFileName) {
  testing_support::TempDir dir;
  const auto path = dir / "page_links_en.nt.bz2";
  testing_support::write_text(path, "<http://a> <http://p> <http://b> .\n");
  InternTable t;
  EXPECT_EQ(parse_file(path, t, [](const Triple&) {}), 1u);
}

TEST(Compression, TruncatedStreamIsFatal) {
  const auto doc = sample_document(5000);
  for (const auto c : {Compression::gzip, Compression::bzip2, Compression::xz, Compression::zstd}) {
    SCOPED_TRACE(to_string(c));
    auto bytes = compress(doc, c);
    bytes.resize(bytes.size() / 2);
    std::istringstream raw(bytes);
    InternTable t;
    EXPECT_THROW(parse_stream(raw, t, [](const Triple&) {}), IoError);
  }
}

TEST(Compression, MissingFileIsIoError) {
  InternTable t;
  EXPECT_THROW(parse_file("/nonexistent/file.nt", t, [](const Triple&) {}), IoError);
}

namespace {

// Produces `lines` copies of one triple on demand, so the input itself uses
// no memory.
class RepeatingBuf : public std::streambuf {
 public:
  RepeatingBuf(std::string line, std::size_t lines) : line_(std::move(line)), left_(lines) {}

 protected:
  int_type underflow() override {
    if (left_ == 0) return traits_type::eof();
    --left_;
    setg(line_.data(), line_.data(), line_.data() + line_.size());
    return traits_type::to_int_type(line_[0]);
  }

 private:
  std::string line_;
  std::size_t left_;
};

long rss_kib() {
  std::ifstream in("/proc/self/status");
  std::string key;
  while (in >> key) {
    if (key == "VmRSS:") {
      long v = 0;
      in >> v;
      return v;
    }
    in.ignore(1 << 20, '\n');
  }
  return -1;
}

std::size_t stream_repeated(std::size_t lines) {
  RepeatingBuf buf("<http://dbpedia.org/resource/Same> <http://example.org/p> \"same value\" .\n",
                   lines);
  std::istream in(&buf);
  InternTable t;
  NTriplesParser p(t);
  std::size_t n = 0;
  p.parse_stream(in, [&](const Triple&) { ++n; });
  EXPECT_EQ(t.size(), 2u);
  return n;
}

}  // namespace

TEST(Streaming, MemoryDoesNotGrowWithInputLength) {
  if (rss_kib() < 0) GTEST_SKIP() << "no /proc/self/status";
  stream_repeated(100'000);
  const auto before = rss_kib();
  EXPECT_EQ(stream_repeated(3'000'000), 3'000'000u);
  const auto after = rss_kib();
  // Three million lines of 70 bytes would be 200 MiB if they were retained.
  EXPECT_LT(after - before, 8 * 1024) << "RSS grew from " << before << " to " << after << " KiB";
}

TEST(Compression, ConcatenatedZstdFramesAreRead) {
  const auto a = sample_document(300);
  const auto b = sample_document(200);
  std::istringstream raw(compress(a, Compression::zstd) + compress(b, Compression::zstd));
  InternTable t;
  ParseStats st;
  parse_stream(raw, t, [](const Triple&) {}, {}, &st);
  EXPECT_EQ(st.triples, 500u);
}
