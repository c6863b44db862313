#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "litrank/rdf/intern_table.hpp"
#include "litrank/rdf/term.hpp"

namespace litrank::rdf {

struct ParseOptions {
  // Abort on the first malformed line instead of recording it and moving on.
  bool strict = false;
  // Upper bound on stored LineError entries; the malformed counter keeps going.
  std::size_t max_recorded_errors = 1000;
};

struct LineError {
  std::size_t line = 0;
  std::string message;
};

struct ParseStats {
  std::size_t lines = 0;
  std::size_t triples = 0;
  std::size_t malformed = 0;
  // Accepted IRIs containing characters the grammar forbids (raw spaces etc.).
  std::size_t lenient_iris = 0;
  std::vector<LineError> errors;
};

using TripleSink = std::function<void(const Triple&)>;

// Line-oriented N-Triples reader. IRIs are interned into the supplied table;
// literal text is decoded (ECHAR/UCHAR) into the Triple handed to the sink.
class NTriplesParser {
 public:
  explicit NTriplesParser(InternTable& table, ParseOptions options = {});

  // Returns nullopt for blank and comment lines. Throws ParseError if the line
  // is malformed.
  std::optional<Triple> parse_line(std::string_view line, std::size_t line_no);

  // Feeds every well-formed triple to the sink and returns how many were
  // emitted. Malformed lines are recorded in stats() unless strict.
  std::size_t parse_stream(std::istream& in, const TripleSink& sink);

  const ParseStats& stats() const { return stats_; }

 private:
  InternTable& table_;
  ParseOptions options_;
  ParseStats stats_;
  std::string scratch_;
  std::string subject_, predicate_, object_iri_, datatype_;
};

// Convenience entry points. The file variant detects compression by magic bytes.
std::size_t parse_stream(std::istream& in, InternTable& table, const TripleSink& sink,
                         const ParseOptions& options = {}, ParseStats* stats = nullptr);
std::size_t parse_file(const std::filesystem::path& path, InternTable& table,
                       const TripleSink& sink, const ParseOptions& options = {},
                       ParseStats* stats = nullptr);

// Canonical single-line N-Triples form (terminated by " .").
std::string to_ntriples(const Triple& t, const InternTable& table);
std::string iri_to_ntriples(std::string_view iri);
std::string literal_to_ntriples(const Literal& lit, const InternTable& table);

}  // namespace litrank::rdf
