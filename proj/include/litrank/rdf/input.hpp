#pragma once

#include <filesystem>
#include <istream>
#include <memory>
#include <span>

namespace litrank::rdf {

enum class Compression { none, gzip, bzip2, xz, zstd };

const char* to_string(Compression c);

// Identifies a compression container from the first bytes of a stream.
// Extensions are never consulted.
Compression detect_compression(std::span<const unsigned char> head);

// Wraps a raw byte stream, transparently decompressing it when the leading
// bytes carry a known magic number. Reads through stream() throw IoError if
// the compressed payload is truncated or corrupt.
class DecodedInput {
 public:
  explicit DecodedInput(std::istream& raw);
  ~DecodedInput();
  DecodedInput(const DecodedInput&) = delete;
  DecodedInput& operator=(const DecodedInput&) = delete;

  std::istream& stream();
  Compression compression() const { return compression_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Compression compression_ = Compression::none;
};

// Owns the file handle as well as the decoding chain.
class InputFile {
 public:
  explicit InputFile(const std::filesystem::path& path);
  ~InputFile();
  std::istream& stream() { return decoded_->stream(); }
  Compression compression() const { return decoded_->compression(); }

 private:
  std::unique_ptr<std::istream> file_;
  std::unique_ptr<DecodedInput> decoded_;
};

}  // namespace litrank::rdf
