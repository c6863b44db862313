#include "litrank/rdf/input.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include <boost/iostreams/filter/bzip2.hpp>
#include <boost/iostreams/filter/gzip.hpp>
#include <boost/iostreams/filter/lzma.hpp>
#include <boost/iostreams/filter/zstd.hpp>
#include <boost/iostreams/filtering_stream.hpp>

#include "litrank/util/error.hpp"

namespace io = boost::iostreams;

namespace litrank::rdf {

namespace {

// Follows zstd frame and block headers over the compressed bytes. The Boost
// zstd filter ends silently on a cut-off frame, so truncation is detected here.
class ZstdFrameWalker {
 public:
  void feed(const unsigned char* p, std::size_t n) {
    while (n > 0) {
      if (skip_ > 0) {
        const auto k = static_cast<std::size_t>(std::min<std::uint64_t>(skip_, n));
        skip_ -= k;
        p += k;
        n -= k;
        continue;
      }
      hdr_[have_++] = *p++;
      --n;
      step();
    }
  }

  bool at_boundary() const { return state_ == State::magic && have_ == 0 && skip_ == 0; }

 private:
  enum class State { magic, skippable_size, descriptor, block_header };

  void step() {
    switch (state_) {
      case State::magic:
        if (have_ < 4) return;
        if (le(0, 4) == 0xFD2FB528u) {
          state_ = State::descriptor;
        } else if ((le(0, 4) & 0xFFFFFFF0u) == 0x184D2A50u) {
          state_ = State::skippable_size;
        } else {
          throw IoError("corrupt zstd stream: bad frame magic");
        }
        have_ = 0;
        return;
      case State::skippable_size:
        if (have_ < 4) return;
        have_ = 0;
        skip_then(le(0, 4), State::magic);
        return;
      case State::descriptor: {
        const unsigned d = hdr_[0];
        checksum_ = (d >> 2) & 1;
        const bool single = (d >> 5) & 1;
        static constexpr std::size_t dict[] = {0, 1, 2, 4};
        static constexpr std::size_t fcs[] = {0, 2, 4, 8};
        const std::size_t fcs_len = (d >> 6) == 0 ? (single ? 1 : 0) : fcs[d >> 6];
        const std::size_t rest = (single ? 0 : 1) + dict[d & 3] + fcs_len;
        have_ = 0;
        skip_then(rest, State::block_header);
        return;
      }
      case State::block_header: {
        if (have_ < 3) return;
        const auto h = le(0, 3);
        have_ = 0;
        const bool last = h & 1;
        const unsigned type = (h >> 1) & 3;
        if (type == 3) throw IoError("corrupt zstd stream: reserved block type");
        const std::uint64_t size = type == 1 ? 1 : (h >> 3);
        if (!last) return skip_then(size, State::block_header);
        return skip_then(size + (checksum_ ? 4 : 0), State::magic);
      }
    }
  }

  void skip_then(std::uint64_t n, State next) {
    state_ = next;
    skip_ = n;
  }

  std::uint32_t le(std::size_t off, std::size_t len) const {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < len; ++i) v |= std::uint32_t(hdr_[off + i]) << (8 * i);
    return v;
  }

  State state_ = State::magic;
  std::array<unsigned char, 4> hdr_{};
  std::size_t have_ = 0;
  std::uint64_t skip_ = 0;
  bool checksum_ = false;
};

// Replays the sniffed magic bytes before continuing with the raw stream.
class PrefixedSource {
 public:
  using char_type = char;
  using category = io::source_tag;

  PrefixedSource(std::istream* raw, std::array<char, 8> head, std::size_t head_len,
                 std::shared_ptr<ZstdFrameWalker> walker)
      : raw_(raw), head_(head), head_len_(head_len), walker_(std::move(walker)) {}

  std::streamsize read(char* s, std::streamsize n) {
    std::streamsize done = 0;
    while (pos_ < head_len_ && done < n) s[done++] = head_[pos_++];
    if (done < n && raw_->good()) {
      raw_->read(s + done, n - done);
      done += raw_->gcount();
    }
    if (raw_->bad()) throw IoError("read failure on input stream");
    if (walker_) {
      walker_->feed(reinterpret_cast<const unsigned char*>(s), static_cast<std::size_t>(done));
      if (done == 0 && !walker_->at_boundary()) {
        throw IoError("zstd stream ends inside a frame");
      }
    }
    return done == 0 ? -1 : done;
  }

 private:
  std::istream* raw_;
  std::array<char, 8> head_;
  std::size_t head_len_;
  std::size_t pos_ = 0;
  std::shared_ptr<ZstdFrameWalker> walker_;
};

// Buffers reads from the decoding chain and converts decompressor failures
// into IoError.
class CheckedBuf : public std::streambuf {
 public:
  explicit CheckedBuf(std::streambuf* inner) : inner_(inner), buf_(1 << 16) {}

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    std::streamsize n = 0;
    try {
      n = inner_->sgetn(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    } catch (const std::exception& e) {
      throw IoError(std::string("truncated or corrupt compressed stream: ") + e.what());
    }
    if (n <= 0) return traits_type::eof();
    setg(buf_.data(), buf_.data(), buf_.data() + n);
    return traits_type::to_int_type(*gptr());
  }

 private:
  std::streambuf* inner_;
  std::vector<char> buf_;
};

}  // namespace

const char* to_string(Compression c) {
  switch (c) {
    case Compression::none: return "none";
    case Compression::gzip: return "gzip";
    case Compression::bzip2: return "bzip2";
    case Compression::xz: return "xz";
    case Compression::zstd: return "zstd";
  }
  return "?";
}

Compression detect_compression(std::span<const unsigned char> h) {
  if (h.size() >= 2 && h[0] == 0x1f && h[1] == 0x8b) return Compression::gzip;
  if (h.size() >= 3 && h[0] == 'B' && h[1] == 'Z' && h[2] == 'h') return Compression::bzip2;
  if (h.size() >= 6 && h[0] == 0xfd && h[1] == '7' && h[2] == 'z' && h[3] == 'X' &&
      h[4] == 'Z' && h[5] == 0x00) {
    return Compression::xz;
  }
  if (h.size() >= 4 && h[0] == 0x28 && h[1] == 0xb5 && h[2] == 0x2f && h[3] == 0xfd) {
    return Compression::zstd;
  }
  return Compression::none;
}

struct DecodedInput::Impl {
  io::filtering_istream chain;
  std::unique_ptr<CheckedBuf> checked;
  std::unique_ptr<std::istream> stream;
};

DecodedInput::DecodedInput(std::istream& raw) : impl_(std::make_unique<Impl>()) {
  std::array<char, 8> head{};
  raw.read(head.data(), 6);
  const auto got = static_cast<std::size_t>(raw.gcount());
  if (raw.bad()) throw IoError("read failure on input stream");
  compression_ = detect_compression(
      std::span(reinterpret_cast<const unsigned char*>(head.data()), got));

  switch (compression_) {
    case Compression::gzip: impl_->chain.push(io::gzip_decompressor()); break;
    case Compression::bzip2: impl_->chain.push(io::bzip2_decompressor()); break;
    case Compression::xz: impl_->chain.push(io::lzma_decompressor()); break;
    case Compression::zstd: impl_->chain.push(io::zstd_decompressor()); break;
    case Compression::none: break;
  }
  auto walker = compression_ == Compression::zstd ? std::make_shared<ZstdFrameWalker>() : nullptr;
  impl_->chain.push(PrefixedSource(&raw, head, got, std::move(walker)), 1 << 16);
  impl_->chain.exceptions(std::ios::badbit);
  impl_->checked = std::make_unique<CheckedBuf>(impl_->chain.rdbuf());
  impl_->stream = std::make_unique<std::istream>(impl_->checked.get());
  impl_->stream->exceptions(std::ios::badbit);
}

DecodedInput::~DecodedInput() = default;

std::istream& DecodedInput::stream() { return *impl_->stream; }

InputFile::InputFile(const std::filesystem::path& path) {
  auto f = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*f) throw IoError("cannot open " + path.string());
  file_ = std::move(f);
  decoded_ = std::make_unique<DecodedInput>(*file_);
}

InputFile::~InputFile() = default;

}  // namespace litrank::rdf
