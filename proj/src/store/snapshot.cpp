#include "litrank/store/snapshot.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string_view>

#include <boost/crc.hpp>

#include "litrank/util/error.hpp"

namespace litrank::store {

namespace {

constexpr std::array<char, 8> kMagic = {'L', 'I', 'T', 'R', 'S', 'N', 'A', 'P'};

enum class Section : std::uint32_t {
  meta = 1,
  terms = 2,
  types = 3,
  memberships = 4,
  subcategories = 5,
  labels = 6,
  infobox = 7,
  mapping = 8,
  interlang = 9,
  page_length = 10,
  links = 11,
  persons = 12,
  redirects = 13,
};

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void str(std::string_view s) {
    u64(s.size());
    buf_.append(s);
  }
  void ids(std::span<const TermId> v) {
    u64(v.size());
    for (const auto x : v) u32(x);
  }
  std::string& bytes() { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : d_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint32_t u32() {
    const auto b = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{static_cast<unsigned char>(b[i])} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    const auto b = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{static_cast<unsigned char>(b[i])} << (8 * i);
    return v;
  }
  std::string str() {
    const auto n = count(1);
    return std::string(take(n));
  }
  // Element count bounded by the bytes that remain, so corrupt lengths cannot
  // trigger huge allocations.
  std::size_t count(std::size_t min_element_bytes) {
    const auto n = u64();
    if (min_element_bytes > 0 && n > remaining() / min_element_bytes) fail("length overflow");
    return static_cast<std::size_t>(n);
  }
  std::vector<TermId> ids() {
    const auto n = count(4);
    std::vector<TermId> v(n);
    for (auto& x : v) x = u32();
    return v;
  }
  std::size_t remaining() const { return d_.size() - pos_; }
  bool done() const { return pos_ == d_.size(); }
  [[noreturn]] static void fail(const std::string& what) {
    throw SnapshotError("corrupt snapshot: " + what);
  }

 private:
  std::string_view take(std::size_t n) {
    if (n > remaining()) fail("unexpected end of section");
    auto s = d_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::string_view d_;
  std::size_t pos_ = 0;
};

template <typename Map>
std::vector<typename Map::key_type> sorted_keys(const Map& m) {
  std::vector<typename Map::key_type> keys;
  keys.reserve(m.size());
  for (const auto& kv : m) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());
  return keys;
}

void write_id_lists(Writer& w, const std::unordered_map<TermId, std::vector<TermId>>& m) {
  w.u64(m.size());
  for (const auto k : sorted_keys(m)) {
    w.u32(k);
    w.ids(m.at(k));
  }
}

void read_id_lists(Reader& r, std::unordered_map<TermId, std::vector<TermId>>& m,
                   std::size_t term_count) {
  const auto n = r.count(12);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = r.u32();
    auto ids = r.ids();
    if (k >= term_count) Reader::fail("id out of range");
    for (const auto x : ids) {
      if (x >= term_count) Reader::fail("id out of range");
    }
    m.emplace(k, std::move(ids));
  }
}

void write_term(Writer& w, const rdf::Term& t) {
  if (const auto id = rdf::iri_id(t)) {
    w.u8(0);
    w.u32(*id);
    return;
  }
  const auto& lit = std::get<rdf::Literal>(t);
  w.u8(1);
  w.str(lit.lexical);
  w.u8(static_cast<std::uint8_t>((lit.lang ? 1 : 0) | (lit.datatype ? 2 : 0)));
  if (lit.lang) w.str(*lit.lang);
  if (lit.datatype) w.u32(*lit.datatype);
}

rdf::Term read_term(Reader& r, std::size_t term_count) {
  const auto tag = r.u8();
  auto check = [term_count](TermId id) {
    if (id >= term_count) Reader::fail("id out of range");
    return id;
  };
  if (tag == 0) return rdf::Iri{check(r.u32())};
  if (tag != 1) Reader::fail("bad term tag");
  rdf::Literal lit;
  lit.lexical = r.str();
  const auto flags = r.u8();
  if (flags > 2) Reader::fail("bad literal flags");
  if (flags & 1) lit.lang = r.str();
  if (flags & 2) lit.datatype = check(r.u32());
  return lit;
}

void write_properties(Writer& w, const PropertyIndex& idx) {
  const auto& m = idx.raw();
  w.u64(m.size());
  for (const auto k : sorted_keys(m)) {
    w.u64(k);
    const auto& vals = m.at(k);
    w.u64(vals.size());
    for (const auto& t : vals) write_term(w, t);
  }
}

void read_properties(Reader& r, PropertyIndex& idx, std::size_t term_count) {
  const auto n = r.count(16);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = r.u64();
    if ((k >> 32) >= term_count || (k & 0xFFFFFFFFu) >= term_count) Reader::fail("id out of range");
    const auto m = r.count(5);
    auto& vals = idx.raw()[k];
    vals.reserve(m);
    for (std::size_t j = 0; j < m; ++j) vals.push_back(read_term(r, term_count));
  }
}

std::string encode_section(const DatasetStore& s, Section section) {
  Writer w;
  switch (section) {
    case Section::meta:
      w.str(s.language);
      break;
    case Section::terms:
      w.u64(s.terms.size());
      for (TermId i = 0; i < s.terms.size(); ++i) w.str(s.terms.text(i));
      break;
    case Section::types:
      write_id_lists(w, s.types.raw());
      break;
    case Section::memberships:
      write_id_lists(w, s.categories.members());
      break;
    case Section::subcategories:
      write_id_lists(w, s.categories.children());
      break;
    case Section::labels: {
      const auto& m = s.categories.labels();
      w.u64(m.size());
      for (const auto k : sorted_keys(m)) {
        w.u32(k);
        w.str(m.at(k));
      }
      break;
    }
    case Section::infobox:
      write_properties(w, s.infobox_properties);
      break;
    case Section::mapping:
      write_properties(w, s.mapping_properties);
      break;
    case Section::interlang: {
      const auto& m = s.interlang.raw();
      w.u64(m.size());
      for (const auto k : sorted_keys(m)) {
        w.u32(k);
        const auto& per_lang = m.at(k);
        w.u64(per_lang.size());
        for (const auto& [lang, id] : per_lang) {
          w.str(lang);
          w.u32(id);
        }
      }
      break;
    }
    case Section::page_length:
      w.u64(s.page_length.size());
      for (const auto k : sorted_keys(s.page_length)) {
        w.u32(k);
        w.u64(s.page_length.at(k));
      }
      break;
    case Section::links: {
      w.ids(s.links.terms());
      const auto offsets = s.links.graph().offsets();
      w.u64(offsets.size());
      for (const auto o : offsets) w.u64(o);
      w.ids(s.links.graph().targets());
      break;
    }
    case Section::persons:
      w.ids(s.persons);
      break;
    case Section::redirects:
      w.u64(s.redirects.size());
      for (const auto k : sorted_keys(s.redirects)) {
        w.u32(k);
        w.u32(s.redirects.at(k));
      }
      break;
  }
  return std::move(w.bytes());
}

void decode_section(DatasetStore& s, Section section, std::string_view payload) {
  Reader r(payload);
  const auto nterms = s.terms.size();
  auto check = [nterms](TermId id) {
    if (id >= nterms) Reader::fail("id out of range");
    return id;
  };
  switch (section) {
    case Section::meta:
      s.language = r.str();
      break;
    case Section::terms: {
      const auto n = r.count(8);
      for (std::size_t i = 0; i < n; ++i) {
        const auto text = r.str();
        if (s.terms.intern(text) != i) Reader::fail("duplicate term");
      }
      break;
    }
    case Section::types:
      read_id_lists(r, s.types.raw(), nterms);
      break;
    case Section::memberships:
      read_id_lists(r, s.categories.members(), nterms);
      break;
    case Section::subcategories:
      read_id_lists(r, s.categories.children(), nterms);
      break;
    case Section::labels: {
      const auto n = r.count(12);
      for (std::size_t i = 0; i < n; ++i) {
        const auto k = check(r.u32());
        s.categories.set_label(k, r.str());
      }
      break;
    }
    case Section::infobox:
      read_properties(r, s.infobox_properties, nterms);
      break;
    case Section::mapping:
      read_properties(r, s.mapping_properties, nterms);
      break;
    case Section::interlang: {
      const auto n = r.count(12);
      for (std::size_t i = 0; i < n; ++i) {
        const auto k = check(r.u32());
        const auto m = r.count(12);
        for (std::size_t j = 0; j < m; ++j) {
          auto lang = r.str();
          const auto id = check(r.u32());
          if (!s.interlang.add(k, lang, id)) Reader::fail("duplicate interlanguage entry");
        }
      }
      break;
    }
    case Section::page_length: {
      const auto n = r.count(12);
      for (std::size_t i = 0; i < n; ++i) {
        const auto k = check(r.u32());
        s.page_length[k] = r.u64();
      }
      break;
    }
    case Section::links: {
      auto terms = r.ids();
      for (const auto t : terms) check(t);
      const auto n = r.count(8);
      std::vector<std::uint64_t> offsets(n);
      for (auto& o : offsets) o = r.u64();
      auto targets = r.ids();
      try {
        s.links = LinkGraph::from_parts(std::move(terms),
                                        Digraph::from_csr(std::move(offsets), std::move(targets)));
      } catch (const SnapshotError&) {
        throw;
      } catch (const Error& e) {
        Reader::fail(e.what());
      }
      break;
    }
    case Section::persons:
      s.persons = r.ids();
      for (const auto t : s.persons) check(t);
      break;
    case Section::redirects: {
      const auto n = r.count(8);
      for (std::size_t i = 0; i < n; ++i) {
        const auto k = check(r.u32());
        s.redirects[k] = check(r.u32());
      }
      break;
    }
  }
  if (!r.done()) Reader::fail("trailing bytes in section");
}

constexpr std::array kSectionOrder = {
    Section::meta,      Section::terms,    Section::types,     Section::memberships,
    Section::subcategories, Section::labels, Section::infobox, Section::mapping,
    Section::interlang, Section::page_length, Section::links,  Section::persons,
    Section::redirects,
};

std::uint32_t crc32(std::string_view data) {
  boost::crc_32_type crc;
  crc.process_bytes(data.data(), data.size());
  return crc.checksum();
}

constexpr std::size_t kHeaderSize = 8 + 4 + 4;
constexpr std::size_t kEntrySize = 4 + 8 + 8 + 4;

}  // namespace

void snapshot_save(const DatasetStore& store, const std::filesystem::path& path) {
  if (!store.frozen) throw Error("snapshot_save requires a frozen store");
  std::vector<std::string> payloads;
  for (const auto s : kSectionOrder) payloads.push_back(encode_section(store, s));

  Writer header;
  header.bytes().append(kMagic.data(), kMagic.size());
  header.u32(kSnapshotVersion);
  header.u32(static_cast<std::uint32_t>(kSectionOrder.size()));
  std::uint64_t offset = kHeaderSize + kEntrySize * kSectionOrder.size();
  for (std::size_t i = 0; i < kSectionOrder.size(); ++i) {
    header.u32(static_cast<std::uint32_t>(kSectionOrder[i]));
    header.u64(offset);
    header.u64(payloads[i].size());
    header.u32(crc32(payloads[i]));
    offset += payloads[i].size();
  }

  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp);
    out.write(header.bytes().data(), static_cast<std::streamsize>(header.bytes().size()));
    for (const auto& p : payloads) out.write(p.data(), static_cast<std::streamsize>(p.size()));
    if (!out) throw IoError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

DatasetStore snapshot_load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot " + path.string());
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (data.size() < kHeaderSize || !std::equal(kMagic.begin(), kMagic.end(), data.begin())) {
    throw SnapshotError("not a litrank snapshot: " + path.string());
  }
  Reader head(std::string_view(data).substr(8, 8));
  const auto version = head.u32();
  if (version != kSnapshotVersion) {
    throw SnapshotError("snapshot version " + std::to_string(version) + " unsupported (expected " +
                        std::to_string(kSnapshotVersion) + ")");
  }
  const auto sections = head.u32();
  if (sections != kSectionOrder.size() || data.size() < kHeaderSize + kEntrySize * sections) {
    throw SnapshotError("corrupt snapshot: bad section table");
  }

  DatasetStore store;
  Reader table(std::string_view(data).substr(kHeaderSize, kEntrySize * sections));
  for (std::size_t i = 0; i < sections; ++i) {
    const auto tag = table.u32();
    const auto offset = table.u64();
    const auto length = table.u64();
    const auto crc = table.u32();
    if (tag != static_cast<std::uint32_t>(kSectionOrder[i])) {
      throw SnapshotError("corrupt snapshot: unexpected section tag " + std::to_string(tag));
    }
    if (offset > data.size() || length > data.size() - offset) {
      throw SnapshotError("corrupt snapshot: section out of bounds");
    }
    const auto payload = std::string_view(data).substr(offset, length);
    if (crc32(payload) != crc) {
      throw SnapshotError("corrupt snapshot: checksum mismatch in section " + std::to_string(tag));
    }
    decode_section(store, kSectionOrder[i], payload);
  }
  store.frozen = true;
  return store;
}

}  // namespace litrank::store
