#include "litrank/writers/writer_set.hpp"

#include <algorithm>

namespace litrank::writers {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

WriterSet WriterSet::from(std::string approach, std::vector<TermId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  WriterSet s;
  s.approach = std::move(approach);
  s.ids = std::move(ids);
  return s;
}

bool WriterSet::contains(TermId id) const {
  return std::binary_search(ids.begin(), ids.end(), id);
}

bool CanonList::contains(TermId id) const {
  return std::binary_search(ids.begin(), ids.end(), id);
}

std::vector<ListEntry> read_list_file(std::istream& in) {
  std::vector<ListEntry> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::string_view v = line;
    if (!v.empty() && v.back() == '\r') v.remove_suffix(1);
    if (trim(v).empty() || trim(v).front() == '#') continue;
    ListEntry e;
    e.line = n;
    const auto tab = v.find('\t');
    e.key = std::string(trim(v.substr(0, tab)));
    if (tab != std::string_view::npos) e.field = std::string(trim(v.substr(tab + 1)));
    if (!e.key.empty()) out.push_back(std::move(e));
  }
  return out;
}

std::string article_iri(std::string_view key, std::string_view resource_prefix) {
  if (key.starts_with("http://") || key.starts_with("https://")) return std::string(key);
  std::string iri(resource_prefix);
  for (const char c : key) iri.push_back(c == ' ' ? '_' : c);
  return iri;
}

CanonList load_canon(std::string name, std::istream& in, const store::DatasetStore& store,
                     std::string_view resource_prefix) {
  CanonList canon;
  canon.name = std::move(name);
  for (const auto& e : read_list_file(in)) {
    const auto iri = article_iri(e.key, resource_prefix);
    if (const auto id = store.id(iri)) {
      canon.ids.push_back(*id);
    } else if (std::find(canon.unresolved.begin(), canon.unresolved.end(), iri) ==
               canon.unresolved.end()) {
      canon.unresolved.push_back(iri);
    }
  }
  std::sort(canon.ids.begin(), canon.ids.end());
  canon.ids.erase(std::unique(canon.ids.begin(), canon.ids.end()), canon.ids.end());
  return canon;
}

NativeMap load_native_languages(std::istream& in, const store::DatasetStore& store,
                                std::string_view resource_prefix,
                                std::vector<std::string>* unresolved) {
  NativeMap out;
  for (const auto& e : read_list_file(in)) {
    const auto iri = article_iri(e.key, resource_prefix);
    const auto id = store.id(iri);
    if (!id) {
      if (unresolved) unresolved->push_back(iri);
      continue;
    }
    auto& langs = out[*id];
    std::string code;
    for (const char c : e.field + ",") {
      if (c == ',' || c == ' ' || c == '\t' || c == ';') {
        if (!code.empty()) langs.push_back(std::move(code));
        code.clear();
      } else {
        code.push_back(c);
      }
    }
    std::sort(langs.begin(), langs.end());
    langs.erase(std::unique(langs.begin(), langs.end()), langs.end());
  }
  return out;
}

}  // namespace litrank::writers
