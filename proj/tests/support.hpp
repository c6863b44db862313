#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "litrank/store/dataset_store.hpp"
#include "litrank/writers/writer_set.hpp"

namespace testing_support {

namespace fs = std::filesystem;

inline fs::path fixture(const std::string& rel) { return fs::path(LITRANK_FIXTURES) / rel; }

inline std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = fs::temp_directory_path() / ("litrank-test-" + std::to_string(rng()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline const std::string kRes = "http://dbpedia.org/resource/";

// Every dataset of one fixture edition loaded and frozen.
inline litrank::store::DatasetStore load_mini(const std::string& lang) {
  litrank::store::DatasetStore st(lang);
  for (const auto kind : litrank::store::all_dataset_kinds()) {
    const auto p = fixture("mini/" + lang + "/" + litrank::store::dataset_file_stem(kind, lang) +
                           ".nt");
    if (fs::exists(p)) litrank::store::load_dataset(kind, p, st);
  }
  st.freeze();
  return st;
}

inline const litrank::store::DatasetStore& mini_en() {
  static const auto st = load_mini("en");
  return st;
}

// Local names of a set, sorted.
inline std::set<std::string> names(const litrank::writers::WriterSet& set,
                                   const litrank::store::DatasetStore& st) {
  std::set<std::string> out;
  for (const auto id : set.ids) {
    const auto& iri = st.iri(id);
    out.insert(iri.substr(iri.rfind('/') + 1));
  }
  return out;
}

inline litrank::writers::WriterSet set_of(const std::vector<std::string>& local_names,
                                          const litrank::store::DatasetStore& st,
                                          std::string approach = "test") {
  std::vector<litrank::rdf::TermId> ids;
  for (const auto& n : local_names) ids.push_back(*st.id(kRes + n));
  return litrank::writers::WriterSet::from(std::move(approach), std::move(ids));
}

}  // namespace testing_support
