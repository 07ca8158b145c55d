#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "oracles/oracles.h"
#include "seedgraph/corpus.h"
#include "seedgraph/embedding_store.h"

namespace testing_support {

inline seedgraph::EmbeddingTable make_table(const std::vector<oracle::Entry>& entries) {
  seedgraph::EmbeddingTable table(entries.front().vec.size());
  for (const auto& e : entries) table.add(e.token, e.vec);
  return table;
}

inline seedgraph::Vocabulary vocab_of(const std::vector<oracle::Entry>& entries) {
  seedgraph::Vocabulary v;
  for (const auto& e : entries) {
    v.counts[e.token] = 1;
    v.doc_freq[e.token] = 1;
  }
  return v;
}

inline seedgraph::Corpus make_corpus(const std::vector<std::vector<std::string>>& docs) {
  seedgraph::Corpus c;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    seedgraph::Document d;
    d.id = std::to_string(i);
    d.tokens = docs[i];
    for (const auto& t : docs[i]) d.text += (d.text.empty() ? "" : " ") + t;
    c.documents.push_back(std::move(d));
  }
  return c;
}

inline std::vector<oracle::Entry> random_entries(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<oracle::Entry> out;
  for (std::size_t i = 0; i < n; ++i) {
    oracle::Entry e{"w" + std::to_string(i), oracle::Vec(dim)};
    for (auto& x : e.vec) x = normal(rng);
    out.push_back(std::move(e));
  }
  return out;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("seedgraph_test_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support
