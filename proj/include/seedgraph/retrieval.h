#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "seedgraph/corpus.h"

namespace seedgraph {

struct RetrievalResult {
  // Corpus order.
  std::vector<std::string> positive_ids;
  std::map<std::string, std::set<std::string>> matched_keywords;
  // Every searched keyword, including those matching nothing.
  std::map<std::string, std::size_t> keyword_hit_counts;
  std::size_t n_documents = 0;
  std::string tokenizer_id;
  std::vector<std::string> warnings;

  double rate() const {
    return n_documents == 0 ? 0.0
                            : static_cast<double>(positive_ids.size()) / static_cast<double>(n_documents);
  }
};

using KeywordSet = std::unordered_set<std::string>;

// A document is positive when any of its tokens equals a keyword.
bool classify(const Document& doc, const KeywordSet& keywords);

// Under the simple tokenizer "##" continuation keywords can never match and are
// skipped with a warning. An empty keyword list yields no positives and a warning.
RetrievalResult retrieve(const Corpus& corpus, const std::vector<std::string>& keywords);

// One {"id", "matched"} object per line for each positive document.
std::string format_retrieval_jsonl(const RetrievalResult& result);

// Reads the ids back from format_retrieval_jsonl output.
std::vector<std::string> parse_retrieval_ids(std::string_view jsonl);

}  // namespace seedgraph
