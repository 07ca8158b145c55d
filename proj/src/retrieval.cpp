#include "seedgraph/retrieval.h"

#include <algorithm>

#include <json.hpp>

#include "seedgraph/errors.h"
#include "text_util.h"

namespace seedgraph {

bool classify(const Document& doc, const KeywordSet& keywords) {
  return std::any_of(doc.tokens.begin(), doc.tokens.end(),
                     [&](const std::string& t) { return keywords.contains(t); });
}

RetrievalResult retrieve(const Corpus& corpus, const std::vector<std::string>& keywords) {
  RetrievalResult result;
  result.n_documents = corpus.size();
  result.tokenizer_id = corpus.tokenizer_id;

  const bool subword_tokens = corpus.tokenizer_id == "wordpiece";
  KeywordSet active;
  for (const auto& k : keywords) {
    if (result.keyword_hit_counts.contains(k)) continue;
    result.keyword_hit_counts.emplace(k, 0);
    if (!subword_tokens && k.starts_with("##")) {
      result.warnings.push_back("keyword '" + k + "' is a subword piece and cannot match under the " +
                                corpus.tokenizer_id + " tokenizer");
      continue;
    }
    active.insert(k);
  }
  if (keywords.empty()) result.warnings.push_back("empty keyword list; nothing retrieved");

  for (const auto& doc : corpus.documents) {
    std::set<std::string> matched;
    for (const auto& t : doc.tokens) {
      if (active.contains(t)) matched.insert(t);
    }
    if (matched.empty()) continue;
    for (const auto& k : matched) ++result.keyword_hit_counts[k];
    result.positive_ids.push_back(doc.id);
    result.matched_keywords.emplace(doc.id, std::move(matched));
  }
  return result;
}

std::string format_retrieval_jsonl(const RetrievalResult& result) {
  std::string out;
  for (const auto& id : result.positive_ids) {
    nlohmann::ordered_json line;
    line["id"] = id;
    line["matched"] = result.matched_keywords.at(id);
    out += line.dump() + "\n";
  }
  return out;
}

std::vector<std::string> parse_retrieval_ids(std::string_view jsonl) {
  std::vector<std::string> ids;
  LineReader lines(jsonl);
  std::string_view line;
  while (lines.next(line)) {
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      ids.push_back(j.at("id").get<std::string>());
    } catch (const nlohmann::json::exception&) {
      throw ParseError("malformed retrieval record", lines.line_number());
    }
  }
  return ids;
}

}  // namespace seedgraph
