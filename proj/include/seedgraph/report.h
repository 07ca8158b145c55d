#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "seedgraph/eval.h"
#include "seedgraph/graph_search.h"
#include "seedgraph/retrieval.h"
#include "seedgraph/topic_model.h"

namespace seedgraph {

using Json = nlohmann::ordered_json;

// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

Json to_json(const SearchConfig& config);
Json to_json(const LdaConfig& config);

// {seed | seeds, config, keywords:[{token, depth, parent, similarity}], context_trace}
Json search_report(const SearchResult& result);

// Keyword tokens from a search report, a plain one-per-line list, or an empty file.
std::vector<std::string> parse_keywords_file(std::string_view text);

Json retrieval_summary(const RetrievalResult& result);

struct PerplexityPoint {
  std::size_t sweep = 0;
  double perplexity = 0.0;
};

Json topic_report(const LdaModel& model, const LdaConfig& config, std::size_t top_n,
                  const std::vector<PerplexityPoint>& trace);

// One row of the evaluation table: a method and its hyperparameters.
struct EvalRow {
  std::string method;
  std::vector<std::string> seeds;
  std::optional<SearchConfig> search;
  ConfusionCounts counts;
  PrfScores scores;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  Json config_echo;
};

Json to_json(const EvalReport& report);
// Columns: seed words, threshold, max depth, top k, precision, recall, F1.
std::string format_eval_table(const EvalReport& report);

// Recomputes F1 from the stored precision and recall of every row and checks
// the stored counts reproduce P and R. Returns the failing row descriptions.
std::vector<std::string> check_eval_report(const Json& report);

}  // namespace seedgraph
