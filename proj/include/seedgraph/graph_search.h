#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seedgraph/corpus.h"
#include "seedgraph/embedding_store.h"

namespace seedgraph {

struct SearchConfig {
  double min_sim_thresh = 0.4;
  std::size_t max_depth = 2;
  std::size_t top_k = 4;
  // Weight of the context embedding in the query; the current token gets 1 - context_mix.
  double context_mix = 0.5;

  // Throws ConfigError when a field is outside its domain.
  void validate() const;
  bool operator==(const SearchConfig&) const = default;
};

struct WordNode {
  Vector embedding;
  std::size_t depth = 0;
};

struct WordGraph {
  std::map<std::string, WordNode> nodes;
  std::set<std::pair<std::string, std::string>> edges;

  std::size_t out_degree(std::string_view token) const;
};

struct Keyword {
  std::string token;
  std::size_t depth = 0;
  // Empty for a seed.
  std::string parent;
  // Cosine similarity to the query that selected this token; 1 for a seed.
  double similarity = 1.0;

  bool operator==(const Keyword&) const = default;
};

struct SearchResult {
  std::vector<std::string> seeds;
  SearchConfig config;
  // Pop order. For a multi-seed search: union in seed order, first occurrence wins.
  std::vector<Keyword> keywords;
  WordGraph graph;
  // Initial context embedding followed by the value after each expanded depth.
  // Empty for a multi-seed search; see `runs`.
  std::vector<Vector> context_trace;
  // Per-seed searches of a multi-seed run.
  std::vector<SearchResult> runs;
  std::vector<std::string> warnings;

  std::vector<std::string> keyword_tokens() const;
};

// context_mix * cemb + (1 - context_mix) * token_emb. Throws std::invalid_argument
// on dimension mismatch or context_mix outside [0, 1].
Vector query_embedding(std::span<const double> cemb, std::span<const double> token_emb,
                       double context_mix);

// (cemb + sum(selected)) / (m + 1) with m = selected.size().
Vector update_context_embedding(std::span<const double> cemb, std::span<const Vector> selected);

// Single-seed word graph search. Candidates are the tokens present in both
// `vocab` and `table`. Throws SearchError if the seed has no embedding.
SearchResult bwgs(const EmbeddingTable& table, const Vocabulary& vocab, const std::string& seed,
                  const SearchConfig& config);

// Independent single-seed searches merged by ordered union.
SearchResult bmdwgs(const EmbeddingTable& table, const Vocabulary& vocab,
                    const std::vector<std::string>& seeds, const SearchConfig& config);

enum class GraphFormat { kDot, kJson };

// Nodes sorted by token, edges by (parent, child). Output is byte-stable.
std::string export_graph(const WordGraph& graph, GraphFormat format);

}  // namespace seedgraph
