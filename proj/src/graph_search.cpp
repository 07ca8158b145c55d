#include "seedgraph/graph_search.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "seedgraph/errors.h"

namespace seedgraph {

void SearchConfig::validate() const {
  if (!(min_sim_thresh >= -1.0 && min_sim_thresh <= 1.0)) {
    throw ConfigError("min_sim_thresh must lie in [-1, 1]");
  }
  if (top_k == 0) throw ConfigError("top_k must be positive");
  if (!(context_mix >= 0.0 && context_mix <= 1.0)) {
    throw ConfigError("context_mix must lie in [0, 1]");
  }
}

std::size_t WordGraph::out_degree(std::string_view token) const {
  std::size_t n = 0;
  for (auto it = edges.lower_bound({std::string(token), std::string()});
       it != edges.end() && it->first == token; ++it) {
    ++n;
  }
  return n;
}

std::vector<std::string> SearchResult::keyword_tokens() const {
  std::vector<std::string> out;
  out.reserve(keywords.size());
  for (const auto& k : keywords) out.push_back(k.token);
  return out;
}

Vector query_embedding(std::span<const double> cemb, std::span<const double> token_emb,
                       double context_mix) {
  if (cemb.size() != token_emb.size()) throw std::invalid_argument("query_embedding: dimension mismatch");
  if (!(context_mix >= 0.0 && context_mix <= 1.0)) {
    throw std::invalid_argument("query_embedding: context_mix outside [0, 1]");
  }
  Vector q(cemb.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = context_mix * cemb[i] + (1.0 - context_mix) * token_emb[i];
  }
  return q;
}

Vector update_context_embedding(std::span<const double> cemb, std::span<const Vector> selected) {
  Vector out(cemb.begin(), cemb.end());
  for (const auto& v : selected) {
    if (v.size() != out.size()) {
      throw std::invalid_argument("update_context_embedding: dimension mismatch");
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[i];
  }
  const double denom = static_cast<double>(selected.size() + 1);
  for (auto& c : out) c /= denom;
  return out;
}

namespace {

std::vector<std::size_t> candidate_rows(const EmbeddingTable& table, const Vocabulary& vocab) {
  std::vector<std::size_t> rows;
  rows.reserve(vocab.size());
  for (const auto& [token, _] : vocab.counts) {
    if (auto r = table.row_of(token)) rows.push_back(*r);
  }
  return rows;
}

SearchResult run_bwgs(const EmbeddingTable& table, std::span<const std::size_t> candidates,
                      const Vocabulary& vocab, const std::string& seed, const SearchConfig& config) {
  auto seed_emb = table.find(seed);
  if (!seed_emb) throw SearchError("seed '" + seed + "' has no embedding");

  SearchResult result;
  result.seeds = {seed};
  result.config = config;
  if (!vocab.contains(seed)) {
    result.warnings.push_back("seed '" + seed + "' does not occur in the candidate vocabulary");
  }

  Vector cemb(seed_emb->begin(), seed_emb->end());
  result.context_trace.push_back(cemb);
  result.graph.nodes.emplace(seed, WordNode{cemb, 0});

  TokenSet visited{seed};
  std::vector<Keyword> level{Keyword{seed, 0, "", 1.0}};
  for (std::size_t depth = 0; !level.empty(); ++depth) {
    std::vector<Keyword> next;
    std::vector<std::size_t> next_rows;
    for (auto& node : level) {
      const std::string token = node.token;
      result.keywords.push_back(std::move(node));
      if (depth >= config.max_depth) continue;

      const Vector q = query_embedding(cemb, *table.find(token), config.context_mix);
      for (auto& hit : top_k_similar(table, candidates, q, config.top_k, config.min_sim_thresh,
                                     visited)) {
        const std::size_t row = *table.row_of(hit.token);
        visited.insert(hit.token);
        result.graph.nodes.emplace(
            hit.token, WordNode{Vector(table.row(row).begin(), table.row(row).end()), depth + 1});
        result.graph.edges.emplace(token, hit.token);
        next_rows.push_back(row);
        next.push_back(Keyword{std::move(hit.token), depth + 1, token, hit.similarity});
      }
    }
    if (depth < config.max_depth) {
      std::vector<Vector> selected;
      if (!next_rows.empty()) {
        for (const auto& hit : top_k_similar(table, next_rows, cemb, config.top_k,
                                             -std::numeric_limits<double>::infinity(), {})) {
          auto v = *table.find(hit.token);
          selected.emplace_back(v.begin(), v.end());
        }
      }
      cemb = update_context_embedding(cemb, selected);
      result.context_trace.push_back(cemb);
    }
    level = std::move(next);
  }
  return result;
}

}  // namespace

SearchResult bwgs(const EmbeddingTable& table, const Vocabulary& vocab, const std::string& seed,
                  const SearchConfig& config) {
  config.validate();
  const auto rows = candidate_rows(table, vocab);
  return run_bwgs(table, rows, vocab, seed, config);
}

SearchResult bmdwgs(const EmbeddingTable& table, const Vocabulary& vocab,
                    const std::vector<std::string>& seeds, const SearchConfig& config) {
  config.validate();
  if (seeds.empty()) throw SearchError("multi-seed search needs at least one seed");
  for (const auto& s : seeds) {
    if (!table.contains(s)) throw SearchError("seed '" + s + "' has no embedding");
  }
  const auto rows = candidate_rows(table, vocab);

  SearchResult merged;
  merged.seeds = seeds;
  merged.config = config;
  std::unordered_set<std::string> seen;
  for (const auto& seed : seeds) {
    SearchResult run = run_bwgs(table, rows, vocab, seed, config);
    for (const auto& k : run.keywords) {
      if (seen.insert(k.token).second) merged.keywords.push_back(k);
    }
    for (const auto& [token, node] : run.graph.nodes) merged.graph.nodes.emplace(token, node);
    merged.graph.edges.insert(run.graph.edges.begin(), run.graph.edges.end());
    merged.warnings.insert(merged.warnings.end(), run.warnings.begin(), run.warnings.end());
    merged.runs.push_back(std::move(run));
  }
  return merged;
}

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string export_graph(const WordGraph& graph, GraphFormat format) {
  if (format == GraphFormat::kJson) {
    nlohmann::ordered_json j;
    j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& [token, node] : graph.nodes) {
      j["nodes"].push_back({{"token", token}, {"depth", node.depth}});
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& [from, to] : graph.edges) {
      j["edges"].push_back({{"from", from}, {"to", to}});
    }
    return j.dump(2) + "\n";
  }
  std::string out = "digraph word_graph {\n";
  for (const auto& [token, node] : graph.nodes) {
    out += "  " + dot_quote(token) + " [depth=" + std::to_string(node.depth) + "];\n";
  }
  for (const auto& [from, to] : graph.edges) {
    out += "  " + dot_quote(from) + " -> " + dot_quote(to) + ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace seedgraph
