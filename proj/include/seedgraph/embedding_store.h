#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace seedgraph {

using Vector = std::vector<double>;

enum class EmbeddingFormat { kVecText, kJsonl };

EmbeddingFormat parse_embedding_format(std::string_view name);
std::string_view to_string(EmbeddingFormat format);

// Token -> dense vector table. Rows are stored contiguously in insertion order.
// Immutable once loaded; concurrent readers are safe.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  // Throws std::invalid_argument on empty token, wrong length, non-finite
  // component or duplicate token.
  void add(std::string token, std::span<const double> vec);

  bool contains(std::string_view token) const;
  std::optional<std::size_t> row_of(std::string_view token) const;
  std::optional<std::span<const double>> find(std::string_view token) const;

  const std::string& token(std::size_t row) const { return tokens_[row]; }
  std::span<const double> row(std::size_t row) const {
    return {data_.data() + row * dim_, dim_};
  }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  std::size_t dim_;
  std::vector<std::string> tokens_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> index_;
};

struct SimilarityHit {
  std::string token;
  double similarity = 0.0;

  bool operator==(const SimilarityHit&) const = default;
};

// Parse errors are seedgraph::ParseError carrying the offending line number.
EmbeddingTable load_embeddings(const std::filesystem::path& path, EmbeddingFormat format);
EmbeddingTable parse_embeddings(std::string_view text, EmbeddingFormat format);

// Writes the table in vec-text form, rows in insertion order, shortest
// round-trip decimal representation for every component.
std::string format_vec_text(const EmbeddingTable& table);
void save_vec_text(const EmbeddingTable& table, const std::filesystem::path& path);

// Cosine similarity in double precision. A zero-norm operand yields -1 so the
// token can never clear a threshold. Throws std::invalid_argument when the
// dimensions differ.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

using TokenSet = std::unordered_set<std::string>;

// Exhaustive scan over every table row. Result is sorted by similarity
// descending, ties by token ascending; hits below `threshold` and tokens in
// `exclude` are dropped. Throws std::invalid_argument when k == 0 or the
// query dimension is wrong.
std::vector<SimilarityHit> top_k_similar(const EmbeddingTable& table,
                                         std::span<const double> query, std::size_t k,
                                         double threshold, const TokenSet& exclude);

// Same contract restricted to the given table rows.
std::vector<SimilarityHit> top_k_similar(const EmbeddingTable& table,
                                         std::span<const std::size_t> candidate_rows,
                                         std::span<const double> query, std::size_t k,
                                         double threshold, const TokenSet& exclude);

}  // namespace seedgraph
