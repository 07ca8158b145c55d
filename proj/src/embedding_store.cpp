#include "seedgraph/embedding_store.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ranges>
#include <stdexcept>

#include <json.hpp>

#include "seedgraph/errors.h"
#include "text_util.h"

namespace seedgraph {

EmbeddingFormat parse_embedding_format(std::string_view name) {
  if (name == "vec-text" || name == "vec" || name == "text") return EmbeddingFormat::kVecText;
  if (name == "jsonl") return EmbeddingFormat::kJsonl;
  throw ConfigError("unknown embedding format '" + std::string(name) + "'");
}

std::string_view to_string(EmbeddingFormat format) {
  return format == EmbeddingFormat::kVecText ? "vec-text" : "jsonl";
}

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be positive");
}

void EmbeddingTable::add(std::string token, std::span<const double> vec) {
  if (token.empty()) throw std::invalid_argument("empty token");
  if (vec.size() != dim_) throw std::invalid_argument("inconsistent vector length");
  for (double c : vec) {
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite component");
  }
  if (index_.contains(token)) throw std::invalid_argument("duplicate token '" + token + "'");
  index_.emplace(token, tokens_.size());
  tokens_.push_back(std::move(token));
  data_.insert(data_.end(), vec.begin(), vec.end());
}

bool EmbeddingTable::contains(std::string_view token) const {
  return index_.find(token) != index_.end();
}

std::optional<std::size_t> EmbeddingTable::row_of(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::span<const double>> EmbeddingTable::find(std::string_view token) const {
  auto r = row_of(token);
  if (!r) return std::nullopt;
  return row(*r);
}

namespace {

bool parse_double(std::string_view field, double& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

void add_row(EmbeddingTable& table, std::string token, std::span<const double> vec,
             std::size_t line) {
  if (token.empty()) throw ParseError("empty token", line);
  if (vec.size() != table.dim()) throw ParseError("inconsistent vector length", line);
  for (double c : vec) {
    if (!std::isfinite(c)) throw ParseError("non-finite component", line);
  }
  if (table.contains(token)) throw ParseError("duplicate token '" + token + "'", line);
  table.add(std::move(token), vec);
}

EmbeddingTable parse_vec_text(std::string_view text) {
  LineReader lines(text);
  std::string_view line;
  if (!lines.next(line)) throw ParseError("malformed header", 1);
  auto header = split_fields(line);
  std::size_t count = 0;
  std::size_t dim = 0;
  if (header.size() != 2 || !parse_size(header[0], count) || !parse_size(header[1], dim) ||
      dim == 0) {
    throw ParseError("malformed header", 1);
  }

  EmbeddingTable table(dim);
  Vector vec;
  vec.reserve(dim);
  while (lines.next(line)) {
    const std::size_t lineno = lines.line_number();
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (table.size() == count) {
      throw ParseError("more records than the header count " + std::to_string(count), lineno);
    }
    vec.clear();
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0.0;
      if (!parse_double(fields[i], v)) {
        throw ParseError("malformed number '" + std::string(fields[i]) + "'", lineno);
      }
      vec.push_back(v);
    }
    add_row(table, std::string(fields[0]), vec, lineno);
  }
  if (table.size() != count) {
    throw ParseError("expected " + std::to_string(count) + " records, found " +
                         std::to_string(table.size()),
                     lines.line_number() + 1);
  }
  return table;
}

EmbeddingTable parse_jsonl(std::string_view text) {
  LineReader lines(text);
  std::string_view line;
  std::optional<EmbeddingTable> table;
  Vector vec;
  while (lines.next(line)) {
    const std::size_t lineno = lines.line_number();
    if (trim(line).empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw ParseError("malformed json record", lineno);
    }
    if (!record.is_object() || !record.contains("token") || !record["token"].is_string()) {
      throw ParseError("record lacks string field 'token'", lineno);
    }
    if (!record.contains("vec") || !record["vec"].is_array()) {
      throw ParseError("record lacks array field 'vec'", lineno);
    }
    vec.clear();
    for (const auto& c : record["vec"]) {
      if (!c.is_number()) throw ParseError("malformed number in 'vec'", lineno);
      vec.push_back(c.get<double>());
    }
    if (!table) {
      if (vec.empty()) throw ParseError("empty vector", lineno);
      table.emplace(vec.size());
    }
    add_row(*table, record["token"].get<std::string>(), vec, lineno);
  }
  if (!table) throw ParseError("no embedding records", 1);
  return std::move(*table);
}

}  // namespace

EmbeddingTable parse_embeddings(std::string_view text, EmbeddingFormat format) {
  return format == EmbeddingFormat::kVecText ? parse_vec_text(text) : parse_jsonl(text);
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, EmbeddingFormat format) {
  return parse_embeddings(read_file(path), format);
}

std::string format_vec_text(const EmbeddingTable& table) {
  std::string out = std::to_string(table.size()) + " " + std::to_string(table.dim()) + "\n";
  char buf[64];
  for (std::size_t r = 0; r < table.size(); ++r) {
    out += table.token(r);
    for (double c : table.row(r)) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), c);
      out += ' ';
      out.append(buf, ptr);
    }
    out += '\n';
  }
  return out;
}

void save_vec_text(const EmbeddingTable& table, const std::filesystem::path& path) {
  write_file(path, format_vec_text(table));
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return -1.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

template <typename RowRange>
std::vector<SimilarityHit> scan(const EmbeddingTable& table, const RowRange& rows,
                                std::span<const double> query, std::size_t k, double threshold,
                                const TokenSet& exclude) {
  if (k == 0) throw std::invalid_argument("top_k_similar: k must be positive");
  if (query.size() != table.dim()) {
    throw std::invalid_argument("top_k_similar: query dimension mismatch");
  }
  std::vector<SimilarityHit> hits;
  for (std::size_t r : rows) {
    const std::string& token = table.token(r);
    if (exclude.contains(token)) continue;
    const double sim = cosine_similarity(query, table.row(r));
    if (!(sim >= threshold)) continue;
    hits.push_back({token, sim});
  }
  auto before = [](const SimilarityHit& a, const SimilarityHit& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.token < b.token;
  };
  const std::size_t keep = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(),
                    before);
  hits.resize(keep);
  return hits;
}

}  // namespace

std::vector<SimilarityHit> top_k_similar(const EmbeddingTable& table,
                                         std::span<const double> query, std::size_t k,
                                         double threshold, const TokenSet& exclude) {
  return scan(table, std::views::iota(std::size_t{0}, table.size()), query, k, threshold, exclude);
}

std::vector<SimilarityHit> top_k_similar(const EmbeddingTable& table,
                                         std::span<const std::size_t> candidate_rows,
                                         std::span<const double> query, std::size_t k,
                                         double threshold, const TokenSet& exclude) {
  for (std::size_t r : candidate_rows) {
    if (r >= table.size()) throw std::out_of_range("top_k_similar: candidate row out of range");
  }
  return scan(table, candidate_rows, query, k, threshold, exclude);
}

}  // namespace seedgraph
