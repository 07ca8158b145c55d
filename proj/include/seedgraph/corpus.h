#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace seedgraph {

inline constexpr std::string_view kUrlToken = "<url>";
inline constexpr std::string_view kUnknownToken = "<unk>";

// Subword vocabulary for greedy longest-match segmentation. Continuation
// pieces carry the "##" prefix.
class WordpieceVocab {
 public:
  WordpieceVocab() = default;
  explicit WordpieceVocab(std::unordered_set<std::string> pieces);

  // One piece per line; blank lines ignored. Throws DataError if unreadable.
  static WordpieceVocab load(const std::filesystem::path& path);

  bool contains(std::string_view piece) const;
  std::size_t size() const { return pieces_.size(); }
  std::size_t max_piece_length() const { return max_len_; }

 private:
  std::unordered_set<std::string> pieces_;
  std::size_t max_len_ = 0;
};

class Tokenizer {
 public:
  // Lowercase, whitespace split, strip leading/trailing ASCII punctuation,
  // URLs collapse to <url>, empty tokens dropped.
  static Tokenizer simple();
  // Simple word split, then each word segmented against the vocabulary. A
  // word with no complete segmentation becomes <unk>.
  static Tokenizer wordpiece(WordpieceVocab vocab);

  std::vector<std::string> tokenize(std::string_view text) const;

  bool is_wordpiece() const { return vocab_ != nullptr; }
  // "simple" or "wordpiece".
  const std::string& id() const { return id_; }

 private:
  Tokenizer(std::string id, std::shared_ptr<const WordpieceVocab> vocab)
      : id_(std::move(id)), vocab_(std::move(vocab)) {}

  std::string id_;
  std::shared_ptr<const WordpieceVocab> vocab_;
};

std::vector<std::string> simple_tokenize(std::string_view text);
std::vector<std::string> wordpiece_segment(std::string_view word, const WordpieceVocab& vocab);

struct Document {
  std::string id;
  std::string text;
  std::vector<std::string> tokens;
  std::set<std::string> gold_labels;
};

struct Corpus {
  std::vector<Document> documents;
  std::string tokenizer_id = "simple";

  std::size_t size() const { return documents.size(); }
  bool empty() const { return documents.empty(); }
  bool has_labels() const;
  const Document* find(std::string_view id) const;
};

enum class CorpusFormat { kJsonl, kCsv, kPlainLines };

CorpusFormat parse_corpus_format(std::string_view name);
std::string_view to_string(CorpusFormat format);

// Errors (DataError/ParseError): missing field, duplicate id, empty file.
Corpus ingest(const std::filesystem::path& path, CorpusFormat format, const Tokenizer& tokenizer);
Corpus parse_corpus(std::string_view text, CorpusFormat format, const Tokenizer& tokenizer);

struct Vocabulary {
  std::map<std::string, std::size_t, std::less<>> counts;
  std::map<std::string, std::size_t, std::less<>> doc_freq;

  bool contains(std::string_view token) const { return counts.find(token) != counts.end(); }
  std::size_t size() const { return counts.size(); }
  std::size_t total_count() const;
};

Vocabulary vocabulary(const Corpus& corpus);

enum class SeedMatch { kAny, kAll };

struct SeedSelectionOptions {
  std::size_t n = 50;
  SeedMatch mode = SeedMatch::kAny;
  // When set, matches are sampled with this seed instead of taken first-n.
  std::optional<std::uint64_t> shuffle_seed;
};

// Weak-supervision subset. kAll: first n documents containing every seed word.
// kAny: for each seed word the first n documents containing it, deduplicated.
// Output keeps corpus order. Throws std::invalid_argument on empty seeds or
// n == 0; an empty result appends a message to `warnings` when non-null.
Corpus select_seed_texts(const Corpus& corpus, const std::vector<std::string>& seed_words,
                         const SeedSelectionOptions& options,
                         std::vector<std::string>* warnings = nullptr);

}  // namespace seedgraph
