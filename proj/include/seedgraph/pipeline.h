#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "seedgraph/corpus.h"
#include "seedgraph/embedding_store.h"
#include "seedgraph/eval.h"
#include "seedgraph/graph_search.h"
#include "seedgraph/report.h"
#include "seedgraph/retrieval.h"
#include "seedgraph/topic_model.h"

namespace seedgraph {

// Where bwgs/bmdwgs draw candidate tokens from.
enum class CandidateSource { kSeedTexts, kCorpus };

struct RunConfig {
  std::filesystem::path embeddings_path;
  EmbeddingFormat embeddings_format = EmbeddingFormat::kVecText;
  std::filesystem::path corpus_path;
  CorpusFormat corpus_format = CorpusFormat::kJsonl;
  std::string tokenizer = "simple";
  std::filesystem::path wordpiece_vocab;

  std::vector<std::string> seed_words;
  SearchConfig search;
  std::size_t seed_text_count = 50;
  // Unset: "any" for one seed, "all" for several.
  std::optional<SeedMatch> seed_text_mode;
  std::optional<std::uint64_t> shuffle_seed;
  CandidateSource candidates = CandidateSource::kSeedTexts;

  LdaConfig lda;
  std::size_t lda_min_count = 5;
  std::filesystem::path stoplist_path;
  std::size_t lda_top_words = 10;
  std::size_t perplexity_every = 0;  // 0: sweeps / 10

  std::set<std::string> eval_targets;
  std::filesystem::path baseline_corpus_path;
  LogRegHyper baseline;

  std::filesystem::path output_dir = "out";

  // Relative paths in `j` are resolved against `base_dir`. Throws ConfigError.
  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static RunConfig load(const std::filesystem::path& path);
  Json to_json() const;

  SeedMatch effective_seed_text_mode() const;
  Tokenizer make_tokenizer() const;
};

struct OutputFile {
  std::string name;
  std::string sha256;
};

struct StageOutput {
  std::string stage;
  std::vector<OutputFile> files;
};

// Runs stages against one configuration, loading each input at most once.
// Every artifact is written under config.output_dir and embeds the config echo
// and content hashes of its inputs.
class Pipeline {
 public:
  explicit Pipeline(RunConfig config);

  // Seed-text selection plus bwgs (one seed) or bmdwgs (several).
  SearchResult search();
  StageOutput expand();

  RetrievalResult retrieval(const std::vector<std::string>& keywords);
  StageOutput retrieve(const std::filesystem::path& keywords_file);

  StageOutput topics(const std::filesystem::path& retrieval_file);

  EvalReport evaluation(const std::vector<std::string>& predicted_ids);
  StageOutput eval(const std::filesystem::path& retrieval_file);

  // expand -> retrieve -> topics -> eval (when labels and targets exist), then
  // manifest.json listing every stage output.
  std::vector<StageOutput> run_all();

  const RunConfig& config() const { return config_; }
  const std::vector<std::string>& notices() const { return notices_; }

 private:
  const EmbeddingTable& table();
  const Corpus& corpus();
  const std::string& embeddings_hash();
  const std::string& corpus_hash();
  OutputFile write(const std::string& name, const std::string& content);
  Json header(const std::vector<std::pair<std::string, std::string>>& inputs) const;
  void add_header(Json& target, const std::vector<std::pair<std::string, std::string>>& inputs) const;

  RunConfig config_;
  std::optional<EmbeddingTable> table_;
  std::optional<Corpus> corpus_;
  std::string embeddings_hash_;
  std::string corpus_hash_;
  std::vector<std::string> notices_;
};

inline constexpr char kKeywordsFile[] = "keywords.json";
inline constexpr char kGraphDotFile[] = "graph.dot";
inline constexpr char kGraphJsonFile[] = "graph.json";
inline constexpr char kRetrievalFile[] = "retrieval.jsonl";
inline constexpr char kRetrievalSummaryFile[] = "retrieval_summary.json";
inline constexpr char kTopicsFile[] = "topics.json";
inline constexpr char kEvalJsonFile[] = "eval.json";
inline constexpr char kEvalTableFile[] = "eval.txt";
inline constexpr char kManifestFile[] = "manifest.json";

}  // namespace seedgraph
