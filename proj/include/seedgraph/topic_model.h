#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "seedgraph/corpus.h"
#include "seedgraph/random.h"

namespace seedgraph {

struct LdaConfig {
  std::size_t num_topics = 25;
  // Symmetric document-topic prior; 50 / num_topics when unset.
  std::optional<double> alpha;
  double beta = 0.01;
  std::size_t sweeps = 1000;
  std::uint64_t rng_seed = 1;

  double effective_alpha() const {
    return alpha.value_or(50.0 / static_cast<double>(num_topics));
  }
  // Throws ConfigError.
  void validate() const;
};

struct LdaPreprocess {
  std::set<std::string> stoplist;
  std::size_t min_count = 5;

  // Built-in English stoplist, min_count 5.
  static LdaPreprocess defaults();
};

std::set<std::string> default_stoplist();
std::set<std::string> load_stoplist(const std::filesystem::path& path);

// Documents as column ids into a lexicographically sorted vocabulary.
struct LdaCorpus {
  std::vector<std::string> vocab;
  std::vector<std::string> doc_ids;
  std::vector<std::vector<std::uint32_t>> docs;

  std::size_t num_tokens() const;
};

// Drops stoplisted tokens, <url>/<unk>, and tokens whose corpus frequency is
// below min_count. Throws DataError when no documents or no tokens remain.
LdaCorpus prepare_lda_corpus(const Corpus& corpus, const LdaPreprocess& preprocess);

class LdaModel {
 public:
  std::size_t num_topics() const { return num_topics_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  std::size_t num_docs() const { return docs_.size(); }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  int topic_word(std::size_t topic, std::size_t word) const {
    return topic_word_[topic * vocab_.size() + word];
  }
  int doc_topic(std::size_t doc, std::size_t topic) const {
    return doc_topic_[doc * num_topics_ + topic];
  }
  int topic_total(std::size_t topic) const { return topic_totals_[topic]; }

  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }
  const std::vector<std::vector<std::uint32_t>>& docs() const { return docs_; }
  const std::vector<std::vector<std::uint32_t>>& assignments() const { return assignments_; }
  std::optional<std::size_t> word_index(std::string_view token) const;
  std::optional<std::size_t> doc_index(std::string_view id) const;

  // Point estimates from the current counts.
  double phi(std::size_t topic, std::size_t word) const;
  double theta(std::size_t doc, std::size_t topic) const;

  // Row sums of topic_word match topic_totals, row sums of doc_topic match
  // document lengths, every assignment is a valid topic and the count
  // matrices agree with the assignments.
  bool counts_consistent() const;

 private:
  friend class GibbsSampler;

  std::size_t num_topics_ = 0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> vocab_index_;
  std::vector<std::string> doc_ids_;
  std::unordered_map<std::string, std::size_t> doc_index_;
  std::vector<std::vector<std::uint32_t>> docs_;
  std::vector<std::vector<std::uint32_t>> assignments_;
  std::vector<int> topic_word_;
  std::vector<int> doc_topic_;
  std::vector<int> topic_totals_;
};

// Collapsed Gibbs sampler for one chain.
class GibbsSampler {
 public:
  // Draws uniform initial assignments from config.rng_seed.
  GibbsSampler(LdaCorpus corpus, const LdaConfig& config);

  // Resamples every token position once, in document then position order.
  void sweep();
  std::size_t sweeps_done() const { return sweeps_done_; }

  const LdaModel& model() const { return model_; }
  LdaModel take_model() && { return std::move(model_); }

 private:
  LdaModel model_;
  Rng rng_;
  std::vector<double> cumulative_;
  std::size_t sweeps_done_ = 0;
};

// Called after each sweep with the number of sweeps completed.
using SweepObserver = std::function<void(std::size_t, const LdaModel&)>;

// Throws ConfigError for num_topics < 2, DataError for an empty filtered corpus.
LdaModel fit_lda(const Corpus& corpus, const LdaConfig& config,
                 const LdaPreprocess& preprocess = LdaPreprocess::defaults(),
                 const SweepObserver& observer = {});

struct WordWeight {
  std::string token;
  double weight = 0.0;
};

// Highest topic_word count first, ties by token. Weight is phi(topic, word).
// Throws std::out_of_range for a bad topic index.
std::vector<WordWeight> top_words(const LdaModel& model, std::size_t topic, std::size_t n);

// exp(-sum log p(w | d) / N). Documents are matched to the model by id; a
// document the model has not seen uses a uniform topic mixture. Tokens outside
// the model vocabulary are skipped. Throws DataError when no token is usable.
double perplexity(const LdaModel& model, const Corpus& corpus);

// Perplexity of the model's own training documents.
double training_perplexity(const LdaModel& model);

}  // namespace seedgraph
