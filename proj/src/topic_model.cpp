#include "seedgraph/topic_model.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <stdexcept>

#include "seedgraph/errors.h"
#include "text_util.h"

namespace seedgraph {

void LdaConfig::validate() const {
  if (num_topics < 2) throw ConfigError("num_topics must be at least 2");
  if (alpha && !(*alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  if (sweeps == 0) throw ConfigError("sweeps must be positive");
}

std::set<std::string> default_stoplist() {
  return {"a",     "about", "after", "all",   "also",  "am",    "an",    "and",   "any",
          "are",   "as",    "at",    "be",    "been",  "but",   "by",    "can",   "could",
          "did",   "do",    "does",  "for",   "from",  "had",   "has",   "have",  "he",
          "her",   "him",   "his",   "how",   "i",     "if",    "in",    "into",  "is",
          "it",    "its",   "just",  "me",    "more",  "my",    "no",    "not",   "now",
          "of",    "on",    "one",   "or",    "our",   "out",   "rt",    "she",   "so",
          "some",  "than",  "that",  "the",   "their", "them",  "then",  "there", "these",
          "they",  "this",  "to",    "up",    "us",    "was",   "we",    "were",  "what",
          "when",  "which", "who",   "will",  "with",  "would", "you",   "your"};
}

std::set<std::string> load_stoplist(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::set<std::string> words;
  for (auto w : split_fields(text)) words.emplace(w);
  return words;
}

LdaPreprocess LdaPreprocess::defaults() { return LdaPreprocess{default_stoplist(), 5}; }

std::size_t LdaCorpus::num_tokens() const {
  std::size_t n = 0;
  for (const auto& d : docs) n += d.size();
  return n;
}

LdaCorpus prepare_lda_corpus(const Corpus& corpus, const LdaPreprocess& preprocess) {
  if (corpus.empty()) throw DataError("empty corpus for LDA");
  std::map<std::string, std::size_t> freq;
  for (const auto& d : corpus.documents) {
    for (const auto& t : d.tokens) ++freq[t];
  }
  LdaCorpus out;
  std::unordered_map<std::string, std::uint32_t> index;
  for (const auto& [token, count] : freq) {
    if (count < preprocess.min_count || preprocess.stoplist.contains(token) ||
        token == kUrlToken || token == kUnknownToken) {
      continue;
    }
    index.emplace(token, static_cast<std::uint32_t>(out.vocab.size()));
    out.vocab.push_back(token);
  }
  if (out.vocab.empty()) throw DataError("empty vocabulary after LDA preprocessing");
  for (const auto& d : corpus.documents) {
    std::vector<std::uint32_t> ids;
    for (const auto& t : d.tokens) {
      if (auto it = index.find(t); it != index.end()) ids.push_back(it->second);
    }
    out.doc_ids.push_back(d.id);
    out.docs.push_back(std::move(ids));
  }
  return out;
}

std::optional<std::size_t> LdaModel::word_index(std::string_view token) const {
  auto it = vocab_index_.find(std::string(token));
  if (it == vocab_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> LdaModel::doc_index(std::string_view id) const {
  auto it = doc_index_.find(std::string(id));
  if (it == doc_index_.end()) return std::nullopt;
  return it->second;
}

double LdaModel::phi(std::size_t topic, std::size_t word) const {
  return (topic_word(topic, word) + beta_) /
         (topic_totals_[topic] + beta_ * static_cast<double>(vocab_.size()));
}

double LdaModel::theta(std::size_t doc, std::size_t topic) const {
  return (doc_topic(doc, topic) + alpha_) /
         (static_cast<double>(docs_[doc].size()) + alpha_ * static_cast<double>(num_topics_));
}

bool LdaModel::counts_consistent() const {
  const std::size_t V = vocab_.size();
  const std::size_t K = num_topics_;
  std::vector<int> tw(K * V, 0);
  std::vector<int> dt(docs_.size() * K, 0);
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    if (assignments_[d].size() != docs_[d].size()) return false;
    for (std::size_t i = 0; i < docs_[d].size(); ++i) {
      const auto z = assignments_[d][i];
      if (z >= K) return false;
      ++tw[z * V + docs_[d][i]];
      ++dt[d * K + z];
    }
  }
  if (tw != topic_word_ || dt != doc_topic_) return false;
  for (std::size_t t = 0; t < K; ++t) {
    long long row = 0;
    for (std::size_t w = 0; w < V; ++w) row += topic_word(t, w);
    if (row != topic_totals_[t]) return false;
  }
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    long long row = 0;
    for (std::size_t t = 0; t < K; ++t) row += doc_topic(d, t);
    if (row != static_cast<long long>(docs_[d].size())) return false;
  }
  return true;
}

GibbsSampler::GibbsSampler(LdaCorpus corpus, const LdaConfig& config) : rng_(config.rng_seed) {
  config.validate();
  if (corpus.vocab.empty() || corpus.num_tokens() == 0) {
    throw DataError("empty vocabulary after LDA preprocessing");
  }
  const std::size_t K = config.num_topics;
  const std::size_t V = corpus.vocab.size();
  LdaModel& m = model_;
  m.num_topics_ = K;
  m.alpha_ = config.effective_alpha();
  m.beta_ = config.beta;
  m.vocab_ = std::move(corpus.vocab);
  for (std::size_t w = 0; w < V; ++w) m.vocab_index_.emplace(m.vocab_[w], w);
  m.doc_ids_ = std::move(corpus.doc_ids);
  for (std::size_t d = 0; d < m.doc_ids_.size(); ++d) m.doc_index_.emplace(m.doc_ids_[d], d);
  m.docs_ = std::move(corpus.docs);
  m.topic_word_.assign(K * V, 0);
  m.doc_topic_.assign(m.docs_.size() * K, 0);
  m.topic_totals_.assign(K, 0);
  m.assignments_.resize(m.docs_.size());
  for (std::size_t d = 0; d < m.docs_.size(); ++d) {
    auto& z = m.assignments_[d];
    z.resize(m.docs_[d].size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      const auto t = static_cast<std::uint32_t>(rng_.uniform_index(K));
      z[i] = t;
      ++m.topic_word_[t * V + m.docs_[d][i]];
      ++m.doc_topic_[d * K + t];
      ++m.topic_totals_[t];
    }
  }
  cumulative_.resize(K);
}

void GibbsSampler::sweep() {
  LdaModel& m = model_;
  const std::size_t K = m.num_topics_;
  const std::size_t V = m.vocab_.size();
  const double alpha = m.alpha_;
  const double beta = m.beta_;
  const double vbeta = beta * static_cast<double>(V);
  for (std::size_t d = 0; d < m.docs_.size(); ++d) {
    const auto& words = m.docs_[d];
    auto& z = m.assignments_[d];
    int* doc_row = m.doc_topic_.data() + d * K;
    for (std::size_t i = 0; i < words.size(); ++i) {
      const std::size_t w = words[i];
      std::uint32_t t = z[i];
      --m.topic_word_[t * V + w];
      --doc_row[t];
      --m.topic_totals_[t];

      double total = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        total += (doc_row[k] + alpha) * (m.topic_word_[k * V + w] + beta) /
                 (m.topic_totals_[k] + vbeta);
        cumulative_[k] = total;
      }
      const double u = rng_.uniform01() * total;
      t = 0;
      while (t + 1 < K && cumulative_[t] <= u) ++t;

      z[i] = t;
      ++m.topic_word_[t * V + w];
      ++doc_row[t];
      ++m.topic_totals_[t];
    }
  }
  ++sweeps_done_;
  assert(m.counts_consistent());
}

LdaModel fit_lda(const Corpus& corpus, const LdaConfig& config, const LdaPreprocess& preprocess,
                 const SweepObserver& observer) {
  config.validate();
  GibbsSampler sampler(prepare_lda_corpus(corpus, preprocess), config);
  for (std::size_t s = 0; s < config.sweeps; ++s) {
    sampler.sweep();
    if (observer) observer(sampler.sweeps_done(), sampler.model());
  }
  return std::move(sampler).take_model();
}

std::vector<WordWeight> top_words(const LdaModel& model, std::size_t topic, std::size_t n) {
  if (topic >= model.num_topics()) {
    throw std::out_of_range("topic index " + std::to_string(topic) + " out of range");
  }
  std::vector<std::size_t> order(model.vocab_size());
  for (std::size_t w = 0; w < order.size(); ++w) order[w] = w;
  const std::size_t keep = std::min(n, order.size());
  // Vocabulary is sorted, so index order is token order.
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      const int ca = model.topic_word(topic, a);
                      const int cb = model.topic_word(topic, b);
                      if (ca != cb) return ca > cb;
                      return model.vocab()[a] < model.vocab()[b];
                    });
  std::vector<WordWeight> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.push_back({model.vocab()[order[i]], model.phi(topic, order[i])});
  }
  return out;
}

namespace {

double word_likelihood(const LdaModel& model, std::optional<std::size_t> doc, std::size_t word) {
  const std::size_t K = model.num_topics();
  double p = 0.0;
  for (std::size_t t = 0; t < K; ++t) {
    const double th = doc ? model.theta(*doc, t) : 1.0 / static_cast<double>(K);
    p += th * model.phi(t, word);
  }
  return p;
}

}  // namespace

double perplexity(const LdaModel& model, const Corpus& corpus) {
  double log_sum = 0.0;
  std::size_t n = 0;
  for (const auto& d : corpus.documents) {
    const auto doc = model.doc_index(d.id);
    for (const auto& t : d.tokens) {
      const auto w = model.word_index(t);
      if (!w) continue;
      log_sum += std::log(word_likelihood(model, doc, *w));
      ++n;
    }
  }
  if (n == 0) throw DataError("perplexity: zero usable tokens");
  return std::exp(-log_sum / static_cast<double>(n));
}

double training_perplexity(const LdaModel& model) {
  double log_sum = 0.0;
  std::size_t n = 0;
  for (std::size_t d = 0; d < model.num_docs(); ++d) {
    for (auto w : model.docs()[d]) {
      log_sum += std::log(word_likelihood(model, d, w));
      ++n;
    }
  }
  if (n == 0) throw DataError("perplexity: zero usable tokens");
  return std::exp(-log_sum / static_cast<double>(n));
}

}  // namespace seedgraph
