#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "seedgraph/corpus.h"

namespace seedgraph {

using IdSet = std::set<std::string>;

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Throws std::invalid_argument when predicted or gold holds an id outside all_ids.
ConfusionCounts confusion(const IdSet& predicted_positive, const IdSet& gold_positive,
                          const IdSet& all_ids);

// Zero denominators give zero scores.
PrfScores prf(const ConfusionCounts& counts);
PrfScores prf_from(double precision, double recall);

// Ids whose gold labels intersect `target_labels`. Throws std::invalid_argument
// when target_labels is empty.
IdSet project_gold(const Corpus& corpus, const std::set<std::string>& target_labels);

IdSet all_ids(const Corpus& corpus);

// Duplicates minority-class documents, drawn with replacement from `seed`,
// until both classes have equal size. Copies are appended after the original
// documents with ids "<id>#dup<n>". Throws std::invalid_argument when a class
// is empty.
Corpus upsample(const Corpus& corpus, const IdSet& gold_positive, std::uint64_t seed);

struct LogRegHyper {
  std::size_t epochs = 100;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

struct BowLogRegModel {
  std::map<std::string, std::size_t> vocab_index;
  std::vector<double> weights;
  double bias = 0.0;
  LogRegHyper training_meta;
  std::vector<double> loss_trace;
};

// Binary presence features: each row lists the distinct column ids it contains.
struct BowDataset {
  std::vector<std::vector<std::size_t>> rows;
  std::vector<double> labels;
};

std::map<std::string, std::size_t> build_bow_vocab(const Corpus& corpus);
std::vector<std::size_t> bow_features(const std::map<std::string, std::size_t>& vocab_index,
                                      const Document& doc);
BowDataset make_bow_dataset(const Corpus& corpus, const IdSet& gold_positive,
                            const std::map<std::string, std::size_t>& vocab_index);

// Mean cross-entropy plus (l2 / 2) * |w|^2; the bias is not penalized.
double bow_logreg_loss(const std::vector<double>& weights, double bias, const BowDataset& data,
                       double l2);

struct LogRegGradient {
  std::vector<double> weights;
  double bias = 0.0;
};

LogRegGradient bow_logreg_gradient(const std::vector<double>& weights, double bias,
                                   const BowDataset& data, double l2);

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Full-batch gradient descent from zero weights. Throws std::invalid_argument
// with fewer than two classes, TrainingError when the loss turns non-finite.
BowLogRegModel train_bow_logreg(const Corpus& corpus, const IdSet& gold_positive,
                                const LogRegHyper& hyper);

double predict_bow_probability(const BowLogRegModel& model, const Document& doc);
// probability > 0.5
bool predict_bow_logreg(const BowLogRegModel& model, const Document& doc);

}  // namespace seedgraph
