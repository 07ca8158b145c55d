#include "seedgraph/eval.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "seedgraph/random.h"

namespace seedgraph {

ConfusionCounts confusion(const IdSet& predicted_positive, const IdSet& gold_positive,
                          const IdSet& all_ids) {
  for (const auto* set : {&predicted_positive, &gold_positive}) {
    for (const auto& id : *set) {
      if (!all_ids.contains(id)) throw std::invalid_argument("id '" + id + "' not in evaluated set");
    }
  }
  ConfusionCounts c;
  for (const auto& id : predicted_positive) {
    if (gold_positive.contains(id)) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn = gold_positive.size() - c.tp;
  c.tn = all_ids.size() - c.tp - c.fp - c.fn;
  return c;
}

PrfScores prf_from(double precision, double recall) {
  PrfScores s{precision, recall, 0.0};
  if (precision + recall > 0.0) s.f1 = 2.0 * precision * recall / (precision + recall);
  return s;
}

PrfScores prf(const ConfusionCounts& counts) {
  const double tp = static_cast<double>(counts.tp);
  const double p = counts.tp + counts.fp == 0 ? 0.0 : tp / static_cast<double>(counts.tp + counts.fp);
  const double r = counts.tp + counts.fn == 0 ? 0.0 : tp / static_cast<double>(counts.tp + counts.fn);
  return prf_from(p, r);
}

IdSet project_gold(const Corpus& corpus, const std::set<std::string>& target_labels) {
  if (target_labels.empty()) throw std::invalid_argument("project_gold: empty target label set");
  IdSet out;
  for (const auto& d : corpus.documents) {
    const bool hit = std::any_of(d.gold_labels.begin(), d.gold_labels.end(),
                                 [&](const std::string& l) { return target_labels.contains(l); });
    if (hit) out.insert(d.id);
  }
  return out;
}

IdSet all_ids(const Corpus& corpus) {
  IdSet out;
  for (const auto& d : corpus.documents) out.insert(d.id);
  return out;
}

Corpus upsample(const Corpus& corpus, const IdSet& gold_positive, std::uint64_t seed) {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (gold_positive.contains(corpus.documents[i].id) ? pos : neg).push_back(i);
  }
  if (pos.empty() || neg.empty()) throw std::invalid_argument("upsample: a class is empty");

  Corpus out = corpus;
  const auto& minority = pos.size() < neg.size() ? pos : neg;
  const std::size_t deficit = std::max(pos.size(), neg.size()) - minority.size();
  Rng rng(seed);
  std::vector<std::size_t> copies(corpus.size(), 0);
  for (std::size_t n = 0; n < deficit; ++n) {
    const std::size_t src = minority[rng.uniform_index(minority.size())];
    Document dup = corpus.documents[src];
    dup.id += "#dup" + std::to_string(++copies[src]);
    out.documents.push_back(std::move(dup));
  }
  return out;
}

std::map<std::string, std::size_t> build_bow_vocab(const Corpus& corpus) {
  std::set<std::string> tokens;
  for (const auto& d : corpus.documents) tokens.insert(d.tokens.begin(), d.tokens.end());
  std::map<std::string, std::size_t> index;
  for (const auto& t : tokens) index.emplace(t, index.size());
  return index;
}

std::vector<std::size_t> bow_features(const std::map<std::string, std::size_t>& vocab_index,
                                      const Document& doc) {
  std::vector<std::size_t> cols;
  for (const auto& t : doc.tokens) {
    if (auto it = vocab_index.find(t); it != vocab_index.end()) cols.push_back(it->second);
  }
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  return cols;
}

BowDataset make_bow_dataset(const Corpus& corpus, const IdSet& gold_positive,
                            const std::map<std::string, std::size_t>& vocab_index) {
  BowDataset data;
  for (const auto& d : corpus.documents) {
    data.rows.push_back(bow_features(vocab_index, d));
    // Upsampled copies carry "#dup<n>" suffixes; label them by their source id.
    const std::string base = d.id.substr(0, d.id.rfind("#dup"));
    data.labels.push_back(gold_positive.contains(d.id) || gold_positive.contains(base) ? 1.0 : 0.0);
  }
  return data;
}

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logit(const std::vector<double>& weights, double bias, const std::vector<std::size_t>& row) {
  double z = bias;
  for (auto c : row) z += weights[c];
  return z;
}

}  // namespace

double bow_logreg_loss(const std::vector<double>& weights, double bias, const BowDataset& data,
                       double l2) {
  double loss = 0.0;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const double z = logit(weights, bias, data.rows[i]);
    // log(1 + e^z) - y z, evaluated without overflow.
    loss += std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - data.labels[i] * z;
  }
  loss /= static_cast<double>(data.rows.size());
  double sq = 0.0;
  for (double w : weights) sq += w * w;
  return loss + 0.5 * l2 * sq;
}

LogRegGradient bow_logreg_gradient(const std::vector<double>& weights, double bias,
                                   const BowDataset& data, double l2) {
  LogRegGradient g{std::vector<double>(weights.size(), 0.0), 0.0};
  const double n = static_cast<double>(data.rows.size());
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const double err = sigmoid(logit(weights, bias, data.rows[i])) - data.labels[i];
    for (auto c : data.rows[i]) g.weights[c] += err;
    g.bias += err;
  }
  for (std::size_t j = 0; j < weights.size(); ++j) g.weights[j] = g.weights[j] / n + l2 * weights[j];
  g.bias /= n;
  return g;
}

BowLogRegModel train_bow_logreg(const Corpus& corpus, const IdSet& gold_positive,
                                const LogRegHyper& hyper) {
  BowLogRegModel model;
  model.training_meta = hyper;
  model.vocab_index = build_bow_vocab(corpus);
  const BowDataset data = make_bow_dataset(corpus, gold_positive, model.vocab_index);
  const auto positives = std::count(data.labels.begin(), data.labels.end(), 1.0);
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(data.labels.size())) {
    throw std::invalid_argument("train_bow_logreg: need both classes");
  }
  model.weights.assign(model.vocab_index.size(), 0.0);
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    const auto g = bow_logreg_gradient(model.weights, model.bias, data, hyper.l2);
    for (std::size_t j = 0; j < model.weights.size(); ++j) {
      model.weights[j] -= hyper.learning_rate * g.weights[j];
    }
    model.bias -= hyper.learning_rate * g.bias;
    const double loss = bow_logreg_loss(model.weights, model.bias, data, hyper.l2);
    if (!std::isfinite(loss)) {
      throw TrainingError("logistic regression diverged at epoch " + std::to_string(epoch + 1));
    }
    model.loss_trace.push_back(loss);
  }
  return model;
}

double predict_bow_probability(const BowLogRegModel& model, const Document& doc) {
  return sigmoid(logit(model.weights, model.bias, bow_features(model.vocab_index, doc)));
}

bool predict_bow_logreg(const BowLogRegModel& model, const Document& doc) {
  return predict_bow_probability(model, doc) > 0.5;
}

}  // namespace seedgraph
