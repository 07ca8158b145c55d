#include <doctest.h>

#include <cmath>
#include <random>

#include "reported_scores.h"
#include "synthetic.h"
#include "seedgraph/eval.h"
#include "test_support.h"

using namespace seedgraph;
using testing_support::make_corpus;

namespace {

IdSet even_ids(const Corpus& c) {
  IdSet out;
  for (std::size_t i = 0; i < c.size(); i += 2) out.insert(c.documents[i].id);
  return out;
}

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({1e-8, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("confusion examples") {
  const IdSet all{"1", "2", "3"};
  CHECK(confusion({"1", "2"}, {"1", "2"}, all) == ConfusionCounts{2, 0, 0, 1});
  CHECK(confusion({}, {"1", "3"}, all) == ConfusionCounts{0, 0, 2, 1});
  CHECK(confusion({"3"}, {"1"}, all) == ConfusionCounts{0, 1, 1, 1});
  CHECK_THROWS_AS(confusion({"9"}, {}, all), std::invalid_argument);
  CHECK_THROWS_AS(confusion({}, {"9"}, all), std::invalid_argument);
}

TEST_CASE("confusion matches the element loop on random sets") {
  std::mt19937_64 rng(21);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> ids;
    IdSet all, pred, gold;
    const std::size_t n = 1 + rng() % 60;
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back("d" + std::to_string(i));
      all.insert(ids.back());
      if (coin(rng)) pred.insert(ids.back());
      if (coin(rng)) gold.insert(ids.back());
    }
    const auto c = confusion(pred, gold, all);
    const auto o = oracle::confusion_loop(ids, pred, gold);
    CHECK(c.tp == o.tp);
    CHECK(c.fp == o.fp);
    CHECK(c.fn == o.fn);
    CHECK(c.tn == o.tn);
    CHECK(c.total() == n);
  }
}

TEST_CASE("prf zero denominators and identity") {
  const auto zero = prf({0, 0, 0, 5});
  CHECK(zero.precision == 0.0);
  CHECK(zero.recall == 0.0);
  CHECK(zero.f1 == 0.0);
  const auto s = prf({3, 1, 2, 4});
  CHECK(s.precision == doctest::Approx(0.75));
  CHECK(s.recall == doctest::Approx(0.6));
  CHECK(s.f1 == doctest::Approx(2 * 0.75 * 0.6 / 1.35));
  CHECK(prf_from(0.0, 0.0).f1 == 0.0);
}

TEST_CASE("prf reproduces reported F1 scores") {
  for (const auto* rows : {&reported::kNewsRows, &reported::kTweetRows}) {
    for (const auto& row : *rows) {
      CAPTURE(row.label);
      CHECK(std::abs(prf_from(row.precision, row.recall).f1 - row.f1) <= 0.001);
    }
  }
}

TEST_CASE("project_gold") {
  auto corpus = make_corpus({{"a"}, {"b"}, {"c"}});
  corpus.documents[0].gold_labels = {"conspiracy"};
  corpus.documents[1].gold_labels = {"sarcasm"};
  corpus.documents[2].gold_labels = {"calling out or corrections", "other"};
  CHECK(project_gold(corpus, {"conspiracy", "calling out or corrections"}) == IdSet{"0", "2"});
  CHECK(project_gold(corpus, {"fake"}).empty());
  CHECK_THROWS_AS(project_gold(corpus, {}), std::invalid_argument);
  CHECK(all_ids(corpus) == IdSet{"0", "1", "2"});
}

TEST_CASE("upsample") {
  std::vector<std::vector<std::string>> docs(20, {"x"});
  auto balanced = make_corpus(docs);
  IdSet gold;
  for (int i = 0; i < 10; ++i) gold.insert(std::to_string(i));
  CHECK(upsample(balanced, gold, 1).size() == 20);

  auto skewed = make_corpus(std::vector<std::vector<std::string>>(10, {"x"}));
  const IdSet two{"3", "7"};
  const auto up = upsample(skewed, two, 9);
  REQUIRE(up.size() == 16);
  std::size_t positives = 0;
  for (std::size_t i = 0; i < up.size(); ++i) {
    const auto& id = up.documents[i].id;
    const auto base = id.substr(0, id.find('#'));
    positives += two.contains(base);
    if (i >= 10) CHECK(id.find("#dup") != std::string::npos);
  }
  CHECK(positives == 8);
  CHECK(all_ids(up).size() == 16);

  const auto again = upsample(skewed, two, 9);
  CHECK(all_ids(again) == all_ids(up));
  CHECK_THROWS_AS(upsample(skewed, {}, 1), std::invalid_argument);
  CHECK_THROWS_AS(upsample(skewed, all_ids(skewed), 1), std::invalid_argument);
}

TEST_CASE("duplicates keep their source label") {
  auto corpus = make_corpus({{"a"}, {"b"}, {"c"}});
  const auto up = upsample(corpus, {"0"}, 3);
  const auto data = make_bow_dataset(up, {"0"}, build_bow_vocab(up));
  CHECK(std::count(data.labels.begin(), data.labels.end(), 1.0) == 2);
}

TEST_CASE("logistic regression on a separable set") {
  const auto corpus = synthetic::separable_corpus(200);
  const auto gold = even_ids(corpus);
  const auto model = train_bow_logreg(corpus, gold, {});
  CHECK(model.weights.size() == model.vocab_index.size());
  CHECK(model.loss_trace.size() == 100);
  std::size_t correct = 0;
  for (const auto& d : corpus.documents) correct += predict_bow_logreg(model, d) == gold.contains(d.id);
  CHECK(static_cast<double>(correct) / 200.0 >= 0.99);
}

TEST_CASE("zero epochs predicts one half") {
  const auto corpus = synthetic::separable_corpus(10);
  const auto model = train_bow_logreg(corpus, even_ids(corpus), {.epochs = 0});
  for (const auto& d : corpus.documents) {
    CHECK(predict_bow_probability(model, d) == 0.5);
    CHECK_FALSE(predict_bow_logreg(model, d));
  }
  Document oov;
  oov.tokens = {"never", "seen"};
  CHECK(predict_bow_probability(model, oov) == 0.5);
  CHECK_THROWS_AS(train_bow_logreg(corpus, {}, {}), std::invalid_argument);
}

TEST_CASE("analytic gradient matches finite differences") {
  const auto corpus = make_corpus({{"a", "b"}, {"b", "c"}, {"a", "c", "d"}, {"d"}, {"a", "d", "e"}});
  const IdSet gold{"0", "2"};
  const auto vocab = build_bow_vocab(corpus);
  const auto data = make_bow_dataset(corpus, gold, vocab);
  const double l2 = 1e-4;

  auto check_at = [&](const std::vector<double>& w, double b) {
    std::vector<double> x = w;
    x.push_back(b);
    const auto numeric = oracle::central_difference(
        [&](const std::vector<double>& p) {
          return bow_logreg_loss(std::vector<double>(p.begin(), p.end() - 1), p.back(), data, l2);
        },
        x, 1e-5);
    const auto g = bow_logreg_gradient(w, b, data, l2);
    for (std::size_t j = 0; j < w.size(); ++j) CHECK(relative_error(g.weights[j], numeric[j]) <= 1e-5);
    CHECK(relative_error(g.bias, numeric.back()) <= 1e-5);
  };

  check_at(std::vector<double>(vocab.size(), 0.0), 0.0);
  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(vocab.size());
    for (auto& x : w) x = normal(rng);
    check_at(w, normal(rng));
  }
}

TEST_CASE("loss does not increase at a small learning rate") {
  const auto corpus = synthetic::separable_corpus(60);
  const auto model = train_bow_logreg(corpus, even_ids(corpus), {.epochs = 200, .learning_rate = 0.01});
  for (std::size_t i = 1; i < model.loss_trace.size(); ++i) {
    CHECK(model.loss_trace[i] <= model.loss_trace[i - 1]);
  }
}

TEST_CASE("fixture probabilities match hand-computed sigmoid") {
  BowLogRegModel model;
  model.vocab_index = {{"bad", 0}, {"news", 1}};
  model.weights = {2.0, -0.5};
  model.bias = 0.25;
  Document d;
  d.tokens = {"bad", "news", "bad", "unknown"};
  // Presence features: 2.0 - 0.5 + 0.25 = 1.75.
  CHECK(predict_bow_probability(model, d) == doctest::Approx(1.0 / (1.0 + std::exp(-1.75))));
  d.tokens = {"news"};
  CHECK(predict_bow_probability(model, d) == doctest::Approx(1.0 / (1.0 + std::exp(0.25))));
  CHECK_FALSE(predict_bow_logreg(model, d));
}
