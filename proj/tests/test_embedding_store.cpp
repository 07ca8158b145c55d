#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "seedgraph/embedding_store.h"
#include "seedgraph/errors.h"
#include "test_support.h"

using namespace seedgraph;

namespace {

std::string error_of(std::string_view text, EmbeddingFormat format) {
  try {
    parse_embeddings(text, format);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("vec-text: three tokens in two dimensions") {
  const auto table = parse_embeddings("3 2\nfake 1 0\nnews 0.5 -0.5\n##cies 0 1\n",
                                      EmbeddingFormat::kVecText);
  CHECK(table.size() == 3);
  CHECK(table.dim() == 2);
  CHECK(table.contains("##cies"));
  CHECK(table.find("news")->operator[](1) == -0.5);
  CHECK(table.tokens() == std::vector<std::string>{"fake", "news", "##cies"});
}

TEST_CASE("vec-text: parse errors name the line") {
  CHECK(error_of("3 2\na 1 0\nb 1 0 1\nc 0 1\n", EmbeddingFormat::kVecText) ==
        "inconsistent vector length at line 3");
  CHECK(error_of("3 2\na 1 0\nb 1\nc 0 1\n", EmbeddingFormat::kVecText) ==
        "inconsistent vector length at line 3");
  CHECK(error_of("two 2\na 1 0\n", EmbeddingFormat::kVecText) == "malformed header at line 1");
  CHECK(error_of("", EmbeddingFormat::kVecText) == "malformed header at line 1");
  CHECK(error_of("1 0\n", EmbeddingFormat::kVecText) == "malformed header at line 1");
  CHECK(error_of("2 2\na 1 0\nb nan 0\n", EmbeddingFormat::kVecText) ==
        "non-finite component at line 3");
  CHECK(error_of("2 2\na 1 0\nb inf 0\n", EmbeddingFormat::kVecText) ==
        "non-finite component at line 3");
  CHECK(error_of("2 2\na 1 0\na 0 1\n", EmbeddingFormat::kVecText) ==
        "duplicate token 'a' at line 3");
  CHECK(error_of("2 2\na 1 x\nb 0 1\n", EmbeddingFormat::kVecText) ==
        "malformed number 'x' at line 2");
  CHECK(error_of("1 2\na 1 0\nb 0 1\n", EmbeddingFormat::kVecText).starts_with("more records"));
  CHECK(error_of("3 2\na 1 0\nb 0 1\n", EmbeddingFormat::kVecText) ==
        "expected 3 records, found 2 at line 4");
}

TEST_CASE("vec-text tolerates CRLF and trailing spaces") {
  const auto table = parse_embeddings("2 2\r\na 1 0 \r\nb 0 1\r\n", EmbeddingFormat::kVecText);
  CHECK(table.size() == 2);
}

TEST_CASE("jsonl embeddings") {
  const auto table = parse_embeddings(
      "{\"token\": \"fake\", \"vec\": [1, 0, 0]}\n{\"token\": \"myth\", \"vec\": [0.25, 1e-3, -2]}\n",
      EmbeddingFormat::kJsonl);
  CHECK(table.dim() == 3);
  CHECK(table.find("myth")->operator[](2) == -2.0);

  CHECK(error_of("{\"token\": \"a\", \"vec\": [1, 0]}\n{\"token\": \"b\", \"vec\": [1]}\n",
                 EmbeddingFormat::kJsonl) == "inconsistent vector length at line 2");
  CHECK(error_of("{\"token\": \"a\", \"vec\": [1, 0]}\n{\"token\": \"a\", \"vec\": [0, 1]}\n",
                 EmbeddingFormat::kJsonl) == "duplicate token 'a' at line 2");
  CHECK(error_of("{\"vec\": [1]}\n", EmbeddingFormat::kJsonl) ==
        "record lacks string field 'token' at line 1");
  CHECK(error_of("{\"token\": \"\", \"vec\": [1]}\n", EmbeddingFormat::kJsonl) ==
        "empty token at line 1");
  CHECK(error_of("not json\n", EmbeddingFormat::kJsonl) == "malformed json record at line 1");
}

TEST_CASE("writer output round-trips through the loader exactly (10k x 768)") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  EmbeddingTable original(768);
  std::vector<double> v(768);
  for (int i = 0; i < 10000; ++i) {
    for (auto& x : v) x = normal(rng);
    original.add(i % 7 == 0 ? "##p" + std::to_string(i) : "tok" + std::to_string(i), v);
  }
  testing_support::TempDir dir("roundtrip");
  save_vec_text(original, dir.path() / "emb.vec");
  const auto loaded = load_embeddings(dir.path() / "emb.vec", EmbeddingFormat::kVecText);
  REQUIRE(loaded.size() == 10000);
  CHECK(loaded.dim() == 768);
  bool identical = true;
  for (std::size_t r = 0; r < original.size() && identical; ++r) {
    identical = loaded.token(r) == original.token(r) &&
                std::equal(loaded.row(r).begin(), loaded.row(r).end(), original.row(r).begin());
  }
  CHECK(identical);
}

TEST_CASE("load_embeddings on a missing file is a data error") {
  CHECK_THROWS_AS(load_embeddings("/nonexistent/emb.vec", EmbeddingFormat::kVecText), DataError);
}

TEST_CASE("table rejects invalid rows") {
  EmbeddingTable t(2);
  const std::vector<double> ok{1, 0};
  const std::vector<double> bad{1, NAN};
  CHECK_THROWS_AS(t.add("", ok), std::invalid_argument);
  CHECK_THROWS_AS(t.add("a", bad), std::invalid_argument);
  CHECK_THROWS_AS(t.add("a", std::vector<double>{1}), std::invalid_argument);
  t.add("a", ok);
  CHECK_THROWS_AS(t.add("a", ok), std::invalid_argument);
  CHECK_THROWS_AS(EmbeddingTable(0), std::invalid_argument);
}

TEST_CASE("cosine similarity examples") {
  const std::vector<double> x{1, 0}, y{0, 1}, a{1, 2}, b{2, 1}, zero{0, 0};
  CHECK(cosine_similarity(x, x) == 1.0);
  CHECK(cosine_similarity(x, y) == 0.0);
  // dot 4, norms sqrt5 * sqrt5
  CHECK(cosine_similarity(a, b) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(cosine_similarity(zero, a) == -1.0);
  CHECK(cosine_similarity(a, zero) == -1.0);
  CHECK_THROWS_AS(cosine_similarity(x, std::vector<double>{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("cosine similarity properties on random vectors") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> a(1 + trial % 50), b(a.size());
    for (auto& x : a) x = normal(rng);
    for (auto& x : b) x = normal(rng);
    double n = 0;
    for (double x : a) n += x * x;
    std::vector<double> unit = a;
    for (auto& x : unit) x /= std::sqrt(n);
    CHECK(std::abs(cosine_similarity(unit, unit) - 1.0) <= 1e-9);
    CHECK(std::abs(cosine_similarity(a, b) - cosine_similarity(b, a)) <= 1e-12);
    const double s = cosine_similarity(a, b);
    CHECK(s >= -1.0 - 1e-12);
    CHECK(s <= 1.0 + 1e-12);
  }
}

TEST_CASE("top_k_similar examples") {
  const auto entries = oracle::unit_circle_fixture();
  const auto table = testing_support::make_table(entries);

  SUBCASE("self-similarity is maximal") {
    const auto hits = top_k_similar(table, *table.find("u055"), 1, 0.0, {});
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].token == "u055");
    CHECK(hits[0].similarity == doctest::Approx(1.0));
  }
  SUBCASE("threshold above one returns nothing") {
    CHECK(top_k_similar(table, *table.find("u000"), 5, 1.1, {}).empty());
  }
  SUBCASE("diagonal query matches the exhaustive oracle") {
    const std::vector<double> q{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
    const auto expected = oracle::exhaustive_top_k(entries, q, 4, 0.4, {});
    const auto hits = top_k_similar(table, q, 4, 0.4, {});
    REQUIRE(hits.size() == 4);
    // Frozen from the oracle: the four tokens nearest 45 degrees.
    CHECK(std::vector<std::string>{hits[0].token, hits[1].token, hits[2].token, hits[3].token} ==
          std::vector<std::string>{"u038", "u055", "u029", "u067"});
    for (std::size_t i = 0; i < 4; ++i) CHECK(hits[i].token == expected[i].first);
  }
  SUBCASE("exclusion and short results") {
    const auto hits = top_k_similar(table, *table.find("u140"), 10, 0.9, {"u140"});
    CHECK(hits.empty());
  }
  SUBCASE("k = 0 is an error") {
    CHECK_THROWS_AS(top_k_similar(table, *table.find("u000"), 0, 0.0, {}), std::invalid_argument);
  }
  SUBCASE("query dimension is checked") {
    CHECK_THROWS_AS(top_k_similar(table, std::vector<double>{1, 0, 0}, 1, 0.0, {}),
                    std::invalid_argument);
  }
}

TEST_CASE("top_k_similar ties break lexicographically") {
  EmbeddingTable t(2);
  // Exact norms (5 and 10) so all three similarities are exactly 1.
  t.add("zeta", std::vector<double>{3, 4});
  t.add("alpha", std::vector<double>{6, 8});
  t.add("mid", std::vector<double>{3, 4});
  const auto hits = top_k_similar(t, std::vector<double>{3, 4}, 3, -1.0, {});
  REQUIRE(hits.size() == 3);
  CHECK(hits[0].token == "alpha");
  CHECK(hits[1].token == "mid");
  CHECK(hits[2].token == "zeta");
}

TEST_CASE("top_k_similar equals the exhaustive oracle on random tables") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size_dist(1, 1000);
  std::uniform_real_distribution<double> thr(-0.5, 0.5);
  for (int q = 0; q < 100; ++q) {
    const std::size_t dim = 2 + q % 6;
    auto entries = testing_support::random_entries(rng, static_cast<std::size_t>(size_dist(rng)), dim);
    // Duplicate a few vectors under different names to force exact ties.
    for (std::size_t i = 0; i < std::min<std::size_t>(5, entries.size()); ++i) {
      entries.push_back({"dup" + std::to_string(i), entries[i].vec});
    }
    const auto table = testing_support::make_table(entries);
    const auto query = testing_support::random_entries(rng, 1, dim).front().vec;
    const std::size_t k = 1 + q % 20;
    const double threshold = thr(rng);
    std::set<std::string> exclude{"w0", "w3"};
    const auto expected = oracle::exhaustive_top_k(entries, query, k, threshold, exclude);
    const auto hits = top_k_similar(table, query, k, threshold, TokenSet(exclude.begin(), exclude.end()));
    REQUIRE(hits.size() == expected.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
      CHECK(hits[i].token == expected[i].first);
      CHECK(hits[i].similarity >= threshold);
      CHECK(!exclude.count(hits[i].token));
      if (i > 0) CHECK(hits[i - 1].similarity >= hits[i].similarity);
    }
  }
}
