#include "seedgraph/report.h"

#include <cmath>
#include <cstdio>

#include <openssl/evp.h>

#include "seedgraph/errors.h"
#include "text_util.h"

namespace seedgraph {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

Json to_json(const SearchConfig& config) {
  return Json{{"min_sim_thresh", config.min_sim_thresh},
              {"max_depth", config.max_depth},
              {"top_k", config.top_k},
              {"context_mix", config.context_mix}};
}

Json to_json(const LdaConfig& config) {
  Json j{{"num_topics", config.num_topics}};
  j["alpha"] = config.effective_alpha();
  j["beta"] = config.beta;
  j["sweeps"] = config.sweeps;
  j["rng_seed"] = config.rng_seed;
  return j;
}

Json search_report(const SearchResult& result) {
  Json j;
  if (result.seeds.size() == 1) {
    j["seed"] = result.seeds.front();
  } else {
    j["seeds"] = result.seeds;
  }
  j["algorithm"] = result.seeds.size() == 1 ? "bwgs" : "bmdwgs";
  j["config"] = to_json(result.config);
  j["keywords"] = Json::array();
  for (const auto& k : result.keywords) {
    Json e{{"token", k.token}, {"depth", k.depth}};
    e["parent"] = k.parent.empty() ? Json(nullptr) : Json(k.parent);
    e["similarity"] = k.similarity;
    j["keywords"].push_back(std::move(e));
  }
  if (result.runs.empty()) {
    j["context_trace"] = result.context_trace;
  } else {
    Json traces = Json::object();
    for (const auto& run : result.runs) traces[run.seeds.front()] = run.context_trace;
    j["context_trace"] = std::move(traces);
  }
  j["warnings"] = result.warnings;
  return j;
}

std::vector<std::string> parse_keywords_file(std::string_view text) {
  const auto body = trim(text);
  if (body.empty()) return {};
  std::vector<std::string> out;
  if (body.front() == '{') {
    try {
      const auto j = nlohmann::json::parse(body);
      for (const auto& k : j.at("keywords")) out.push_back(k.at("token").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("malformed keywords report: ") + e.what());
    }
    return out;
  }
  LineReader lines(body);
  std::string_view line;
  while (lines.next(line)) {
    auto t = trim(line);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

Json retrieval_summary(const RetrievalResult& result) {
  Json j;
  j["tokenizer"] = result.tokenizer_id;
  j["n_documents"] = result.n_documents;
  j["n_positive"] = result.positive_ids.size();
  j["rate"] = result.rate();
  j["keyword_hit_counts"] = result.keyword_hit_counts;
  j["warnings"] = result.warnings;
  return j;
}

Json topic_report(const LdaModel& model, const LdaConfig& config, std::size_t top_n,
                  const std::vector<PerplexityPoint>& trace) {
  Json j;
  j["lda"] = to_json(config);
  j["n_documents"] = model.num_docs();
  j["vocab_size"] = model.vocab_size();
  j["topics"] = Json::array();
  for (std::size_t t = 0; t < model.num_topics(); ++t) {
    Json words = Json::array();
    for (const auto& w : top_words(model, t, top_n)) {
      words.push_back({{"token", w.token}, {"weight", w.weight}});
    }
    j["topics"].push_back({{"id", t}, {"top_words", std::move(words)}});
  }
  j["perplexity_trace"] = Json::array();
  for (const auto& p : trace) {
    j["perplexity_trace"].push_back({{"sweep", p.sweep}, {"perplexity", p.perplexity}});
  }
  return j;
}

Json to_json(const EvalReport& report) {
  Json j;
  j["config"] = report.config_echo;
  j["rows"] = Json::array();
  for (const auto& r : report.rows) {
    Json row{{"method", r.method}, {"seeds", r.seeds}};
    row["search"] = r.search ? to_json(*r.search) : Json(nullptr);
    row["counts"] = {{"tp", r.counts.tp}, {"fp", r.counts.fp}, {"fn", r.counts.fn}, {"tn", r.counts.tn}};
    row["precision"] = r.scores.precision;
    row["recall"] = r.scores.recall;
    row["f1"] = r.scores.f1;
    j["rows"].push_back(std::move(row));
  }
  return j;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string format_eval_table(const EvalReport& report) {
  const std::vector<std::string> header{"Method", "Seed Word(s)", "Similarity Threshold",
                                        "Max Depth", "Top k", "Precision", "Recall", "F1-Score"};
  std::vector<std::vector<std::string>> cells{header};
  for (const auto& r : report.rows) {
    std::string seeds;
    for (const auto& s : r.seeds) seeds += (seeds.empty() ? "" : ",") + s;
    cells.push_back({r.method, seeds.empty() ? "-" : seeds,
                     r.search ? fixed(r.search->min_sim_thresh, 2) : "-",
                     r.search ? std::to_string(r.search->max_depth) : "-",
                     r.search ? std::to_string(r.search->top_k) : "-", fixed(r.scores.precision, 3),
                     fixed(r.scores.recall, 3), fixed(r.scores.f1, 3)});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::string line;
    for (std::size_t c = 0; c < cells[i].size(); ++c) {
      line += c + 1 == cells[i].size() ? cells[i][c] : pad(cells[i][c], width[c]) + "  ";
    }
    out += line + "\n";
    if (i == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      out += std::string(total - 2, '-') + "\n";
    }
  }
  return out;
}

std::vector<std::string> check_eval_report(const Json& report) {
  std::vector<std::string> failures;
  for (const auto& row : report.at("rows")) {
    const auto name = row.at("method").get<std::string>();
    const double p = row.at("precision").get<double>();
    const double r = row.at("recall").get<double>();
    const double f1 = row.at("f1").get<double>();
    if (std::abs(prf_from(p, r).f1 - f1) > 1e-12) failures.push_back(name + ": f1 mismatch");
    const auto& c = row.at("counts");
    ConfusionCounts counts{c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(),
                           c.at("fn").get<std::size_t>(), c.at("tn").get<std::size_t>()};
    const auto recomputed = prf(counts);
    if (std::abs(recomputed.precision - p) > 1e-12 || std::abs(recomputed.recall - r) > 1e-12) {
      failures.push_back(name + ": counts do not reproduce precision/recall");
    }
  }
  return failures;
}

}  // namespace seedgraph
