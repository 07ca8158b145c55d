#include "seedgraph/pipeline.h"

#include <algorithm>
#include <unordered_set>

#include "seedgraph/errors.h"
#include "text_util.h"

namespace seedgraph {

namespace {

using nlohmann::json;

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal();
}

SeedMatch parse_seed_mode(const std::string& s) {
  if (s == "any") return SeedMatch::kAny;
  if (s == "all") return SeedMatch::kAll;
  throw ConfigError("seed_texts.mode must be 'any', 'all' or 'auto'");
}

const json& section(const json& j, const char* key) {
  static const json kEmpty = json::object();
  if (!j.contains(key) || j[key].is_null()) return kEmpty;
  if (!j[key].is_object()) throw ConfigError(std::string("config section '") + key + "' must be an object");
  return j[key];
}

}  // namespace

RunConfig RunConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a json object");
  RunConfig c;
  c.embeddings_path = resolve(base_dir, get_or<std::string>(j, "embeddings", ""));
  c.embeddings_format = parse_embedding_format(get_or<std::string>(j, "embeddings_format", "vec-text"));
  c.corpus_path = resolve(base_dir, get_or<std::string>(j, "corpus", ""));
  c.corpus_format = parse_corpus_format(get_or<std::string>(j, "corpus_format", "jsonl"));
  c.tokenizer = get_or<std::string>(j, "tokenizer", "simple");
  c.wordpiece_vocab = resolve(base_dir, get_or<std::string>(j, "wordpiece_vocab", ""));
  c.seed_words = get_or<std::vector<std::string>>(j, "seeds", {});

  const json& search = section(j, "search");
  c.search.min_sim_thresh = get_or<double>(search, "threshold", c.search.min_sim_thresh);
  c.search.max_depth = get_or<std::size_t>(search, "max_depth", c.search.max_depth);
  c.search.top_k = get_or<std::size_t>(search, "top_k", c.search.top_k);
  c.search.context_mix = get_or<double>(search, "context_mix", c.search.context_mix);

  const json& seeds = section(j, "seed_texts");
  c.seed_text_count = get_or<std::size_t>(seeds, "count", c.seed_text_count);
  const auto mode = get_or<std::string>(seeds, "mode", "auto");
  if (mode != "auto") c.seed_text_mode = parse_seed_mode(mode);
  if (seeds.contains("shuffle_seed") && !seeds["shuffle_seed"].is_null()) {
    c.shuffle_seed = get_or<std::uint64_t>(seeds, "shuffle_seed", 0);
  }
  const auto candidates = get_or<std::string>(seeds, "candidates", "seed-texts");
  if (candidates == "seed-texts") {
    c.candidates = CandidateSource::kSeedTexts;
  } else if (candidates == "corpus") {
    c.candidates = CandidateSource::kCorpus;
  } else {
    throw ConfigError("seed_texts.candidates must be 'seed-texts' or 'corpus'");
  }

  const json& lda = section(j, "lda");
  c.lda.num_topics = get_or<std::size_t>(lda, "num_topics", c.lda.num_topics);
  if (lda.contains("alpha") && !lda["alpha"].is_null()) c.lda.alpha = get_or<double>(lda, "alpha", 0.0);
  c.lda.beta = get_or<double>(lda, "beta", c.lda.beta);
  c.lda.sweeps = get_or<std::size_t>(lda, "sweeps", c.lda.sweeps);
  c.lda.rng_seed = get_or<std::uint64_t>(lda, "seed", c.lda.rng_seed);
  c.lda_min_count = get_or<std::size_t>(lda, "min_count", c.lda_min_count);
  c.stoplist_path = resolve(base_dir, get_or<std::string>(lda, "stoplist", ""));
  c.lda_top_words = get_or<std::size_t>(lda, "top_words", c.lda_top_words);
  c.perplexity_every = get_or<std::size_t>(lda, "perplexity_every", c.perplexity_every);

  const json& ev = section(j, "eval");
  for (auto& t : get_or<std::vector<std::string>>(ev, "targets", {})) c.eval_targets.insert(t);
  c.baseline_corpus_path = resolve(base_dir, get_or<std::string>(ev, "baseline_corpus", ""));
  const json& lr = section(ev, "baseline");
  c.baseline.epochs = get_or<std::size_t>(lr, "epochs", c.baseline.epochs);
  c.baseline.learning_rate = get_or<double>(lr, "learning_rate", c.baseline.learning_rate);
  c.baseline.l2 = get_or<double>(lr, "l2", c.baseline.l2);
  c.baseline.seed = get_or<std::uint64_t>(lr, "seed", c.baseline.seed);

  c.output_dir = resolve(base_dir, get_or<std::string>(j, "out", "out"));
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const DataError&) {
    throw ConfigError("cannot read config '" + path.string() + "'");
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed config '" + path.string() + "': " + e.what());
  }
  return from_json(j, path.parent_path());
}

Json RunConfig::to_json() const {
  Json j;
  j["embeddings"] = embeddings_path.generic_string();
  j["embeddings_format"] = seedgraph::to_string(embeddings_format);
  j["corpus"] = corpus_path.generic_string();
  j["corpus_format"] = seedgraph::to_string(corpus_format);
  j["tokenizer"] = tokenizer;
  j["wordpiece_vocab"] = wordpiece_vocab.empty() ? Json(nullptr) : Json(wordpiece_vocab.generic_string());
  j["seeds"] = seed_words;
  j["search"] = {{"threshold", search.min_sim_thresh},
                 {"max_depth", search.max_depth},
                 {"top_k", search.top_k},
                 {"context_mix", search.context_mix}};
  Json st;
  st["count"] = seed_text_count;
  st["mode"] = effective_seed_text_mode() == SeedMatch::kAll ? "all" : "any";
  st["shuffle_seed"] = shuffle_seed ? Json(*shuffle_seed) : Json(nullptr);
  st["candidates"] = candidates == CandidateSource::kSeedTexts ? "seed-texts" : "corpus";
  j["seed_texts"] = std::move(st);
  Json lda_j = seedgraph::to_json(lda);
  lda_j["min_count"] = lda_min_count;
  lda_j["stoplist"] = stoplist_path.empty() ? Json("builtin") : Json(stoplist_path.generic_string());
  lda_j["top_words"] = lda_top_words;
  j["lda"] = std::move(lda_j);
  Json ev;
  ev["targets"] = eval_targets;
  ev["baseline_corpus"] =
      baseline_corpus_path.empty() ? Json(nullptr) : Json(baseline_corpus_path.generic_string());
  ev["baseline"] = {{"epochs", baseline.epochs},
                    {"learning_rate", baseline.learning_rate},
                    {"l2", baseline.l2},
                    {"seed", baseline.seed}};
  j["eval"] = std::move(ev);
  j["out"] = output_dir.generic_string();
  return j;
}

SeedMatch RunConfig::effective_seed_text_mode() const {
  if (seed_text_mode) return *seed_text_mode;
  return seed_words.size() > 1 ? SeedMatch::kAll : SeedMatch::kAny;
}

Tokenizer RunConfig::make_tokenizer() const {
  if (tokenizer == "simple") return Tokenizer::simple();
  if (tokenizer == "wordpiece") {
    if (wordpiece_vocab.empty()) throw ConfigError("wordpiece tokenizer needs 'wordpiece_vocab'");
    return Tokenizer::wordpiece(WordpieceVocab::load(wordpiece_vocab));
  }
  throw ConfigError("unknown tokenizer '" + tokenizer + "'");
}

Pipeline::Pipeline(RunConfig config) : config_(std::move(config)) {}

const EmbeddingTable& Pipeline::table() {
  if (!table_) {
    if (config_.embeddings_path.empty()) throw ConfigError("no embeddings path configured");
    const std::string text = read_file(config_.embeddings_path);
    embeddings_hash_ = sha256_hex(text);
    table_.emplace(parse_embeddings(text, config_.embeddings_format));
  }
  return *table_;
}

const Corpus& Pipeline::corpus() {
  if (!corpus_) {
    if (config_.corpus_path.empty()) throw ConfigError("no corpus path configured");
    const auto tokenizer = config_.make_tokenizer();
    const std::string text = read_file(config_.corpus_path);
    corpus_hash_ = sha256_hex(text);
    corpus_.emplace(parse_corpus(text, config_.corpus_format, tokenizer));
  }
  return *corpus_;
}

const std::string& Pipeline::embeddings_hash() {
  table();
  return embeddings_hash_;
}

const std::string& Pipeline::corpus_hash() {
  corpus();
  return corpus_hash_;
}

OutputFile Pipeline::write(const std::string& name, const std::string& content) {
  write_file(config_.output_dir / name, content);
  return {name, sha256_hex(content)};
}

Json Pipeline::header(const std::vector<std::pair<std::string, std::string>>& inputs) const {
  Json h;
  add_header(h, inputs);
  return h;
}

void Pipeline::add_header(Json& target, const std::vector<std::pair<std::string, std::string>>& inputs) const {
  target["run_config"] = config_.to_json();
  Json in = Json::object();
  for (const auto& [name, hash] : inputs) in[name] = hash;
  target["inputs"] = std::move(in);
}

SearchResult Pipeline::search() {
  config_.search.validate();
  if (config_.seed_words.empty()) throw ConfigError("no seed words configured");
  const Corpus& docs = corpus();
  const EmbeddingTable& emb = table();

  std::vector<std::string> warnings;
  Vocabulary vocab;
  if (config_.candidates == CandidateSource::kSeedTexts) {
    SeedSelectionOptions opts{config_.seed_text_count, config_.effective_seed_text_mode(),
                              config_.shuffle_seed};
    vocab = vocabulary(select_seed_texts(docs, config_.seed_words, opts, &warnings));
  } else {
    vocab = vocabulary(docs);
  }
  SearchResult result = config_.seed_words.size() == 1
                             ? bwgs(emb, vocab, config_.seed_words.front(), config_.search)
                             : bmdwgs(emb, vocab, config_.seed_words, config_.search);
  result.warnings.insert(result.warnings.begin(), warnings.begin(), warnings.end());
  return result;
}

StageOutput Pipeline::expand() {
  const SearchResult result = search();
  const std::vector<std::pair<std::string, std::string>> inputs{{"embeddings", embeddings_hash()},
                                                                {"corpus", corpus_hash()}};
  StageOutput out{"expand", {}};

  Json report = search_report(result);
  report["candidate_vocabulary_source"] =
      config_.candidates == CandidateSource::kSeedTexts ? "seed-texts" : "corpus";
  add_header(report, inputs);
  out.files.push_back(write(kKeywordsFile, report.dump(2) + "\n"));

  std::string dot = "// run_config_sha256 " + sha256_hex(config_.to_json().dump()) + "\n";
  for (const auto& [name, hash] : inputs) dot += "// input " + name + " sha256 " + hash + "\n";
  dot += export_graph(result.graph, GraphFormat::kDot);
  out.files.push_back(write(kGraphDotFile, dot));

  Json graph = Json::parse(export_graph(result.graph, GraphFormat::kJson));
  add_header(graph, inputs);
  out.files.push_back(write(kGraphJsonFile, graph.dump(2) + "\n"));
  return out;
}

RetrievalResult Pipeline::retrieval(const std::vector<std::string>& keywords) {
  return seedgraph::retrieve(corpus(), keywords);
}

StageOutput Pipeline::retrieve(const std::filesystem::path& keywords_file) {
  const std::string text = read_file(keywords_file);
  const RetrievalResult result = retrieval(parse_keywords_file(text));
  StageOutput out{"retrieve", {}};
  out.files.push_back(write(kRetrievalFile, format_retrieval_jsonl(result)));
  Json summary = retrieval_summary(result);
  add_header(summary, {{"corpus", corpus_hash()}, {"keywords", sha256_hex(text)}});
  out.files.push_back(write(kRetrievalSummaryFile, summary.dump(2) + "\n"));
  return out;
}

namespace {

std::vector<std::string> read_ids(const std::string& text, const Corpus& corpus) {
  auto ids = parse_retrieval_ids(text);
  for (const auto& id : ids) {
    if (!corpus.find(id)) throw DataError("retrieved id '" + id + "' is not in the corpus");
  }
  return ids;
}

}  // namespace

StageOutput Pipeline::topics(const std::filesystem::path& retrieval_file) {
  const std::string text = read_file(retrieval_file);
  const Corpus& docs = corpus();
  const auto ids = read_ids(text, docs);
  const std::unordered_set<std::string> wanted(ids.begin(), ids.end());
  Corpus subset;
  subset.tokenizer_id = docs.tokenizer_id;
  for (const auto& d : docs.documents) {
    if (wanted.contains(d.id)) subset.documents.push_back(d);
  }
  if (subset.empty()) throw DataError("empty corpus for LDA");

  LdaPreprocess pre;
  pre.stoplist = config_.stoplist_path.empty() ? default_stoplist() : load_stoplist(config_.stoplist_path);
  pre.min_count = config_.lda_min_count;
  GibbsSampler sampler(prepare_lda_corpus(subset, pre), config_.lda);
  const std::size_t every =
      config_.perplexity_every > 0 ? config_.perplexity_every : std::max<std::size_t>(1, config_.lda.sweeps / 10);
  std::vector<PerplexityPoint> trace{{0, training_perplexity(sampler.model())}};
  for (std::size_t s = 1; s <= config_.lda.sweeps; ++s) {
    sampler.sweep();
    if (s % every == 0 || s == config_.lda.sweeps) {
      trace.push_back({s, training_perplexity(sampler.model())});
    }
  }
  Json report = topic_report(sampler.model(), config_.lda, config_.lda_top_words, trace);
  report["seeds"] = config_.seed_words;
  report["lda"]["min_count"] = config_.lda_min_count;
  report["lda"]["stoplist_size"] = pre.stoplist.size();
  add_header(report, {{"corpus", corpus_hash()}, {"retrieval", sha256_hex(text)}});
  return {"topics", {write(kTopicsFile, report.dump(2) + "\n")}};
}

EvalReport Pipeline::evaluation(const std::vector<std::string>& predicted_ids) {
  if (config_.eval_targets.empty()) throw ConfigError("no eval targets configured");
  const Corpus& docs = corpus();
  const IdSet gold = project_gold(docs, config_.eval_targets);
  const IdSet all = all_ids(docs);
  const IdSet predicted(predicted_ids.begin(), predicted_ids.end());
  for (const auto& id : predicted) {
    if (!all.contains(id)) throw DataError("predicted id '" + id + "' is not in the corpus");
  }

  EvalReport report;
  report.config_echo = config_.to_json();
  if (!config_.baseline_corpus_path.empty()) {
    const Corpus train =
        ingest(config_.baseline_corpus_path, config_.corpus_format, config_.make_tokenizer());
    const IdSet train_gold = project_gold(train, config_.eval_targets);
    const Corpus balanced = upsample(train, train_gold, config_.baseline.seed);
    const BowLogRegModel model = train_bow_logreg(balanced, train_gold, config_.baseline);
    IdSet baseline_pred;
    for (const auto& d : docs.documents) {
      if (predict_bow_logreg(model, d)) baseline_pred.insert(d.id);
    }
    const auto counts = confusion(baseline_pred, gold, all);
    report.rows.push_back({"logreg-bow", {}, std::nullopt, counts, prf(counts)});
  }
  const auto counts = confusion(predicted, gold, all);
  report.rows.push_back({config_.seed_words.size() > 1 ? "bmdwgs" : "bwgs", config_.seed_words,
                         config_.search, counts, prf(counts)});
  return report;
}

StageOutput Pipeline::eval(const std::filesystem::path& retrieval_file) {
  const std::string text = read_file(retrieval_file);
  const auto ids = read_ids(text, corpus());
  const EvalReport report = evaluation(ids);
  const auto h = header({{"corpus", corpus_hash()}, {"retrieval", sha256_hex(text)}});

  Json j = seedgraph::to_json(report);
  j["inputs"] = h["inputs"];
  StageOutput out{"eval", {}};
  out.files.push_back(write(kEvalJsonFile, j.dump(2) + "\n"));

  std::string table = "# run_config_sha256 " + sha256_hex(config_.to_json().dump()) + "\n";
  for (const auto& [name, hash] : h["inputs"].items()) {
    table += "# input " + name + " sha256 " + hash.get<std::string>() + "\n";
  }
  table += format_eval_table(report);
  out.files.push_back(write(kEvalTableFile, table));
  return out;
}

std::vector<StageOutput> Pipeline::run_all() {
  std::vector<StageOutput> stages;
  stages.push_back(expand());
  stages.push_back(retrieve(config_.output_dir / kKeywordsFile));
  const auto retrieval_path = config_.output_dir / kRetrievalFile;
  try {
    stages.push_back(topics(retrieval_path));
  } catch (const DataError& e) {
    notices_.push_back(std::string("topics skipped: ") + e.what());
  }
  if (!corpus().has_labels()) {
    notices_.push_back("eval skipped: corpus has no gold labels");
  } else if (config_.eval_targets.empty()) {
    notices_.push_back("eval skipped: no eval targets configured");
  } else {
    stages.push_back(eval(retrieval_path));
  }

  Json manifest = header({{"embeddings", embeddings_hash()}, {"corpus", corpus_hash()}});
  manifest["stages"] = Json::array();
  for (const auto& s : stages) {
    Json files = Json::array();
    for (const auto& f : s.files) files.push_back({{"file", f.name}, {"sha256", f.sha256}});
    manifest["stages"].push_back({{"stage", s.stage}, {"outputs", std::move(files)}});
  }
  manifest["notices"] = notices_;
  stages.push_back({"manifest", {write(kManifestFile, manifest.dump(2) + "\n")}});
  return stages;
}

}  // namespace seedgraph
