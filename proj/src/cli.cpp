#include "seedgraph/cli.h"

#include <CLI11.hpp>

#include "seedgraph/errors.h"
#include "seedgraph/pipeline.h"

namespace seedgraph {

namespace {

struct Overrides {
  std::string config;
  std::string embeddings;
  std::string embeddings_format;
  std::string corpus;
  std::string corpus_format;
  std::string tokenizer;
  std::string wordpiece_vocab;
  std::vector<std::string> seeds;
  double threshold = 0.0;
  std::size_t max_depth = 0;
  std::size_t top_k = 0;
  double context_mix = 0.0;
  std::size_t seed_texts = 0;
  std::uint64_t shuffle_seed = 0;
  std::size_t num_topics = 0;
  std::size_t sweeps = 0;
  std::uint64_t lda_seed = 0;
  std::size_t min_count = 0;
  std::vector<std::string> targets;
  std::string out;

  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }

  void attach(CLI::App* app) {
    opts["config"] = app->add_option("--config", config, "Run configuration (json)");
    opts["embeddings"] = app->add_option("--embeddings", embeddings, "Embedding table file");
    opts["embeddings-format"] =
        app->add_option("--embeddings-format", embeddings_format, "vec-text | jsonl");
    opts["corpus"] = app->add_option("--corpus", corpus, "Corpus file");
    opts["corpus-format"] = app->add_option("--corpus-format", corpus_format, "jsonl | csv | plain-lines");
    opts["tokenizer"] = app->add_option("--tokenizer", tokenizer, "simple | wordpiece");
    opts["wordpiece-vocab"] = app->add_option("--wordpiece-vocab", wordpiece_vocab, "Subword vocabulary");
    opts["seeds"] = app->add_option("--seeds", seeds, "Seed words, comma separated")->delimiter(',');
    opts["threshold"] = app->add_option("--threshold", threshold, "Minimum cosine similarity");
    opts["max-depth"] = app->add_option("--max-depth", max_depth, "Maximum search depth");
    opts["top-k"] = app->add_option("--top-k", top_k, "Children per expanded token");
    opts["context-mix"] = app->add_option("--context-mix", context_mix, "Context weight in the query");
    opts["seed-texts"] = app->add_option("--seed-texts", seed_texts, "Seed texts per seed word");
    opts["shuffle-seed"] = app->add_option("--shuffle-seed", shuffle_seed, "Sample seed texts with this seed");
    opts["num-topics"] = app->add_option("--num-topics", num_topics, "LDA topic count");
    opts["sweeps"] = app->add_option("--sweeps", sweeps, "Gibbs sweeps");
    opts["lda-seed"] = app->add_option("--lda-seed", lda_seed, "Gibbs sampler seed");
    opts["min-count"] = app->add_option("--min-count", min_count, "LDA minimum token frequency");
    opts["targets"] = app->add_option("--targets", targets, "Gold labels counted as positive")->delimiter(',');
    opts["out"] = app->add_option("--out", out, "Output directory");
  }

  RunConfig build() const {
    RunConfig c = given("config") ? RunConfig::load(config) : RunConfig{};
    if (given("embeddings")) c.embeddings_path = embeddings;
    if (given("embeddings-format")) c.embeddings_format = parse_embedding_format(embeddings_format);
    if (given("corpus")) c.corpus_path = corpus;
    if (given("corpus-format")) c.corpus_format = parse_corpus_format(corpus_format);
    if (given("tokenizer")) c.tokenizer = tokenizer;
    if (given("wordpiece-vocab")) c.wordpiece_vocab = wordpiece_vocab;
    if (given("seeds")) c.seed_words = seeds;
    if (given("threshold")) c.search.min_sim_thresh = threshold;
    if (given("max-depth")) c.search.max_depth = max_depth;
    if (given("top-k")) c.search.top_k = top_k;
    if (given("context-mix")) c.search.context_mix = context_mix;
    if (given("seed-texts")) c.seed_text_count = seed_texts;
    if (given("shuffle-seed")) c.shuffle_seed = shuffle_seed;
    if (given("num-topics")) c.lda.num_topics = num_topics;
    if (given("sweeps")) c.lda.sweeps = sweeps;
    if (given("lda-seed")) c.lda.rng_seed = lda_seed;
    if (given("min-count")) c.lda_min_count = min_count;
    if (given("targets")) c.eval_targets = {targets.begin(), targets.end()};
    if (given("out")) c.output_dir = out;
    return c;
  }
};

void print_stage(std::ostream& out, const RunConfig& config, const StageOutput& stage) {
  for (const auto& f : stage.files) {
    out << stage.stage << ": " << (config.output_dir / f.name).generic_string() << " sha256 "
        << f.sha256 << "\n";
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Seed-word keyword expansion over embedding graphs", "seedgraph"};
  app.require_subcommand(1);

  Overrides expand_o, retrieve_o, topics_o, eval_o, pipeline_o;
  std::string keywords_file, topics_retrieval, eval_retrieval;

  auto* expand = app.add_subcommand("expand", "Search keywords from the seed words");
  expand_o.attach(expand);
  auto* retrieve = app.add_subcommand("retrieve", "Retrieve documents containing keywords");
  retrieve_o.attach(retrieve);
  retrieve->add_option("--keywords", keywords_file, "Keyword report or list (default <out>/keywords.json)");
  auto* topics = app.add_subcommand("topics", "Fit LDA over retrieved documents");
  topics_o.attach(topics);
  topics->add_option("--retrieval", topics_retrieval, "Retrieval jsonl (default <out>/retrieval.jsonl)");
  auto* eval = app.add_subcommand("eval", "Score retrieval against gold labels");
  eval_o.attach(eval);
  eval->add_option("--retrieval", eval_retrieval, "Retrieval jsonl (default <out>/retrieval.jsonl)");
  auto* pipeline = app.add_subcommand("pipeline", "expand, retrieve, topics and eval in sequence");
  pipeline_o.attach(pipeline);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    auto report_notices = [&](const Pipeline& p) {
      for (const auto& n : p.notices()) err << "notice: " << n << "\n";
    };
    if (expand->parsed()) {
      Pipeline p(expand_o.build());
      print_stage(out, p.config(), p.expand());
    } else if (retrieve->parsed()) {
      Pipeline p(retrieve_o.build());
      const auto file = keywords_file.empty() ? p.config().output_dir / kKeywordsFile
                                              : std::filesystem::path(keywords_file);
      print_stage(out, p.config(), p.retrieve(file));
    } else if (topics->parsed()) {
      Pipeline p(topics_o.build());
      const auto file = topics_retrieval.empty() ? p.config().output_dir / kRetrievalFile
                                                 : std::filesystem::path(topics_retrieval);
      print_stage(out, p.config(), p.topics(file));
    } else if (eval->parsed()) {
      Pipeline p(eval_o.build());
      const auto file = eval_retrieval.empty() ? p.config().output_dir / kRetrievalFile
                                               : std::filesystem::path(eval_retrieval);
      print_stage(out, p.config(), p.eval(file));
    } else if (pipeline->parsed()) {
      Pipeline p(pipeline_o.build());
      for (const auto& stage : p.run_all()) print_stage(out, p.config(), stage);
      report_notices(p);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const SearchError& e) {
    err << "search error: " << e.what() << "\n";
    return kExitSearchError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}

}  // namespace seedgraph
