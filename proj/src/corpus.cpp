#include "seedgraph/corpus.h"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include <json.hpp>

#include "seedgraph/errors.h"
#include "seedgraph/random.h"
#include "text_util.h"

namespace seedgraph {

namespace {

bool is_ascii_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 128 && std::ispunct(u);
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_utf8_continuation(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }

}  // namespace

WordpieceVocab::WordpieceVocab(std::unordered_set<std::string> pieces) : pieces_(std::move(pieces)) {
  for (const auto& p : pieces_) max_len_ = std::max(max_len_, p.size());
}

WordpieceVocab WordpieceVocab::load(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::unordered_set<std::string> pieces;
  LineReader lines(text);
  std::string_view line;
  while (lines.next(line)) {
    auto piece = trim(line);
    if (!piece.empty()) pieces.emplace(piece);
  }
  if (pieces.empty()) throw DataError("wordpiece vocabulary '" + path.string() + "' is empty");
  return WordpieceVocab(std::move(pieces));
}

bool WordpieceVocab::contains(std::string_view piece) const {
  return pieces_.contains(std::string(piece));
}

std::vector<std::string> simple_tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  for (std::string_view raw : split_fields(text)) {
    std::string word(raw);
    std::transform(word.begin(), word.end(), word.begin(), ascii_lower);
    std::size_t begin = 0;
    std::size_t end = word.size();
    while (begin < end && is_ascii_punct(word[begin])) ++begin;
    std::string_view body(word.data() + begin, end - begin);
    if (body.starts_with("http://") || body.starts_with("https://") || body.starts_with("www.")) {
      tokens.emplace_back(kUrlToken);
      continue;
    }
    while (end > begin && is_ascii_punct(word[end - 1])) --end;
    if (end > begin) tokens.emplace_back(word.substr(begin, end - begin));
  }
  return tokens;
}

std::vector<std::string> wordpiece_segment(std::string_view word, const WordpieceVocab& vocab) {
  std::vector<std::string> pieces;
  std::size_t start = 0;
  std::string candidate;
  while (start < word.size()) {
    std::size_t end = word.size();
    bool found = false;
    while (end > start) {
      if (end == word.size() || !is_utf8_continuation(word[end])) {
        candidate.assign(start > 0 ? "##" : "");
        candidate.append(word.substr(start, end - start));
        if (vocab.contains(candidate)) {
          found = true;
          break;
        }
      }
      --end;
    }
    if (!found) return {std::string(kUnknownToken)};
    pieces.push_back(candidate);
    start = end;
  }
  return pieces;
}

Tokenizer Tokenizer::simple() { return Tokenizer("simple", nullptr); }

Tokenizer Tokenizer::wordpiece(WordpieceVocab vocab) {
  if (vocab.size() == 0) throw std::invalid_argument("wordpiece vocabulary is empty");
  return Tokenizer("wordpiece", std::make_shared<const WordpieceVocab>(std::move(vocab)));
}

std::vector<std::string> Tokenizer::tokenize(std::string_view text) const {
  auto words = simple_tokenize(text);
  if (!vocab_) return words;
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) {
    if (w == kUrlToken) {
      out.push_back(w);
      continue;
    }
    for (auto& piece : wordpiece_segment(w, *vocab_)) out.push_back(std::move(piece));
  }
  return out;
}

bool Corpus::has_labels() const {
  return std::any_of(documents.begin(), documents.end(),
                     [](const Document& d) { return !d.gold_labels.empty(); });
}

const Document* Corpus::find(std::string_view id) const {
  for (const auto& d : documents) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "csv") return CorpusFormat::kCsv;
  if (name == "plain-lines" || name == "lines" || name == "txt") return CorpusFormat::kPlainLines;
  throw ConfigError("unknown corpus format '" + std::string(name) + "'");
}

std::string_view to_string(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::kJsonl:
      return "jsonl";
    case CorpusFormat::kCsv:
      return "csv";
    case CorpusFormat::kPlainLines:
      return "plain-lines";
  }
  return "unknown";
}

namespace {

struct Record {
  std::string id;
  std::string text;
  std::set<std::string> labels;
  std::size_t line;
};

std::vector<Record> read_jsonl(std::string_view text) {
  std::vector<Record> records;
  LineReader lines(text);
  std::string_view line;
  while (lines.next(line)) {
    const std::size_t lineno = lines.line_number();
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw ParseError("malformed json record", lineno);
    }
    if (!j.is_object()) throw ParseError("record is not an object", lineno);
    Record r{.line = lineno};
    if (!j.contains("id")) throw ParseError("missing field 'id'", lineno);
    if (j["id"].is_string()) {
      r.id = j["id"].get<std::string>();
    } else if (j["id"].is_number_integer()) {
      r.id = std::to_string(j["id"].get<long long>());
    } else {
      throw ParseError("field 'id' must be a string", lineno);
    }
    if (!j.contains("text") || !j["text"].is_string()) {
      throw ParseError("missing field 'text'", lineno);
    }
    r.text = j["text"].get<std::string>();
    if (j.contains("labels") && !j["labels"].is_null()) {
      if (!j["labels"].is_array()) throw ParseError("field 'labels' must be an array", lineno);
      for (const auto& l : j["labels"]) {
        if (!l.is_string()) throw ParseError("labels must be strings", lineno);
        r.labels.insert(l.get<std::string>());
      }
    }
    records.push_back(std::move(r));
  }
  return records;
}

// RFC 4180 rows: quoted fields may hold commas, doubled quotes and newlines.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_csv_rows(std::string_view text) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_has_content = false;
  std::size_t line = 1;
  std::size_t row_line = 1;
  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    if (row_has_content || row.size() > 1 || !row.front().empty()) {
      rows.emplace_back(row_line, std::move(row));
    }
    row.clear();
    row_has_content = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_content = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        row_line = line;
        break;
      default:
        field += c;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field", row_line);
  if (!field.empty() || !row.empty() || row_has_content) end_row();
  return rows;
}

std::vector<Record> read_csv(std::string_view text) {
  auto rows = read_csv_rows(text);
  if (rows.empty()) return {};
  const auto& header = rows.front().second;
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    return std::nullopt;
  };
  const auto id_col = column("id");
  const auto text_col = column("text");
  const auto labels_col = column("labels");
  if (!id_col) throw ParseError("missing field 'id' in header", rows.front().first);
  if (!text_col) throw ParseError("missing field 'text' in header", rows.front().first);

  std::vector<Record> records;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto& [lineno, fields] = rows[i];
    if (fields.size() <= std::max(*id_col, *text_col)) {
      throw ParseError("missing field", lineno);
    }
    Record r{.id = fields[*id_col], .text = fields[*text_col], .line = lineno};
    if (labels_col && *labels_col < fields.size()) {
      std::string_view rest = fields[*labels_col];
      while (!rest.empty()) {
        const auto bar = rest.find('|');
        auto label = trim(rest.substr(0, bar));
        if (!label.empty()) r.labels.emplace(label);
        if (bar == std::string_view::npos) break;
        rest.remove_prefix(bar + 1);
      }
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<Record> read_plain_lines(std::string_view text) {
  std::vector<Record> records;
  LineReader lines(text);
  std::string_view line;
  while (lines.next(line)) {
    if (trim(line).empty()) continue;
    records.push_back({.id = std::to_string(lines.line_number() - 1),
                       .text = std::string(line),
                       .line = lines.line_number()});
  }
  return records;
}

}  // namespace

Corpus parse_corpus(std::string_view text, CorpusFormat format, const Tokenizer& tokenizer) {
  std::vector<Record> records;
  switch (format) {
    case CorpusFormat::kJsonl:
      records = read_jsonl(text);
      break;
    case CorpusFormat::kCsv:
      records = read_csv(text);
      break;
    case CorpusFormat::kPlainLines:
      records = read_plain_lines(text);
      break;
  }
  if (records.empty()) throw DataError("empty corpus file");

  Corpus corpus;
  corpus.tokenizer_id = tokenizer.id();
  corpus.documents.reserve(records.size());
  std::unordered_set<std::string> seen;
  for (auto& r : records) {
    if (!seen.insert(r.id).second) throw ParseError("duplicate id '" + r.id + "'", r.line);
    Document doc{.id = std::move(r.id), .text = std::move(r.text), .gold_labels = std::move(r.labels)};
    doc.tokens = tokenizer.tokenize(doc.text);
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus ingest(const std::filesystem::path& path, CorpusFormat format, const Tokenizer& tokenizer) {
  return parse_corpus(read_file(path), format, tokenizer);
}

std::size_t Vocabulary::total_count() const {
  std::size_t total = 0;
  for (const auto& [_, c] : counts) total += c;
  return total;
}

Vocabulary vocabulary(const Corpus& corpus) {
  Vocabulary vocab;
  std::set<std::string_view> in_doc;
  for (const auto& doc : corpus.documents) {
    in_doc.clear();
    for (const auto& t : doc.tokens) {
      ++vocab.counts[t];
      in_doc.insert(t);
    }
    for (auto t : in_doc) ++vocab.doc_freq[std::string(t)];
  }
  return vocab;
}

Corpus select_seed_texts(const Corpus& corpus, const std::vector<std::string>& seed_words,
                         const SeedSelectionOptions& options, std::vector<std::string>* warnings) {
  if (seed_words.empty()) throw std::invalid_argument("select_seed_texts: empty seed word list");
  if (options.n == 0) throw std::invalid_argument("select_seed_texts: n must be positive");

  std::vector<std::unordered_set<std::string_view>> token_sets;
  token_sets.reserve(corpus.size());
  for (const auto& d : corpus.documents) {
    token_sets.emplace_back(d.tokens.begin(), d.tokens.end());
  }

  std::optional<Rng> rng;
  if (options.shuffle_seed) rng.emplace(*options.shuffle_seed);

  auto pick = [&](std::vector<std::size_t> matches) {
    if (rng && matches.size() > options.n) {
      rng->shuffle(matches);
      matches.resize(options.n);
      std::sort(matches.begin(), matches.end());
    } else if (matches.size() > options.n) {
      matches.resize(options.n);
    }
    return matches;
  };

  std::set<std::size_t> chosen;
  if (options.mode == SeedMatch::kAll) {
    std::vector<std::size_t> matches;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const bool all = std::all_of(seed_words.begin(), seed_words.end(), [&](const std::string& w) {
        return token_sets[i].contains(w);
      });
      if (all) matches.push_back(i);
    }
    for (auto i : pick(std::move(matches))) chosen.insert(i);
  } else {
    for (const auto& w : seed_words) {
      std::vector<std::size_t> matches;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (token_sets[i].contains(w)) matches.push_back(i);
      }
      for (auto i : pick(std::move(matches))) chosen.insert(i);
    }
  }

  Corpus out;
  out.tokenizer_id = corpus.tokenizer_id;
  for (auto i : chosen) out.documents.push_back(corpus.documents[i]);
  if (out.empty() && warnings) {
    std::string msg = "no seed texts contain ";
    msg += options.mode == SeedMatch::kAll ? "all of" : "any of";
    for (const auto& w : seed_words) msg += " '" + w + "'";
    warnings->push_back(std::move(msg));
  }
  return out;
}

}  // namespace seedgraph
