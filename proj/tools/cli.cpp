/*
 * Copyright 2026 The gectk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "gectk/corpus.hpp"
#include "gectk/decode.hpp"
#include "gectk/editscript.hpp"
#include "gectk/error.hpp"
#include "gectk/m2.hpp"
#include "gectk/parallel.hpp"
#include "gectk/schedule.hpp"
#include "gectk/scoring.hpp"
#include "gectk/taskgen.hpp"
#include "gectk/version.hpp"
#include "json.hpp"

namespace gectk::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::size_t kChunk = 4096;

struct Global {
  std::string format = "tsv";
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
  std::string output = "-";
};

// Percent with two decimals, as printed in result tables.
double pct2(double ratio) { return std::round(ratio * 10000.0) / 100.0; }

std::string dump(const ordered_json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw DataError(path, 0, "cannot open for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

class Input {
 public:
  explicit Input(const std::string& path) : name_(path == "-" ? "<stdin>" : path) {
    if (path == "-") {
      stream_ = &std::cin;
    } else {
      file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
      if (!*file_) throw DataError(path, 0, "cannot open file");
      stream_ = file_.get();
    }
  }
  std::istream& operator*() { return *stream_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_;
};

std::vector<std::string> read_lines(const std::string& path) {
  Input in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(*in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

bool is_header(const json& j) { return j.is_object() && j.contains("header"); }

std::string fnv_hex(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Hash over the effective option values of a run. --jobs, --config and
// --output do not change the produced bytes and are left out.
std::string config_hash(const CLI::App& app, const CLI::App& sub) {
  std::string canon = sub.get_name() + "\n";
  auto add = [&](const CLI::App& a) {
    for (const CLI::Option* opt : a.get_options()) {
      const std::string name = opt->get_name();
      if (name == "--help" || name == "--jobs" || name == "--config" || name == "--output" || name == "--version") {
        continue;
      }
      canon += name + "=";
      if (opt->count() > 0) {
        for (const auto& r : opt->results()) canon += r + ",";
      } else {
        canon += opt->get_default_str();
      }
      canon += "\n";
    }
  };
  add(app);
  add(sub);
  return fnv_hex(canon);
}

ordered_json header(const std::string& command, const std::string& hash) {
  ordered_json h;
  h["tool"] = kToolName;
  h["version"] = kVersion;
  h["command"] = command;
  h["config_hash"] = hash;
  ordered_json line;
  line["header"] = h;
  return line;
}

ordered_json edit_json(const Edit& e) {
  ordered_json j;
  j["op"] = to_string(e.op);
  j["src_span"] = {e.src.begin, e.src.end};
  j["tgt_span"] = {e.tgt.begin, e.tgt.end};
  j["src_text"] = join(e.src_text);
  j["tgt_text"] = join(e.tgt_text);
  j["type"] = error_label(classify_error(e));
  return j;
}

ordered_json report_json(const ScoreReport& r) {
  ordered_json j;
  if (r.annotator >= 0) j["annotator"] = r.annotator;
  j["tp"] = r.counts.tp;
  j["fp"] = r.counts.fp;
  j["fn"] = r.counts.fn;
  j["precision"] = pct2(r.precision);
  j["recall"] = pct2(r.recall);
  j["f05"] = pct2(r.f_half);
  ordered_json types = ordered_json::object();
  for (const auto& [k, c] : r.per_type) types[k] = {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}};
  j["per_type"] = types;
  if (!r.per_reference.empty()) {
    ordered_json refs = ordered_json::array();
    for (const auto& ref : r.per_reference) refs.push_back(report_json(ref));
    j["per_reference"] = refs;
  }
  return j;
}

ordered_json histogram_json(const ErrorHistogram& h) {
  ordered_json j = ordered_json::object();
  for (ErrorType t : kAllErrorTypes) {
    j[std::string(error_label(t))] = {{"count", h.counts.at(t)}, {"proportion", h.proportion(t)}};
  }
  return j;
}

// Reads a corpus in chunks and hands each chunk to `fn`.
template <typename Fn>
void for_each_chunk(Input& in, CorpusFormat format, Fn fn) {
  CorpusReader reader(*in, format, in.name());
  std::vector<TokenizedPair> chunk;
  chunk.reserve(kChunk);
  while (auto p = reader.next()) {
    chunk.push_back(std::move(*p));
    if (chunk.size() == kChunk) {
      fn(chunk);
      chunk.clear();
    }
  }
  if (!chunk.empty()) fn(chunk);
}

// ---------------------------------------------------------------------------

struct ExtractOpts {
  std::string input = "-";
  std::string mode = "plain";
};

void cmd_extract(const Global& g, const ExtractOpts& o, const std::string& hash, std::ostream& out) {
  const ScriptMode mode = parse_script_mode(o.mode);
  Input in(o.input);
  out << dump(header("extract", hash)) << '\n';
  for_each_chunk(in, parse_corpus_format(g.format), [&](const std::vector<TokenizedPair>& chunk) {
    const auto lines = ordered_parallel_map(chunk, g.jobs, [&](const TokenizedPair& p) {
      const EditScript script = align_pair(p);
      ordered_json j;
      j["pair_id"] = p.pair_id;
      j["doc_id"] = p.doc_id;
      j["doc_index"] = p.doc_index;
      j["script"] = serialize_script(script, mode);
      ordered_json edits = ordered_json::array();
      for (const auto& e : script.edits) edits.push_back(edit_json(e));
      j["edits"] = edits;
      return dump(j);
    });
    for (const auto& l : lines) out << l << '\n';
  });
}

struct GenTasksOpts {
  std::string input = "-";
  std::string tasks = "correct,explain,apply,edit";
};

void cmd_gen_tasks(const Global& g, const GenTasksOpts& o, const std::string& hash, std::ostream& out) {
  const TaskSet tasks = TaskSet::parse(o.tasks);
  Input in(o.input);
  out << dump(header("gen-tasks", hash)) << '\n';
  for_each_chunk(in, parse_corpus_format(g.format), [&](const std::vector<TokenizedPair>& chunk) {
    const auto blocks = ordered_parallel_map(chunk, g.jobs, [&](const TokenizedPair& p) {
      std::string block;
      for (const auto& inst : expand_pair(p, tasks)) {
        block += to_json_line(inst);
        block += '\n';
      }
      return block;
    });
    for (const auto& b : blocks) out << b;
  });
}

struct ApplyOpts {
  std::string src;
  std::string scripts;
  std::string mode = "plain";
  std::string unanchored_insert = "cursor";
  std::string skip_report;
  bool strict = false;
};

void cmd_apply(const Global& g, const ApplyOpts& o, std::ostream& out) {
  const ScriptMode mode = parse_script_mode(o.mode);
  ApplyOptions apply_opts;
  apply_opts.unanchored_insert =
      o.unanchored_insert == "skip" ? UnanchoredInsert::Skip : UnanchoredInsert::AfterCursor;

  const auto src_lines = read_lines(o.src);
  std::vector<std::pair<std::size_t, std::string>> scripts;  // (line number, text)
  {
    const auto lines = read_lines(o.scripts);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (tokenize(lines[i]).empty()) continue;
      const json j = json::parse(lines[i], nullptr, false);
      if (j.is_discarded()) throw DataError(o.scripts, i + 1, "invalid JSON");
      if (is_header(j)) continue;
      if (j.is_string()) {
        scripts.emplace_back(i + 1, j.get<std::string>());
      } else if (j.is_object() && j.contains("script") && j["script"].is_string()) {
        scripts.emplace_back(i + 1, j["script"].get<std::string>());
      } else {
        throw DataError(o.scripts, i + 1, "expected a JSON string or an object with a 'script' field");
      }
    }
  }
  if (scripts.size() != src_lines.size()) {
    throw DataError(o.scripts, 0,
                    std::to_string(scripts.size()) + " scripts for " + std::to_string(src_lines.size()) +
                        " source sentences");
  }

  struct Result {
    std::string sentence;
    std::vector<std::string> report;
  };
  std::vector<std::size_t> index(src_lines.size());
  for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
  const auto results = ordered_parallel_map(index, g.jobs, [&](std::size_t i) {
    const auto parsed = parse_script(scripts[i].second, mode, {o.strict});
    if (!parsed.ok()) {
      const auto& e = parsed.errors.front();
      throw DataError(o.scripts, scripts[i].first, "script line " + std::to_string(e.line) + ": " + e.reason);
    }
    const auto outcome = apply_script(tokenize(src_lines[i]), parsed.edits, apply_opts);
    Result r{join(outcome.result), {}};
    for (const auto& s : outcome.skipped) {
      ordered_json j;
      j["line"] = i + 1;
      j["edit_index"] = s.index;
      j["edit"] = serialize_edit(s.edit);
      j["reason"] = s.reason;
      r.report.push_back(dump(j));
    }
    return r;
  });

  std::unique_ptr<std::ofstream> report;
  if (!o.skip_report.empty()) {
    report = std::make_unique<std::ofstream>(o.skip_report, std::ios::binary);
    if (!*report) throw DataError(o.skip_report, 0, "cannot open for writing");
  }
  for (const auto& r : results) {
    out << r.sentence << '\n';
    if (report) {
      for (const auto& line : r.report) *report << line << '\n';
    }
  }
}

struct ScoreOpts {
  std::string hyp;
  std::string gold;
  std::string mode = "best";
  bool average_counts = false;
};

void cmd_score(const ScoreOpts& o, const std::string& hash, std::ostream& out) {
  std::vector<Tokens> hyps;
  for (const auto& l : read_lines(o.hyp)) hyps.push_back(tokenize(l));
  // A trailing empty line at end of file is not a hypothesis.
  while (!hyps.empty() && hyps.back().empty()) hyps.pop_back();
  Input gold(o.gold);
  const auto records = read_m2(*gold, gold.name());
  if (hyps.size() != records.size()) {
    throw DataError(o.hyp, 0,
                    std::to_string(hyps.size()) + " hypotheses for " + std::to_string(records.size()) + " M2 records");
  }
  EvalOptions opts;
  opts.mode = parse_eval_mode(o.mode);
  opts.average_counts = o.average_counts;
  const ScoreReport r = evaluate(hyps, records, opts);
  ordered_json j = header("score", hash);
  j["mode"] = o.mode;
  const ordered_json body = report_json(r);
  for (const auto& [k, v] : body.items()) j[k] = v;
  out << j.dump(2) << '\n';
}

struct ScheduleOpts {
  std::string policy;
  std::string datasets;
  bool override_seed = false;
};

void cmd_schedule(const Global& g, const ScheduleOpts& o, std::ostream& out) {
  auto load_json = [](const std::string& path) {
    Input in(path);
    try {
      return json::parse(*in);
    } catch (const json::parse_error& e) {
      throw DataError(path, 0, std::string("invalid JSON: ") + e.what());
    }
  };
  const json policy_json = load_json(o.policy);
  SchedulePolicy policy;
  try {
    policy = policy_from_json(policy_json);
  } catch (const std::invalid_argument& e) {
    throw DataError(o.policy, 0, e.what());
  }
  if (o.override_seed) {
    if (policy.within_dataset.kind == OrderMode::Shuffle) policy.within_dataset.seed = g.seed;
    if (policy.across_datasets.kind == OrderMode::Shuffle) policy.across_datasets.seed = g.seed;
  }

  const std::string desc_path = o.datasets.empty() ? o.policy : o.datasets;
  const json desc_json = o.datasets.empty() ? policy_json : load_json(o.datasets);
  std::vector<DatasetDescriptor> descriptors;
  try {
    descriptors = descriptors_from_json(desc_json);
  } catch (const std::invalid_argument& e) {
    throw DataError(desc_path, 0, e.what());
  }
  const auto base = std::filesystem::path(desc_path).parent_path();
  for (auto& d : descriptors) {
    if (d.path.empty()) throw DataError(desc_path, 0, "dataset '" + d.name + "' has no path");
    if (std::filesystem::path(d.path).is_relative()) d.path = (base / d.path).string();
    if (!std::filesystem::exists(d.path)) throw DataError(desc_path, 0, "unknown dataset path '" + d.path + "'");
  }

  ScheduleManifest m;
  try {
    m = build_manifest(descriptors, policy);
  } catch (const std::invalid_argument& e) {
    throw DataError(desc_path, 0, e.what());
  }
  out << manifest_to_jsonl(m, policy, descriptors);
}

struct StatsOpts {
  std::string input;
  bool m2 = false;
  std::string compare;
  bool compare_m2 = false;
  std::string plot_data;
};

void cmd_stats(const Global& g, const StatsOpts& o, const std::string& hash, std::ostream& out) {
  auto load = [&](const std::string& path, bool is_m2, ordered_json& extra) {
    if (is_m2) {
      Input in(path);
      return error_histogram(read_m2(*in, in.name()));
    }
    Input in(path);
    const auto pairs = read_corpus(*in, parse_corpus_format(g.format), in.name());
    const auto s = dataset_stats(pairs);
    extra["dataset_stats"] = {{"n_sentences", s.n_sentences}, {"pct_errorful", pct2(s.pct_errorful / 100.0)}};
    const auto edit_lists = ordered_parallel_map(pairs, g.jobs, [](const TokenizedPair& p) {
      return align_tokens(p.src_tokens, p.tgt_tokens);
    });
    ErrorHistogram h;
    for (const auto& edits : edit_lists) h.add(edits);
    return h;
  };

  ordered_json j = header("stats", hash);
  ordered_json extra = ordered_json::object();
  const ErrorHistogram h = load(o.input, o.m2, extra);
  j["total"] = h.total();
  j["histogram"] = histogram_json(h);
  for (const auto& [k, v] : extra.items()) j[k] = v;

  std::optional<ErrorHistogram> other;
  if (!o.compare.empty()) {
    ordered_json extra2 = ordered_json::object();
    other = load(o.compare, o.compare_m2, extra2);
    ordered_json c;
    c["total"] = other->total();
    c["histogram"] = histogram_json(*other);
    for (const auto& [k, v] : extra2.items()) c[k] = v;
    j["compare"] = c;
    j["distance"] = histogram_distance(h, *other);
  }
  out << j.dump(2) << '\n';

  if (!o.plot_data.empty()) {
    std::ofstream plot(o.plot_data, std::ios::binary);
    if (!plot) throw DataError(o.plot_data, 0, "cannot open for writing");
    plot << "type\tcount\tproportion";
    if (other) plot << "\tcompare_count\tcompare_proportion";
    plot << '\n';
    for (ErrorType t : kAllErrorTypes) {
      plot << error_label(t) << '\t' << h.counts.at(t) << '\t' << h.proportion(t);
      if (other) plot << '\t' << other->counts.at(t) << '\t' << other->proportion(t);
      plot << '\n';
    }
  }
}

struct ConsistencyOpts {
  std::string src, corrected, explained, reapplied;
  bool records = false;
};

void cmd_consistency(const Global& g, const ConsistencyOpts& o, const std::string& hash, std::ostream& out) {
  const auto src = read_lines(o.src);
  const auto corrected = read_lines(o.corrected);
  const auto reapplied = read_lines(o.reapplied);
  std::vector<std::string> explained;
  {
    const auto lines = read_lines(o.explained);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (tokenize(lines[i]).empty()) continue;
      const json j = json::parse(lines[i], nullptr, false);
      if (j.is_discarded()) throw DataError(o.explained, i + 1, "invalid JSON");
      if (is_header(j)) continue;
      if (j.is_string()) {
        explained.push_back(j.get<std::string>());
      } else if (j.is_object() && j.contains("script") && j["script"].is_string()) {
        explained.push_back(j["script"].get<std::string>());
      } else {
        throw DataError(o.explained, i + 1, "expected a JSON string or an object with a 'script' field");
      }
    }
  }
  const std::size_t n = src.size();
  if (corrected.size() != n) throw DataError(o.corrected, 0, "line count differs from source");
  if (reapplied.size() != n) throw DataError(o.reapplied, 0, "line count differs from source");
  if (explained.size() != n) throw DataError(o.explained, 0, "script count differs from source");

  std::vector<std::size_t> index(n);
  for (std::size_t i = 0; i < n; ++i) index[i] = i;
  const auto recs = ordered_parallel_map(index, g.jobs, [&](std::size_t i) {
    return consistency_report(tokenize(src[i]), tokenize(corrected[i]), explained[i], tokenize(reapplied[i]));
  });

  ConsistencySummary summary;
  ordered_json list = ordered_json::array();
  for (std::size_t i = 0; i < n; ++i) {
    summary.add(recs[i]);
    if (o.records) {
      ordered_json r;
      r["line"] = i + 1;
      r["edits_exact_match"] = recs[i].edits_exact_match;
      r["chain_exact_match"] = recs[i].chain_exact_match;
      r["edit_f05"] = pct2(recs[i].edit_f_half);
      if (!recs[i].reason.empty()) r["reason"] = recs[i].reason;
      list.push_back(r);
    }
  }
  ordered_json j = header("consistency", hash);
  j["sentences"] = summary.sentences;
  j["edits_exact_match"] = pct2(summary.edits_exact_rate());
  j["chain_exact_match"] = pct2(summary.chain_exact_rate());
  j["edit_f05"] = pct2(summary.edit_f_half());
  j["edit_counts"] = {{"tp", summary.edit_counts.tp}, {"fp", summary.edit_counts.fp}, {"fn", summary.edit_counts.fn}};
  if (o.records) j["records"] = list;
  out << j.dump(2) << '\n';
}

struct DecodeOpts {
  std::string table;
  std::string vocab;
  std::string input = "-";
  std::string eos = "</s>";
  std::string start = "<s>";
  std::size_t nbest = 1;
  DecodeConfig config;
};

void cmd_decode(const Global& g, const DecodeOpts& o, const std::string& hash, std::ostream& out) {
  o.config.validate();
  Vocabulary vocab;
  if (!o.vocab.empty()) {
    Input in(o.vocab);
    vocab = Vocabulary::from_jsonl(*in, in.name());
  }
  const std::size_t declared = vocab.size();
  json table;
  {
    Input in(o.table);
    try {
      table = json::parse(*in);
    } catch (const json::parse_error& e) {
      throw DataError(o.table, 0, std::string("invalid JSON: ") + e.what());
    }
  }
  std::unique_ptr<BigramProvider> bigram;
  try {
    bigram = std::make_unique<BigramProvider>(BigramProvider::from_json(table, vocab, o.start));
  } catch (const std::invalid_argument& e) {
    throw DataError(o.table, 0, e.what());
  }
  if (declared > 0 && vocab.size() != declared) {
    throw DataError(o.table, 0, "bigram table mentions tokens missing from the vocabulary");
  }
  const auto eos = vocab.find(o.eos);
  if (!eos) throw DataError(o.table, 0, "end token '" + o.eos + "' not in vocabulary");
  const Provider provider = [&](std::span<const int> prefix) { return (*bigram)(prefix); };

  const auto lines = read_lines(o.input);
  out << dump(header("decode", hash)) << '\n';
  const auto results = ordered_parallel_map(lines, g.jobs, [&](const std::string& line) {
    const Tokens src = tokenize(line);
    const auto ids = vocab.encode(src);
    return beam_search(provider, ids, *eos, o.config);
  });
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (std::size_t k = 0; k < std::min(o.nbest, results[i].size()); ++k) {
      const Hypothesis& h = results[i][k];
      Tokens words;
      for (int id : h.tokens) words.push_back(vocab.token(id));
      ordered_json j;
      j["line"] = i + 1;
      j["rank"] = k + 1;
      j["hypothesis"] = join(words);
      j["score"] = h.score;
      j["log_prob"] = h.log_prob;
      j["finished"] = h.finished;
      out << dump(j) << '\n';
    }
  }
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"gectk: data tooling for multi-task grammatical error correction", "gectk"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values");
  app.set_version_flag("--version", std::string(kVersion));

  Global g;
  app.add_option("--format", g.format, "Parallel corpus format")
      ->check(CLI::IsMember({"tsv", "jsonl"}))
      ->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for shuffling (schedule --override-seed)")->capture_default_str();
  app.add_option("-o,--output", g.output, "Output file, '-' for stdout")->capture_default_str();

  ExtractOpts extract;
  auto* sc_extract = app.add_subcommand("extract", "Extract edit scripts from a parallel corpus");
  sc_extract->add_option("input", extract.input, "Corpus file, '-' for stdin")->capture_default_str();
  sc_extract->add_option("--mode", extract.mode, "Script format")
      ->check(CLI::IsMember({"plain", "anchored"}))
      ->capture_default_str();

  GenTasksOpts gen;
  auto* sc_gen = app.add_subcommand("gen-tasks", "Expand a parallel corpus into task instances");
  sc_gen->add_option("input", gen.input, "Corpus file, '-' for stdin")->capture_default_str();
  sc_gen->add_option("--tasks", gen.tasks, "Comma-separated tasks")->capture_default_str();

  ApplyOpts apply;
  auto* sc_apply = app.add_subcommand("apply", "Apply edit scripts to source sentences");
  sc_apply->add_option("--src", apply.src, "Source sentences, one per line")->required();
  sc_apply->add_option("--scripts", apply.scripts, "Scripts JSONL (strings or objects with 'script')")->required();
  sc_apply->add_option("--mode", apply.mode, "Script format")
      ->check(CLI::IsMember({"plain", "anchored"}))
      ->capture_default_str();
  sc_apply->add_option("--unanchored-insert", apply.unanchored_insert, "Placement of inserts without anchor")
      ->check(CLI::IsMember({"cursor", "skip"}))
      ->capture_default_str();
  sc_apply->add_option("--skip-report", apply.skip_report, "JSONL file listing skipped edits");
  sc_apply->add_flag("--strict", apply.strict, "Reject Replace lines with 'with' inside the texts");

  ScoreOpts score;
  auto* sc_score = app.add_subcommand("score", "Score hypotheses against gold M2");
  sc_score->add_option("--hyp", score.hyp, "Hypotheses, one tokenized sentence per line")->required();
  sc_score->add_option("--gold", score.gold, "Gold M2 file")->required();
  sc_score->add_option("--mode", score.mode, "Annotator handling")
      ->check(CLI::IsMember({"best", "average"}))
      ->capture_default_str();
  sc_score->add_flag("--average-counts", score.average_counts, "Average mode: pool counts instead of scores");

  ScheduleOpts sched;
  auto* sc_sched = app.add_subcommand("schedule", "Build a training manifest");
  sc_sched->add_option("--policy", sched.policy, "Policy JSON")->required();
  sc_sched->add_option("--datasets", sched.datasets, "Dataset descriptor JSON (default: 'datasets' in policy)");
  sc_sched->add_flag("--override-seed", sched.override_seed, "Use --seed for every shuffle in the policy");

  StatsOpts stats;
  auto* sc_stats = app.add_subcommand("stats", "Error type histogram");
  sc_stats->add_option("input", stats.input, "Corpus or M2 file")->required();
  sc_stats->add_flag("--m2", stats.m2, "Input is an M2 file");
  sc_stats->add_option("--compare", stats.compare, "Second corpus or M2 file to compare with");
  sc_stats->add_flag("--compare-m2", stats.compare_m2, "Comparison file is an M2 file");
  sc_stats->add_option("--plot-data", stats.plot_data, "Write a TSV table for bar charts");

  ConsistencyOpts cons;
  auto* sc_cons = app.add_subcommand("consistency", "Correct/explain/apply chain consistency");
  sc_cons->add_option("--src", cons.src, "Source sentences")->required();
  sc_cons->add_option("--corrected", cons.corrected, "Corrected sentences")->required();
  sc_cons->add_option("--explained", cons.explained, "Explanation scripts JSONL")->required();
  sc_cons->add_option("--reapplied", cons.reapplied, "Sentences after re-applying the explanations")->required();
  sc_cons->add_flag("--records", cons.records, "Include per-sentence records");

  DecodeOpts dec;
  auto* sc_dec = app.add_subcommand("decode", "Beam search over a bigram table with temperature and source boost");
  sc_dec->add_option("--table", dec.table, "Bigram table JSON {token: {next: prob}}")->required();
  sc_dec->add_option("--vocab", dec.vocab, "Vocabulary JSONL {\"id\", \"token\"}");
  sc_dec->add_option("input", dec.input, "Source sentences, '-' for stdin")->capture_default_str();
  sc_dec->add_option("--eos", dec.eos, "End token")->capture_default_str();
  sc_dec->add_option("--start", dec.start, "Start context token")->capture_default_str();
  sc_dec->add_option("--temperature", dec.config.temperature, "Temperature")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sc_dec->add_option("--boost", dec.config.boost, "Source token boost")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sc_dec->add_option("--beam", dec.config.beam_width, "Beam width")->check(CLI::PositiveNumber)->capture_default_str();
  sc_dec->add_option("--max-len", dec.config.max_len, "Maximum output length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sc_dec->add_option("--window", dec.config.window, "Re-anchoring window")->capture_default_str();
  sc_dec->add_option("--nbest", dec.nbest, "Hypotheses per sentence")->check(CLI::PositiveNumber)->capture_default_str();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string hash = config_hash(app, *sub);
    Output sink(g.output, out);
    std::ostream& o = *sink;
    if (sub == sc_extract) {
      cmd_extract(g, extract, hash, o);
    } else if (sub == sc_gen) {
      cmd_gen_tasks(g, gen, hash, o);
    } else if (sub == sc_apply) {
      cmd_apply(g, apply, o);
    } else if (sub == sc_score) {
      cmd_score(score, hash, o);
    } else if (sub == sc_sched) {
      cmd_schedule(g, sched, o);
    } else if (sub == sc_stats) {
      cmd_stats(g, stats, hash, o);
    } else if (sub == sc_cons) {
      cmd_consistency(g, cons, hash, o);
    } else if (sub == sc_dec) {
      cmd_decode(g, dec, hash, o);
    }
    o.flush();
  } catch (const std::invalid_argument& e) {
    err << "gectk: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "gectk: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace gectk::cli
