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

#include "gectk/decode.hpp"

#include <limits>

#include "gectk/error.hpp"

namespace gectk {

Vocabulary::Vocabulary(std::vector<std::string> tokens) {
  for (auto& t : tokens) add(t);
}

Vocabulary Vocabulary::from_jsonl(std::istream& in, const std::string& name) {
  std::map<long long, std::string> by_id;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j.contains("token") ||
        !j["id"].is_number_integer() || !j["token"].is_string()) {
      throw DataError(name, line_no, "expected {\"id\": <int>, \"token\": <string>}");
    }
    if (!by_id.emplace(j["id"].get<long long>(), j["token"].get<std::string>()).second) {
      throw DataError(name, line_no, "duplicate id");
    }
  }
  Vocabulary v;
  long long expect = 0;
  for (const auto& [id, tok] : by_id) {
    if (id != expect) throw DataError(name, 0, "vocabulary ids must be 0..n-1 without gaps");
    if (v.find(tok)) throw DataError(name, 0, "duplicate token '" + tok + "'");
    v.add(tok);
    ++expect;
  }
  return v;
}

int Vocabulary::add(const std::string& token) {
  auto [it, fresh] = index_.try_emplace(token, static_cast<int>(tokens_.size()));
  if (fresh) tokens_.push_back(token);
  return it->second;
}

std::optional<int> Vocabulary::find(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Vocabulary::id(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) throw std::out_of_range("token '" + token + "' not in vocabulary");
  return it->second;
}

std::vector<int> Vocabulary::encode(std::span<const std::string> tokens) const {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(find(t).value_or(-1));
  return out;
}

Provider forced_sequence_provider(std::vector<int> sequence, std::size_t vocab_size, int eos) {
  return [sequence = std::move(sequence), vocab_size, eos](std::span<const int> prefix) {
    Eigen::VectorXd logits = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(vocab_size), -50.0);
    const int next = prefix.size() < sequence.size() ? sequence[prefix.size()] : eos;
    logits[next] = 0.0;
    return logits;
  };
}

BigramProvider::BigramProvider(const Vocabulary& vocab, std::vector<std::vector<double>> rows, int start,
                               double floor)
    : vocab_size_(vocab.size()), rows_(std::move(rows)), start_(start), floor_(floor) {
  if (!(floor > 0.0)) throw std::invalid_argument("floor probability must be positive");
  rows_.resize(vocab_size_);
  for (auto& r : rows_) r.resize(vocab_size_, 0.0);
}

BigramProvider BigramProvider::from_json(const nlohmann::json& table, Vocabulary& vocab, const std::string& start,
                                         double floor) {
  if (!table.is_object()) throw std::invalid_argument("bigram table must be a JSON object");
  // Register tokens in sorted key order so ids do not depend on file layout.
  std::vector<std::string> names;
  for (const auto& [prev, row] : table.items()) {
    names.push_back(prev);
    if (!row.is_object()) throw std::invalid_argument("bigram row for '" + prev + "' must be an object");
    for (const auto& [next, p] : row.items()) names.push_back(next);
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  for (const auto& n : names) vocab.add(n);
  const int start_id = vocab.add(start);

  std::vector<std::vector<double>> rows(vocab.size(), std::vector<double>(vocab.size(), 0.0));
  for (const auto& [prev, row] : table.items()) {
    for (const auto& [next, p] : row.items()) {
      if (!p.is_number() || p.get<double>() < 0.0) {
        throw std::invalid_argument("bigram probability for '" + prev + "' -> '" + next + "' must be >= 0");
      }
      rows[static_cast<std::size_t>(vocab.id(prev))][static_cast<std::size_t>(vocab.id(next))] = p.get<double>();
    }
  }
  return BigramProvider(vocab, std::move(rows), start_id, floor);
}

double BigramProvider::prob(int prev, int next) const {
  return rows_.at(static_cast<std::size_t>(prev)).at(static_cast<std::size_t>(next));
}

Eigen::VectorXd BigramProvider::operator()(std::span<const int> prefix) const {
  const int prev = prefix.empty() ? start_ : prefix.back();
  const auto& row = rows_.at(static_cast<std::size_t>(prev));
  Eigen::VectorXd logits(static_cast<Eigen::Index>(vocab_size_));
  for (std::size_t v = 0; v < vocab_size_; ++v) logits[static_cast<Eigen::Index>(v)] = std::log(std::max(row[v], floor_));
  return logits;
}

// ---------------------------------------------------------------------------

void DecodeConfig::validate() const {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (!(boost >= 0.0)) throw std::invalid_argument("boost must be non-negative");
  if (beam_width == 0) throw std::invalid_argument("beam width must be positive");
  if (max_len == 0) throw std::invalid_argument("max length must be positive");
}

Eigen::VectorXd step_distribution(const Eigen::VectorXd& logits, const AlignState<int>& state,
                                  std::span<const int> src_ids, const DecodeConfig& config) {
  return align_pred_boost(apply_temperature(logits, config.temperature), state, src_ids, config.boost);
}

bool better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.tokens != b.tokens) return a.tokens < b.tokens;
  return a.finished && !b.finished;
}

namespace {

struct Beam {
  std::vector<int> tokens;
  double log_prob = 0.0;
  AlignState<int> state;
};

struct Candidate {
  std::size_t parent;
  int token;
  double log_prob;
};

}  // namespace

std::vector<Hypothesis> beam_search(const Provider& provider, std::span<const int> src_ids, int eos,
                                    const DecodeConfig& config) {
  config.validate();
  std::vector<Beam> live(1);
  std::vector<Hypothesis> done;

  for (std::size_t step = 0; step < config.max_len && !live.empty(); ++step) {
    std::vector<Candidate> cands;
    for (std::size_t b = 0; b < live.size(); ++b) {
      const Eigen::VectorXd logits = provider(live[b].tokens);
      if (eos < 0 || eos >= logits.size()) throw std::out_of_range("end token id outside the provider vocabulary");
      const Eigen::VectorXd dist = step_distribution(logits, live[b].state, src_ids, config);
      for (Eigen::Index v = 0; v < dist.size(); ++v) {
        if (dist[v] > 0.0) cands.push_back({b, static_cast<int>(v), live[b].log_prob + std::log(dist[v])});
      }
    }
    auto cand_less = [&](const Candidate& a, const Candidate& b) {
      if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
      if (a.parent != b.parent) {
        const auto& ta = live[a.parent].tokens;
        const auto& tb = live[b.parent].tokens;
        if (ta != tb) return ta < tb;
      }
      return a.token < b.token;
    };
    const std::size_t keep = std::min(config.beam_width, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(), cand_less);

    std::vector<Beam> next;
    for (std::size_t k = 0; k < keep; ++k) {
      const Candidate& c = cands[k];
      const Beam& parent = live[c.parent];
      if (c.token == eos) {
        Hypothesis h{parent.tokens, c.log_prob, 0.0, true};
        h.score = c.log_prob / static_cast<double>(h.tokens.size() + 1);
        done.push_back(std::move(h));
        continue;
      }
      Beam nb;
      nb.tokens = parent.tokens;
      nb.tokens.push_back(c.token);
      nb.log_prob = c.log_prob;
      nb.state = advance_alignment<int>(parent.state, src_ids, c.token, config.window);
      next.push_back(std::move(nb));
    }
    live = std::move(next);
  }
  for (auto& b : live) {
    Hypothesis h{std::move(b.tokens), b.log_prob, 0.0, false};
    h.score = h.log_prob / static_cast<double>(std::max<std::size_t>(h.tokens.size(), 1));
    done.push_back(std::move(h));
  }
  std::sort(done.begin(), done.end(), better);
  return done;
}

}  // namespace gectk
