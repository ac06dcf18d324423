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

#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace gectk {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// ---------------------------------------------------------------------------
// Distribution transforms. All of them map the probability simplex to
// itself.

/// softmax(logits / temperature), computed with the max subtracted.
template <typename Derived>
Vector<typename Derived::Scalar> apply_temperature(const Eigen::MatrixBase<Derived>& logits,
                                                   typename Derived::Scalar temperature) {
  using Scalar = typename Derived::Scalar;
  if (!(temperature > Scalar(0))) throw std::invalid_argument("temperature must be positive");
  if (logits.size() == 0) throw std::invalid_argument("empty logit vector");
  if (!logits.allFinite()) throw std::domain_error("logits must be finite");
  const Vector<Scalar> scaled = logits / temperature;
  const Vector<Scalar> e = (scaled.array() - scaled.maxCoeff()).exp().matrix();
  return e / e.sum();
}

/// Multiplies the probability of `boosted` by (1 + boost) and renormalizes.
/// A negative index (no source token to favour) returns the input.
template <typename Derived>
Vector<typename Derived::Scalar> boost_token(const Eigen::MatrixBase<Derived>& dist, Eigen::Index boosted,
                                             typename Derived::Scalar boost) {
  using Scalar = typename Derived::Scalar;
  if (!(boost >= Scalar(0))) throw std::invalid_argument("boost must be non-negative");
  Vector<Scalar> out = dist;
  if (boosted < 0 || boosted >= out.size()) return out;
  const Scalar ps = out[boosted];
  out /= Scalar(1) + boost * ps;
  out[boosted] = ps * (Scalar(1) + boost) / (Scalar(1) + boost * ps);
  return out;
}

template <typename Derived>
typename Derived::Scalar entropy(const Eigen::MatrixBase<Derived>& dist) {
  using Scalar = typename Derived::Scalar;
  Scalar h(0);
  for (Eigen::Index i = 0; i < dist.size(); ++i) {
    if (dist[i] > Scalar(0)) h -= dist[i] * std::log(dist[i]);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Monotone alignment of the generated prefix to the source.

template <typename Token>
struct AlignState {
  std::size_t consumed = 0;
  std::vector<bool> matched;  // one flag per emitted token: exact step or not
  std::vector<Token> recent;  // last `window` emitted tokens
};

/// Exact step when `emitted` equals the next source token. Otherwise tries
/// to re-anchor: for a window size w from `window` down to 1, the smallest
/// position c > consumed whose preceding w source tokens equal the last w
/// emitted tokens becomes the new consumed count. Stays put when nothing
/// matches.
template <typename Token>
AlignState<Token> advance_alignment(AlignState<Token> state, std::span<const Token> src, const Token& emitted,
                                    std::size_t window = 2) {
  state.recent.push_back(emitted);
  if (window > 0 && state.recent.size() > window) state.recent.erase(state.recent.begin());

  if (state.consumed < src.size() && src[state.consumed] == emitted) {
    ++state.consumed;
    state.matched.push_back(true);
    return state;
  }
  state.matched.push_back(false);
  for (std::size_t w = std::min(window, state.recent.size()); w >= 1; --w) {
    const auto tail = std::span<const Token>(state.recent).last(w);
    for (std::size_t c = std::max(state.consumed + 1, w); c <= src.size(); ++c) {
      if (std::equal(tail.begin(), tail.end(), src.begin() + static_cast<std::ptrdiff_t>(c - w))) {
        state.consumed = c;
        return state;
      }
    }
  }
  return state;
}

/// Boosts the vocabulary id of the next unconsumed source token.
/// `src_ids` holds vocabulary ids of the source, negative for tokens
/// outside the vocabulary. Identity once the source is exhausted.
template <typename Derived>
Vector<typename Derived::Scalar> align_pred_boost(const Eigen::MatrixBase<Derived>& dist,
                                                  const AlignState<int>& state, std::span<const int> src_ids,
                                                  typename Derived::Scalar boost) {
  if (state.consumed >= src_ids.size()) return boost_token(dist, -1, boost);
  return boost_token(dist, src_ids[state.consumed], boost);
}

// ---------------------------------------------------------------------------
// Vocabulary and next-token providers.

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> tokens);

  /// JSONL lines {"id": n, "token": "..."}; ids must cover 0..n-1.
  static Vocabulary from_jsonl(std::istream& in, const std::string& name = {});

  int add(const std::string& token);
  std::optional<int> find(const std::string& token) const;
  int id(const std::string& token) const;  // throws std::out_of_range
  const std::string& token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return tokens_.size(); }
  /// Ids for a token sequence, -1 for unknown tokens.
  std::vector<int> encode(std::span<const std::string> tokens) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

/// Returns next-token logits for a prefix of token ids.
using Provider = std::function<Eigen::VectorXd(std::span<const int> prefix)>;

/// Emits sequence[t] at step t and `eos` afterwards, with overwhelming
/// probability.
Provider forced_sequence_provider(std::vector<int> sequence, std::size_t vocab_size, int eos);

/// Bigram table {prev: {next: prob}}; the empty prefix uses the row of
/// `start`. Missing transitions get probability `floor`. Logits are log
/// probabilities.
class BigramProvider {
 public:
  BigramProvider(const Vocabulary& vocab, std::vector<std::vector<double>> rows, int start, double floor = 1e-9);

  /// Parses the JSON table. Every token mentioned is added to `vocab` if
  /// missing, so the vocabulary may grow.
  static BigramProvider from_json(const nlohmann::json& table, Vocabulary& vocab, const std::string& start = "<s>",
                                  double floor = 1e-9);

  Eigen::VectorXd operator()(std::span<const int> prefix) const;
  double prob(int prev, int next) const;

 private:
  std::size_t vocab_size_;
  std::vector<std::vector<double>> rows_;  // row per previous token
  int start_;
  double floor_;
};

// ---------------------------------------------------------------------------
// Beam search.

struct DecodeConfig {
  double temperature = 1.0;
  double boost = 0.5;
  std::size_t beam_width = 4;
  std::size_t max_len = 64;
  std::size_t window = 2;

  void validate() const;
};

struct Hypothesis {
  std::vector<int> tokens;  // without the end token
  double log_prob = 0.0;
  double score = 0.0;       // log_prob / length, the end token counted
  bool finished = false;    // ended with the end token
};

/// One decoding step: temperature first, then the source boost.
Eigen::VectorXd step_distribution(const Eigen::VectorXd& logits, const AlignState<int>& state,
                                  std::span<const int> src_ids, const DecodeConfig& config);

/// Hypotheses ordered best first; ties resolve to the lexicographically
/// smaller token sequence.
std::vector<Hypothesis> beam_search(const Provider& provider, std::span<const int> src_ids, int eos,
                                    const DecodeConfig& config);

/// Strict weak order used for ranking hypotheses.
bool better(const Hypothesis& a, const Hypothesis& b);

}  // namespace gectk
