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

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gectk/align.hpp"
#include "gectk/m2.hpp"

namespace gectk {

/// F-beta from precision and recall. Inputs on the 0..1 scale give a
/// ratio; if either input exceeds 1 both are read as percentages and the
/// result is a percentage. Returns 0 when p = r = 0.
double f_beta(double beta, double p, double r);

struct Counts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  Counts& operator+=(const Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend Counts operator+(Counts a, const Counts& b) { return a += b; }
  friend bool operator==(const Counts&, const Counts&) = default;
};

/// 0/0 precision and recall are 1.0.
double precision(const Counts& c);
double recall(const Counts& c);
double f_half(const Counts& c);

// ---------------------------------------------------------------------------
// Error typing

enum class ErrorType { Punct, Orth, Spell, WordOrder, Missing, Unnecessary, ReplaceOther };

inline constexpr std::array<ErrorType, 7> kAllErrorTypes = {
    ErrorType::Punct,   ErrorType::Orth,        ErrorType::Spell,       ErrorType::WordOrder,
    ErrorType::Missing, ErrorType::Unnecessary, ErrorType::ReplaceOther};

/// PUNCT, ORTH, SPELL, WO, M, U, R-OTHER.
std::string_view error_label(ErrorType t);

/// Rule-based edit typing; the first matching rule wins:
///   PUNCT  every token on both sides is punctuation (Unicode P*)
///   ORTH   both sides equal after case folding with spaces removed
///   WO     same token multiset on both sides, more than one token
///   SPELL  one-token replace, character distance / longer length <= 0.5,
///          same first character after case folding
///   M / U / R-OTHER  insert / delete / replace otherwise
ErrorType classify_error(const Edit& edit);

struct ErrorHistogram {
  std::map<ErrorType, std::int64_t> counts;  // every type present, possibly 0

  ErrorHistogram();
  void add(ErrorType t) { ++counts[t]; }
  void add(const std::vector<Edit>& edits);
  std::int64_t total() const;
  /// count / total; all zeros for an empty histogram.
  double proportion(ErrorType t) const;
};

ErrorHistogram error_histogram(std::span<const TokenizedPair> pairs, const CostModel& costs = {});
/// Counts the non-noop edits of every annotator.
ErrorHistogram error_histogram(std::span<const M2Record> records);

/// Total variation distance between the two proportion vectors.
double histogram_distance(const ErrorHistogram& a, const ErrorHistogram& b);

// ---------------------------------------------------------------------------
// Evaluation

enum class EvalMode { BestAnnotator, AverageReference };

EvalMode parse_eval_mode(std::string_view name);

struct ScoreReport {
  int annotator = -1;  // set on per-reference reports
  Counts counts;
  double precision = 1.0;
  double recall = 1.0;
  double f_half = 0.0;
  std::map<std::string, Counts> per_type;
  /// Average-reference mode only: one report per annotator id.
  std::vector<ScoreReport> per_reference;
};

struct EvalOptions {
  EvalMode mode = EvalMode::BestAnnotator;
  /// Average-reference mode: pool counts over annotators and compute
  /// P/R/F from the pooled counts instead of averaging the scores.
  bool average_counts = false;
  CostModel costs;
};

/// Sentence-level matching: an edit matches a gold edit when source span
/// and correction tokens are equal. Per-type counts use classify_error on
/// the gold edit (tp, fn) or the hypothesis edit (fp).
Counts match_edits(const std::vector<Edit>& hyp, const std::vector<Edit>& gold,
                   std::map<std::string, Counts>* per_type = nullptr);

/// Hypothesis edits are extracted by aligning each source with its
/// hypothesis. Throws std::invalid_argument on a length mismatch.
ScoreReport evaluate(std::span<const Tokens> hyps, std::span<const M2Record> golds,
                     const EvalOptions& options = {});

std::vector<Edit> extract_hyp_edits(const Tokens& src, const Tokens& hyp, const CostModel& costs = {});

// ---------------------------------------------------------------------------
// Chain consistency

struct ConsistencyRecord {
  bool edits_exact_match = false;
  bool chain_exact_match = false;
  double edit_f_half = 0.0;
  Counts edit_counts;
  std::string reason;  // parse problems, empty when none
};

/// Compares an explanation script with the edits that align `src` to
/// `corrected`, and the corrected sentence with the re-applied one.
/// Edits are compared by (op, source text, target text) since plain-mode
/// scripts carry no positions.
ConsistencyRecord consistency_report(const Tokens& src, const Tokens& corrected, std::string_view explained,
                                     const Tokens& reapplied, const CostModel& costs = {});

struct ConsistencySummary {
  std::size_t sentences = 0;
  std::size_t edits_exact = 0;
  std::size_t chain_exact = 0;
  Counts edit_counts;

  void add(const ConsistencyRecord& r);
  double edits_exact_rate() const;
  double chain_exact_rate() const;
  double edit_f_half() const { return f_half(edit_counts); }
};

}  // namespace gectk
