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

#include "gectk/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

#include "gectk/editscript.hpp"
#include "gectk/text.hpp"

namespace gectk {

double f_beta(double beta, double p, double r) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(p >= 0.0) || !(r >= 0.0)) throw std::invalid_argument("precision and recall must be non-negative");
  const bool percent = p > 1.0 || r > 1.0;
  if (percent && (p > 100.0 || r > 100.0)) throw std::invalid_argument("precision and recall must be at most 100");
  const double scale = percent ? 100.0 : 1.0;
  p /= scale;
  r /= scale;
  const double b2 = beta * beta;
  const double denom = b2 * p + r;
  if (denom == 0.0) return 0.0;
  return scale * (1.0 + b2) * p * r / denom;
}

double precision(const Counts& c) {
  const auto d = c.tp + c.fp;
  return d == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

double recall(const Counts& c) {
  const auto d = c.tp + c.fn;
  return d == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

double f_half(const Counts& c) { return f_beta(0.5, precision(c), recall(c)); }

// ---------------------------------------------------------------------------

std::string_view error_label(ErrorType t) {
  switch (t) {
    case ErrorType::Punct: return "PUNCT";
    case ErrorType::Orth: return "ORTH";
    case ErrorType::Spell: return "SPELL";
    case ErrorType::WordOrder: return "WO";
    case ErrorType::Missing: return "M";
    case ErrorType::Unnecessary: return "U";
    case ErrorType::ReplaceOther: return "R-OTHER";
  }
  return "?";
}

ErrorType classify_error(const Edit& edit) {
  const auto all_punct = [](const Tokens& t) {
    return std::all_of(t.begin(), t.end(), [](const std::string& s) { return is_punct_token(s); });
  };
  if (all_punct(edit.src_text) && all_punct(edit.tgt_text)) return ErrorType::Punct;

  const auto folded = [](const Tokens& t) { return fold_case(decode_utf8(join(t, ""))); };
  const std::u32string src_fold = folded(edit.src_text);
  const std::u32string tgt_fold = folded(edit.tgt_text);
  if (src_fold == tgt_fold) return ErrorType::Orth;

  if (edit.src_text.size() > 1) {
    Tokens a = edit.src_text, b = edit.tgt_text;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a == b) return ErrorType::WordOrder;
  }

  if (edit.op == EditOp::Replace && edit.src_text.size() == 1 && edit.tgt_text.size() == 1) {
    const auto a = decode_utf8(edit.src_text[0]);
    const auto b = decode_utf8(edit.tgt_text[0]);
    const auto longest = std::max(a.size(), b.size());
    const double dist = static_cast<double>(char_edit_distance(a, b)) / static_cast<double>(longest);
    if (dist <= 0.5 && fold_case(a.front()) == fold_case(b.front())) return ErrorType::Spell;
  }

  switch (edit.op) {
    case EditOp::Insert: return ErrorType::Missing;
    case EditOp::Delete: return ErrorType::Unnecessary;
    default: return ErrorType::ReplaceOther;
  }
}

ErrorHistogram::ErrorHistogram() {
  for (ErrorType t : kAllErrorTypes) counts[t] = 0;
}

void ErrorHistogram::add(const std::vector<Edit>& edits) {
  for (const auto& e : edits) add(classify_error(e));
}

std::int64_t ErrorHistogram::total() const {
  std::int64_t n = 0;
  for (const auto& [t, c] : counts) n += c;
  return n;
}

double ErrorHistogram::proportion(ErrorType t) const {
  const auto n = total();
  if (n == 0) return 0.0;
  auto it = counts.find(t);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(n);
}

ErrorHistogram error_histogram(std::span<const TokenizedPair> pairs, const CostModel& costs) {
  ErrorHistogram h;
  for (const auto& p : pairs) h.add(align_tokens(p.src_tokens, p.tgt_tokens, costs));
  return h;
}

ErrorHistogram error_histogram(std::span<const M2Record> records) {
  ErrorHistogram h;
  for (const auto& r : records) {
    if (r.edits.empty()) continue;
    for (int id : r.annotator_ids()) h.add(r.annotator_edits(id));
  }
  return h;
}

double histogram_distance(const ErrorHistogram& a, const ErrorHistogram& b) {
  double d = 0.0;
  for (ErrorType t : kAllErrorTypes) d += std::abs(a.proportion(t) - b.proportion(t));
  return 0.5 * d;
}

// ---------------------------------------------------------------------------

EvalMode parse_eval_mode(std::string_view name) {
  if (name == "best" || name == "best_annotator") return EvalMode::BestAnnotator;
  if (name == "average" || name == "average_reference") return EvalMode::AverageReference;
  throw std::invalid_argument("unknown evaluation mode '" + std::string(name) + "'");
}

std::vector<Edit> extract_hyp_edits(const Tokens& src, const Tokens& hyp, const CostModel& costs) {
  return align_tokens(src, hyp, costs);
}

Counts match_edits(const std::vector<Edit>& hyp, const std::vector<Edit>& gold,
                   std::map<std::string, Counts>* per_type) {
  Counts c;
  std::vector<bool> used(gold.size(), false);
  for (const auto& h : hyp) {
    bool hit = false;
    for (std::size_t g = 0; g < gold.size(); ++g) {
      if (!used[g] && gold[g].src == h.src && gold[g].tgt_text == h.tgt_text) {
        used[g] = true;
        hit = true;
        break;
      }
    }
    if (hit) {
      ++c.tp;
      if (per_type) ++(*per_type)[std::string(error_label(classify_error(h)))].tp;
    } else {
      ++c.fp;
      if (per_type) ++(*per_type)[std::string(error_label(classify_error(h)))].fp;
    }
  }
  for (std::size_t g = 0; g < gold.size(); ++g) {
    if (used[g]) continue;
    ++c.fn;
    if (per_type) ++(*per_type)[std::string(error_label(classify_error(gold[g])))].fn;
  }
  return c;
}

namespace {

ScoreReport finish(const Counts& c, std::map<std::string, Counts> per_type) {
  ScoreReport r;
  r.counts = c;
  r.precision = precision(c);
  r.recall = recall(c);
  r.f_half = f_half(c);
  r.per_type = std::move(per_type);
  return r;
}

std::vector<Edit> gold_for(const M2Record& rec, int id) {
  if (rec.edits.empty()) return {};
  if (rec.has_annotator(id)) return rec.annotator_edits(id);
  return rec.annotator_edits(rec.annotator_ids().front());
}

}  // namespace

ScoreReport evaluate(std::span<const Tokens> hyps, std::span<const M2Record> golds, const EvalOptions& options) {
  if (hyps.size() != golds.size()) {
    throw std::invalid_argument("hypothesis count " + std::to_string(hyps.size()) + " does not match gold count " +
                                std::to_string(golds.size()));
  }
  std::vector<std::vector<Edit>> hyp_edits(hyps.size());
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    hyp_edits[i] = extract_hyp_edits(golds[i].src_tokens, hyps[i], options.costs);
  }

  if (options.mode == EvalMode::BestAnnotator) {
    Counts total;
    std::map<std::string, Counts> per_type;
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      const M2Record& rec = golds[i];
      bool have = false;
      Counts best;
      std::map<std::string, Counts> best_types;
      double best_f = 0.0;
      for (int id : rec.annotator_ids()) {
        std::map<std::string, Counts> types;
        const Counts c = match_edits(hyp_edits[i], gold_for(rec, id), &types);
        const double f = f_half(total + c);
        if (!have || f > best_f) {
          have = true;
          best = c;
          best_f = f;
          best_types = std::move(types);
        }
      }
      total += best;
      for (const auto& [k, v] : best_types) per_type[k] += v;
    }
    return finish(total, std::move(per_type));
  }

  std::set<int> ids;
  for (const auto& rec : golds) {
    if (rec.edits.empty()) continue;
    for (int id : rec.annotator_ids()) ids.insert(id);
  }
  if (ids.empty()) ids.insert(0);

  ScoreReport out;
  Counts pooled;
  std::map<std::string, Counts> pooled_types;
  double sum_p = 0.0, sum_r = 0.0, sum_f = 0.0;
  for (int id : ids) {
    Counts c;
    std::map<std::string, Counts> types;
    for (std::size_t i = 0; i < hyps.size(); ++i) c += match_edits(hyp_edits[i], gold_for(golds[i], id), &types);
    ScoreReport r = finish(c, types);
    r.annotator = id;
    sum_p += r.precision;
    sum_r += r.recall;
    sum_f += r.f_half;
    pooled += c;
    for (const auto& [k, v] : types) pooled_types[k] += v;
    out.per_reference.push_back(std::move(r));
  }
  const double n = static_cast<double>(ids.size());
  out.counts = pooled;
  out.per_type = std::move(pooled_types);
  if (options.average_counts) {
    out.precision = precision(pooled);
    out.recall = recall(pooled);
    out.f_half = f_half(pooled);
  } else {
    out.precision = sum_p / n;
    out.recall = sum_r / n;
    out.f_half = sum_f / n;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using EditKey = std::tuple<EditOp, Tokens, Tokens>;

EditKey key_of(EditOp op, const Tokens& s, const Tokens& t) { return {op, s, t}; }

}  // namespace

ConsistencyRecord consistency_report(const Tokens& src, const Tokens& corrected, std::string_view explained,
                                     const Tokens& reapplied, const CostModel& costs) {
  ConsistencyRecord rec;
  rec.chain_exact_match = corrected == reapplied;

  std::vector<EditKey> reference;
  for (const auto& e : align_tokens(src, corrected, costs)) reference.push_back(key_of(e.op, e.src_text, e.tgt_text));

  const auto parsed = parse_script(explained, ScriptMode::Plain);
  std::vector<EditKey> predicted;
  for (const auto& e : parsed.edits) predicted.push_back(key_of(e.op, e.src_text, e.tgt_text));

  if (!parsed.ok()) {
    for (const auto& err : parsed.errors) {
      if (!rec.reason.empty()) rec.reason += "; ";
      rec.reason += "line " + std::to_string(err.line) + ": " + err.reason;
    }
  }
  rec.edits_exact_match = parsed.ok() && predicted == reference;

  std::vector<bool> used(reference.size(), false);
  for (const auto& p : predicted) {
    bool hit = false;
    for (std::size_t g = 0; g < reference.size(); ++g) {
      if (!used[g] && reference[g] == p) {
        used[g] = hit = true;
        break;
      }
    }
    hit ? ++rec.edit_counts.tp : ++rec.edit_counts.fp;
  }
  rec.edit_counts.fn = static_cast<std::int64_t>(std::count(used.begin(), used.end(), false));
  rec.edit_f_half = f_half(rec.edit_counts);
  return rec;
}

void ConsistencySummary::add(const ConsistencyRecord& r) {
  ++sentences;
  if (r.edits_exact_match) ++edits_exact;
  if (r.chain_exact_match) ++chain_exact;
  edit_counts += r.edit_counts;
}

double ConsistencySummary::edits_exact_rate() const {
  return sentences == 0 ? 0.0 : static_cast<double>(edits_exact) / static_cast<double>(sentences);
}

double ConsistencySummary::chain_exact_rate() const {
  return sentences == 0 ? 0.0 : static_cast<double>(chain_exact) / static_cast<double>(sentences);
}

}  // namespace gectk
