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

#include "gectk/align.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gectk {

namespace {

constexpr double kCostEps = 1e-9;

bool same_cost(double a, double b) { return std::abs(a - b) <= kCostEps; }

Tokens slice(const Tokens& tokens, Span s) {
  return Tokens(tokens.begin() + static_cast<std::ptrdiff_t>(s.begin),
                tokens.begin() + static_cast<std::ptrdiff_t>(s.end));
}

}  // namespace

TokenizedPair make_tokenized_pair(std::string pair_id, std::string doc_id, std::size_t doc_index,
                                  std::string_view src, std::string_view tgt) {
  TokenizedPair p;
  p.pair_id = std::move(pair_id);
  p.doc_id = std::move(doc_id);
  p.doc_index = doc_index;
  p.src_tokens = tokenize(src);
  p.tgt_tokens = tokenize(tgt);
  p.src_raw = join(p.src_tokens);
  p.tgt_raw = join(p.tgt_tokens);
  return p;
}

std::string_view to_string(EditOp op) {
  switch (op) {
    case EditOp::Insert: return "Insert";
    case EditOp::Delete: return "Delete";
    case EditOp::Replace: return "Replace";
  }
  return "?";
}

Edit make_edit(Span src, Span tgt, const Tokens& src_tokens, const Tokens& tgt_tokens) {
  Edit e;
  e.src = src;
  e.tgt = tgt;
  e.op = src.empty() ? EditOp::Insert : (tgt.empty() ? EditOp::Delete : EditOp::Replace);
  e.src_text = slice(src_tokens, src);
  e.tgt_text = slice(tgt_tokens, tgt);
  return e;
}

std::vector<AlignStep> align_steps(const Tokens& src, const Tokens& tgt, const CostModel& costs) {
  const std::size_t n = src.size();
  const std::size_t m = tgt.size();
  const std::size_t w = m + 1;
  std::vector<double> d((n + 1) * w);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return d[i * w + j]; };

  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<double>(j) * costs.insert;
  for (std::size_t i = 1; i <= n; ++i) {
    at(i, 0) = static_cast<double>(i) * costs.del;
    for (std::size_t j = 1; j <= m; ++j) {
      const double sub = src[i - 1] == tgt[j - 1] ? costs.match : costs.replace;
      at(i, j) = std::min({at(i - 1, j - 1) + sub, at(i - 1, j) + costs.del, at(i, j - 1) + costs.insert});
    }
  }

  std::vector<AlignStep> steps;
  steps.reserve(n + m);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const double here = at(i, j);
    if (i > 0 && j > 0) {
      const bool equal = src[i - 1] == tgt[j - 1];
      if (equal && same_cost(at(i - 1, j - 1) + costs.match, here)) {
        steps.push_back({AlignStep::Match, i - 1, j - 1});
        --i, --j;
        continue;
      }
      if (!equal && same_cost(at(i - 1, j - 1) + costs.replace, here)) {
        steps.push_back({AlignStep::Replace, i - 1, j - 1});
        --i, --j;
        continue;
      }
    }
    if (i > 0 && same_cost(at(i - 1, j) + costs.del, here)) {
      steps.push_back({AlignStep::Delete, i - 1, j});
      --i;
      continue;
    }
    steps.push_back({AlignStep::Insert, i, j - 1});
    --j;
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

double steps_cost(const std::vector<AlignStep>& steps, const CostModel& costs) {
  double total = 0.0;
  for (const auto& s : steps) {
    switch (s.kind) {
      case AlignStep::Match: total += costs.match; break;
      case AlignStep::Replace: total += costs.replace; break;
      case AlignStep::Delete: total += costs.del; break;
      case AlignStep::Insert: total += costs.insert; break;
    }
  }
  return total;
}

std::vector<Edit> merge_steps(const std::vector<AlignStep>& steps, const Tokens& src,
                              const Tokens& tgt) {
  std::vector<Edit> edits;
  auto step_edit = [&](const AlignStep& s) {
    switch (s.kind) {
      case AlignStep::Replace: return make_edit({s.src, s.src + 1}, {s.tgt, s.tgt + 1}, src, tgt);
      case AlignStep::Delete: return make_edit({s.src, s.src + 1}, {s.tgt, s.tgt}, src, tgt);
      default: return make_edit({s.src, s.src}, {s.tgt, s.tgt + 1}, src, tgt);
    }
  };

  std::size_t k = 0;
  while (k < steps.size()) {
    if (steps[k].kind == AlignStep::Match) {
      ++k;
      continue;
    }
    std::size_t end = k;
    std::size_t n_rep = 0, n_del = 0, n_ins = 0;
    while (end < steps.size() && steps[end].kind != AlignStep::Match) {
      switch (steps[end].kind) {
        case AlignStep::Replace: ++n_rep; break;
        case AlignStep::Delete: ++n_del; break;
        default: ++n_ins; break;
      }
      ++end;
    }
    const std::size_t len = end - k;
    const bool merge = (len >= 2 && n_rep > 0) || n_ins == len || n_del == len;
    if (merge) {
      const AlignStep& first = steps[k];
      const Span s{first.src, first.src + n_rep + n_del};
      const Span t{first.tgt, first.tgt + n_rep + n_ins};
      edits.push_back(make_edit(s, t, src, tgt));
    } else {
      for (std::size_t q = k; q < end; ++q) edits.push_back(step_edit(steps[q]));
    }
    k = end;
  }
  return edits;
}

std::vector<Edit> align_tokens(const Tokens& src, const Tokens& tgt, const CostModel& costs) {
  if (src == tgt) return {};
  return merge_steps(align_steps(src, tgt, costs), src, tgt);
}

EditScript align_pair(const TokenizedPair& pair, const CostModel& costs) {
  return {pair.pair_id, align_tokens(pair.src_tokens, pair.tgt_tokens, costs)};
}

std::string validate_script(const std::vector<Edit>& edits, const Tokens& src, const Tokens& tgt) {
  std::ostringstream why;
  std::size_t src_pos = 0, tgt_pos = 0;
  for (std::size_t k = 0; k < edits.size(); ++k) {
    const Edit& e = edits[k];
    const bool shape_ok = (e.op == EditOp::Insert && e.src.empty() && !e.tgt.empty()) ||
                          (e.op == EditOp::Delete && !e.src.empty() && e.tgt.empty()) ||
                          (e.op == EditOp::Replace && !e.src.empty() && !e.tgt.empty());
    if (!shape_ok) {
      why << "edit " << k << ": op does not match span shape";
      return why.str();
    }
    if (e.src.end > src.size() || e.tgt.end > tgt.size() || e.src.begin > e.src.end ||
        e.tgt.begin > e.tgt.end) {
      why << "edit " << k << ": span out of range";
      return why.str();
    }
    if (e.src_text != slice(src, e.src) || e.tgt_text != slice(tgt, e.tgt)) {
      why << "edit " << k << ": text does not match span";
      return why.str();
    }
    if (e.src.begin < src_pos || e.tgt.begin < tgt_pos) {
      why << "edit " << k << ": out of order or overlapping";
      return why.str();
    }
    if (e.src.begin - src_pos != e.tgt.begin - tgt_pos ||
        !std::equal(src.begin() + src_pos, src.begin() + e.src.begin, tgt.begin() + tgt_pos)) {
      why << "edit " << k << ": unchanged region differs between source and target";
      return why.str();
    }
    src_pos = e.src.end;
    tgt_pos = e.tgt.end;
  }
  if (src.size() - src_pos != tgt.size() - tgt_pos ||
      !std::equal(src.begin() + src_pos, src.end(), tgt.begin() + tgt_pos)) {
    return "trailing unchanged region differs between source and target";
  }
  return {};
}

}  // namespace gectk
