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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "gectk/text.hpp"

namespace gectk {

/// A source/target sentence pair together with its position in a document.
/// The raw strings are stored normalized, i.e. as the tokens joined by
/// single spaces.
struct TokenizedPair {
  std::string pair_id;
  std::string doc_id;
  std::size_t doc_index = 0;
  Tokens src_tokens;
  Tokens tgt_tokens;
  std::string src_raw;
  std::string tgt_raw;
};

TokenizedPair make_tokenized_pair(std::string pair_id, std::string doc_id, std::size_t doc_index,
                                  std::string_view src, std::string_view tgt);

enum class EditOp { Insert, Delete, Replace };

std::string_view to_string(EditOp op);

/// Half-open token interval.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  friend bool operator==(const Span&, const Span&) = default;
};

struct Edit {
  EditOp op = EditOp::Replace;
  Span src;
  Span tgt;
  Tokens src_text;
  Tokens tgt_text;

  friend bool operator==(const Edit&, const Edit&) = default;
};

/// Builds an edit from spans, slicing the texts out of the token lists.
Edit make_edit(Span src, Span tgt, const Tokens& src_tokens, const Tokens& tgt_tokens);

struct EditScript {
  std::string pair_id;
  std::vector<Edit> edits;
};

struct CostModel {
  double match = 0.0;
  double replace = 1.0;
  double insert = 1.0;
  double del = 1.0;
};

/// One step of a token-level alignment, before span merging.
struct AlignStep {
  enum Kind { Match, Replace, Delete, Insert } kind;
  std::size_t src;  // source index consumed, or insertion position
  std::size_t tgt;  // target index produced, or position for a delete
};

/// Minimal-cost monotone alignment. Traceback prefers match, then replace,
/// then delete, then insert, so the result is unique for given inputs.
std::vector<AlignStep> align_steps(const Tokens& src, const Tokens& tgt,
                                   const CostModel& costs = {});

double steps_cost(const std::vector<AlignStep>& steps, const CostModel& costs = {});

/// Collapses alignment steps into span edits. A maximal run of adjacent
/// non-match steps becomes one edit when it has at least two steps and a
/// replace, or when it is all inserts or all deletes. Other runs stay as
/// one edit per step.
std::vector<Edit> merge_steps(const std::vector<AlignStep>& steps, const Tokens& src,
                              const Tokens& tgt);

std::vector<Edit> align_tokens(const Tokens& src, const Tokens& tgt, const CostModel& costs = {});

EditScript align_pair(const TokenizedPair& pair, const CostModel& costs = {});

/// Checks the structural invariants of a script against its pair.
/// Returns an empty string when valid, otherwise a description.
std::string validate_script(const std::vector<Edit>& edits, const Tokens& src, const Tokens& tgt);

}  // namespace gectk
