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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gectk/align.hpp"

namespace gectk {

/// `Plain` is the one-line-per-edit format used for training targets.
/// `Anchored` appends ` @<source index>` to every line so that application
/// is lossless.
enum class ScriptMode { Plain, Anchored };

ScriptMode parse_script_mode(std::string_view name);

inline constexpr std::string_view kNoCorrection = "No correction";

struct TextualEdit {
  EditOp op = EditOp::Replace;
  Tokens src_text;
  Tokens tgt_text;
  std::optional<std::size_t> anchor;

  friend bool operator==(const TextualEdit&, const TextualEdit&) = default;
};

TextualEdit to_textual(const Edit& edit, ScriptMode mode);
std::vector<TextualEdit> to_textual(const std::vector<Edit>& edits, ScriptMode mode);

std::string serialize_edit(const TextualEdit& edit);

/// One line per edit, joined by '\n' without a trailing newline.
/// An empty script serializes to "No correction".
std::string serialize_script(const std::vector<Edit>& edits, ScriptMode mode);
std::string serialize_script(const EditScript& script, ScriptMode mode);
std::string serialize_script(const std::vector<TextualEdit>& edits);

struct ScriptParseError {
  std::size_t line;  // 1-based
  std::string reason;
};

struct ScriptParseResult {
  std::vector<TextualEdit> edits;
  std::vector<ScriptParseError> errors;
  /// Set when a Replace line contains more than one bare `with` token, so
  /// the split point was chosen by the first-occurrence rule.
  bool with_ambiguity = false;

  bool ok() const { return errors.empty(); }
};

struct ParseOptions {
  /// Reject Replace lines whose source or target text contains `with`.
  bool strict = false;
};

ScriptParseResult parse_script(std::string_view text, ScriptMode mode, const ParseOptions& options = {});

/// What to do with an Insert that carries no anchor.
enum class UnanchoredInsert {
  AfterCursor,  // insert after the source token at the cursor
  Skip,         // report as skipped
};

struct ApplyOptions {
  UnanchoredInsert unanchored_insert = UnanchoredInsert::AfterCursor;
};

struct SkippedEdit {
  std::size_t index;  // position in the input edit list
  TextualEdit edit;
  std::string reason;
};

struct ApplyOutcome {
  Tokens result;
  std::size_t applied = 0;
  std::vector<SkippedEdit> skipped;
};

/// Applies edits left to right with a monotone cursor over the source.
///
/// Unanchored Delete/Replace match the first occurrence of their source
/// text at or after the cursor; the cursor then moves past the match.
/// Unanchored Insert goes right after the source token under the cursor
/// (or at the end when the source is exhausted) and the cursor moves past
/// that token. Anchored edits apply exactly at their index and are skipped
/// when the source text differs there or the index lies behind the cursor.
/// Nothing throws; failures are reported in `skipped`.
ApplyOutcome apply_script(const Tokens& src, const std::vector<TextualEdit>& edits,
                          const ApplyOptions& options = {});

}  // namespace gectk
