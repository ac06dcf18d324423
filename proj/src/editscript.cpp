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

#include "gectk/editscript.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace gectk {

namespace {

constexpr std::string_view kWith = "with";

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (true) {
    const auto nl = text.find('\n', start);
    auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  // A single trailing newline is tolerated.
  if (lines.size() > 1 && lines.back().empty()) lines.pop_back();
  return lines;
}

std::optional<std::size_t> parse_anchor(std::string_view token) {
  if (token.size() < 2 || token.front() != '@') return std::nullopt;
  std::size_t value = 0;
  const char* first = token.data() + 1;
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

bool contains_with(const Tokens& t) { return std::find(t.begin(), t.end(), kWith) != t.end(); }

// Returns the index of the first occurrence of `needle` in `hay` at or after
// `from`, or npos.
std::size_t find_run(const Tokens& hay, const Tokens& needle, std::size_t from) {
  if (needle.empty() || hay.size() < needle.size()) return std::string::npos;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<std::ptrdiff_t>(i))) return i;
  }
  return std::string::npos;
}

}  // namespace

ScriptMode parse_script_mode(std::string_view name) {
  if (name == "plain") return ScriptMode::Plain;
  if (name == "anchored") return ScriptMode::Anchored;
  throw std::invalid_argument("unknown script mode '" + std::string(name) + "'");
}

TextualEdit to_textual(const Edit& edit, ScriptMode mode) {
  TextualEdit t{edit.op, edit.src_text, edit.tgt_text, std::nullopt};
  if (mode == ScriptMode::Anchored) t.anchor = edit.src.begin;
  return t;
}

std::vector<TextualEdit> to_textual(const std::vector<Edit>& edits, ScriptMode mode) {
  std::vector<TextualEdit> out;
  out.reserve(edits.size());
  for (const auto& e : edits) out.push_back(to_textual(e, mode));
  return out;
}

std::string serialize_edit(const TextualEdit& edit) {
  std::string line(to_string(edit.op));
  switch (edit.op) {
    case EditOp::Delete:
      line += ' ';
      line += join(edit.src_text);
      break;
    case EditOp::Insert:
      line += ' ';
      line += join(edit.tgt_text);
      break;
    case EditOp::Replace:
      line += ' ';
      line += join(edit.src_text);
      line += " with ";
      line += join(edit.tgt_text);
      break;
  }
  if (edit.anchor) {
    line += " @";
    line += std::to_string(*edit.anchor);
  }
  return line;
}

std::string serialize_script(const std::vector<TextualEdit>& edits) {
  if (edits.empty()) return std::string(kNoCorrection);
  std::string out;
  for (std::size_t i = 0; i < edits.size(); ++i) {
    if (i) out += '\n';
    out += serialize_edit(edits[i]);
  }
  return out;
}

std::string serialize_script(const std::vector<Edit>& edits, ScriptMode mode) {
  return serialize_script(to_textual(edits, mode));
}

std::string serialize_script(const EditScript& script, ScriptMode mode) {
  return serialize_script(script.edits, mode);
}

ScriptParseResult parse_script(std::string_view text, ScriptMode mode, const ParseOptions& options) {
  ScriptParseResult result;
  if (tokenize(text).empty()) {
    result.errors.push_back({1, "empty script"});
    return result;
  }
  const auto lines = split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    auto fail = [&](std::string reason) { result.errors.push_back({line_no, std::move(reason)}); };

    Tokens tokens = tokenize(lines[li]);
    if (tokens.empty()) {
      fail("empty line");
      continue;
    }
    if (tokens.size() == 2 && tokens[0] == "No" && tokens[1] == "correction") {
      if (lines.size() != 1) fail("'No correction' must be the whole script");
      continue;
    }

    TextualEdit edit;
    if (mode == ScriptMode::Anchored) {
      auto anchor = parse_anchor(tokens.back());
      if (!anchor) {
        fail("missing '@<index>' anchor");
        continue;
      }
      edit.anchor = anchor;
      tokens.pop_back();
    }

    const std::string& keyword = tokens[0];
    if (keyword == "Delete" || keyword == "Insert") {
      if (tokens.size() < 2) {
        fail(keyword + " without text");
        continue;
      }
      Tokens body(tokens.begin() + 1, tokens.end());
      if (keyword == "Delete") {
        edit.op = EditOp::Delete;
        edit.src_text = std::move(body);
      } else {
        edit.op = EditOp::Insert;
        edit.tgt_text = std::move(body);
      }
    } else if (keyword == "Replace") {
      std::size_t sep = 0;
      for (std::size_t k = 2; k + 1 < tokens.size(); ++k) {
        if (tokens[k] == kWith) {
          sep = k;
          break;
        }
      }
      if (sep == 0) {
        fail("expected 'Replace <text> with <text>'");
        continue;
      }
      edit.op = EditOp::Replace;
      edit.src_text.assign(tokens.begin() + 1, tokens.begin() + static_cast<std::ptrdiff_t>(sep));
      edit.tgt_text.assign(tokens.begin() + static_cast<std::ptrdiff_t>(sep) + 1, tokens.end());
      if (contains_with(edit.src_text) || contains_with(edit.tgt_text)) {
        if (options.strict) {
          fail("'with' occurs inside replaced or replacement text");
          continue;
        }
        result.with_ambiguity = true;
      }
    } else {
      fail("unknown operation '" + keyword + "'");
      continue;
    }
    result.edits.push_back(std::move(edit));
  }
  return result;
}

ApplyOutcome apply_script(const Tokens& src, const std::vector<TextualEdit>& edits,
                          const ApplyOptions& options) {
  ApplyOutcome out;
  out.result.reserve(src.size() + 8);
  std::size_t cursor = 0;

  auto copy_to = [&](std::size_t pos) {
    out.result.insert(out.result.end(), src.begin() + static_cast<std::ptrdiff_t>(cursor),
                      src.begin() + static_cast<std::ptrdiff_t>(pos));
    cursor = pos;
  };

  for (std::size_t k = 0; k < edits.size(); ++k) {
    const TextualEdit& e = edits[k];
    auto skip = [&](std::string reason) { out.skipped.push_back({k, e, std::move(reason)}); };

    const bool well_formed = (e.op == EditOp::Insert && !e.tgt_text.empty()) ||
                             (e.op == EditOp::Delete && !e.src_text.empty()) ||
                             (e.op == EditOp::Replace && !e.src_text.empty() && !e.tgt_text.empty());
    if (!well_formed) {
      skip("malformed edit");
      continue;
    }

    if (e.op == EditOp::Insert) {
      std::size_t pos;
      if (e.anchor) {
        if (*e.anchor < cursor || *e.anchor > src.size()) {
          skip("anchor " + std::to_string(*e.anchor) + " is behind the cursor or past the end");
          continue;
        }
        pos = *e.anchor;
      } else {
        if (options.unanchored_insert == UnanchoredInsert::Skip) {
          skip("insert without anchor");
          continue;
        }
        pos = std::min(cursor + 1, src.size());
      }
      copy_to(pos);
      out.result.insert(out.result.end(), e.tgt_text.begin(), e.tgt_text.end());
      ++out.applied;
      continue;
    }

    std::size_t pos;
    if (e.anchor) {
      pos = *e.anchor;
      if (pos < cursor || pos + e.src_text.size() > src.size() ||
          !std::equal(e.src_text.begin(), e.src_text.end(), src.begin() + static_cast<std::ptrdiff_t>(pos))) {
        skip("source text not found at anchor " + std::to_string(pos));
        continue;
      }
    } else {
      pos = find_run(src, e.src_text, cursor);
      if (pos == std::string::npos) {
        skip("source text not found after cursor");
        continue;
      }
    }
    copy_to(pos);
    out.result.insert(out.result.end(), e.tgt_text.begin(), e.tgt_text.end());
    cursor = pos + e.src_text.size();
    ++out.applied;
  }
  copy_to(src.size());
  return out;
}

}  // namespace gectk
