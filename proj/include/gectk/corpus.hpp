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
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gectk/align.hpp"

namespace gectk {

enum class CorpusFormat { Tsv, Jsonl };

CorpusFormat parse_corpus_format(std::string_view name);

/// Streaming reader for parallel corpora.
///
/// TSV lines are `src<TAB>tgt`. JSONL lines carry `id`, `doc_id`,
/// `doc_index`, `src` and `tgt`; only `src` and `tgt` are required.
/// Missing ids default to the 1-based line number, missing doc_index to 0.
/// Blank lines are skipped. Lines that parse as a JSON object with a
/// `header` key are treated as run headers and skipped as well.
class CorpusReader {
 public:
  CorpusReader(std::istream& in, CorpusFormat format, std::string name = {});

  /// Returns the next pair, or nullopt at end of input. Throws DataError.
  std::optional<TokenizedPair> next();

  std::size_t line() const { return line_; }
  const std::string& name() const { return name_; }

 private:
  TokenizedPair parse_tsv(const std::string& text) const;
  TokenizedPair parse_jsonl(const std::string& text) const;

  std::istream& in_;
  CorpusFormat format_;
  std::string name_;
  std::size_t line_ = 0;
};

std::vector<TokenizedPair> read_corpus(std::istream& in, CorpusFormat format,
                                       const std::string& name = {});
std::vector<TokenizedPair> read_corpus_file(const std::string& path, CorpusFormat format);

}  // namespace gectk
