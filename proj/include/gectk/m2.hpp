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
#include <vector>

#include "gectk/align.hpp"

namespace gectk {

/// One `A` line of an M2 file.
struct GoldEdit {
  long start = -1;
  long end = -1;
  std::string type;
  Tokens correction;  // empty for deletions and noop lines
  std::string required = "REQUIRED";
  std::string comment = "-NONE-";
  int annotator = 0;

  bool is_noop() const { return start == -1 && end == -1; }
  friend bool operator==(const GoldEdit&, const GoldEdit&) = default;
};

struct M2Record {
  Tokens src_tokens;
  std::vector<GoldEdit> edits;  // file order

  /// Sorted annotator ids. A record without `A` lines has the single
  /// implicit annotator 0 with no edits.
  std::vector<int> annotator_ids() const;
  bool has_annotator(int id) const;
  /// Non-noop edits of one annotator as span edits over source and the
  /// annotator's corrected sentence.
  std::vector<Edit> annotator_edits(int id) const;
  Tokens corrected(int id) const;
  /// Gold type string for each edit returned by annotator_edits.
  std::vector<std::string> annotator_types(int id) const;
};

/// Streaming M2 parser: `S <tokens>` starts a record, `A` lines follow,
/// records are separated by blank lines. Throws DataError with the line.
class M2Reader {
 public:
  explicit M2Reader(std::istream& in, std::string name = {});
  std::optional<M2Record> next();

 private:
  GoldEdit parse_edit(const std::string& line, std::size_t n_src) const;
  void check_order(const M2Record& rec) const;

  std::istream& in_;
  std::string name_;
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
};

std::vector<M2Record> read_m2(std::istream& in, const std::string& name = {});
std::vector<M2Record> read_m2_file(const std::string& path);

/// Normalized M2 text: every record followed by a blank line, deletions
/// written as -NONE-.
std::string write_m2(const std::vector<M2Record>& records);
std::string write_m2_record(const M2Record& record);

/// Builds a single-annotator record from a source and its edits.
M2Record make_m2_record(const Tokens& src, const std::vector<Edit>& edits, int annotator = 0,
                        const std::vector<std::string>& types = {});

}  // namespace gectk
