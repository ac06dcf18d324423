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

#include "gectk/m2.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "gectk/error.hpp"

namespace gectk {

namespace {

constexpr std::string_view kSep = "|||";
constexpr std::string_view kNone = "-NONE-";

std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(kSep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + kSep.size();
  }
}

template <typename Int>
bool to_int(std::string_view s, Int& value) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::vector<int> M2Record::annotator_ids() const {
  std::set<int> ids;
  for (const auto& e : edits) ids.insert(e.annotator);
  if (ids.empty()) return {0};
  return {ids.begin(), ids.end()};
}

bool M2Record::has_annotator(int id) const {
  if (edits.empty()) return id == 0;
  return std::any_of(edits.begin(), edits.end(), [id](const GoldEdit& e) { return e.annotator == id; });
}

std::vector<Edit> M2Record::annotator_edits(int id) const {
  std::vector<Edit> out;
  long delta = 0;
  for (const auto& g : edits) {
    if (g.annotator != id || g.is_noop()) continue;
    Edit e;
    e.src = {static_cast<std::size_t>(g.start), static_cast<std::size_t>(g.end)};
    const auto tgt_begin = static_cast<std::size_t>(g.start + delta);
    e.tgt = {tgt_begin, tgt_begin + g.correction.size()};
    e.src_text.assign(src_tokens.begin() + g.start, src_tokens.begin() + g.end);
    e.tgt_text = g.correction;
    e.op = e.src.empty() ? EditOp::Insert : (e.tgt.empty() ? EditOp::Delete : EditOp::Replace);
    delta += static_cast<long>(g.correction.size()) - (g.end - g.start);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<std::string> M2Record::annotator_types(int id) const {
  std::vector<std::string> out;
  for (const auto& g : edits) {
    if (g.annotator == id && !g.is_noop()) out.push_back(g.type);
  }
  return out;
}

Tokens M2Record::corrected(int id) const {
  Tokens out;
  std::size_t pos = 0;
  for (const auto& g : edits) {
    if (g.annotator != id || g.is_noop()) continue;
    out.insert(out.end(), src_tokens.begin() + static_cast<std::ptrdiff_t>(pos), src_tokens.begin() + g.start);
    out.insert(out.end(), g.correction.begin(), g.correction.end());
    pos = static_cast<std::size_t>(g.end);
  }
  out.insert(out.end(), src_tokens.begin() + static_cast<std::ptrdiff_t>(pos), src_tokens.end());
  return out;
}

M2Reader::M2Reader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

GoldEdit M2Reader::parse_edit(const std::string& line, std::size_t n_src) const {
  const auto fields = split_fields(std::string_view(line).substr(2));
  if (fields.size() != 6) {
    throw DataError(name_, line_, "edit line must have 6 '|||'-separated fields, got " + std::to_string(fields.size()));
  }
  GoldEdit g;
  const auto span = tokenize(fields[0]);
  if (span.size() != 2 || !to_int(std::string_view(span[0]), g.start) || !to_int(std::string_view(span[1]), g.end)) {
    throw DataError(name_, line_, "edit span must be two integers");
  }
  if (!g.is_noop()) {
    if (g.start < 0 || g.end < g.start || static_cast<std::size_t>(g.end) > n_src) {
      throw DataError(name_, line_, "edit span out of range");
    }
  }
  g.type = std::string(fields[1]);
  const auto corr = tokenize(fields[2]);
  if (!(corr.size() == 1 && corr[0] == kNone)) g.correction = corr;
  g.required = std::string(fields[3]);
  g.comment = std::string(fields[4]);
  if (!to_int(fields[5], g.annotator)) throw DataError(name_, line_, "annotator id must be an integer");
  return g;
}

void M2Reader::check_order(const M2Record& rec) const {
  std::vector<std::pair<int, const GoldEdit*>> last;
  for (const auto& g : rec.edits) {
    if (g.is_noop()) continue;
    auto it = std::find_if(last.begin(), last.end(), [&](const auto& p) { return p.first == g.annotator; });
    if (it != last.end()) {
      const GoldEdit& prev = *it->second;
      const bool ordered = g.start >= prev.end && (g.start > prev.start || prev.start == prev.end);
      if (!ordered) {
        throw DataError(name_, record_line_,
                        "edits of annotator " + std::to_string(g.annotator) + " overlap or are unsorted");
      }
      it->second = &g;
    } else {
      last.emplace_back(g.annotator, &g);
    }
  }
}

std::optional<M2Record> M2Reader::next() {
  std::optional<M2Record> rec;
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (tokenize(line).empty()) {
      if (rec) break;
      continue;
    }
    if (line.starts_with("S ") || line == "S") {
      if (rec) throw DataError(name_, line_, "'S' line inside a record; records must be separated by a blank line");
      rec.emplace();
      record_line_ = line_;
      rec->src_tokens = tokenize(std::string_view(line).substr(1));
    } else if (line.starts_with("A ")) {
      if (!rec) throw DataError(name_, line_, "'A' line before any 'S' line");
      rec->edits.push_back(parse_edit(line, rec->src_tokens.size()));
    } else {
      throw DataError(name_, line_, "expected a line starting with 'S ' or 'A '");
    }
  }
  if (rec) check_order(*rec);
  return rec;
}

std::vector<M2Record> read_m2(std::istream& in, const std::string& name) {
  M2Reader reader(in, name);
  std::vector<M2Record> out;
  while (auto r = reader.next()) out.push_back(std::move(*r));
  return out;
}

std::vector<M2Record> read_m2_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path, 0, "cannot open file");
  return read_m2(in, path);
}

std::string write_m2_record(const M2Record& record) {
  std::string out = "S " + join(record.src_tokens) + "\n";
  for (const auto& g : record.edits) {
    out += "A " + std::to_string(g.start) + " " + std::to_string(g.end);
    out += kSep;
    out += g.type;
    out += kSep;
    out += g.correction.empty() ? std::string(kNone) : join(g.correction);
    out += kSep;
    out += g.required;
    out += kSep;
    out += g.comment;
    out += kSep;
    out += std::to_string(g.annotator);
    out += '\n';
  }
  out += '\n';
  return out;
}

std::string write_m2(const std::vector<M2Record>& records) {
  std::string out;
  for (const auto& r : records) out += write_m2_record(r);
  return out;
}

M2Record make_m2_record(const Tokens& src, const std::vector<Edit>& edits, int annotator,
                        const std::vector<std::string>& types) {
  M2Record rec;
  rec.src_tokens = src;
  if (edits.empty()) {
    GoldEdit noop;
    noop.type = "noop";
    noop.annotator = annotator;
    rec.edits.push_back(noop);
    return rec;
  }
  for (std::size_t i = 0; i < edits.size(); ++i) {
    GoldEdit g;
    g.start = static_cast<long>(edits[i].src.begin);
    g.end = static_cast<long>(edits[i].src.end);
    g.type = i < types.size() ? types[i] : std::string("UNK");
    g.correction = edits[i].tgt_text;
    g.annotator = annotator;
    rec.edits.push_back(std::move(g));
  }
  return rec;
}

}  // namespace gectk
