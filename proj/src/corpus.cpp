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

#include "gectk/corpus.hpp"

#include <fstream>

#include "gectk/error.hpp"
#include "json.hpp"

namespace gectk {

namespace {

using nlohmann::json;

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n\v\f") == std::string::npos;
}

std::string id_field(const json& obj, const char* key, const std::string& fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer() || it->is_number_unsigned()) return it->dump();
  throw std::invalid_argument(std::string("field '") + key + "' must be a string or integer");
}

}  // namespace

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "tsv") return CorpusFormat::Tsv;
  if (name == "jsonl") return CorpusFormat::Jsonl;
  throw std::invalid_argument("unknown corpus format '" + std::string(name) + "'");
}

CorpusReader::CorpusReader(std::istream& in, CorpusFormat format, std::string name)
    : in_(in), format_(format), name_(std::move(name)) {}

std::optional<TokenizedPair> CorpusReader::next() {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (blank(text)) continue;
    if (text.front() == '{' && text.find("\"header\"") != std::string::npos) {
      const json j = json::parse(text, nullptr, false);
      if (j.is_object() && j.contains("header")) continue;
    }
    TokenizedPair p = format_ == CorpusFormat::Tsv ? parse_tsv(text) : parse_jsonl(text);
    if (p.src_tokens.empty()) throw DataError(name_, line_, "empty source sentence");
    if (p.tgt_tokens.empty()) throw DataError(name_, line_, "empty target sentence");
    return p;
  }
  return std::nullopt;
}

TokenizedPair CorpusReader::parse_tsv(const std::string& text) const {
  const auto tab = text.find('\t');
  if (tab == std::string::npos) throw DataError(name_, line_, "expected 'src<TAB>tgt'");
  if (text.find('\t', tab + 1) != std::string::npos) {
    throw DataError(name_, line_, "more than two tab-separated columns");
  }
  const std::string id = std::to_string(line_);
  return make_tokenized_pair(id, id, 0, std::string_view(text).substr(0, tab),
                             std::string_view(text).substr(tab + 1));
}

TokenizedPair CorpusReader::parse_jsonl(const std::string& text) const {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(name_, line_, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError(name_, line_, "expected a JSON object");
  try {
    const std::string fallback = std::to_string(line_);
    std::size_t doc_index = 0;
    if (auto it = j.find("doc_index"); it != j.end() && !it->is_null()) {
      if (!it->is_number_integer() && !it->is_number_unsigned()) {
        throw std::invalid_argument("field 'doc_index' must be an integer");
      }
      const auto v = it->get<long long>();
      if (v < 0) throw std::invalid_argument("field 'doc_index' must be non-negative");
      doc_index = static_cast<std::size_t>(v);
    }
    if (!j.contains("src") || !j["src"].is_string()) throw std::invalid_argument("missing string field 'src'");
    if (!j.contains("tgt") || !j["tgt"].is_string()) throw std::invalid_argument("missing string field 'tgt'");
    return make_tokenized_pair(id_field(j, "id", fallback), id_field(j, "doc_id", fallback), doc_index,
                               j["src"].get<std::string>(), j["tgt"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw DataError(name_, line_, e.what());
  }
}

std::vector<TokenizedPair> read_corpus(std::istream& in, CorpusFormat format, const std::string& name) {
  CorpusReader reader(in, format, name);
  std::vector<TokenizedPair> out;
  while (auto p = reader.next()) out.push_back(std::move(*p));
  return out;
}

std::vector<TokenizedPair> read_corpus_file(const std::string& path, CorpusFormat format) {
  std::ifstream in(path);
  if (!in) throw DataError(path, 0, "cannot open file");
  return read_corpus(in, format, path);
}

}  // namespace gectk
