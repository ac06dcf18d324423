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

#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "gectk/editscript.hpp"
#include "oracle.hpp"

using namespace gectk;

namespace {

Tokens T(std::string_view s) { return tokenize(s); }

std::vector<TextualEdit> parse_ok(std::string_view text, ScriptMode mode) {
  auto r = parse_script(text, mode);
  REQUIRE_MESSAGE(r.ok(), r.errors.front().reason);
  return r.edits;
}

}  // namespace

TEST_SUITE("editscript") {
  TEST_CASE("serialize in plain mode") {
    CHECK(serialize_script(std::vector<Edit>{}, ScriptMode::Plain) == "No correction");
    CHECK(serialize_script(std::vector<Edit>{}, ScriptMode::Anchored) == "No correction");
    const auto e = align_tokens(T("I come in Paris"), T("I come from Paris"));
    CHECK(serialize_script(e, ScriptMode::Plain) == "Replace in with from");
    CHECK(serialize_script(align_tokens(T("a b c"), T("a x c d")), ScriptMode::Plain) == "Replace b with x\nInsert d");
  }

  TEST_CASE("serialize in anchored mode") {
    const auto src = T("we saw it in a book by the the author");
    const auto tgt = T("we saw it in a book by the author");
    const auto e = align_tokens(src, tgt);
    REQUIRE(e.size() == 1);
    CHECK(e[0].src.begin == 7);
    CHECK(serialize_script(e, ScriptMode::Anchored) == "Delete the @7");
  }

  TEST_CASE("parse basics") {
    CHECK(parse_ok("No correction", ScriptMode::Plain).empty());
    CHECK(parse_ok("No correction\n", ScriptMode::Plain).empty());
    auto e = parse_ok("Replace know with find out", ScriptMode::Plain);
    REQUIRE(e.size() == 1);
    CHECK(e[0].op == EditOp::Replace);
    CHECK(e[0].src_text == T("know"));
    CHECK(e[0].tgt_text == T("find out"));
    CHECK_FALSE(e[0].anchor);
    e = parse_ok("Delete will", ScriptMode::Plain);
    REQUIRE(e.size() == 1);
    CHECK(e[0].op == EditOp::Delete);
    CHECK(e[0].src_text == T("will"));
    e = parse_ok("Insert the @4", ScriptMode::Anchored);
    REQUIRE(e.size() == 1);
    CHECK(e[0].anchor == 4u);
  }

  TEST_CASE("parse errors carry line numbers") {
    auto r = parse_script("Delete a\nFrobnicate b\nReplace x y", ScriptMode::Plain);
    REQUIRE(r.errors.size() == 2);
    CHECK(r.errors[0].line == 2);
    CHECK(r.errors[1].line == 3);
    CHECK(r.edits.size() == 1);
    CHECK_FALSE(parse_script("", ScriptMode::Plain).ok());
    CHECK_FALSE(parse_script("Delete", ScriptMode::Plain).ok());
    CHECK_FALSE(parse_script("delete a", ScriptMode::Plain).ok());          // keywords are case-sensitive
    CHECK_FALSE(parse_script("Delete a", ScriptMode::Anchored).ok());       // anchor missing
    CHECK_FALSE(parse_script("Delete a\nNo correction", ScriptMode::Plain).ok());
    CHECK_FALSE(parse_script("Replace a with", ScriptMode::Plain).ok());
  }

  TEST_CASE("with inside replaced text") {
    auto r = parse_script("Replace agree to with agree with", ScriptMode::Plain);
    REQUIRE(r.ok());
    CHECK(r.with_ambiguity);
    CHECK(r.edits[0].src_text == T("agree to"));
    CHECK(r.edits[0].tgt_text == T("agree with"));
    CHECK_FALSE(parse_script("Replace agree to with agree with", ScriptMode::Plain, {true}).ok());
    r = parse_script("Replace with with by", ScriptMode::Plain);
    REQUIRE(r.ok());
    CHECK(r.edits[0].src_text == T("with"));
    CHECK(r.edits[0].tgt_text == T("by"));
  }

  TEST_CASE("apply: empty script") {
    const auto out = apply_script(T("a b"), {});
    CHECK(out.result == T("a b"));
    CHECK(out.applied == 0);
    CHECK(out.skipped.empty());
  }

  TEST_CASE("apply: plain mode uses the leftmost match after the cursor") {
    const auto src = T(fixtures::kBombSource);
    const auto out = apply_script(src, parse_ok("Delete will", ScriptMode::Plain));
    CHECK(out.applied == 1);
    auto expect = src;
    expect.erase(expect.begin() + 5);
    CHECK(out.result == expect);
  }

  TEST_CASE("apply: unanchored insert goes after the token at the cursor") {
    auto out = apply_script(T("a b c"), parse_ok("Replace b with x\nInsert d", ScriptMode::Plain));
    CHECK(join(out.result) == "a x c d");
    ApplyOptions skip;
    skip.unanchored_insert = UnanchoredInsert::Skip;
    out = apply_script(T("a b c"), parse_ok("Replace b with x\nInsert d", ScriptMode::Plain), skip);
    CHECK(join(out.result) == "a x c");
    REQUIRE(out.skipped.size() == 1);
    CHECK(out.skipped[0].index == 1);
  }

  TEST_CASE("apply: annotator script for the celebrity sentence") {
    const auto src = T(fixtures::kCelebritySource);
    const auto out = apply_script(src, parse_ok(fixtures::kCelebrityAnchoredScript, ScriptMode::Anchored));
    CHECK(out.skipped.empty());
    CHECK(out.applied == 7);
    CHECK(join(out.result) == fixtures::kCelebrityTarget);
  }

  TEST_CASE("apply: anchored mismatches are skipped and reported") {
    const auto out = apply_script(T("a b c"), parse_ok("Delete c @1\nDelete a @0\nReplace a with y @0", ScriptMode::Anchored));
    CHECK(out.applied == 1);
    REQUIRE(out.skipped.size() == 2);
    CHECK(out.skipped[0].index == 0);
    CHECK(out.skipped[1].index == 2);
    CHECK(join(out.result) == "b c");
  }

  TEST_CASE("apply: malformed and behind-cursor edits never throw") {
    std::vector<TextualEdit> edits = {{EditOp::Replace, {}, T("x"), std::nullopt},
                                      {EditOp::Delete, T("b"), {}, std::nullopt},
                                      {EditOp::Delete, T("a"), {}, std::nullopt}};
    const auto out = apply_script(T("a b"), edits);
    CHECK(out.applied == 1);
    CHECK(out.skipped.size() == 2);
    CHECK(out.result == T("a"));
  }

  TEST_CASE("property: anchored round trip is exact") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 3000; ++k) {
      const auto src = oracle::random_tokens(rng, 12, 6);
      const auto tgt = oracle::corrupt(rng, src, 6);
      const auto edits = align_tokens(src, tgt);
      const auto text = serialize_script(edits, ScriptMode::Anchored);
      const auto parsed = parse_ok(text, ScriptMode::Anchored);
      REQUIRE(parsed == to_textual(edits, ScriptMode::Anchored));
      const auto out = apply_script(src, parsed);
      REQUIRE(out.skipped.empty());
      REQUIRE(out.result == tgt);
    }
  }

  TEST_CASE("property: plain round trip on unambiguous pairs") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 3000; ++k) {
      const auto [src, tgt] = oracle::unambiguous_pair(rng, 12);
      const auto edits = align_tokens(src, tgt);
      const auto parsed = parse_ok(serialize_script(edits, ScriptMode::Plain), ScriptMode::Plain);
      REQUIRE(parsed == to_textual(edits, ScriptMode::Plain));
      const auto out = apply_script(src, parsed);
      REQUIRE(out.skipped.empty());
      REQUIRE(out.result == tgt);
    }
  }

  TEST_CASE("property: applied length arithmetic") {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 2000; ++k) {
      const auto src = oracle::random_tokens(rng, 10, 4);
      // Scripts from an unrelated pair: many edits will not fit.
      const auto a = oracle::random_tokens(rng, 10, 4);
      const auto b = oracle::random_tokens(rng, 10, 4);
      const auto mode = (k % 2) ? ScriptMode::Plain : ScriptMode::Anchored;
      const auto edits = to_textual(align_tokens(a, b), mode);
      const auto out = apply_script(src, edits);
      REQUIRE(out.applied + out.skipped.size() == edits.size());
      std::ptrdiff_t delta = 0;
      std::size_t s = 0;
      for (std::size_t i = 0; i < edits.size(); ++i) {
        if (s < out.skipped.size() && out.skipped[s].index == i) {
          ++s;
          continue;
        }
        delta += static_cast<std::ptrdiff_t>(edits[i].tgt_text.size()) -
                 static_cast<std::ptrdiff_t>(edits[i].src_text.size());
      }
      REQUIRE(static_cast<std::ptrdiff_t>(out.result.size()) == static_cast<std::ptrdiff_t>(src.size()) + delta);
    }
  }
}
