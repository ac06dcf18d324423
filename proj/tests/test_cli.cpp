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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = gectk::cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("gectk_cli_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string write(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

const std::string kData = GECTK_TEST_DATA;

std::string corpus_tsv(int n) {
  std::mt19937_64 rng(7);
  const char* words[] = {"the", "a", "cat", "sat", "on", "mat", "dog", "ran", ",", "."};
  std::string out;
  for (int i = 0; i < n; ++i) {
    std::string src, tgt;
    const int len = 3 + static_cast<int>(rng() % 8);
    for (int k = 0; k < len; ++k) {
      const std::string w = words[rng() % 10];
      src += (k ? " " : "") + w;
      if (rng() % 4 != 0) tgt += (tgt.empty() ? "" : " ") + w;
    }
    if (tgt.empty()) tgt = "x";
    out += src + "\t" + tgt + "\n";
  }
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit 1, help exits 0") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"extract", "--mode", "fancy", "-"}).code == 1);
    CHECK(run({"--jobs", "0", "extract"}).code == 1);
    const auto v = run({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find("1.0.0") != std::string::npos);
  }

  TEST_CASE("missing input files exit 2 with the file name") {
    const auto r = run({"extract", "/nonexistent/in.tsv"});
    CHECK(r.code == 2);
    CHECK(r.err.find("/nonexistent/in.tsv") != std::string::npos);
    CHECK(r.out.empty());
  }

  TEST_CASE("malformed corpus reports file and line") {
    TempDir d;
    const auto in = d.write("bad.tsv", "a\tb\nno tab\n");
    const auto r = run({"extract", in});
    CHECK(r.code == 2);
    CHECK(r.err.find(in + ":2:") != std::string::npos);
  }

  TEST_CASE("extract writes a header and plain scripts") {
    TempDir d;
    const auto in = d.write("a.tsv", std::string(fixtures::kAlbinismSource) + "\t" +
                                          std::string(fixtures::kAlbinismTarget) + "\n");
    const auto r = run({"extract", in});
    REQUIRE(r.code == 0);
    const auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 2);
    const auto h = json::parse(ls[0]);
    CHECK(h["header"]["tool"] == "gectk");
    CHECK(h["header"]["command"] == "extract");
    CHECK(h["header"]["config_hash"].get<std::string>().size() == 16);
    const auto j = json::parse(ls[1]);
    CHECK(j["script"] == "Replace The people with People\nReplace it with this");
    CHECK(j["edits"].size() == 2);
    CHECK(j["edits"][0]["src_span"] == json::array({0, 2}));
    const auto anchored = run({"extract", "--mode", "anchored", in});
    CHECK(json::parse(lines_of(anchored.out)[1])["script"] ==
          "Replace The people with People @0\nReplace it with this @8");
  }

  TEST_CASE("config hash tracks options, not --jobs or --output") {
    TempDir d;
    const auto in = d.write("a.tsv", "a b\ta c\n");
    auto hash = [](const std::string& out) {
      return json::parse(lines_of(out)[0])["header"]["config_hash"].get<std::string>();
    };
    const auto base = hash(run({"extract", in}).out);
    CHECK(hash(run({"--jobs", "3", "extract", in}).out) == base);
    CHECK(hash(run({"extract", "--mode", "anchored", in}).out) != base);
  }

  TEST_CASE("output is identical across --jobs") {
    TempDir d;
    const auto in = d.write("c.tsv", corpus_tsv(5000));
    for (const char* cmd : {"extract", "gen-tasks"}) {
      const auto one = run({cmd, in});
      const auto four = run({"--jobs", "4", cmd, in});
      REQUIRE(one.code == 0);
      CHECK(one.out == four.out);
    }
    const auto gen = run({"gen-tasks", in});
    CHECK(lines_of(gen.out).size() == 1 + 4 * 5000);
  }

  TEST_CASE("--output writes to a file") {
    TempDir d;
    const auto in = d.write("a.tsv", "a b\ta c\n");
    const auto out = d.file("o.jsonl");
    const auto r = run({"-o", out, "gen-tasks", "--tasks", "correct", in});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    const auto ls = lines_of(slurp(out));
    REQUIRE(ls.size() == 2);
    CHECK(json::parse(ls[1])["input"] == "<correct> a b");
  }

  TEST_CASE("gen-tasks rejects bad task names as a usage error") {
    TempDir d;
    const auto in = d.write("a.tsv", "a b\ta c\n");
    CHECK(run({"gen-tasks", "--tasks", "fix", in}).code == 1);
  }

  TEST_CASE("gen-tasks on JSONL input") {
    TempDir d;
    const auto in = d.write("a.jsonl", "{\"id\":\"x\",\"doc_id\":\"D\",\"doc_index\":4,\"src\":\"a b\",\"tgt\":\"a c\"}\n");
    const auto r = run({"--format", "jsonl", "gen-tasks", "--tasks", "edit", in});
    REQUIRE(r.code == 0);
    const auto j = json::parse(lines_of(r.out)[1]);
    CHECK(j["task"] == "edit");
    CHECK(j["input"] == "<edit> a b");
    CHECK(j["target"] == "Replace b with c");
    CHECK(j["doc_index"] == 4);
  }

  TEST_CASE("extract then apply reproduces the targets") {
    TempDir d;
    const std::string corpus = corpus_tsv(300);
    const auto in = d.write("c.tsv", corpus);
    std::string src, tgt;
    for (const auto& l : lines_of(corpus)) {
      const auto tab = l.find('\t');
      src += l.substr(0, tab) + "\n";
      tgt += l.substr(tab + 1) + "\n";
    }
    const auto src_file = d.write("src.txt", src);
    const auto ex = run({"extract", "--mode", "anchored", in});
    REQUIRE(ex.code == 0);
    const auto scripts = d.write("s.jsonl", ex.out);
    const auto ap = run({"apply", "--mode", "anchored", "--src", src_file, "--scripts", scripts});
    REQUIRE(ap.code == 0);
    CHECK(ap.out == tgt);
  }

  TEST_CASE("apply reports skipped edits") {
    TempDir d;
    const auto src = d.write("src.txt", "a b c\n");
    const auto scripts = d.write("s.jsonl", "\"Delete zz\\nReplace b with B\"\n");
    const auto report = d.file("skip.jsonl");
    const auto r = run({"apply", "--src", src, "--scripts", scripts, "--skip-report", report});
    REQUIRE(r.code == 0);
    CHECK(r.out == "a B c\n");
    const auto ls = lines_of(slurp(report));
    REQUIRE(ls.size() == 1);
    const auto j = json::parse(ls[0]);
    CHECK(j["line"] == 1);
    CHECK(j["edit_index"] == 0);
    CHECK(j["edit"] == "Delete zz");
  }

  TEST_CASE("apply data errors") {
    TempDir d;
    const auto src = d.write("src.txt", "a b c\nd\n");
    const auto one = d.write("one.jsonl", "\"No correction\"\n");
    CHECK(run({"apply", "--src", src, "--scripts", one}).code == 2);
    const auto bad = d.write("bad.jsonl", "\"No correction\"\n\"Frobnicate x\"\n");
    const auto r = run({"apply", "--src", src, "--scripts", bad});
    CHECK(r.code == 2);
    CHECK(r.err.find(bad + ":2:") != std::string::npos);
  }

  TEST_CASE("score on the hand-counted fixture") {
    const auto r = run({"score", "--hyp", kData + "/hand_counted.hyp", "--gold", kData + "/hand_counted.m2"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["tp"] == 2);
    CHECK(j["fp"] == 1);
    CHECK(j["fn"] == 1);
    CHECK(j["precision"] == doctest::Approx(66.67));
    CHECK(j["recall"] == doctest::Approx(66.67));
    CHECK(j["f05"] == doctest::Approx(66.67));
    CHECK(j["header"]["command"] == "score");
  }

  TEST_CASE("score modes on two annotators") {
    const auto best = json::parse(
        run({"score", "--hyp", kData + "/two_annotators.hyp", "--gold", kData + "/two_annotators.m2"}).out);
    CHECK(best["f05"] == doctest::Approx(78.95));
    CHECK(best["precision"] == doctest::Approx(75.0));
    const auto avg = json::parse(run({"score", "--mode", "average", "--hyp", kData + "/two_annotators.hyp", "--gold",
                                      kData + "/two_annotators.m2"})
                                     .out);
    CHECK(avg["f05"] == doctest::Approx(65.79));
    CHECK(avg["per_reference"].size() == 2);
  }

  TEST_CASE("score line count mismatch is a data error") {
    TempDir d;
    const auto hyp = d.write("h.txt", "a\n");
    CHECK(run({"score", "--hyp", hyp, "--gold", kData + "/two_annotators.m2"}).code == 2);
  }

  TEST_CASE("schedule from policy and descriptor files") {
    TempDir d;
    d.write("a.tsv", "a b\ta c\nd e\td e\nf\tg\n");
    d.write("b.tsv", "h\tH\n");
    d.write("policy.json", R"({"batch_size": 2, "within_dataset": "preserve", "across_datasets": "strict_order"})");
    d.write("data.json", R"({"datasets": [
      {"name": "A", "path": "a.tsv", "format": "tsv", "stages": ["I", "II"], "rank": 0},
      {"name": "B", "path": "b.tsv", "format": "tsv", "stages": ["II"], "rank": 1}]})");
    const auto r = run({"schedule", "--policy", d.file("policy.json"), "--datasets", d.file("data.json")});
    REQUIRE(r.code == 0);
    const auto ls = lines_of(r.out);
    REQUIRE(ls.size() > 1);
    const auto h = json::parse(ls[0]);
    CHECK(h["header"]["stages"] == json::array({"I", "II"}));
    const auto last = json::parse(ls.back());
    CHECK(last["stage"] == "II");
    CHECK(last["dataset"] == "B");
    CHECK(run({"schedule", "--policy", d.file("policy.json"), "--datasets", d.file("data.json")}).out == r.out);

    d.write("missing.json", R"({"datasets": [{"name": "A", "path": "nope.tsv", "stages": ["I"], "rank": 0}]})");
    const auto m = run({"schedule", "--policy", d.file("policy.json"), "--datasets", d.file("missing.json")});
    CHECK(m.code == 2);
    CHECK(m.err.find("nope.tsv") != std::string::npos);
  }

  TEST_CASE("schedule seed override changes a shuffled manifest") {
    TempDir d;
    std::string rows;
    for (int i = 0; i < 40; ++i) rows += "s" + std::to_string(i) + "\tt" + std::to_string(i) + "\n";
    d.write("a.tsv", rows);
    d.write("p.json", R"({"within_dataset": {"mode": "shuffle", "seed": 1},
      "datasets": [{"name": "A", "path": "a.tsv", "format": "tsv", "stages": ["I"], "rank": 0}]})");
    const auto p = d.file("p.json");
    const auto base = run({"schedule", "--policy", p});
    REQUIRE(base.code == 0);
    CHECK(run({"--seed", "1", "schedule", "--override-seed", "--policy", p}).out == base.out);
    CHECK(run({"--seed", "2", "schedule", "--override-seed", "--policy", p}).out != base.out);
  }

  TEST_CASE("stats with comparison and plot data") {
    TempDir d;
    const auto a = d.write("a.tsv", "a , b\ta b\nthe cat\tThe cat\n");
    const auto plot = d.file("plot.tsv");
    const auto r = run({"stats", a, "--compare", kData + "/roundtrip.m2", "--compare-m2", "--plot-data", plot});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["total"] == 2);
    CHECK(j["histogram"]["PUNCT"]["count"] == 1);
    CHECK(j["histogram"]["ORTH"]["count"] == 1);
    CHECK(j.contains("distance"));
    const auto ls = lines_of(slurp(plot));
    CHECK(ls.size() == 8);
    CHECK(ls[0] == "type\tcount\tproportion\tcompare_count\tcompare_proportion");
  }

  TEST_CASE("consistency summary") {
    TempDir d;
    const auto src = d.write("src.txt", "a b c\nx y\n");
    const auto cor = d.write("cor.txt", "a B c\nx y z\n");
    const auto exp = d.write("exp.jsonl", "\"Replace b with B\"\n\"No correction\"\n");
    const auto rea = d.write("rea.txt", "a B c\nx y\n");
    const auto r = run({"consistency", "--src", src, "--corrected", cor, "--explained", exp, "--reapplied", rea,
                        "--records"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["sentences"] == 2);
    CHECK(j["edits_exact_match"] == doctest::Approx(50.0));
    CHECK(j["chain_exact_match"] == doctest::Approx(50.0));
    CHECK(j["records"].size() == 2);
  }

  TEST_CASE("decode copies the source with a strong boost") {
    TempDir d;
    const auto table = d.write("t.json", R"({"<s>": {"a": 0.5, "b": 0.5}, "a": {"b": 0.5, "</s>": 0.5},
      "b": {"a": 0.5, "</s>": 0.5}})");
    const auto in = d.write("in.txt", "b a b\na\n");
    const auto r = run({"decode", "--table", table, "--boost", "1000", "--max-len", "6", "--nbest", "2", in});
    REQUIRE(r.code == 0);
    const auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 5);
    const auto first = json::parse(ls[1]);
    CHECK(first["hypothesis"] == "b a b");
    CHECK(first["rank"] == 1);
    CHECK(first["finished"] == true);
    CHECK(json::parse(ls[3])["hypothesis"] == "a");
    CHECK(run({"decode", "--table", table, "--temperature", "0", in}).code == 1);
    const auto nojson = d.write("bad.json", "{");
    CHECK(run({"decode", "--table", nojson, in}).code == 2);
  }

  TEST_CASE("config file supplies option values") {
    TempDir d;
    const auto in = d.write("a.tsv", "a b\ta c\n");
    const auto cfg = d.write("c.ini", "[extract]\nmode=anchored\n");
    const auto r = run({"--config", cfg, "extract", in});
    REQUIRE(r.code == 0);
    CHECK(json::parse(lines_of(r.out)[1])["script"] == "Replace b with c @1");
  }
}
