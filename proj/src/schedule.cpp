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

#include "gectk/schedule.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

#include "gectk/rng.hpp"
#include "gectk/version.hpp"

namespace gectk {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::I: return "I";
    case Stage::II: return "II";
    case Stage::III: return "III";
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  for (Stage s : kAllStages) {
    if (stage_name(s) == name) return s;
  }
  throw std::invalid_argument("unknown stage '" + std::string(name) + "' (expected I, II or III)");
}

std::optional<int> default_rank(std::string_view name) {
  if (name == "Lang-8") return 0;
  if (name == "NUCLE") return 1;
  if (name == "FCE") return 2;
  if (name == "W&I+L") return 3;
  return std::nullopt;
}

SchedulePolicy SchedulePolicy::defaults() {
  SchedulePolicy p;
  p.task_sets[Stage::I] = TaskSet{TaskKind::Correct};
  p.task_sets[Stage::II] = TaskSet{TaskKind::Correct, TaskKind::Explain, TaskKind::Apply};
  p.task_sets[Stage::III] = TaskSet{TaskKind::Correct, TaskKind::Explain, TaskKind::Apply};
  for (Stage s : kAllStages) p.epochs[s] = 1;
  return p;
}

TaskSet SchedulePolicy::tasks_for(Stage s) const {
  auto it = task_sets.find(s);
  if (it != task_sets.end()) return it->second;
  return SchedulePolicy::defaults().task_sets.at(s);
}

int SchedulePolicy::epochs_for(Stage s) const {
  auto it = epochs.find(s);
  return it == epochs.end() ? 1 : it->second;
}

std::vector<TokenizedPair> load_descriptor(const DatasetDescriptor& d) { return read_corpus_file(d.path, d.format); }

void validate_descriptors(std::span<const DatasetDescriptor> descriptors) {
  if (descriptors.empty()) throw std::invalid_argument("no datasets given");
  std::set<std::string> names;
  std::set<std::pair<Stage, int>> ranks;
  for (const auto& d : descriptors) {
    if (d.name.empty()) throw std::invalid_argument("dataset without a name");
    if (!names.insert(d.name).second) throw std::invalid_argument("duplicate dataset name '" + d.name + "'");
    if (d.stages.empty()) throw std::invalid_argument("dataset '" + d.name + "' is not assigned to any stage");
    for (Stage s : d.stages) {
      if (!ranks.insert({s, d.rank}).second) {
        throw std::invalid_argument("duplicate rank " + std::to_string(d.rank) + " in stage " +
                                    std::string(stage_name(s)) + " (dataset '" + d.name + "')");
      }
    }
  }
}

namespace {

// Groups sentences by document in first-appearance order and sorts each
// document by doc_index.
std::vector<const TokenizedPair*> document_order(const std::vector<TokenizedPair>& pairs, const std::string& dataset) {
  std::vector<std::string_view> doc_order;
  std::unordered_map<std::string_view, std::vector<const TokenizedPair*>> docs;
  for (const auto& p : pairs) {
    auto [it, fresh] = docs.try_emplace(p.doc_id);
    if (fresh) doc_order.push_back(p.doc_id);
    it->second.push_back(&p);
  }
  std::vector<const TokenizedPair*> out;
  out.reserve(pairs.size());
  for (auto doc : doc_order) {
    auto& sents = docs[doc];
    std::stable_sort(sents.begin(), sents.end(),
                     [](const TokenizedPair* a, const TokenizedPair* b) { return a->doc_index < b->doc_index; });
    for (std::size_t i = 1; i < sents.size(); ++i) {
      if (sents[i]->doc_index == sents[i - 1]->doc_index) {
        throw std::invalid_argument("dataset '" + dataset + "': document '" + std::string(doc) +
                                    "' has duplicate doc_index " + std::to_string(sents[i]->doc_index));
      }
    }
    out.insert(out.end(), sents.begin(), sents.end());
  }
  return out;
}

struct Source {
  const DatasetDescriptor* descriptor;
  std::vector<const TokenizedPair*> order;
};

}  // namespace

std::size_t batch_pack(std::span<ManifestEntry> entries, std::size_t batch_size, std::size_t first_batch) {
  if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i].batch_index = first_batch + i / batch_size;
  return first_batch + (entries.size() + batch_size - 1) / batch_size;
}

ScheduleManifest build_manifest(std::span<const DatasetDescriptor> descriptors, const SchedulePolicy& policy,
                                const CorpusLoader& loader) {
  validate_descriptors(descriptors);
  if (policy.batch_size == 0) throw std::invalid_argument("batch size must be positive");

  std::unordered_map<std::string, std::vector<TokenizedPair>> cache;
  auto corpus = [&](const DatasetDescriptor& d) -> const std::vector<TokenizedPair>& {
    auto it = cache.find(d.name);
    if (it == cache.end()) {
      auto pairs = loader(d);
      if (d.errorful_only) {
        std::erase_if(pairs, [](const TokenizedPair& p) { return p.src_tokens == p.tgt_tokens; });
      }
      it = cache.emplace(d.name, std::move(pairs)).first;
    }
    return it->second;
  };

  ScheduleManifest m;
  std::size_t next_batch = 0;
  for (Stage stage : kAllStages) {
    std::vector<const DatasetDescriptor*> members;
    for (const auto& d : descriptors) {
      if (d.stages.contains(stage)) members.push_back(&d);
    }
    if (members.empty()) continue;
    std::stable_sort(members.begin(), members.end(),
                     [](const DatasetDescriptor* a, const DatasetDescriptor* b) { return a->rank < b->rank; });

    const TaskSet tasks = policy.tasks_for(stage);
    if (tasks.empty()) throw std::invalid_argument("empty task set for stage " + std::string(stage_name(stage)));
    const int epochs = policy.epochs_for(stage);
    if (epochs < 1) throw std::invalid_argument("epochs must be at least 1");

    m.stages.push_back(stage);
    m.stage_boundaries.push_back(m.entries.size());
    const auto stage_key = static_cast<std::uint64_t>(stage);

    for (int epoch = 0; epoch < epochs; ++epoch) {
      std::vector<Source> sources;
      for (std::size_t k = 0; k < members.size(); ++k) {
        const DatasetDescriptor& d = *members[k];
        Source src{&d, document_order(corpus(d), d.name)};
        if (policy.within_dataset.kind == OrderMode::Shuffle) {
          seeded_shuffle(std::span(src.order),
                         derive_seed(policy.within_dataset.seed, stage_key, static_cast<std::uint64_t>(d.rank),
                                     static_cast<std::uint64_t>(epoch)));
        }
        sources.push_back(std::move(src));
      }

      std::vector<std::pair<const DatasetDescriptor*, const TokenizedPair*>> sequence;
      for (const auto& s : sources) {
        for (const auto* p : s.order) sequence.emplace_back(s.descriptor, p);
      }
      if (policy.across_datasets.kind == OrderMode::Shuffle) {
        const auto seed = derive_seed(policy.across_datasets.seed, stage_key, 0xAC, static_cast<std::uint64_t>(epoch));
        if (policy.within_dataset.kind == OrderMode::Shuffle) {
          seeded_shuffle(std::span(sequence), seed);
        } else {
          // Random interleaving that keeps every dataset's internal order.
          std::mt19937_64 rng(seed);
          std::vector<std::size_t> next(sources.size(), 0);
          std::size_t remaining = sequence.size();
          sequence.clear();
          while (remaining > 0) {
            auto pick = uniform_below(rng, remaining);
            std::size_t k = 0;
            while (pick >= sources[k].order.size() - next[k]) {
              pick -= sources[k].order.size() - next[k];
              ++k;
            }
            sequence.emplace_back(sources[k].descriptor, sources[k].order[next[k]++]);
            --remaining;
          }
        }
      }

      const std::size_t stage_start = m.entries.size();
      for (const auto& [d, p] : sequence) {
        for (TaskKind t : tasks.tasks()) {
          m.entries.push_back({stage, d->name, p->doc_id, p->doc_index, p->pair_id, t, 0});
        }
      }
      // Batches never straddle a stage or epoch boundary.
      next_batch = batch_pack(std::span(m.entries).subspan(stage_start), policy.batch_size, next_batch);
    }
  }
  m.stage_boundaries.push_back(m.entries.size());
  return m;
}

DatasetStats dataset_stats(std::span<const TokenizedPair> pairs) {
  DatasetStats s;
  s.n_sentences = pairs.size();
  if (pairs.empty()) return s;
  const auto errorful =
      std::count_if(pairs.begin(), pairs.end(), [](const TokenizedPair& p) { return p.src_tokens != p.tgt_tokens; });
  s.pct_errorful = 100.0 * static_cast<double>(errorful) / static_cast<double>(pairs.size());
  return s;
}

// ---------------------------------------------------------------------------

namespace {

OrderMode order_from_json(const json& j, std::string_view keep_name, const char* field) {
  OrderMode m;
  std::string mode;
  if (j.is_string()) {
    mode = j.get<std::string>();
  } else if (j.is_object() && j.contains("mode")) {
    mode = j.at("mode").get<std::string>();
  } else {
    throw std::invalid_argument(std::string("'") + field + "' must be a string or an object with 'mode'");
  }
  if (mode == keep_name) return m;
  if (mode != "shuffle") {
    throw std::invalid_argument(std::string("'") + field + "': unknown mode '" + mode + "'");
  }
  if (!j.is_object() || !j.contains("seed") || !j.at("seed").is_number_integer()) {
    throw std::invalid_argument(std::string("'") + field + "': shuffle requires an integer 'seed'");
  }
  m.kind = OrderMode::Shuffle;
  m.seed = j.at("seed").get<std::uint64_t>();
  return m;
}

ordered_json order_to_json(const OrderMode& m, std::string_view keep_name) {
  ordered_json j;
  if (m.kind == OrderMode::Keep) {
    j["mode"] = keep_name;
  } else {
    j["mode"] = "shuffle";
    j["seed"] = m.seed;
  }
  return j;
}

}  // namespace

SchedulePolicy policy_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("policy must be a JSON object");
  SchedulePolicy p = SchedulePolicy::defaults();
  try {
    if (j.contains("within_dataset")) p.within_dataset = order_from_json(j.at("within_dataset"), "preserve", "within_dataset");
    if (j.contains("across_datasets")) {
      p.across_datasets = order_from_json(j.at("across_datasets"), "strict_order", "across_datasets");
    }
    if (j.contains("batch_size")) {
      const auto b = j.at("batch_size").get<long long>();
      if (b <= 0) throw std::invalid_argument("batch_size must be positive");
      p.batch_size = static_cast<std::size_t>(b);
    }
    if (j.contains("task_sets")) {
      for (const auto& [stage, list] : j.at("task_sets").items()) {
        TaskSet set;
        for (const auto& name : list) set.add(parse_task(name.get<std::string>()));
        if (set.empty()) throw std::invalid_argument("empty task set for stage " + stage);
        p.task_sets[parse_stage(stage)] = set;
      }
    }
    if (j.contains("epochs")) {
      for (const auto& [stage, n] : j.at("epochs").items()) {
        const int e = n.get<int>();
        if (e < 1) throw std::invalid_argument("epochs must be at least 1");
        p.epochs[parse_stage(stage)] = e;
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("policy: ") + e.what());
  }
  return p;
}

ordered_json policy_to_json(const SchedulePolicy& p) {
  ordered_json j;
  j["within_dataset"] = order_to_json(p.within_dataset, "preserve");
  j["across_datasets"] = order_to_json(p.across_datasets, "strict_order");
  j["batch_size"] = p.batch_size;
  ordered_json tasks = ordered_json::object();
  ordered_json epochs = ordered_json::object();
  for (Stage s : kAllStages) {
    ordered_json list = ordered_json::array();
    for (TaskKind t : p.tasks_for(s).tasks()) list.push_back(task_name(t));
    tasks[std::string(stage_name(s))] = list;
    epochs[std::string(stage_name(s))] = p.epochs_for(s);
  }
  j["task_sets"] = tasks;
  j["epochs"] = epochs;
  return j;
}

std::vector<DatasetDescriptor> descriptors_from_json(const json& j) {
  const json& list = j.is_object() && j.contains("datasets") ? j.at("datasets") : j;
  if (!list.is_array()) throw std::invalid_argument("datasets must be a JSON array");
  std::vector<DatasetDescriptor> out;
  try {
    for (const auto& item : list) {
      DatasetDescriptor d;
      d.name = item.at("name").get<std::string>();
      d.path = item.value("path", std::string());
      d.format = parse_corpus_format(item.value("format", std::string("jsonl")));
      for (const auto& s : item.at("stages")) d.stages.insert(parse_stage(s.get<std::string>()));
      d.errorful_only = item.value("errorful_only", false);
      if (item.contains("rank")) {
        d.rank = item.at("rank").get<int>();
      } else if (auto r = default_rank(d.name)) {
        d.rank = *r;
      } else {
        throw std::invalid_argument("dataset '" + d.name + "' needs an explicit 'rank'");
      }
      out.push_back(std::move(d));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("datasets: ") + e.what());
  }
  return out;
}

ordered_json descriptors_to_json(std::span<const DatasetDescriptor> d) {
  ordered_json list = ordered_json::array();
  for (const auto& x : d) {
    ordered_json item;
    item["name"] = x.name;
    item["path"] = x.path;
    item["format"] = x.format == CorpusFormat::Tsv ? "tsv" : "jsonl";
    ordered_json stages = ordered_json::array();
    for (Stage s : x.stages) stages.push_back(stage_name(s));
    item["stages"] = stages;
    item["errorful_only"] = x.errorful_only;
    item["rank"] = x.rank;
    list.push_back(item);
  }
  return list;
}

std::string policy_hash(const SchedulePolicy& p, std::span<const DatasetDescriptor> d) {
  const std::string canon = policy_to_json(p).dump() + "\n" + descriptors_to_json(d).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string manifest_to_jsonl(const ScheduleManifest& m, const SchedulePolicy& p,
                              std::span<const DatasetDescriptor> d) {
  ordered_json header;
  header["tool"] = kToolName;
  header["version"] = kVersion;
  header["policy_hash"] = policy_hash(p, d);
  ordered_json stages = ordered_json::array();
  for (Stage s : m.stages) stages.push_back(stage_name(s));
  header["stages"] = stages;
  header["stage_boundaries"] = m.stage_boundaries;
  header["entries"] = m.entries.size();
  ordered_json line;
  line["header"] = header;

  std::string out = line.dump() + "\n";
  for (const auto& e : m.entries) {
    ordered_json j;
    j["stage"] = stage_name(e.stage);
    j["dataset"] = e.dataset;
    j["doc_id"] = e.doc_id;
    j["doc_index"] = e.doc_index;
    j["pair_id"] = e.pair_id;
    j["task"] = task_name(e.task);
    j["batch_index"] = e.batch_index;
    out += j.dump(-1, ' ', false, json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

}  // namespace gectk
