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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gectk/align.hpp"
#include "gectk/corpus.hpp"
#include "gectk/taskgen.hpp"
#include "json.hpp"

namespace gectk {

enum class Stage { I = 1, II = 2, III = 3 };

inline constexpr std::array<Stage, 3> kAllStages = {Stage::I, Stage::II, Stage::III};

std::string_view stage_name(Stage s);  // "I", "II", "III"
Stage parse_stage(std::string_view name);

struct DatasetDescriptor {
  std::string name;
  std::string path;
  CorpusFormat format = CorpusFormat::Jsonl;
  std::set<Stage> stages;
  bool errorful_only = false;
  int rank = 0;  // order within each of its stages
};

/// Default Stage II ranks: Lang-8, NUCLE, FCE, W&I+L.
std::optional<int> default_rank(std::string_view dataset_name);

struct OrderMode {
  enum Kind { Keep, Shuffle } kind = Keep;
  std::uint64_t seed = 0;
  friend bool operator==(const OrderMode&, const OrderMode&) = default;
};

struct SchedulePolicy {
  OrderMode within_dataset;   // Keep = preserve document structure
  OrderMode across_datasets;  // Keep = strict rank order
  std::map<Stage, TaskSet> task_sets;
  std::map<Stage, int> epochs;
  std::size_t batch_size = 12;

  /// Stage I: Correct; Stages II and III: Correct, Explain, Apply.
  static SchedulePolicy defaults();
  TaskSet tasks_for(Stage s) const;
  int epochs_for(Stage s) const;
};

struct ManifestEntry {
  Stage stage = Stage::I;
  std::string dataset;
  std::string doc_id;
  std::size_t doc_index = 0;
  std::string pair_id;
  TaskKind task = TaskKind::Correct;
  std::size_t batch_index = 0;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct ScheduleManifest {
  std::vector<ManifestEntry> entries;
  /// Offset of the first entry of each stage, in stage order, followed by
  /// the total entry count.
  std::vector<std::size_t> stage_boundaries;
  std::vector<Stage> stages;
};

/// Pair source used by build_manifest; defaults to reading descriptor.path.
using CorpusLoader = std::function<std::vector<TokenizedPair>(const DatasetDescriptor&)>;

std::vector<TokenizedPair> load_descriptor(const DatasetDescriptor& d);

/// Validates descriptors: non-empty, unique names, unique ranks per stage.
/// Throws std::invalid_argument.
void validate_descriptors(std::span<const DatasetDescriptor> descriptors);

ScheduleManifest build_manifest(std::span<const DatasetDescriptor> descriptors, const SchedulePolicy& policy,
                                const CorpusLoader& loader = load_descriptor);

/// Greedy sequential packing; entries are never reordered. Numbering
/// starts at `first_batch`. Returns the next unused batch index.
std::size_t batch_pack(std::span<ManifestEntry> entries, std::size_t batch_size, std::size_t first_batch = 0);

struct DatasetStats {
  std::size_t n_sentences = 0;
  double pct_errorful = 0.0;
};

DatasetStats dataset_stats(std::span<const TokenizedPair> pairs);

// JSON surfaces ------------------------------------------------------------

SchedulePolicy policy_from_json(const nlohmann::json& j);
nlohmann::ordered_json policy_to_json(const SchedulePolicy& p);
std::vector<DatasetDescriptor> descriptors_from_json(const nlohmann::json& j);
nlohmann::ordered_json descriptors_to_json(std::span<const DatasetDescriptor> d);

/// 16 hex digits of FNV-1a over the canonical policy and descriptor JSON.
std::string policy_hash(const SchedulePolicy& p, std::span<const DatasetDescriptor> d);

/// Header line, then one JSON object per entry, each newline-terminated.
std::string manifest_to_jsonl(const ScheduleManifest& m, const SchedulePolicy& p,
                              std::span<const DatasetDescriptor> d);

}  // namespace gectk
