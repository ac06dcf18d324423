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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gectk/align.hpp"

namespace gectk {

enum class TaskKind { Correct = 0, Explain = 1, Apply = 2, Edit = 3 };

inline constexpr std::array<TaskKind, 4> kAllTasks = {TaskKind::Correct, TaskKind::Explain,
                                                      TaskKind::Apply, TaskKind::Edit};

/// "correct", "explain", "apply", "edit".
std::string_view task_name(TaskKind task);
/// "<correct> " and friends, including the trailing space.
std::string_view task_prefix(TaskKind task);
TaskKind parse_task(std::string_view name);
/// Recovers the task from an instance input by its prefix.
std::optional<TaskKind> task_from_input(std::string_view input);

/// Non-empty subset of the four tasks. Iteration is always in canonical
/// order Correct, Explain, Apply, Edit.
class TaskSet {
 public:
  TaskSet() = default;
  TaskSet(std::initializer_list<TaskKind> tasks);

  static TaskSet all() { return {TaskKind::Correct, TaskKind::Explain, TaskKind::Apply, TaskKind::Edit}; }
  /// Comma-separated task names, e.g. "correct,apply".
  static TaskSet parse(std::string_view list);

  void add(TaskKind t) { bits_ |= 1u << static_cast<unsigned>(t); }
  bool contains(TaskKind t) const { return (bits_ >> static_cast<unsigned>(t)) & 1u; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const;
  std::vector<TaskKind> tasks() const;
  std::string to_string() const;

  friend bool operator==(const TaskSet&, const TaskSet&) = default;

 private:
  unsigned bits_ = 0;
};

struct TaskInstance {
  TaskKind task = TaskKind::Correct;
  std::string input;
  std::string target;
  std::string pair_id;
  std::string doc_id;
  std::size_t doc_index = 0;
};

TaskInstance gen_correct(const TokenizedPair& pair);
TaskInstance gen_explain(const TokenizedPair& pair, const EditScript& script);
TaskInstance gen_apply(const TokenizedPair& pair, const EditScript& script);
TaskInstance gen_edit(const TokenizedPair& pair, const EditScript& script);

/// All enabled task instances of one pair, adjacent and in canonical order.
std::vector<TaskInstance> expand_pair(const TokenizedPair& pair, const TaskSet& tasks,
                                      const CostModel& costs = {});

/// Expands every pair in order. The sink receives instances one at a time.
void expand_corpus(std::span<const TokenizedPair> pairs, const TaskSet& tasks,
                   const std::function<void(TaskInstance&&)>& sink, const CostModel& costs = {});
std::vector<TaskInstance> expand_corpus(std::span<const TokenizedPair> pairs, const TaskSet& tasks,
                                        const CostModel& costs = {});

/// JSONL line: {"task","input","target","pair_id","doc_id","doc_index"}.
std::string to_json_line(const TaskInstance& instance);

}  // namespace gectk
