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

#include "gectk/taskgen.hpp"

#include <bit>
#include <stdexcept>

#include "gectk/editscript.hpp"
#include "json.hpp"

namespace gectk {

std::string_view task_name(TaskKind task) {
  switch (task) {
    case TaskKind::Correct: return "correct";
    case TaskKind::Explain: return "explain";
    case TaskKind::Apply: return "apply";
    case TaskKind::Edit: return "edit";
  }
  return "?";
}

std::string_view task_prefix(TaskKind task) {
  switch (task) {
    case TaskKind::Correct: return "<correct> ";
    case TaskKind::Explain: return "<explain> ";
    case TaskKind::Apply: return "<apply> ";
    case TaskKind::Edit: return "<edit> ";
  }
  return "?";
}

TaskKind parse_task(std::string_view name) {
  for (TaskKind t : kAllTasks) {
    if (task_name(t) == name) return t;
  }
  throw std::invalid_argument("unknown task '" + std::string(name) + "'");
}

std::optional<TaskKind> task_from_input(std::string_view input) {
  for (TaskKind t : kAllTasks) {
    if (input.starts_with(task_prefix(t))) return t;
  }
  return std::nullopt;
}

TaskSet::TaskSet(std::initializer_list<TaskKind> tasks) {
  for (TaskKind t : tasks) add(t);
}

TaskSet TaskSet::parse(std::string_view list) {
  TaskSet set;
  std::size_t start = 0;
  while (true) {
    const auto comma = list.find(',', start);
    const auto piece = tokenize(list.substr(start, comma == std::string_view::npos ? list.npos : comma - start));
    if (piece.size() > 1) throw std::invalid_argument("task names must be comma-separated");
    if (piece.empty()) throw std::invalid_argument("empty task name in '" + std::string(list) + "'");
    set.add(parse_task(piece.front()));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (set.empty()) throw std::invalid_argument("task set must not be empty");
  return set;
}

std::size_t TaskSet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<TaskKind> TaskSet::tasks() const {
  std::vector<TaskKind> out;
  for (TaskKind t : kAllTasks) {
    if (contains(t)) out.push_back(t);
  }
  return out;
}

std::string TaskSet::to_string() const {
  std::string out;
  for (TaskKind t : tasks()) {
    if (!out.empty()) out += ',';
    out += task_name(t);
  }
  return out;
}

namespace {

TaskInstance make_instance(const TokenizedPair& pair, TaskKind task, std::string input, std::string target) {
  return {task, std::move(input), std::move(target), pair.pair_id, pair.doc_id, pair.doc_index};
}

}  // namespace

TaskInstance gen_correct(const TokenizedPair& pair) {
  if (pair.src_tokens.empty()) throw std::invalid_argument("pair " + pair.pair_id + " has an empty source");
  return make_instance(pair, TaskKind::Correct, std::string(task_prefix(TaskKind::Correct)) + pair.src_raw,
                       pair.tgt_raw);
}

TaskInstance gen_explain(const TokenizedPair& pair, const EditScript& script) {
  std::string input(task_prefix(TaskKind::Explain));
  input += "Input: ";
  input += pair.src_raw;
  input += "\nTarget: ";
  input += pair.tgt_raw;
  return make_instance(pair, TaskKind::Explain, std::move(input), serialize_script(script, ScriptMode::Plain));
}

TaskInstance gen_apply(const TokenizedPair& pair, const EditScript& script) {
  std::string input(task_prefix(TaskKind::Apply));
  input += "Input: ";
  input += pair.src_raw;
  input += "\nDo: ";
  input += serialize_script(script, ScriptMode::Plain);
  return make_instance(pair, TaskKind::Apply, std::move(input), pair.tgt_raw);
}

TaskInstance gen_edit(const TokenizedPair& pair, const EditScript& script) {
  return make_instance(pair, TaskKind::Edit, std::string(task_prefix(TaskKind::Edit)) + pair.src_raw,
                       serialize_script(script, ScriptMode::Plain));
}

std::vector<TaskInstance> expand_pair(const TokenizedPair& pair, const TaskSet& tasks, const CostModel& costs) {
  std::vector<TaskInstance> out;
  out.reserve(tasks.size());
  const bool needs_script =
      tasks.contains(TaskKind::Explain) || tasks.contains(TaskKind::Apply) || tasks.contains(TaskKind::Edit);
  const EditScript script = needs_script ? align_pair(pair, costs) : EditScript{pair.pair_id, {}};
  for (TaskKind t : tasks.tasks()) {
    switch (t) {
      case TaskKind::Correct: out.push_back(gen_correct(pair)); break;
      case TaskKind::Explain: out.push_back(gen_explain(pair, script)); break;
      case TaskKind::Apply: out.push_back(gen_apply(pair, script)); break;
      case TaskKind::Edit: out.push_back(gen_edit(pair, script)); break;
    }
  }
  return out;
}

void expand_corpus(std::span<const TokenizedPair> pairs, const TaskSet& tasks,
                   const std::function<void(TaskInstance&&)>& sink, const CostModel& costs) {
  if (tasks.empty()) throw std::invalid_argument("task set must not be empty");
  for (const auto& pair : pairs) {
    for (auto& inst : expand_pair(pair, tasks, costs)) sink(std::move(inst));
  }
}

std::vector<TaskInstance> expand_corpus(std::span<const TokenizedPair> pairs, const TaskSet& tasks,
                                        const CostModel& costs) {
  std::vector<TaskInstance> out;
  out.reserve(pairs.size() * tasks.size());
  expand_corpus(pairs, tasks, [&](TaskInstance&& inst) { out.push_back(std::move(inst)); }, costs);
  return out;
}

std::string to_json_line(const TaskInstance& instance) {
  nlohmann::ordered_json j;
  j["task"] = task_name(instance.task);
  j["input"] = instance.input;
  j["target"] = instance.target;
  j["pair_id"] = instance.pair_id;
  j["doc_id"] = instance.doc_id;
  j["doc_index"] = instance.doc_index;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace gectk
