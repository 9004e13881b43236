/* Copyright 2026 The sca-eval Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "scaeval/review.hpp"

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "scaeval/error.hpp"
#include "text_util.hpp"

namespace scaeval {

namespace {

using json = nlohmann::json;

// Uniform draw in [0, n) without modulo bias. std::uniform_int_distribution
// is not specified bit-for-bit across standard libraries, mt19937_64 is.
std::uint64_t Bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

json ClipToJson(const ClipRef& c) { return {{"model", c.model}, {"clip", c.clip_id}}; }

ClipRef ClipFromJson(const json& j) {
  return {j.at("model").get<std::string>(), j.at("clip").get<std::string>()};
}

[[noreturn]] void BadJson(std::string_view what, std::string_view line, const std::string& why) {
  throw Error(ErrorCode::kMalformedRecord,
              std::string(what) + " record '" + std::string(line.substr(0, 120)) + "': " + why);
}

}  // namespace

std::string_view ReviewModeName(ReviewMode mode) {
  return mode == ReviewMode::kPreference2AFC ? "2afc" : "compliance";
}

ReviewMode ParseReviewMode(std::string_view name) {
  if (name == "2afc" || name == "preference") return ReviewMode::kPreference2AFC;
  if (name == "compliance") return ReviewMode::kCompliance;
  throw Error(ErrorCode::kInvalidArgument, "unknown review mode '" + std::string(name) + "'");
}

const ClipRef& ReviewTask::OnScreen(ScreenSide side) const {
  if (mode == ReviewMode::kCompliance || !clip_b) return clip_a;
  const bool first = (side == ScreenSide::kA) != swapped;
  return first ? clip_a : *clip_b;
}

void ValidateTask(const ReviewTask& task) {
  if (task.mode == ReviewMode::kPreference2AFC && !task.clip_b) {
    throw Error(ErrorCode::kInvalidArgument, task.task_id + ": preference task needs two clips");
  }
  if (task.mode == ReviewMode::kCompliance && task.clip_b) {
    throw Error(ErrorCode::kInvalidArgument, task.task_id + ": compliance task takes one clip");
  }
  if (task.mode == ReviewMode::kCompliance && task.swapped) {
    throw Error(ErrorCode::kInvalidArgument, task.task_id + ": compliance task cannot be swapped");
  }
}

std::vector<ReviewTask> CreateReviewBatch(std::span<const ReviewItem> items, ReviewMode mode,
                                          std::uint64_t seed) {
  if (items.empty()) throw Error(ErrorCode::kEmptyInput, "no review items");
  std::mt19937_64 rng(seed);
  std::vector<ReviewTask> tasks;
  tasks.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    ReviewTask t;
    t.task_id = fmt::format("{}-{:06d}", ReviewModeName(mode), i + 1);
    t.mode = mode;
    t.clip_a = items[i].first;
    t.clip_b = items[i].second;
    t.rule_context = items[i].rule_context;
    t.presentation_order_seed = rng();
    ValidateTask(t);
    tasks.push_back(std::move(t));
  }
  if (mode == ReviewMode::kPreference2AFC) {
    // Counterbalanced: exactly half the tasks are swapped, the choice of
    // which is a seeded Fisher-Yates permutation.
    std::vector<bool> flip(tasks.size(), false);
    for (std::size_t i = 0; i < tasks.size() / 2; ++i) flip[i] = true;
    for (std::size_t i = flip.size(); i > 1; --i) {
      const std::size_t j = Bounded(rng, i);
      std::vector<bool>::swap(flip[i - 1], flip[j]);
    }
    for (std::size_t i = 0; i < tasks.size(); ++i) tasks[i].swapped = flip[i];
  }
  return tasks;
}

std::string_view ChoiceName(Choice choice) {
  switch (choice) {
    case Choice::kA: return "A";
    case Choice::kB: return "B";
    case Choice::kCorrect: return "correct";
    case Choice::kIncorrect: return "incorrect";
    case Choice::kAbstain: return "abstain";
  }
  return "abstain";
}

Choice ParseChoice(std::string_view text) {
  if (text == "A" || text == "a") return Choice::kA;
  if (text == "B" || text == "b") return Choice::kB;
  if (text == "correct") return Choice::kCorrect;
  if (text == "incorrect") return Choice::kIncorrect;
  if (text == "abstain") return Choice::kAbstain;
  throw Error(ErrorCode::kInvalidArgument, "unknown choice '" + std::string(text) + "'");
}

void ValidateVerdict(const ReviewTask& task, const Verdict& v) {
  if (v.task_id != task.task_id) {
    throw Error(ErrorCode::kInvalidArgument, "verdict for " + v.task_id + " checked against " + task.task_id);
  }
  if (v.session_id.empty()) throw Error(ErrorCode::kInvalidArgument, "empty session id");
  if (v.choice == Choice::kAbstain) {
    if (v.judge.kind != Judge::Kind::kModel) {
      throw Error(ErrorCode::kInvalidArgument, "only model judges may abstain");
    }
    return;
  }
  const bool ab = v.choice == Choice::kA || v.choice == Choice::kB;
  if (ab != (task.mode == ReviewMode::kPreference2AFC)) {
    throw Error(ErrorCode::kInvalidArgument,
                "choice '" + std::string(ChoiceName(v.choice)) + "' does not fit " +
                    std::string(ReviewModeName(task.mode)) + " task " + task.task_id);
  }
}

std::optional<ClipRef> ResolvePreference(const ReviewTask& task, Choice choice) {
  if (task.mode != ReviewMode::kPreference2AFC) return std::nullopt;
  if (choice == Choice::kA) return task.OnScreen(ScreenSide::kA);
  if (choice == Choice::kB) return task.OnScreen(ScreenSide::kB);
  return std::nullopt;
}

PreferenceStats ComputePreferenceStats(std::span<const ReviewTask> tasks,
                                       std::span<const Verdict> verdicts, std::string_view model_a,
                                       std::string_view model_b) {
  std::map<std::string_view, const ReviewTask*> by_id;
  for (const ReviewTask& t : tasks) by_id.emplace(t.task_id, &t);
  PreferenceStats s;
  std::int64_t count_a = 0;
  std::int64_t count_b = 0;
  for (const Verdict& v : verdicts) {
    auto it = by_id.find(v.task_id);
    if (it == by_id.end()) continue;
    const ReviewTask& t = *it->second;
    if (t.mode != ReviewMode::kPreference2AFC || !t.clip_b) continue;
    const bool matches = (t.clip_a.model == model_a && t.clip_b->model == model_b) ||
                         (t.clip_a.model == model_b && t.clip_b->model == model_a);
    if (!matches) continue;
    if (v.choice == Choice::kAbstain) {
      ++s.abstained;
      continue;
    }
    const auto chosen = ResolvePreference(t, v.choice);
    if (!chosen) continue;
    if (chosen->model == model_a) {
      ++count_a;
    } else {
      ++count_b;
    }
  }
  s.n = count_a + count_b;
  if (s.n == 0) {
    throw Error(ErrorCode::kEmptyInput, "no resolved preference verdicts for " +
                                            std::string(model_a) + " vs " + std::string(model_b));
  }
  s.pct_a = 100.0 * static_cast<double>(count_a) / static_cast<double>(s.n);
  s.pct_b = 100.0 * static_cast<double>(count_b) / static_cast<double>(s.n);
  return s;
}

ComplianceStats ComputeComplianceStats(std::span<const ReviewTask> tasks,
                                       std::span<const Verdict> verdicts,
                                       std::string_view scenario,
                                       std::optional<std::string_view> model) {
  std::map<std::string_view, const ReviewTask*> by_id;
  for (const ReviewTask& t : tasks) by_id.emplace(t.task_id, &t);
  ComplianceStats s;
  for (const Verdict& v : verdicts) {
    auto it = by_id.find(v.task_id);
    if (it == by_id.end()) continue;
    const ReviewTask& t = *it->second;
    if (t.mode != ReviewMode::kCompliance) continue;
    if (!scenario.empty() && t.rule_context.value_or("") != scenario) continue;
    if (model && t.clip_a.model != *model) continue;
    if (v.choice == Choice::kAbstain) {
      ++s.abstained;
    } else if (v.choice == Choice::kCorrect) {
      ++s.n_correct;
      ++s.n;
    } else if (v.choice == Choice::kIncorrect) {
      ++s.n;
    }
  }
  if (s.n == 0) {
    throw Error(ErrorCode::kEmptyInput, "no compliance verdicts for scenario '" +
                                            std::string(scenario) + "'");
  }
  s.pct_correct = 100.0 * static_cast<double>(s.n_correct) / static_cast<double>(s.n);
  return s;
}

std::string TaskToJson(const ReviewTask& t) {
  json j = {{"task_id", t.task_id},
            {"mode", ReviewModeName(t.mode)},
            {"clip_a", ClipToJson(t.clip_a)},
            {"seed", t.presentation_order_seed},
            {"swapped", t.swapped}};
  if (t.clip_b) j["clip_b"] = ClipToJson(*t.clip_b);
  if (t.rule_context) j["rule_context"] = *t.rule_context;
  return j.dump();
}

ReviewTask TaskFromJson(std::string_view line) {
  try {
    const json j = json::parse(line);
    ReviewTask t;
    t.task_id = j.at("task_id").get<std::string>();
    t.mode = ParseReviewMode(j.at("mode").get<std::string>());
    t.clip_a = ClipFromJson(j.at("clip_a"));
    if (j.contains("clip_b")) t.clip_b = ClipFromJson(j.at("clip_b"));
    if (j.contains("rule_context")) t.rule_context = j.at("rule_context").get<std::string>();
    t.presentation_order_seed = j.at("seed").get<std::uint64_t>();
    t.swapped = j.at("swapped").get<bool>();
    ValidateTask(t);
    return t;
  } catch (const json::exception& e) {
    BadJson("task", line, e.what());
  }
}

std::string VerdictToJson(const Verdict& v) {
  const json j = {
      {"task_id", v.task_id},
      {"session_id", v.session_id},
      {"judge",
       {{"kind", v.judge.kind == Judge::Kind::kHuman ? "human" : "model"}, {"id", v.judge.id}}},
      {"choice", ChoiceName(v.choice)},
      {"timestamp_ms", v.timestamp_ms},
      {"latency_ms", v.latency_ms}};
  return j.dump();
}

Verdict VerdictFromJson(std::string_view line) {
  try {
    const json j = json::parse(line);
    Verdict v;
    v.task_id = j.at("task_id").get<std::string>();
    v.session_id = j.at("session_id").get<std::string>();
    const std::string kind = j.at("judge").at("kind").get<std::string>();
    if (kind != "human" && kind != "model") BadJson("verdict", line, "bad judge kind");
    v.judge.kind = kind == "human" ? Judge::Kind::kHuman : Judge::Kind::kModel;
    v.judge.id = j.at("judge").at("id").get<std::string>();
    v.choice = ParseChoice(j.at("choice").get<std::string>());
    v.timestamp_ms = j.at("timestamp_ms").get<std::int64_t>();
    v.latency_ms = j.at("latency_ms").get<std::int64_t>();
    return v;
  } catch (const json::exception& e) {
    BadJson("verdict", line, e.what());
  }
}

std::vector<ReviewTask> LoadTasks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::vector<ReviewTask> out;
  std::string line;
  while (std::getline(in, line)) {
    if (internal::IsSkippable(line)) continue;
    out.push_back(TaskFromJson(line));
  }
  return out;
}

void WriteTasks(std::span<const ReviewTask> tasks, std::ostream& out) {
  for (const ReviewTask& t : tasks) out << TaskToJson(t) << '\n';
}

std::vector<ReviewItem> ParseReviewItems(std::istream& in) {
  std::vector<ReviewItem> items;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::IsSkippable(line)) continue;
    const auto t = internal::SplitWs(line);
    ReviewItem item;
    if (t[0] == "pair" && t.size() == 5) {
      item.first = {std::string(t[1]), std::string(t[2])};
      item.second = ClipRef{std::string(t[3]), std::string(t[4])};
    } else if (t[0] == "clip" && t.size() >= 3) {
      item.first = {std::string(t[1]), std::string(t[2])};
      if (t.size() > 3) {
        std::string rule;
        for (std::size_t i = 3; i < t.size(); ++i) {
          if (i > 3) rule += ' ';
          rule += t[i];
        }
        item.rule_context = std::move(rule);
      }
    } else {
      throw Error(ErrorCode::kMalformedRecord,
                  "line " + std::to_string(line_no) + ": expected 'pair' or 'clip' record");
    }
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<ReviewItem> LoadReviewItems(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return ParseReviewItems(in);
}

}  // namespace scaeval
