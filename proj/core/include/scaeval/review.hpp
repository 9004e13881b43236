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

#ifndef SCAEVAL_REVIEW_HPP_
#define SCAEVAL_REVIEW_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scaeval {

// A generated (or ground-truth) clip: `model` names its producer.
struct ClipRef {
  std::string model;
  std::string clip_id;

  friend bool operator==(const ClipRef&, const ClipRef&) = default;
  friend auto operator<=>(const ClipRef&, const ClipRef&) = default;
};

enum class ReviewMode { kPreference2AFC, kCompliance };

std::string_view ReviewModeName(ReviewMode mode);  // "2afc" / "compliance"
ReviewMode ParseReviewMode(std::string_view name);

// Input to batch creation. Preference items carry two clips, compliance
// items one clip plus the rule being checked ("red light", ...).
struct ReviewItem {
  ClipRef first;
  std::optional<ClipRef> second;
  std::optional<std::string> rule_context;
};

enum class ScreenSide { kA, kB };

struct ReviewTask {
  std::string task_id;
  ReviewMode mode = ReviewMode::kPreference2AFC;
  ClipRef clip_a;                     // canonical first clip
  std::optional<ClipRef> clip_b;      // canonical second clip (2AFC only)
  std::optional<std::string> rule_context;
  std::uint64_t presentation_order_seed = 0;
  // When true, clip_b is shown in screen slot A and clip_a in slot B.
  bool swapped = false;

  // The clip rendered in a screen slot.
  const ClipRef& OnScreen(ScreenSide side) const;

  friend bool operator==(const ReviewTask&, const ReviewTask&) = default;
};

// Throws kInvalidArgument when the clip count does not fit the mode.
void ValidateTask(const ReviewTask& task);

// Deterministic in `seed`. Exactly floor(n/2) preference tasks are swapped;
// which ones is a seeded permutation.
std::vector<ReviewTask> CreateReviewBatch(std::span<const ReviewItem> items,
                                          ReviewMode mode, std::uint64_t seed);

enum class Choice { kA, kB, kCorrect, kIncorrect, kAbstain };

std::string_view ChoiceName(Choice choice);  // "A", "B", "correct", ...
Choice ParseChoice(std::string_view text);

struct Judge {
  enum class Kind { kHuman, kModel };
  Kind kind = Kind::kHuman;
  std::string id;  // reviewer id or model name

  friend bool operator==(const Judge&, const Judge&) = default;
};

struct Verdict {
  std::string task_id;
  std::string session_id;
  Judge judge;
  Choice choice = Choice::kA;
  std::int64_t timestamp_ms = 0;  // unix epoch
  std::int64_t latency_ms = 0;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// Choice must be A/B for preference tasks and correct/incorrect for
// compliance tasks; model judges may also abstain.
void ValidateVerdict(const ReviewTask& task, const Verdict& verdict);

// The clip a preference verdict chose, undoing the presentation swap.
// nullopt for abstentions.
std::optional<ClipRef> ResolvePreference(const ReviewTask& task, Choice choice);

struct PreferenceStats {
  double pct_a = 0.0;
  double pct_b = 0.0;
  std::int64_t n = 0;          // resolved choices
  std::int64_t abstained = 0;  // excluded from n
};

// Counts verdicts on preference tasks comparing model_a against model_b (in
// either canonical order). Throws kEmptyInput when nothing resolves.
PreferenceStats ComputePreferenceStats(std::span<const ReviewTask> tasks,
                                       std::span<const Verdict> verdicts,
                                       std::string_view model_a,
                                       std::string_view model_b);

struct ComplianceStats {
  double pct_correct = 0.0;
  std::int64_t n_correct = 0;
  std::int64_t n = 0;
  std::int64_t abstained = 0;
};

// Compliance verdicts whose task rule_context equals `scenario`; an empty
// scenario matches every compliance task. Optionally restricted to one
// model. Throws kEmptyInput.
ComplianceStats ComputeComplianceStats(std::span<const ReviewTask> tasks,
                                       std::span<const Verdict> verdicts,
                                       std::string_view scenario,
                                       std::optional<std::string_view> model = std::nullopt);

// JSON-lines persistence.
std::string TaskToJson(const ReviewTask& task);
ReviewTask TaskFromJson(std::string_view line);
std::string VerdictToJson(const Verdict& verdict);
Verdict VerdictFromJson(std::string_view line);

std::vector<ReviewTask> LoadTasks(const std::filesystem::path& path);
void WriteTasks(std::span<const ReviewTask> tasks, std::ostream& out);

// Review items, one per line:
//   pair <model_a> <clip_a> <model_b> <clip_b>
//   clip <model> <clip> <rule context words...>
std::vector<ReviewItem> ParseReviewItems(std::istream& in);
std::vector<ReviewItem> LoadReviewItems(const std::filesystem::path& path);

}  // namespace scaeval

#endif  // SCAEVAL_REVIEW_HPP_
