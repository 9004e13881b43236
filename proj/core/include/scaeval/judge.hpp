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

#ifndef SCAEVAL_JUDGE_HPP_
#define SCAEVAL_JUDGE_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scaeval/review.hpp"

namespace scaeval {

inline constexpr char kJudgeTokenEnv[] = "SCA_EVAL_JUDGE_TOKEN";

struct JudgePromptSpec {
  std::string template_id;
  std::string instruction_text;
  int frame_stride = 4;       // send every k-th frame ...
  int frames_per_clip = 25;   // ... out of this many
  // Accepted answer tokens, matched case-insensitively. Index 0 maps to
  // Choice::kA / kCorrect, index 1 to kB / kIncorrect.
  std::vector<std::string> response_tokens;

  std::vector<int> SampledFrames() const;
};

JudgePromptSpec DefaultPreferencePrompt();
JudgePromptSpec DefaultCompliancePrompt();

// Checks that the grammar tells its answers apart: exactly two non-empty
// tokens without whitespace that differ case-insensitively. Answers are
// matched whole, so "correct" and "incorrect" are distinct. Throws
// kInvalidArgument.
void ValidatePromptSpec(const JudgePromptSpec& spec);

// Accepts either a bare token ("B", "b.", " A ") or a line of the form
// "Answer: <token>". Anything else is unparseable.
std::optional<Choice> ParseJudgeResponse(std::string_view text,
                                         const JudgePromptSpec& spec,
                                         ReviewMode mode);

struct ChatPart {
  enum class Kind { kText, kImage };
  Kind kind = Kind::kText;
  std::string text;       // kText
  std::string image_url;  // kImage, usually a data: URL
};

struct ChatRequest {
  std::string model;
  std::vector<ChatPart> parts;  // a single user message
};

// Chat-completion transport. Implementations throw Error(kTransportError)
// for network failures and timeouts.
class JudgeTransport {
 public:
  virtual ~JudgeTransport() = default;
  virtual std::string Complete(const ChatRequest& request) = 0;
};

struct EndpointDescriptor {
  std::string base_url;  // e.g. https://api.openai.com
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string token_env = kJudgeTokenEnv;
  std::chrono::milliseconds timeout{60000};
};

// POSTs OpenAI-style chat-completion bodies and returns the first choice's
// message content. The bearer token is read from `token_env` at
// construction (absent variable = no Authorization header).
class HttpChatTransport final : public JudgeTransport {
 public:
  explicit HttpChatTransport(EndpointDescriptor endpoint);
  std::string Complete(const ChatRequest& request) override;

  // Request body as sent on the wire.
  static std::string EncodeRequest(const ChatRequest& request);
  // Throws kTransportError when the body is not a chat-completion response.
  static std::string DecodeResponse(std::string_view body);

 private:
  EndpointDescriptor endpoint_;
  std::optional<std::string> token_;
};

// Returns encoded image bytes (JPEG) for a clip frame, nullopt if missing.
using FrameSource =
    std::function<std::optional<std::string>(const ClipRef& clip, int frame)>;

// Frames stored as <root>/<model>/<clip_id>/<frame>.jpg.
FrameSource MediaDirectoryFrames(std::filesystem::path root);
std::filesystem::path MediaFramePath(const std::filesystem::path& root,
                                     const ClipRef& clip, int frame);

std::string Base64Encode(std::string_view bytes);

struct JudgeOptions {
  std::string model_name;              // recorded as the judge id
  std::string session_id = "ai-judge";
  int max_retries = 2;                 // extra attempts per task
  std::function<std::int64_t()> clock; // epoch ms; defaults to system clock
};

struct JudgeRun {
  std::vector<Verdict> verdicts;  // one per task, abstentions included
  std::int64_t abstained = 0;
  std::int64_t retries = 0;
};

// Builds the prompt for one task in presentation order (screen A first).
ChatRequest BuildJudgeRequest(const ReviewTask& task, const JudgePromptSpec& prompt,
                              const FrameSource& frames, const std::string& model);

// Unparseable answers are retried up to max_retries times and then recorded
// as kAbstain. Transport failures are retried the same way; when retries run
// out the error is rethrown with the task id in its message.
JudgeRun RunAiJudge(std::span<const ReviewTask> tasks, const JudgePromptSpec& prompt,
                    JudgeTransport& transport, const FrameSource& frames,
                    const JudgeOptions& options);

}  // namespace scaeval

#endif  // SCAEVAL_JUDGE_HPP_
