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

#include "scaeval/judge.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iterator>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "scaeval/error.hpp"

namespace scaeval {

namespace {

using json = nlohmann::json;

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view Trim(std::string_view s) {
  auto junk = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '.' || c == '!' || c == '"' ||
           c == '\'' || c == '*' || c == '`';
  };
  while (!s.empty() && junk(s.front())) s.remove_prefix(1);
  while (!s.empty() && junk(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<std::size_t> MatchToken(std::string_view text, const JudgePromptSpec& spec) {
  const std::string t = Lower(Trim(text));
  for (std::size_t i = 0; i < spec.response_tokens.size(); ++i) {
    if (t == Lower(spec.response_tokens[i])) return i;
  }
  return std::nullopt;
}

std::int64_t SystemClockMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

std::vector<int> JudgePromptSpec::SampledFrames() const {
  std::vector<int> out;
  for (int f = 0; f < frames_per_clip; f += frame_stride) out.push_back(f);
  return out;
}

JudgePromptSpec DefaultPreferencePrompt() {
  JudgePromptSpec spec;
  spec.template_id = "preference-v1";
  spec.instruction_text =
      "You will see frames from two driving videos, Video A and Video B, generated from the "
      "same starting frame. Judge which video has better visual quality: sharp detail, stable "
      "objects and plausible motion over time. Reply with a single letter, A or B.";
  spec.response_tokens = {"A", "B"};
  return spec;
}

JudgePromptSpec DefaultCompliancePrompt() {
  JudgePromptSpec spec;
  spec.template_id = "compliance-v1";
  spec.instruction_text =
      "You will see frames from a driving video recorded by a front camera. Decide whether the "
      "ego vehicle obeys the traffic rule described below. Reply with a single word, correct "
      "or incorrect.";
  spec.response_tokens = {"correct", "incorrect"};
  return spec;
}

void ValidatePromptSpec(const JudgePromptSpec& spec) {
  if (spec.template_id.empty()) throw Error(ErrorCode::kInvalidArgument, "empty template id");
  if (spec.frame_stride <= 0 || spec.frames_per_clip <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "frame sampling must be positive");
  }
  if (spec.response_tokens.size() != 2) {
    throw Error(ErrorCode::kInvalidArgument, "response grammar needs exactly two tokens");
  }
  for (const std::string& t : spec.response_tokens) {
    if (t.empty() || std::any_of(t.begin(), t.end(), [](unsigned char c) {
          return std::isspace(c) != 0;
        })) {
      throw Error(ErrorCode::kInvalidArgument, "bad response token '" + t + "'");
    }
  }
  if (Lower(spec.response_tokens[0]) == Lower(spec.response_tokens[1])) {
    throw Error(ErrorCode::kInvalidArgument, "response tokens are ambiguous");
  }
}

std::optional<Choice> ParseJudgeResponse(std::string_view text, const JudgePromptSpec& spec,
                                         ReviewMode mode) {
  auto to_choice = [mode](std::size_t i) {
    if (mode == ReviewMode::kPreference2AFC) return i == 0 ? Choice::kA : Choice::kB;
    return i == 0 ? Choice::kCorrect : Choice::kIncorrect;
  };
  if (auto i = MatchToken(text, spec)) return to_choice(*i);
  // "Answer: X" on any line; the first such line wins.
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = Trim(text.substr(pos, nl - pos));
    if (Lower(line.substr(0, 7)) == "answer:") {
      const auto i = MatchToken(line.substr(7), spec);
      return i ? std::optional<Choice>(to_choice(*i)) : std::nullopt;
    }
    pos = nl + 1;
  }
  return std::nullopt;
}

HttpChatTransport::HttpChatTransport(EndpointDescriptor endpoint)
    : endpoint_(std::move(endpoint)) {
  if (endpoint_.base_url.empty()) throw Error(ErrorCode::kInvalidArgument, "empty endpoint URL");
  if (const char* tok = std::getenv(endpoint_.token_env.c_str()); tok != nullptr && *tok) {
    token_ = tok;
  }
}

std::string HttpChatTransport::EncodeRequest(const ChatRequest& request) {
  json content = json::array();
  for (const ChatPart& p : request.parts) {
    if (p.kind == ChatPart::Kind::kText) {
      content.push_back({{"type", "text"}, {"text", p.text}});
    } else {
      content.push_back({{"type", "image_url"}, {"image_url", {{"url", p.image_url}}}});
    }
  }
  const json body = {{"model", request.model},
                     {"temperature", 0},
                     {"messages", json::array({{{"role", "user"}, {"content", content}}})}};
  return body.dump();
}

std::string HttpChatTransport::DecodeResponse(std::string_view body) {
  try {
    const json j = json::parse(body);
    const json& content = j.at("choices").at(0).at("message").at("content");
    if (content.is_string()) return content.get<std::string>();
    std::string text;
    for (const json& part : content) {
      if (part.value("type", "") == "text") text += part.at("text").get<std::string>();
    }
    return text;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kTransportError,
                std::string("not a chat-completion response: ") + e.what());
  }
}

std::string HttpChatTransport::Complete(const ChatRequest& request) {
  httplib::Client client(endpoint_.base_url);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(endpoint_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  if (token_) client.set_bearer_token_auth(*token_);
  const auto res = client.Post(endpoint_.path, EncodeRequest(request), "application/json");
  if (!res) {
    throw Error(ErrorCode::kTransportError,
                endpoint_.base_url + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kTransportError,
                endpoint_.base_url + ": HTTP " + std::to_string(res->status));
  }
  return DecodeResponse(res->body);
}

std::filesystem::path MediaFramePath(const std::filesystem::path& root, const ClipRef& clip,
                                     int frame) {
  return root / clip.model / clip.clip_id / (std::to_string(frame) + ".jpg");
}

FrameSource MediaDirectoryFrames(std::filesystem::path root) {
  return [root = std::move(root)](const ClipRef& clip, int frame) -> std::optional<std::string> {
    std::ifstream in(MediaFramePath(root, clip, frame), std::ios::binary);
    if (!in) return std::nullopt;
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
}

std::string Base64Encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

ChatRequest BuildJudgeRequest(const ReviewTask& task, const JudgePromptSpec& prompt,
                              const FrameSource& frames, const std::string& model) {
  ChatRequest req;
  req.model = model;
  std::string intro = prompt.instruction_text;
  if (task.mode == ReviewMode::kCompliance && task.rule_context) {
    intro += "\nTraffic rule: " + *task.rule_context;
  }
  req.parts.push_back({ChatPart::Kind::kText, intro, {}});
  auto add_clip = [&](const ClipRef& clip, const std::string& label) {
    if (!label.empty()) req.parts.push_back({ChatPart::Kind::kText, label, {}});
    for (int f : prompt.SampledFrames()) {
      const auto bytes = frames(clip, f);
      if (!bytes) {
        throw Error(ErrorCode::kIoError, task.task_id + ": missing frame " + std::to_string(f) +
                                             " of " + clip.model + "/" + clip.clip_id);
      }
      req.parts.push_back({ChatPart::Kind::kImage, {}, "data:image/jpeg;base64," + Base64Encode(*bytes)});
    }
  };
  if (task.mode == ReviewMode::kPreference2AFC) {
    add_clip(task.OnScreen(ScreenSide::kA), "Video A:");
    add_clip(task.OnScreen(ScreenSide::kB), "Video B:");
  } else {
    add_clip(task.clip_a, "");
  }
  return req;
}

JudgeRun RunAiJudge(std::span<const ReviewTask> tasks, const JudgePromptSpec& prompt,
                    JudgeTransport& transport, const FrameSource& frames,
                    const JudgeOptions& options) {
  ValidatePromptSpec(prompt);
  if (options.max_retries < 0) throw Error(ErrorCode::kInvalidArgument, "negative retry count");
  const auto clock = options.clock ? options.clock : std::function<std::int64_t()>(SystemClockMs);
  JudgeRun run;
  for (const ReviewTask& task : tasks) {
    const ChatRequest req = BuildJudgeRequest(task, prompt, frames, options.model_name);
    const std::int64_t start = clock();
    std::optional<Choice> choice;
    for (int attempt = 0; attempt <= options.max_retries && !choice; ++attempt) {
      if (attempt > 0) ++run.retries;
      std::string answer;
      try {
        answer = transport.Complete(req);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kTransportError || attempt == options.max_retries) {
          throw Error(e.code(), task.task_id + ": " + e.detail());
        }
        continue;
      }
      choice = ParseJudgeResponse(answer, prompt, task.mode);
    }
    Verdict v;
    v.task_id = task.task_id;
    v.session_id = options.session_id;
    v.judge = {Judge::Kind::kModel, options.model_name};
    v.choice = choice.value_or(Choice::kAbstain);
    v.timestamp_ms = clock();
    v.latency_ms = v.timestamp_ms - start;
    if (!choice) ++run.abstained;
    run.verdicts.push_back(std::move(v));
  }
  return run;
}

}  // namespace scaeval
