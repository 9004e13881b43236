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

#ifndef SCAEVAL_REVIEW_SERVER_HPP_
#define SCAEVAL_REVIEW_SERVER_HPP_

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "scaeval/verdict_store.hpp"

namespace scaeval {

// HTTP front of the review backbone.
//
//   GET  /api/tasks/next?session=<id>&mode=<2afc|compliance>
//   POST /api/verdicts        {task_id, session_id, choice, latency_ms?, reviewer_id?}
//   GET  /api/stats?mode=<m>
//   GET  /media/<alias>/<frame>.jpg
//
// Task views never carry model names or clip ids: media is addressed through
// per-task aliases (<task_id>-a / <task_id>-b by screen slot). Errors are
// returned as {"error": {"code": <ErrorCode name>, "message": ...}}.
class ReviewServer {
 public:
  struct Options {
    std::filesystem::path media_root;
    int frames_per_clip = 25;
  };

  ReviewServer(VerdictStore& store, Options options);
  ~ReviewServer();

  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  // Binds and serves on a background thread. Returns the bound port
  // (useful with port 0). Throws kIoError when binding fails.
  int Start(const std::string& host, int port);
  // Serves on the calling thread until Stop().
  void Listen(const std::string& host, int port);
  void Stop();

  // Handlers without the HTTP layer; each returns a JSON body and sets
  // `status`.
  std::string NextTaskJson(const std::string& session, const std::string& mode, int& status) const;
  std::string SubmitVerdictJson(const std::string& body, int& status);
  std::string StatsJson(const std::string& mode, int& status) const;
  // Resolves a media alias to a file; nullopt when unknown.
  std::optional<std::filesystem::path> ResolveMedia(const std::string& alias, int frame) const;

 private:
  struct Impl;
  VerdictStore& store_;
  Options options_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace scaeval

#endif  // SCAEVAL_REVIEW_SERVER_HPP_
