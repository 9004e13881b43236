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

#ifndef SCAEVAL_VERDICT_STORE_HPP_
#define SCAEVAL_VERDICT_STORE_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "scaeval/review.hpp"

namespace scaeval {

// Append-only verdict log, one JSON record per line. Each record is written
// with a single O_APPEND write and fsync'd before Record() returns. On open,
// a torn trailing record (no newline, or not parseable) is truncated away,
// so after a crash a verdict is either fully present or absent.
//
// Writers are serialized; readers take immutable snapshots.
class VerdictStore {
 public:
  VerdictStore(std::filesystem::path log_path, std::vector<ReviewTask> tasks);
  ~VerdictStore();

  VerdictStore(const VerdictStore&) = delete;
  VerdictStore& operator=(const VerdictStore&) = delete;

  // Throws kUnknownTask, kDuplicateVerdict, kInvalidArgument, kIoError.
  void Record(const Verdict& verdict);

  using Snapshot = std::shared_ptr<const std::vector<Verdict>>;
  Snapshot snapshot() const;

  const std::vector<ReviewTask>& tasks() const { return tasks_; }
  const ReviewTask* FindTask(const std::string& task_id) const;
  bool HasVerdict(const std::string& task_id, const std::string& session_id) const;

  // Bytes dropped from a torn tail when the log was opened.
  std::size_t recovered_bytes() const { return recovered_bytes_; }

  // Test hook: write only the first `bytes` of the next record, then fail
  // as if the process died. The in-memory state is left untouched.
  void InjectTornWriteForTesting(std::size_t bytes) { torn_write_bytes_ = bytes; }

  // Reads a log without opening it for writing; torn tails are skipped.
  static std::vector<Verdict> ReadLog(const std::filesystem::path& log_path);

 private:
  std::filesystem::path path_;
  std::vector<ReviewTask> tasks_;
  std::map<std::string, std::size_t> task_index_;
  int fd_ = -1;
  std::size_t recovered_bytes_ = 0;
  std::size_t torn_write_bytes_ = 0;

  mutable std::mutex write_mu_;
  std::set<std::pair<std::string, std::string>> answered_;
  mutable std::mutex snapshot_mu_;
  Snapshot snapshot_;
};

}  // namespace scaeval

#endif  // SCAEVAL_VERDICT_STORE_HPP_
