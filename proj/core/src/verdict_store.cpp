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

#include "scaeval/verdict_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>

#include "scaeval/error.hpp"

namespace scaeval {

namespace {

struct ParsedLog {
  std::vector<Verdict> verdicts;
  std::size_t valid_bytes = 0;
  std::size_t total_bytes = 0;
};

// A trailing record is torn if it lacks its newline or fails to parse.
// A bad record before the tail is corruption, not a torn write.
ParsedLog ParseLog(const std::string& content, const std::filesystem::path& path) {
  ParsedLog out;
  out.total_bytes = content.size();
  std::size_t pos = 0;
  while (pos < content.size()) {
    const std::size_t nl = content.find('\n', pos);
    if (nl == std::string::npos) break;
    const std::string_view line(content.data() + pos, nl - pos);
    const bool last = nl + 1 == content.size();
    if (!line.empty()) {
      try {
        out.verdicts.push_back(VerdictFromJson(line));
      } catch (const Error& e) {
        if (last) break;
        throw Error(ErrorCode::kMalformedRecord,
                    path.string() + " offset " + std::to_string(pos) + ": " + e.detail());
      }
    }
    pos = nl + 1;
    out.valid_bytes = pos;
  }
  return out;
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

[[noreturn]] void ThrowErrno(const std::string& what) {
  throw Error(ErrorCode::kIoError, what + ": " + std::strerror(errno));
}

}  // namespace

VerdictStore::VerdictStore(std::filesystem::path log_path, std::vector<ReviewTask> tasks)
    : path_(std::move(log_path)), tasks_(std::move(tasks)) {
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    ValidateTask(tasks_[i]);
    if (!task_index_.emplace(tasks_[i].task_id, i).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate task id " + tasks_[i].task_id);
    }
  }
  const ParsedLog parsed = ParseLog(Slurp(path_), path_);
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) ThrowErrno("cannot open " + path_.string());
  if (parsed.valid_bytes < parsed.total_bytes) {
    if (::ftruncate(fd_, static_cast<off_t>(parsed.valid_bytes)) != 0) {
      ::close(fd_);
      ThrowErrno("cannot truncate " + path_.string());
    }
    ::fsync(fd_);
    recovered_bytes_ = parsed.total_bytes - parsed.valid_bytes;
  }
  for (const Verdict& v : parsed.verdicts) {
    if (!task_index_.contains(v.task_id)) {
      ::close(fd_);
      throw Error(ErrorCode::kUnknownTask, path_.string() + ": verdict for unknown task " + v.task_id);
    }
    answered_.emplace(v.task_id, v.session_id);
  }
  snapshot_ = std::make_shared<const std::vector<Verdict>>(parsed.verdicts);
}

VerdictStore::~VerdictStore() {
  if (fd_ >= 0) ::close(fd_);
}

void VerdictStore::Record(const Verdict& verdict) {
  const ReviewTask* task = FindTask(verdict.task_id);
  if (task == nullptr) throw Error(ErrorCode::kUnknownTask, "unknown task " + verdict.task_id);
  ValidateVerdict(*task, verdict);

  std::lock_guard<std::mutex> lock(write_mu_);
  const auto key = std::make_pair(verdict.task_id, verdict.session_id);
  if (answered_.contains(key)) {
    throw Error(ErrorCode::kDuplicateVerdict,
                "session " + verdict.session_id + " already answered " + verdict.task_id);
  }
  const std::string line = VerdictToJson(verdict) + "\n";
  std::size_t to_write = line.size();
  const bool torn = torn_write_bytes_ > 0;
  if (torn) {
    to_write = std::min(torn_write_bytes_, line.size());
    torn_write_bytes_ = 0;
  }
  const ssize_t n = ::write(fd_, line.data(), to_write);
  if (n < 0) ThrowErrno("write to " + path_.string());
  if (torn) {
    ::fsync(fd_);
    throw Error(ErrorCode::kIoError, "injected torn write");
  }
  if (static_cast<std::size_t>(n) != line.size()) {
    throw Error(ErrorCode::kIoError, "short write to " + path_.string());
  }
  if (::fsync(fd_) != 0) ThrowErrno("fsync " + path_.string());

  answered_.insert(key);
  std::lock_guard<std::mutex> snap_lock(snapshot_mu_);
  auto next = std::make_shared<std::vector<Verdict>>(*snapshot_);
  next->push_back(verdict);
  snapshot_ = std::move(next);
}

VerdictStore::Snapshot VerdictStore::snapshot() const {
  std::lock_guard<std::mutex> lock(snapshot_mu_);
  return snapshot_;
}

const ReviewTask* VerdictStore::FindTask(const std::string& task_id) const {
  auto it = task_index_.find(task_id);
  return it == task_index_.end() ? nullptr : &tasks_[it->second];
}

bool VerdictStore::HasVerdict(const std::string& task_id, const std::string& session_id) const {
  std::lock_guard<std::mutex> lock(write_mu_);
  return answered_.contains({task_id, session_id});
}

std::vector<Verdict> VerdictStore::ReadLog(const std::filesystem::path& log_path) {
  if (!std::filesystem::exists(log_path)) {
    throw Error(ErrorCode::kIoError, "cannot read " + log_path.string());
  }
  return ParseLog(Slurp(log_path), log_path).verdicts;
}

}  // namespace scaeval
