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

#include "scaeval/review_server.hpp"

#include <chrono>
#include <map>
#include <set>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "scaeval/error.hpp"
#include "scaeval/judge.hpp"

namespace scaeval {

namespace {

using json = nlohmann::json;

int HttpStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownTask: return 404;
    case ErrorCode::kDuplicateVerdict: return 409;
    case ErrorCode::kIoError: return 500;
    default: return 400;
  }
}

std::string ErrorBody(ErrorCode code, const std::string& message) {
  return json{{"error", {{"code", ErrorCodeName(code)}, {"message", message}}}}.dump();
}

std::int64_t NowMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

struct ReviewServer::Impl {
  httplib::Server server;
  std::thread thread;
};

ReviewServer::ReviewServer(VerdictStore& store, Options options)
    : store_(store), options_(std::move(options)), impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;
  auto reply = [](httplib::Response& res, int status, const std::string& body) {
    res.status = status;
    res.set_content(body, "application/json; charset=utf-8");
  };
  srv.Get("/api/tasks/next", [this, reply](const httplib::Request& req, httplib::Response& res) {
    int status = 200;
    const std::string body =
        NextTaskJson(req.get_param_value("session"), req.get_param_value("mode"), status);
    reply(res, status, body);
  });
  srv.Post("/api/verdicts", [this, reply](const httplib::Request& req, httplib::Response& res) {
    int status = 201;
    const std::string body = SubmitVerdictJson(req.body, status);
    reply(res, status, body);
  });
  srv.Get("/api/stats", [this, reply](const httplib::Request& req, httplib::Response& res) {
    int status = 200;
    const std::string body = StatsJson(req.get_param_value("mode"), status);
    reply(res, status, body);
  });
  srv.Get(R"(/media/([^/]+)/(\d{1,6})\.jpg)",
          [this, reply](const httplib::Request& req, httplib::Response& res) {
            const auto path = ResolveMedia(req.matches[1], std::stoi(req.matches[2]));
            std::ifstream in;
            if (path) in.open(*path, std::ios::binary);
            if (!path || !in) {
              reply(res, 404, ErrorBody(ErrorCode::kIoError, "no such media"));
              return;
            }
            std::string bytes((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
            res.status = 200;
            res.set_content(std::move(bytes), "image/jpeg");
          });
}

ReviewServer::~ReviewServer() { Stop(); }

int ReviewServer::Start(const std::string& host, int port) {
  auto& srv = impl_->server;
  int bound = port;
  if (port == 0) {
    bound = srv.bind_to_any_port(host);
  } else if (!srv.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw Error(ErrorCode::kIoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([&srv] { srv.listen_after_bind(); });
  srv.wait_until_ready();
  return bound;
}

void ReviewServer::Listen(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) {
    throw Error(ErrorCode::kIoError, "cannot listen on " + host + ":" + std::to_string(port));
  }
}

void ReviewServer::Stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string ReviewServer::NextTaskJson(const std::string& session, const std::string& mode_name,
                                       int& status) const {
  try {
    if (session.empty()) throw Error(ErrorCode::kInvalidArgument, "missing session parameter");
    const ReviewMode mode = ParseReviewMode(mode_name.empty() ? "2afc" : mode_name);
    const ReviewTask* next = nullptr;
    std::int64_t remaining = 0;
    for (const ReviewTask& t : store_.tasks()) {
      if (t.mode != mode || store_.HasVerdict(t.task_id, session)) continue;
      if (next == nullptr) next = &t;
      ++remaining;
    }
    status = 200;
    if (next == nullptr) return json{{"task", nullptr}, {"remaining", 0}}.dump();
    json clips = json::array();
    const int slots = mode == ReviewMode::kPreference2AFC ? 2 : 1;
    for (int s = 0; s < slots; ++s) {
      const std::string alias = next->task_id + (s == 0 ? "-a" : "-b");
      json frames = json::array();
      for (int f = 0; f < options_.frames_per_clip; ++f) {
        frames.push_back("/media/" + alias + "/" + std::to_string(f) + ".jpg");
      }
      clips.push_back({{"slot", s == 0 ? "A" : "B"}, {"frames", frames}});
    }
    json task = {{"task_id", next->task_id}, {"mode", ReviewModeName(mode)}, {"clips", clips}};
    if (next->rule_context) task["rule_context"] = *next->rule_context;
    json choices = json::array();
    if (mode == ReviewMode::kPreference2AFC) {
      choices = {"A", "B"};
    } else {
      choices = {"correct", "incorrect"};
    }
    task["choices"] = choices;
    return json{{"task", task}, {"remaining", remaining}}.dump();
  } catch (const Error& e) {
    status = HttpStatus(e.code());
    return ErrorBody(e.code(), e.detail());
  }
}

std::string ReviewServer::SubmitVerdictJson(const std::string& body, int& status) {
  try {
    json j;
    try {
      j = json::parse(body);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedRecord, std::string("bad JSON body: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::kMalformedRecord, "body must be an object");
    Verdict v;
    try {
      v.task_id = j.at("task_id").get<std::string>();
      v.session_id = j.at("session_id").get<std::string>();
      v.choice = ParseChoice(j.at("choice").get<std::string>());
      v.latency_ms = j.value("latency_ms", std::int64_t{0});
      v.judge = {Judge::Kind::kHuman, j.value("reviewer_id", v.session_id)};
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedRecord, e.what());
    }
    if (v.choice == Choice::kAbstain) {
      throw Error(ErrorCode::kInvalidArgument, "human reviewers cannot abstain");
    }
    if (v.latency_ms < 0) throw Error(ErrorCode::kInvalidArgument, "negative latency");
    v.timestamp_ms = NowMs();
    store_.Record(v);
    status = 201;
    return json{{"status", "recorded"}, {"task_id", v.task_id}}.dump();
  } catch (const Error& e) {
    status = HttpStatus(e.code());
    return ErrorBody(e.code(), e.detail());
  }
}

std::string ReviewServer::StatsJson(const std::string& mode_name, int& status) const {
  try {
    const ReviewMode mode = ParseReviewMode(mode_name.empty() ? "2afc" : mode_name);
    const auto verdicts = store_.snapshot();
    const auto& tasks = store_.tasks();
    json out = {{"mode", ReviewModeName(mode)}, {"verdicts", 0}};
    json groups = json::array();
    std::int64_t total = 0;
    for (const Verdict& v : *verdicts) {
      const ReviewTask* t = store_.FindTask(v.task_id);
      if (t != nullptr && t->mode == mode) ++total;
    }
    out["verdicts"] = total;
    if (mode == ReviewMode::kPreference2AFC) {
      std::set<std::pair<std::string, std::string>> pairs;
      for (const ReviewTask& t : tasks) {
        if (t.mode != mode) continue;
        pairs.insert(std::minmax(t.clip_a.model, t.clip_b->model));
      }
      for (const auto& [a, b] : pairs) {
        json g = {{"model_a", a}, {"model_b", b}};
        try {
          const PreferenceStats s = ComputePreferenceStats(tasks, *verdicts, a, b);
          g.update({{"pct_a", s.pct_a}, {"pct_b", s.pct_b}, {"n", s.n}, {"abstained", s.abstained}});
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kEmptyInput) throw;
          g.update({{"pct_a", nullptr}, {"pct_b", nullptr}, {"n", 0}, {"abstained", 0}});
        }
        groups.push_back(g);
      }
    } else {
      std::set<std::pair<std::string, std::string>> keys;
      for (const ReviewTask& t : tasks) {
        if (t.mode == mode) keys.emplace(t.rule_context.value_or(""), t.clip_a.model);
      }
      for (const auto& [scenario, model] : keys) {
        json g = {{"scenario", scenario}, {"model", model}};
        std::int64_t n_correct = 0;
        std::int64_t n = 0;
        std::int64_t abstained = 0;
        for (const Verdict& v : *verdicts) {
          const ReviewTask* t = store_.FindTask(v.task_id);
          if (t == nullptr || t->mode != mode || t->rule_context.value_or("") != scenario ||
              t->clip_a.model != model) {
            continue;
          }
          if (v.choice == Choice::kAbstain) {
            ++abstained;
          } else {
            ++n;
            if (v.choice == Choice::kCorrect) ++n_correct;
          }
        }
        g["n"] = n;
        g["n_correct"] = n_correct;
        g["abstained"] = abstained;
        g["pct_correct"] = n > 0 ? json(100.0 * static_cast<double>(n_correct) /
                                        static_cast<double>(n))
                                 : json(nullptr);
        groups.push_back(g);
      }
    }
    out["groups"] = groups;
    status = 200;
    return out.dump();
  } catch (const Error& e) {
    status = HttpStatus(e.code());
    return ErrorBody(e.code(), e.detail());
  }
}

std::optional<std::filesystem::path> ReviewServer::ResolveMedia(const std::string& alias,
                                                                int frame) const {
  if (frame < 0 || frame >= options_.frames_per_clip || alias.size() < 3) return std::nullopt;
  const std::string suffix = alias.substr(alias.size() - 2);
  if (suffix != "-a" && suffix != "-b") return std::nullopt;
  const ReviewTask* task = store_.FindTask(alias.substr(0, alias.size() - 2));
  if (task == nullptr) return std::nullopt;
  if (suffix == "-b" && task->mode != ReviewMode::kPreference2AFC) return std::nullopt;
  const ClipRef& clip = task->OnScreen(suffix == "-a" ? ScreenSide::kA : ScreenSide::kB);
  return MediaFramePath(options_.media_root, clip, frame);
}

}  // namespace scaeval
