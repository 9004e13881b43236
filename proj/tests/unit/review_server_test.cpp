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

#include <httplib.h>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "scaeval/review.hpp"
#include "scaeval/review_server.hpp"
#include "scaeval/verdict_store.hpp"
#include "test_util.hpp"

namespace scaeval {
namespace {

using json = nlohmann::json;

class ReviewServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::vector<ReviewItem> items = {
        {{"ours", "c1"}, ClipRef{"base", "c1"}, {}},
        {{"ours", "c2"}, ClipRef{"base", "c2"}, {}},
    };
    tasks_ = CreateReviewBatch(items, ReviewMode::kPreference2AFC, 4);
    std::vector<ReviewItem> rules = {{{"ours", "c3"}, {}, std::string("red light")}};
    auto comp = CreateReviewBatch(rules, ReviewMode::kCompliance, 4);
    tasks_.insert(tasks_.end(), comp.begin(), comp.end());
    for (const auto& [model, clip] : {std::pair{"ours", "c1"}, {"base", "c1"}}) {
      std::filesystem::create_directories(dir_.path() / "media" / model / clip);
      testing::WriteFile(dir_.path() / "media" / model / clip / "0.jpg", std::string(model) + "-jpeg");
    }
    store_ = std::make_unique<VerdictStore>(dir_ / "log.jsonl", tasks_);
    server_ = std::make_unique<ReviewServer>(*store_, ReviewServer::Options{dir_.path() / "media", 3});
    port_ = server_->Start("127.0.0.1", 0);
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override { server_->Stop(); }

  json Get(const std::string& path, int expect = 200) {
    const auto res = client_->Get(path);
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, expect) << path << " " << res->body;
    return json::parse(res->body);
  }
  json Post(const json& body, int expect) {
    const auto res = client_->Post("/api/verdicts", body.dump(), "application/json");
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, expect) << res->body;
    return json::parse(res->body);
  }

  testing::TempDir dir_;
  std::vector<ReviewTask> tasks_;
  std::unique_ptr<VerdictStore> store_;
  std::unique_ptr<ReviewServer> server_;
  std::unique_ptr<httplib::Client> client_;
  int port_ = 0;
};

TEST_F(ReviewServerTest, NextTaskIsBlinded) {
  const json j = Get("/api/tasks/next?session=s1&mode=2afc");
  EXPECT_EQ(j["remaining"], 2);
  const json& t = j["task"];
  EXPECT_EQ(t["task_id"], tasks_[0].task_id);
  EXPECT_EQ(t["mode"], "2afc");
  ASSERT_EQ(t["clips"].size(), 2u);
  EXPECT_EQ(t["clips"][0]["slot"], "A");
  EXPECT_EQ(t["clips"][0]["frames"].size(), 3u);
  EXPECT_EQ(t["clips"][1]["frames"][0], "/media/" + tasks_[0].task_id + "-b/0.jpg");
  EXPECT_EQ(t["choices"], json({"A", "B"}));
  const std::string text = j.dump();
  for (const char* secret : {"ours", "base", "c1", "swapped", "seed"}) {
    EXPECT_EQ(text.find(secret), std::string::npos) << secret;
  }
  const json c = Get("/api/tasks/next?session=s1&mode=compliance");
  EXPECT_EQ(c["task"]["rule_context"], "red light");
  EXPECT_EQ(c["task"]["clips"].size(), 1u);
  EXPECT_EQ(c["task"]["choices"], json({"correct", "incorrect"}));
}

TEST_F(ReviewServerTest, MediaAliasesFollowScreenSlots) {
  const auto& t = tasks_[0];
  const auto a = client_->Get("/media/" + t.task_id + "-a/0.jpg");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->status, 200);
  EXPECT_EQ(a->body, t.OnScreen(ScreenSide::kA).model + "-jpeg");
  EXPECT_EQ(a->get_header_value("Content-Type"), "image/jpeg");
  EXPECT_EQ(client_->Get("/media/" + t.task_id + "-b/0.jpg")->body,
            t.OnScreen(ScreenSide::kB).model + "-jpeg");
  EXPECT_EQ(client_->Get("/media/" + t.task_id + "-a/1.jpg")->status, 404);
  EXPECT_EQ(client_->Get("/media/nope-a/0.jpg")->status, 404);
  EXPECT_FALSE(server_->ResolveMedia(tasks_[2].task_id + "-b", 0).has_value());
  EXPECT_FALSE(server_->ResolveMedia(t.task_id + "-a", 3).has_value());
}

TEST_F(ReviewServerTest, SubmitFlowAndErrors) {
  const std::string id = tasks_[0].task_id;
  const json ok = Post({{"task_id", id}, {"session_id", "s1"}, {"choice", "A"}, {"latency_ms", 1200}}, 201);
  EXPECT_EQ(ok["status"], "recorded");
  EXPECT_EQ(Post({{"task_id", id}, {"session_id", "s1"}, {"choice", "B"}}, 409)["error"]["code"],
            "DuplicateVerdict");
  EXPECT_EQ(Post({{"task_id", "2afc-424242"}, {"session_id", "s1"}, {"choice", "A"}}, 404)["error"]["code"],
            "UnknownTask");
  EXPECT_EQ(Post({{"task_id", id}, {"session_id", "s2"}, {"choice", "abstain"}}, 400)["error"]["code"],
            "InvalidArgument");
  EXPECT_EQ(Post({{"task_id", id}, {"session_id", "s2"}, {"choice", "correct"}}, 400)["error"]["code"],
            "InvalidArgument");
  EXPECT_EQ(Post({{"task_id", id}}, 400)["error"]["code"], "MalformedRecord");
  const auto res = client_->Post("/api/verdicts", "{nope", "application/json");
  EXPECT_EQ(res->status, 400);

  const json next = Get("/api/tasks/next?session=s1&mode=2afc");
  EXPECT_EQ(next["task"]["task_id"], tasks_[1].task_id);
  EXPECT_EQ(next["remaining"], 1);
  EXPECT_EQ(Get("/api/tasks/next?session=s2&mode=2afc")["remaining"], 2);
  EXPECT_EQ(Get("/api/tasks/next?mode=2afc", 400)["error"]["code"], "InvalidArgument");
  EXPECT_EQ(Get("/api/tasks/next?session=s1&mode=rank", 400)["error"]["code"], "InvalidArgument");

  const auto stored = store_->snapshot();
  ASSERT_EQ(stored->size(), 1u);
  EXPECT_EQ((*stored)[0].latency_ms, 1200);
  EXPECT_EQ((*stored)[0].judge.kind, Judge::Kind::kHuman);
  EXPECT_EQ((*stored)[0].judge.id, "s1");
  EXPECT_GT((*stored)[0].timestamp_ms, 0);
}

TEST_F(ReviewServerTest, ExhaustedQueueAndStats) {
  for (const auto& t : tasks_) {
    if (t.mode != ReviewMode::kPreference2AFC) continue;
    const std::string pick = t.OnScreen(ScreenSide::kA).model == "ours" ? "A" : "B";
    Post({{"task_id", t.task_id}, {"session_id", "s1"}, {"choice", pick}}, 201);
  }
  Post({{"task_id", tasks_[2].task_id}, {"session_id", "s1"}, {"choice", "incorrect"}}, 201);
  const json done = Get("/api/tasks/next?session=s1&mode=2afc");
  EXPECT_TRUE(done["task"].is_null());
  EXPECT_EQ(done["remaining"], 0);

  const json pref = Get("/api/stats?mode=2afc");
  EXPECT_EQ(pref["verdicts"], 2);
  ASSERT_EQ(pref["groups"].size(), 1u);
  EXPECT_EQ(pref["groups"][0]["model_a"], "base");
  EXPECT_EQ(pref["groups"][0]["pct_b"], 100.0);
  const json comp = Get("/api/stats?mode=compliance");
  EXPECT_EQ(comp["groups"][0]["scenario"], "red light");
  EXPECT_EQ(comp["groups"][0]["pct_correct"], 0.0);
  EXPECT_EQ(comp["groups"][0]["n"], 1);
}

TEST_F(ReviewServerTest, HandlersWorkWithoutHttp) {
  int status = 0;
  const json j = json::parse(server_->StatsJson("2afc", status));
  EXPECT_EQ(status, 200);
  EXPECT_TRUE(j["groups"][0]["pct_a"].is_null());
  server_->SubmitVerdictJson(R"({"task_id":")" + tasks_[0].task_id + R"(","session_id":"x","choice":"B"})",
                             status);
  EXPECT_EQ(status, 201);
  server_->NextTaskJson("", "2afc", status);
  EXPECT_EQ(status, 400);
}

}  // namespace
}  // namespace scaeval
