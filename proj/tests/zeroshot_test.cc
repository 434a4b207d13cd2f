// Copyright 2026 The cprof Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cprof/zeroshot.h"

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "cprof/common.h"
#include "cprof/lexicon.h"

namespace cprof {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int IdiomIndex(std::string_view idiom) {
  const auto& idioms = Lexicon::Default().Idioms();
  const auto it = std::find(idioms.begin(), idioms.end(), idiom);
  if (it == idioms.end()) throw std::runtime_error("unknown idiom " + std::string(idiom));
  return static_cast<int>(it - idioms.begin());
}

TEST(LexiconEntailment, FormulaExamples) {
  EXPECT_EQ(LexiconEntailment("", "Follow the money"), 0.0);
  EXPECT_EQ(LexiconEntailment("follow the money", "follow the money"), 1.0);
  EXPECT_EQ(LexiconEntailment("cats purr", "dogs bark"), 0.0);
  EXPECT_EQ(LexiconEntailment("they lie", "They don't tell us"), 0.0);
  EXPECT_GE(LexiconEntailment("wake up people, wake up", "Wake up!"), 0.9);
  EXPECT_GE(LexiconEntailment("follow the money, always", "Follow the money"), 0.9);
  EXPECT_LE(LexiconEntailment("nice weather today", "Trust no one"), 0.1);
}

TEST(BuiltinScorer, EmptyTweetScoresZero) {
  const AgreementVector v = BuiltinScorer().Score("");
  for (double x : v.emotions) EXPECT_EQ(x, 0.0);
  for (double x : v.idioms) EXPECT_EQ(x, 0.0);
}

TEST(BuiltinScorer, DisgustDominates) {
  const AgreementVector v = BuiltinScorer().Score("I hate this disgusting filth");
  const auto top = std::max_element(v.emotions.begin(), v.emotions.end()) - v.emotions.begin();
  EXPECT_EQ(top, 4);
  for (int e = 0; e < kNumEmotions; ++e) {
    if (e != 4) EXPECT_LT(v.emotions[e], v.emotions[4]);
  }
}

TEST(BuiltinScorer, IdiomRowsAlign) {
  const AgreementVector v = BuiltinScorer().Score("follow the money, always");
  EXPECT_GE(v.idioms[IdiomIndex("Follow the money")], 0.9);
}

TEST(BuiltinScorerProperty, RangeDeterminismAndOrderFreeEmotions) {
  Rng rng(8);
  const std::vector<std::string> words = {"hate", "love", "fear", "money", "truth", "they",
                                          "wake", "up", "trust", "no", "one", "happy", "!"};
  BuiltinScorer scorer;
  std::vector<std::string> texts;
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> picked;
    const int n = static_cast<int>(rng.Below(12));
    for (int k = 0; k < n; ++k) picked.push_back(words[rng.Below(words.size())]);
    std::string text;
    for (const auto& w : picked) text += w + " ";
    const AgreementVector v = scorer.Score(text);
    for (double x : v.emotions) ASSERT_TRUE(x >= 0.0 && x <= 1.0);
    for (double x : v.idioms) ASSERT_TRUE(x >= 0.0 && x <= 1.0);
    ASSERT_EQ(scorer.Score(text), v);
    rng.Shuffle(picked);
    std::string shuffled;
    for (const auto& w : picked) shuffled += w + " ";
    ASSERT_EQ(scorer.Score(shuffled).emotions, v.emotions);
    texts.push_back(text);
  }
  const auto serial = scorer.ScoreAll(texts, 1, nullptr);
  const auto parallel = scorer.ScoreAll(texts, 4, nullptr);
  EXPECT_EQ(serial, parallel);
}

// Deterministic stand-in for the sidecar's model.
double MockScore(const std::string& premise, const std::string& hypothesis) {
  return static_cast<double>((premise.size() * 7 + hypothesis.size()) % 11) / 10.0;
}

class MockSidecar {
 public:
  std::atomic<int> fail_next{0};   // answer this many entail calls with 503
  std::atomic<int> status_for_failures{503};
  std::atomic<int> entail_calls{0};
  std::atomic<int> hypotheses_seen{0};
  std::atomic<int> max_batch{0};
  std::atomic<bool> drop_one_score{false};
  std::atomic<bool> out_of_range{false};
  std::atomic<bool> healthy{true};
  std::string required_token;

  MockSidecar() {
    server_.Get("/healthz", [this](const httplib::Request& req, httplib::Response& res) {
      if (!Authorized(req, res)) return;
      res.status = healthy ? 200 : 503;
      res.set_content(R"({"status":"ok"})", "application/json");
    });
    server_.Get("/v1/meta", [this](const httplib::Request& req, httplib::Response& res) {
      if (!Authorized(req, res)) return;
      res.set_content(R"({"model_id":"mock-nli","convention":"entail_over_entail_contra"})",
                      "application/json");
    });
    server_.Post("/v1/entail", [this](const httplib::Request& req, httplib::Response& res) {
      if (!Authorized(req, res)) return;
      ++entail_calls;
      if (fail_next > 0) {
        --fail_next;
        res.status = status_for_failures;
        return;
      }
      const json body = json::parse(req.body);
      const std::string premise = body.at("premise");
      const auto hyps = body.at("hypotheses").get<std::vector<std::string>>();
      hypotheses_seen += static_cast<int>(hyps.size());
      int seen = max_batch.load();
      while (static_cast<int>(hyps.size()) > seen &&
             !max_batch.compare_exchange_weak(seen, static_cast<int>(hyps.size()))) {
      }
      std::vector<double> scores;
      for (const auto& h : hyps) scores.push_back(MockScore(premise, h));
      if (drop_one_score) scores.pop_back();
      if (out_of_range) scores[0] = 1.5;
      res.set_content(json{{"scores", scores}, {"model_id", "mock-nli"}}.dump(),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockSidecar() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  bool Authorized(const httplib::Request& req, httplib::Response& res) {
    if (required_token.empty() || req.get_header_value("X-Auth-Token") == required_token) {
      return true;
    }
    res.status = 401;
    return false;
  }

  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

RemoteOptions FastOptions(const MockSidecar& mock) {
  RemoteOptions o;
  o.endpoint = mock.endpoint();
  o.timeout_seconds = 5;
  o.backoff_ms = 1;
  o.concurrency = 2;
  return o;
}

std::vector<std::string> AllHypotheses() {
  std::vector<std::string> out;
  for (const auto& e : Lexicon::Default().EmotionLabels()) out.push_back(EmotionHypothesis(e));
  for (const auto& i : Lexicon::Default().Idioms()) out.push_back(i);
  return out;
}

TEST(NliClient, HealthMetaAndEntail) {
  MockSidecar mock;
  NliClient client(FastOptions(mock));
  EXPECT_NO_THROW(client.CheckHealth());
  const SidecarMeta meta = client.FetchMeta();
  EXPECT_EQ(meta.model_id, "mock-nli");
  EXPECT_EQ(meta.convention, "entail_over_entail_contra");
  const std::vector<std::string> hyps = {"This text expresses joy.", "Follow the money"};
  const auto scores = client.Entail("I am delighted", hyps);
  ASSERT_EQ(scores.size(), 2u);
  EXPECT_EQ(scores[0], MockScore("I am delighted", hyps[0]));
  EXPECT_EQ(scores[1], MockScore("I am delighted", hyps[1]));
}

TEST(NliClient, UnhealthyOrUnreachableServiceThrows) {
  MockSidecar mock;
  mock.healthy = false;
  EXPECT_THROW(NliClient(FastOptions(mock)).CheckHealth(), IoError);
  RemoteOptions nowhere;
  nowhere.endpoint = "http://127.0.0.1:1";
  nowhere.timeout_seconds = 1;
  EXPECT_THROW(NliClient(nowhere).CheckHealth(), IoError);
}

TEST(NliClient, RetriesTransientFailures) {
  MockSidecar mock;
  mock.fail_next = 2;
  NliClient client(FastOptions(mock));
  EXPECT_EQ(client.Entail("p", {"h"}).size(), 1u);
  EXPECT_EQ(mock.entail_calls, 3);

  mock.status_for_failures = 429;
  mock.fail_next = 3;
  mock.entail_calls = 0;
  EXPECT_THROW(client.Entail("p", {"h"}), IoError);
  EXPECT_EQ(mock.entail_calls, 3);
}

TEST(NliClient, ClientErrorsAreNotRetried) {
  MockSidecar mock;
  mock.status_for_failures = 400;
  mock.fail_next = 5;
  NliClient client(FastOptions(mock));
  EXPECT_THROW(client.Entail("p", {"h"}), IoError);
  EXPECT_EQ(mock.entail_calls, 1);
}

TEST(NliClient, RejectsMisalignedAndOutOfRangeScores) {
  MockSidecar mock;
  NliClient client(FastOptions(mock));
  mock.drop_one_score = true;
  EXPECT_THROW(client.Entail("p", {"a", "b"}), SchemaError);
  mock.drop_one_score = false;
  mock.out_of_range = true;
  EXPECT_THROW(client.Entail("p", {"a", "b"}), SchemaError);
}

TEST(NliClient, EnforcesBatchLimit) {
  MockSidecar mock;
  RemoteOptions o = FastOptions(mock);
  o.batch_size = 2;
  NliClient client(o);
  EXPECT_THROW(client.Entail("p", {"a", "b", "c"}), ContractError);
  EXPECT_THROW(client.Entail("p", {}), ContractError);
}

TEST(NliClient, SendsAuthToken) {
  MockSidecar mock;
  mock.required_token = "s3cret";
  RemoteOptions o = FastOptions(mock);
  EXPECT_THROW(NliClient(o).CheckHealth(), IoError);
  o.auth_token = "s3cret";
  EXPECT_NO_THROW(NliClient(o).CheckHealth());
}

class RemoteScorerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    cache_ = fs::temp_directory_path() /
             ("cprof_cache_" + std::string(::testing::UnitTest::GetInstance()
                                                ->current_test_info()->name()) + ".tsv");
    fs::remove(cache_);
  }
  void TearDown() override { fs::remove(cache_); }
  fs::path cache_;
};

TEST_F(RemoteScorerTest, AlignsScoresAndUsesCache) {
  MockSidecar mock;
  RemoteOptions o = FastOptions(mock);
  o.batch_size = 20;
  o.cache_path = cache_;
  const std::vector<std::string> texts = {"They lie to us!", "", "Follow the money"};
  const auto hyps = AllHypotheses();
  ASSERT_EQ(hyps.size(), 52u);

  RemoteScorer scorer(o);
  EXPECT_EQ(scorer.BackendId(), "remote_nli/mock-nli/entail_over_entail_contra");
  ScoreSummary first;
  const auto scores = scorer.ScoreAll(texts, 1, &first);
  ASSERT_EQ(scores.size(), 3u);
  for (std::size_t t = 0; t < texts.size(); ++t) {
    for (int e = 0; e < kNumEmotions; ++e) {
      const double want = texts[t].empty() ? 0.0 : MockScore(texts[t], hyps[e]);
      EXPECT_EQ(scores[t].emotions[e], want);
    }
    for (int i = 0; i < kNumIdioms; ++i) {
      const double want = texts[t].empty() ? 0.0 : MockScore(texts[t], hyps[kNumEmotions + i]);
      EXPECT_EQ(scores[t].idioms[i], want);
    }
  }
  EXPECT_EQ(first.items, 104u);
  EXPECT_EQ(first.queried, 104u);
  EXPECT_EQ(first.failed, 0u);
  EXPECT_LE(mock.max_batch, 20);
  EXPECT_EQ(mock.hypotheses_seen, 104);

  // A second scorer over the same cache never reaches the model.
  RemoteScorer again(o);
  ScoreSummary second;
  const auto cached = again.ScoreAll(texts, 1, &second);
  EXPECT_EQ(cached, scores);
  EXPECT_EQ(second.cache_hits, 104u);
  EXPECT_EQ(second.queried, 0u);
  EXPECT_EQ(mock.hypotheses_seen, 104);

  std::size_t lines = 0;
  for (const auto& line : SplitString(ReadFile(cache_), '\n')) lines += line.empty() ? 0 : 1;
  EXPECT_EQ(lines, 104u);
}

TEST_F(RemoteScorerTest, ConcurrencyDoesNotChangeResults) {
  MockSidecar mock;
  RemoteOptions o = FastOptions(mock);
  std::vector<std::string> texts;
  for (int i = 0; i < 12; ++i) texts.push_back("tweet number " + std::string(i, 'x'));
  o.concurrency = 1;
  const auto serial = RemoteScorer(o).ScoreAll(texts, 1, nullptr);
  o.concurrency = 4;
  const auto parallel = RemoteScorer(o).ScoreAll(texts, 1, nullptr);
  EXPECT_EQ(serial, parallel);
}

TEST_F(RemoteScorerTest, FailureRateAbortsButKeepsSuccessfulScores) {
  MockSidecar mock;
  RemoteOptions o = FastOptions(mock);
  o.attempts = 1;
  o.concurrency = 1;
  o.cache_path = cache_;
  RemoteScorer scorer(o);
  mock.fail_next = 1;  // first batch of the first tweet fails
  ScoreSummary summary;
  EXPECT_THROW(scorer.ScoreAll({"a tweet", "another tweet"}, 1, &summary), Error);
  EXPECT_EQ(summary.failed, 52u);
  EXPECT_EQ(summary.items, 104u);
  EXPECT_TRUE(fs::exists(cache_));

  o.max_failure_rate = 1.0;
  mock.fail_next = 1;
  ScoreSummary tolerant;
  const auto scores = RemoteScorer(o).ScoreAll({"third tweet"}, 1, &tolerant);
  EXPECT_EQ(tolerant.failed, 52u);
  EXPECT_EQ(scores[0].emotions[0], 0.0);
}

TEST(ScoreCacheKey, DistinguishesFields) {
  EXPECT_EQ(ScoreCacheKey("b", "p", "h"), ScoreCacheKey("b", "p", "h"));
  EXPECT_NE(ScoreCacheKey("b", "p", "h"), ScoreCacheKey("b", "ph", ""));
  EXPECT_NE(ScoreCacheKey("b1", "p", "h"), ScoreCacheKey("b2", "p", "h"));
}

}  // namespace
}  // namespace cprof
