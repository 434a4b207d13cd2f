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

#ifndef CPROF_ZEROSHOT_H_
#define CPROF_ZEROSHOT_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cprof/lexicon.h"

namespace cprof {

inline constexpr int kNumIdioms = 44;

// Agreement of one tweet with the 8 emotions (constants order) and the 44
// idioms (table order). Every value lies in [0, 1].
struct AgreementVector {
  std::array<double, kNumEmotions> emotions{};
  std::array<double, kNumIdioms> idioms{};

  bool operator==(const AgreementVector&) const = default;
};

// "This text expresses {emotion}."
std::string EmotionHypothesis(std::string_view emotion);

// Builtin backend. Content tokens are lowercased word tokens minus stop
// words; score = min(1, Jaccard + 0.5 * s) where s = 1 when the hypothesis
// word sequence occurs contiguously in the premise word sequence.
double LexiconEntailment(std::string_view premise, std::string_view hypothesis);

// Builtin emotion score: min(1, hits / 4), hits = premise words listed under
// that emotion in the emotion lexicon.
double LexiconEmotionScore(std::string_view premise, int emotion);

struct ScoreSummary {
  std::size_t items = 0;     // (tweet, hypothesis) pairs with a non-empty premise
  std::size_t failed = 0;    // imputed as 0
  std::size_t cache_hits = 0;
  std::size_t queried = 0;
};

class AgreementScorer {
 public:
  virtual ~AgreementScorer() = default;

  // Identifies the backend in cache keys and run metadata.
  virtual std::string BackendId() const = 0;

  // One vector per text, in input order. Empty texts get all zeros.
  virtual std::vector<AgreementVector> ScoreAll(
      const std::vector<std::string>& texts, int jobs,
      ScoreSummary* summary) = 0;
};

class BuiltinScorer : public AgreementScorer {
 public:
  std::string BackendId() const override { return "builtin_lexicon/1"; }
  std::vector<AgreementVector> ScoreAll(const std::vector<std::string>& texts,
                                        int jobs,
                                        ScoreSummary* summary) override;
  AgreementVector Score(std::string_view text) const;
};

struct RemoteOptions {
  std::string endpoint;          // e.g. http://127.0.0.1:8080
  int batch_size = 64;           // hypotheses per request, 1..64
  double timeout_seconds = 30;
  int attempts = 3;
  int backoff_ms = 200;          // doubled after each failed attempt
  int concurrency = 4;           // requests in flight
  double max_failure_rate = 0.01;
  std::optional<std::filesystem::path> cache_path;
  std::string auth_token;        // sent as X-Auth-Token when non-empty
};

struct SidecarMeta {
  std::string model_id;
  std::string convention;
};

// Client for the NLI sidecar: POST /v1/entail, GET /healthz, GET /v1/meta.
class NliClient {
 public:
  explicit NliClient(RemoteOptions options);

  // Throws IoError when the service is unreachable or not healthy.
  void CheckHealth() const;
  SidecarMeta FetchMeta() const;

  // One request with retries. Throws IoError after the last failed attempt
  // and SchemaError on a malformed response.
  std::vector<double> Entail(std::string_view premise,
                             const std::vector<std::string>& hypotheses) const;

  const RemoteOptions& options() const { return options_; }

 private:
  RemoteOptions options_;
  std::string host_;  // scheme://host:port
  std::string base_path_;
};

// Remote backend with a content-addressed score cache. Each tweet's 52
// hypotheses are sent in batches of options.batch_size; scores for pairs
// already in the cache are never re-queried. New cache records are appended
// in tweet order after each chunk so an interrupted run resumes cleanly.
class RemoteScorer : public AgreementScorer {
 public:
  // Runs the health check and reads /v1/meta.
  explicit RemoteScorer(RemoteOptions options);

  std::string BackendId() const override;
  std::vector<AgreementVector> ScoreAll(const std::vector<std::string>& texts,
                                        int jobs,
                                        ScoreSummary* summary) override;

  const SidecarMeta& meta() const { return meta_; }

 private:
  NliClient client_;
  SidecarMeta meta_;
};

// sha256 over backend id, premise and hypothesis (0x1f separated).
std::string ScoreCacheKey(std::string_view backend_id, std::string_view premise,
                          std::string_view hypothesis);

}  // namespace cprof

#endif  // CPROF_ZEROSHOT_H_
