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

#ifndef CPROF_PIPELINE_H_
#define CPROF_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cprof/corpus.h"
#include "cprof/models.h"

namespace cprof {

// Everything a run needs. Loaded from a JSON config file; see README for the
// schema. Relative paths are resolved against the config file's directory.
struct RunConfig {
  std::filesystem::path conspiracy_input;
  std::filesystem::path control_input;
  std::filesystem::path out_dir = "run";
  uint64_t seed = 42;
  int jobs = 1;

  PreprocessOptions preprocess;
  bool balance = true;

  std::string backend = "builtin";  // builtin | remote
  std::string endpoint;
  int batch_size = 64;
  double timeout_seconds = 30;
  int attempts = 3;
  int backoff_ms = 200;
  int concurrency = 4;
  double max_failure_rate = 0.01;
  std::string auth_token_env;  // name of the variable holding the token

  // featurize fails on a tweet without scores; false imputes zeros.
  bool strict_scores = true;

  std::vector<Family> families = {Family::kGbdt, Family::kLogisticRegression};
  std::map<Family, std::vector<HyperParams>> grids;  // absent: DefaultGrid
  std::map<Family, bool> standardize;                // absent: DefaultStandardize
  int cv_k = 5;
  double test_fraction = 0.15;

  std::string explain_method = "shap";  // shap | permutation
  std::optional<Family> explain_family;  // absent: first tree family trained
  int permutation_repeats = 10;
  std::vector<int> topk = {1, 2, 5, 10, 14, 20, 50, 100, 200, 500, 868};
  int top_n = 20;
};

// Throws SchemaError on unknown keys or wrongly typed values.
RunConfig ParseConfig(std::string_view json_text,
                      const std::filesystem::path& base_dir);
RunConfig LoadConfig(const std::filesystem::path& path);
nlohmann::ordered_json ConfigToJson(const RunConfig& config);

enum class Stage {
  kIngest,
  kPreprocess,
  kScore,
  kFeaturize,
  kAggregate,
  kTrain,
  kEvaluate,
  kExplain,
  kReport,
};
inline constexpr int kNumStages = 9;

std::string_view StageName(Stage stage);
Stage ParseStage(std::string_view name);

struct StageResult {
  Stage stage = Stage::kIngest;
  bool skipped = false;  // outputs were already current
  std::vector<std::string> notes;
};

// Runs one stage. A stage whose manifest key (config subset plus input
// hashes) and output hashes are unchanged is skipped. Throws Error naming
// the upstream stages whose artifacts are missing.
StageResult RunStage(Stage stage, const RunConfig& config);
std::vector<StageResult> RunPipeline(const RunConfig& config);

// Recomputes every manifest's output hashes; returns one line per drifted,
// missing or unlisted-stage problem (empty when the run directory is clean).
std::vector<std::string> VerifyRun(const std::filesystem::path& out_dir);

// Exclusive ownership of a run directory through a lock file holding the
// owner's pid. A lock left by a dead process is taken over.
class RunLock {
 public:
  explicit RunLock(const std::filesystem::path& out_dir);
  ~RunLock();
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  std::filesystem::path path_;
};

}  // namespace cprof

#endif  // CPROF_PIPELINE_H_
