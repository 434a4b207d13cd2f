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

// Command-line driver for the cprof pipeline.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cprof/common.h"
#include "cprof/features.h"
#include "cprof/pipeline.h"
#include "cprof/synthetic.h"

namespace fs = std::filesystem;

namespace {

struct GlobalFlags {
  std::string config;
  std::optional<uint64_t> seed;
  std::string out;
  std::optional<int> jobs;
};

cprof::RunConfig ResolveConfig(const GlobalFlags& flags) {
  cprof::RunConfig config =
      flags.config.empty() ? cprof::RunConfig{} : cprof::LoadConfig(flags.config);
  if (flags.seed) config.seed = *flags.seed;
  if (!flags.out.empty()) config.out_dir = fs::absolute(flags.out);
  if (flags.jobs) {
    if (*flags.jobs < 1) throw cprof::ContractError("--jobs must be >= 1");
    config.jobs = *flags.jobs;
  }
  return config;
}

void PrintResult(const cprof::StageResult& r) {
  std::cout << cprof::StageName(r.stage) << ": " << (r.skipped ? "up to date" : "done")
            << "\n";
  for (const auto& note : r.notes) std::cout << "  note: " << note << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cprof: conspiracy-propagator profiling from tweet text"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  app.add_option("--config", flags.config, "Run config (JSON)");
  app.add_option("--seed", flags.seed, "Override the config seed");
  app.add_option("--out", flags.out, "Override the run directory");
  app.add_option("--jobs", flags.jobs, "Worker threads");

  std::vector<std::pair<cprof::Stage, CLI::App*>> stage_commands;
  auto add_stage = [&](cprof::Stage stage, const std::string& help) {
    CLI::App* sub = app.add_subcommand(std::string(cprof::StageName(stage)), help);
    stage_commands.emplace_back(stage, sub);
    return sub;
  };
  add_stage(cprof::Stage::kIngest, "Load and validate the per-group tweet files");
  add_stage(cprof::Stage::kPreprocess, "Filter, cap and balance user timelines");
  CLI::App* score = add_stage(cprof::Stage::kScore, "Emotion and idiom agreement scores");
  std::string backend, endpoint;
  score->add_option("--backend", backend, "builtin or remote")
      ->check(CLI::IsMember({"builtin", "remote"}));
  score->add_option("--endpoint", endpoint, "NLI sidecar URL");
  add_stage(cprof::Stage::kFeaturize, "Per-tweet 124-feature vectors");
  add_stage(cprof::Stage::kAggregate, "User matrix of 868 statistics");
  CLI::App* train = add_stage(cprof::Stage::kTrain, "Cross-validate and fit classifiers");
  std::vector<std::string> families;
  train->add_option("--family", families, "Model family (repeatable)");
  add_stage(cprof::Stage::kEvaluate, "Test-set precision, recall and F1");
  CLI::App* explain = add_stage(cprof::Stage::kExplain, "Feature importance analysis");
  std::string method;
  explain->add_option("--method", method, "shap or permutation")
      ->check(CLI::IsMember({"shap", "permutation"}));
  add_stage(cprof::Stage::kReport, "Human-readable run summary");

  CLI::App* run = app.add_subcommand("run", "All stages in order");
  CLI::App* schema = app.add_subcommand("schema", "Print the feature schema manifest");
  CLI::App* verify = app.add_subcommand("verify", "Recompute artifact hashes and report drift");
  CLI::App* synth = app.add_subcommand("synth", "Write the synthetic demo corpus");
  std::string synth_dir = ".";
  cprof::SyntheticOptions synth_options;
  synth->add_option("dir", synth_dir, "Output directory");
  synth->add_option("--users", synth_options.users_per_group, "Users per group");
  synth->add_option("--tweets", synth_options.tweets_per_user, "Tweets per user");
  synth->add_option("--synth-seed", synth_options.seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*schema) {
      std::cout << cprof::SchemaManifestJson();
      return 0;
    }
    if (*synth) {
      const cprof::SyntheticCorpus corpus = cprof::GenerateSyntheticCorpus(synth_options);
      fs::create_directories(synth_dir);
      cprof::WriteFile(fs::path(synth_dir) / "conspiracy.jsonl", corpus.conspiracy);
      cprof::WriteFile(fs::path(synth_dir) / "control.jsonl", corpus.control);
      std::cout << "wrote " << synth_dir << "/conspiracy.jsonl and control.jsonl\n";
      return 0;
    }
    cprof::RunConfig config = ResolveConfig(flags);
    if (*verify) {
      const auto problems = cprof::VerifyRun(config.out_dir);
      for (const auto& p : problems) std::cout << "drift: " << p << "\n";
      std::cout << (problems.empty() ? "verify: ok\n" : "verify: FAILED\n");
      return problems.empty() ? 0 : 1;
    }
    if (!backend.empty()) config.backend = backend;
    if (!endpoint.empty()) config.endpoint = endpoint;
    if (!families.empty()) {
      config.families.clear();
      for (const auto& f : families) config.families.push_back(cprof::ParseFamily(f));
    }
    if (!method.empty()) config.explain_method = method;

    cprof::RunLock lock(config.out_dir);
    if (*run) {
      for (const auto& r : cprof::RunPipeline(config)) PrintResult(r);
      return 0;
    }
    for (const auto& [stage, sub] : stage_commands) {
      if (*sub) PrintResult(cprof::RunStage(stage, config));
    }
    return 0;
  } catch (const cprof::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
