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

#include "cprof/pipeline.h"

#include <fcntl.h>
#include <signal.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_map>

#include "cprof/aggregate.h"
#include "cprof/common.h"
#include "cprof/csv.h"
#include "cprof/dataset.h"
#include "cprof/explain.h"
#include "cprof/features.h"
#include "cprof/lingfeat.h"
#include "cprof/textnlp.h"
#include "cprof/zeroshot.h"

namespace cprof {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, kNumStages> kStageNames = {
    "ingest", "preprocess", "score",   "featurize", "aggregate",
    "train",  "evaluate",   "explain", "report"};

// ---------------------------------------------------------------------------
// Config parsing

void CheckKeys(const json& object, std::string_view where,
               std::initializer_list<std::string_view> allowed) {
  if (!object.is_object()) throw SchemaError(std::string(where) + " must be an object");
  for (const auto& item : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw SchemaError("unknown config key " + std::string(where) + "." + item.key());
    }
  }
}

template <typename T>
void Read(const json& object, const char* key, std::string_view where, T& out) {
  auto it = object.find(key);
  if (it == object.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw SchemaError("config key " + std::string(where) + "." + key +
                      " has the wrong type");
  }
}

fs::path ResolvePath(const fs::path& base, const std::string& value) {
  if (value.empty()) return {};
  const fs::path p(value);
  return p.is_absolute() ? p : base / p;
}

// ---------------------------------------------------------------------------
// Stage bookkeeping

fs::path StageDir(const RunConfig& config, Stage stage) {
  return config.out_dir / std::string(StageName(stage));
}

std::vector<Stage> Dependencies(Stage stage) {
  switch (stage) {
    case Stage::kIngest: return {};
    case Stage::kPreprocess: return {Stage::kIngest};
    case Stage::kScore: return {Stage::kPreprocess};
    case Stage::kFeaturize: return {Stage::kPreprocess, Stage::kScore};
    case Stage::kAggregate: return {Stage::kFeaturize};
    case Stage::kTrain: return {Stage::kAggregate};
    case Stage::kEvaluate: return {Stage::kAggregate, Stage::kTrain};
    case Stage::kExplain: return {Stage::kAggregate, Stage::kTrain};
    case Stage::kReport: return {Stage::kPreprocess, Stage::kScore, Stage::kEvaluate};
  }
  return {};
}

std::optional<json> ReadManifest(const fs::path& out_dir, Stage stage) {
  const fs::path path = out_dir / std::string(StageName(stage)) / "manifest.json";
  if (!fs::exists(path)) return std::nullopt;
  try {
    return json::parse(ReadFile(path));
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

bool StageComplete(const fs::path& out_dir, Stage stage) {
  const auto manifest = ReadManifest(out_dir, stage);
  if (!manifest || !manifest->contains("outputs")) return false;
  for (const auto& item : (*manifest)["outputs"].items()) {
    if (!fs::exists(out_dir / item.key())) return false;
  }
  return true;
}

void RequireUpstream(const RunConfig& config, Stage stage) {
  std::set<int> missing;
  std::vector<Stage> todo = Dependencies(stage);
  while (!todo.empty()) {
    const Stage s = todo.back();
    todo.pop_back();
    if (StageComplete(config.out_dir, s)) continue;
    missing.insert(static_cast<int>(s));
    for (Stage d : Dependencies(s)) todo.push_back(d);
  }
  if (missing.empty()) return;
  std::string names;
  for (int s : missing) {
    if (!names.empty()) names += ", ";
    names += StageName(static_cast<Stage>(s));
  }
  throw Error("stage '" + std::string(StageName(stage)) +
              "' needs artifacts from stage(s) " + names + " in " +
              config.out_dir.string() + "; run `cprof " +
              std::string(StageName(static_cast<Stage>(*missing.begin()))) +
              "` first");
}

std::string Relative(const RunConfig& config, const fs::path& path) {
  return fs::relative(path, config.out_dir).generic_string();
}

struct StageOutput {
  std::vector<fs::path> files;
  std::vector<std::string> notes;
  ordered_json timing = ordered_json::object();
};

// ---------------------------------------------------------------------------
// Shared readers

std::vector<UserTimeline> ReadTimelines(const RunConfig& config) {
  const fs::path path = StageDir(config, Stage::kPreprocess) / "timelines.jsonl";
  return ParseTimelines(ReadFile(path), path.string());
}

std::string TweetKey(std::string_view user_id, std::string_view tweet_id) {
  std::string key(user_id);
  key.push_back('\x1f');
  key.append(tweet_id);
  return key;
}

Dataset ReadUserMatrix(const RunConfig& config) {
  return ReadUserMatrixCsv(StageDir(config, Stage::kAggregate) / "user_matrix.csv");
}

Split ReadSplit(const RunConfig& config, const Dataset& data) {
  const json j = json::parse(ReadFile(StageDir(config, Stage::kTrain) / "split.json"));
  std::unordered_map<std::string, int> row;
  for (int i = 0; i < data.rows(); ++i) row.emplace(data.row_ids[i], i);
  Split split;
  for (const char* part : {"train", "test"}) {
    std::vector<int>& dest = std::string_view(part) == "train" ? split.train : split.test;
    for (const auto& id : j.at(part)) {
      auto it = row.find(id.get<std::string>());
      if (it == row.end()) {
        throw SchemaError("split.json names user " + id.get<std::string>() +
                          " missing from the user matrix; rerun train");
      }
      dest.push_back(it->second);
    }
  }
  return split;
}

fs::path ModelPath(const RunConfig& config, Family family) {
  return StageDir(config, Stage::kTrain) / (std::string(FamilyName(family)) + ".model.json");
}

Family ExplainFamily(const RunConfig& config) {
  if (config.explain_family) return *config.explain_family;
  for (Family f : config.families) {
    if (IsTreeFamily(f)) return f;
  }
  return config.families.front();
}

std::string Fixed(double value, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << value;
  return s.str();
}

// ---------------------------------------------------------------------------
// Stages

StageOutput Ingest(const RunConfig& config, const fs::path& dir) {
  StageOutput out;
  std::string summary;
  for (Label label : {Label::kConspiracy, Label::kControl}) {
    const fs::path& input =
        label == Label::kConspiracy ? config.conspiracy_input : config.control_input;
    const LoadResult loaded = LoadTweets(input, label);
    const fs::path path = dir / (std::string(LabelName(label)) + ".jsonl");
    WriteFile(path, SerializeTimelines(loaded.timelines));
    out.files.push_back(path);
    summary += std::string(LabelName(label)) + ": records " +
               std::to_string(loaded.records) + ", malformed " +
               std::to_string(loaded.malformed) + ", users " +
               std::to_string(loaded.timelines.size()) + "\n";
    for (const auto& p : loaded.problems) summary += "  " + p + "\n";
    for (const auto& w : loaded.warnings) {
      summary += "  warning: " + w + "\n";
      out.notes.push_back(w);
    }
  }
  WriteFile(dir / "summary.txt", summary);
  out.files.push_back(dir / "summary.txt");
  return out;
}

StageOutput Preprocess(const RunConfig& config, const fs::path& dir) {
  StageOutput out;
  std::vector<UserTimeline> kept;
  std::ostringstream summary;
  for (Label label : {Label::kConspiracy, Label::kControl}) {
    const fs::path path =
        StageDir(config, Stage::kIngest) / (std::string(LabelName(label)) + ".jsonl");
    const auto timelines = ParseTimelines(ReadFile(path), path.string());
    std::size_t retweets = 0, foreign = 0, truncated = 0, rejected = 0, accepted = 0;
    for (const auto& t : timelines) {
      PreprocessOutcome o = PreprocessTimeline(t, config.preprocess);
      retweets += o.retweets_removed;
      foreign += o.non_english_removed;
      truncated += o.truncated;
      if (o.kept) {
        kept.push_back(std::move(*o.kept));
        ++accepted;
      } else {
        ++rejected;
      }
    }
    summary << LabelName(label) << ": users " << timelines.size() << ", kept "
            << accepted << ", rejected " << rejected << ", retweets removed "
            << retweets << ", non-English removed " << foreign
            << ", tweets beyond cap " << truncated << "\n";
  }
  if (config.balance) {
    kept = BalanceDataset(std::move(kept), config.seed);
  } else {
    std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      if (a.label != b.label) return a.label == Label::kConspiracy;
      return a.user_id < b.user_id;
    });
  }
  std::size_t counts[2] = {0, 0};
  for (const auto& t : kept) ++counts[LabelToInt(t.label)];
  summary << "final: conspiracy " << counts[1] << ", control " << counts[0]
          << (config.balance ? " (balanced)" : "") << "\n";
  WriteFile(dir / "timelines.jsonl", SerializeTimelines(kept));
  WriteFile(dir / "summary.txt", summary.str());
  out.files = {dir / "timelines.jsonl", dir / "summary.txt"};
  return out;
}

StageOutput Score(const RunConfig& config, const fs::path& dir) {
  StageOutput out;
  const auto timelines = ReadTimelines(config);
  std::vector<std::string> texts;
  for (const auto& u : timelines) {
    for (const auto& t : u.tweets) texts.push_back(t.text);
  }
  std::unique_ptr<AgreementScorer> scorer;
  ordered_json meta;
  if (config.backend == "builtin") {
    scorer = std::make_unique<BuiltinScorer>();
  } else if (config.backend == "remote") {
    RemoteOptions opt;
    opt.endpoint = config.endpoint;
    opt.batch_size = config.batch_size;
    opt.timeout_seconds = config.timeout_seconds;
    opt.attempts = config.attempts;
    opt.backoff_ms = config.backoff_ms;
    opt.concurrency = config.concurrency;
    opt.max_failure_rate = config.max_failure_rate;
    opt.cache_path = config.out_dir / "cache" / "nli_scores.tsv";
    fs::create_directories(opt.cache_path->parent_path());
    if (!config.auth_token_env.empty()) {
      if (const char* token = std::getenv(config.auth_token_env.c_str())) {
        opt.auth_token = token;
      }
    }
    auto remote = std::make_unique<RemoteScorer>(opt);
    meta["model_id"] = remote->meta().model_id;
    meta["convention"] = remote->meta().convention;
    scorer = std::move(remote);
  } else {
    throw ContractError("unknown scorer backend '" + config.backend + "'");
  }
  ScoreSummary stats;
  const auto scores = scorer->ScoreAll(texts, config.jobs, &stats);

  std::string lines;
  std::size_t k = 0;
  for (const auto& u : timelines) {
    for (const auto& t : u.tweets) {
      ordered_json j;
      j["user_id"] = u.user_id;
      j["tweet_id"] = t.tweet_id;
      j["emotions"] = scores[k].emotions;
      j["idioms"] = scores[k].idioms;
      lines += j.dump() + "\n";
      ++k;
    }
  }
  WriteFile(dir / "agreement.jsonl", lines);

  ordered_json summary;
  summary["backend_id"] = scorer->BackendId();
  summary["emotion_template"] = EmotionHypothesis("{emotion}");
  summary["idiom_hypothesis"] = "idiom text verbatim";
  summary["tweets"] = texts.size();
  summary["items"] = stats.items;
  summary["failed_imputed_zero"] = stats.failed;
  for (const auto& item : meta.items()) summary[item.key()] = item.value();
  WriteFile(dir / "summary.json", summary.dump(2) + "\n");
  out.timing["cache_hits"] = stats.cache_hits;
  out.timing["queried"] = stats.queried;
  if (stats.failed > 0) {
    out.notes.push_back(std::to_string(stats.failed) +
                        " remote scores failed and were imputed as 0");
  }
  out.files = {dir / "agreement.jsonl", dir / "summary.json"};
  return out;
}

StageOutput Featurize(const RunConfig& config, const fs::path& dir) {
  StageOutput out;
  const auto timelines = ReadTimelines(config);
  std::unordered_map<std::string, AgreementVector> agreement;
  const std::string scored = ReadFile(StageDir(config, Stage::kScore) / "agreement.jsonl");
  for (const std::string& line : SplitString(scored, '\n')) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    AgreementVector v;
    const auto emotions = j.at("emotions").get<std::vector<double>>();
    const auto idioms = j.at("idioms").get<std::vector<double>>();
    if (emotions.size() != kNumEmotions || idioms.size() != kNumIdioms) {
      throw SchemaError("agreement record with wrong vector lengths");
    }
    std::copy(emotions.begin(), emotions.end(), v.emotions.begin());
    std::copy(idioms.begin(), idioms.end(), v.idioms.begin());
    agreement[TweetKey(j.at("user_id").get<std::string>(),
                       j.at("tweet_id").get<std::string>())] = v;
  }

  struct Item {
    const UserTimeline* user;
    const Tweet* tweet;
  };
  std::vector<Item> items;
  for (const auto& u : timelines) {
    for (const auto& t : u.tweets) items.push_back({&u, &t});
  }
  std::vector<std::string> missing;
  std::vector<const AgreementVector*> found(items.size(), nullptr);
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto it = agreement.find(TweetKey(items[i].user->user_id, items[i].tweet->tweet_id));
    if (it != agreement.end()) {
      found[i] = &it->second;
    } else {
      missing.push_back(items[i].user->user_id + "/" + items[i].tweet->tweet_id);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 20); ++i) {
      list += (i ? ", " : "") + missing[i];
    }
    if (config.strict_scores) {
      throw SchemaError(std::to_string(missing.size()) +
                        " tweets have no agreement scores (" + list +
                        "); rerun score");
    }
    out.notes.push_back(std::to_string(missing.size()) +
                        " unscored tweets imputed as zeros: " + list);
  }

  std::vector<TweetFeatureVector> vectors(items.size());
  const AgreementVector zeros;
  ParallelFor(items.size(), config.jobs, [&](std::size_t i) {
    const LinguisticVector ling = ExtractLinguistic(Annotate(items[i].tweet->text));
    vectors[i] = ComposeTweetFeatures(found[i] ? *found[i] : zeros, ling);
  });

  std::vector<std::string> header = {"user_id", "tweet_id", "label"};
  for (const auto& f : BaseFeatures()) header.push_back(f.name);
  std::string csv = CsvRow(header);
  std::vector<std::string> fields;
  for (std::size_t i = 0; i < items.size(); ++i) {
    fields = {items[i].user->user_id, items[i].tweet->tweet_id,
              std::string(LabelName(items[i].user->label))};
    for (double v : vectors[i]) fields.push_back(FormatDouble(v));
    csv += CsvRow(fields);
  }
  WriteFile(dir / "tweet_features.csv", csv);
  WriteFile(dir / "schema.json", SchemaManifestJson());
  out.files = {dir / "tweet_features.csv", dir / "schema.json"};
  return out;
}

StageOutput Aggregate(const RunConfig& config, const fs::path& dir) {
  StageOutput out;
  const fs::path path = StageDir(config, Stage::kFeaturize) / "tweet_features.csv";
  const std::string content = ReadFile(path);
  CsvReader reader(content);
  std::vector<std::string> fields;
  if (!reader.Next(fields) || fields.size() != 3 + kNumBaseFeatures) {
    throw SchemaError(path.string() + ": unexpected header");
  }
  for (int f = 0; f < kNumBaseFeatures; ++f) {
    if (fields[3 + f] != BaseFeatures()[f].name) {
      throw SchemaError(path.string() + ": column " + std::to_string(4 + f) +
                        " should be '" + BaseFeatures()[f].name + "'");
    }
  }
  std::vector<UserTweetFeatures> users;
  std::unordered_map<std::string, std::size_t> index;
  while (reader.Next(fields)) {
    if (fields.size() != 3 + kNumBaseFeatures) {
      throw SchemaError(path.string() + ":" + std::to_string(reader.line()) +
                        ": wrong field count");
    }
    auto [it, inserted] = index.emplace(fields[0], users.size());
    if (inserted) users.push_back({fields[0], ParseLabel(fields[2]), {}});
    TweetFeatureVector v;
    for (int f = 0; f < kNumBaseFeatures; ++f) {
      std::size_t used = 0;
      v[f] = std::stod(fields[3 + f], &used);
      if (used != fields[3 + f].size()) {
        throw SchemaError(path.string() + ":" + std::to_string(reader.line()) +
                          ": bad number '" + fields[3 + f] + "'");
      }
    }
    users[it->second].tweets.push_back(v);
  }
  const Dataset data = ToDataset(BuildUserMatrix(users, config.jobs));
  WriteUserMatrixCsv(dir / "user_matrix.csv", data);
  WriteColumnar(dir / "user_matrix.cprfcol", data);
  ordered_json meta;
  meta["rows"] = data.rows();
  meta["columns"] = data.cols();
  meta["schema_sha256"] = data.SchemaHash();
  meta["statistics"] = {"mean", "median", "std", "min", "max", "q1", "q3"};
  meta["quantile_method"] = "linear interpolation at position (n-1)*p (inclusive)";
  meta["std_convention"] = "sample (n-1); 0 for a single tweet";
  WriteFile(dir / "meta.json", meta.dump(2) + "\n");
  out.files = {dir / "user_matrix.csv", dir / "user_matrix.cprfcol", dir / "meta.json"};
  return out;
}

std::string ParamsText(const HyperParams& params) {
  std::string s;
  for (const auto& [k, v] : params) {
    if (!s.empty()) s += ";";
    s += k + "=" + FormatDouble(v);
  }
  return s;
}

StageOutput Train(const RunConfig& config, const fs::path& dir) {
  StageOutput out;
  const Dataset data = ReadUserMatrix(config);
  const Split split = StratifiedSplit(data.labels, config.test_fraction, config.seed);
  ordered_json split_json;
  split_json["test_fraction"] = config.test_fraction;
  split_json["seed"] = config.seed;
  split_json["train"] = json::array();
  split_json["test"] = json::array();
  for (int i : split.train) split_json["train"].push_back(data.row_ids[i]);
  for (int i : split.test) split_json["test"].push_back(data.row_ids[i]);
  WriteFile(dir / "split.json", split_json.dump() + "\n");
  out.files.push_back(dir / "split.json");
  const Dataset train = data.SelectRows(split.train);

  for (Family family : config.families) {
    const auto start = std::chrono::steady_clock::now();
    ModelSpec base;
    base.family = family;
    base.seed = config.seed;
    auto st = config.standardize.find(family);
    base.standardize = st != config.standardize.end() ? st->second : DefaultStandardize(family);
    auto g = config.grids.find(family);
    const std::vector<HyperParams> grid = g != config.grids.end() ? g->second : DefaultGrid(family);
    const CvResult cv = CrossValidate(base, grid, train, config.cv_k, config.jobs);
    TrainedModel model = TrainedModel::Fit(cv.best, train, config.jobs);

    ordered_json meta;
    meta["cv_k"] = config.cv_k;
    meta["selection"] = "highest mean fold F1, then lower complexity key, then grid order";
    meta["best_index"] = cv.best_index;
    meta["train_rows"] = train.rows();
    ordered_json grid_json = json::array();
    std::string cv_csv = "params,mean_f1,fold_f1,selected\n";
    for (std::size_t i = 0; i < cv.grid.size(); ++i) {
      const GridResult& r = cv.grid[i];
      grid_json.push_back({{"params", r.params}, {"fold_f1", r.fold_f1}, {"mean_f1", r.mean_f1}});
      std::string folds;
      for (double f1 : r.fold_f1) folds += (folds.empty() ? "" : ";") + FormatDouble(f1);
      cv_csv += CsvRow({ParamsText(r.params), FormatDouble(r.mean_f1), folds,
                        static_cast<int>(i) == cv.best_index ? "1" : "0"});
    }
    meta["grid"] = grid_json;
    model.metadata = meta;
    const fs::path model_path = ModelPath(config, family);
    WriteFile(model_path, model.Serialize());
    const fs::path cv_path = dir / (std::string(FamilyName(family)) + "_cv.csv");
    WriteFile(cv_path, cv_csv);
    out.files.push_back(model_path);
    out.files.push_back(cv_path);
    for (const auto& w : model.warnings()) out.notes.push_back(w);
    out.timing[std::string(FamilyName(family)) + "_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return out;
}

StageOutput EvaluateStage(const RunConfig& config, const fs::path& dir) {
  StageOutput out;
  const Dataset data = ReadUserMatrix(config);
  const Split split = ReadSplit(config, data);
  const Dataset test = data.SelectRows(split.test);
  std::string metrics = "classifier,precision,recall,f1,accuracy,tp,fp,tn,fn\n";
  for (Family family : config.families) {
    const fs::path model_path = ModelPath(config, family);
    if (!fs::exists(model_path)) {
      throw Error("no trained " + std::string(FamilyName(family)) +
                  " model; run `cprof train` first");
    }
    const TrainedModel model = TrainedModel::Deserialize(ReadFile(model_path));
    const Predictions p = model.Predict(test);
    const Metrics m = Evaluate(p.labels, test.labels);
    metrics += CsvRow({std::string(FamilyName(family)), FormatDouble(m.precision),
                       FormatDouble(m.recall), FormatDouble(m.f1),
                       FormatDouble(m.accuracy), std::to_string(m.tp),
                       std::to_string(m.fp), std::to_string(m.tn),
                       std::to_string(m.fn)});
    std::string preds = "user_id,label,predicted,score\n";
    for (int i = 0; i < test.rows(); ++i) {
      preds += CsvRow({test.row_ids[i], std::to_string(test.labels[i]),
                       std::to_string(p.labels[i]), FormatDouble(p.scores[i])});
    }
    const fs::path pred_path = dir / ("predictions_" + std::string(FamilyName(family)) + ".csv");
    WriteFile(pred_path, preds);
    out.files.push_back(pred_path);
  }
  WriteFile(dir / "metrics.csv", metrics);
  out.files.push_back(dir / "metrics.csv");
  return out;
}

std::vector<int> CurveKs(const RunConfig& config, int columns) {
  std::vector<int> ks;
  for (int k : config.topk) {
    if (k <= columns && std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
  }
  if (std::find(ks.begin(), ks.end(), columns) == ks.end()) ks.push_back(columns);
  return ks;
}

StageOutput Explain(const RunConfig& config, const fs::path& dir) {
  StageOutput out;
  const Family family = ExplainFamily(config);
  const fs::path model_path = ModelPath(config, family);
  if (!fs::exists(model_path)) {
    throw Error("explain needs a trained " + std::string(FamilyName(family)) +
                " model; add it to train.families and run `cprof train`");
  }
  const TrainedModel model = TrainedModel::Deserialize(ReadFile(model_path));
  const Dataset data = ReadUserMatrix(config);
  const Split split = ReadSplit(config, data);
  const Dataset train = data.SelectRows(split.train);
  const Dataset test = data.SelectRows(split.test);

  ImportanceReport report;
  ordered_json meta;
  meta["family"] = FamilyName(family);
  meta["evaluated_rows"] = "test split";
  if (config.explain_method == "shap") {
    if (!IsTreeFamily(family)) {
      throw ContractError("shap needs a tree family (decision_tree, random_forest, "
                          "gbdt); use --method permutation for " +
                          std::string(FamilyName(family)));
    }
    report = ShapImportance(model, test, config.jobs);
    meta["background"] =
        "path-dependent: expectations follow the training-row covers stored in each tree";
    meta["base_value"] = report.shap.base;
    WriteShapSummaryCsv(dir / "shap_summary.csv", report, test);
    out.files.push_back(dir / "shap_summary.csv");
  } else if (config.explain_method == "permutation") {
    report = PermutationImportance(model, test, config.permutation_repeats, config.seed,
                                   config.jobs);
    meta["repeats"] = config.permutation_repeats;
  } else {
    throw ContractError("unknown explain method '" + config.explain_method + "'");
  }
  meta["method"] = ImportanceMethodName(report.method);

  WriteImportanceCsv(dir / "importance.csv", report);
  WriteRankedCsv(dir / "emotion_importance.csv", GroupRanking(report, {FeatureGroup::kEmotion}));
  WriteRankedCsv(dir / "idiom_importance.csv", GroupRanking(report, {FeatureGroup::kIdiom}));
  WriteRankedCsv(dir / "linguistic_importance.csv",
                 GroupRanking(report, {FeatureGroup::kLexical, FeatureGroup::kSyntactical,
                                       FeatureGroup::kSemantic, FeatureGroup::kStructural,
                                       FeatureGroup::kSubjectSpecific}));
  std::vector<std::string> warnings;
  const auto curve = TopKF1Curve(report.ranking, train, test, CurveKs(config, data.cols()),
                                 model.spec(), config.jobs, &warnings);
  WriteTopKCsv(dir / "topk_f1.csv", curve);
  WriteHeatmapCsv(dir / "idiom_heatmap.csv", IdiomHeatmap(data));
  WriteFile(dir / "top_features.svg",
            TopFeaturesSvg(report, config.top_n,
                           "Top " + std::to_string(config.top_n) + " features (" +
                               std::string(ImportanceMethodName(report.method)) + ", " +
                               std::string(FamilyName(family)) + ")"));
  WriteFile(dir / "meta.json", meta.dump(2) + "\n");
  for (const char* name : {"importance.csv", "emotion_importance.csv", "idiom_importance.csv",
                           "linguistic_importance.csv", "topk_f1.csv", "idiom_heatmap.csv",
                           "top_features.svg", "meta.json"}) {
    out.files.push_back(dir / name);
  }
  out.notes = warnings;
  return out;
}

std::vector<std::vector<std::string>> ReadCsvRows(const fs::path& path) {
  const std::string content = ReadFile(path);
  CsvReader reader(content);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> fields;
  while (reader.Next(fields)) rows.push_back(fields);
  return rows;
}

StageOutput Report(const RunConfig& config, const fs::path& dir) {
  StageOutput out;
  std::ostringstream r;
  r << "cprof run report\n================\n\n";
  r << "Preprocessing\n" << ReadFile(StageDir(config, Stage::kPreprocess) / "summary.txt");
  const json scoring = json::parse(ReadFile(StageDir(config, Stage::kScore) / "summary.json"));
  r << "\nScorer: " << scoring.at("backend_id").get<std::string>() << " ("
    << scoring.at("failed_imputed_zero").get<std::size_t>() << " failed items imputed as 0)\n";

  const auto metrics = ReadCsvRows(StageDir(config, Stage::kEvaluate) / "metrics.csv");
  r << "\nTest-set metrics (positive class: conspiracy)\n";
  r << std::left << std::setw(22) << "Classifier" << std::setw(11) << "Precision"
    << std::setw(9) << "Recall" << "F1\n";
  std::string best_family;
  double best_f1 = -1;
  for (std::size_t i = 1; i < metrics.size(); ++i) {
    const auto& m = metrics[i];
    const double f1 = std::stod(m[3]);
    r << std::left << std::setw(22) << m[0] << std::setw(11) << Fixed(std::stod(m[1]), 4)
      << std::setw(9) << Fixed(std::stod(m[2]), 4) << Fixed(f1, 4) << "\n";
    if (f1 > best_f1) {
      best_f1 = f1;
      best_family = m[0];
    }
  }
  const fs::path explain_dir = StageDir(config, Stage::kExplain);
  if (StageComplete(config.out_dir, Stage::kExplain)) {
    const json meta = json::parse(ReadFile(explain_dir / "meta.json"));
    const auto importance = ReadCsvRows(explain_dir / "importance.csv");
    const std::string family = meta.at("family").get<std::string>();
    r << "\nTop " << config.top_n << " features (" << meta.at("method").get<std::string>()
      << ", " << family << ")\n";
    for (std::size_t i = 1; i < importance.size() && static_cast<int>(i) <= config.top_n; ++i) {
      r << std::right << std::setw(3) << i << ". " << std::left << std::setw(60)
        << importance[i][0] << " " << Fixed(std::stod(importance[i][1]), 6) << "\n";
    }
    for (std::size_t i = 1; i < metrics.size(); ++i) {
      if (metrics[i][0] == family && importance.size() > 1) {
        r << "\n" << family << ": F1 " << Fixed(std::stod(metrics[i][3]), 4)
          << ", top feature " << importance[1][0] << "\n";
      }
    }
    const auto curve = ReadCsvRows(explain_dir / "topk_f1.csv");
    r << "\nF1 by number of top-ranked features\n";
    for (std::size_t i = 1; i < curve.size(); ++i) {
      r << "  k=" << std::left << std::setw(6) << curve[i][0] << Fixed(std::stod(curve[i][1]), 4)
        << "\n";
    }
  }
  if (!best_family.empty()) {
    r << "\nBest classifier: " << best_family << " (F1 " << Fixed(best_f1, 4) << ")\n";
  }

  r << "\nArtifacts\n";
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(config.out_dir)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".csv" || ext == ".svg") &&
        entry.path().parent_path() != dir) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    r << "  " << Relative(config, f) << "  sha256:" << Sha256File(f).substr(0, 16) << "\n";
  }
  WriteFile(dir / "report.txt", r.str());
  out.files = {dir / "report.txt"};
  return out;
}

// ---------------------------------------------------------------------------
// Manifest keys

ordered_json StageConfig(Stage stage, const RunConfig& c) {
  ordered_json j = ordered_json::object();
  const ordered_json full = ConfigToJson(c);
  switch (stage) {
    case Stage::kIngest:
    case Stage::kFeaturize:
    case Stage::kAggregate:
      break;
    case Stage::kPreprocess:
      j = full["preprocess"];
      j["seed"] = c.seed;
      break;
    case Stage::kScore:
      j = full["scorer"];
      j.erase("timeout_seconds");
      j.erase("concurrency");
      j.erase("auth_token_env");
      break;
    case Stage::kTrain:
      j = full["train"];
      j["seed"] = c.seed;
      break;
    case Stage::kEvaluate:
      j["families"] = full["train"]["families"];
      break;
    case Stage::kExplain:
      j = full["explain"];
      j["family"] = FamilyName(ExplainFamily(c));
      j["seed"] = c.seed;
      break;
    case Stage::kReport:
      j["top_n"] = c.top_n;
      break;
  }
  if (stage == Stage::kFeaturize) j["strict_scores"] = c.strict_scores;
  return j;
}

// (name, file) pairs hashed into the stage key.
std::vector<std::pair<std::string, fs::path>> StageInputs(Stage stage, const RunConfig& c) {
  std::vector<std::pair<std::string, fs::path>> inputs;
  if (stage == Stage::kIngest) {
    for (const fs::path& p : {c.conspiracy_input, c.control_input}) {
      if (p.empty() || !fs::exists(p)) {
        throw IoError("input file '" + p.string() + "' does not exist");
      }
    }
    inputs.emplace_back("input:conspiracy", c.conspiracy_input);
    inputs.emplace_back("input:control", c.control_input);
    return inputs;
  }
  std::vector<Stage> upstream = Dependencies(stage);
  if (stage == Stage::kReport && StageComplete(c.out_dir, Stage::kExplain)) {
    upstream.push_back(Stage::kExplain);
  }
  for (Stage s : upstream) {
    const auto manifest = ReadManifest(c.out_dir, s);
    for (const auto& item : (*manifest)["outputs"].items()) {
      inputs.emplace_back(item.key(), c.out_dir / item.key());
    }
  }
  return inputs;
}

StageOutput Execute(Stage stage, const RunConfig& config, const fs::path& dir) {
  switch (stage) {
    case Stage::kIngest: return Ingest(config, dir);
    case Stage::kPreprocess: return Preprocess(config, dir);
    case Stage::kScore: return Score(config, dir);
    case Stage::kFeaturize: return Featurize(config, dir);
    case Stage::kAggregate: return Aggregate(config, dir);
    case Stage::kTrain: return Train(config, dir);
    case Stage::kEvaluate: return EvaluateStage(config, dir);
    case Stage::kExplain: return Explain(config, dir);
    case Stage::kReport: return Report(config, dir);
  }
  throw ContractError("unknown stage");
}

}  // namespace

std::string_view StageName(Stage stage) {
  return kStageNames[static_cast<int>(stage)];
}

Stage ParseStage(std::string_view name) {
  for (int i = 0; i < kNumStages; ++i) {
    if (kStageNames[i] == name) return static_cast<Stage>(i);
  }
  throw ContractError("unknown stage '" + std::string(name) + "'");
}

RunConfig ParseConfig(std::string_view json_text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("config is not valid JSON: ") + e.what());
  }
  CheckKeys(root, "config",
            {"inputs", "out", "seed", "jobs", "preprocess", "scorer", "strict", "train",
             "explain"});
  RunConfig c;
  if (root.contains("inputs")) {
    const json& in = root["inputs"];
    CheckKeys(in, "inputs", {"conspiracy", "control"});
    std::string path;
    Read(in, "conspiracy", "inputs", path);
    c.conspiracy_input = ResolvePath(base_dir, path);
    path.clear();
    Read(in, "control", "inputs", path);
    c.control_input = ResolvePath(base_dir, path);
  }
  std::string out = "run";
  Read(root, "out", "config", out);
  c.out_dir = ResolvePath(base_dir, out);
  Read(root, "seed", "config", c.seed);
  Read(root, "jobs", "config", c.jobs);
  if (root.contains("preprocess")) {
    const json& p = root["preprocess"];
    CheckKeys(p, "preprocess", {"min_tweets", "max_tweets", "balance"});
    Read(p, "min_tweets", "preprocess", c.preprocess.min_tweets);
    Read(p, "max_tweets", "preprocess", c.preprocess.max_tweets);
    Read(p, "balance", "preprocess", c.balance);
  }
  if (root.contains("scorer")) {
    const json& s = root["scorer"];
    CheckKeys(s, "scorer",
              {"backend", "endpoint", "batch_size", "timeout_seconds", "attempts",
               "backoff_ms", "concurrency", "max_failure_rate", "auth_token_env"});
    Read(s, "backend", "scorer", c.backend);
    Read(s, "endpoint", "scorer", c.endpoint);
    Read(s, "batch_size", "scorer", c.batch_size);
    Read(s, "timeout_seconds", "scorer", c.timeout_seconds);
    Read(s, "attempts", "scorer", c.attempts);
    Read(s, "backoff_ms", "scorer", c.backoff_ms);
    Read(s, "concurrency", "scorer", c.concurrency);
    Read(s, "max_failure_rate", "scorer", c.max_failure_rate);
    Read(s, "auth_token_env", "scorer", c.auth_token_env);
  }
  if (root.contains("strict")) {
    CheckKeys(root["strict"], "strict", {"scores"});
    Read(root["strict"], "scores", "strict", c.strict_scores);
  }
  if (root.contains("train")) {
    const json& t = root["train"];
    CheckKeys(t, "train", {"families", "grids", "standardize", "cv_k", "test_fraction"});
    if (t.contains("families")) {
      std::vector<std::string> names;
      Read(t, "families", "train", names);
      c.families.clear();
      for (const auto& n : names) c.families.push_back(ParseFamily(n));
    }
    if (t.contains("grids")) {
      for (const auto& item : t["grids"].items()) {
        const Family f = ParseFamily(item.key());
        std::vector<HyperParams> grid;
        try {
          grid = item.value().get<std::vector<HyperParams>>();
        } catch (const json::exception&) {
          throw SchemaError("train.grids." + item.key() +
                            " must be a list of {name: number} objects");
        }
        for (const auto& p : grid) ResolveParams(f, p);
        c.grids[f] = grid;
      }
    }
    if (t.contains("standardize")) {
      for (const auto& item : t["standardize"].items()) {
        if (!item.value().is_boolean()) {
          throw SchemaError("train.standardize." + item.key() + " must be a boolean");
        }
        c.standardize[ParseFamily(item.key())] = item.value().get<bool>();
      }
    }
    Read(t, "cv_k", "train", c.cv_k);
    Read(t, "test_fraction", "train", c.test_fraction);
  }
  if (root.contains("explain")) {
    const json& e = root["explain"];
    CheckKeys(e, "explain", {"method", "family", "repeats", "topk", "top_n"});
    Read(e, "method", "explain", c.explain_method);
    if (e.contains("family")) {
      std::string name;
      Read(e, "family", "explain", name);
      c.explain_family = ParseFamily(name);
    }
    Read(e, "repeats", "explain", c.permutation_repeats);
    Read(e, "topk", "explain", c.topk);
    Read(e, "top_n", "explain", c.top_n);
  }
  if (c.families.empty()) throw SchemaError("train.families is empty");
  if (c.jobs < 1) throw SchemaError("jobs must be >= 1");
  if (c.cv_k < 2) throw SchemaError("train.cv_k must be >= 2");
  if (c.preprocess.min_tweets < 1 || c.preprocess.max_tweets < c.preprocess.min_tweets) {
    throw SchemaError("preprocess needs 1 <= min_tweets <= max_tweets");
  }
  return c;
}

RunConfig LoadConfig(const fs::path& path) {
  return ParseConfig(ReadFile(path), fs::absolute(path).parent_path());
}

ordered_json ConfigToJson(const RunConfig& c) {
  ordered_json j;
  j["inputs"] = {{"conspiracy", c.conspiracy_input.string()},
                 {"control", c.control_input.string()}};
  j["out"] = c.out_dir.string();
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  j["preprocess"] = {{"min_tweets", c.preprocess.min_tweets},
                     {"max_tweets", c.preprocess.max_tweets},
                     {"balance", c.balance}};
  ordered_json scorer;
  scorer["backend"] = c.backend;
  scorer["endpoint"] = c.endpoint;
  scorer["batch_size"] = c.batch_size;
  scorer["timeout_seconds"] = c.timeout_seconds;
  scorer["attempts"] = c.attempts;
  scorer["backoff_ms"] = c.backoff_ms;
  scorer["concurrency"] = c.concurrency;
  scorer["max_failure_rate"] = c.max_failure_rate;
  scorer["auth_token_env"] = c.auth_token_env;
  j["scorer"] = scorer;
  j["strict"] = {{"scores", c.strict_scores}};
  ordered_json train;
  train["families"] = json::array();
  for (Family f : c.families) train["families"].push_back(FamilyName(f));
  ordered_json grids = ordered_json::object();
  for (Family f : c.families) {
    auto it = c.grids.find(f);
    grids[std::string(FamilyName(f))] = it != c.grids.end() ? it->second : DefaultGrid(f);
  }
  train["grids"] = grids;
  ordered_json standardize = ordered_json::object();
  for (Family f : c.families) {
    auto it = c.standardize.find(f);
    standardize[std::string(FamilyName(f))] =
        it != c.standardize.end() ? it->second : DefaultStandardize(f);
  }
  train["standardize"] = standardize;
  train["cv_k"] = c.cv_k;
  train["test_fraction"] = c.test_fraction;
  j["train"] = train;
  ordered_json explain;
  explain["method"] = c.explain_method;
  if (c.explain_family) explain["family"] = FamilyName(*c.explain_family);
  explain["repeats"] = c.permutation_repeats;
  explain["topk"] = c.topk;
  explain["top_n"] = c.top_n;
  j["explain"] = explain;
  return j;
}

StageResult RunStage(Stage stage, const RunConfig& config) {
  RequireUpstream(config, stage);
  fs::create_directories(config.out_dir);
  // The resolved config always reflects the latest invocation.
  WriteFile(config.out_dir / "config.json", ConfigToJson(config).dump(2) + "\n");

  const ordered_json stage_config = StageConfig(stage, config);
  ordered_json inputs = ordered_json::object();
  std::string key_material = std::string(StageName(stage)) + "\n" + stage_config.dump() + "\n";
  for (const auto& [name, path] : StageInputs(stage, config)) {
    const std::string hash = Sha256File(path);
    inputs[name] = hash;
    key_material += name + " " + hash + "\n";
  }
  const std::string key = Sha256Hex(key_material);

  StageResult result;
  result.stage = stage;
  const fs::path dir = StageDir(config, stage);
  if (const auto manifest = ReadManifest(config.out_dir, stage);
      manifest && manifest->value("key", "") == key) {
    bool current = true;
    for (const auto& item : (*manifest)["outputs"].items()) {
      const fs::path p = config.out_dir / item.key();
      if (!fs::exists(p) || Sha256File(p) != item.value().get<std::string>()) {
        current = false;
        break;
      }
    }
    if (current) {
      result.skipped = true;
      return result;
    }
  }

  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto start = std::chrono::steady_clock::now();
  StageOutput output = Execute(stage, config, dir);
  ordered_json timing = output.timing;
  timing["seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  WriteFile(dir / "timing.json", timing.dump(2) + "\n");

  ordered_json manifest;
  manifest["stage"] = StageName(stage);
  manifest["key"] = key;
  manifest["config"] = stage_config;
  manifest["inputs"] = inputs;
  ordered_json outputs = ordered_json::object();
  std::sort(output.files.begin(), output.files.end());
  for (const fs::path& f : output.files) outputs[Relative(config, f)] = Sha256File(f);
  manifest["outputs"] = outputs;
  manifest["notes"] = output.notes;
  WriteFile(dir / "manifest.json", manifest.dump(2) + "\n");
  result.notes = std::move(output.notes);
  return result;
}

std::vector<StageResult> RunPipeline(const RunConfig& config) {
  std::vector<StageResult> results;
  for (int s = 0; s < kNumStages; ++s) {
    results.push_back(RunStage(static_cast<Stage>(s), config));
  }
  return results;
}

std::vector<std::string> VerifyRun(const fs::path& out_dir) {
  std::vector<std::string> problems;
  if (!fs::is_directory(out_dir)) return {out_dir.string() + " is not a run directory"};
  for (int s = 0; s < kNumStages; ++s) {
    const Stage stage = static_cast<Stage>(s);
    const fs::path manifest_path = out_dir / std::string(StageName(stage)) / "manifest.json";
    if (!fs::exists(manifest_path)) continue;
    const auto manifest = ReadManifest(out_dir, stage);
    if (!manifest) {
      problems.push_back(manifest_path.string() + ": unreadable manifest");
      continue;
    }
    for (const auto& item : (*manifest)["outputs"].items()) {
      const fs::path p = out_dir / item.key();
      if (!fs::exists(p)) {
        problems.push_back(item.key() + ": missing");
      } else if (const std::string h = Sha256File(p); h != item.value().get<std::string>()) {
        problems.push_back(item.key() + ": sha256 " + h + " differs from manifest " +
                           item.value().get<std::string>());
      }
    }
    for (const auto& item : (*manifest)["inputs"].items()) {
      if (item.key().rfind("input:", 0) == 0) continue;
      const fs::path p = out_dir / item.key();
      if (fs::exists(p) && Sha256File(p) != item.value().get<std::string>()) {
        problems.push_back(std::string(StageName(stage)) + " is stale: input " + item.key() +
                           " changed since it ran");
      }
    }
  }
  return problems;
}

RunLock::RunLock(const fs::path& out_dir) : path_(out_dir / "run.lock") {
  fs::create_directories(out_dir);
  for (int attempt = 0; attempt < 2; ++attempt) {
    const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd >= 0) {
      const std::string pid = std::to_string(::getpid()) + "\n";
      const ssize_t written = ::write(fd, pid.data(), pid.size());
      ::close(fd);
      if (written != static_cast<ssize_t>(pid.size())) {
        throw IoError("cannot write lock file " + path_.string());
      }
      return;
    }
    if (errno != EEXIST) throw IoError("cannot create lock file " + path_.string());
    long owner = 0;
    try {
      owner = std::stol(ReadFile(path_));
    } catch (const std::exception&) {
      owner = 0;
    }
    if (owner > 0 && ::kill(static_cast<pid_t>(owner), 0) == 0) {
      throw Error("run directory " + out_dir.string() + " is locked by process " +
                  std::to_string(owner));
    }
    fs::remove(path_);  // stale lock from a dead process
  }
  throw Error("could not acquire lock " + path_.string());
}

RunLock::~RunLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

}  // namespace cprof
