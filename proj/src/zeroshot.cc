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

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

#include "cprof/common.h"
#include "cprof/textnlp.h"

namespace cprof {

namespace {

using nlohmann::json;

std::vector<std::string> WordSequence(std::string_view text) {
  std::vector<std::string> words;
  for (Token& t : Tokenize(text)) {
    if (CountsAsWord(t)) words.push_back(std::move(t.lower));
  }
  return words;
}

bool ContainsRun(const std::vector<std::string>& haystack,
                 const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(),
                     needle.end()) != haystack.end();
}

std::vector<std::string> Hypotheses() {
  const Lexicon& lexicon = Lexicon::Default();
  std::vector<std::string> out;
  for (const auto& e : lexicon.EmotionLabels()) out.push_back(EmotionHypothesis(e));
  for (const auto& idiom : lexicon.Idioms()) out.push_back(idiom);
  return out;
}

void Assign(AgreementVector& v, std::size_t hypothesis, double score) {
  if (hypothesis < kNumEmotions) {
    v.emotions[hypothesis] = score;
  } else {
    v.idioms[hypothesis - kNumEmotions] = score;
  }
}

bool IsBlank(std::string_view text) {
  for (std::size_t i = 0; i < text.size();) {
    const CodePoint cp = DecodeUtf8(text, i);
    if (!IsWhitespace(cp.value)) return false;
    i += cp.length;
  }
  return true;
}

std::unordered_map<std::string, double> LoadCache(
    const std::filesystem::path& path) {
  std::unordered_map<std::string, double> cache;
  if (!std::filesystem::exists(path)) return cache;
  const std::string content = ReadFile(path);
  std::size_t line_no = 0;
  for (const std::string& line : SplitString(content, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    double value = 0;
    const char* begin = line.data() + (tab == std::string::npos ? 0 : tab + 1);
    const char* end = line.data() + line.size();
    auto result = std::from_chars(begin, end, value);
    if (tab != 64 || result.ec != std::errc() || result.ptr != end ||
        !(value >= 0.0 && value <= 1.0)) {
      throw SchemaError(path.string() + ":" + std::to_string(line_no) +
                        ": malformed score cache record");
    }
    cache.emplace(line.substr(0, tab), value);
  }
  return cache;
}

}  // namespace

std::string EmotionHypothesis(std::string_view emotion) {
  return "This text expresses " + std::string(emotion) + ".";
}

double LexiconEntailment(std::string_view premise,
                         std::string_view hypothesis) {
  const std::vector<std::string> p = WordSequence(premise);
  if (p.empty()) return 0.0;
  const std::vector<std::string> h = WordSequence(hypothesis);
  const Lexicon& lexicon = Lexicon::Default();
  auto content = [&](const std::vector<std::string>& words) {
    std::set<std::string> out;
    for (const auto& w : words) {
      if (!lexicon.IsStopWord(w)) out.insert(w);
    }
    return out;
  };
  const std::set<std::string> a = content(p);
  const std::set<std::string> b = content(h);
  std::vector<std::string> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common));
  const std::size_t union_size = a.size() + b.size() - common.size();
  const double jaccard =
      union_size == 0 ? 0.0
                      : static_cast<double>(common.size()) / union_size;
  const double substring = ContainsRun(p, h) ? 1.0 : 0.0;
  return std::min(1.0, jaccard + 0.5 * substring);
}

double LexiconEmotionScore(std::string_view premise, int emotion) {
  if (emotion < 0 || emotion >= kNumEmotions) {
    throw ContractError("emotion index out of range");
  }
  const Lexicon& lexicon = Lexicon::Default();
  int hits = 0;
  for (const auto& w : WordSequence(premise)) {
    if ((lexicon.EmotionMask(w) >> emotion) & 1u) ++hits;
  }
  return std::min(1.0, hits / 4.0);
}

AgreementVector BuiltinScorer::Score(std::string_view text) const {
  AgreementVector v;
  if (IsBlank(text)) return v;
  for (int e = 0; e < kNumEmotions; ++e) {
    v.emotions[e] = LexiconEmotionScore(text, e);
  }
  const auto& idioms = Lexicon::Default().Idioms();
  for (int i = 0; i < kNumIdioms; ++i) {
    v.idioms[i] = LexiconEntailment(text, idioms[i]);
  }
  return v;
}

std::vector<AgreementVector> BuiltinScorer::ScoreAll(
    const std::vector<std::string>& texts, int jobs, ScoreSummary* summary) {
  std::vector<AgreementVector> out(texts.size());
  ParallelFor(texts.size(), jobs, [&](std::size_t i) { out[i] = Score(texts[i]); });
  if (summary != nullptr) {
    for (const auto& t : texts) {
      if (!IsBlank(t)) summary->items += kNumEmotions + kNumIdioms;
    }
  }
  return out;
}

std::string ScoreCacheKey(std::string_view backend_id, std::string_view premise,
                          std::string_view hypothesis) {
  std::string buffer;
  buffer.reserve(backend_id.size() + premise.size() + hypothesis.size() + 2);
  buffer.append(backend_id);
  buffer.push_back('\x1f');
  buffer.append(premise);
  buffer.push_back('\x1f');
  buffer.append(hypothesis);
  return Sha256Hex(buffer);
}

// ---------------------------------------------------------------------------
// NliClient

NliClient::NliClient(RemoteOptions options) : options_(std::move(options)) {
  if (options_.batch_size < 1 || options_.batch_size > 64) {
    throw ContractError("batch_size must be in 1..64");
  }
  if (options_.attempts < 1) throw ContractError("attempts must be >= 1");
  const std::string& url = options_.endpoint;
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos || url.compare(0, scheme, "http") != 0) {
    throw ContractError("endpoint must be an http:// URL, got '" + url + "'");
  }
  const std::size_t path = url.find('/', scheme + 3);
  host_ = url.substr(0, path);
  if (path != std::string::npos) {
    base_path_ = url.substr(path);
    while (!base_path_.empty() && base_path_.back() == '/') base_path_.pop_back();
  }
}

namespace {

httplib::Client MakeClient(const std::string& host, const RemoteOptions& o) {
  httplib::Client client(host);
  const auto timeout = std::chrono::duration<double>(o.timeout_seconds);
  const auto usec =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout).count();
  client.set_connection_timeout(usec / 1000000, usec % 1000000);
  client.set_read_timeout(usec / 1000000, usec % 1000000);
  client.set_write_timeout(usec / 1000000, usec % 1000000);
  return client;
}

httplib::Headers AuthHeaders(const RemoteOptions& o) {
  httplib::Headers headers;
  if (!o.auth_token.empty()) headers.emplace("X-Auth-Token", o.auth_token);
  return headers;
}

}  // namespace

void NliClient::CheckHealth() const {
  httplib::Client client = MakeClient(host_, options_);
  auto res = client.Get(base_path_ + "/healthz", AuthHeaders(options_));
  if (!res) {
    throw IoError("NLI service at " + options_.endpoint + " is unreachable (" +
                  httplib::to_string(res.error()) + ")");
  }
  if (res->status != 200) {
    throw IoError("NLI health check returned HTTP " +
                  std::to_string(res->status));
  }
}

SidecarMeta NliClient::FetchMeta() const {
  httplib::Client client = MakeClient(host_, options_);
  auto res = client.Get(base_path_ + "/v1/meta", AuthHeaders(options_));
  if (!res || res->status != 200) {
    throw IoError("cannot read /v1/meta from " + options_.endpoint);
  }
  try {
    const json body = json::parse(res->body);
    return {body.at("model_id").get<std::string>(),
            body.at("convention").get<std::string>()};
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed /v1/meta response: ") + e.what());
  }
}

std::vector<double> NliClient::Entail(
    std::string_view premise, const std::vector<std::string>& hypotheses) const {
  if (hypotheses.empty() ||
      hypotheses.size() > static_cast<std::size_t>(options_.batch_size)) {
    throw ContractError("hypothesis batch must hold 1..batch_size entries");
  }
  const std::string body =
      json{{"premise", premise}, {"hypotheses", hypotheses}}.dump();
  std::string last_error;
  int backoff = options_.backoff_ms;
  for (int attempt = 0; attempt < options_.attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
    }
    httplib::Client client = MakeClient(host_, options_);
    auto res = client.Post(base_path_ + "/v1/entail", AuthHeaders(options_),
                           body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw IoError("/v1/entail returned HTTP " + std::to_string(res->status) +
                    ": " + res->body);
    }
    std::vector<double> scores;
    try {
      scores = json::parse(res->body).at("scores").get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw SchemaError(std::string("malformed /v1/entail response: ") +
                        e.what());
    }
    if (scores.size() != hypotheses.size()) {
      throw SchemaError("/v1/entail returned " + std::to_string(scores.size()) +
                        " scores for " + std::to_string(hypotheses.size()) +
                        " hypotheses");
    }
    for (double s : scores) {
      if (!(s >= 0.0 && s <= 1.0)) {
        throw SchemaError("/v1/entail returned a score outside [0, 1]");
      }
    }
    return scores;
  }
  throw IoError("/v1/entail failed after " + std::to_string(options_.attempts) +
                " attempts: " + last_error);
}

// ---------------------------------------------------------------------------
// RemoteScorer

RemoteScorer::RemoteScorer(RemoteOptions options)
    : client_(std::move(options)) {
  client_.CheckHealth();
  meta_ = client_.FetchMeta();
}

std::string RemoteScorer::BackendId() const {
  return "remote_nli/" + meta_.model_id + "/" + meta_.convention;
}

std::vector<AgreementVector> RemoteScorer::ScoreAll(
    const std::vector<std::string>& texts, int /*jobs*/,
    ScoreSummary* summary) {
  const RemoteOptions& opt = client_.options();
  const std::string backend = BackendId();
  const std::vector<std::string> hypotheses = Hypotheses();
  const std::size_t n_hyp = hypotheses.size();

  std::unordered_map<std::string, double> cache;
  if (opt.cache_path) cache = LoadCache(*opt.cache_path);

  ScoreSummary local;
  std::vector<AgreementVector> out(texts.size());
  constexpr std::size_t kChunk = 256;

  for (std::size_t chunk = 0; chunk < texts.size(); chunk += kChunk) {
    const std::size_t end = std::min(texts.size(), chunk + kChunk);
    const std::size_t count = end - chunk;
    // keys[i][h] is empty when the score came from the cache.
    std::vector<std::vector<std::string>> keys(count);
    std::vector<std::vector<std::optional<double>>> fresh(count);
    std::vector<std::size_t> failed(count, 0);
    std::vector<std::size_t> hits(count, 0);
    std::vector<std::size_t> queried(count, 0);

    ParallelFor(count, std::max(1, opt.concurrency), [&](std::size_t i) {
      const std::string& text = texts[chunk + i];
      if (IsBlank(text)) return;
      keys[i].resize(n_hyp);
      fresh[i].resize(n_hyp);
      std::vector<std::size_t> pending;
      for (std::size_t h = 0; h < n_hyp; ++h) {
        const std::string key = ScoreCacheKey(backend, text, hypotheses[h]);
        auto it = cache.find(key);  // read-only during the parallel section
        if (it != cache.end()) {
          Assign(out[chunk + i], h, it->second);
          ++hits[i];
        } else {
          keys[i][h] = key;
          pending.push_back(h);
        }
      }
      for (std::size_t b = 0; b < pending.size(); b += opt.batch_size) {
        const std::size_t stop =
            std::min(pending.size(), b + static_cast<std::size_t>(opt.batch_size));
        std::vector<std::string> batch;
        for (std::size_t k = b; k < stop; ++k) batch.push_back(hypotheses[pending[k]]);
        queried[i] += batch.size();
        try {
          const std::vector<double> scores = client_.Entail(text, batch);
          for (std::size_t k = b; k < stop; ++k) {
            fresh[i][pending[k]] = scores[k - b];
            Assign(out[chunk + i], pending[k], scores[k - b]);
          }
        } catch (const Error&) {
          failed[i] += batch.size();  // left at 0
        }
      }
    });

    std::string records;
    for (std::size_t i = 0; i < count; ++i) {
      if (!keys[i].empty()) local.items += n_hyp;
      local.failed += failed[i];
      local.cache_hits += hits[i];
      local.queried += queried[i];
      for (std::size_t h = 0; h < fresh[i].size(); ++h) {
        if (!fresh[i][h]) continue;
        if (cache.emplace(keys[i][h], *fresh[i][h]).second) {
          records += keys[i][h] + "\t" + FormatDouble(*fresh[i][h]) + "\n";
        }
      }
    }
    if (opt.cache_path && !records.empty()) {
      if (opt.cache_path->has_parent_path()) {
        std::filesystem::create_directories(opt.cache_path->parent_path());
      }
      std::ofstream file(*opt.cache_path, std::ios::binary | std::ios::app);
      file << records;
      if (!file) throw IoError("cannot append to " + opt.cache_path->string());
    }
  }

  if (summary != nullptr) {
    summary->items += local.items;
    summary->failed += local.failed;
    summary->cache_hits += local.cache_hits;
    summary->queried += local.queried;
  }
  if (local.items > 0 &&
      static_cast<double>(local.failed) >
          opt.max_failure_rate * static_cast<double>(local.items)) {
    throw Error(std::to_string(local.failed) + " of " +
                std::to_string(local.items) +
                " remote scores failed, above the allowed failure rate; "
                "successful scores were cached, rerun to resume");
  }
  return out;
}

}  // namespace cprof
