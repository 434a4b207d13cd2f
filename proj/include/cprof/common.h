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

#ifndef CPROF_COMMON_H_
#define CPROF_COMMON_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cprof {

// Group label of a user. Conspiracy is the positive class everywhere.
enum class Label { kConspiracy, kControl };

std::string_view LabelName(Label label);
// Accepts "conspiracy" / "control"; throws SchemaError otherwise.
Label ParseLabel(std::string_view name);
inline int LabelToInt(Label label) { return label == Label::kConspiracy ? 1 : 0; }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
// Unreadable or unwritable files.
class IoError : public Error {
 public:
  using Error::Error;
};
// Inputs that do not match a documented file or column schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};
// A caller broke an operation's precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Random source with a fully specified output sequence. std::mt19937_64 is
// defined bit-exactly by the standard; the distributions in <random> are not,
// so bounded draws are done here by rejection sampling on the raw 64-bit
// output (reject values >= the largest multiple of n, then take the modulus).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }
  // Uniform integer in [0, n). n must be > 0.
  uint64_t Below(uint64_t n);
  // Uniform double in [0, 1) with 53 random bits.
  double Uniform();
  // Standard normal via Box-Muller (one value per call).
  double Normal();

  // Fisher-Yates: for i = n-1 down to 1, swap v[i] with v[Below(i + 1)].
  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[Below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Mixes a base seed with a stream index (splitmix64 finalizer) so parallel
// work items get independent, order-free seeds.
uint64_t DeriveSeed(uint64_t seed, uint64_t stream);

// Runs fn(0..n-1) on up to `jobs` threads. Work items must write to disjoint
// slots. The exception of the lowest failing index is rethrown.
void ParallelFor(std::size_t n, int jobs,
                 const std::function<void(std::size_t)>& fn);

std::string Sha256Hex(std::string_view data);
std::string Sha256File(const std::filesystem::path& path);

std::string ReadFile(const std::filesystem::path& path);
// Writes to a sibling temp file and renames it into place.
void WriteFile(const std::filesystem::path& path, std::string_view content);

// Shortest round-trip decimal representation ("0" for zero, no locale).
std::string FormatDouble(double value);

std::vector<std::string> SplitString(std::string_view text, char sep);

}  // namespace cprof

#endif  // CPROF_COMMON_H_
