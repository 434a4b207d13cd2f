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

#ifndef CPROF_RESOURCES_H_
#define CPROF_RESOURCES_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cprof {

struct EmbeddedFile {
  std::string_view path;  // relative to data/
  std::string_view data;
};

// Contents of a bundled data file, e.g. Resource("lexicon/stopwords.tsv").
// Throws ContractError for unknown paths.
std::string_view Resource(std::string_view path);
std::vector<std::string_view> ResourcePaths();

struct TsvEntry {
  std::string term;
  std::string tag;
};

// Parses `term<TAB>tag` lines. Blank lines and lines starting with '#' are
// skipped; any other line without exactly one tab is a SchemaError.
std::vector<TsvEntry> ParseTsv(std::string_view content,
                               std::string_view source_name);

// Version declared by a "# version: N" comment line, or 0 when absent.
int TsvVersion(std::string_view content);

struct ManifestCheck {
  std::string path;
  std::string expected;
  std::string actual;
  bool ok = false;
};

// Compares every entry of MANIFEST.sha256 ("<sha256>  <path>" lines) with the
// embedded file contents.
std::vector<ManifestCheck> VerifyResourceManifest();

namespace internal {
extern const EmbeddedFile kEmbeddedFiles[];
extern const std::size_t kEmbeddedFileCount;
}  // namespace internal

}  // namespace cprof

#endif  // CPROF_RESOURCES_H_
