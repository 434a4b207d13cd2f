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

#include "cprof/resources.h"

#include <charconv>

#include "cprof/common.h"

namespace cprof {

std::string_view Resource(std::string_view path) {
  for (std::size_t i = 0; i < internal::kEmbeddedFileCount; ++i) {
    if (internal::kEmbeddedFiles[i].path == path) {
      return internal::kEmbeddedFiles[i].data;
    }
  }
  throw ContractError("no bundled resource named " + std::string(path));
}

std::vector<std::string_view> ResourcePaths() {
  std::vector<std::string_view> paths;
  for (std::size_t i = 0; i < internal::kEmbeddedFileCount; ++i) {
    paths.push_back(internal::kEmbeddedFiles[i].path);
  }
  return paths;
}

namespace {

std::string_view StripCr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::vector<TsvEntry> ParseTsv(std::string_view content,
                               std::string_view source_name) {
  std::vector<TsvEntry> entries;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    const std::string_view line = StripCr(content.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 ||
        line.find('\t', tab + 1) != std::string_view::npos ||
        tab + 1 == line.size()) {
      throw SchemaError(std::string(source_name) + ":" +
                        std::to_string(line_no) +
                        ": expected term<TAB>tag");
    }
    entries.push_back({std::string(line.substr(0, tab)),
                       std::string(line.substr(tab + 1))});
  }
  return entries;
}

int TsvVersion(std::string_view content) {
  constexpr std::string_view kPrefix = "# version:";
  const std::size_t pos = content.find(kPrefix);
  if (pos == std::string_view::npos) return 0;
  std::size_t i = pos + kPrefix.size();
  while (i < content.size() && content[i] == ' ') ++i;
  int version = 0;
  std::from_chars(content.data() + i, content.data() + content.size(),
                  version);
  return version;
}

std::vector<ManifestCheck> VerifyResourceManifest() {
  std::vector<ManifestCheck> checks;
  const std::string_view manifest = Resource("MANIFEST.sha256");
  for (const std::string& raw : SplitString(manifest, '\n')) {
    const std::string_view line = StripCr(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t sep = line.find("  ");
    if (sep == std::string_view::npos) {
      throw SchemaError("MANIFEST.sha256: malformed line '" +
                        std::string(line) + "'");
    }
    ManifestCheck check;
    check.expected = std::string(line.substr(0, sep));
    check.path = std::string(line.substr(sep + 2));
    check.actual = Sha256Hex(Resource(check.path));
    check.ok = check.actual == check.expected;
    checks.push_back(std::move(check));
  }
  return checks;
}

}  // namespace cprof
