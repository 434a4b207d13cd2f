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

#ifndef CPROF_CSV_H_
#define CPROF_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace cprof {

// Quotes a field when it contains a comma, quote, CR or LF.
std::string CsvEscape(std::string_view field);
// Joined, escaped fields followed by '\n'.
std::string CsvRow(const std::vector<std::string>& fields);

// RFC 4180 reader over an in-memory document.
class CsvReader {
 public:
  explicit CsvReader(std::string_view content) : content_(content) {}

  // False at end of input. Throws SchemaError on an unterminated quote.
  bool Next(std::vector<std::string>& fields);
  // 1-based line number where the last record started.
  int line() const { return record_line_; }

 private:
  std::string_view content_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int record_line_ = 0;
};

}  // namespace cprof

#endif  // CPROF_CSV_H_
