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

#ifndef CPROF_DATASET_H_
#define CPROF_DATASET_H_

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "cprof/aggregate.h"

namespace cprof {

// A labeled numeric matrix. Labels are 1 for conspiracy and 0 for control.
struct Dataset {
  std::vector<std::string> columns;
  std::vector<std::string> row_ids;
  Eigen::VectorXi labels;
  Eigen::MatrixXd x;

  int rows() const { return static_cast<int>(x.rows()); }
  int cols() const { return static_cast<int>(x.cols()); }
  std::string SchemaHash() const;

  Dataset SelectRows(const std::vector<int>& rows) const;
  Dataset SelectColumns(const std::vector<int>& columns) const;
  // Throws SchemaError naming the first non-finite column.
  void CheckFinite() const;
};

Dataset ToDataset(const std::vector<UserFeatureRow>& rows);

// "#schema_sha256=<hash>" line, then user_id,label,<columns...>.
void WriteUserMatrixCsv(const std::filesystem::path& path, const Dataset& data);
// Validates the header hash and that every row is complete and numeric.
Dataset ReadUserMatrixCsv(const std::filesystem::path& path);

// Binary columnar layout: "CPRFCOL1", u64 header length, JSON header
// (columns, row_ids, labels, schema_sha256), then each column as
// little-endian f64 values.
void WriteColumnar(const std::filesystem::path& path, const Dataset& data);
Dataset ReadColumnar(const std::filesystem::path& path);

}  // namespace cprof

#endif  // CPROF_DATASET_H_
