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

#include "cprof/dataset.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <json.hpp>

#include "cprof/common.h"
#include "cprof/csv.h"
#include "cprof/features.h"

namespace cprof {

namespace {

constexpr std::string_view kSchemaPrefix = "#schema_sha256=";
constexpr std::string_view kColumnarMagic = "CPRFCOL1";

static_assert(std::endian::native == std::endian::little,
              "columnar files are written in native little-endian order");

double ParseNumber(const std::string& text, const std::filesystem::path& path,
                   int line, const std::string& column) {
  double value = 0;
  const char* end = text.data() + text.size();
  auto result = std::from_chars(text.data(), end, value);
  if (text.empty() || result.ec != std::errc() || result.ptr != end) {
    throw SchemaError(path.string() + ":" + std::to_string(line) +
                      ": column " + column + " is not a number: '" + text + "'");
  }
  return value;
}

}  // namespace

std::string Dataset::SchemaHash() const { return cprof::SchemaHash(columns); }

Dataset Dataset::SelectRows(const std::vector<int>& rows) const {
  Dataset out;
  out.columns = columns;
  out.x.resize(static_cast<Eigen::Index>(rows.size()), x.cols());
  out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.x.row(i) = x.row(rows[i]);
    out.labels[i] = labels[rows[i]];
    out.row_ids.push_back(row_ids[rows[i]]);
  }
  return out;
}

Dataset Dataset::SelectColumns(const std::vector<int>& selected) const {
  Dataset out;
  out.row_ids = row_ids;
  out.labels = labels;
  out.x.resize(x.rows(), static_cast<Eigen::Index>(selected.size()));
  for (std::size_t j = 0; j < selected.size(); ++j) {
    out.x.col(j) = x.col(selected[j]);
    out.columns.push_back(columns[selected[j]]);
  }
  return out;
}

void Dataset::CheckFinite() const {
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (!x.col(j).allFinite()) {
      throw SchemaError("non-finite values in column " + columns[j]);
    }
  }
}

Dataset ToDataset(const std::vector<UserFeatureRow>& rows) {
  Dataset data;
  data.columns = UserColumnNames();
  data.x.resize(static_cast<Eigen::Index>(rows.size()), kNumUserColumns);
  data.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].values.size() != static_cast<std::size_t>(kNumUserColumns)) {
      throw ContractError("user row " + rows[i].user_id + " has wrong width");
    }
    data.row_ids.push_back(rows[i].user_id);
    data.labels[i] = LabelToInt(rows[i].label);
    for (int j = 0; j < kNumUserColumns; ++j) data.x(i, j) = rows[i].values[j];
  }
  return data;
}

void WriteUserMatrixCsv(const std::filesystem::path& path, const Dataset& data) {
  std::string out;
  out += std::string(kSchemaPrefix) + data.SchemaHash() + "\n";
  std::vector<std::string> header = {"user_id", "label"};
  header.insert(header.end(), data.columns.begin(), data.columns.end());
  out += CsvRow(header);
  std::vector<std::string> fields;
  for (int i = 0; i < data.rows(); ++i) {
    fields.clear();
    fields.push_back(data.row_ids[i]);
    fields.emplace_back(data.labels[i] == 1 ? "conspiracy" : "control");
    for (int j = 0; j < data.cols(); ++j) fields.push_back(FormatDouble(data.x(i, j)));
    out += CsvRow(fields);
  }
  WriteFile(path, out);
}

Dataset ReadUserMatrixCsv(const std::filesystem::path& path) {
  const std::string content = ReadFile(path);
  if (content.compare(0, kSchemaPrefix.size(), kSchemaPrefix) != 0) {
    throw SchemaError(path.string() + ": missing " + std::string(kSchemaPrefix) +
                      " line");
  }
  const std::size_t eol = content.find('\n');
  const std::string declared =
      content.substr(kSchemaPrefix.size(), eol - kSchemaPrefix.size());
  CsvReader reader(std::string_view(content).substr(eol + 1));
  std::vector<std::string> fields;
  if (!reader.Next(fields) || fields.size() < 2 || fields[0] != "user_id" ||
      fields[1] != "label") {
    throw SchemaError(path.string() + ": header must start with user_id,label");
  }
  Dataset data;
  data.columns.assign(fields.begin() + 2, fields.end());
  if (data.SchemaHash() != declared) {
    throw SchemaError(path.string() + ": schema hash does not match header");
  }
  std::vector<std::vector<double>> values;
  std::vector<int> labels;
  while (reader.Next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    const int line = reader.line() + 1;
    if (fields.size() != data.columns.size() + 2) {
      throw SchemaError(path.string() + ":" + std::to_string(line) + ": expected " +
                        std::to_string(data.columns.size() + 2) + " fields, got " +
                        std::to_string(fields.size()));
    }
    data.row_ids.push_back(fields[0]);
    labels.push_back(LabelToInt(ParseLabel(fields[1])));
    std::vector<double> row(data.columns.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
      row[j] = ParseNumber(fields[j + 2], path, line, data.columns[j]);
    }
    values.push_back(std::move(row));
  }
  data.x.resize(static_cast<Eigen::Index>(values.size()),
                static_cast<Eigen::Index>(data.columns.size()));
  data.labels.resize(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    data.labels[i] = labels[i];
    for (std::size_t j = 0; j < data.columns.size(); ++j) data.x(i, j) = values[i][j];
  }
  return data;
}

void WriteColumnar(const std::filesystem::path& path, const Dataset& data) {
  nlohmann::ordered_json header;
  header["columns"] = data.columns;
  header["row_ids"] = data.row_ids;
  header["labels"] = std::vector<int>(data.labels.data(),
                                      data.labels.data() + data.labels.size());
  header["schema_sha256"] = data.SchemaHash();
  const std::string json = header.dump();
  std::string out(kColumnarMagic);
  const uint64_t length = json.size();
  out.append(reinterpret_cast<const char*>(&length), sizeof(length));
  out += json;
  for (int j = 0; j < data.cols(); ++j) {
    for (int i = 0; i < data.rows(); ++i) {
      const double v = data.x(i, j);
      out.append(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  }
  WriteFile(path, out);
}

Dataset ReadColumnar(const std::filesystem::path& path) {
  const std::string content = ReadFile(path);
  const std::size_t prefix = kColumnarMagic.size() + sizeof(uint64_t);
  if (content.size() < prefix || content.compare(0, kColumnarMagic.size(), kColumnarMagic) != 0) {
    throw SchemaError(path.string() + ": not a columnar user matrix");
  }
  uint64_t length = 0;
  std::memcpy(&length, content.data() + kColumnarMagic.size(), sizeof(length));
  if (length > content.size() - prefix) {
    throw SchemaError(path.string() + ": truncated header");
  }
  Dataset data;
  try {
    const auto header = nlohmann::json::parse(content.substr(prefix, length));
    data.columns = header.at("columns").get<std::vector<std::string>>();
    data.row_ids = header.at("row_ids").get<std::vector<std::string>>();
    const auto labels = header.at("labels").get<std::vector<int>>();
    data.labels = Eigen::Map<const Eigen::VectorXi>(labels.data(),
                                                    static_cast<Eigen::Index>(labels.size()));
    if (header.at("schema_sha256").get<std::string>() != data.SchemaHash()) {
      throw SchemaError(path.string() + ": schema hash mismatch");
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path.string() + ": bad header: " + e.what());
  }
  const std::size_t rows = data.row_ids.size();
  const std::size_t cols = data.columns.size();
  if (static_cast<std::size_t>(data.labels.size()) != rows ||
      content.size() != prefix + length + rows * cols * sizeof(double)) {
    throw SchemaError(path.string() + ": payload size does not match header");
  }
  data.x.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const char* p = content.data() + prefix + length;
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) {
      double v = 0;
      std::memcpy(&v, p, sizeof(v));
      p += sizeof(v);
      data.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return data;
}

}  // namespace cprof
