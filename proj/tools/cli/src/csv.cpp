// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include "fssm/cli/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>

#include "fssm/core.hpp"

namespace fssm::cli {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

void write_fields(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << fields[i];
  }
  out << '\n';
}

}  // namespace

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), width_(header.size()) {
  write_fields(out_, header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != width_) throw Error(ErrorCode::ShapeMismatch, "CSV row width differs from header");
  write_fields(out_, fields);
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorCode::OutOfRange, "no CSV column " + name);
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::BadHeader, "CSV input is empty");
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != table.header.size()) {
      throw Error(ErrorCode::ShapeMismatch, "CSV row width differs from header");
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

}  // namespace fssm::cli
