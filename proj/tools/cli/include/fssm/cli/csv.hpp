// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal CSV: comma separated, LF line endings, mandatory header row, reals
// with 17 significant digits so every double survives a round trip. Fields
// never contain commas or quotes, so no quoting is implemented.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace fssm::cli {

/// %.17g.
std::string format_real(double value);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  /// Throws ShapeMismatch when the field count differs from the header.
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
  std::size_t width_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws OutOfRange if absent.
  std::size_t column(const std::string& name) const;
};

/// Throws BadHeader on an empty input and ShapeMismatch on ragged rows.
CsvTable read_csv(std::istream& in);

}  // namespace fssm::cli
