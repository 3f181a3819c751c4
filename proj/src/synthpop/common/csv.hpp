// Copyright 2026 The synthpop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace synthpop {

// Streaming reader for comma-separated UTF-8 files with a mandatory header
// row. Quoted fields (RFC 4180 style) are supported; blank lines are skipped.
class CsvReader {
 public:
  explicit CsvReader(const std::filesystem::path& path);

  const std::vector<std::string>& header() const { return header_; }
  std::optional<std::size_t> column(std::string_view name) const;
  // Throws InputError naming the column and the file.
  std::size_t require_column(std::string_view name) const;

  bool next();
  const std::vector<std::string>& row() const { return row_; }
  std::string_view operator[](std::size_t i) const { return row_[i]; }
  std::size_t line() const { return line_; }
  const std::filesystem::path& path() const { return path_; }

  // InputError pointing at the current row and the given column.
  [[noreturn]] void fail(std::size_t col, std::string_view what) const;
  [[noreturn]] void fail(std::string_view what) const;

 private:
  bool read_record(std::vector<std::string>& out);

  std::filesystem::path path_;
  std::ifstream in_;
  std::vector<std::string> header_;
  std::vector<std::string> row_;
  std::size_t line_ = 0;
  std::size_t next_line_ = 1;
};

// Appends one field, quoting it when it holds a comma, quote or newline.
void append_csv_field(std::string& line, std::string_view field);

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;
  ~CsvWriter();

  void write_row(std::span<const std::string> fields);
  void write_row(std::initializer_list<std::string_view> fields);
  // Writes a line that is already CSV-encoded, appending the newline.
  void write_line(std::string_view encoded);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::string buf_;
};

}  // namespace synthpop
