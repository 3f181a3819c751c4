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

#include "synthpop/common/csv.hpp"

#include "synthpop/common/error.hpp"

namespace synthpop {

CsvReader::CsvReader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw InputError("cannot open file '" + path.string() + "'");
  if (!read_record(header_)) throw InputError("file '" + path.string() + "' is empty (header row required)");
  if (!header_.empty() && header_[0].rfind("\xEF\xBB\xBF", 0) == 0) header_[0].erase(0, 3);
  for (auto& h : header_) {
    while (!h.empty() && (h.back() == ' ' || h.back() == '\t')) h.pop_back();
    while (!h.empty() && (h.front() == ' ' || h.front() == '\t')) h.erase(h.begin());
  }
}

std::optional<std::size_t> CsvReader::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t CsvReader::require_column(std::string_view name) const {
  if (auto c = column(name)) return *c;
  throw InputError("file '" + path_.string() + "' has no column '" + std::string(name) + "'");
}

bool CsvReader::read_record(std::vector<std::string>& out) {
  out.clear();
  std::string line;
  while (std::getline(in_, line)) {
    line_ = next_line_++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    while (true) {
      if (i == line.size()) {
        if (!quoted) break;
        // Quoted field spanning lines.
        std::string more;
        if (!std::getline(in_, more)) {
          throw InputError("file '" + path_.string() + "' line " + std::to_string(line_) +
                           ": unterminated quoted field");
        }
        ++next_line_;
        if (!more.empty() && more.back() == '\r') more.pop_back();
        field.push_back('\n');
        line = std::move(more);
        i = 0;
        continue;
      }
      const char c = line[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field.push_back('"');
            ++i;
          } else {
            quoted = false;
          }
        } else {
          field.push_back(c);
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        out.push_back(std::move(field));
        field.clear();
      } else {
        field.push_back(c);
      }
      ++i;
    }
    out.push_back(std::move(field));
    return true;
  }
  return false;
}

bool CsvReader::next() {
  if (!read_record(row_)) return false;
  if (row_.size() != header_.size()) {
    fail("expected " + std::to_string(header_.size()) + " fields, found " + std::to_string(row_.size()));
  }
  return true;
}

void CsvReader::fail(std::size_t col, std::string_view what) const {
  const std::string name = col < header_.size() ? header_[col] : std::to_string(col);
  throw InputError("file '" + path_.string() + "' line " + std::to_string(line_) + " column '" + name +
                   "': " + std::string(what));
}

void CsvReader::fail(std::string_view what) const {
  throw InputError("file '" + path_.string() + "' line " + std::to_string(line_) + ": " + std::string(what));
}

void append_csv_field(std::string& line, std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    line.append(field);
    return;
  }
  line.push_back('"');
  for (char c : field) {
    if (c == '"') line.push_back('"');
    line.push_back(c);
  }
  line.push_back('"');
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw PipelineError("cannot open '" + path.string() + "' for writing");
}

CsvWriter::~CsvWriter() {
  if (out_.is_open()) out_.close();
}

void CsvWriter::write_row(std::span<const std::string> fields) {
  buf_.clear();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) buf_.push_back(',');
    append_csv_field(buf_, fields[i]);
  }
  write_line(buf_);
}

void CsvWriter::write_row(std::initializer_list<std::string_view> fields) {
  buf_.clear();
  bool first = true;
  for (auto f : fields) {
    if (!first) buf_.push_back(',');
    first = false;
    append_csv_field(buf_, f);
  }
  write_line(buf_);
}

void CsvWriter::write_line(std::string_view encoded) {
  out_.write(encoded.data(), static_cast<std::streamsize>(encoded.size()));
  out_.put('\n');
  if (!out_) throw PipelineError("write to '" + path_.string() + "' failed");
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw PipelineError("write to '" + path_.string() + "' failed");
  out_.close();
}

}  // namespace synthpop
