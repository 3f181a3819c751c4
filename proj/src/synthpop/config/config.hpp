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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synthpop/config/schema.hpp"

namespace synthpop::config {

// Key-value configuration. Files hold `key = value` lines; `#` starts a
// comment; `include = other.cfg` splices another file in place (later lines
// win). Relative paths resolve against the directory of the file that set
// them; overrides resolve against the working directory. Every key must be
// in the schema and every value must parse as the key's type.
class Config {
 public:
  Config() = default;

  static Config load(const std::filesystem::path& file);
  static Config parse(std::string_view text, const std::filesystem::path& base_dir, std::string_view origin);

  // Applies `key=value` (the --overrides syntax).
  void apply_override(std::string_view assignment);
  void set(std::string_view key, std::string_view value, const std::filesystem::path& base_dir,
           std::string_view origin);

  bool is_set(std::string_view key) const;
  std::string get_string(std::string_view key) const;
  // Empty optional when the value is empty.
  std::optional<std::filesystem::path> get_path(std::string_view key) const;
  std::filesystem::path require_path(std::string_view key) const;
  long long get_int(std::string_view key) const;
  std::uint64_t get_uint(std::string_view key) const;
  double get_double(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  std::vector<int> get_int_list(std::string_view key) const;
  std::vector<std::string> get_string_list(std::string_view key) const;

  // Sorted `key = value` lines of the effective values of every key the
  // command reads, paths resolved; output.dir and threads are left out since
  // they do not change results.
  std::string canonical(unsigned command) const;

 private:
  struct Entry {
    std::string value;
    std::filesystem::path base_dir;
    std::string origin;
  };
  void parse_into(std::string_view text, const std::filesystem::path& base_dir, std::string_view origin,
                  std::vector<std::filesystem::path>& stack);
  const KeySpec& spec(std::string_view key) const;
  std::string raw(std::string_view key) const;

  std::map<std::string, Entry, std::less<>> values_;
};

}  // namespace synthpop::config
