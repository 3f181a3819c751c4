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

#include "synthpop/config/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "synthpop/common/error.hpp"
#include "synthpop/common/numfmt.hpp"

namespace synthpop::config {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_list(std::string_view v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = v.find(',', start);
    const auto item = trim(v.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Config Config::load(const fs::path& file) {
  Config c;
  std::vector<fs::path> stack;
  const auto abs = fs::absolute(file).lexically_normal();
  stack.push_back(abs);
  c.parse_into(read_file(abs), abs.parent_path(), file.string(), stack);
  return c;
}

Config Config::parse(std::string_view text, const fs::path& base_dir, std::string_view origin) {
  Config c;
  std::vector<fs::path> stack;
  c.parse_into(text, base_dir, origin, stack);
  return c;
}

void Config::parse_into(std::string_view text, const fs::path& base_dir, std::string_view origin,
                        std::vector<fs::path>& stack) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InputError(where + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw InputError(where + ": empty key");
    if (key == "include") {
      if (value.empty()) throw InputError(where + ": include needs a file name");
      const auto target = (base_dir / fs::path(std::string(value))).lexically_normal();
      const auto abs = fs::absolute(target).lexically_normal();
      if (std::find(stack.begin(), stack.end(), abs) != stack.end()) {
        throw InputError(where + ": include cycle through " + target.string());
      }
      stack.push_back(abs);
      parse_into(read_file(abs), abs.parent_path(), target.string(), stack);
      stack.pop_back();
      continue;
    }
    set(key, value, base_dir, where);
  }
}

void Config::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw InputError("override '" + std::string(assignment) + "' is not of the form key=value");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), fs::current_path(), "--overrides");
}

void Config::set(std::string_view key, std::string_view value, const fs::path& base_dir, std::string_view origin) {
  const KeySpec* k = find_key(key);
  if (!k) throw InputError(std::string(origin) + ": unknown config key '" + std::string(key) + "'");
  try {
    check_value(*k, value);
  } catch (const InputError& e) {
    throw InputError(std::string(origin) + ": " + e.what());
  }
  if (key == "schema_version" && parse_int<int>(value) != kSchemaVersion) {
    throw InputError(std::string(origin) + ": unsupported schema_version " + std::string(value) + " (expected " +
                     std::to_string(kSchemaVersion) + ")");
  }
  values_[std::string(key)] = Entry{std::string(trim(value)), base_dir, std::string(origin)};
}

const KeySpec& Config::spec(std::string_view key) const {
  const KeySpec* k = find_key(key);
  if (!k) throw InputError("unknown config key '" + std::string(key) + "'");
  return *k;
}

bool Config::is_set(std::string_view key) const { return values_.find(key) != values_.end(); }

std::string Config::raw(std::string_view key) const {
  const auto& k = spec(key);
  const auto it = values_.find(key);
  return it == values_.end() ? std::string(k.default_value) : it->second.value;
}

std::string Config::get_string(std::string_view key) const { return raw(key); }

std::optional<fs::path> Config::get_path(std::string_view key) const {
  const auto v = raw(key);
  if (v.empty()) return std::nullopt;
  fs::path p(v);
  if (p.is_relative()) {
    const auto it = values_.find(key);
    const fs::path base = it == values_.end() ? fs::current_path() : it->second.base_dir;
    p = (base / p).lexically_normal();
  }
  return p;
}

fs::path Config::require_path(std::string_view key) const {
  auto p = get_path(key);
  if (!p) throw InputError("config key '" + std::string(key) + "' is required");
  return *p;
}

long long Config::get_int(std::string_view key) const { return *parse_int<long long>(raw(key)); }

std::uint64_t Config::get_uint(std::string_view key) const {
  return static_cast<std::uint64_t>(*parse_int<long long>(raw(key)));
}

double Config::get_double(std::string_view key) const { return *parse_double(raw(key)); }

bool Config::get_bool(std::string_view key) const {
  const auto v = raw(key);
  return v == "true" || v == "1";
}

std::vector<int> Config::get_int_list(std::string_view key) const {
  std::vector<int> out;
  for (const auto& item : split_list(raw(key))) out.push_back(*parse_int<int>(item));
  return out;
}

std::vector<std::string> Config::get_string_list(std::string_view key) const { return split_list(raw(key)); }

std::string Config::canonical(unsigned command) const {
  std::vector<std::string> lines;
  for (const auto& k : schema()) {
    if (!(k.commands & command) || k.key == "output.dir" || k.key == "threads") continue;
    std::string value = raw(k.key);
    if (k.type == ValueType::kPath) {
      const auto p = get_path(k.key);
      value = p ? p->generic_string() : "";
    }
    lines.push_back(std::string(k.key) + " = " + value + "\n");
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l;
  return out;
}

}  // namespace synthpop::config
