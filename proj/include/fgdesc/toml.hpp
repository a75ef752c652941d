#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

// Minimal TOML subset reader: bare keys, string/integer values, flat arrays,
// comments, and [[array-of-table]] sections. Covers the shipped data files.
namespace fgdesc::toml {

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<std::int64_t, std::string, Array> data;

  bool is_int() const { return std::holds_alternative<std::int64_t>(data); }
  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_array() const { return std::holds_alternative<Array>(data); }
  std::int64_t as_int() const { return std::get<std::int64_t>(data); }
  const std::string& as_string() const { return std::get<std::string>(data); }
  const Array& as_array() const { return std::get<Array>(data); }
};

using Table = std::map<std::string, Value>;

struct Document {
  Table root;
  std::map<std::string, std::vector<Table>> table_arrays;
};

Document parse(const std::string& text);
Document parse_file(const std::string& path);

}  // namespace fgdesc::toml
