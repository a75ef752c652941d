#include "fgdesc/toml.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fgdesc::toml {

namespace {

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Removes a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

Value parse_value(const std::string& raw, int line_no);

Value parse_array(const std::string& raw, int line_no) {
  Array items;
  std::string body = strip(raw.substr(1, raw.size() - 2));
  std::size_t i = 0;
  while (i < body.size()) {
    std::size_t j = i;
    bool in_str = false;
    int depth = 0;
    while (j < body.size()) {
      char c = body[j];
      if (c == '"') in_str = !in_str;
      if (!in_str) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == ',' && depth == 0) break;
      }
      ++j;
    }
    std::string item = strip(body.substr(i, j - i));
    if (!item.empty()) items.push_back(parse_value(item, line_no));
    i = j + 1;
  }
  return Value{std::move(items)};
}

Value parse_value(const std::string& raw, int line_no) {
  if (raw.empty())
    throw std::runtime_error("toml: empty value at line " + std::to_string(line_no));
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"')
      throw std::runtime_error("toml: unterminated string at line " +
                               std::to_string(line_no));
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      if (raw[i] == '\\' && i + 2 < raw.size()) {
        ++i;
        switch (raw[i]) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: out += raw[i];
        }
      } else {
        out += raw[i];
      }
    }
    return Value{std::move(out)};
  }
  if (raw.front() == '[') {
    if (raw.back() != ']')
      throw std::runtime_error("toml: unterminated array at line " +
                               std::to_string(line_no));
    return parse_array(raw, line_no);
  }
  // Integer.
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(raw, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("toml: bad value '" + raw + "' at line " +
                             std::to_string(line_no));
  }
  if (pos != raw.size())
    throw std::runtime_error("toml: bad value '" + raw + "' at line " +
                             std::to_string(line_no));
  return Value{static_cast<std::int64_t>(v)};
}

}  // namespace

Document parse(const std::string& text) {
  Document doc;
  Table* current = &doc.root;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(strip_comment(line));
    if (line.empty()) continue;
    if (line.size() >= 4 && line.substr(0, 2) == "[[" &&
        line.substr(line.size() - 2) == "]]") {
      std::string name = strip(line.substr(2, line.size() - 4));
      doc.table_arrays[name].emplace_back();
      current = &doc.table_arrays[name].back();
      continue;
    }
    if (line.front() == '[')
      throw std::runtime_error("toml: plain [table] sections unsupported, line " +
                               std::to_string(line_no));
    std::size_t eq = std::string::npos;
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_str = !in_str;
      if (line[i] == '=' && !in_str) {
        eq = i;
        break;
      }
    }
    if (eq == std::string::npos)
      throw std::runtime_error("toml: expected key = value at line " +
                               std::to_string(line_no));
    std::string key = strip(line.substr(0, eq));
    std::string val = strip(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("toml: empty key at line " + std::to_string(line_no));
    (*current)[key] = parse_value(val, line_no);
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("toml: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace fgdesc::toml
