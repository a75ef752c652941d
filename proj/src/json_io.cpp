#include "fgdesc/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fgdesc/field.hpp"

namespace fgdesc {

using nlohmann::json;

FiniteGroup group_from_json(const std::string& text) {
  json j = json::parse(text);
  std::string label = j.count("label") ? j.at("label").get<std::string>() : "";
  if (j.count("table")) {
    int n = j.at("order").get<int>();
    std::vector<int> table;
    for (const json& r : j.at("table"))
      for (const json& v : r) table.push_back(v.get<int>());
    return FiniteGroup(n, std::move(table), std::move(label));
  }
  if (j.count("permutations")) {
    int degree = j.at("degree").get<int>();
    std::vector<std::vector<int>> gens;
    for (const json& p : j.at("permutations"))
      gens.push_back(parse_cycles(p.get<std::string>(), degree));
    return group_from_permutations(degree, gens, std::move(label));
  }
  throw std::invalid_argument("group json needs 'table' or 'permutations'");
}

std::string group_to_json(const FiniteGroup& g) {
  json j;
  j["order"] = g.order();
  if (!g.label().empty()) j["label"] = g.label();
  json table = json::array();
  for (int a = 0; a < g.order(); ++a) {
    json r = json::array();
    for (int b = 0; b < g.order(); ++b) r.push_back(g.mul(a, b));
    table.push_back(std::move(r));
  }
  j["table"] = std::move(table);
  return j.dump();
}

std::unique_ptr<fo::Structure> structure_from_json(const std::string& text) {
  json j = json::parse(text);
  std::string kind = j.count("kind") ? j.at("kind").get<std::string>() : "group";
  if (kind == "group") {
    auto g = std::make_unique<FiniteGroup>(group_from_json(text));
    struct Owning : fo::GroupStructure {
      std::unique_ptr<FiniteGroup> owned;
      Owning(std::unique_ptr<FiniteGroup> g)
          : fo::GroupStructure(*g), owned(std::move(g)) {}
    };
    return std::make_unique<Owning>(std::move(g));
  }
  if (kind == "zmod")
    return std::make_unique<fo::RingStructure>(
        fo::RingStructure::integers_mod(j.at("m").get<int>()));
  if (kind == "field") {
    FiniteField f(j.at("q").get<int>());
    if (j.count("frobenius_power"))
      return std::make_unique<fo::RingStructure>(
          fo::RingStructure::from_field_with_sigma(
              f, j.at("frobenius_power").get<int>()));
    return std::make_unique<fo::RingStructure>(fo::RingStructure::from_field(f));
  }
  if (kind == "ring") {
    int n = static_cast<int>(j.at("add").size());
    std::vector<int> add, mul;
    for (const json& r : j.at("add"))
      for (const json& v : r) add.push_back(v.get<int>());
    for (const json& r : j.at("mul"))
      for (const json& v : r) mul.push_back(v.get<int>());
    auto s = std::make_unique<fo::RingStructure>(
        n, std::move(add), std::move(mul), j.at("zero").get<int>(),
        j.at("one").get<int>());
    if (j.count("sigma")) s->set_sigma(j.at("sigma").get<std::vector<int>>());
    return s;
  }
  throw std::invalid_argument("unknown structure kind: " + kind);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace fgdesc
