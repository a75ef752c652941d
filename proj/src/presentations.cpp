#include "fgdesc/presentations.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "fgdesc/catalog.hpp"
#include "fgdesc/toml.hpp"

namespace fgdesc {

namespace {

struct WordParser {
  const std::string& text;
  const std::vector<std::string>& gens;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  int parse_exponent() {
    skip_ws();
    if (pos >= text.size() || text[pos] != '^') return 1;
    ++pos;
    skip_ws();
    bool neg = false;
    if (pos < text.size() && text[pos] == '-') {
      neg = true;
      ++pos;
    }
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      throw std::invalid_argument("word: expected integer exponent");
    int v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      v = v * 10 + (text[pos++] - '0');
    return neg ? -v : v;
  }

  Word parse_seq(bool stop_at_paren) {
    Word out;
    while (true) {
      skip_ws();
      if (pos >= text.size()) break;
      char c = text[pos];
      if (c == ')') {
        if (!stop_at_paren) throw std::invalid_argument("word: unexpected ')'");
        break;
      }
      Word atom;
      if (c == '(') {
        ++pos;
        atom = parse_seq(true);
        skip_ws();
        if (pos >= text.size() || text[pos] != ')')
          throw std::invalid_argument("word: missing ')'");
        ++pos;
      } else {
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
          ++pos;
        std::string name = text.substr(start, pos - start);
        if (name.empty()) throw std::invalid_argument("word: expected generator name");
        auto it = std::find(gens.begin(), gens.end(), name);
        if (it == gens.end())
          throw std::invalid_argument("word: unknown generator '" + name + "'");
        atom.push_back(static_cast<int>(it - gens.begin()) + 1);
      }
      int e = parse_exponent();
      Word powered;
      Word base = e < 0 ? word_inverse(atom) : atom;
      for (int i = 0; i < std::abs(e); ++i)
        powered.insert(powered.end(), base.begin(), base.end());
      out.insert(out.end(), powered.begin(), powered.end());
    }
    return out;
  }
};

}  // namespace

Word free_reduce(Word w) {
  Word out;
  for (int x : w) {
    if (!out.empty() && out.back() == -x) out.pop_back();
    else out.push_back(x);
  }
  return out;
}

Word word_inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& x : out) x = -x;
  return out;
}

Word word_concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return free_reduce(std::move(out));
}

Word parse_word(const std::string& text, const std::vector<std::string>& gens) {
  WordParser p{text, gens};
  Word w = p.parse_seq(false);
  return free_reduce(std::move(w));
}

std::string render_word(const Word& w, const std::vector<std::string>& gens) {
  if (w.empty()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    int idx = std::abs(w[i]) - 1;
    int run = static_cast<int>(j - i);
    if (!out.empty()) out += ' ';
    out += gens[idx];
    if (w[i] < 0) out += "^-" + std::to_string(run);
    else if (run > 1) out += "^" + std::to_string(run);
    i = j;
  }
  return out;
}

int evaluate_word(const FiniteGroup& g, const Word& w, const std::vector<int>& images) {
  int acc = g.identity();
  for (int x : w) {
    int v = images[std::abs(x) - 1];
    acc = g.mul(acc, x > 0 ? v : g.inv(v));
  }
  return acc;
}

int PresentationSpec::length() const {
  int len = static_cast<int>(generators.size());
  for (const Word& r : relators) len += static_cast<int>(r.size());
  return len;
}

PresentationSpec cyclic_presentation(int p) {
  PresentationSpec s;
  s.name = "C" + std::to_string(p);
  s.order = p;
  s.generators = {"a"};
  s.relators = {Word(p, 1)};
  s.source = "cyclic family";
  return s;
}

PresentationSpec dihedral_presentation(int n) {
  PresentationSpec s;
  s.name = "D" + std::to_string(n);
  s.order = 2 * n;
  s.generators = {"r", "s"};
  s.relators = {parse_word("r^" + std::to_string(n), s.generators),
                parse_word("s^2", s.generators),
                parse_word("(r s)^2", s.generators)};
  s.source = "dihedral family";
  return s;
}

PresentationSpec dicyclic_presentation(int n) {
  PresentationSpec s;
  s.name = "Dic" + std::to_string(n);
  s.order = 4 * n;
  s.generators = {"a", "b"};
  s.relators = {parse_word("a^" + std::to_string(2 * n), s.generators),
                parse_word("b^2 a^-" + std::to_string(n), s.generators),
                parse_word("b^-1 a b a", s.generators)};
  s.source = "dicyclic family";
  return s;
}

std::optional<std::vector<int>> find_generator_images(const FiniteGroup& g,
                                                      const PresentationSpec& pres) {
  int k = static_cast<int>(pres.generators.size());
  if (k == 0) {
    if (g.order() == 1) return std::vector<int>{};
    return std::nullopt;
  }

  // Single-letter power relators bound each generator's element order.
  std::vector<int> order_bound(k, 0);
  for (const Word& r : pres.relators) {
    bool single = !r.empty();
    for (int x : r)
      if (x != r[0]) {
        single = false;
        break;
      }
    if (single && r[0] > 0) {
      int idx = r[0] - 1;
      int e = static_cast<int>(r.size());
      order_bound[idx] = order_bound[idx] == 0 ? e : std::gcd(order_bound[idx], e);
    }
  }
  std::vector<std::vector<int>> candidates(k);
  for (int i = 0; i < k; ++i)
    for (int e = 0; e < g.order(); ++e)
      if (order_bound[i] == 0 || order_bound[i] % g.element_order(e) == 0)
        candidates[i].push_back(e);

  // Relators checked as soon as all their letters are assigned.
  std::vector<int> relator_ready(pres.relators.size(), 0);
  for (std::size_t j = 0; j < pres.relators.size(); ++j) {
    int last = 0;
    for (int x : pres.relators[j]) last = std::max(last, std::abs(x));
    relator_ready[j] = last;  // check once this many generators are assigned
  }

  std::vector<int> images(k, -1);
  std::function<std::optional<std::vector<int>>(int)> rec =
      [&](int depth) -> std::optional<std::vector<int>> {
    if (depth == k) {
      ClosureResult c = closure(g, images);
      if (c.subgroup.order() != g.order()) return std::nullopt;
      return images;
    }
    for (int cand : candidates[depth]) {
      images[depth] = cand;
      bool ok = true;
      for (std::size_t j = 0; j < pres.relators.size() && ok; ++j)
        if (relator_ready[j] == depth + 1 &&
            evaluate_word(g, pres.relators[j], images) != g.identity())
          ok = false;
      if (!ok) continue;
      if (auto r = rec(depth + 1)) return r;
    }
    images[depth] = -1;
    return std::nullopt;
  };
  return rec(0);
}

PresentationCatalog::PresentationCatalog(std::vector<PresentationSpec> entries)
    : entries_(std::move(entries)) {}

const PresentationCatalog& PresentationCatalog::shipped() {
  static const PresentationCatalog* instance = [] {
    toml::Document doc = toml::parse_file(data_dir() + "/presentations.toml");
    std::vector<PresentationSpec> entries;
    for (const auto& t : doc.table_arrays.at("presentation")) {
      PresentationSpec s;
      s.name = t.at("name").as_string();
      s.order = static_cast<int>(t.at("order").as_int());
      for (const auto& v : t.at("generators").as_array())
        s.generators.push_back(v.as_string());
      for (const auto& v : t.at("relators").as_array())
        s.relators.push_back(parse_word(v.as_string(), s.generators));
      s.source = t.count("source") ? t.at("source").as_string() : "";
      if (t.count("lie_rank")) s.lie_rank = static_cast<int>(t.at("lie_rank").as_int());
      if (t.count("field_q")) s.field_q = static_cast<int>(t.at("field_q").as_int());
      entries.push_back(std::move(s));
    }
    return new PresentationCatalog(std::move(entries));
  }();
  return *instance;
}

const PresentationSpec* PresentationCatalog::by_name(const std::string& name) const {
  for (const auto& s : entries_)
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<const PresentationSpec*> PresentationCatalog::by_order(int order) const {
  std::vector<const PresentationSpec*> out;
  for (const auto& s : entries_)
    if (s.order == order) out.push_back(&s);
  std::sort(out.begin(), out.end(),
            [](const PresentationSpec* a, const PresentationSpec* b) {
              return a->name < b->name;
            });
  return out;
}

int PresentationCatalog::max_generators() const {
  int m = 1;
  for (const auto& s : entries_) m = std::max(m, static_cast<int>(s.generators.size()));
  return m;
}

}  // namespace fgdesc
