#include "fgdesc/group.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fgdesc/config.hpp"

namespace fgdesc {

FiniteGroup::FiniteGroup(int order, std::vector<int> table, std::string label)
    : order_(order), table_(std::move(table)), label_(std::move(label)) {
  if (order <= 0) throw std::invalid_argument("group order must be positive");
  if (order > config::kMaxTableOrder)
    throw std::invalid_argument("group order exceeds dense-table bound");
  if (static_cast<int>(table_.size()) != order * order)
    throw std::invalid_argument("multiplication table has wrong size");
  for (int v : table_)
    if (v < 0 || v >= order)
      throw std::invalid_argument("table entry out of range");

  // Latin square.
  std::vector<char> seen(order);
  for (int r = 0; r < order; ++r) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int c = 0; c < order; ++c) {
      int v = mul(r, c);
      if (seen[v]) throw std::invalid_argument("table row is not a permutation");
      seen[v] = 1;
    }
  }
  for (int c = 0; c < order; ++c) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int r = 0; r < order; ++r) {
      int v = mul(r, c);
      if (seen[v]) throw std::invalid_argument("table column is not a permutation");
      seen[v] = 1;
    }
  }

  for (int e = 0; e < order; ++e) {
    bool ok = true;
    for (int a = 0; a < order && ok; ++a)
      if (mul(e, a) != a || mul(a, e) != a) ok = false;
    if (ok) {
      identity_ = e;
      break;
    }
  }
  if (identity_ < 0) throw std::invalid_argument("no identity element");

  inv_.assign(order, -1);
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b)
      if (mul(a, b) == identity_ && mul(b, a) == identity_) {
        inv_[a] = b;
        break;
      }
    if (inv_[a] < 0) throw std::invalid_argument("element without inverse");
  }

  if (order <= 256) {
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        for (int c = 0; c < order; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c)))
            throw std::invalid_argument("multiplication is not associative");
  } else {
    std::mt19937 rng(0x5eed);
    std::uniform_int_distribution<int> d(0, order - 1);
    for (int t = 0; t < 200000; ++t) {
      int a = d(rng), b = d(rng), c = d(rng);
      if (mul(mul(a, b), c) != mul(a, mul(b, c)))
        throw std::invalid_argument("multiplication is not associative");
    }
  }
}

int FiniteGroup::pow(int a, long long n) const {
  if (n < 0) return pow(inv(a), -n);
  int acc = identity_;
  int base = a;
  while (n > 0) {
    if (n & 1) acc = mul(acc, base);
    base = mul(base, base);
    n >>= 1;
  }
  return acc;
}

int FiniteGroup::element_order(int a) const {
  int x = a, k = 1;
  while (x != identity_) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

std::vector<int> FiniteGroup::order_profile() const {
  std::vector<int> p(order_);
  for (int a = 0; a < order_; ++a) p[a] = element_order(a);
  std::sort(p.begin(), p.end());
  return p;
}

Subgroup::Subgroup(const FiniteGroup& g, std::vector<int> elems)
    : parent(&g), elements(std::move(elems)) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  if (!contains(g.identity()))
    throw std::invalid_argument("subgroup must contain the identity");
  for (int a : elements) {
    if (!contains(g.inv(a)))
      throw std::invalid_argument("subgroup not closed under inverse");
    for (int b : elements)
      if (!contains(g.mul(a, b)))
        throw std::invalid_argument("subgroup not closed under product");
  }
}

bool Subgroup::contains(int e) const {
  return std::binary_search(elements.begin(), elements.end(), e);
}

bool Subgroup::is_normal() const {
  const FiniteGroup& g = *parent;
  for (int x = 0; x < g.order(); ++x)
    for (int a : elements)
      if (!contains(g.conj(a, x))) return false;
  return true;
}

int ClosureResult::word_length(int element) const {
  const auto& elems = subgroup.elements;
  auto it = std::lower_bound(elems.begin(), elems.end(), element);
  if (it == elems.end() || *it != element)
    throw std::out_of_range("element not in closure");
  return static_cast<int>(words[it - elems.begin()].size());
}

ClosureResult closure(const FiniteGroup& g, const std::vector<int>& gens) {
  // BFS from the identity by right multiplication; yields shortest words.
  std::vector<int> word_of(g.order(), -2);  // -2 unseen
  std::vector<std::pair<int, int>> back(g.order(), {-1, -1});
  std::queue<int> q;
  word_of[g.identity()] = -1;  // empty word
  q.push(g.identity());
  while (!q.empty()) {
    int e = q.front();
    q.pop();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      int f = g.mul(e, gens[i]);
      if (word_of[f] == -2) {
        word_of[f] = 0;
        back[f] = {e, static_cast<int>(i)};
        q.push(f);
      }
    }
  }
  std::vector<int> elems;
  for (int e = 0; e < g.order(); ++e)
    if (word_of[e] != -2) elems.push_back(e);
  ClosureResult res;
  res.subgroup = Subgroup(g, elems);
  res.words.resize(res.subgroup.elements.size());
  for (std::size_t i = 0; i < res.subgroup.elements.size(); ++i) {
    std::vector<int> w;
    int e = res.subgroup.elements[i];
    while (back[e].first != -1) {
      w.push_back(back[e].second);
      e = back[e].first;
    }
    std::reverse(w.begin(), w.end());
    res.words[i] = std::move(w);
  }
  return res;
}

Subgroup centralizer(const FiniteGroup& g, const std::vector<int>& s) {
  std::vector<int> elems;
  for (int x = 0; x < g.order(); ++x) {
    bool ok = true;
    for (int y : s)
      if (g.mul(x, y) != g.mul(y, x)) {
        ok = false;
        break;
      }
    if (ok) elems.push_back(x);
  }
  return Subgroup(g, elems);
}

Subgroup center(const FiniteGroup& g) {
  std::vector<int> all(g.order());
  std::iota(all.begin(), all.end(), 0);
  return centralizer(g, all);
}

Subgroup normal_closure(const FiniteGroup& g, const std::vector<int>& s) {
  // Closure of all conjugates; iterate until stable.
  std::vector<int> gens = s;
  while (true) {
    ClosureResult c = closure(g, gens);
    std::vector<int> extra;
    for (int a : c.subgroup.elements)
      for (int x = 0; x < g.order(); ++x) {
        int y = g.conj(a, x);
        if (!c.subgroup.contains(y)) extra.push_back(y);
      }
    if (extra.empty()) return c.subgroup;
    gens = c.subgroup.elements;
    gens.insert(gens.end(), extra.begin(), extra.end());
  }
}

QuotientResult quotient(const FiniteGroup& g, const Subgroup& n) {
  if (!n.is_normal()) throw std::invalid_argument("subgroup is not normal");
  int go = g.order();
  std::vector<int> proj(go, -1);
  std::vector<int> reps;
  for (int e = 0; e < go; ++e) {
    if (proj[e] >= 0) continue;
    int idx = static_cast<int>(reps.size());
    reps.push_back(e);
    for (int a : n.elements) proj[g.mul(e, a)] = idx;  // coset eN = Ne
  }
  int qo = static_cast<int>(reps.size());
  std::vector<int> table(qo * qo);
  for (int i = 0; i < qo; ++i)
    for (int j = 0; j < qo; ++j)
      table[i * qo + j] = proj[g.mul(reps[i], reps[j])];
  QuotientResult res{FiniteGroup(qo, std::move(table)), std::move(proj)};
  return res;
}

SubgroupAsGroup subgroup_as_group(const Subgroup& h) {
  const FiniteGroup& g = *h.parent;
  int m = h.order();
  std::vector<int> from(g.order(), -1);
  for (int i = 0; i < m; ++i) from[h.elements[i]] = i;
  std::vector<int> table(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      table[i * m + j] = from[g.mul(h.elements[i], h.elements[j])];
  return SubgroupAsGroup{FiniteGroup(m, std::move(table)), h.elements, std::move(from)};
}

namespace {

// Extends the partial map gens[i] -> images[i] to a homomorphism on all of g
// by BFS, or reports inconsistency. Returns the full image vector.
std::optional<std::vector<int>> extend_hom(const FiniteGroup& g,
                                           const FiniteGroup& h,
                                           const std::vector<int>& gens,
                                           const std::vector<int>& images) {
  std::vector<int> f(g.order(), -1);
  f[g.identity()] = h.identity();
  std::queue<int> q;
  q.push(g.identity());
  while (!q.empty()) {
    int e = q.front();
    q.pop();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      int enext = g.mul(e, gens[i]);
      int fnext = h.mul(f[e], images[i]);
      if (f[enext] == -1) {
        f[enext] = fnext;
        q.push(enext);
      } else if (f[enext] != fnext) {
        return std::nullopt;
      }
    }
  }
  // Well-definedness: check the multiplication law on the generated set.
  for (int a = 0; a < g.order(); ++a) {
    if (f[a] == -1) return std::nullopt;  // gens must generate g
    for (int b = 0; b < g.order(); ++b)
      if (f[g.mul(a, b)] != h.mul(f[a], f[b])) return std::nullopt;
  }
  return f;
}

bool bijective(const std::vector<int>& f, int n) {
  std::vector<char> seen(n, 0);
  for (int v : f) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

// Backtracking over generator images with order-profile pruning. If
// `collect` is set, gathers all isomorphisms instead of stopping at one.
void iso_search(const FiniteGroup& g, const FiniteGroup& h,
                const std::vector<int>& gens, std::vector<int>& images,
                std::size_t depth, std::vector<std::vector<int>>& found,
                bool collect) {
  if (!collect && !found.empty()) return;
  if (depth == gens.size()) {
    auto f = extend_hom(g, h, gens, images);
    if (f && bijective(*f, h.order())) found.push_back(std::move(*f));
    return;
  }
  int target_order = g.element_order(gens[depth]);
  for (int cand = 0; cand < h.order(); ++cand) {
    if (h.element_order(cand) != target_order) continue;
    images[depth] = cand;
    // Pairwise product orders must match; full check happens at the leaf.
    bool ok = true;
    for (std::size_t i = 0; i < depth && ok; ++i) {
      if (g.element_order(g.mul(gens[i], gens[depth])) !=
          h.element_order(h.mul(images[i], images[depth])))
        ok = false;
      else if (g.element_order(g.commutator(gens[i], gens[depth])) !=
               h.element_order(h.commutator(images[i], images[depth])))
        ok = false;
    }
    if (!ok) continue;
    iso_search(g, h, gens, images, depth + 1, found, collect);
    if (!collect && !found.empty()) return;
  }
}

}  // namespace

std::vector<int> small_generating_set(const FiniteGroup& g) {
  std::vector<int> gens;
  ClosureResult c = closure(g, gens);
  while (c.subgroup.order() < g.order()) {
    for (int e = 0; e < g.order(); ++e)
      if (!c.subgroup.contains(e)) {
        gens.push_back(e);
        break;
      }
    c = closure(g, gens);
  }
  return gens;
}

std::optional<std::vector<int>> find_isomorphism(const FiniteGroup& g,
                                                 const FiniteGroup& h) {
  if (g.order() != h.order()) return std::nullopt;
  if (g.order_profile() != h.order_profile()) return std::nullopt;
  std::vector<int> gens = small_generating_set(g);
  if (gens.empty()) return std::vector<int>{h.identity()};  // trivial group
  std::vector<int> images(gens.size(), -1);
  std::vector<std::vector<int>> found;
  iso_search(g, h, gens, images, 0, found, false);
  if (found.empty()) return std::nullopt;
  return found.front();
}

bool is_isomorphic(const FiniteGroup& g, const FiniteGroup& h) {
  return find_isomorphism(g, h).has_value();
}

std::vector<std::vector<int>> automorphisms(const FiniteGroup& g) {
  std::vector<int> gens = small_generating_set(g);
  std::vector<std::vector<int>> found;
  if (gens.empty()) {
    found.push_back({g.identity()});
    return found;
  }
  std::vector<int> images(gens.size(), -1);
  iso_search(g, g, gens, images, 0, found, true);
  std::sort(found.begin(), found.end());
  return found;
}

bool is_abelian(const FiniteGroup& g) {
  for (int a = 0; a < g.order(); ++a)
    for (int b = a + 1; b < g.order(); ++b)
      if (g.mul(a, b) != g.mul(b, a)) return false;
  return true;
}

bool is_simple(const FiniteGroup& g) {
  if (g.order() == 1) return false;
  for (int e = 0; e < g.order(); ++e) {
    if (e == g.identity()) continue;
    Subgroup n = normal_closure(g, {e});
    if (n.order() != g.order()) return false;
  }
  return true;
}

FiniteGroup cyclic_group(int n) {
  std::vector<int> t(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i * n + j] = (i + j) % n;
  return FiniteGroup(n, std::move(t), "C" + std::to_string(n));
}

FiniteGroup dihedral_group(int n) {
  // Elements: r^i (i<n), then s r^i. (s r^i)(s r^j) = r^{j-i}.
  int m = 2 * n;
  auto enc = [n](int flip, int rot) { return flip * n + ((rot % n) + n) % n; };
  std::vector<int> t(m * m);
  for (int f1 = 0; f1 < 2; ++f1)
    for (int i = 0; i < n; ++i)
      for (int f2 = 0; f2 < 2; ++f2)
        for (int j = 0; j < n; ++j) {
          int a = enc(f1, i), b = enc(f2, j);
          // r^i * r^j = r^{i+j}; r^i * s r^j = s r^{j-i};
          // s r^i * r^j = s r^{i+j}; s r^i * s r^j = r^{j-i}.
          int v = f2 == 0 ? enc(f1, i + j) : enc(1 - f1, j - i);
          t[a * m + b] = v;
        }
  return FiniteGroup(m, std::move(t), "D" + std::to_string(n));
}

FiniteGroup dicyclic_group(int n) {
  // <a,b | a^{2n}=1, b^2=a^n, b^-1 a b = a^-1>; elements a^i b^f.
  int m = 4 * n;
  auto enc = [n](int i, int f) { return ((i % (2 * n)) + 2 * n) % (2 * n) + f * 2 * n; };
  std::vector<int> t(m * m);
  for (int i = 0; i < 2 * n; ++i)
    for (int f1 = 0; f1 < 2; ++f1)
      for (int j = 0; j < 2 * n; ++j)
        for (int f2 = 0; f2 < 2; ++f2) {
          // (a^i b^f1)(a^j b^f2): move b^f1 past a^j: b a^j = a^-j b.
          int a = enc(i, f1), b = enc(j, f2);
          int i2 = f1 == 0 ? i + j : i - j;
          int v;
          if (f1 + f2 < 2) v = enc(i2, f1 + f2);
          else v = enc(i2 + n, 0);  // b^2 = a^n
          t[a * m + b] = v;
        }
  return FiniteGroup(m, std::move(t), "Dic" + std::to_string(n));
}

namespace {

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

int permutation_parity(const std::vector<int>& p) {
  int n = static_cast<int>(p.size());
  std::vector<char> seen(n, 0);
  int parity = 0;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = p[j]) {
      seen[j] = 1;
      ++len;
    }
    parity ^= (len - 1) & 1;
  }
  return parity;
}

FiniteGroup table_from_perm_list(std::vector<std::vector<int>> elems,
                                 std::string label) {
  std::sort(elems.begin(), elems.end());
  int m = static_cast<int>(elems.size());
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < m; ++i) index[elems[i]] = i;
  int deg = static_cast<int>(elems[0].size());
  std::vector<int> t(static_cast<std::size_t>(m) * m);
  std::vector<int> comp(deg);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      for (int x = 0; x < deg; ++x) comp[x] = elems[j][elems[i][x]];
      t[static_cast<std::size_t>(i) * m + j] = index.at(comp);
    }
  return FiniteGroup(m, std::move(t), std::move(label));
}

}  // namespace

FiniteGroup symmetric_group(int n) {
  return table_from_perm_list(all_permutations(n), "S" + std::to_string(n));
}

FiniteGroup alternating_group(int n) {
  std::vector<std::vector<int>> evens;
  for (auto& p : all_permutations(n))
    if (permutation_parity(p) == 0) evens.push_back(p);
  return table_from_perm_list(std::move(evens), "A" + std::to_string(n));
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  int m = a.order() * b.order();
  auto enc = [&](int x, int y) { return x * b.order() + y; };
  std::vector<int> t(static_cast<std::size_t>(m) * m);
  for (int x1 = 0; x1 < a.order(); ++x1)
    for (int y1 = 0; y1 < b.order(); ++y1)
      for (int x2 = 0; x2 < a.order(); ++x2)
        for (int y2 = 0; y2 < b.order(); ++y2)
          t[static_cast<std::size_t>(enc(x1, y1)) * m + enc(x2, y2)] =
              enc(a.mul(x1, x2), b.mul(y1, y2));
  std::string label = a.label().empty() || b.label().empty()
                          ? ""
                          : a.label() + "x" + b.label();
  return FiniteGroup(m, std::move(t), std::move(label));
}

FiniteGroup semidirect_product(const FiniteGroup& n, const FiniteGroup& h,
                               const std::vector<std::vector<int>>& action) {
  // Elements (a, x) with (a,x)(b,y) = (a * x.b, xy) where x.b = action[x][b].
  int m = n.order() * h.order();
  auto enc = [&](int a, int x) { return a * h.order() + x; };
  std::vector<int> t(static_cast<std::size_t>(m) * m);
  for (int a = 0; a < n.order(); ++a)
    for (int x = 0; x < h.order(); ++x)
      for (int b = 0; b < n.order(); ++b)
        for (int y = 0; y < h.order(); ++y)
          t[static_cast<std::size_t>(enc(a, x)) * m + enc(b, y)] =
              enc(n.mul(a, action[x][b]), h.mul(x, y));
  return FiniteGroup(m, std::move(t));
}

FiniteGroup group_from_permutations(int degree,
                                    const std::vector<std::vector<int>>& gens,
                                    std::string label) {
  std::vector<int> id(degree);
  std::iota(id.begin(), id.end(), 0);
  std::set<std::vector<int>> seen{id};
  std::queue<std::vector<int>> q;
  q.push(id);
  while (!q.empty()) {
    std::vector<int> cur = q.front();
    q.pop();
    for (const auto& g : gens) {
      std::vector<int> next(degree);
      for (int x = 0; x < degree; ++x) next[x] = g[cur[x]];
      if (seen.insert(next).second) {
        if (static_cast<int>(seen.size()) > config::kMaxTableOrder)
          throw std::invalid_argument("generated group exceeds table bound");
        q.push(next);
      }
    }
  }
  return table_from_perm_list(std::vector<std::vector<int>>(seen.begin(), seen.end()),
                              std::move(label));
}

std::vector<int> parse_cycles(const std::string& text, int degree) {
  std::vector<int> p(degree);
  std::iota(p.begin(), p.end(), 0);
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] != '(') throw std::invalid_argument("expected '(' in cycle notation");
    ++i;
    std::vector<int> cyc;
    while (i < text.size() && text[i] != ')') {
      if (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',') {
        ++i;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw std::invalid_argument("expected point in cycle notation");
      int v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
        v = v * 10 + (text[i++] - '0');
      if (v < 1 || v > degree) throw std::invalid_argument("point out of range");
      cyc.push_back(v - 1);
    }
    if (i == text.size()) throw std::invalid_argument("unterminated cycle");
    ++i;  // ')'
    for (std::size_t j = 0; j < cyc.size(); ++j)
      p[cyc[j]] = cyc[(j + 1) % cyc.size()];
  }
  return p;
}

}  // namespace fgdesc
