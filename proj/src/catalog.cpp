#include "fgdesc/catalog.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "fgdesc/config.hpp"
#include "fgdesc/toml.hpp"

#ifndef FGDESC_DATA_DIR_DEFAULT
#define FGDESC_DATA_DIR_DEFAULT "data"
#endif

namespace fgdesc {

std::string data_dir() {
  if (const char* env = std::getenv("FGDESC_DATA_DIR")) return env;
  return FGDESC_DATA_DIR_DEFAULT;
}

namespace {

// ---------------------------------------------------------------------------
// Canonical Cayley-table search.
//
// We look for tables where element 0 is the identity and element 1 has
// maximal element order d. Labels are organized in blocks of d: label
// b*d + j stands for 1^j * r_b, where r_b is the representative of the b-th
// left <1>-coset (r_0 = identity). Representatives are opened in the order
// the search first needs a new element, so every group with maximal order d
// is reached by at least one run of choices; duplicates are removed by
// isomorphism rejection. Rows of sibling labels are shifts of each other,
// which keeps the branching confined to representative rows.
// ---------------------------------------------------------------------------
class TableSearch {
 public:
  TableSearch(int n, int d, std::vector<FiniteGroup>& out)
      : n_(n), d_(d), out_(out), t_(n * n, -1), rowmask_(n, 0), colmask_(n, 0) {}

  void run() {
    open_block();  // block 0: the cyclic group <1>
    if (!flush()) return;
    search();
  }

 private:
  struct TrailEntry {
    int a, x;    // cell, or a = -1 for a block-open marker
  };

  int n_, d_;
  std::vector<FiniteGroup>& out_;
  std::vector<int> t_;
  std::vector<std::uint32_t> rowmask_, colmask_;
  int opened_ = 0;  // number of opened blocks
  std::vector<TrailEntry> trail_;
  std::vector<std::pair<int, int>> worklist_;
  bool failed_ = false;

  int cell(int a, int x) const { return t_[a * n_ + x]; }
  int opened_labels() const { return opened_ * d_; }
  int shift(int v, int k) const {
    int b = v / d_, off = v % d_;
    return b * d_ + (((off + k) % d_) + d_) % d_;
  }

  void set(int a, int x, int v) {
    if (failed_) return;
    // Sibling rows within a block are shifts of the representative row, so a
    // single logical assignment fixes all d cells of the column in the block.
    int b = a / d_, j = a % d_;
    for (int j2 = 0; j2 < d_; ++j2) {
      int a2 = b * d_ + j2;
      int v2 = shift(v, j2 - j);
      int cur = t_[a2 * n_ + x];
      if (cur == v2) continue;
      if (cur != -1) {
        failed_ = true;
        return;
      }
      if ((rowmask_[a2] >> v2) & 1 || (colmask_[x] >> v2) & 1) {
        failed_ = true;
        return;
      }
      t_[a2 * n_ + x] = v2;
      rowmask_[a2] |= 1u << v2;
      colmask_[x] |= 1u << v2;
      trail_.push_back({a2, x});
      worklist_.push_back({a2, x});
    }
  }

  void open_block() {
    int b = opened_;
    trail_.push_back({-1, 0});
    ++opened_;
    // Row 0 on the new columns (sibling propagation fills rows 1..d-1):
    // 1^i * (1^j r_b) = 1^{i+j} r_b.
    for (int j = 0; j < d_ && !failed_; ++j) set(0, b * d_ + j, b * d_ + j);
    // Identity column: the sibling rule fills the rest of the block.
    if (!failed_) set(b * d_, 0, b * d_);
    // Maximal element order d = 2 forces every element to be an involution.
    if (d_ == 2 && b > 0) {
      if (!failed_) set(b * d_, b * d_, 0);
      if (!failed_) set(b * d_ + 1, b * d_ + 1, 0);
    }
  }

  // Associativity closure over the pending assignments.
  bool flush() {
    while (!worklist_.empty() && !failed_) {
      auto [a, b] = worklist_.back();
      worklist_.pop_back();
      propagate(a, b);
    }
    if (failed_) worklist_.clear();
    return !failed_;
  }

  void derive(int a, int x, int v) {
    int cur = cell(a, x);
    if (cur == v) return;
    if (cur != -1) {
      failed_ = true;
      return;
    }
    set(a, x, v);
  }

  void propagate(int a, int b) {
    int c = cell(a, b);
    int lim = opened_labels();
    // (p, a, b): t[p][c] = t[t[p][a]][b]
    for (int p = 0; p < lim && !failed_; ++p) {
      int u = cell(p, a);
      if (u == -1) continue;
      int x1 = cell(p, c), x2 = cell(u, b);
      if (x1 != -1 && x2 == -1) derive(u, b, x1);
      else if (x2 != -1 && x1 == -1) derive(p, c, x2);
      else if (x1 != -1 && x1 != x2) failed_ = true;
    }
    // (a, b, r): t[a][t[b][r]] = t[c][r]
    for (int r = 0; r < lim && !failed_; ++r) {
      int w = cell(b, r);
      if (w == -1) continue;
      int x1 = cell(a, w), x2 = cell(c, r);
      if (x1 != -1 && x2 == -1) derive(c, r, x1);
      else if (x2 != -1 && x1 == -1) derive(a, w, x2);
      else if (x1 != -1 && x1 != x2) failed_ = true;
    }
    // (a, q, r) with t[q][r] = b: c = t[t[a][q]][r]
    for (int q = 0; q < lim && !failed_; ++q) {
      int u = cell(a, q);
      if (u == -1) continue;
      for (int r = 0; r < lim && !failed_; ++r)
        if (cell(q, r) == b) derive(u, r, c);
    }
    // (p, q, b) with t[p][q] = a: t[p][t[q][b]] = c
    for (int p = 0; p < lim && !failed_; ++p)
      for (int q = 0; q < lim && !failed_; ++q)
        if (cell(p, q) == a) {
          int w = cell(q, b);
          if (w != -1) derive(p, w, c);
        }
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      auto [a, x] = trail_.back();
      trail_.pop_back();
      if (a == -1) {
        --opened_;
        continue;
      }
      int v = t_[a * n_ + x];
      t_[a * n_ + x] = -1;
      rowmask_[a] &= ~(1u << v);
      colmask_[x] &= ~(1u << v);
    }
    worklist_.clear();
    failed_ = false;
  }

  // Unknown cell in the opened region with the fewest legal values.
  bool best_cell(int& ba, int& bx, std::vector<int>& values) {
    int lim = opened_labels();
    int best = -1;
    std::vector<int> cand;
    for (int a = 0; a < lim; ++a)
      for (int x = 0; x < lim; ++x) {
        if (cell(a, x) != -1) continue;
        cand.clear();
        for (int v = 0; v < lim; ++v)
          if (!((rowmask_[a] >> v) & 1) && !((colmask_[x] >> v) & 1))
            cand.push_back(v);
        int extra = opened_ < n_ / d_ ? 1 : 0;  // the fresh representative
        int total = static_cast<int>(cand.size()) + extra;
        if (best == -1 || total < best) {
          best = total;
          ba = a;
          bx = x;
          values = cand;
          if (extra) values.push_back(-2);  // marker: open new block
          if (best <= 1) return true;
        }
      }
    return best != -1;
  }

  void complete() {
    // All cells set; validate and keep one representative per class.
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
          if (cell(cell(a, b), c) != cell(a, cell(b, c))) return;
    FiniteGroup g(n_, t_);
    int maxord = 0;
    for (int e = 0; e < n_; ++e) maxord = std::max(maxord, g.element_order(e));
    if (maxord != d_) return;  // found in its own maximal-order branch
    for (const FiniteGroup& kept : out_)
      if (is_isomorphic(kept, g)) return;
    out_.push_back(std::move(g));
  }

  void search() {
    if (opened_ < n_ / d_) {
      // If the opened region is complete, adjoin the next generator.
      bool has_unknown = false;
      int lim = opened_labels();
      for (int a = 0; a < lim && !has_unknown; ++a)
        for (int x = 0; x < lim; ++x)
          if (cell(a, x) == -1) {
            has_unknown = true;
            break;
          }
      if (!has_unknown) {
        std::size_t mark = trail_.size();
        open_block();
        if (flush()) search();
        undo_to(mark);
        return;
      }
    }
    int a = -1, x = -1;
    std::vector<int> values;
    if (!best_cell(a, x, values)) {
      complete();
      return;
    }
    for (int v : values) {
      std::size_t mark = trail_.size();
      if (v == -2) {
        int fresh = opened_labels();
        open_block();
        if (!failed_) set(a, x, fresh);
      } else {
        set(a, x, v);
      }
      if (flush()) search();
      undo_to(mark);
    }
  }
};

// Row-major backtracking with Latin + associativity propagation only; no
// canonical labeling. Exponentially many labeled copies, so n <= 8 in tests.
class NaiveSearch {
 public:
  NaiveSearch(int n, std::vector<FiniteGroup>& out)
      : n_(n), out_(out), t_(n * n, -1), rowmask_(n, 0), colmask_(n, 0) {}

  void run() {
    for (int j = 0; j < n_; ++j) {
      set(0, j, j);
      if (j) set(j, 0, j);
    }
    if (!flush()) return;
    search();
  }

 private:
  int n_;
  std::vector<FiniteGroup>& out_;
  std::vector<int> t_;
  std::vector<std::uint32_t> rowmask_, colmask_;
  std::vector<std::pair<int, int>> trail_;
  std::vector<std::pair<int, int>> worklist_;
  bool failed_ = false;

  int cell(int a, int x) const { return t_[a * n_ + x]; }

  void set(int a, int x, int v) {
    if (failed_) return;
    int cur = cell(a, x);
    if (cur == v) return;
    if (cur != -1 || ((rowmask_[a] >> v) & 1) || ((colmask_[x] >> v) & 1)) {
      failed_ = true;
      return;
    }
    t_[a * n_ + x] = v;
    rowmask_[a] |= 1u << v;
    colmask_[x] |= 1u << v;
    trail_.push_back({a, x});
    worklist_.push_back({a, x});
  }

  bool flush() {
    while (!worklist_.empty() && !failed_) {
      auto [a, b] = worklist_.back();
      worklist_.pop_back();
      propagate(a, b);
    }
    if (failed_) worklist_.clear();
    return !failed_;
  }

  void propagate(int a, int b) {
    int c = cell(a, b);
    for (int p = 0; p < n_ && !failed_; ++p) {
      int u = cell(p, a);
      if (u == -1) continue;
      int x1 = cell(p, c), x2 = cell(u, b);
      if (x1 != -1 && x2 == -1) set(u, b, x1);
      else if (x2 != -1 && x1 == -1) set(p, c, x2);
      else if (x1 != -1 && x1 != x2) failed_ = true;
    }
    for (int r = 0; r < n_ && !failed_; ++r) {
      int w = cell(b, r);
      if (w == -1) continue;
      int x1 = cell(a, w), x2 = cell(c, r);
      if (x1 != -1 && x2 == -1) set(c, r, x1);
      else if (x2 != -1 && x1 == -1) set(a, w, x2);
      else if (x1 != -1 && x1 != x2) failed_ = true;
    }
    for (int q = 0; q < n_ && !failed_; ++q) {
      int u = cell(a, q);
      if (u == -1) continue;
      for (int r = 0; r < n_ && !failed_; ++r)
        if (cell(q, r) == b) {
          int cur = cell(u, r);
          if (cur == -1) set(u, r, c);
          else if (cur != c) failed_ = true;
        }
    }
    for (int p = 0; p < n_ && !failed_; ++p)
      for (int q = 0; q < n_ && !failed_; ++q)
        if (cell(p, q) == a) {
          int w = cell(q, b);
          if (w != -1) {
            int cur = cell(p, w);
            if (cur == -1) set(p, w, c);
            else if (cur != c) failed_ = true;
          }
        }
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      auto [a, x] = trail_.back();
      trail_.pop_back();
      int v = t_[a * n_ + x];
      t_[a * n_ + x] = -1;
      rowmask_[a] &= ~(1u << v);
      colmask_[x] &= ~(1u << v);
    }
    worklist_.clear();
    failed_ = false;
  }

  void search() {
    int a = -1, x = -1;
    for (int i = 0; i < n_ * n_ && a == -1; ++i)
      if (t_[i] == -1) {
        a = i / n_;
        x = i % n_;
      }
    if (a == -1) {
      for (int p = 0; p < n_; ++p)
        for (int q = 0; q < n_; ++q)
          for (int r = 0; r < n_; ++r)
            if (cell(cell(p, q), r) != cell(p, cell(q, r))) return;
      FiniteGroup g(n_, t_);
      for (const FiniteGroup& kept : out_)
        if (is_isomorphic(kept, g)) return;
      out_.push_back(std::move(g));
      return;
    }
    for (int v = 0; v < n_; ++v) {
      if (((rowmask_[a] >> v) & 1) || ((colmask_[x] >> v) & 1)) continue;
      std::size_t mark = trail_.size();
      set(a, x, v);
      if (flush()) search();
      undo_to(mark);
    }
  }
};

std::vector<int> divisors(int n) {
  std::vector<int> ds;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) ds.push_back(d);
  return ds;
}

void append_if_new(std::vector<FiniteGroup>& list, FiniteGroup g) {
  for (const FiniteGroup& kept : list)
    if (is_isomorphic(kept, g)) return;
  list.push_back(std::move(g));
}

// Cyclic + dicyclic + all semidirect products N x| H over smaller catalogs
// (direct products arise from the trivial action).
std::vector<FiniteGroup> enumerate_curated(int n) {
  std::vector<FiniteGroup> out;
  append_if_new(out, cyclic_group(n));
  if (n % 4 == 0) append_if_new(out, dicyclic_group(n / 4));
  if (n % 2 == 0 && n >= 6) append_if_new(out, dihedral_group(n / 2));
  for (int d : divisors(n)) {
    if (d == 1 || d == n) continue;
    auto ns = enumerate_groups(d);
    auto hs = enumerate_groups(n / d);
    for (const FiniteGroup& N : ns->groups)
      for (const FiniteGroup& H : hs->groups)
        for (const auto& action : automorphism_actions(N, H))
          append_if_new(out, semidirect_product(N, H, action));
  }
  std::sort(out.begin(), out.end(),
            [](const FiniteGroup& a, const FiniteGroup& b) {
              return a.raw_table() < b.raw_table();
            });
  return out;
}

int expected_count(int n) {
  static std::map<int, int> counts;
  static std::once_flag flag;
  std::call_once(flag, [] {
    toml::Document doc = toml::parse_file(data_dir() + "/group_counts.toml");
    for (const auto& t : doc.table_arrays.at("order"))
      counts[static_cast<int>(t.at("n").as_int())] =
          static_cast<int>(t.at("count").as_int());
  });
  auto it = counts.find(n);
  if (it == counts.end())
    throw std::out_of_range("no completeness count for order " + std::to_string(n));
  return it->second;
}

}  // namespace

std::vector<FiniteGroup> enumerate_groups_backtracking(int n) {
  std::vector<FiniteGroup> out;
  if (n == 1) {
    out.push_back(FiniteGroup(1, {0}, "C1"));
    return out;
  }
  for (int d : divisors(n)) {
    if (d < 2) continue;
    TableSearch(n, d, out).run();
  }
  std::sort(out.begin(), out.end(),
            [](const FiniteGroup& a, const FiniteGroup& b) {
              return a.raw_table() < b.raw_table();
            });
  return out;
}

std::vector<FiniteGroup> enumerate_groups_naive(int n) {
  std::vector<FiniteGroup> out;
  if (n == 1) {
    out.push_back(FiniteGroup(1, {0}, "C1"));
    return out;
  }
  NaiveSearch(n, out).run();
  std::sort(out.begin(), out.end(),
            [](const FiniteGroup& a, const FiniteGroup& b) {
              return a.raw_table() < b.raw_table();
            });
  return out;
}

std::shared_ptr<const GroupCatalog> enumerate_groups(int n) {
  static std::map<int, std::shared_ptr<const GroupCatalog>> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  if (n < 1 || n > config::kMaxCatalogOrder)
    throw std::out_of_range("catalog order out of range: " + std::to_string(n));

  auto catalog = std::make_shared<GroupCatalog>();
  catalog->order = n;
  if (n <= config::kBruteForceCatalogOrder) {
    catalog->groups = enumerate_groups_backtracking(n);
  } else {
    catalog->groups = enumerate_curated(n);
    int expected = expected_count(n);
    if (static_cast<int>(catalog->groups.size()) != expected)
      throw std::logic_error("curated catalog for order " + std::to_string(n) +
                             " has " + std::to_string(catalog->groups.size()) +
                             " groups, expected " + std::to_string(expected));
  }
  for (std::size_t i = 0; i < catalog->groups.size(); ++i)
    if (catalog->groups[i].label().empty())
      catalog->groups[i].set_label("G" + std::to_string(n) + "#" +
                                   std::to_string(i + 1));
  catalog->complete = true;

  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(n, std::move(catalog));
  return it->second;
}

std::vector<std::vector<std::vector<int>>> automorphism_actions(
    const FiniteGroup& n, const FiniteGroup& h) {
  std::vector<std::vector<int>> auts = automorphisms(n);
  int m = static_cast<int>(auts.size());
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < m; ++i) index[auts[i]] = i;
  // Aut(N) as a table; product (i, j) applies j first, then i, so that a
  // homomorphism image satisfies action[x*y] = action[x] after action[y].
  std::vector<int> table(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      std::vector<int> comp(n.order());
      for (int e = 0; e < n.order(); ++e) comp[e] = auts[i][auts[j][e]];
      table[i * m + j] = index.at(comp);
    }
  FiniteGroup aut_group(m, std::move(table));

  std::vector<std::vector<std::vector<int>>> actions;
  std::vector<int> gens = small_generating_set(h);
  // Backtrack over generator images; the identity-generated (trivial) action
  // appears first because images are scanned in index order.
  std::vector<int> images(gens.size(), 0);
  std::vector<int> f(h.order());
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (depth == gens.size()) {
      // Extend to all of H; reject inconsistent image tuples.
      std::vector<int> hom(h.order(), -1);
      hom[h.identity()] = aut_group.identity();
      std::vector<int> stack{h.identity()};
      while (!stack.empty()) {
        int e = stack.back();
        stack.pop_back();
        for (std::size_t i = 0; i < gens.size(); ++i) {
          int enext = h.mul(e, gens[i]);
          int inext = aut_group.mul(hom[e], images[i]);
          if (hom[enext] == -1) {
            hom[enext] = inext;
            stack.push_back(enext);
          } else if (hom[enext] != inext) {
            return;
          }
        }
      }
      for (int a = 0; a < h.order(); ++a)
        for (int b = 0; b < h.order(); ++b)
          if (hom[h.mul(a, b)] != aut_group.mul(hom[a], hom[b])) return;
      std::vector<std::vector<int>> action(h.order());
      for (int x = 0; x < h.order(); ++x) action[x] = auts[hom[x]];
      actions.push_back(std::move(action));
      return;
    }
    int g_order = h.element_order(gens[depth]);
    for (int cand = 0; cand < m; ++cand) {
      if (g_order % aut_group.element_order(cand) != 0) continue;
      images[depth] = cand;
      rec(depth + 1);
    }
  };
  if (gens.empty()) {
    std::vector<std::vector<int>> action(h.order());
    std::vector<int> id(n.order());
    std::iota(id.begin(), id.end(), 0);
    for (int x = 0; x < h.order(); ++x) action[x] = id;
    actions.push_back(std::move(action));
  } else {
    rec(0);
  }
  return actions;
}

}  // namespace fgdesc
