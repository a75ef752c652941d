#include "fgdesc/extension.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

#include "fgdesc/config.hpp"

namespace fgdesc {

namespace {

bool is_automorphism_of(const FiniteGroup& n, const std::vector<int>& f) {
  if (static_cast<int>(f.size()) != n.order()) return false;
  std::vector<char> seen(n.order(), 0);
  for (int v : f) {
    if (v < 0 || v >= n.order() || seen[v]) return false;
    seen[v] = 1;
  }
  for (int a = 0; a < n.order(); ++a)
    for (int b = 0; b < n.order(); ++b)
      if (f[n.mul(a, b)] != n.mul(f[a], f[b])) return false;
  return true;
}

std::vector<int> invert_perm(const std::vector<int>& p) {
  std::vector<int> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
  return q;
}

}  // namespace

std::vector<ExtensionData> enumerate_extensions(
    const FiniteGroup& n, const FiniteGroup& h, const std::vector<int>& h_gens,
    const std::vector<std::vector<int>>& action) {
  const int no = n.order(), ho = h.order();
  if (static_cast<int>(action.size()) != ho)
    throw std::invalid_argument("action must give one automorphism per H element");
  for (const auto& f : action)
    if (!is_automorphism_of(n, f))
      throw std::invalid_argument("action entry is not an automorphism of N");
  {
    const auto& at_id = action[h.identity()];
    for (int a = 0; a < no; ++a)
      if (at_id[a] != a)
        throw std::invalid_argument("action at the identity must be trivial");
  }
  if (std::pow(static_cast<double>(no), static_cast<double>(ho) * ho) >
      config::kExtensionEnumBudget)
    throw BudgetExceeded("factor-set enumeration budget exceeded");

  // Left-conjugation twist: theta_x = action[x]^-1.
  std::vector<std::vector<int>> theta(ho);
  for (int x = 0; x < ho; ++x) theta[x] = invert_perm(action[x]);

  // Unknown cells (x, y), both non-identity, in row-major index order.
  const int eH = h.identity();
  std::vector<int> cell_pos(ho * ho, -1);
  std::vector<std::pair<int, int>> cells;
  for (int x = 0; x < ho; ++x)
    for (int y = 0; y < ho; ++y)
      if (x != eH && y != eH) {
        cell_pos[x * ho + y] = static_cast<int>(cells.size());
        cells.push_back({x, y});
      }
  const int ncells = static_cast<int>(cells.size());

  // Cocycle equations grouped by the last unknown cell they mention.
  struct Eq {
    int x, y, z;
  };
  std::vector<std::vector<Eq>> eqs_at(ncells);
  auto pos_of = [&](int x, int y) { return cell_pos[x * ho + y]; };
  for (int x = 0; x < ho; ++x)
    for (int y = 0; y < ho; ++y)
      for (int z = 0; z < ho; ++z) {
        int ready = -1;
        for (int p : {pos_of(x, y), pos_of(h.mul(x, y), z), pos_of(y, z),
                      pos_of(x, h.mul(y, z))})
          ready = std::max(ready, p);
        if (ready >= 0) eqs_at[ready].push_back({x, y, z});
      }

  std::vector<int> f(ho * ho, -1);
  for (int x = 0; x < ho; ++x) {
    f[x * ho + eH] = n.identity();
    f[eH * ho + x] = n.identity();
  }

  auto eq_holds = [&](const Eq& e) {
    int xy = h.mul(e.x, e.y), yz = h.mul(e.y, e.z);
    int lhs = n.mul(f[e.x * ho + e.y], f[xy * ho + e.z]);
    int rhs = n.mul(theta[e.x][f[e.y * ho + e.z]], f[e.x * ho + yz]);
    return lhs == rhs;
  };
  auto compat_holds = [&](int x, int y) {
    int xy = h.mul(x, y);
    int c = f[x * ho + y];
    for (int a = 0; a < no; ++a)
      if (theta[x][theta[y][a]] != n.mul(n.mul(c, theta[xy][a]), n.inv(c)))
        return false;
    return true;
  };

  std::vector<ExtensionData> out;
  std::function<void(int)> rec = [&](int pos) {
    if (pos == ncells) {
      // Build the table: (a, x)(b, y) = (a theta_x(b) f(x,y), xy).
      int m = no * ho;
      std::vector<int> table(static_cast<std::size_t>(m) * m);
      for (int a = 0; a < no; ++a)
        for (int x = 0; x < ho; ++x)
          for (int b = 0; b < no; ++b)
            for (int y = 0; y < ho; ++y) {
              int val = n.mul(n.mul(a, theta[x][b]), f[x * ho + y]);
              table[static_cast<std::size_t>(a * ho + x) * m + (b * ho + y)] =
                  val * ho + h.mul(x, y);
            }
      ExtensionData ext{FiniteGroup(m, std::move(table))};
      ext.n_order = no;
      ext.h_order = ho;
      ext.h_gens = h_gens;
      ext.factor_set = f;
      ext.proj_h.resize(m);
      ext.kernel_to_n.assign(m, -1);
      for (int a = 0; a < no; ++a)
        for (int x = 0; x < ho; ++x) {
          ext.proj_h[a * ho + x] = x;
          if (x == eH) {
            ext.kernel.push_back(a * ho + x);
            ext.kernel_to_n[a * ho + x] = a;
          }
        }
      for (int g : h_gens) ext.lifts.push_back(n.identity() * ho + g);
      for (std::size_t i = 0; i < ext.lifts.size(); ++i) {
        std::vector<int> act(no);
        int s = ext.lifts[i];
        for (int a = 0; a < no; ++a) {
          int conj = ext.e.mul(ext.e.mul(ext.e.inv(s), ext.encode(a, eH)), s);
          act[a] = ext.kernel_to_n[conj];
        }
        ext.action.push_back(std::move(act));
      }
      out.push_back(std::move(ext));
      return;
    }
    auto [x, y] = cells[pos];
    for (int v = 0; v < no; ++v) {
      f[x * ho + y] = v;
      if (!compat_holds(x, y)) continue;
      bool ok = true;
      for (const Eq& e : eqs_at[pos])
        if (!eq_holds(e)) {
          ok = false;
          break;
        }
      if (ok) rec(pos + 1);
    }
    f[x * ho + y] = -1;
  };
  rec(0);
  return out;
}

std::optional<std::vector<int>> over_n_isomorphism(const ExtensionData& e1,
                                                   const ExtensionData& e2) {
  if (e1.n_order != e2.n_order || e1.h_order != e2.h_order) return std::nullopt;
  if (e1.h_gens != e2.h_gens) return std::nullopt;
  const FiniteGroup& g1 = e1.e;
  const FiniteGroup& g2 = e2.e;
  const int ho = e1.h_order;

  // Words reaching each H element over the generators (BFS, inverses too).
  std::vector<std::vector<std::pair<int, int>>> word(ho);  // (gen idx, sign)
  {
    std::vector<char> seen(ho, 0);
    // H multiplication recovered through either projection (they agree).
    std::queue<int> q;
    int eH = e1.proj_h[g1.identity()];
    seen[eH] = 1;
    q.push(eH);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (std::size_t i = 0; i < e1.h_gens.size(); ++i) {
        for (int sign : {+1, -1}) {
          // Multiply in E1 and project; avoids needing H itself here.
          int lift = e1.lifts[i];
          int step = sign > 0 ? lift : g1.inv(lift);
          // Find a representative of x: (1, x).
          int rep = g1.identity();
          for (int el = 0; el < g1.order(); ++el)
            if (e1.proj_h[el] == x) {
              rep = el;
              break;
            }
          int y = e1.proj_h[g1.mul(rep, step)];
          if (!seen[y]) {
            seen[y] = 1;
            word[y] = word[x];
            word[y].push_back({static_cast<int>(i), sign});
            q.push(y);
          }
        }
      }
    }
    for (int x = 0; x < ho; ++x)
      if (!seen[x]) return std::nullopt;  // gens do not generate H
  }

  auto eval_word = [](const FiniteGroup& g, const std::vector<int>& lifts,
                      const std::vector<std::pair<int, int>>& w) {
    int acc = g.identity();
    for (auto [i, sign] : w)
      acc = g.mul(acc, sign > 0 ? lifts[i] : g.inv(lifts[i]));
    return acc;
  };

  // Candidate map: a * w_x(lifts1) -> a * w_x(lifts2); the unique option for
  // an isomorphism fixing N pointwise and matching the lifts.
  std::vector<int> fmap(g1.order(), -1);
  for (int u = 0; u < g1.order(); ++u) {
    int x = e1.proj_h[u];
    int w1 = eval_word(g1, e1.lifts, word[x]);
    int a = g1.mul(u, g1.inv(w1));  // in kernel
    int an = e1.kernel_to_n[a];
    if (an < 0) return std::nullopt;
    int w2 = eval_word(g2, e2.lifts, word[x]);
    fmap[u] = g2.mul(e2.encode(an, e2.proj_h[g2.identity()]), w2);
  }
  // Must be a bijective homomorphism fixing the kernel pointwise.
  std::vector<char> seen(g2.order(), 0);
  for (int v : fmap) {
    if (v < 0 || seen[v]) return std::nullopt;
    seen[v] = 1;
  }
  for (int u = 0; u < g1.order(); ++u)
    for (int v = 0; v < g1.order(); ++v)
      if (fmap[g1.mul(u, v)] != g2.mul(fmap[u], fmap[v])) return std::nullopt;
  for (int k : e1.kernel)
    if (fmap[k] != k) return std::nullopt;  // same carrier encoding
  for (std::size_t i = 0; i < e1.lifts.size(); ++i)
    if (fmap[e1.lifts[i]] != e2.lifts[i]) return std::nullopt;
  return fmap;
}

bool over_n_isomorphic_somehow(const ExtensionData& e1, const ExtensionData& e2) {
  if (e1.n_order != e2.n_order || e1.h_order != e2.h_order) return false;
  const FiniteGroup& g1 = e1.e;
  const FiniteGroup& g2 = e2.e;
  // Backtrack over images of the lifts; kernel is fixed pointwise. Images
  // must respect the projection to H elementwise.
  std::vector<int> kernel_gens;
  {
    // Small generating set of the kernel subgroup.
    std::vector<int> acc;
    ClosureResult c = closure(g1, acc);
    while (true) {
      bool extended = false;
      for (int k : e1.kernel)
        if (!c.subgroup.contains(k)) {
          acc.push_back(k);
          c = closure(g1, acc);
          extended = true;
          break;
        }
      if (!extended) break;
    }
    kernel_gens = acc;
  }
  std::vector<int> gens = kernel_gens;
  gens.insert(gens.end(), e1.lifts.begin(), e1.lifts.end());
  std::vector<int> images(gens.size(), -1);
  for (std::size_t i = 0; i < kernel_gens.size(); ++i) images[i] = kernel_gens[i];

  std::function<bool(std::size_t)> rec = [&](std::size_t depth) -> bool {
    if (depth == e1.lifts.size()) {
      std::vector<int> full_gens = gens;
      // Ensure generation of all of E1.
      ClosureResult c = closure(g1, full_gens);
      if (c.subgroup.order() != g1.order()) return false;
      // Extend and validate.
      std::vector<int> f(g1.order(), -1);
      f[g1.identity()] = g2.identity();
      std::queue<int> q;
      q.push(g1.identity());
      while (!q.empty()) {
        int e = q.front();
        q.pop();
        for (std::size_t i = 0; i < full_gens.size(); ++i) {
          int enext = g1.mul(e, full_gens[i]);
          int fnext = g2.mul(f[e], images[i]);
          if (f[enext] == -1) {
            f[enext] = fnext;
            q.push(enext);
          } else if (f[enext] != fnext) {
            return false;
          }
        }
      }
      for (int a = 0; a < g1.order(); ++a)
        for (int b = 0; b < g1.order(); ++b)
          if (f[g1.mul(a, b)] != g2.mul(f[a], f[b])) return false;
      std::vector<char> seen(g2.order(), 0);
      for (int v : f) {
        if (v < 0 || seen[v]) return false;
        seen[v] = 1;
      }
      for (int k : e1.kernel)
        if (f[k] != k) return false;
      return true;
    }
    int lift = e1.lifts[depth];
    int target_h = e1.proj_h[lift];
    for (int cand = 0; cand < g2.order(); ++cand) {
      if (e2.proj_h[cand] != target_h) continue;
      if (g1.element_order(lift) != g2.element_order(cand)) continue;
      images[kernel_gens.size() + depth] = cand;
      if (rec(depth + 1)) return true;
    }
    return false;
  };
  return rec(0);
}

}  // namespace fgdesc
