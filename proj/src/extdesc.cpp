#include "fgdesc/extdesc.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fgdesc/config.hpp"
#include "fgdesc/numtheory.hpp"

namespace fgdesc {

namespace {

// Letter codes order words lexicographically: s1 < s1^-1 < s2 < s2^-1 < ...
int letter_code(int letter) {
  int idx = std::abs(letter) - 1;
  return 2 * idx + (letter < 0 ? 1 : 0);
}

bool word_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (letter_code(a[i]) != letter_code(b[i]))
      return letter_code(a[i]) < letter_code(b[i]);
  return false;
}

int radius_over(const FiniteGroup& h, const std::vector<int>& gens) {
  std::vector<int> dist(h.order(), -1);
  std::queue<int> q;
  dist[h.identity()] = 0;
  q.push(h.identity());
  int radius = 0;
  while (!q.empty()) {
    int e = q.front();
    q.pop();
    for (int x : gens)
      for (int f : {h.mul(e, x), h.mul(e, h.inv(x))})
        if (dist[f] < 0) {
          dist[f] = dist[e] + 1;
          radius = std::max(radius, dist[f]);
          q.push(f);
        }
  }
  for (int d : dist)
    if (d < 0) return -1;
  return radius;
}

}  // namespace

void phi_restricted(ExtensionData& ext, const FiniteGroup& h, int m,
                    std::size_t word_budget) {
  const int k = static_cast<int>(ext.h_gens.size());
  if (radius_over(h, ext.h_gens) > m || radius_over(h, ext.h_gens) < 0)
    throw std::invalid_argument("quotient radius exceeds m");
  ext.phi.clear();
  const FiniteGroup& e = ext.e;
  const int id_h = ext.proj_h[e.identity()];

  if (k == 1) {
    // Powers of the single generator.
    for (int j = -3 * m; j <= 3 * m; ++j) {
      Word w(std::abs(j), j >= 0 ? 1 : -1);
      int val = e.pow(ext.lifts[0], j);
      if (ext.proj_h[val] == id_h) ext.phi[w] = ext.kernel_to_n[val];
    }
    return;
  }
  // Breadth-first over freely reduced words.
  struct Item {
    Word w;
    int val;
  };
  std::queue<Item> q;
  q.push({Word{}, e.identity()});
  ext.phi[Word{}] = ext.kernel_to_n[e.identity()];
  std::size_t count = 0;
  while (!q.empty()) {
    Item cur = q.front();
    q.pop();
    if (static_cast<int>(cur.w.size()) == 3 * m) continue;
    for (int idx = 0; idx < k; ++idx)
      for (int sign : {+1, -1}) {
        int letter = sign * (idx + 1);
        if (!cur.w.empty() && cur.w.back() == -letter) continue;  // reduce
        Word w = cur.w;
        w.push_back(letter);
        int val = e.mul(cur.val, sign > 0 ? ext.lifts[idx] : e.inv(ext.lifts[idx]));
        if (++count > word_budget)
          throw BudgetExceeded("phi word budget exceeded");
        if (ext.proj_h[val] == id_h) ext.phi[w] = ext.kernel_to_n[val];
        q.push({std::move(w), val});
      }
  }
}

bool phi_agree_3m(const ExtensionData& e1, const ExtensionData& e2,
                  const FiniteGroup& h, int m) {
  (void)h;
  if (e1.h_gens != e2.h_gens || e1.n_order != e2.n_order ||
      e1.h_order != e2.h_order)
    throw std::invalid_argument("extensions have different shapes");
  const FiniteGroup& g1 = e1.e;
  const FiniteGroup& g2 = e2.e;
  const int k = static_cast<int>(e1.h_gens.size());
  const int id_h = e1.proj_h[g1.identity()];
  // Pair automaton, depth 3m; a trivial-image state must have equal kernel
  // values on both sides.
  std::vector<int> dist(static_cast<std::size_t>(g1.order()) * g2.order(), -1);
  std::queue<std::pair<int, int>> q;
  auto at = [&](int a, int b) -> int& {
    return dist[static_cast<std::size_t>(a) * g2.order() + b];
  };
  at(g1.identity(), g2.identity()) = 0;
  q.push({g1.identity(), g2.identity()});
  while (!q.empty()) {
    auto [a, b] = q.front();
    q.pop();
    if (e1.proj_h[a] == id_h && a != b) return false;
    int d = at(a, b);
    if (d == 3 * m) continue;
    for (int idx = 0; idx < k; ++idx)
      for (int sign : {+1, -1}) {
        int na = g1.mul(a, sign > 0 ? e1.lifts[idx] : g1.inv(e1.lifts[idx]));
        int nb = g2.mul(b, sign > 0 ? e2.lifts[idx] : g2.inv(e2.lifts[idx]));
        if (at(na, nb) < 0) {
          at(na, nb) = d + 1;
          q.push({na, nb});
        }
      }
  }
  return true;
}

DifferenceGroup difference_group(const std::vector<ExtensionData>& exts,
                                 const FiniteGroup& n, const FiniteGroup& h,
                                 int m, int relator_count) {
  if (exts.empty()) throw std::invalid_argument("no extensions given");
  const int t = static_cast<int>(exts.size());
  const int k = static_cast<int>(exts[0].h_gens.size());
  const int id_h = exts[0].proj_h[exts[0].e.identity()];

  Subgroup zsub = center(n);
  SubgroupAsGroup zg = subgroup_as_group(zsub);

  DifferenceGroup out{std::move(zg.group)};
  out.z_to_n = zg.to_parent;
  out.rank_bound = relator_count * lambda_omega(zsub.order());

  // Joint walk over all extensions at once; the first word reaching each
  // joint state is canonical (breadth-first, letters in code order).
  std::map<std::vector<int>, int> state_id;
  std::vector<int> start(t);
  for (int j = 0; j < t; ++j) start[j] = exts[j].e.identity();
  struct Item {
    std::vector<int> state;
    Word w;
  };
  std::queue<Item> q;
  state_id[start] = 0;
  q.push({start, Word{}});
  std::size_t states = 1;
  while (!q.empty()) {
    Item cur = q.front();
    q.pop();
    if (exts[0].proj_h[cur.state[0]] == id_h) {
      std::vector<int> values(t);
      for (int j = 0; j < t; ++j) values[j] = exts[j].kernel_to_n[cur.state[j]];
      out.class_words.push_back(cur.w);
      out.class_values.push_back(std::move(values));
    }
    if (static_cast<int>(cur.w.size()) == 3 * m) continue;
    for (int idx = 0; idx < k; ++idx)
      for (int sign : {+1, -1}) {
        int letter = sign * (idx + 1);
        if (!cur.w.empty() && cur.w.back() == -letter) continue;
        std::vector<int> next(t);
        for (int j = 0; j < t; ++j) {
          const FiniteGroup& e = exts[j].e;
          next[j] = e.mul(cur.state[j],
                          sign > 0 ? exts[j].lifts[idx] : e.inv(exts[j].lifts[idx]));
        }
        if (state_id.emplace(next, static_cast<int>(states)).second) {
          if (++states > 200000)
            throw BudgetExceeded("joint word-walk state budget exceeded");
          Word w = cur.w;
          w.push_back(letter);
          q.push({std::move(next), std::move(w)});
        }
      }
  }

  // Duplicate joint states cannot appear (the map keys them), but distinct
  // states may restrict to equal class-value vectors; deduplicate.
  {
    std::map<std::vector<int>, int> seen;
    std::vector<Word> words;
    std::vector<std::vector<int>> values;
    for (std::size_t i = 0; i < out.class_values.size(); ++i)
      if (seen.emplace(out.class_values[i], 1).second) {
        words.push_back(out.class_words[i]);
        values.push_back(out.class_values[i]);
      }
    out.class_words = std::move(words);
    out.class_values = std::move(values);
  }

  std::vector<int> n_to_z(n.order(), -1);
  for (std::size_t i = 0; i < out.z_to_n.size(); ++i) n_to_z[out.z_to_n[i]] = i;
  for (int j = 1; j < t; ++j) {
    std::vector<int> gen(out.class_words.size());
    for (std::size_t c = 0; c < out.class_words.size(); ++c) {
      int diff = n.mul(out.class_values[c][0], n.inv(out.class_values[c][j]));
      if (n_to_z[diff] < 0)
        throw std::logic_error("relator-value difference escapes the center");
      gen[c] = n_to_z[diff];
    }
    out.v_gens.push_back(std::move(gen));
  }
  return out;
}

// --- pin_down_subset ---------------------------------------------------------

namespace {

// All subgroups of a small group (element sets of the given group).
std::vector<std::vector<int>> all_subgroups(const FiniteGroup& g) {
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> queue;
  ClosureResult triv = closure(g, {});
  seen.insert(triv.subgroup.elements);
  queue.push_back(triv.subgroup.elements);
  for (std::size_t i = 0; i < queue.size(); ++i) {
    std::vector<int> cur = queue[i];
    for (int e = 0; e < g.order(); ++e) {
      if (std::binary_search(cur.begin(), cur.end(), e)) continue;
      std::vector<int> gens = cur;
      gens.push_back(e);
      ClosureResult c = closure(g, gens);
      if (seen.insert(c.subgroup.elements).second)
        queue.push_back(c.subgroup.elements);
    }
  }
  return {seen.begin(), seen.end()};
}

// Basis of a finite abelian p-group: maximal-order element plus a recursive
// complement (least sorted element set among valid complements).
std::vector<int> abelian_basis(const FiniteGroup& a) {
  if (a.order() == 1) return {};
  int best = -1, best_ord = 0;
  for (int e = 0; e < a.order(); ++e) {
    int o = a.element_order(e);
    if (o > best_ord) {
      best_ord = o;
      best = e;
    }
  }
  ClosureResult cyc = closure(a, {best});
  if (cyc.subgroup.order() == a.order()) return {best};
  for (const auto& elems : all_subgroups(a)) {
    if (static_cast<int>(elems.size()) * best_ord != a.order()) continue;
    // Complement: trivial intersection with <best>.
    bool ok = true;
    for (int e : elems)
      if (e != a.identity() && cyc.subgroup.contains(e)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    SubgroupAsGroup comp = subgroup_as_group(Subgroup(a, elems));
    std::vector<int> rest = abelian_basis(comp.group);
    std::vector<int> out{best};
    for (int r : rest) out.push_back(comp.to_parent[r]);
    return out;
  }
  throw std::logic_error("no complement found in abelian p-group");
}

}  // namespace

PinDownResult pin_down_subset(const FiniteGroup& a, int x_size,
                              const std::vector<std::vector<int>>& v_gens) {
  for (const auto& gen : v_gens) {
    if (static_cast<int>(gen.size()) != x_size)
      throw std::invalid_argument("generator vector has wrong arity");
    for (int e : gen)
      if (e < 0 || e >= a.order())
        throw std::invalid_argument("generator entry outside the group");
  }
  if (!is_abelian(a)) throw std::invalid_argument("pin_down needs an abelian group");

  PinDownResult out;

  // Enumerate V (needed for the injectivity certificate and the per-prime
  // kernels); vectors under pointwise products.
  std::set<std::vector<int>> v_set;
  {
    std::vector<int> zero(x_size, a.identity());
    v_set.insert(zero);
    std::vector<std::vector<int>> frontier{zero};
    while (!frontier.empty()) {
      std::vector<std::vector<int>> next;
      for (const auto& v : frontier)
        for (const auto& gen : v_gens) {
          std::vector<int> w(x_size);
          for (int i = 0; i < x_size; ++i) w[i] = a.mul(v[i], gen[i]);
          if (v_set.insert(w).second) {
            if (static_cast<long long>(v_set.size()) > config::kPinDownScanBudget)
              throw BudgetExceeded("pin_down V enumeration budget exceeded");
            next.push_back(std::move(w));
          }
        }
      frontier = std::move(next);
    }
  }
  out.v_size = static_cast<long long>(v_set.size());
  std::vector<std::vector<int>> v_all(v_set.begin(), v_set.end());

  std::vector<int> y;
  int rank = 0;
  for (auto [p, e] : factorize(a.order())) {
    // Projection onto the p-primary part: a -> a^{c} with c = r * (r^-1 mod q).
    long long q = 1;
    for (int i = 0; i < e; ++i) q *= p;
    long long r = a.order() / q;
    long long rinv = 1;
    while ((r * rinv) % q != 1) ++rinv;
    long long c = r * rinv;

    // The p-part as a group, with a basis and coordinates.
    std::vector<int> part_elems;
    for (int el = 0; el < a.order(); ++el)
      if (a.pow(el, q) == a.identity()) part_elems.push_back(el);
    SubgroupAsGroup ap = subgroup_as_group(Subgroup(a, part_elems));
    std::vector<int> basis = abelian_basis(ap.group);
    int kdim = static_cast<int>(basis.size());
    std::vector<int> basis_ord(kdim);
    for (int i = 0; i < kdim; ++i) basis_ord[i] = ap.group.element_order(basis[i]);
    long long qexp = kdim == 0 ? 1 : *std::max_element(basis_ord.begin(), basis_ord.end());
    // Coordinates by exhaustive combination.
    std::map<int, std::vector<int>> coords;  // ap-element -> exponents
    {
      std::vector<int> exps(kdim, 0);
      while (true) {
        int val = ap.group.identity();
        for (int i = 0; i < kdim; ++i)
          val = ap.group.mul(val, ap.group.pow(basis[i], exps[i]));
        coords.emplace(val, exps);
        int i = 0;
        for (; i < kdim; ++i) {
          if (++exps[i] < basis_ord[i]) break;
          exps[i] = 0;
        }
        if (i == kdim) break;
      }
    }

    // V projected to C_qexp^(x_size * kdim).
    auto project = [&](const std::vector<int>& v) {
      std::vector<long long> w(static_cast<std::size_t>(x_size) * kdim, 0);
      for (int i = 0; i < x_size; ++i) {
        int pp = a.pow(v[i], c);
        int api = ap.from_parent[pp];
        const std::vector<int>& ex = coords.at(api);
        for (int j = 0; j < kdim; ++j)
          w[static_cast<std::size_t>(i) * kdim + j] =
              (ex[j] * (qexp / basis_ord[j])) % qexp;
      }
      return w;
    };
    std::set<std::vector<long long>> vp_set;
    for (const auto& v : v_all) vp_set.insert(project(v));
    std::vector<std::vector<long long>> vp(vp_set.begin(), vp_set.end());

    std::vector<char> active(static_cast<std::size_t>(x_size) * kdim, 1);
    int rank_p = 0;
    while (true) {
      // Largest coordinate order over the active columns, least (x', v).
      long long best_ord = 1;
      int best_x = -1;
      std::size_t best_v = 0;
      for (int x = 0; x < x_size * kdim; ++x) {
        if (!active[x]) continue;
        for (std::size_t vi = 0; vi < vp.size(); ++vi) {
          long long val = vp[vi][x];
          long long ord = qexp / std::gcd(qexp, val == 0 ? qexp : val);
          if (ord > best_ord) {
            best_ord = ord;
            best_x = x;
            best_v = vi;
          }
        }
      }
      if (best_x < 0) break;  // all active coordinates vanish on V
      (void)best_v;
      ++rank_p;
      y.push_back(best_x / kdim);
      active[best_x] = 0;
      // Restrict to the kernel of the chosen coordinate.
      std::vector<std::vector<long long>> kernel;
      for (const auto& v : vp)
        if (v[best_x] == 0) kernel.push_back(v);
      vp = std::move(kernel);
    }
    rank = std::max(rank, rank_p);
  }

  std::sort(y.begin(), y.end());
  y.erase(std::unique(y.begin(), y.end()), y.end());
  out.indices = std::move(y);
  out.rank = rank;

  // Exhaustive injectivity certificate.
  for (const auto& v : v_all) {
    bool zero_on_y = true;
    for (int idx : out.indices)
      if (v[idx] != a.identity()) {
        zero_on_y = false;
        break;
      }
    if (zero_on_y)
      for (int i = 0; i < x_size; ++i)
        if (v[i] != a.identity())
          throw std::logic_error("pin_down output is not injective on V");
  }
  out.injectivity_checked = true;
  return out;
}

// --- distinguishing words ----------------------------------------------------

std::string DistinguishingReport::to_json() const {
  nlohmann::json j;
  j["level"] = level;
  j["method"] = method;
  j["rank"] = rank;
  j["d_bound"] = d_bound;
  std::vector<std::string> names;
  int maxgen = 1;
  for (const Word& w : words)
    for (int letter : w) maxgen = std::max(maxgen, std::abs(letter));
  for (int i = 1; i <= maxgen; ++i) names.push_back("s" + std::to_string(i));
  for (const Word& w : words) j["words"].push_back(render_word(w, names));
  if (j.count("words") == 0) j["words"] = nlohmann::json::array();
  j["values"] = values;
  return j.dump(2);
}

DistinguishingReport distinguishing_words(
    const FiniteGroup& n, const FiniteGroup& h, const std::vector<int>& h_gens,
    const std::vector<std::vector<int>>& action, const PresentationSpec& pres,
    int m) {
  DistinguishingReport rep;
  rep.d_bound = static_cast<int>(pres.relators.size()) *
                lambda_omega(center(n).order());
  if (center(n).order() == 1) {
    rep.method = "trivial-center";
    return rep;
  }
  try {
    std::vector<ExtensionData> exts = enumerate_extensions(n, h, h_gens, action);
    if (exts.empty()) {
      rep.method = "oracle";
      return rep;
    }
    DifferenceGroup diff = difference_group(
        exts, n, h, m, static_cast<int>(pres.relators.size()));
    PinDownResult pin = pin_down_subset(
        diff.z, static_cast<int>(diff.class_words.size()), diff.v_gens);
    rep.rank = pin.rank;
    for (int idx : pin.indices) rep.words.push_back(diff.class_words[idx]);
    std::sort(rep.words.begin(), rep.words.end(), word_less);
    rep.method = "oracle";
    return rep;
  } catch (const BudgetExceeded&) {
    rep.words = pres.relators;
    rep.method = "fallback";
    return rep;
  }
}

// --- sentence parts ----------------------------------------------------------

SentenceParts extension_sentence_parts(const FiniteGroup& g,
                                       const CompositionSeries& series,
                                       const PreprocessingChain& chain,
                                       const std::vector<LevelTerms>& terms,
                                       const std::vector<fo::Term>& a_terms,
                                       int& next_var, bool beta_route) {
  using namespace builders;
  using fo::FormulaP;
  using fo::Term;
  const int r = series.length();
  const long long v = g.order();

  auto membership = [&](const std::vector<Term>& gens) {
    return [gens, v, beta_route](const Term& t, int& nv) {
      return beta_route ? beta(v, t, gens, nv) : alpha(v, t, gens, nv);
    };
  };

  std::vector<FormulaP> chi_parts, kappa_parts, rho_parts;
  std::vector<DistinguishingReport> reports;

  for (int i = 1; i <= r; ++i) {
    const SeriesFactor& factor = series.factors[i - 1];
    const LevelTerms& lt = terms[i - 1];

    // Normality of G_{i-1} in G_i: conjugates of the previous level by each
    // new generator stay inside it.
    if (i >= 2) {
      for (const Term& gterm : lt.new_gens) {
        int u = next_var++;
        Term conj = t_mul(t_mul(t_inv(gterm), Term::v(u)), gterm);
        FormulaP inside = membership(lt.prev_gens)(Term::v(u), next_var);
        FormulaP image = membership(lt.prev_gens)(conj, next_var);
        chi_parts.push_back(
            fo::mk_forall(u, fo::mk_implies(std::move(inside), std::move(image))));
      }
    }

    // Factor description, interpreted in G_i / G_{i-1}.
    FormulaP phi_i;
    if (factor.cyclic) {
      phi_i = cyclic_generator_formula(factor.prime, 1, lt.new_gens[0], next_var);
    } else {
      phi_i = presentation_description(factor.group, *factor.pres,
                                       factor.group.order(), lt.new_gens, next_var,
                                       beta_route ? GenerationRoute::Beta
                                                  : GenerationRoute::Alpha);
    }
    Relativizer rel;
    if (i < r) {
      auto guard_gens = lt.cum_gens;
      rel.guard = membership(guard_gens);
    }
    if (i >= 2) {
      rel.eq_member = membership(lt.prev_gens);
      rel.mod_gens = lt.prev_gens;
      rel.mod_v = v;
    }
    chi_parts.push_back(relativize(phi_i, rel, next_var));

    // kappa: conjugation of the previous generators by the new ones, pinned
    // as words over the previous preprocessing level.
    if (i >= 2) {
      int prev_bits = chain.level_sizes[i - 1];
      std::vector<Term> prev_a(a_terms.begin(), a_terms.begin() + prev_bits);
      const std::vector<int>& prev_elems = series.gensets[i - 1];
      const std::vector<int>& new_elems = factor.new_gens;
      for (std::size_t gi = 0; gi < new_elems.size(); ++gi)
        for (std::size_t wi = 0; wi < prev_elems.size(); ++wi) {
          int value = g.conj(prev_elems[wi], new_elems[gi]);
          Word w = chain.word_for(g, value, prev_bits);
          Term lhs = t_mul(t_mul(t_inv(lt.new_gens[gi]), lt.prev_gens[wi]),
                           lt.new_gens[gi]);
          kappa_parts.push_back(fo::mk_eq(lhs, word_term(w, prev_a)));
        }
    }

    // rho: distinguishing-word values for the extension of G_{i-1} by H_i.
    if (i >= 2) {
      SubgroupAsGroup prev = subgroup_as_group(series.chain[i - 1]);
      DistinguishingReport rep;
      rep.level = i;
      if (center(prev.group).order() == 1) {
        rep.method = "trivial-center";
        rep.d_bound = 0;
      } else {
        // Action of the actual lifts on G_{i-1}.
        std::vector<std::vector<int>> action;
        FiniteGroup hq = factor.group;
        for (int x = 0; x < hq.order(); ++x) {
          // Lift of x: least parent element projecting to it.
          int lift = -1;
          for (int el : series.chain[i].elements)
            if (factor.projection[el] == x) {
              lift = el;
              break;
            }
          std::vector<int> act(prev.group.order());
          for (int a = 0; a < prev.group.order(); ++a)
            act[a] = prev.from_parent[g.conj(prev.to_parent[a], lift)];
          action.push_back(std::move(act));
        }
        std::vector<int> hgens;
        for (int el : factor.new_gens) hgens.push_back(factor.projection[el]);
        PresentationSpec hpres =
            factor.cyclic ? cyclic_presentation(factor.prime) : *factor.pres;
        // The swift-set radius bound; the actual radius can exceed it for a
        // single large-prime generator, so take the max.
        int m = std::max(2 * paper_log(hq.order()), radius_over(hq, hgens));
        rep = distinguishing_words(prev.group, hq, hgens, action, hpres, m);
        rep.level = i;
        // Values of the words at the actual lifts, as equations over the
        // previous preprocessing level.
        int prev_bits = chain.level_sizes[i - 1];
        std::vector<Term> prev_a(a_terms.begin(), a_terms.begin() + prev_bits);
        std::vector<int> lift_elems = factor.new_gens;
        for (const Word& w : rep.words) {
          int value = evaluate_word(g, w, lift_elems);
          if (!series.chain[i - 1].contains(value))
            throw std::logic_error("distinguishing word value escapes the kernel");
          rep.values.push_back(value);
          Word aw = chain.word_for(g, value, prev_bits);
          rho_parts.push_back(
              fo::mk_eq(word_term(w, lt.new_gens), word_term(aw, prev_a)));
        }
      }
      reports.push_back(std::move(rep));
    }
  }

  SentenceParts out{fo::mk_and(std::move(chi_parts)),
                    kappa_parts.empty()
                        ? fo::mk_eq(t_e(), t_e())
                        : fo::mk_and(std::move(kappa_parts)),
                    rho_parts.empty()
                        ? std::optional<FormulaP>{}
                        : std::optional<FormulaP>{fo::mk_and(std::move(rho_parts))},
                    std::move(reports)};
  return out;
}

}  // namespace fgdesc
