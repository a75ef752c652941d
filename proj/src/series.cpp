#include "fgdesc/series.hpp"

#include <algorithm>
#include <stdexcept>

#include "fgdesc/numtheory.hpp"

namespace fgdesc {

namespace {

// Maximal proper normal subgroup of the table group k, as element indices.
std::vector<int> maximal_proper_normal_elems(const FiniteGroup& k) {
  std::vector<int> n{k.identity()};
  bool grew = true;
  while (grew) {
    grew = false;
    Subgroup cur(k, n);
    for (int g = 0; g < k.order(); ++g) {
      if (cur.contains(g)) continue;
      std::vector<int> gens = n;
      gens.push_back(g);
      Subgroup m = normal_closure(k, gens);
      if (m.order() < k.order()) {
        n = m.elements;
        grew = true;
        // A prime-index normal subgroup is automatically maximal.
        if (is_prime(k.order() / m.order())) return n;
        break;
      }
    }
  }
  return n;
}

}  // namespace

Subgroup maximal_proper_normal(const FiniteGroup& g) {
  return Subgroup(g, maximal_proper_normal_elems(g));
}

CompositionSeries composition_series(const FiniteGroup& g,
                                     const PresentationCatalog* pres_catalog) {
  CompositionSeries out;
  out.parent = &g;

  // Build the chain top-down.
  std::vector<std::vector<int>> chain_sets;  // parent element sets, descending
  std::vector<int> all(g.order());
  for (int i = 0; i < g.order(); ++i) all[i] = i;
  chain_sets.push_back(all);
  while (chain_sets.back().size() > 1) {
    Subgroup level(g, chain_sets.back());
    SubgroupAsGroup sub = subgroup_as_group(level);
    std::vector<int> m = maximal_proper_normal_elems(sub.group);
    std::vector<int> parent_elems;
    for (int e : m) parent_elems.push_back(sub.to_parent[e]);
    std::sort(parent_elems.begin(), parent_elems.end());
    chain_sets.push_back(std::move(parent_elems));
  }
  std::reverse(chain_sets.begin(), chain_sets.end());  // ascending now

  int r = static_cast<int>(chain_sets.size()) - 1;
  for (const auto& elems : chain_sets) out.chain.emplace_back(g, elems);
  if (r > paper_log(g.order()))
    throw std::logic_error("composition series longer than log|G|");

  std::vector<int> genset;  // cumulative T_i
  out.gensets.push_back(genset);
  for (int i = 1; i <= r; ++i) {
    SubgroupAsGroup gi = subgroup_as_group(out.chain[i]);
    Subgroup prev_in_gi(gi.group, [&] {
      std::vector<int> v;
      for (int e : out.chain[i - 1].elements) v.push_back(gi.from_parent[e]);
      return v;
    }());
    QuotientResult q = quotient(gi.group, prev_in_gi);

    SeriesFactor factor{std::move(q.group), std::vector<int>(g.order(), -1)};
    for (int e = 0; e < g.order(); ++e)
      if (gi.from_parent[e] >= 0) factor.projection[e] = q.projection[gi.from_parent[e]];

    if (!is_simple(factor.group))
      throw std::logic_error("composition factor is not simple");

    if (is_prime(factor.group.order())) {
      factor.cyclic = true;
      factor.prime = factor.group.order();
      // Single coset lift: the least parent element of G_i outside G_{i-1}
      // (any such element generates the prime-order quotient).
      for (int e : out.chain[i].elements)
        if (!out.chain[i - 1].contains(e)) {
          factor.new_gens.push_back(e);
          break;
        }
    } else {
      if (pres_catalog == nullptr)
        throw std::logic_error("nonabelian factor needs a presentation catalog");
      const PresentationSpec* pres = nullptr;
      std::vector<int> images;
      for (const PresentationSpec* cand : pres_catalog->by_order(factor.group.order())) {
        if (auto found = find_generator_images(factor.group, *cand)) {
          pres = cand;
          images = *found;
          break;
        }
      }
      if (pres == nullptr)
        throw std::logic_error(
            "no catalog presentation matches simple factor of order " +
            std::to_string(factor.group.order()));
      factor.pres = pres;
      // Lift each quotient generator to its least parent preimage.
      for (int img : images) {
        int lift = -1;
        for (int e : out.chain[i].elements)
          if (factor.projection[e] == img) {
            lift = e;
            break;
          }
        if (lift < 0) throw std::logic_error("generator image has no preimage");
        factor.new_gens.push_back(lift);
      }
    }
    for (int e : factor.new_gens) genset.push_back(e);
    out.gensets.push_back(genset);
    out.factors.push_back(std::move(factor));
  }

  // Sanity: T_i generates G_i, and factor orders multiply to |G|.
  long long prod = 1;
  for (const auto& f : out.factors) prod *= f.group.order();
  if (prod != g.order()) throw std::logic_error("factor orders do not multiply to |G|");
  for (int i = 1; i <= r; ++i) {
    ClosureResult c = closure(g, out.gensets[i]);
    if (c.subgroup.elements != out.chain[i].elements)
      throw std::logic_error("T_i does not generate G_i");
  }
  return out;
}

}  // namespace fgdesc
