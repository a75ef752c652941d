#pragma once

#include <vector>

#include "fgdesc/group.hpp"
#include "fgdesc/presentations.hpp"

namespace fgdesc {

/// One simple factor H_i = G_i / G_{i-1} of a composition series, together
/// with the quotient map restricted to G_i (parent element -> H_i index,
/// -1 outside G_i).
struct SeriesFactor {
  FiniteGroup group;
  std::vector<int> projection;
  bool cyclic = false;
  int prime = 0;                    // when cyclic
  const PresentationSpec* pres = nullptr;  // when nonabelian (catalog entry)
  std::vector<int> new_gens;        // T_i \ T_{i-1}, parent elements
};

/// Chain 1 = G_0 < G_1 < ... < G_r = G with simple factors and ascending
/// generator sets T_0 c T_1 c ... c T_r, chosen so that the new generators at
/// level i project onto catalog presentation generators (nonabelian factor)
/// or a single generating coset (cyclic factor).
struct CompositionSeries {
  const FiniteGroup* parent = nullptr;
  std::vector<Subgroup> chain;          // chain[0] trivial, chain[r] = G
  std::vector<SeriesFactor> factors;    // factors[i] = chain[i+1]/chain[i]
  std::vector<std::vector<int>> gensets;  // gensets[i] = T_i (cumulative)

  int length() const { return static_cast<int>(factors.size()); }
};

/// Inclusion-maximal proper normal subgroup, or the trivial subgroup when g
/// is simple (or trivial). Deterministic: elements are absorbed greedily in
/// index order, so reruns give identical chains.
Subgroup maximal_proper_normal(const FiniteGroup& g);

/// Composition series via repeated maximal normal subgroups. `pres_catalog`
/// resolves nonabelian simple factors; cyclic factors need no catalog.
/// Throws when a nonabelian factor has no catalog presentation.
CompositionSeries composition_series(const FiniteGroup& g,
                                     const PresentationCatalog* pres_catalog =
                                         &PresentationCatalog::shipped());

}  // namespace fgdesc
