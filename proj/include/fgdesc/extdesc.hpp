#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fgdesc/builders.hpp"
#include "fgdesc/extension.hpp"
#include "fgdesc/slp.hpp"

namespace fgdesc {

/// Fills ext.phi: every freely reduced word of length <= 3m over the
/// generator symbols (powers only when there is a single generator) whose
/// image in H is trivial, mapped to its value at the lifts. Checks first
/// that every element of H has word length <= m over the generator images.
/// `word_budget` caps the materialized word count.
void phi_restricted(ExtensionData& ext, const FiniteGroup& h, int m,
                    std::size_t word_budget = 200000);

/// Do two extensions with the same carrier agree on the value of every
/// trivial-image word of length <= 3m? Decided on the pair automaton, so no
/// word list is materialized.
bool phi_agree_3m(const ExtensionData& e1, const ExtensionData& e2,
                  const FiniteGroup& h, int m);

/// Pairwise differences of the relator-value maps over a set of enumerated
/// extensions, quotiented to the distinguishable word classes.
struct DifferenceGroup {
  FiniteGroup z;                        // Z(N) as a group in its own right
  std::vector<int> z_to_n;              // Z index -> N element
  std::vector<Word> class_words;        // least word per class
  std::vector<std::vector<int>> class_values;  // per class: value in each E_j (N elems)
  std::vector<std::vector<int>> v_gens;        // V generators (Z-indices per class)
  int rank = 0;
  int rank_bound = 0;                   // r * lambda(|Z|)
};

/// Y subset of {0..x_size-1} with: g|Y = 0 implies g = 0 for all g in the
/// subgroup V of A^X spanned by v_gens; |Y| <= rank(V) * lambda(|A|).
/// The per-prime pivoting follows the maximal-order coordinate rule.
struct PinDownResult {
  std::vector<int> indices;  // sorted
  int rank = 0;
  long long v_size = 0;
  bool injectivity_checked = false;  // exhaustive scan ran within budget
};
PinDownResult pin_down_subset(const FiniteGroup& a, int x_size,
                              const std::vector<std::vector<int>>& v_gens);

/// Distinguishing-word selection for extensions of N by H with a prescribed
/// action: enumerate extensions, form the difference group on word classes,
/// and pin down a separating set. Falls back to the presentation relators
/// (method "fallback") when the enumeration budget is exceeded.
struct DistinguishingReport {
  int level = 0;
  std::vector<Word> words;
  std::vector<int> values;  // values at supplied lifts (empty if none given)
  std::string method;       // "oracle" | "fallback" | "trivial-center"
  int rank = 0;
  int d_bound = 0;
  std::string to_json() const;
};
DistinguishingReport distinguishing_words(
    const FiniteGroup& n, const FiniteGroup& h, const std::vector<int>& h_gens,
    const std::vector<std::vector<int>>& action, const PresentationSpec& pres,
    int m);

/// Difference-group construction over explicitly enumerated extensions
/// (exposed for the regularity checks in tests).
DifferenceGroup difference_group(const std::vector<ExtensionData>& exts,
                                 const FiniteGroup& n, const FiniteGroup& h,
                                 int m, int relator_count);

// --- sentence parts ----------------------------------------------------------

/// Per-level inputs for assembling the description sentence.
struct LevelTerms {
  std::vector<fo::Term> new_gens;   // terms for T_i \ T_{i-1}
  std::vector<fo::Term> cum_gens;   // terms for T_i
  std::vector<fo::Term> prev_gens;  // terms for T_{i-1}
};

struct SentenceParts {
  fo::FormulaP chi;    // relativized factor descriptions + normality
  fo::FormulaP kappa;  // conjugation action as words over the previous level
  std::optional<fo::FormulaP> rho;  // distinguishing-word values (absent if no words)
  std::vector<DistinguishingReport> word_reports;
};

/// kappa, rho, chi for a composition series with its preprocessing chain.
/// `beta_route` switches every generation formula to the existential form.
SentenceParts extension_sentence_parts(const FiniteGroup& g,
                                       const CompositionSeries& series,
                                       const PreprocessingChain& chain,
                                       const std::vector<LevelTerms>& terms,
                                       const std::vector<fo::Term>& a_terms,
                                       int& next_var, bool beta_route);

}  // namespace fgdesc
