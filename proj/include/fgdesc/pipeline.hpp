#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fgdesc/extdesc.hpp"
#include "fgdesc/metrics.hpp"

namespace fgdesc {

/// Assembled description: the sentence (or formula with a free tuple), its
/// metrics, and a per-conjunct breakdown.
struct DescriptionResult {
  fo::FormulaP formula;
  fo::LengthReport metrics;
  std::string mode;  // full | sigma_bounded | presentation | interpretation
  std::vector<std::pair<std::string, long long>> provenance;  // conjunct lengths
  std::vector<std::string> factors;                  // per level, e.g. "C2"
  std::vector<DistinguishingReport> word_reports;
  std::vector<int> tuple_vars;  // free variables, describe_with_tuple

  std::string provenance_json() const;
};

/// The full assembly: existential prefix over the series generators and the
/// preprocessing set, followed by psi, chi, kappa, rho. Sentence length is
/// guard-checked against O(log^3 |G|).
DescriptionResult describe_group(const FiniteGroup& g);

/// Same sentence with extra free variables pinned to the tuple entries as
/// short words over the preprocessing set.
DescriptionResult describe_with_tuple(const FiniteGroup& g, const std::vector<int>& tuple);

/// Expansion describers: distinguished subgroup (unary predicate P) and
/// distinguished automorphism (unary function aut).
DescriptionResult describe_with_subgroup(const FiniteGroup& g, const Subgroup& u);
DescriptionResult describe_with_automorphism(const FiniteGroup& g,
                                             const std::vector<int>& aut);

/// Bounded-alternation variant: every generation formula switched to the
/// existential route; length guard O(log^4 |G|).
DescriptionResult describe_sigma_bounded(const FiniteGroup& g);

/// Wraps the presentation-based description.
DescriptionResult describe_via_presentation(const FiniteGroup& g,
                                            const PresentationSpec& pres);

/// Table-free pipeline for C_{2^k}: the same conjunct structure computed
/// arithmetically in Z/2^k, usable far beyond the dense-table bound.
DescriptionResult describe_cyclic_2power(int k);

// --- interpretations ---------------------------------------------------------

/// Uniform interpretation scheme: structures of `target_sig` decoded from
/// structures of `source_sig` by dim-tuples. Formula templates use declared
/// placeholder variables; parameters are shared free variables.
struct InterpretationScheme {
  const fo::Signature* source_sig = nullptr;  // formulas live here
  const fo::Signature* target_sig = nullptr;  // decoded structure's signature
  int dim = 1;
  std::vector<int> params;  // parameter variable ids (free in the templates)

  fo::FormulaP domain;             // D(xbar)
  std::vector<int> domain_vars;    // placeholder block, size dim
  fo::FormulaP equiv;              // xbar ~ ybar
  std::vector<int> equiv_vars;     // two blocks, size 2*dim
  /// Function graphs: per target function symbol f of arity a, a formula
  /// over a+1 blocks (arguments then output). Constants use arity 0.
  struct Graph {
    fo::FormulaP formula;
    std::vector<int> vars;  // (a+1)*dim placeholders
  };
  std::map<std::string, Graph> func_graphs;   // includes constants
  std::map<std::string, Graph> rel_graphs;    // relations, a blocks
};

/// Identity scheme for a signature (dim 1, no parameters).
InterpretationScheme identity_scheme(const fo::Signature& sig);

/// Translation of a target-signature formula along the scheme: quantifiers
/// become guarded tuple quantifiers, atoms unfold through the graphs.
fo::FormulaP interpretation_translate(const fo::FormulaP& phi,
                                      const InterpretationScheme& scheme,
                                      int& next_var);

/// Composition: decode along `outer` after `inner` (dim multiplies).
InterpretationScheme compose_schemes(const InterpretationScheme& outer,
                                     const InterpretationScheme& inner,
                                     int& next_var);

/// The interpretation combinator: existential parameters, the
/// Gamma-translated description of the decoded structure, and clauses making
/// `eta` an isomorphism onto the doubly-decoded copy. `eta` uses
/// eta_vars = (element, code block of size delta.dim * gamma.dim).
struct EtaTemplate {
  fo::FormulaP formula;
  std::vector<int> vars;  // 1 + delta.dim * gamma.dim placeholders
};
fo::FormulaP interpretation_describe(const InterpretationScheme& delta,
                                     const InterpretationScheme& gamma,
                                     const EtaTemplate& eta,
                                     const fo::FormulaP& phi_f);

}  // namespace fgdesc
