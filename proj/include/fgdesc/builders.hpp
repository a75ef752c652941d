#pragma once

#include <functional>
#include <optional>

#include "fgdesc/field.hpp"
#include "fgdesc/formula.hpp"
#include "fgdesc/group.hpp"
#include "fgdesc/presentations.hpp"

namespace fgdesc::builders {

using fo::FormulaP;
using fo::Term;

// Term helpers over the group/monoid vocabulary.
Term t_mul(Term a, Term b);
Term t_inv(Term a);
Term t_e();
/// w(images): product term for a word over generator terms (empty word: e).
Term word_term(const Word& w, const std::vector<Term>& gens);

/// theta_n(g, x): holds iff x^n = g, via the squaring chain; length
/// O(log n). n = 1 degenerates to the atom g = x. `op`/`id` select the
/// monoid vocabulary ("mul"/"e" or the additive "add"/"0").
FormulaP theta(long long n, const Term& g, const Term& x, int& next_var,
               const std::string& op = "mul", const std::string& id = "e");

/// chi_n(g, x): holds iff g = x^r for some 0 <= r < 2^(log n).
FormulaP chi(long long n, const Term& g, const Term& x, int& next_var,
             const std::string& op = "mul", const std::string& id = "e");

/// alpha_k for size bound v: g lies in the submonoid generated by the x's
/// (in a group of order <= v, the generated subgroup). Length O(k + log v).
FormulaP alpha(long long v, const Term& g, const std::vector<Term>& xs,
               int& next_var);

/// beta_k for size bound v: same semantics on groups of order <= v, but
/// existential and negation-free; length O(k log v + log^2 v).
FormulaP beta(long long v, const Term& g, const std::vector<Term>& xs,
              int& next_var);

/// Sentence describing the cyclic group of order p^k among all groups
/// (monoid vocabulary, Sigma_3).
FormulaP cyclic_sentence(long long p, int k);

/// Formula in one free variable x describing (C_{p^k}, x) with x a
/// generator; conjunct of cyclic_sentence with the witness left free.
FormulaP cyclic_generator_formula(long long p, int k, const Term& x, int& next_var);

/// Sentence describing the field F_q (ring vocabulary). Field axioms are
/// spelled out; the characteristic clause uses an additive theta; Frobenius
/// degree is pinned per prime divisor of n where q = p^n.
FormulaP field_sentence(long long q);

/// Sentence describing the difference field (F_q, Frob^k).
FormulaP difference_field_sentence(long long q, int frobenius_power);

/// Formula in one free variable describing (F_q, c) up to automorphism: the
/// field sentence plus a Horner-chain evaluation of c's minimal polynomial.
FormulaP field_constant_formula(const FiniteField& f, int c, const Term& y,
                                int& next_var);

/// Lemma-style description of a simple group from a presentation:
/// x_1 != 1, all relators trivial, and every element generated. Variant (i)
/// uses alpha, variant (ii) uses beta (requires k <= log|G|).
enum class GenerationRoute { Alpha, Beta };
FormulaP presentation_description(const FiniteGroup& g, const PresentationSpec& pres,
                                  long long v, const std::vector<Term>& xs,
                                  int& next_var,
                                  GenerationRoute route = GenerationRoute::Alpha);
/// Closed existential variant.
FormulaP presentation_description_sentence(const FiniteGroup& g,
                                           const PresentationSpec& pres, long long v,
                                           GenerationRoute route = GenerationRoute::Alpha);

/// Description of the direct power S^k of a simple group: commuting
/// order-p generators for cyclic S, pairwise centralizer quotients
/// otherwise.
FormulaP char_simple_sentence(const FiniteGroup& s, int k,
                              const PresentationCatalog* pres_catalog);

/// Description of (G, xbar) from a presentation of a not necessarily simple
/// group: composition-length pinning via an ascending swift-set chain plus
/// the relators and a generation clause. Length O(pres.length + log^2 |G|).
FormulaP general_presentation_description(const FiniteGroup& g,
                                          const PresentationSpec& pres,
                                          std::vector<Term>* out_tuple_vars = nullptr);
FormulaP general_presentation_description_sentence(const FiniteGroup& g,
                                                   const PresentationSpec& pres);

// --- relativization ---------------------------------------------------------

/// Syntactic interpretation of a formula in a quotient/subgroup context:
/// quantifiers get guarded (when `guard` is set) and equality atoms s = t
/// become membership of s * t^-1 (when `eq_member` is set). Power chains
/// keep usable shortcut tags via the mod fields; other tags on transformed
/// subtrees are dropped.
struct Relativizer {
  std::function<FormulaP(const Term&, int&)> guard;             // member(t)
  std::function<FormulaP(const Term&, int&)> eq_member;         // member(t)
  std::vector<Term> mod_gens;  // closure generators matching eq_member
  long long mod_v = 0;         // membership size bound matching eq_member
};
FormulaP relativize(const FormulaP& f, const Relativizer& r, int& next_var);

}  // namespace fgdesc::builders
