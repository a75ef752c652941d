#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fgdesc/formula.hpp"
#include "fgdesc/group.hpp"
#include "fgdesc/presentations.hpp"
#include "fgdesc/series.hpp"

namespace fgdesc {

/// Straight-line program over a base set: each step is a base element, an
/// inverse of an earlier step, or a product of two earlier steps. An SLP
/// with no steps computes the identity (empty product). reduced_length
/// counts the non-source steps.
struct Slp {
  struct Instr {
    enum class Kind { Source, Inverse, Product };
    Kind kind;
    int a = 0;  // Source: base index; Inverse/Product: earlier step index
    int b = 0;  // Product: earlier step index
  };
  std::vector<int> base;
  std::vector<Instr> steps;
  std::vector<int> values;  // evaluated element per step

  int reduced_length() const;
  int last_value(const FiniteGroup& g) const;
  /// Re-evaluates every step against the table; throws on any mismatch.
  void validate(const FiniteGroup& g) const;
  /// Line-oriented dump: "src i" / "inv j" / "mul j l".
  std::string dump() const;
};

/// SLP computing g from S with reduced length at most (log|G|+1)^2, via the
/// doubling-cube construction. Throws if g is outside <S>.
Slp reachability_slp(const FiniteGroup& g, const std::vector<int>& s, int target);

/// Ascending preprocessing sets A_1 c ... c A_r for an ascending sequence of
/// generator sets, with the z-sequence cube bookkeeping. For each level,
/// |A_i| <= log|G_i|, cost(A_i | T_i) < log^2|G_i|, and every element of G_i
/// is computable from A_i in fewer than 2 log|G_i| steps (levels with
/// |G_i| = 1 are vacuous).
struct PreprocessingChain {
  const FiniteGroup* parent = nullptr;
  std::vector<int> set;           // z_1 .. z_s (union of the A_i)
  std::vector<int> level_sizes;   // |A_i| per input level (index 0 = 0)
  std::vector<std::vector<int>> input_sets;  // the T_i as given
  Slp slp;                        // computes every z from the union of the T_i
  std::vector<int> slp_level_steps;  // step count after each level (index 0 = 0)
  std::vector<int> z_step;        // step index producing each z
  std::vector<std::uint32_t> cube_masks;  // K members as exponent vectors
  std::vector<int> cube_values;           // parallel element values

  /// Word of length <= 2*nbits over the first nbits chain elements (entries
  /// +-(index+1)) evaluating to the element; empty word for the identity.
  /// nbits = -1 uses the whole set.
  Word word_for(const FiniteGroup& g, int element, int nbits = -1) const;
  /// SLP over base = set computing the element through the first nbits
  /// elements; reduced length < 2 log|G_i|.
  Slp slp_for(const FiniteGroup& g, int element, int nbits = -1) const;

 private:
  // element -> least cube pair, per usable prefix length
  mutable std::map<int, std::vector<std::pair<int, int>>> pair_cache_;
  const std::vector<std::pair<int, int>>& pairs(const FiniteGroup& g, int nbits) const;
};

PreprocessingChain preprocessing_chain(const FiniteGroup& g,
                                       const std::vector<std::vector<int>>& gensets);

/// Generating set A with |A| <= log|G| such that every element is a word of
/// length at most 2|A| over A (breadth-first verified).
std::vector<int> swift_generating_set(const FiniteGroup& g);

/// Largest word length needed to reach every element over gens (inverses
/// allowed); -1 if gens do not generate.
int cayley_radius(const FiniteGroup& g, const std::vector<int>& gens);

/// The formula psi pinning the preprocessing sets: an existential prefix
/// walks the chain's SLP (tagged with a witness plan, so the A-variables are
/// derived from the T-variables during evaluation), plus per-level clauses
/// that <T_i> and <A_i> generate the same elements. Variables: t_terms[i]
/// lists the terms for T_i's elements in input order; a_vars one per chain
/// element. Length O(log^2 |G|).
fo::FormulaP preproc_formula(const FiniteGroup& g, const PreprocessingChain& chain,
                             const std::vector<std::vector<fo::Term>>& t_terms,
                             const std::vector<int>& a_vars, int& next_var,
                             bool beta_route = false);

}  // namespace fgdesc
