#pragma once

#include <string>

#include "fgdesc/formula.hpp"

namespace fgdesc::fo {

/// Quantifier-alternation class of a prenex form: leading block kind and
/// the number of blocks ("rank"). Quantifier-free formulas have rank 0.
struct AlternationClass {
  enum class Lead { None, Sigma, Pi };
  Lead lead = Lead::None;
  int rank = 0;

  std::string str() const;
  bool operator==(const AlternationClass& o) const {
    return lead == o.lead && rank == o.rank;
  }
};

/// Length metrics: symbol_length counts every variable, constant,
/// function/relation symbol, connective, and quantifier occurrence as 1
/// (parentheses and commas excluded); binary_length adds ceil(log10 i)
/// digits per occurrence of variable x_i; alternation is measured on the
/// prenex normal form with left-to-right quantifier extraction.
struct LengthReport {
  long long symbol_length = 0;
  long long binary_length = 0;
  AlternationClass alternation;
};

LengthReport length_report(const FormulaP& f);

long long symbol_length(const FormulaP& f);

/// Prenex normal form: implications unfolded, negations pushed to atoms,
/// bound variables renamed apart, quantifiers extracted left-to-right.
struct PrenexForm {
  std::vector<std::pair<bool, int>> prefix;  // (is_exists, var)
  FormulaP matrix;
};
PrenexForm to_prenex(const FormulaP& f);

AlternationClass alternation_rank(const FormulaP& f);

/// Metric experiment: renames bound variables so that disjoint scopes share
/// indices (nesting depth above the free variables). Lowers binary length;
/// semantics preserved.
FormulaP reuse_variables(const FormulaP& f);

}  // namespace fgdesc::fo
