#pragma once

#include <string>
#include <vector>

#include "fgdesc/catalog.hpp"
#include "fgdesc/eval.hpp"
#include "fgdesc/pipeline.hpp"

namespace fgdesc {

/// Certification that a sentence describes its target among all same-order
/// candidates. verdict "describes" requires the target to satisfy the
/// sentence, every non-isomorphic candidate to reject it, and the catalog to
/// be complete.
struct VerificationReport {
  std::string target;
  fo::LengthReport metrics;
  bool satisfied_by_target = false;
  struct Candidate {
    std::string label;
    bool isomorphic_to_target = false;
    bool satisfied = false;
    int failing_conjunct = -1;  // frontier conjunct index when rejected
  };
  std::vector<Candidate> candidates;
  bool catalog_complete = false;
  std::string verdict;  // describes | fails | incomplete-catalog

  std::string to_json() const;
};

/// Model checks phi on the target and on every catalog member. Throws if
/// the catalog order differs from |g|. Checked evaluation (shortcut oracles
/// cross-checked against naive evaluation under the budget).
VerificationReport verify_describes(
    const fo::FormulaP& phi, const FiniteGroup& g, const GroupCatalog& catalog,
    fo::EvalOptions::Mode mode = fo::EvalOptions::Mode::Checked);

/// Counting lower bounds, as exact integer formulas (documented in the
/// README): groups-p-n uses the p-group count p^{(2/27) n^2 (n-6)};
/// graphs uses 2^{n^2/6}/n; prime-fields uses the incompressibility of a
/// random prime's index.
long long lower_bound_bits_groups(long long p, int n);
long long lower_bound_bits_graphs(int n);
long long lower_bound_bits_prime_fields(long long q);

/// Scaling measurements, one CSV row per family member: family, order,
/// symbol and binary lengths, log and log^3 (paper convention), and both
/// ratios. Schema v1; the header embeds the tool version and config hash.
std::string scaling_report(const std::string& family, int max_k);

}  // namespace fgdesc
