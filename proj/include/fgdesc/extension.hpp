#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "fgdesc/group.hpp"
#include "fgdesc/presentations.hpp"

namespace fgdesc {

/// Extension E of N by H built on the carrier N x H (element a*|H| + x),
/// with canonical lifts (1, s_i) of the chosen H-generators. `phi` is filled
/// by phi_restricted: word w (trivial image in H) -> value w(lifts) in N.
struct ExtensionData {
  FiniteGroup e;
  int n_order = 0, h_order = 0;
  std::vector<int> h_gens;                // generating elements of H
  std::vector<int> lifts;                 // per generator, element of E
  std::vector<int> kernel;                // sorted: N's copy inside E
  std::vector<int> proj_h;                // E element -> H element
  std::vector<int> kernel_to_n;           // E element -> N element, -1 outside
  std::vector<std::vector<int>> action;   // per generator i: a -> a^{s'_i} (N indices)
  std::vector<int> factor_set;            // f(x,y), |H|*|H|, N-element values
  std::map<Word, int> phi;                // N-element values, filled later

  int encode(int a, int x) const { return a * h_order + x; }
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// All extensions of N by H realizing the prescribed conjugation action,
/// enumerated over normalized factor sets f : H x H -> N satisfying the
/// cocycle and compatibility conditions. `action[x]` is the automorphism
/// a -> a^{lift of x} (right conjugation); action at the identity must be
/// trivial. Extensions with equal factor sets are identical; distinct factor
/// sets are kept distinct. Throws BudgetExceeded when |N|^(|H|^2) is above
/// the configured budget.
std::vector<ExtensionData> enumerate_extensions(
    const FiniteGroup& n, const FiniteGroup& h, const std::vector<int>& h_gens,
    const std::vector<std::vector<int>>& action);

/// Over-N isomorphism E1 -> E2 fixing the kernel pointwise and mapping
/// lift i of E1 to lift i of E2, when one exists.
std::optional<std::vector<int>> over_n_isomorphism(const ExtensionData& e1,
                                                   const ExtensionData& e2);

/// Over-N isomorphism with free lift images (any isomorphism fixing the
/// kernel pointwise that respects the projections to H).
bool over_n_isomorphic_somehow(const ExtensionData& e1, const ExtensionData& e2);

}  // namespace fgdesc
