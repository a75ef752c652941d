#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "fgdesc/config.hpp"
#include "fgdesc/formula.hpp"
#include "fgdesc/structure.hpp"

namespace fgdesc::fo {

/// Variable assignment indexed by variable id; kUnset marks unbound slots.
using Assignment = std::vector<int>;
inline constexpr int kUnset = -1;

struct EvalOptions {
  enum class Mode {
    Naive,     // plain Tarskian recursion, tags ignored
    Shortcut,  // tag oracles + existential-prefix constraint search
    Checked,   // Shortcut, cross-checking tagged nodes against Naive when
               // the estimated naive cost is within the budget
  };
  Mode mode = Mode::Shortcut;
  bool memo = true;
  long long crosscheck_budget = config::kNaiveCrossCheckBudget;
};

struct EvalDiagnostics {
  /// Index of the top-level conjunct at the search frontier when a sentence
  /// with an existential prefix fails; -1 when not applicable.
  int failing_conjunct = -1;
  /// Most conjuncts simultaneously satisfied along any search branch.
  int max_conjuncts_satisfied = -1;
};

/// Tarskian evaluator with a per-instance memo keyed by subformula identity
/// and the values of its free variables. One evaluator per structure;
/// reusing an instance across evaluations keeps oracle caches warm.
class Evaluator {
 public:
  explicit Evaluator(const Structure& m, EvalOptions opt = {});

  /// Sentence evaluation (throws if free variables remain).
  bool evaluate(const FormulaP& f);
  /// Evaluation under an assignment covering the free variables.
  bool evaluate(const FormulaP& f, Assignment& asg);

  const EvalDiagnostics& diagnostics() const { return diag_; }
  long long crosschecks_run() const { return crosschecks_; }

 private:
  struct MemoKey {
    const Formula* node;
    bool tags;
    std::vector<int> vals;
    bool operator==(const MemoKey& o) const {
      return node == o.node && tags == o.tags && vals == o.vals;
    }
  };
  struct MemoHash {
    std::size_t operator()(const MemoKey& k) const {
      std::size_t h = std::hash<const void*>()(k.node) * 31 + k.tags;
      for (int v : k.vals) h = h * 1000003 + static_cast<std::size_t>(v + 2);
      return h;
    }
  };

  bool eval(const FormulaP& f, Assignment& asg, bool tags);
  bool eval_core(const FormulaP& f, Assignment& asg, bool tags);
  int eval_term(const Term& t, const Assignment& asg) const;

  bool oracle_answer(const FormulaP& f, Assignment& asg);
  bool oracle_generation(const ShortcutTag& tag, const Assignment& asg);
  bool oracle_power(const ShortcutTag& tag, const Assignment& asg);
  bool oracle_power_up_to(const ShortcutTag& tag, const Assignment& asg);
  bool oracle_slp(const SlpPlan& plan, Assignment& asg, bool derive,
                  std::vector<int>* derived);

  bool exists_prefix_search(const FormulaP& f, Assignment& asg);

  /// Membership set of the bounded product closure: levels rounds of
  /// S <- S*S starting from {identity} + seeds (fixpoint stops early).
  const std::vector<char>& product_closure(const std::string& op,
                                           std::vector<int> seeds, int levels);

  double naive_cost(const FormulaP& f);

  const Structure& m_;
  EvalOptions opt_;
  EvalDiagnostics diag_;
  long long crosschecks_ = 0;
  std::unordered_map<MemoKey, bool, MemoHash> memo_;
  std::unordered_map<const Formula*, double> cost_;
  std::unordered_map<const Formula*, char> has_quant_;
  std::unordered_map<std::string, std::vector<char>> closure_cache_;
  std::unordered_map<std::string, char> power_cache_;
};

}  // namespace fgdesc::fo
