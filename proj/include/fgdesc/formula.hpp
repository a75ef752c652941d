#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace fgdesc::fo {

/// First-order signature: function symbols with arities, constants, and
/// relation symbols. The stock signatures below cover monoids, groups
/// (optionally with a distinguished-subgroup predicate or automorphism
/// function), rings, and difference rings.
struct Signature {
  std::string name;
  std::map<std::string, int> functions;
  std::set<std::string> constants;
  std::map<std::string, int> relations;
};

const Signature& monoid_sig();
const Signature& group_sig();
const Signature& group_pred_sig();  // group + unary predicate P
const Signature& group_aut_sig();   // group + unary function aut
const Signature& ring_sig();        // add, mul, constants 0 and 1
const Signature& diff_ring_sig();   // ring + unary function sigma

/// Signature by name ("monoid", "group", "group+pred", "group+aut", "ring",
/// "ring+sigma"); throws for unknown names.
const Signature& signature_by_name(const std::string& name);

// --- terms ------------------------------------------------------------

struct Term {
  enum class Kind { Var, Const, App };
  Kind kind = Kind::Var;
  int var = 0;            // Var: index i, rendered x<i>
  std::string sym;        // Const / App
  std::vector<Term> args; // App

  static Term v(int i);
  static Term c(std::string name);
  static Term f(std::string name, std::vector<Term> args);

  bool operator==(const Term& o) const;
};

// --- shortcut tags ------------------------------------------------------

/// Straight-line evaluation plan for an existential block whose witnesses
/// are determined by the sources: run the steps, then compare the check
/// variables against the designated step values.
struct SlpPlan {
  struct Step {
    enum class Kind { Src, Inv, Mul };
    Kind kind;
    int a = 0;  // Src: variable id; Inv/Mul: earlier step index
    int b = 0;  // Mul: earlier step index
  };
  std::vector<Step> steps;
  std::vector<std::pair<int, int>> checks;  // (variable id, step index)
};

/// Builder-provenance tag: the tagged subtree is semantically equivalent to
/// the tag's oracle, which the evaluator may use in shortcut mode. mod_gens
/// nonempty means every equality in the subtree has been replaced by
/// membership of the quotient s*t^-1 in the closure of mod_gens.
struct ShortcutTag {
  enum class Kind { None, Generation, Power, PowerUpTo, SlpWitness };
  Kind kind = Kind::None;

  std::string op;        // binary operation symbol ("mul" or "add")
  std::string id_const;  // identity constant symbol ("e" or "0"...)

  long long n = 0;   // Power: exponent. PowerUpTo: exclusive bound 2^log n.
  int k = 0;         // Generation: number of generator terms
  long long v = 0;   // Generation: group-size bound (depth = log v)

  std::vector<Term> terms;      // Power/PowerUpTo: {target g, base x};
                                // Generation: {target g, x_1..x_k}
  std::vector<Term> mod_gens;   // equality-modulo generators (may be empty)
  std::shared_ptr<const SlpPlan> plan;  // SlpWitness

  bool present() const { return kind != Kind::None; }
};

// --- formulas ------------------------------------------------------------

class Formula;
using FormulaP = std::shared_ptr<const Formula>;

class Formula {
 public:
  enum class Kind { Eq, Rel, Not, And, Or, Implies, Forall, Exists };

  Kind kind;
  std::vector<Term> terms;        // Eq: exactly 2; Rel: arity of sym
  std::string sym;                // Rel
  std::vector<FormulaP> children; // Not: 1; And/Or: >= 2; Implies: 2; quant: 1
  int qvar = 0;                   // Forall/Exists
  ShortcutTag tag;

  const std::vector<int>& free_vars() const { return free_vars_; }
  int max_var() const { return max_var_; }

  friend FormulaP finish(Formula f);

 private:
  std::vector<int> free_vars_;  // sorted
  int max_var_ = 0;             // max variable index anywhere (free or bound)
};

FormulaP mk_eq(Term a, Term b);
FormulaP mk_rel(std::string sym, std::vector<Term> terms);
FormulaP mk_not(FormulaP f);
FormulaP mk_and(std::vector<FormulaP> fs);   // singleton collapses
FormulaP mk_or(std::vector<FormulaP> fs);    // singleton collapses
FormulaP mk_implies(FormulaP a, FormulaP b);
FormulaP mk_forall(int var, FormulaP f);
FormulaP mk_exists(int var, FormulaP f);
FormulaP with_tag(FormulaP f, ShortcutTag tag);

/// Structural equality; shortcut tags are advisory and ignored.
bool equal(const FormulaP& a, const FormulaP& b);

/// Free variables of a term.
void term_vars(const Term& t, std::set<int>& out);

/// Capture-checked substitution of free variables by terms. Throws if a
/// substituted term's variable would be captured by a binder.
Term subst_term(const Term& t, const std::map<int, Term>& map);
FormulaP subst(const FormulaP& f, const std::map<int, Term>& map);

/// Renames every bound variable to a fresh index taken from `next` (which is
/// advanced); deterministic left-to-right traversal.
FormulaP refresh_bound(const FormulaP& f, int& next);

}  // namespace fgdesc::fo
