#include "fgdesc/formula.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace fgdesc::fo {

namespace {

Signature make_monoid() {
  Signature s;
  s.name = "monoid";
  s.functions = {{"mul", 2}};
  s.constants = {"e"};
  return s;
}

Signature make_group() {
  Signature s = make_monoid();
  s.name = "group";
  s.functions["inv"] = 1;
  return s;
}

}  // namespace

const Signature& monoid_sig() {
  static const Signature s = make_monoid();
  return s;
}

const Signature& group_sig() {
  static const Signature s = make_group();
  return s;
}

const Signature& group_pred_sig() {
  static const Signature s = [] {
    Signature t = make_group();
    t.name = "group+pred";
    t.relations["P"] = 1;
    return t;
  }();
  return s;
}

const Signature& group_aut_sig() {
  static const Signature s = [] {
    Signature t = make_group();
    t.name = "group+aut";
    t.functions["aut"] = 1;
    return t;
  }();
  return s;
}

const Signature& ring_sig() {
  static const Signature s = [] {
    Signature t;
    t.name = "ring";
    t.functions = {{"add", 2}, {"mul", 2}};
    t.constants = {"0", "1"};
    return t;
  }();
  return s;
}

const Signature& diff_ring_sig() {
  static const Signature s = [] {
    Signature t;
    t.name = "ring+sigma";
    t.functions = {{"add", 2}, {"mul", 2}, {"sigma", 1}};
    t.constants = {"0", "1"};
    return t;
  }();
  return s;
}

const Signature& signature_by_name(const std::string& name) {
  if (name == "monoid") return monoid_sig();
  if (name == "group") return group_sig();
  if (name == "group+pred") return group_pred_sig();
  if (name == "group+aut") return group_aut_sig();
  if (name == "ring") return ring_sig();
  if (name == "ring+sigma") return diff_ring_sig();
  throw std::invalid_argument("unknown signature: " + name);
}

Term Term::v(int i) {
  Term t;
  t.kind = Kind::Var;
  t.var = i;
  return t;
}

Term Term::c(std::string name) {
  Term t;
  t.kind = Kind::Const;
  t.sym = std::move(name);
  return t;
}

Term Term::f(std::string name, std::vector<Term> args) {
  Term t;
  t.kind = Kind::App;
  t.sym = std::move(name);
  t.args = std::move(args);
  return t;
}

bool Term::operator==(const Term& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Var: return var == o.var;
    case Kind::Const: return sym == o.sym;
    case Kind::App: return sym == o.sym && args == o.args;
  }
  return false;
}

void term_vars(const Term& t, std::set<int>& out) {
  if (t.kind == Term::Kind::Var) out.insert(t.var);
  for (const Term& a : t.args) term_vars(a, out);
}

namespace {

int term_max_var(const Term& t) {
  int m = t.kind == Term::Kind::Var ? t.var : 0;
  for (const Term& a : t.args) m = std::max(m, term_max_var(a));
  return m;
}

}  // namespace

FormulaP finish(Formula f) {
  std::set<int> fv;
  int maxv = 0;
  for (const Term& t : f.terms) {
    term_vars(t, fv);
    maxv = std::max(maxv, term_max_var(t));
  }
  for (const FormulaP& c : f.children) {
    fv.insert(c->free_vars().begin(), c->free_vars().end());
    maxv = std::max(maxv, c->max_var());
  }
  if (f.kind == Formula::Kind::Forall || f.kind == Formula::Kind::Exists) {
    fv.erase(f.qvar);
    maxv = std::max(maxv, f.qvar);
  }
  f.free_vars_.assign(fv.begin(), fv.end());
  f.max_var_ = maxv;
  return std::make_shared<const Formula>(std::move(f));
}

FormulaP mk_eq(Term a, Term b) {
  Formula f;
  f.kind = Formula::Kind::Eq;
  f.terms = {std::move(a), std::move(b)};
  return finish(std::move(f));
}

FormulaP mk_rel(std::string sym, std::vector<Term> terms) {
  Formula f;
  f.kind = Formula::Kind::Rel;
  f.sym = std::move(sym);
  f.terms = std::move(terms);
  return finish(std::move(f));
}

FormulaP mk_not(FormulaP c) {
  Formula f;
  f.kind = Formula::Kind::Not;
  f.children = {std::move(c)};
  return finish(std::move(f));
}

FormulaP mk_and(std::vector<FormulaP> fs) {
  if (fs.empty()) throw std::invalid_argument("mk_and: empty conjunction");
  if (fs.size() == 1) return fs[0];
  Formula f;
  f.kind = Formula::Kind::And;
  f.children = std::move(fs);
  return finish(std::move(f));
}

FormulaP mk_or(std::vector<FormulaP> fs) {
  if (fs.empty()) throw std::invalid_argument("mk_or: empty disjunction");
  if (fs.size() == 1) return fs[0];
  Formula f;
  f.kind = Formula::Kind::Or;
  f.children = std::move(fs);
  return finish(std::move(f));
}

FormulaP mk_implies(FormulaP a, FormulaP b) {
  Formula f;
  f.kind = Formula::Kind::Implies;
  f.children = {std::move(a), std::move(b)};
  return finish(std::move(f));
}

FormulaP mk_forall(int var, FormulaP c) {
  Formula f;
  f.kind = Formula::Kind::Forall;
  f.qvar = var;
  f.children = {std::move(c)};
  return finish(std::move(f));
}

FormulaP mk_exists(int var, FormulaP c) {
  Formula f;
  f.kind = Formula::Kind::Exists;
  f.qvar = var;
  f.children = {std::move(c)};
  return finish(std::move(f));
}

FormulaP with_tag(FormulaP f, ShortcutTag tag) {
  Formula copy = *f;
  copy.tag = std::move(tag);
  return finish(std::move(copy));
}

bool equal(const FormulaP& a, const FormulaP& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->sym != b->sym || a->qvar != b->qvar) return false;
  if (!(a->terms == b->terms)) return false;
  if (a->children.size() != b->children.size()) return false;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (!equal(a->children[i], b->children[i])) return false;
  return true;
}

Term subst_term(const Term& t, const std::map<int, Term>& map) {
  switch (t.kind) {
    case Term::Kind::Var: {
      auto it = map.find(t.var);
      return it == map.end() ? t : it->second;
    }
    case Term::Kind::Const:
      return t;
    case Term::Kind::App: {
      Term out = t;
      for (Term& a : out.args) a = subst_term(a, map);
      return out;
    }
  }
  return t;
}

namespace {

ShortcutTag subst_tag(const ShortcutTag& tag, const std::map<int, Term>& map) {
  ShortcutTag out = tag;
  for (Term& t : out.terms) t = subst_term(t, map);
  for (Term& t : out.mod_gens) t = subst_term(t, map);
  if (tag.kind == ShortcutTag::Kind::SlpWitness && tag.plan) {
    // Plans reference variables directly; remap sources and checks when they
    // are substituted by plain variables, otherwise drop the tag.
    auto plan = std::make_shared<SlpPlan>(*tag.plan);
    for (auto& step : plan->steps)
      if (step.kind == SlpPlan::Step::Kind::Src) {
        auto it = map.find(step.a);
        if (it != map.end()) {
          if (it->second.kind != Term::Kind::Var) return ShortcutTag{};
          step.a = it->second.var;
        }
      }
    for (auto& [var, idx] : plan->checks) {
      auto it = map.find(var);
      if (it != map.end()) {
        if (it->second.kind != Term::Kind::Var) return ShortcutTag{};
        var = it->second.var;
      }
    }
    out.plan = std::move(plan);
  }
  return out;
}

}  // namespace

FormulaP subst(const FormulaP& f, const std::map<int, Term>& map) {
  if (map.empty()) return f;
  bool relevant = false;
  for (int v : f->free_vars())
    if (map.count(v)) {
      relevant = true;
      break;
    }
  if (!relevant) return f;

  Formula out = *f;
  out.tag = subst_tag(f->tag, map);
  if (f->kind == Formula::Kind::Forall || f->kind == Formula::Kind::Exists) {
    std::map<int, Term> inner = map;
    inner.erase(f->qvar);
    // Capture check: no substituted term may mention the binder.
    for (const auto& [from, to] : inner) {
      (void)from;
      std::set<int> tv;
      term_vars(to, tv);
      if (tv.count(f->qvar))
        throw std::logic_error("substitution would capture a bound variable");
    }
    out.children = {subst(f->children[0], inner)};
  } else {
    for (Term& t : out.terms) t = subst_term(t, map);
    for (FormulaP& c : out.children) c = subst(c, map);
  }
  return finish(std::move(out));
}

namespace {

FormulaP refresh_rec(const FormulaP& f, std::map<int, Term>& renames, int& next) {
  if (f->kind == Formula::Kind::Forall || f->kind == Formula::Kind::Exists) {
    int fresh = next++;
    auto saved = renames.find(f->qvar) == renames.end()
                     ? std::optional<Term>{}
                     : std::optional<Term>{renames[f->qvar]};
    renames[f->qvar] = Term::v(fresh);
    FormulaP child = refresh_rec(f->children[0], renames, next);
    if (saved) renames[f->qvar] = *saved;
    else renames.erase(f->qvar);
    Formula out = *f;
    out.qvar = fresh;
    out.children = {std::move(child)};
    // The renaming map was restored above; the tag may mention the bound
    // variable, so re-apply the binder's own rename for it.
    if (f->tag.present()) {
      std::map<int, Term> with_binder = renames;
      with_binder[f->qvar] = Term::v(fresh);
      out.tag = subst_tag(f->tag, with_binder);
    }
    return finish(std::move(out));
  }
  Formula out = *f;
  if (f->tag.present()) out.tag = subst_tag(f->tag, renames);
  for (Term& t : out.terms) t = subst_term(t, renames);
  for (FormulaP& c : out.children) c = refresh_rec(c, renames, next);
  return finish(std::move(out));
}

}  // namespace

FormulaP refresh_bound(const FormulaP& f, int& next) {
  std::map<int, Term> renames;
  return refresh_rec(f, renames, next);
}

}  // namespace fgdesc::fo
