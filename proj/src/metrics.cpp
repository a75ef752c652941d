#include "fgdesc/metrics.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace fgdesc::fo {

namespace {

int digits_weight(int var) {
  // ceil(log10 i): least d with 10^d >= i.
  int d = 0;
  long long pow = 1;
  while (pow < var) {
    pow *= 10;
    ++d;
  }
  return d;
}

void term_lengths(const Term& t, long long& sym, long long& bin) {
  switch (t.kind) {
    case Term::Kind::Var:
      sym += 1;
      bin += 1 + digits_weight(t.var);
      return;
    case Term::Kind::Const:
      sym += 1;
      bin += 1;
      return;
    case Term::Kind::App:
      sym += 1;
      bin += 1;
      for (const Term& a : t.args) term_lengths(a, sym, bin);
      return;
  }
}

void formula_lengths(const FormulaP& f, long long& sym, long long& bin) {
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Rel:
      sym += 1;  // the equality / relation symbol
      bin += 1;
      for (const Term& t : f->terms) term_lengths(t, sym, bin);
      return;
    case Formula::Kind::Not:
    case Formula::Kind::Implies:
      sym += 1;
      bin += 1;
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      sym += static_cast<long long>(f->children.size()) - 1;
      bin += static_cast<long long>(f->children.size()) - 1;
      break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      sym += 2;  // quantifier + its variable occurrence
      bin += 2 + digits_weight(f->qvar);
      break;
  }
  for (const FormulaP& c : f->children) formula_lengths(c, sym, bin);
}

FormulaP nnf(const FormulaP& f, bool negate);

FormulaP nnf_children_or_and(const FormulaP& f, bool negate) {
  std::vector<FormulaP> out;
  out.reserve(f->children.size());
  for (const FormulaP& c : f->children) out.push_back(nnf(c, negate));
  bool is_and = (f->kind == Formula::Kind::And) != negate;
  return is_and ? mk_and(std::move(out)) : mk_or(std::move(out));
}

FormulaP nnf(const FormulaP& f, bool negate) {
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Rel:
      return negate ? mk_not(f) : f;
    case Formula::Kind::Not:
      return nnf(f->children[0], !negate);
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return nnf_children_or_and(f, negate);
    case Formula::Kind::Implies: {
      // a -> b == !a or b.
      FormulaP na = nnf(f->children[0], !negate);
      FormulaP nb = nnf(f->children[1], negate);
      return negate ? mk_and({std::move(na), std::move(nb)})
                    : mk_or({std::move(na), std::move(nb)});
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      bool forall = (f->kind == Formula::Kind::Forall) != negate;
      FormulaP body = nnf(f->children[0], negate);
      return forall ? mk_forall(f->qvar, std::move(body))
                    : mk_exists(f->qvar, std::move(body));
    }
  }
  throw std::logic_error("unreachable");
}

FormulaP pull_matrix(const FormulaP& f, std::vector<std::pair<bool, int>>& prefix) {
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Rel:
    case Formula::Kind::Not:
      return f;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      prefix.push_back({f->kind == Formula::Kind::Exists, f->qvar});
      return pull_matrix(f->children[0], prefix);
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      // Children's prefixes merge blockwise: quantifiers of independent
      // subformulas commute, so same-kind leading blocks are emitted
      // together (left-to-right within a round). Keeps the alternation
      // count at the maximum over the children instead of their sum.
      std::vector<FormulaP> parts;
      std::vector<std::vector<std::pair<bool, int>>> prefixes(f->children.size());
      parts.reserve(f->children.size());
      for (std::size_t i = 0; i < f->children.size(); ++i)
        parts.push_back(pull_matrix(f->children[i], prefixes[i]));
      std::vector<std::size_t> pos(f->children.size(), 0);
      bool kind = true;  // existential blocks first, unless none leads with one
      {
        bool any = false, all_forall = true;
        for (std::size_t i = 0; i < prefixes.size(); ++i)
          if (pos[i] < prefixes[i].size()) {
            any = true;
            if (prefixes[i][pos[i]].first) all_forall = false;
          }
        if (any && all_forall) kind = false;
      }
      while (true) {
        bool emitted = false;
        for (std::size_t i = 0; i < prefixes.size(); ++i)
          while (pos[i] < prefixes[i].size() && prefixes[i][pos[i]].first == kind) {
            prefix.push_back(prefixes[i][pos[i]]);
            ++pos[i];
            emitted = true;
          }
        (void)emitted;
        bool remaining = false;
        for (std::size_t i = 0; i < prefixes.size(); ++i)
          if (pos[i] < prefixes[i].size()) remaining = true;
        if (!remaining) break;
        kind = !kind;
      }
      return f->kind == Formula::Kind::And ? mk_and(std::move(parts))
                                           : mk_or(std::move(parts));
    }
    case Formula::Kind::Implies:
      throw std::logic_error("implication survived NNF");
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::string AlternationClass::str() const {
  if (rank == 0) return "QF";
  return (lead == Lead::Sigma ? "Sigma_" : "Pi_") + std::to_string(rank);
}

LengthReport length_report(const FormulaP& f) {
  LengthReport r;
  formula_lengths(f, r.symbol_length, r.binary_length);
  r.alternation = alternation_rank(f);
  return r;
}

long long symbol_length(const FormulaP& f) {
  long long sym = 0, bin = 0;
  formula_lengths(f, sym, bin);
  return sym;
}

PrenexForm to_prenex(const FormulaP& f) {
  FormulaP n = nnf(f, false);
  int next = n->max_var() + 1;
  FormulaP renamed = refresh_bound(n, next);
  PrenexForm out;
  out.matrix = pull_matrix(renamed, out.prefix);
  return out;
}

AlternationClass alternation_rank(const FormulaP& f) {
  PrenexForm p = to_prenex(f);
  AlternationClass c;
  if (p.prefix.empty()) return c;
  c.lead = p.prefix.front().first ? AlternationClass::Lead::Sigma
                                  : AlternationClass::Lead::Pi;
  c.rank = 1;
  for (std::size_t i = 1; i < p.prefix.size(); ++i)
    if (p.prefix[i].first != p.prefix[i - 1].first) ++c.rank;
  return c;
}

namespace {

FormulaP reuse_rec(const FormulaP& f, std::map<int, Term>& renames, int depth,
                   int base) {
  if (f->kind == Formula::Kind::Forall || f->kind == Formula::Kind::Exists) {
    int fresh = base + depth;
    auto saved = renames.count(f->qvar) ? std::optional<Term>{renames[f->qvar]}
                                        : std::optional<Term>{};
    renames[f->qvar] = Term::v(fresh);
    FormulaP child = reuse_rec(f->children[0], renames, depth + 1, base);
    if (saved) renames[f->qvar] = *saved;
    else renames.erase(f->qvar);
    Formula out = *f;
    out.qvar = fresh;
    out.children = {std::move(child)};
    out.tag = ShortcutTag{};  // renaming invalidates plan variable ids
    return finish(std::move(out));
  }
  Formula out = *f;
  out.tag = ShortcutTag{};
  for (Term& t : out.terms) t = subst_term(t, renames);
  for (FormulaP& c : out.children) c = reuse_rec(c, renames, depth, base);
  return finish(std::move(out));
}

}  // namespace

FormulaP reuse_variables(const FormulaP& f) {
  int base = 1;
  for (int v : f->free_vars()) base = std::max(base, v + 1);
  std::map<int, Term> renames;
  return reuse_rec(f, renames, 0, base);
}

}  // namespace fgdesc::fo
