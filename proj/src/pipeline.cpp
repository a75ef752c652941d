#include "fgdesc/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "fgdesc/config.hpp"
#include "fgdesc/numtheory.hpp"

namespace fgdesc {

using builders::t_e;
using builders::t_inv;
using builders::t_mul;
using builders::word_term;
using fo::Formula;
using fo::FormulaP;
using fo::mk_and;
using fo::mk_eq;
using fo::mk_exists;
using fo::mk_forall;
using fo::mk_implies;
using fo::mk_not;
using fo::mk_rel;
using fo::mk_or;
using fo::Term;

std::string DescriptionResult::provenance_json() const {
  nlohmann::json j;
  j["mode"] = mode;
  j["symbol_length"] = metrics.symbol_length;
  j["binary_length"] = metrics.binary_length;
  j["alternation"] = metrics.alternation.str();
  for (const auto& [name, len] : provenance) j["conjuncts"][name] = len;
  j["factors"] = factors;
  for (const auto& rep : word_reports)
    j["word_reports"].push_back(nlohmann::json::parse(rep.to_json()));
  if (!word_reports.size()) j["word_reports"] = nlohmann::json::array();
  j["tuple_vars"] = tuple_vars;
  j["config_hash"] = config::config_hash();
  return j.dump(2);
}

namespace {

long long cube_ll(long long x) { return x * x * x; }

DescriptionResult describe_core(const FiniteGroup& g, bool beta_route,
                                int first_var,
                                std::vector<int>* out_a_vars,
                                const PreprocessingChain** out_chain_handle,
                                PreprocessingChain* chain_storage,
                                CompositionSeries* series_storage) {
  DescriptionResult out;
  out.mode = beta_route ? "sigma_bounded" : "full";
  if (g.order() == 1) {
    int x = first_var;
    out.formula = mk_forall(x, mk_eq(Term::v(x), t_e()));
    out.metrics = fo::length_report(out.formula);
    out.provenance.push_back({"chi", out.metrics.symbol_length});
    return out;
  }

  CompositionSeries local_series = composition_series(g);
  CompositionSeries& series = series_storage ? *series_storage : local_series;
  if (series_storage) *series_storage = std::move(local_series);
  const int r = series.length();
  std::vector<std::vector<int>> gensets(series.gensets.begin() + 1,
                                        series.gensets.end());
  PreprocessingChain local_chain = preprocessing_chain(g, gensets);
  PreprocessingChain& chain = chain_storage ? *chain_storage : local_chain;
  if (chain_storage) *chain_storage = std::move(local_chain);
  if (out_chain_handle) *out_chain_handle = &chain;

  // T variables level by level, then A variables.
  int next = first_var;
  std::vector<int> elem_var(g.order(), -1);
  for (int i = 0; i < r; ++i)
    for (int e : series.factors[i].new_gens) elem_var[e] = next++;
  std::vector<int> a_vars;
  for (std::size_t j = 0; j < chain.set.size(); ++j) a_vars.push_back(next++);
  if (out_a_vars) *out_a_vars = a_vars;

  auto terms_for = [&](const std::vector<int>& elems) {
    std::vector<Term> ts;
    for (int e : elems) ts.push_back(Term::v(elem_var[e]));
    return ts;
  };
  std::vector<LevelTerms> level_terms;
  std::vector<std::vector<Term>> t_terms;
  for (int i = 1; i <= r; ++i) {
    LevelTerms lt;
    lt.new_gens = terms_for(series.factors[i - 1].new_gens);
    lt.cum_gens = terms_for(series.gensets[i]);
    lt.prev_gens = terms_for(series.gensets[i - 1]);
    level_terms.push_back(lt);
    t_terms.push_back(terms_for(series.gensets[i]));
  }
  std::vector<Term> a_terms;
  for (int av : a_vars) a_terms.push_back(Term::v(av));

  FormulaP psi = preproc_formula(g, chain, t_terms, a_vars, next, beta_route);
  SentenceParts parts = extension_sentence_parts(g, series, chain, level_terms,
                                                 a_terms, next, beta_route);

  std::vector<FormulaP> conj{psi, parts.chi};
  out.provenance.push_back({"psi", fo::symbol_length(psi)});
  out.provenance.push_back({"chi", fo::symbol_length(parts.chi)});
  if (r >= 2) {
    conj.push_back(parts.kappa);
    out.provenance.push_back({"kappa", fo::symbol_length(parts.kappa)});
  }
  if (parts.rho) {
    conj.push_back(*parts.rho);
    out.provenance.push_back({"rho", fo::symbol_length(*parts.rho)});
  }
  FormulaP body = mk_and(std::move(conj));
  for (auto it = a_vars.rbegin(); it != a_vars.rend(); ++it)
    body = mk_exists(*it, body);
  for (int i = r; i >= 1; --i) {
    const auto& gens = series.factors[i - 1].new_gens;
    for (auto it = gens.rbegin(); it != gens.rend(); ++it)
      body = mk_exists(elem_var[*it], body);
  }
  out.formula = body;
  out.metrics = fo::length_report(out.formula);
  out.word_reports = std::move(parts.word_reports);
  for (int i = 0; i < r; ++i) {
    const SeriesFactor& f = series.factors[i];
    out.factors.push_back(f.cyclic ? "C" + std::to_string(f.prime)
                                   : (f.pres ? f.pres->name
                                             : "simple" + std::to_string(f.group.order())));
  }

  long long lg = paper_log(g.order());
  long long bound = beta_route
                        ? config::kPipelineSigmaC * cube_ll(lg + 1) * (lg + 1)
                        : config::kPipelineC * cube_ll(lg + 1);
  if (out.metrics.symbol_length > bound)
    throw std::logic_error("description sentence exceeds its length guard");
  return out;
}

}  // namespace

DescriptionResult describe_group(const FiniteGroup& g) {
  return describe_core(g, false, 1, nullptr, nullptr, nullptr, nullptr);
}

DescriptionResult describe_sigma_bounded(const FiniteGroup& g) {
  return describe_core(g, true, 1, nullptr, nullptr, nullptr, nullptr);
}

DescriptionResult describe_with_tuple(const FiniteGroup& g,
                                      const std::vector<int>& tuple) {
  int first = static_cast<int>(tuple.size()) + 1;
  PreprocessingChain chain;
  CompositionSeries series;
  std::vector<int> a_vars;
  DescriptionResult base =
      describe_core(g, false, first, &a_vars, nullptr, &chain, &series);
  if (g.order() == 1) {
    // Everything equals the identity; pin the tuple entries directly.
    std::vector<FormulaP> conj;
    for (std::size_t i = 0; i < tuple.size(); ++i)
      conj.push_back(mk_eq(Term::v(static_cast<int>(i) + 1), t_e()));
    conj.push_back(base.formula);
    base.formula = mk_and(std::move(conj));
    for (std::size_t i = 0; i < tuple.size(); ++i)
      base.tuple_vars.push_back(static_cast<int>(i) + 1);
    base.metrics = fo::length_report(base.formula);
    return base;
  }

  // The sentence is Exists T Exists A (matrix); extend the matrix with the
  // tuple words, keeping the prefix.
  std::vector<Term> a_terms;
  for (int av : a_vars) a_terms.push_back(Term::v(av));
  std::vector<std::pair<bool, int>> prefix;  // rebuilt below
  FormulaP matrix = base.formula;
  std::vector<int> prefix_vars;
  while (matrix->kind == Formula::Kind::Exists) {
    prefix_vars.push_back(matrix->qvar);
    matrix = matrix->children[0];
  }
  std::vector<FormulaP> conj{matrix};
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    Word w = chain.word_for(g, tuple[i]);
    conj.push_back(mk_eq(Term::v(static_cast<int>(i) + 1), word_term(w, a_terms)));
  }
  FormulaP body = mk_and(std::move(conj));
  for (auto it = prefix_vars.rbegin(); it != prefix_vars.rend(); ++it)
    body = mk_exists(*it, body);
  base.formula = body;
  for (std::size_t i = 0; i < tuple.size(); ++i)
    base.tuple_vars.push_back(static_cast<int>(i) + 1);
  base.metrics = fo::length_report(base.formula);
  (void)prefix;
  return base;
}

DescriptionResult describe_with_subgroup(const FiniteGroup& g, const Subgroup& u) {
  // Greedy least-index generators of the subgroup.
  std::vector<int> gens;
  ClosureResult c = closure(g, gens);
  while (c.subgroup.elements != u.elements) {
    bool found = false;
    for (int e : u.elements)
      if (!c.subgroup.contains(e)) {
        gens.push_back(e);
        found = true;
        break;
      }
    if (!found) throw std::invalid_argument("set is not a subgroup of the parent");
    c = closure(g, gens);
  }

  DescriptionResult base = describe_with_tuple(g, gens);
  int next = base.formula->max_var() + 1;
  int z = next++;
  FormulaP member;
  if (gens.empty()) {
    member = mk_eq(Term::v(z), t_e());
  } else {
    std::vector<Term> ys;
    for (int yv : base.tuple_vars) ys.push_back(Term::v(yv));
    member = builders::alpha(g.order(), Term::v(z), ys, next);
  }
  FormulaP both = mk_forall(
      z, mk_and({mk_implies(mk_rel("P", {Term::v(z)}), member),
                 mk_implies(member, mk_rel("P", {Term::v(z)}))}));
  FormulaP body = mk_and({base.formula, both});
  for (auto it = base.tuple_vars.rbegin(); it != base.tuple_vars.rend(); ++it)
    body = mk_exists(*it, body);
  DescriptionResult out;
  out.mode = "full";
  out.formula = body;
  out.metrics = fo::length_report(body);
  out.provenance = base.provenance;
  out.factors = base.factors;
  out.word_reports = base.word_reports;
  return out;
}

DescriptionResult describe_with_automorphism(const FiniteGroup& g,
                                             const std::vector<int>& aut) {
  if (static_cast<int>(aut.size()) != g.order())
    throw std::invalid_argument("automorphism table has wrong size");
  {
    std::vector<char> seen(g.order(), 0);
    for (int v : aut) {
      if (v < 0 || v >= g.order() || seen[v])
        throw std::invalid_argument("not an automorphism: not a bijection");
      seen[v] = 1;
    }
    for (int a = 0; a < g.order(); ++a)
      for (int b = 0; b < g.order(); ++b)
        if (aut[g.mul(a, b)] != g.mul(aut[a], aut[b]))
          throw std::invalid_argument("not an automorphism: not multiplicative");
  }
  std::vector<int> gens = small_generating_set(g);
  std::vector<int> tuple = gens;
  for (int e : gens) tuple.push_back(aut[e]);
  DescriptionResult base = describe_with_tuple(g, tuple);
  int next = base.formula->max_var() + 1;
  std::vector<FormulaP> conj{base.formula};
  int k = static_cast<int>(gens.size());
  for (int i = 0; i < k; ++i)
    conj.push_back(mk_eq(Term::f("aut", {Term::v(base.tuple_vars[i])}),
                         Term::v(base.tuple_vars[k + i])));
  int uvar = next++, vvar = next++;
  conj.push_back(mk_forall(
      uvar, mk_forall(vvar,
                      mk_eq(Term::f("aut", {t_mul(Term::v(uvar), Term::v(vvar))}),
                            t_mul(Term::f("aut", {Term::v(uvar)}),
                                  Term::f("aut", {Term::v(vvar)}))))));
  int u2 = next++, v2 = next++;
  conj.push_back(mk_forall(
      u2, mk_forall(v2, mk_implies(mk_eq(Term::f("aut", {Term::v(u2)}),
                                         Term::f("aut", {Term::v(v2)})),
                                   mk_eq(Term::v(u2), Term::v(v2))))));
  FormulaP body = mk_and(std::move(conj));
  for (auto it = base.tuple_vars.rbegin(); it != base.tuple_vars.rend(); ++it)
    body = mk_exists(*it, body);
  DescriptionResult out;
  out.mode = "full";
  out.formula = body;
  out.metrics = fo::length_report(body);
  out.provenance = base.provenance;
  out.factors = base.factors;
  out.word_reports = base.word_reports;
  return out;
}

DescriptionResult describe_via_presentation(const FiniteGroup& g,
                                            const PresentationSpec& pres) {
  DescriptionResult out;
  out.mode = "presentation";
  out.formula = builders::general_presentation_description_sentence(g, pres);
  out.metrics = fo::length_report(out.formula);
  out.provenance.push_back({"presentation", out.metrics.symbol_length});
  return out;
}

// --- table-free cyclic 2-power pipeline --------------------------------------

namespace {

// Minimal cube pair for a value over the last `window` chain indices of
// C_{2^k}; least (popcount sum, mask0, mask1). Chain index j holds 2^{k-j-1}.
std::pair<std::uint32_t, std::uint32_t> cyclic_pair(int k, int avail_bits,
                                                    long long value) {
  long long q = 1LL << k;
  value = ((value % q) + q) % q;
  if (value == 0) return {0, 0};
  int window = std::min(avail_bits, 12);
  int lo = avail_bits - window;  // lowest chain index in the window
  auto mask_value = [&](std::uint32_t m) {
    long long v = 0;
    for (int j = 0; j < window; ++j)
      if ((m >> j) & 1) v += 1LL << (k - (lo + j) - 1);
    return v % q;
  };
  for (int total = 1; total <= 2 * window; ++total)
    for (std::uint32_t m0 = 0; m0 < (1u << window); ++m0) {
      int p0 = std::popcount(m0);
      if (p0 > total) continue;
      for (std::uint32_t m1 = 0; m1 < (1u << window); ++m1) {
        if (p0 + std::popcount(m1) != total) continue;
        if (((mask_value(m1) - mask_value(m0)) % q + q) % q == value)
          return {m0 << lo, m1 << lo};
      }
    }
  throw std::logic_error("no cube pair for the cyclic value");
}

Word cyclic_word(int k, int avail_bits, long long value) {
  auto [m0, m1] = cyclic_pair(k, avail_bits, value);
  Word w;
  for (int j = 31; j >= 0; --j)
    if ((m0 >> j) & 1) w.push_back(-(j + 1));
  for (int j = 0; j < 32; ++j)
    if ((m1 >> j) & 1) w.push_back(j + 1);
  return free_reduce(std::move(w));
}

}  // namespace

DescriptionResult describe_cyclic_2power(int k) {
  if (k < 1 || k > 20) throw std::invalid_argument("k must be in 1..20");
  const long long q = 1LL << k;
  DescriptionResult out;
  out.mode = "full";

  // Variables: t_1..t_k (t_i stands for 2^{k-i}), then a_1..a_k.
  int next = 2 * k + 1;
  std::vector<Term> t_terms, a_terms;
  for (int i = 1; i <= k; ++i) t_terms.push_back(Term::v(i));
  for (int i = k + 1; i <= 2 * k; ++i) a_terms.push_back(Term::v(i));

  auto t_prefix = [&](int i) {
    return std::vector<Term>(t_terms.begin(), t_terms.begin() + i);
  };
  auto a_prefix = [&](int i) {
    return std::vector<Term>(a_terms.begin(), a_terms.begin() + i);
  };

  // psi: the chain SLP is all sources here (each level's generator is its
  // own preprocessing element), one witness block per level, plus the
  // generation equivalences.
  std::vector<FormulaP> psi_conj;
  for (int i = 0; i < k; ++i) {
    auto plan = std::make_shared<fo::SlpPlan>();
    for (int j = 0; j <= i; ++j)
      plan->steps.push_back({fo::SlpPlan::Step::Kind::Src, j + 1, 0});
    plan->checks.push_back({k + i + 1, i});
    fo::ShortcutTag tag;
    tag.kind = fo::ShortcutTag::Kind::SlpWitness;
    tag.op = "mul";
    tag.id_const = "e";
    tag.plan = std::move(plan);
    psi_conj.push_back(fo::with_tag(mk_eq(a_terms[i], t_terms[i]), tag));
  }
  for (int i = 1; i <= k; ++i) {
    int y = next++;
    FormulaP via_t = builders::alpha(q, Term::v(y), t_prefix(i), next);
    FormulaP via_a = builders::alpha(q, Term::v(y), a_prefix(i), next);
    psi_conj.push_back(mk_forall(
        y, mk_and({mk_implies(via_t, via_a), mk_implies(via_a, via_t)})));
  }
  FormulaP psi = mk_and(std::move(psi_conj));

  // chi: normality plus the relativized C2 factor description per level.
  std::vector<FormulaP> chi_conj;
  for (int i = 1; i <= k; ++i) {
    long long v = q;
    if (i >= 2) {
      int u = next++;
      Term conj = t_mul(t_mul(t_inv(t_terms[i - 1]), Term::v(u)), t_terms[i - 1]);
      FormulaP inside = builders::alpha(v, Term::v(u), t_prefix(i - 1), next);
      FormulaP image = builders::alpha(v, conj, t_prefix(i - 1), next);
      chi_conj.push_back(mk_forall(u, mk_implies(inside, image)));
    }
    FormulaP phi_i = builders::cyclic_generator_formula(2, 1, t_terms[i - 1], next);
    builders::Relativizer rel;
    if (i < k) {
      auto gens = t_prefix(i);
      rel.guard = [gens, v](const Term& t, int& nv) {
        return builders::alpha(v, t, gens, nv);
      };
    }
    if (i >= 2) {
      auto prev = t_prefix(i - 1);
      rel.eq_member = [prev, v](const Term& t, int& nv) {
        return builders::alpha(v, t, prev, nv);
      };
      rel.mod_gens = prev;
      rel.mod_v = v;
    }
    chi_conj.push_back(builders::relativize(phi_i, rel, next));
  }
  FormulaP chi = mk_and(std::move(chi_conj));

  // kappa: commutation of each new generator with the previous level,
  // recorded as single-letter words over the preprocessing set.
  std::vector<FormulaP> kappa_conj;
  for (int i = 2; i <= k; ++i)
    for (int j = 1; j < i; ++j) {
      Term lhs = t_mul(t_mul(t_inv(t_terms[i - 1]), t_terms[j - 1]), t_terms[i - 1]);
      kappa_conj.push_back(mk_eq(lhs, a_terms[j - 1]));
    }

  // rho: distinguishing words for each level's C2 extension.
  std::vector<FormulaP> rho_conj;
  for (int i = 2; i <= k; ++i) {
    long long n_order = 1LL << (i - 1);
    DistinguishingReport rep;
    rep.level = i;
    double budget = std::pow(static_cast<double>(n_order), 4.0);
    if (budget <= config::kExtensionEnumBudget) {
      FiniteGroup n = cyclic_group(static_cast<int>(n_order));
      FiniteGroup h = cyclic_group(2);
      std::vector<std::vector<int>> trivial_action(2);
      for (int x = 0; x < 2; ++x) {
        trivial_action[x].resize(n.order());
        for (int a = 0; a < n.order(); ++a) trivial_action[x][a] = a;
      }
      rep = distinguishing_words(n, h, {1}, trivial_action,
                                 cyclic_presentation(2), 2);
      rep.level = i;
    } else {
      rep.words = {Word{1, 1}};  // the relator s^2
      rep.method = "fallback";
      rep.d_bound = 1 * lambda_omega(n_order);
    }
    for (const Word& w : rep.words) {
      // Value of the word at the lift t_i = 2^{k-i}: exponent * 2^{k-i}.
      long long exponent = 0;
      for (int letter : w) exponent += letter > 0 ? 1 : -1;
      long long value = (exponent % q) * (1LL << (k - i));
      rep.values.push_back(static_cast<int>(((value % q) + q) % q));
      Word aw = cyclic_word(k, i - 1, value);
      rho_conj.push_back(
          mk_eq(word_term(w, {t_terms[i - 1]}), word_term(aw, a_prefix(i - 1))));
    }
    out.word_reports.push_back(std::move(rep));
  }

  std::vector<FormulaP> conj{psi, chi};
  out.provenance.push_back({"psi", fo::symbol_length(psi)});
  out.provenance.push_back({"chi", fo::symbol_length(chi)});
  if (!kappa_conj.empty()) {
    FormulaP kappa = mk_and(std::move(kappa_conj));
    out.provenance.push_back({"kappa", fo::symbol_length(kappa)});
    conj.push_back(kappa);
  }
  if (!rho_conj.empty()) {
    FormulaP rho = mk_and(std::move(rho_conj));
    out.provenance.push_back({"rho", fo::symbol_length(rho)});
    conj.push_back(rho);
  }
  FormulaP body = mk_and(std::move(conj));
  for (int i = 2 * k; i >= 1; --i) body = mk_exists(i, body);
  out.formula = body;
  out.metrics = fo::length_report(body);
  for (int i = 0; i < k; ++i) out.factors.push_back("C2");
  long long lg = k;
  if (out.metrics.symbol_length > config::kPipelineC * cube_ll(lg + 1))
    throw std::logic_error("cyclic description exceeds its length guard");
  return out;
}

// --- interpretations ---------------------------------------------------------

namespace {

FormulaP instantiate(const FormulaP& templ, const std::vector<int>& placeholders,
                     const std::vector<int>& actual, int& next_var) {
  if (placeholders.size() != actual.size())
    throw std::invalid_argument("placeholder arity mismatch");
  FormulaP fresh = fo::refresh_bound(templ, next_var);
  std::map<int, Term> map;
  for (std::size_t i = 0; i < placeholders.size(); ++i)
    map[placeholders[i]] = Term::v(actual[i]);
  return fo::subst(fresh, map);
}

struct Translator {
  const InterpretationScheme& s;
  int& next_var;
  std::map<int, std::vector<int>> blocks;  // target var -> source block

  std::vector<int> fresh_block() {
    std::vector<int> b;
    for (int i = 0; i < s.dim; ++i) b.push_back(next_var++);
    return b;
  }

  FormulaP domain_of(const std::vector<int>& block) {
    return instantiate(s.domain, s.domain_vars, block, next_var);
  }

  // Formula asserting out = value of the term, possibly via auxiliary
  // existential blocks appended to `aux`.
  FormulaP define_term(const Term& t, const std::vector<int>& out,
                       std::vector<int>& aux) {
    switch (t.kind) {
      case Term::Kind::Var: {
        auto it = blocks.find(t.var);
        if (it == blocks.end())
          throw std::invalid_argument("free variable without a block");
        std::vector<int> both = it->second;
        both.insert(both.end(), out.begin(), out.end());
        return instantiate(s.equiv, s.equiv_vars, both, next_var);
      }
      case Term::Kind::Const: {
        auto git = s.func_graphs.find(t.sym);
        if (git == s.func_graphs.end())
          throw std::invalid_argument("no graph for constant " + t.sym);
        return instantiate(git->second.formula, git->second.vars, out, next_var);
      }
      case Term::Kind::App: {
        auto git = s.func_graphs.find(t.sym);
        if (git == s.func_graphs.end())
          throw std::invalid_argument("no graph for function " + t.sym);
        std::vector<FormulaP> defs;
        std::vector<int> slots;
        for (const Term& a : t.args) {
          if (a.kind == Term::Kind::Var) {
            auto it = blocks.find(a.var);
            if (it == blocks.end())
              throw std::invalid_argument("free variable without a block");
            slots.insert(slots.end(), it->second.begin(), it->second.end());
          } else {
            std::vector<int> b = fresh_block();
            aux.insert(aux.end(), b.begin(), b.end());
            defs.push_back(define_term(a, b, aux));
            slots.insert(slots.end(), b.begin(), b.end());
          }
        }
        slots.insert(slots.end(), out.begin(), out.end());
        defs.push_back(
            instantiate(git->second.formula, git->second.vars, slots, next_var));
        return mk_and(std::move(defs));
      }
    }
    throw std::logic_error("unreachable");
  }

  FormulaP atom_with_blocks(const FormulaP& f) {
    std::vector<int> aux;
    std::vector<FormulaP> defs;
    std::vector<int> slots;
    for (const Term& t : f->terms) {
      if (t.kind == Term::Kind::Var) {
        auto it = blocks.find(t.var);
        if (it == blocks.end())
          throw std::invalid_argument("free variable without a block");
        slots.insert(slots.end(), it->second.begin(), it->second.end());
      } else {
        std::vector<int> b = fresh_block();
        aux.insert(aux.end(), b.begin(), b.end());
        defs.push_back(define_term(t, b, aux));
        slots.insert(slots.end(), b.begin(), b.end());
      }
    }
    if (f->kind == Formula::Kind::Eq) {
      defs.push_back(instantiate(s.equiv, s.equiv_vars, slots, next_var));
    } else {
      auto rit = s.rel_graphs.find(f->sym);
      if (rit == s.rel_graphs.end())
        throw std::invalid_argument("no graph for relation " + f->sym);
      defs.push_back(
          instantiate(rit->second.formula, rit->second.vars, slots, next_var));
    }
    FormulaP body = mk_and(std::move(defs));
    for (auto it = aux.rbegin(); it != aux.rend(); ++it)
      body = mk_exists(*it, body);
    return body;
  }

  FormulaP go(const FormulaP& f) {
    switch (f->kind) {
      case Formula::Kind::Eq:
      case Formula::Kind::Rel:
        return atom_with_blocks(f);
      case Formula::Kind::Not:
        return mk_not(go(f->children[0]));
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        std::vector<FormulaP> parts;
        for (const FormulaP& c : f->children) parts.push_back(go(c));
        return f->kind == Formula::Kind::And ? mk_and(std::move(parts))
                                             : mk_or(std::move(parts));
      }
      case Formula::Kind::Implies:
        return mk_implies(go(f->children[0]), go(f->children[1]));
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        std::vector<int> b = fresh_block();
        blocks[f->qvar] = b;
        FormulaP body = go(f->children[0]);
        blocks.erase(f->qvar);
        FormulaP dom = domain_of(b);
        if (f->kind == Formula::Kind::Forall) {
          body = mk_implies(std::move(dom), std::move(body));
          for (auto it = b.rbegin(); it != b.rend(); ++it)
            body = mk_forall(*it, body);
        } else {
          body = mk_and({std::move(dom), std::move(body)});
          for (auto it = b.rbegin(); it != b.rend(); ++it)
            body = mk_exists(*it, body);
        }
        return body;
      }
    }
    throw std::logic_error("unreachable");
  }
};

}  // namespace

InterpretationScheme identity_scheme(const fo::Signature& sig) {
  InterpretationScheme s;
  s.source_sig = &sig;
  s.target_sig = &sig;
  s.dim = 1;
  s.domain_vars = {1};
  s.domain = mk_eq(Term::v(1), Term::v(1));
  s.equiv_vars = {1, 2};
  s.equiv = mk_eq(Term::v(1), Term::v(2));
  for (const auto& [name, arity] : sig.functions) {
    InterpretationScheme::Graph gph;
    std::vector<Term> args;
    for (int i = 1; i <= arity; ++i) {
      gph.vars.push_back(i);
      args.push_back(Term::v(i));
    }
    gph.vars.push_back(arity + 1);
    gph.formula = mk_eq(Term::f(name, args), Term::v(arity + 1));
    s.func_graphs[name] = std::move(gph);
  }
  for (const std::string& name : sig.constants) {
    InterpretationScheme::Graph gph;
    gph.vars = {1};
    gph.formula = mk_eq(Term::c(name), Term::v(1));
    s.func_graphs[name] = std::move(gph);
  }
  for (const auto& [name, arity] : sig.relations) {
    InterpretationScheme::Graph gph;
    std::vector<Term> args;
    for (int i = 1; i <= arity; ++i) {
      gph.vars.push_back(i);
      args.push_back(Term::v(i));
    }
    gph.formula = mk_rel(name, args);
    s.rel_graphs[name] = std::move(gph);
  }
  return s;
}

fo::FormulaP interpretation_translate(const fo::FormulaP& phi,
                                      const InterpretationScheme& scheme,
                                      int& next_var) {
  Translator tr{scheme, next_var, {}};
  if (!phi->free_vars().empty())
    throw std::invalid_argument("interpretation translation expects a sentence");
  return tr.go(phi);
}

InterpretationScheme compose_schemes(const InterpretationScheme& outer,
                                     const InterpretationScheme& inner,
                                     int& next_var) {
  if (outer.source_sig != inner.target_sig)
    throw std::invalid_argument("schemes do not compose");
  InterpretationScheme out;
  out.source_sig = inner.source_sig;
  out.target_sig = outer.target_sig;
  out.dim = outer.dim * inner.dim;
  out.params = inner.params;  // parameters live at the innermost layer

  auto translate_template = [&](const FormulaP& templ,
                                const std::vector<int>& placeholders)
      -> InterpretationScheme::Graph {
    // Placeholder blocks become dim-sized blocks of fresh placeholders.
    Translator tr{inner, next_var, {}};
    InterpretationScheme::Graph g;
    for (int ph : placeholders) {
      std::vector<int> b = tr.fresh_block();
      tr.blocks[ph] = b;
      g.vars.insert(g.vars.end(), b.begin(), b.end());
    }
    // Outer placeholders are free in the template; translate the matrix with
    // those blocks fixed, adding each block's domain constraint.
    std::vector<FormulaP> parts;
    for (int ph : placeholders) parts.push_back(tr.domain_of(tr.blocks[ph]));
    parts.push_back(tr.go(templ));
    g.formula = parts.size() == 1 ? parts[0] : mk_and(std::move(parts));
    return g;
  };

  {
    auto g = translate_template(outer.domain, outer.domain_vars);
    out.domain = g.formula;
    out.domain_vars = g.vars;
  }
  {
    auto g = translate_template(outer.equiv, outer.equiv_vars);
    out.equiv = g.formula;
    out.equiv_vars = g.vars;
  }
  for (const auto& [name, gph] : outer.func_graphs)
    out.func_graphs[name] = translate_template(gph.formula, gph.vars);
  for (const auto& [name, gph] : outer.rel_graphs)
    out.rel_graphs[name] = translate_template(gph.formula, gph.vars);
  return out;
}

fo::FormulaP interpretation_describe(const InterpretationScheme& delta,
                                     const InterpretationScheme& gamma,
                                     const EtaTemplate& eta,
                                     const fo::FormulaP& phi_f) {
  // phi_f describes the Gamma-decoded structure; eta identifies the ambient
  // structure with the Delta(Gamma(-)) copy.
  int next_var = 1;
  for (int p : gamma.params) next_var = std::max(next_var, p + 1);
  next_var = std::max(next_var, phi_f->max_var() + 1);
  for (int v : eta.vars) next_var = std::max(next_var, v + 1);

  FormulaP translated = interpretation_translate(phi_f, gamma, next_var);

  InterpretationScheme comp = compose_schemes(delta, gamma, next_var);
  const int d = comp.dim;

  auto eta_at = [&](int u, const std::vector<int>& block) {
    std::vector<int> actual{u};
    actual.insert(actual.end(), block.begin(), block.end());
    return instantiate(eta.formula, eta.vars, actual, next_var);
  };
  auto block_vars = [&]() {
    std::vector<int> b;
    for (int i = 0; i < d; ++i) b.push_back(next_var++);
    return b;
  };
  auto quant_all = [&](const std::vector<int>& vars, FormulaP body, bool forall) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      body = forall ? mk_forall(*it, body) : mk_exists(*it, body);
    return body;
  };

  std::vector<FormulaP> conj{translated};
  {  // Totality: every element has a code in the decoded domain.
    int u = next_var++;
    std::vector<int> b = block_vars();
    FormulaP inner = mk_and(
        {instantiate(comp.domain, comp.domain_vars, b, next_var), eta_at(u, b)});
    conj.push_back(mk_forall(u, quant_all(b, std::move(inner), false)));
  }
  {  // Functionality up to the decoded equality.
    int u = next_var++;
    std::vector<int> b1 = block_vars(), b2 = block_vars();
    std::vector<int> both = b1;
    both.insert(both.end(), b2.begin(), b2.end());
    FormulaP inner = mk_implies(
        mk_and({eta_at(u, b1), eta_at(u, b2)}),
        instantiate(comp.equiv, comp.equiv_vars, both, next_var));
    conj.push_back(mk_forall(u, quant_all(b1, quant_all(b2, inner, true), true)));
  }
  {  // Injectivity.
    int u = next_var++, v = next_var++;
    std::vector<int> b1 = block_vars(), b2 = block_vars();
    std::vector<int> both = b1;
    both.insert(both.end(), b2.begin(), b2.end());
    FormulaP inner = mk_implies(
        mk_and({eta_at(u, b1), eta_at(v, b2),
                instantiate(comp.equiv, comp.equiv_vars, both, next_var)}),
        mk_eq(Term::v(u), Term::v(v)));
    conj.push_back(mk_forall(
        u, mk_forall(v, quant_all(b1, quant_all(b2, inner, true), true))));
  }
  {  // Surjectivity onto the decoded domain.
    std::vector<int> b = block_vars();
    int u = next_var++;
    FormulaP inner =
        mk_implies(instantiate(comp.domain, comp.domain_vars, b, next_var),
                   mk_exists(u, eta_at(u, b)));
    conj.push_back(quant_all(b, std::move(inner), true));
  }
  // Operations transported along eta.
  for (const auto& [name, gph] : comp.func_graphs) {
    int arity = static_cast<int>(gph.vars.size()) / d - 1;
    std::vector<int> us;
    for (int i = 0; i < arity; ++i) us.push_back(next_var++);
    int w = next_var++;
    std::vector<std::vector<int>> bs;
    for (int i = 0; i < arity + 1; ++i) bs.push_back(block_vars());
    std::vector<FormulaP> hyp;
    for (int i = 0; i < arity; ++i) hyp.push_back(eta_at(us[i], bs[i]));
    hyp.push_back(eta_at(w, bs[arity]));
    Term lhs = [&]() -> Term {
      if (arity == 0) return Term::c(name);
      std::vector<Term> args;
      for (int u : us) args.push_back(Term::v(u));
      return Term::f(name, args);
    }();
    hyp.push_back(mk_eq(lhs, Term::v(w)));
    std::vector<int> slots;
    for (const auto& b : bs) slots.insert(slots.end(), b.begin(), b.end());
    FormulaP inner = mk_implies(mk_and(std::move(hyp)),
                                instantiate(gph.formula, gph.vars, slots, next_var));
    for (auto it = bs.rbegin(); it != bs.rend(); ++it)
      inner = quant_all(*it, std::move(inner), true);
    for (auto it = us.rbegin(); it != us.rend(); ++it) inner = mk_forall(*it, inner);
    inner = mk_forall(w, inner);
    conj.push_back(std::move(inner));
  }

  FormulaP body = mk_and(std::move(conj));
  for (auto it = gamma.params.rbegin(); it != gamma.params.rend(); ++it)
    body = mk_exists(*it, body);
  return body;
}

}  // namespace fgdesc
