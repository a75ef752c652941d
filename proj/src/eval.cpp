#include "fgdesc/eval.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "fgdesc/numtheory.hpp"

namespace fgdesc::fo {

namespace {

bool has_quantifier(const Formula& f,
                    std::unordered_map<const Formula*, char>& cache) {
  auto it = cache.find(&f);
  if (it != cache.end()) return it->second;
  bool q = f.kind == Formula::Kind::Forall || f.kind == Formula::Kind::Exists;
  for (const FormulaP& c : f.children)
    if (q) break;
    else q = has_quantifier(*c, cache);
  cache[&f] = q;
  return q;
}

std::string set_key(const std::vector<int>& vals) {
  std::string s;
  for (int v : vals) {
    s += std::to_string(v);
    s += ',';
  }
  return s;
}

}  // namespace

Evaluator::Evaluator(const Structure& m, EvalOptions opt) : m_(m), opt_(opt) {}

bool Evaluator::evaluate(const FormulaP& f) {
  Assignment asg(f->max_var() + 1, kUnset);
  if (!f->free_vars().empty())
    throw std::invalid_argument("sentence expected, but free variables remain");
  return evaluate(f, asg);
}

bool Evaluator::evaluate(const FormulaP& f, Assignment& asg) {
  if (static_cast<int>(asg.size()) < f->max_var() + 1)
    asg.resize(f->max_var() + 1, kUnset);
  for (int v : f->free_vars())
    if (asg[v] == kUnset)
      throw std::invalid_argument("unbound variable x" + std::to_string(v));
  diag_ = EvalDiagnostics{};
  return eval(f, asg, opt_.mode != EvalOptions::Mode::Naive);
}

int Evaluator::eval_term(const Term& t, const Assignment& asg) const {
  switch (t.kind) {
    case Term::Kind::Var:
      if (t.var >= static_cast<int>(asg.size()) || asg[t.var] == kUnset)
        throw std::invalid_argument("unbound variable x" + std::to_string(t.var));
      return asg[t.var];
    case Term::Kind::Const:
      return m_.constant(t.sym);
    case Term::Kind::App: {
      std::vector<int> args;
      args.reserve(t.args.size());
      for (const Term& a : t.args) args.push_back(eval_term(a, asg));
      return m_.func(t.sym, args);
    }
  }
  throw std::logic_error("unreachable");
}

double Evaluator::naive_cost(const FormulaP& f) {
  auto it = cost_.find(f.get());
  if (it != cost_.end()) return it->second;
  double c = 1;
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Rel:
      c = 1 + static_cast<double>(f->terms.size());
      break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      c = 1 + static_cast<double>(m_.size()) * naive_cost(f->children[0]);
      break;
    default:
      for (const FormulaP& ch : f->children) c += naive_cost(ch);
  }
  cost_[f.get()] = c;
  return c;
}

bool Evaluator::eval(const FormulaP& f, Assignment& asg, bool tags) {
  bool memoable = opt_.memo && has_quantifier(*f, has_quant_) &&
                  f->free_vars().size() <= 12;
  MemoKey key;
  if (memoable) {
    key.node = f.get();
    key.tags = tags;
    key.vals.reserve(f->free_vars().size());
    for (int v : f->free_vars()) key.vals.push_back(asg[v]);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }

  bool result;
  if (tags && f->tag.present()) {
    result = oracle_answer(f, asg);
    if (opt_.mode == EvalOptions::Mode::Checked &&
        naive_cost(f) <= static_cast<double>(opt_.crosscheck_budget)) {
      bool naive = eval_core(f, asg, false);
      ++crosschecks_;
      if (naive != result) {
        std::ostringstream msg;
        msg << "shortcut/naive disagreement on tagged node (kind "
            << static_cast<int>(f->tag.kind) << ")";
        throw std::logic_error(msg.str());
      }
    }
  } else {
    result = eval_core(f, asg, tags);
  }

  if (memoable) memo_.emplace(std::move(key), result);
  return result;
}

bool Evaluator::eval_core(const FormulaP& f, Assignment& asg, bool tags) {
  switch (f->kind) {
    case Formula::Kind::Eq:
      return eval_term(f->terms[0], asg) == eval_term(f->terms[1], asg);
    case Formula::Kind::Rel: {
      std::vector<int> args;
      args.reserve(f->terms.size());
      for (const Term& t : f->terms) args.push_back(eval_term(t, asg));
      return m_.rel(f->sym, args);
    }
    case Formula::Kind::Not:
      return !eval(f->children[0], asg, tags);
    case Formula::Kind::And:
      for (const FormulaP& c : f->children)
        if (!eval(c, asg, tags)) return false;
      return true;
    case Formula::Kind::Or:
      for (const FormulaP& c : f->children)
        if (eval(c, asg, tags)) return true;
      return false;
    case Formula::Kind::Implies:
      return !eval(f->children[0], asg, tags) || eval(f->children[1], asg, tags);
    case Formula::Kind::Forall: {
      int saved = asg[f->qvar];
      for (int v = 0; v < m_.size(); ++v) {
        asg[f->qvar] = v;
        if (!eval(f->children[0], asg, tags)) {
          asg[f->qvar] = saved;
          return false;
        }
      }
      asg[f->qvar] = saved;
      return true;
    }
    case Formula::Kind::Exists: {
      if (tags) return exists_prefix_search(f, asg);
      int saved = asg[f->qvar];
      for (int v = 0; v < m_.size(); ++v) {
        asg[f->qvar] = v;
        if (eval(f->children[0], asg, tags)) {
          asg[f->qvar] = saved;
          return true;
        }
      }
      asg[f->qvar] = saved;
      return false;
    }
  }
  throw std::logic_error("unreachable");
}

// --- existential-prefix constraint search ---------------------------------
//
// For an existential chain over a conjunction, assign prefix variables one
// at a time, evaluating each conjunct as soon as its variables are fixed and
// letting straight-line witness plans derive later prefix variables from
// earlier ones. This is what makes model checking the assembled description
// sentences tractable.
bool Evaluator::exists_prefix_search(const FormulaP& f, Assignment& asg) {
  std::vector<int> prefix;
  FormulaP core = f;
  while (core->kind == Formula::Kind::Exists && !core->tag.present()) {
    prefix.push_back(core->qvar);
    core = core->children[0];
  }
  std::vector<FormulaP> conjuncts;
  {
    std::vector<FormulaP> stack{core};
    while (!stack.empty()) {
      FormulaP f2 = stack.back();
      stack.pop_back();
      if (f2->kind == Formula::Kind::And && !f2->tag.present())
        for (auto it = f2->children.rbegin(); it != f2->children.rend(); ++it)
          stack.push_back(*it);
      else
        conjuncts.push_back(std::move(f2));
    }
  }
  const int nconj = static_cast<int>(conjuncts.size());

  std::vector<char> in_prefix(asg.size(), 0);
  for (int v : prefix) in_prefix[v] = 1;

  // state[i] = 0 pending, 1 satisfied. Trails allow undo per depth.
  std::vector<char> state(nconj, 0);
  std::vector<int> satisfied_trail;
  std::vector<int> derived_trail;

  int satisfied_count = 0;

  auto ready = [&](const FormulaP& c) {
    for (int v : c->free_vars())
      if (asg[v] == kUnset) return false;
    return true;
  };

  // Returns false on contradiction. Records satisfied conjuncts and derived
  // variables on the trails.
  auto check_frontier = [&]() -> bool {
    bool progress = true;
    while (progress) {
      progress = false;
      for (int i = 0; i < nconj; ++i) {
        if (state[i]) continue;
        const FormulaP& c = conjuncts[i];
        if (c->tag.kind == ShortcutTag::Kind::SlpWitness) {
          // Derivable once all plan sources are assigned.
          bool inputs_ready = true;
          for (const auto& step : c->tag.plan->steps)
            if (step.kind == SlpPlan::Step::Kind::Src &&
                (step.a >= static_cast<int>(asg.size()) || asg[step.a] == kUnset))
              inputs_ready = false;
          if (!inputs_ready) continue;
          if (!oracle_slp(*c->tag.plan, asg, /*derive=*/true, &derived_trail)) {
            diag_.failing_conjunct =
                satisfied_count >= diag_.max_conjuncts_satisfied ? i
                                                                 : diag_.failing_conjunct;
            diag_.max_conjuncts_satisfied =
                std::max(diag_.max_conjuncts_satisfied, satisfied_count);
            return false;
          }
          state[i] = 1;
          satisfied_trail.push_back(i);
          ++satisfied_count;
          progress = true;
          continue;
        }
        if (!ready(c)) continue;
        if (!eval(c, asg, true)) {
          if (satisfied_count >= diag_.max_conjuncts_satisfied) {
            diag_.failing_conjunct = i;
            diag_.max_conjuncts_satisfied = satisfied_count;
          }
          return false;
        }
        state[i] = 1;
        satisfied_trail.push_back(i);
        ++satisfied_count;
        progress = true;
      }
    }
    return true;
  };

  std::function<bool(std::size_t)> dfs = [&](std::size_t d) -> bool {
    if (d == prefix.size()) {
      for (int i = 0; i < nconj; ++i)
        if (!state[i]) return false;  // unreachable if frontier checks ran
      return true;
    }
    int var = prefix[d];
    if (asg[var] != kUnset) return dfs(d + 1);  // derived by a witness plan
    for (int val = 0; val < m_.size(); ++val) {
      std::size_t sat_mark = satisfied_trail.size();
      std::size_t der_mark = derived_trail.size();
      int count_mark = satisfied_count;
      asg[var] = val;
      if (check_frontier() && dfs(d + 1)) {
        asg[var] = kUnset;
        // Undo so the caller sees an unchanged assignment.
        while (satisfied_trail.size() > sat_mark) {
          state[satisfied_trail.back()] = 0;
          satisfied_trail.pop_back();
        }
        while (derived_trail.size() > der_mark) {
          asg[derived_trail.back()] = kUnset;
          derived_trail.pop_back();
        }
        satisfied_count = count_mark;
        return true;
      }
      while (satisfied_trail.size() > sat_mark) {
        state[satisfied_trail.back()] = 0;
        satisfied_trail.pop_back();
      }
      while (derived_trail.size() > der_mark) {
        asg[derived_trail.back()] = kUnset;
        derived_trail.pop_back();
      }
      satisfied_count = count_mark;
      asg[var] = kUnset;
    }
    return false;
  };

  // Conjuncts with no prefix variables can be checked immediately.
  if (!check_frontier()) {
    for (int i : satisfied_trail) state[i] = 0;
    for (int v : derived_trail) asg[v] = kUnset;
    return false;
  }
  bool res = dfs(0);
  for (std::size_t i = 0; i < satisfied_trail.size(); ++i) state[satisfied_trail[i]] = 0;
  for (int v : derived_trail) asg[v] = kUnset;
  return res;
}

// --- shortcut oracles ------------------------------------------------------

bool Evaluator::oracle_answer(const FormulaP& f, Assignment& asg) {
  switch (f->tag.kind) {
    case ShortcutTag::Kind::Generation:
      // Below the size bound the SLP-shaped generation formula is not plain
      // closure membership; answer such instances naively.
      if ((1LL << paper_log(f->tag.v)) < m_.size() || !f->tag.mod_gens.empty())
        return eval_core(f, asg, true);
      return oracle_generation(f->tag, asg);
    case ShortcutTag::Kind::Power:
      return oracle_power(f->tag, asg);
    case ShortcutTag::Kind::PowerUpTo:
      return oracle_power_up_to(f->tag, asg);
    case ShortcutTag::Kind::SlpWitness:
      return oracle_slp(*f->tag.plan, asg, /*derive=*/false, nullptr);
    case ShortcutTag::Kind::None:
      break;
  }
  return eval_core(f, asg, true);
}

const std::vector<char>& Evaluator::product_closure(const std::string& op,
                                                    std::vector<int> seeds,
                                                    int levels) {
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  std::string key = op + '|' + std::to_string(levels) + '|' + set_key(seeds);
  auto it = closure_cache_.find(key);
  if (it != closure_cache_.end()) return it->second;

  std::vector<char> in(m_.size(), 0);
  std::vector<int> members;
  for (int s : seeds)
    if (!in[s]) {
      in[s] = 1;
      members.push_back(s);
    }
  for (int round = 0; round < levels; ++round) {
    std::vector<int> next;
    for (int a : members)
      for (int b : members) {
        int c = m_.func(op, {a, b});
        if (!in[c]) {
          in[c] = 1;
          next.push_back(c);
        }
      }
    if (next.empty()) break;
    members.insert(members.end(), next.begin(), next.end());
  }
  return closure_cache_.emplace(std::move(key), std::move(in)).first->second;
}

bool Evaluator::oracle_generation(const ShortcutTag& tag, const Assignment& asg) {
  // delta_p membership: products of the x's of length <= 2^p, identity
  // included; levels of S <- S*S reach exactly that set.
  int g = eval_term(tag.terms[0], asg);
  std::vector<int> seeds{m_.constant(tag.id_const)};
  for (std::size_t i = 1; i < tag.terms.size(); ++i)
    seeds.push_back(eval_term(tag.terms[i], asg));
  int levels = paper_log(tag.v);
  if (!tag.mod_gens.empty())
    throw std::logic_error("generation oracle does not support modular equality");
  return product_closure(tag.op, std::move(seeds), levels)[g];
}

bool Evaluator::oracle_power(const ShortcutTag& tag, const Assignment& asg) {
  int g = eval_term(tag.terms[0], asg);
  int x = eval_term(tag.terms[1], asg);
  long long n = tag.n;
  if (tag.mod_gens.empty()) {
    // Mirror the squaring chain: y_1 = x; y <- (y*y)*x^{bit}.
    int acc = x;
    int bits = paper_log(n + 1);  // digit count of n
    for (int i = bits - 2; i >= 0; --i) {
      acc = m_.func(tag.op, {acc, acc});
      if ((n >> i) & 1) acc = m_.func(tag.op, {acc, x});
    }
    return acc == g;
  }
  // Modular variant: each chain equation holds up to a left factor from the
  // closure N of mod_gens; track the reachable set.
  std::vector<int> nseeds{m_.constant(tag.id_const)};
  for (const Term& t : tag.mod_gens) nseeds.push_back(eval_term(t, asg));
  const std::vector<char>& nset = product_closure(tag.op, nseeds, paper_log(tag.v));
  std::vector<char> w(m_.size(), 0);
  for (int a = 0; a < m_.size(); ++a)
    if (nset[a]) w[m_.func(tag.op, {a, x})] = 1;  // y_1 in N*x
  int bits = paper_log(n + 1);
  for (int i = bits - 2; i >= 0; --i) {
    std::vector<char> next(m_.size(), 0);
    for (int y = 0; y < m_.size(); ++y) {
      if (!w[y]) continue;
      int sq = m_.func(tag.op, {y, y});
      if ((n >> i) & 1) sq = m_.func(tag.op, {sq, x});
      for (int a = 0; a < m_.size(); ++a)
        if (nset[a]) next[m_.func(tag.op, {a, sq})] = 1;
    }
    w = std::move(next);
  }
  // Final atom y_k = g relativized: y_k * g^-1 in N.
  for (int y = 0; y < m_.size(); ++y)
    if (w[y] && nset[m_.func(tag.op, {y, m_.func("inv", {g})})]) return true;
  return false;
}

bool Evaluator::oracle_power_up_to(const ShortcutTag& tag, const Assignment& asg) {
  int g = eval_term(tag.terms[0], asg);
  int x = eval_term(tag.terms[1], asg);
  int k = paper_log(tag.n);  // steps in the chain
  if (tag.mod_gens.empty()) {
    std::vector<char> w(m_.size(), 0);
    w[m_.constant(tag.id_const)] = 1;
    for (int i = 0; i < k; ++i) {
      std::vector<char> next(m_.size(), 0);
      bool same = true;
      for (int y = 0; y < m_.size(); ++y) {
        if (!w[y]) continue;
        int sq = m_.func(tag.op, {y, y});
        next[sq] = 1;
        next[m_.func(tag.op, {sq, x})] = 1;
      }
      for (int y = 0; y < m_.size(); ++y)
        if (w[y] != next[y]) same = false;
      w = std::move(next);
      if (same) break;
    }
    return w[g];
  }
  std::vector<int> nseeds{m_.constant(tag.id_const)};
  for (const Term& t : tag.mod_gens) nseeds.push_back(eval_term(t, asg));
  const std::vector<char>& nset = product_closure(tag.op, nseeds, paper_log(tag.v));
  std::vector<char> w(m_.size(), 0);
  for (int a = 0; a < m_.size(); ++a)
    if (nset[a]) w[a] = 1;  // y_0 ~ identity
  for (int i = 0; i < k; ++i) {
    std::vector<char> next(m_.size(), 0);
    for (int y = 0; y < m_.size(); ++y) {
      if (!w[y]) continue;
      int sq = m_.func(tag.op, {y, y});
      int sqx = m_.func(tag.op, {sq, x});
      for (int a = 0; a < m_.size(); ++a)
        if (nset[a]) {
          next[m_.func(tag.op, {a, sq})] = 1;
          next[m_.func(tag.op, {a, sqx})] = 1;
        }
    }
    w = std::move(next);
  }
  for (int y = 0; y < m_.size(); ++y)
    if (w[y] && nset[m_.func(tag.op, {y, m_.func("inv", {g})})]) return true;
  return false;
}

bool Evaluator::oracle_slp(const SlpPlan& plan, Assignment& asg, bool derive,
                           std::vector<int>* derived) {
  std::vector<int> values(plan.steps.size());
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& s = plan.steps[i];
    switch (s.kind) {
      case SlpPlan::Step::Kind::Src:
        if (s.a >= static_cast<int>(asg.size()) || asg[s.a] == kUnset)
          throw std::invalid_argument("witness plan source unbound");
        values[i] = asg[s.a];
        break;
      case SlpPlan::Step::Kind::Inv:
        values[i] = m_.func("inv", {values[s.a]});
        break;
      case SlpPlan::Step::Kind::Mul:
        values[i] = m_.func("mul", {values[s.a], values[s.b]});
        break;
    }
  }
  for (const auto& [var, idx] : plan.checks) {
    if (var < static_cast<int>(asg.size()) && asg[var] != kUnset) {
      if (asg[var] != values[idx]) return false;
    } else if (derive) {
      if (var >= static_cast<int>(asg.size())) asg.resize(var + 1, kUnset);
      asg[var] = values[idx];
      if (derived) derived->push_back(var);
    } else {
      throw std::invalid_argument("witness plan check variable unbound");
    }
  }
  return true;
}

}  // namespace fgdesc::fo
