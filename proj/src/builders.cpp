#include "fgdesc/builders.hpp"

#include <algorithm>
#include <stdexcept>

#include "fgdesc/config.hpp"
#include "fgdesc/metrics.hpp"
#include "fgdesc/numtheory.hpp"
#include "fgdesc/slp.hpp"

namespace fgdesc::builders {

using fo::Formula;
using fo::mk_and;
using fo::mk_eq;
using fo::mk_exists;
using fo::mk_forall;
using fo::mk_implies;
using fo::mk_not;
using fo::mk_or;
using fo::ShortcutTag;
using fo::with_tag;

Term t_mul(Term a, Term b) { return Term::f("mul", {std::move(a), std::move(b)}); }
Term t_inv(Term a) { return Term::f("inv", {std::move(a)}); }
Term t_e() { return Term::c("e"); }

Term word_term(const Word& w, const std::vector<Term>& gens) {
  if (w.empty()) return t_e();
  Term acc = w[0] > 0 ? gens[w[0] - 1] : t_inv(gens[-w[0] - 1]);
  for (std::size_t i = 1; i < w.size(); ++i) {
    Term nxt = w[i] > 0 ? gens[w[i] - 1] : t_inv(gens[-w[i] - 1]);
    acc = t_mul(std::move(acc), std::move(nxt));
  }
  return acc;
}

namespace {

void check_length(const FormulaP& f, long long bound, const char* what) {
  long long len = fo::symbol_length(f);
  if (len > bound)
    throw std::logic_error(std::string(what) + " exceeds its length guard: " +
                           std::to_string(len) + " > " + std::to_string(bound));
}

Term t_op(const std::string& op, Term a, Term b) {
  return Term::f(op, {std::move(a), std::move(b)});
}

}  // namespace

FormulaP theta(long long n, const Term& g, const Term& x, int& next_var,
               const std::string& op, const std::string& id) {
  if (n < 1) throw std::invalid_argument("theta requires n >= 1");
  ShortcutTag tag;
  tag.kind = ShortcutTag::Kind::Power;
  tag.op = op;
  tag.id_const = id;
  tag.n = n;
  tag.terms = {g, x};

  FormulaP body;
  if (n == 1) {
    body = mk_eq(g, x);
  } else {
    int bits = paper_log(n + 1);  // binary digit count
    std::vector<int> ys;
    for (int i = 0; i < bits; ++i) ys.push_back(next_var++);
    std::vector<FormulaP> conj;
    conj.push_back(mk_eq(Term::v(ys[0]), x));
    conj.push_back(mk_eq(Term::v(ys[bits - 1]), g));
    for (int i = 1; i < bits; ++i) {
      Term rhs = t_op(op, Term::v(ys[i - 1]), Term::v(ys[i - 1]));
      if ((n >> (bits - 1 - i)) & 1) rhs = t_op(op, std::move(rhs), x);
      conj.push_back(mk_eq(Term::v(ys[i]), std::move(rhs)));
    }
    body = mk_and(std::move(conj));
    for (int i = bits - 1; i >= 0; --i) body = mk_exists(ys[i], body);
  }
  FormulaP out = with_tag(body, tag);
  check_length(out, config::kThetaC * (paper_log(n) + 1), "theta");
  return out;
}

FormulaP chi(long long n, const Term& g, const Term& x, int& next_var,
             const std::string& op, const std::string& id) {
  if (n < 1) throw std::invalid_argument("chi requires n >= 1");
  ShortcutTag tag;
  tag.kind = ShortcutTag::Kind::PowerUpTo;
  tag.op = op;
  tag.id_const = id;
  tag.n = n;
  tag.terms = {g, x};

  int k = paper_log(n);
  std::vector<int> ys;
  for (int i = 0; i <= k; ++i) ys.push_back(next_var++);
  std::vector<FormulaP> conj;
  conj.push_back(mk_eq(Term::v(ys[0]), Term::c(id)));
  conj.push_back(mk_eq(Term::v(ys[k]), g));
  for (int i = 0; i < k; ++i) {
    Term sq = t_op(op, Term::v(ys[i]), Term::v(ys[i]));
    conj.push_back(mk_or({mk_eq(Term::v(ys[i + 1]), t_op(op, sq, x)),
                          mk_eq(Term::v(ys[i + 1]), sq)}));
  }
  FormulaP body = mk_and(std::move(conj));
  for (int i = k; i >= 0; --i) body = mk_exists(ys[i], body);
  FormulaP out = with_tag(body, tag);
  check_length(out, config::kChiC * (paper_log(n) + 1), "chi");
  return out;
}

FormulaP alpha(long long v, const Term& g, const std::vector<Term>& xs,
               int& next_var) {
  if (v < 1 || xs.empty())
    throw std::invalid_argument("alpha requires v >= 1 and k >= 1");
  ShortcutTag tag;
  tag.kind = ShortcutTag::Kind::Generation;
  tag.op = "mul";
  tag.id_const = "e";
  tag.k = static_cast<int>(xs.size());
  tag.v = v;
  tag.terms.push_back(g);
  for (const Term& x : xs) tag.terms.push_back(x);

  int p = paper_log(v);
  // delta_0(t): t = 1 or t = x_j for some j.
  auto delta0 = [&](const Term& t) {
    std::vector<FormulaP> ds;
    ds.push_back(mk_eq(t, t_e()));
    for (const Term& x : xs) ds.push_back(mk_eq(t, x));
    return mk_or(std::move(ds));
  };
  // delta_i(t) = exists u,v [t = u v and forall w ((w = u or w = v) ->
  // delta_{i-1}(w))]; the shared-w trick keeps a single recursive copy.
  FormulaP cur;
  Term cur_target = g;
  if (p == 0) {
    cur = delta0(g);
  } else {
    // Build inside-out: deepest level first with a fresh target variable per
    // level, then wrap.
    std::vector<int> us, vs, ws;
    for (int i = 0; i < p; ++i) {
      us.push_back(next_var++);
      vs.push_back(next_var++);
      ws.push_back(next_var++);
    }
    // Level 1 target is w of level 2 ... level p target is g.
    FormulaP inner = delta0(Term::v(ws[0]));
    for (int i = 0; i < p; ++i) {
      Term target = i + 1 < p ? Term::v(ws[i + 1]) : g;
      FormulaP quantified = mk_forall(
          ws[i], mk_implies(mk_or({mk_eq(Term::v(ws[i]), Term::v(us[i])),
                                   mk_eq(Term::v(ws[i]), Term::v(vs[i]))}),
                            inner));
      FormulaP level =
          mk_and({mk_eq(target, t_mul(Term::v(us[i]), Term::v(vs[i]))),
                  std::move(quantified)});
      inner = mk_exists(us[i], mk_exists(vs[i], std::move(level)));
    }
    cur = inner;
  }
  FormulaP out = with_tag(cur, tag);
  check_length(out,
               config::kAlphaC * (static_cast<long long>(xs.size()) + paper_log(v) + 1),
               "alpha");
  return out;
}

FormulaP beta(long long v, const Term& g, const std::vector<Term>& xs,
              int& next_var) {
  if (v < 1 || xs.empty())
    throw std::invalid_argument("beta requires v >= 1 and k >= 1");
  ShortcutTag tag;
  tag.kind = ShortcutTag::Kind::Generation;
  tag.op = "mul";
  tag.id_const = "e";
  tag.k = static_cast<int>(xs.size());
  tag.v = v;
  tag.terms.push_back(g);
  for (const Term& x : xs) tag.terms.push_back(x);

  int s = paper_log(v);
  std::vector<int> zs, ys;
  for (int i = 0; i < s + 1; ++i) zs.push_back(next_var++);  // z_1..z_{s+1}
  for (int i = 0; i <= s; ++i) ys.push_back(next_var++);     // y_0..y_s

  std::vector<FormulaP> conj;
  conj.push_back(mk_eq(g, Term::v(zs[s])));
  conj.push_back(mk_eq(Term::v(ys[s]), t_e()));
  for (int i = 0; i < s; ++i) {
    std::vector<FormulaP> opts;
    for (const Term& x : xs) opts.push_back(mk_eq(Term::v(ys[i]), x));
    conj.push_back(mk_or(std::move(opts)));
  }
  for (int t = 0; t <= s; ++t) {
    std::vector<int> ps, qs;
    for (int j = 0; j <= t; ++j) {
      ps.push_back(next_var++);
      qs.push_back(next_var++);
    }
    std::vector<FormulaP> block;
    block.push_back(mk_eq(Term::v(ps[0]), t_e()));
    block.push_back(mk_eq(Term::v(qs[0]), t_e()));
    block.push_back(mk_eq(Term::v(zs[t]),
                          t_mul(t_mul(t_inv(Term::v(ps[t])), Term::v(qs[t])),
                                Term::v(ys[t]))));
    for (int j = 0; j < t; ++j) {
      block.push_back(mk_or(
          {mk_eq(Term::v(ps[j + 1]), t_mul(Term::v(ps[j]), Term::v(zs[j]))),
           mk_eq(Term::v(ps[j + 1]), Term::v(ps[j]))}));
      block.push_back(mk_or(
          {mk_eq(Term::v(qs[j + 1]), t_mul(Term::v(qs[j]), Term::v(zs[j]))),
           mk_eq(Term::v(qs[j + 1]), Term::v(qs[j]))}));
    }
    FormulaP b = mk_and(std::move(block));
    for (int j = t; j >= 0; --j) b = mk_exists(qs[j], mk_exists(ps[j], b));
    conj.push_back(std::move(b));
  }
  FormulaP body = mk_and(std::move(conj));
  for (int i = s; i >= 0; --i) body = mk_exists(ys[i], body);
  for (int i = s; i >= 0; --i) body = mk_exists(zs[i], body);
  FormulaP out = with_tag(body, tag);
  long long k = static_cast<long long>(xs.size());
  long long lg = paper_log(v);
  check_length(out, config::kBetaC * (k * lg + lg * lg + k + 1), "beta");
  return out;
}

FormulaP cyclic_sentence(long long p, int k) {
  if (!is_prime(p)) throw std::invalid_argument("cyclic_sentence requires a prime p");
  if (k < 1) throw std::invalid_argument("cyclic_sentence requires k >= 1");
  long long q = 1;
  for (int i = 0; i < k; ++i) q *= p;
  int next = 2;
  Term h = Term::v(1);
  FormulaP gen = cyclic_generator_formula(p, k, h, next);
  FormulaP out = mk_exists(1, gen);
  check_length(out, config::kCyclicC * (paper_log(q) + 1), "cyclic_sentence");
  return out;
}

FormulaP cyclic_generator_formula(long long p, int k, const Term& x, int& next_var) {
  if (!is_prime(p)) throw std::invalid_argument("cyclic formula requires a prime p");
  long long q = 1;
  for (int i = 0; i < k; ++i) q *= p;
  std::vector<FormulaP> conj;
  conj.push_back(theta(q, t_e(), x, next_var));  // x^{p^k} = 1
  long long qq = q / p;                          // p^{k-1}; k=1 gives theta_1
  conj.push_back(mk_not(theta(qq, t_e(), x, next_var)));
  int gvar = next_var++;
  conj.push_back(mk_forall(gvar, chi(q, Term::v(gvar), x, next_var)));
  return mk_and(std::move(conj));
}

namespace {

FormulaP ring_axioms(int& next) {
  using fo::Term;
  auto add = [](Term a, Term b) { return Term::f("add", {std::move(a), std::move(b)}); };
  auto mul = [](Term a, Term b) { return Term::f("mul", {std::move(a), std::move(b)}); };
  Term zero = Term::c("0"), one = Term::c("1");
  int x = next++, y = next++, z = next++, w = next++;
  Term tx = Term::v(x), ty = Term::v(y), tz = Term::v(z), tw = Term::v(w);
  std::vector<FormulaP> ax;
  ax.push_back(mk_forall(x, mk_forall(y, mk_forall(z,
      mk_eq(add(add(tx, ty), tz), add(tx, add(ty, tz)))))));
  ax.push_back(mk_forall(x, mk_forall(y, mk_eq(add(tx, ty), add(ty, tx)))));
  ax.push_back(mk_forall(x, mk_eq(add(tx, zero), tx)));
  ax.push_back(mk_forall(x, mk_exists(w, mk_eq(add(tx, tw), zero))));
  ax.push_back(mk_forall(x, mk_forall(y, mk_forall(z,
      mk_eq(mul(mul(tx, ty), tz), mul(tx, mul(ty, tz)))))));
  ax.push_back(mk_forall(x, mk_forall(y, mk_eq(mul(tx, ty), mul(ty, tx)))));
  ax.push_back(mk_forall(x, mk_eq(mul(tx, one), tx)));
  ax.push_back(mk_forall(x, mk_forall(y, mk_forall(z,
      mk_eq(mul(tx, add(ty, tz)), add(mul(tx, ty), mul(tx, tz)))))));
  ax.push_back(mk_not(mk_eq(zero, one)));
  ax.push_back(mk_forall(x,
      mk_implies(mk_not(mk_eq(tx, zero)), mk_exists(w, mk_eq(mul(tx, tw), one)))));
  return mk_and(std::move(ax));
}

}  // namespace

FormulaP field_sentence(long long q) {
  long long p;
  int n;
  if (!is_prime_power(q, &p, &n))
    throw std::invalid_argument("field_sentence requires a prime power");
  int next = 1;
  std::vector<FormulaP> conj;
  // Frobenius-degree clauses first, so the prenex leads existentially.
  if (n > 1) {
    for (auto [ell, e] : factorize(n)) {
      (void)e;
      long long sub = 1;
      for (int i = 0; i < n / ell; ++i) sub *= p;
      int xv = next++;
      conj.push_back(mk_exists(
          xv, mk_not(theta(sub, Term::v(xv), Term::v(xv), next))));
    }
  }
  {
    int xv = next++;
    conj.push_back(mk_forall(xv, theta(q, Term::v(xv), Term::v(xv), next)));
  }
  conj.push_back(theta(p, Term::c("0"), Term::c("1"), next, "add", "0"));
  conj.push_back(ring_axioms(next));
  FormulaP out = mk_and(std::move(conj));
  check_length(out, config::kFieldC * (paper_log(q) + 1), "field_sentence");
  return out;
}

FormulaP difference_field_sentence(long long q, int frobenius_power) {
  long long p;
  int n;
  if (!is_prime_power(q, &p, &n))
    throw std::invalid_argument("difference_field_sentence requires a prime power");
  if (frobenius_power < 0 || frobenius_power >= n)
    throw std::invalid_argument("frobenius power out of range");
  FormulaP base = field_sentence(q);
  int next = base->max_var() + 1;
  long long pk = 1;
  for (int i = 0; i < frobenius_power; ++i) pk *= p;
  int xv = next++;
  FormulaP sigma_clause = mk_forall(
      xv, theta(pk, Term::f("sigma", {Term::v(xv)}), Term::v(xv), next));
  FormulaP out = mk_and({std::move(sigma_clause), std::move(base)});
  check_length(out, config::kFieldC * (paper_log(q) + 1), "difference_field_sentence");
  return out;
}

FormulaP field_constant_formula(const FiniteField& f, int c, const Term& y,
                                int& next_var) {
  FormulaP base = field_sentence(f.q());
  next_var = std::max(next_var, base->max_var() + 1);
  std::vector<int> coeffs = f.minimal_polynomial(c);  // low-to-high, monic
  int d = static_cast<int>(coeffs.size()) - 1;
  // Coefficient constants a*1 via additive chains; zero needs no witness.
  std::vector<FormulaP> conj;
  std::vector<Term> coeff_terms(d);
  for (int i = 0; i < d; ++i) {
    if (coeffs[i] == 0) {
      coeff_terms[i] = Term::c("0");
    } else if (coeffs[i] == 1) {
      coeff_terms[i] = Term::c("1");
    } else {
      int cv = next_var++;
      coeff_terms[i] = Term::v(cv);
      conj.push_back(theta(coeffs[i], Term::v(cv), Term::c("1"), next_var, "add", "0"));
    }
  }
  // Horner chain: h_1 = y + a_{d-1}; h_{j+1} = h_j * y + a_{d-1-j}; h_d = 0.
  Term acc = y;
  std::vector<int> hs;
  for (int j = d - 1; j >= 0; --j) {
    int hv = next_var++;
    hs.push_back(hv);
    conj.push_back(mk_eq(Term::v(hv), Term::f("add", {acc, coeff_terms[j]})));
    acc = j > 0 ? Term::f("mul", {Term::v(hv), y}) : Term::v(hv);
  }
  conj.push_back(mk_eq(acc, Term::c("0")));
  FormulaP vanish = mk_and(std::move(conj));
  for (auto it = hs.rbegin(); it != hs.rend(); ++it) vanish = mk_exists(*it, vanish);
  // Coefficient witnesses quantified outermost.
  std::vector<int> cws;
  for (const Term& t : coeff_terms)
    if (t.kind == Term::Kind::Var) cws.push_back(t.var);
  for (auto it = cws.rbegin(); it != cws.rend(); ++it) vanish = mk_exists(*it, vanish);
  FormulaP out = mk_and({std::move(vanish), std::move(base)});
  check_length(out, config::kFieldC * (paper_log(f.q()) + 1), "field_constant_formula");
  return out;
}

FormulaP presentation_description(const FiniteGroup& g, const PresentationSpec& pres,
                                  long long v, const std::vector<Term>& xs,
                                  int& next_var, GenerationRoute route) {
  if (xs.size() != pres.generators.size())
    throw std::invalid_argument("generator-term count mismatch");
  if (!find_generator_images(g, pres))
    throw std::invalid_argument("presentation does not present the group");
  if (route == GenerationRoute::Beta &&
      static_cast<int>(pres.generators.size()) > paper_log(g.order()))
    throw std::invalid_argument("beta route requires k <= log|G|");
  std::vector<FormulaP> conj;
  conj.push_back(mk_not(mk_eq(xs[0], t_e())));
  for (const Word& r : pres.relators)
    conj.push_back(mk_eq(word_term(r, xs), t_e()));
  int yv = next_var++;
  FormulaP gen = route == GenerationRoute::Alpha
                     ? alpha(v, Term::v(yv), xs, next_var)
                     : beta(v, Term::v(yv), xs, next_var);
  conj.push_back(mk_forall(yv, std::move(gen)));
  return mk_and(std::move(conj));
}

FormulaP presentation_description_sentence(const FiniteGroup& g,
                                           const PresentationSpec& pres, long long v,
                                           GenerationRoute route) {
  int k = static_cast<int>(pres.generators.size());
  std::vector<Term> xs;
  for (int i = 1; i <= k; ++i) xs.push_back(Term::v(i));
  int next = k + 1;
  FormulaP body = presentation_description(g, pres, v, xs, next, route);
  for (int i = k; i >= 1; --i) body = mk_exists(i, body);
  return body;
}

FormulaP char_simple_sentence(const FiniteGroup& s, int k,
                              const PresentationCatalog* pres_catalog) {
  if (!is_simple(s)) throw std::invalid_argument("char_simple requires a simple group");
  if (k < 1) throw std::invalid_argument("char_simple requires k >= 1");
  double size = 1;
  for (int i = 0; i < k; ++i) size *= s.order();
  if (size > 1e18) throw std::invalid_argument("direct power too large");
  long long v = 1;
  for (int i = 0; i < k; ++i) v *= s.order();

  if (is_abelian(s)) {
    long long p = s.order();
    std::vector<int> xvars;
    for (int i = 1; i <= k; ++i) xvars.push_back(i);
    int next = k + 1;
    std::vector<Term> xs;
    for (int xv : xvars) xs.push_back(Term::v(xv));
    std::vector<FormulaP> conj;
    for (const Term& x : xs) {
      conj.push_back(theta(p, t_e(), x, next));
      conj.push_back(mk_not(mk_eq(x, t_e())));
    }
    // Pairwise commuting via two bounded quantifiers.
    int z1 = next++, z2 = next++;
    std::vector<FormulaP> in1, in2;
    for (const Term& x : xs) in1.push_back(mk_eq(Term::v(z1), x));
    for (const Term& x : xs) in2.push_back(mk_eq(Term::v(z2), x));
    conj.push_back(mk_forall(
        z1, mk_forall(z2, mk_implies(mk_and({mk_or(std::move(in1)),
                                             mk_or(std::move(in2))}),
                                     mk_eq(t_mul(Term::v(z1), Term::v(z2)),
                                           t_mul(Term::v(z2), Term::v(z1)))))));
    int yv = next++;
    conj.push_back(mk_forall(yv, alpha(v, Term::v(yv), xs, next)));
    FormulaP body = mk_and(std::move(conj));
    for (int i = k; i >= 1; --i) body = mk_exists(i, body);
    return body;
  }

  // Nonabelian: generators x_r, y_r per copy, centralizer-quotient checks.
  const PresentationSpec* pres = nullptr;
  if (pres_catalog)
    for (const PresentationSpec* cand : pres_catalog->by_order(s.order()))
      if (find_generator_images(s, *cand)) {
        pres = cand;
        break;
      }
  if (!pres) throw std::invalid_argument("no catalog presentation for the simple factor");

  std::vector<int> xvars, yvars;
  for (int i = 1; i <= k; ++i) xvars.push_back(i);
  for (int i = k + 1; i <= 2 * k; ++i) yvars.push_back(i);
  int next = 2 * k + 1;
  std::vector<Term> all;
  for (int xv : xvars) all.push_back(Term::v(xv));
  for (int yv : yvars) all.push_back(Term::v(yv));

  std::vector<FormulaP> conj;
  int uv = next++;
  conj.push_back(mk_forall(uv, alpha(v, Term::v(uv), all, next)));
  auto comm_term = [&](Term a, Term b) {
    return t_mul(t_mul(t_inv(a), t_inv(b)), t_mul(a, b));
  };
  for (int r = 0; r < k; ++r)
    conj.push_back(mk_not(mk_eq(comm_term(Term::v(xvars[r]), Term::v(yvars[r])), t_e())));
  // Each x has at most one non-commuting partner among the y's.
  {
    int z = next++, w1 = next++, w2 = next++;
    std::vector<FormulaP> zin, w1in, w2in;
    for (int xv : xvars) zin.push_back(mk_eq(Term::v(z), Term::v(xv)));
    for (int yv : yvars) w1in.push_back(mk_eq(Term::v(w1), Term::v(yv)));
    for (int yv : yvars) w2in.push_back(mk_eq(Term::v(w2), Term::v(yv)));
    auto noncomm = [&](int a, int b) {
      return mk_not(mk_eq(t_mul(Term::v(a), Term::v(b)), t_mul(Term::v(b), Term::v(a))));
    };
    conj.push_back(mk_forall(z, mk_forall(w1, mk_forall(w2,
        mk_implies(mk_and({mk_or(std::move(zin)), mk_or(std::move(w1in)),
                           mk_or(std::move(w2in)), noncomm(z, w1), noncomm(z, w2)}),
                   mk_eq(Term::v(w1), Term::v(w2)))))));
  }
  // Trivial center of each copy.
  for (int r = 0; r < k; ++r) {
    int cv = next++;
    FormulaP member = alpha(v, Term::v(cv), {Term::v(xvars[r]), Term::v(yvars[r])}, next);
    FormulaP commutes = mk_and(
        {mk_eq(t_mul(Term::v(cv), Term::v(xvars[r])), t_mul(Term::v(xvars[r]), Term::v(cv))),
         mk_eq(t_mul(Term::v(cv), Term::v(yvars[r])), t_mul(Term::v(yvars[r]), Term::v(cv)))});
    conj.push_back(mk_forall(
        cv, mk_implies(mk_and({std::move(member), std::move(commutes)}),
                       mk_eq(Term::v(cv), t_e()))));
  }
  // H / C(z, w) satisfies the simple-factor description for each
  // non-commuting pair (z, w) picked from the x's and y's.
  {
    int z = next++, w = next++;
    std::vector<FormulaP> zin, win;
    for (int xv : xvars) zin.push_back(mk_eq(Term::v(z), Term::v(xv)));
    for (int yv : yvars) win.push_back(mk_eq(Term::v(w), Term::v(yv)));
    FormulaP noncomm =
        mk_not(mk_eq(t_mul(Term::v(z), Term::v(w)), t_mul(Term::v(w), Term::v(z))));
    // phi_S with equality read modulo the centralizer of (z, w).
    FormulaP phi_s = presentation_description_sentence(s, *pres, s.order());
    int refreshed_next = std::max(next, phi_s->max_var() + 1);
    phi_s = fo::refresh_bound(phi_s, refreshed_next);
    next = refreshed_next;
    Relativizer rel;
    Term tz = Term::v(z), tw = Term::v(w);
    rel.eq_member = [tz, tw](const Term& t, int&) {
      return mk_and({mk_eq(t_mul(t, tz), t_mul(tz, t)),
                     mk_eq(t_mul(t, tw), t_mul(tw, t))});
    };
    FormulaP quotient_check = relativize(phi_s, rel, next);
    conj.push_back(mk_forall(z, mk_forall(w,
        mk_implies(mk_and({mk_or(std::move(zin)), mk_or(std::move(win)),
                           std::move(noncomm)}),
                   std::move(quotient_check)))));
  }
  FormulaP body = mk_and(std::move(conj));
  for (int i = 2 * k; i >= 1; --i) body = mk_exists(i, body);
  return body;
}

namespace {

// Equality atoms replaced, everything else untouched: used inside tagged
// subtrees whose existential witnesses locate themselves in the subgroup,
// so quantifier guards would be redundant there.
FormulaP replace_eq_only(const FormulaP& f, const Relativizer& r, int& next_var) {
  if (f->kind == Formula::Kind::Eq) {
    Term quot = t_mul(f->terms[0], t_inv(f->terms[1]));
    return r.eq_member(quot, next_var);
  }
  if (f->children.empty()) return f;
  Formula out = *f;
  out.tag = ShortcutTag{};
  for (FormulaP& c : out.children) c = replace_eq_only(c, r, next_var);
  return finish(std::move(out));
}

}  // namespace

FormulaP relativize(const FormulaP& f, const Relativizer& r, int& next_var) {
  if (r.eq_member && (f->tag.kind == ShortcutTag::Kind::Power ||
                      f->tag.kind == ShortcutTag::Kind::PowerUpTo)) {
    FormulaP body = replace_eq_only(f, r, next_var);
    if (!r.mod_gens.empty()) {
      ShortcutTag tag = f->tag;
      tag.mod_gens = r.mod_gens;
      tag.v = r.mod_v;
      body = with_tag(body, tag);
    }
    return body;
  }
  if (r.eq_member && f->tag.kind == ShortcutTag::Kind::Generation)
    return replace_eq_only(f, r, next_var);

  switch (f->kind) {
    case Formula::Kind::Eq: {
      if (!r.eq_member) return f;
      Term quot = t_mul(f->terms[0], t_inv(f->terms[1]));
      return r.eq_member(quot, next_var);
    }
    case Formula::Kind::Rel:
      return f;
    case Formula::Kind::Not:
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies: {
      Formula out = *f;
      for (FormulaP& c : out.children) c = relativize(c, r, next_var);
      if (r.eq_member && out.tag.present()) out.tag = ShortcutTag{};
      return finish(std::move(out));
    }
    case Formula::Kind::Forall: {
      FormulaP body = relativize(f->children[0], r, next_var);
      if (r.guard)
        body = mk_implies(r.guard(Term::v(f->qvar), next_var), std::move(body));
      return mk_forall(f->qvar, std::move(body));
    }
    case Formula::Kind::Exists: {
      FormulaP body = relativize(f->children[0], r, next_var);
      if (r.guard)
        body = mk_and({r.guard(Term::v(f->qvar), next_var), std::move(body)});
      return mk_exists(f->qvar, std::move(body));
    }
  }
  throw std::logic_error("unreachable");
}

FormulaP general_presentation_description(const FiniteGroup& g,
                                          const PresentationSpec& pres,
                                          std::vector<Term>* out_tuple_vars) {
  if (g.order() == 1) {
    // Empty presentation: every element is the identity.
    int xv = 1;
    if (out_tuple_vars) out_tuple_vars->clear();
    return mk_forall(xv, mk_eq(Term::v(xv), t_e()));
  }
  auto images = find_generator_images(g, pres);
  if (!images)
    throw std::invalid_argument("presentation does not present the group");
  int k = static_cast<int>(pres.generators.size());
  long long v = g.order();

  CompositionSeries series = composition_series(g);
  PreprocessingChain chain = preprocessing_chain(g, series.gensets);
  int r = series.length();

  // Variables: x_1..x_k (presentation tuple), then one variable per swift
  // chain element.
  std::vector<Term> xs;
  for (int i = 1; i <= k; ++i) xs.push_back(Term::v(i));
  if (out_tuple_vars) *out_tuple_vars = xs;
  int next = k + 1;
  std::vector<int> avars;
  for (std::size_t i = 0; i < chain.set.size(); ++i) avars.push_back(next++);
  std::vector<Term> aterms;
  for (int av : avars) aterms.push_back(Term::v(av));

  std::vector<FormulaP> conj;
  // Ascending proper normal chain: <A_i> proper and normal in <A_{i+1}>.
  for (int i = 1; i <= r; ++i) {
    std::vector<Term> ai(aterms.begin(), aterms.begin() + chain.level_sizes[i]);
    if (i < r) {
      // Properness: some later chain element escapes <A_i>.
      conj.push_back(mk_not(alpha(v, aterms[chain.level_sizes[i]], ai, next)));
    }
    if (i >= 2) {
      std::vector<Term> prev(aterms.begin(), aterms.begin() + chain.level_sizes[i - 1]);
      // Normality: conjugates of the previous level's generators by the new
      // ones stay inside the previous level.
      for (int j = chain.level_sizes[i - 1]; j < chain.level_sizes[i]; ++j)
        for (int l = 0; l < chain.level_sizes[i - 1]; ++l) {
          Term conj_term =
              t_mul(t_mul(t_inv(aterms[j]), aterms[l]), aterms[j]);
          conj.push_back(alpha(v, std::move(conj_term), prev, next));
        }
    }
  }
  // The presentation tuple written over the swift set.
  for (int i = 0; i < k; ++i) {
    Word w = chain.word_for(g, (*images)[i]);
    conj.push_back(mk_eq(xs[i], word_term(w, aterms)));
  }
  // Relators and generation.
  for (const Word& w : pres.relators) conj.push_back(mk_eq(word_term(w, xs), t_e()));
  int yv = next++;
  conj.push_back(mk_forall(yv, alpha(v, Term::v(yv), xs, next)));

  FormulaP body = mk_and(std::move(conj));
  for (auto it = avars.rbegin(); it != avars.rend(); ++it)
    body = mk_exists(*it, body);
  long long lg = paper_log(g.order());
  check_length(body, pres.length() + config::kAlphaC * 4 * (lg * lg + lg + 1),
               "general_presentation_description");
  return body;
}

FormulaP general_presentation_description_sentence(const FiniteGroup& g,
                                                   const PresentationSpec& pres) {
  std::vector<Term> xs;
  FormulaP body = general_presentation_description(g, pres, &xs);
  for (auto it = xs.rbegin(); it != xs.rend(); ++it)
    body = mk_exists(it->var, body);
  return body;
}

}  // namespace fgdesc::builders
