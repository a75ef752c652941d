#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fgdesc/eval.hpp"
#include "fgdesc/group.hpp"
#include "fgdesc/metrics.hpp"
#include "fgdesc/sexpr.hpp"
#include "fgdesc/builders.hpp"
#include "fgdesc/structure.hpp"

using namespace fgdesc;
using namespace fgdesc::fo;

TEST_CASE("parse and render round-trip") {
  FormulaP f = parse("(= e e)", group_sig());
  CHECK(render(f) == "(= e e)");
  CHECK(equal(parse(render(f), group_sig()), f));

  FormulaP g = parse("(forall x (exists y (= (mul x y) e)))", group_sig());
  // Canonical text uses indexed variables; reparsing is stable.
  std::string canon = render(g);
  CHECK(equal(parse(canon, group_sig()), g));
  CHECK(render(parse(canon, group_sig())) == canon);
}

TEST_CASE("parse errors carry offsets") {
  CHECK_THROWS_WITH_AS(parse("(forall)", group_sig()),
                       doctest::Contains("at offset 7"), ParseError);
  CHECK_THROWS_AS(parse("(= e", group_sig()), ParseError);
  CHECK_THROWS_AS(parse("(frobnicate x)", group_sig()), ParseError);
  CHECK_THROWS_AS(parse("(= e e) junk", group_sig()), ParseError);
}

TEST_CASE("formula files carry a signature header") {
  FormulaP f = parse("(forall x1 (= (add x1 0) x1))", ring_sig());
  std::string text = render_file(ring_sig(), f);
  FormulaFile file = parse_file_text(text);
  CHECK(file.sig == &ring_sig());
  CHECK(equal(file.formula, f));
  CHECK_THROWS(parse_file_text("(= e e)"));
}

TEST_CASE("length metrics") {
  CHECK(length_report(parse("(= x1 x2)", group_sig())).symbol_length == 3);
  // Quantifier counts itself plus its variable occurrence.
  LengthReport r = length_report(parse("(forall x1 (= x1 e))", group_sig()));
  CHECK(r.symbol_length == 5);
  // Binary length adds ceil(log10 i) per occurrence of x_i.
  LengthReport r9 = length_report(parse("(= x9 x9)", group_sig()));
  LengthReport r10 = length_report(parse("(= x10 x10)", group_sig()));
  LengthReport r100 = length_report(parse("(= x100 x100)", group_sig()));
  CHECK(r9.binary_length == 3 + 2);
  CHECK(r10.binary_length == 3 + 2);
  CHECK(r100.binary_length == 3 + 4);
  CHECK(r9.symbol_length == r100.symbol_length);
}

TEST_CASE("symbol length is invariant under variable renaming") {
  FormulaP f = parse("(exists x1 (forall x2 (= (mul x1 x2) (mul x2 x1))))", group_sig());
  FormulaP g = parse("(exists x7 (forall x19 (= (mul x7 x19) (mul x19 x7))))", group_sig());
  CHECK(length_report(f).symbol_length == length_report(g).symbol_length);
  CHECK(length_report(g).binary_length > length_report(f).binary_length);
}

TEST_CASE("alternation ranks") {
  CHECK(alternation_rank(parse("(= e e)", group_sig())).rank == 0);
  AlternationClass pi2 =
      alternation_rank(parse("(forall x (exists y (= (mul x y) e)))", group_sig()));
  CHECK(pi2.lead == AlternationClass::Lead::Pi);
  CHECK(pi2.rank == 2);
  // Blocks of independent conjuncts merge.
  FormulaP f = parse(
      "(and (exists x (= x e)) (exists y (forall z (= (mul y z) (mul z y)))))",
      group_sig());
  AlternationClass c = alternation_rank(f);
  CHECK(c.lead == AlternationClass::Lead::Sigma);
  CHECK(c.rank == 2);
}

TEST_CASE("evaluation basics") {
  FiniteGroup c2 = cyclic_group(2);
  GroupStructure s(c2);
  Evaluator ev(s);
  CHECK(ev.evaluate(parse("(forall x (= (mul x x) e))", group_sig())));
  FiniteGroup s3 = symmetric_group(3);
  GroupStructure ss(s3);
  Evaluator evs(ss);
  CHECK_FALSE(evs.evaluate(parse("(forall x (forall y (= (mul x y) (mul y x))))",
                                 group_sig())));
  CHECK_THROWS(evs.evaluate(parse("(= x1 e)", group_sig())));  // unbound
}

TEST_CASE("predicate and automorphism expansions evaluate") {
  FiniteGroup c4 = cyclic_group(4);
  GroupStructure with_p = GroupStructure::with_predicate(c4, {0, 2});
  Evaluator ev(with_p);
  CHECK(ev.evaluate(parse("(P e)", group_pred_sig())));
  CHECK(ev.evaluate(parse("(exists x (and (P x) (not (= x e))))", group_pred_sig())));
  GroupStructure with_a = GroupStructure::with_automorphism(c4, {0, 3, 2, 1});
  Evaluator ea(with_a);
  CHECK(ea.evaluate(parse("(forall x (= (aut (aut x)) x))", group_aut_sig())));
}

namespace {

// Random formula over the group signature, quantifier depth <= depth.
FormulaP random_formula(std::mt19937& rng, int depth, int maxvar) {
  std::uniform_int_distribution<int> kind(0, 6);
  std::uniform_int_distribution<int> var(1, maxvar);
  auto term = [&](auto&& self, int d) -> Term {
    std::uniform_int_distribution<int> t(0, d > 0 ? 3 : 1);
    switch (t(rng)) {
      case 0: return Term::v(var(rng));
      case 1: return Term::c("e");
      case 2: return Term::f("inv", {self(self, d - 1)});
      default: return Term::f("mul", {self(self, d - 1), self(self, d - 1)});
    }
  };
  switch (depth > 0 ? kind(rng) : 0) {
    case 0: return mk_eq(term(term, 2), term(term, 2));
    case 1: return mk_not(random_formula(rng, depth - 1, maxvar));
    case 2:
      return mk_and({random_formula(rng, depth - 1, maxvar),
                     random_formula(rng, depth - 1, maxvar)});
    case 3:
      return mk_or({random_formula(rng, depth - 1, maxvar),
                    random_formula(rng, depth - 1, maxvar)});
    case 4:
      return mk_implies(random_formula(rng, depth - 1, maxvar),
                        random_formula(rng, depth - 1, maxvar));
    case 5: return mk_forall(var(rng), random_formula(rng, depth - 1, maxvar));
    default: return mk_exists(var(rng), random_formula(rng, depth - 1, maxvar));
  }
}

}  // namespace

TEST_CASE("memoized and non-memoized evaluation agree (depth <= 6, order <= 6)") {
  std::mt19937 rng(20260810);
  std::vector<FiniteGroup> groups;
  for (int n = 2; n <= 6; ++n) groups.push_back(cyclic_group(n));
  groups.push_back(symmetric_group(3));
  for (int trial = 0; trial < 400; ++trial) {
    FormulaP f = random_formula(rng, 6, 4);
    const FiniteGroup& g = groups[trial % groups.size()];
    GroupStructure s(g);
    Assignment a1(f->max_var() + 1, kUnset), a2;
    for (int v : f->free_vars()) a1[v] = trial % g.order();
    a2 = a1;
    Evaluator with_memo(s, {EvalOptions::Mode::Naive, true});
    EvalOptions no_memo_opts{EvalOptions::Mode::Naive, false};
    Evaluator no_memo(s, no_memo_opts);
    CHECK(with_memo.evaluate(f, a1) == no_memo.evaluate(f, a2));
  }
}

TEST_CASE("prenex preserves truth on small structures") {
  std::mt19937 rng(77);
  FiniteGroup g = symmetric_group(3);
  GroupStructure s(g);
  for (int trial = 0; trial < 150; ++trial) {
    FormulaP f = random_formula(rng, 4, 3);
    if (!f->free_vars().empty()) continue;
    PrenexForm p = to_prenex(f);
    FormulaP pn = p.matrix;
    for (auto it = p.prefix.rbegin(); it != p.prefix.rend(); ++it)
      pn = it->first ? mk_exists(it->second, pn) : mk_forall(it->second, pn);
    Evaluator e1(s), e2(s);
    CHECK(e1.evaluate(f) == e2.evaluate(pn));
  }
}

TEST_CASE("variable reuse rewriter preserves semantics and lowers binary length") {
  FiniteGroup g = cyclic_group(6);
  GroupStructure s(g);
  FormulaP f = parse(
      "(and (exists x5 (= (mul x5 x5) e)) (exists x9 (forall x12 (= (mul x9 x12) "
      "(mul x12 x9)))))",
      group_sig());
  FormulaP r = reuse_variables(f);
  Evaluator e1(s), e2(s);
  CHECK(e1.evaluate(f) == e2.evaluate(r));
  CHECK(length_report(r).symbol_length == length_report(f).symbol_length);
  CHECK(length_report(r).binary_length <= length_report(f).binary_length);
}

TEST_CASE("tag serialization round-trips through json") {
  int next = 3;
  FormulaP th = builders::theta(8, Term::v(1), Term::v(2), next);
  std::string sexp = render(th);
  std::string tags = tags_to_json(th);
  FormulaP reparsed = parse(sexp, group_sig());
  FormulaP retagged = apply_tags_json(reparsed, tags, group_sig());
  CHECK(equal(retagged, th));
  // Tagged evaluation agrees after the round trip.
  FiniteGroup c8 = cyclic_group(8);
  GroupStructure s(c8);
  for (int gval = 0; gval < 8; ++gval) {
    Assignment a(retagged->max_var() + 1, kUnset);
    a[1] = gval;
    a[2] = 1;
    Assignment b = a;
    Evaluator e1(s, {EvalOptions::Mode::Shortcut});
    Evaluator e2(s, {EvalOptions::Mode::Naive});
    CHECK(e1.evaluate(retagged, a) == e2.evaluate(reparsed, b));
  }
}
