#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fgdesc/catalog.hpp"
#include "fgdesc/eval.hpp"
#include "fgdesc/numtheory.hpp"
#include "fgdesc/pipeline.hpp"
#include "fgdesc/sexpr.hpp"
#include "fgdesc/verify.hpp"

using namespace fgdesc;
using namespace fgdesc::fo;

TEST_CASE("describe C2: the unique order-2 group") {
  FiniteGroup c2 = cyclic_group(2);
  DescriptionResult res = describe_group(c2);
  auto cat = enumerate_groups(2);
  VerificationReport rep = verify_describes(res.formula, c2, *cat);
  CHECK(rep.verdict == "describes");
  CHECK(res.factors == std::vector<std::string>{"C2"});
}

TEST_CASE("describe Q8 against the order-8 catalog") {
  FiniteGroup q8 = dicyclic_group(2);
  DescriptionResult res = describe_group(q8);
  auto cat = enumerate_groups(8);
  VerificationReport rep = verify_describes(res.formula, q8, *cat);
  CHECK(rep.verdict == "describes");
  int rejected = 0;
  for (const auto& c : rep.candidates)
    if (!c.isomorphic_to_target) {
      CHECK_FALSE(c.satisfied);
      CHECK(c.failing_conjunct >= 0);
      ++rejected;
    }
  CHECK(rejected == 4);
  // Provenance lengths sum close to the total (connective overhead only).
  long long sum = 0;
  for (const auto& [name, len] : res.provenance) sum += len;
  CHECK(sum <= res.metrics.symbol_length);
  CHECK(res.metrics.symbol_length <= sum + 200);
}

TEST_CASE("describe S4 against the order-24 catalog") {
  FiniteGroup s4 = symmetric_group(4);
  DescriptionResult res = describe_group(s4);
  auto cat = enumerate_groups(24);
  VerificationReport rep = verify_describes(res.formula, s4, *cat);
  CHECK(rep.verdict == "describes");
  CHECK(res.factors.size() == 4);
}

TEST_CASE("describe the trivial group") {
  FiniteGroup triv(1, {0});
  DescriptionResult res = describe_group(triv);
  CHECK(render(res.formula) == "(forall x1 (= x1 e))");
}

TEST_CASE("descriptions are deterministic") {
  FiniteGroup g = dicyclic_group(3);
  std::string a = render(describe_group(g).formula);
  std::string b = render(describe_group(g).formula);
  CHECK(a == b);
  FiniteGroup copy(g.order(), g.raw_table());
  CHECK(render(describe_group(copy).formula) == a);
}

TEST_CASE("tuple description of (C4, the involution)") {
  FiniteGroup c4 = cyclic_group(4);
  DescriptionResult res = describe_with_tuple(c4, {2});
  REQUIRE(res.tuple_vars.size() == 1);
  GroupStructure s(c4);
  for (int y = 0; y < 4; ++y) {
    Assignment a(res.formula->max_var() + 1, kUnset);
    a[res.tuple_vars[0]] = y;
    Evaluator ev(s, {EvalOptions::Mode::Shortcut});
    CHECK(ev.evaluate(res.formula, a) == (y == 2));
  }
}

TEST_CASE("tuple description of (S3, a 3-cycle) over the order-6 catalog") {
  FiniteGroup s3 = symmetric_group(3);
  int cyc = -1;
  for (int e = 0; e < 6; ++e)
    if (s3.element_order(e) == 3) {
      cyc = e;
      break;
    }
  DescriptionResult res = describe_with_tuple(s3, {cyc});
  for (const FiniteGroup& h : enumerate_groups(6)->groups) {
    GroupStructure sh(h);
    for (int y = 0; y < 6; ++y) {
      Assignment a(res.formula->max_var() + 1, kUnset);
      a[res.tuple_vars[0]] = y;
      Evaluator ev(sh, {EvalOptions::Mode::Shortcut});
      bool sat = ev.evaluate(res.formula, a);
      // Satisfied exactly when (h, y) is isomorphic to (s3, a 3-cycle).
      bool expect = is_isomorphic(h, s3) && h.element_order(y) == 3;
      CHECK(sat == expect);
    }
  }
}

TEST_CASE("tuple description separates automorphism orbits in D4") {
  FiniteGroup d4 = dihedral_group(4);
  // r (order 4) vs s (order 2, a reflection).
  DescriptionResult res = describe_with_tuple(d4, {1});
  auto auts = automorphisms(d4);
  GroupStructure s(d4);
  for (int y = 0; y < 8; ++y) {
    Assignment a(res.formula->max_var() + 1, kUnset);
    a[res.tuple_vars[0]] = y;
    Evaluator ev(s, {EvalOptions::Mode::Shortcut});
    bool sat = ev.evaluate(res.formula, a);
    bool in_orbit = false;
    for (const auto& f : auts)
      if (f[1] == y) in_orbit = true;
    CHECK(sat == in_orbit);
  }
}

TEST_CASE("subgroup expansions (C4 with its involution subgroup vs trivial)") {
  FiniteGroup c4 = cyclic_group(4);
  DescriptionResult with_n = describe_with_subgroup(c4, Subgroup(c4, {0, 2}));
  DescriptionResult with_triv = describe_with_subgroup(c4, Subgroup(c4, {0}));
  GroupStructure sn = GroupStructure::with_predicate(c4, {0, 2});
  GroupStructure st = GroupStructure::with_predicate(c4, {0});
  {
    Evaluator e1(sn), e2(st);
    CHECK(e1.evaluate(with_n.formula));
    CHECK_FALSE(e2.evaluate(with_n.formula));
  }
  {
    Evaluator e1(sn), e2(st);
    CHECK_FALSE(e1.evaluate(with_triv.formula));
    CHECK(e2.evaluate(with_triv.formula));
  }
  // Expansions of the other order-4 group reject both sentences.
  FiniteGroup v4 = direct_product(cyclic_group(2), cyclic_group(2));
  GroupStructure sv = GroupStructure::with_predicate(v4, {0, 1});
  Evaluator e3(sv);
  CHECK_FALSE(e3.evaluate(with_n.formula));
  // Predicate-everywhere case evaluates.
  DescriptionResult everywhere = describe_with_subgroup(c4, Subgroup(c4, {0, 1, 2, 3}));
  GroupStructure sall = GroupStructure::with_predicate(c4, {0, 1, 2, 3});
  Evaluator e4(sall);
  CHECK(e4.evaluate(everywhere.formula));
}

TEST_CASE("automorphism expansions (V4 swap vs identity)") {
  FiniteGroup v4 = direct_product(cyclic_group(2), cyclic_group(2));
  std::vector<int> ident{0, 1, 2, 3};
  std::vector<int> swapped;
  for (const auto& a : automorphisms(v4))
    if (a != ident && swapped.empty()) swapped = a;
  DescriptionResult res = describe_with_automorphism(v4, swapped);
  GroupStructure gs = GroupStructure::with_automorphism(v4, swapped);
  GroupStructure gi = GroupStructure::with_automorphism(v4, ident);
  Evaluator e1(gs), e2(gi);
  CHECK(e1.evaluate(res.formula));
  CHECK_FALSE(e2.evaluate(res.formula));
  // Non-automorphisms are rejected up front.
  CHECK_THROWS(describe_with_automorphism(v4, {1, 0, 2, 2}));
  CHECK_THROWS(describe_with_automorphism(cyclic_group(4), {0, 2, 1, 3}));
}

TEST_CASE("sigma-bounded descriptions have constant alternation") {
  int rank = -1;
  for (int n : {2, 6, 8, 12}) {
    for (const FiniteGroup& g : enumerate_groups(n)->groups) {
      DescriptionResult res = describe_sigma_bounded(g);
      CHECK(res.metrics.alternation.lead == AlternationClass::Lead::Sigma);
      if (rank < 0) rank = res.metrics.alternation.rank;
      CHECK(res.metrics.alternation.rank == rank);
      auto cat = enumerate_groups(n);
      CHECK(verify_describes(res.formula, g, *cat).verdict == "describes");
    }
  }
  CHECK(rank == 4);
}

TEST_CASE("presentation-mode wrapper") {
  FiniteGroup d4 = dihedral_group(4);
  DescriptionResult res = describe_via_presentation(d4, dihedral_presentation(4));
  CHECK(res.mode == "presentation");
  auto cat = enumerate_groups(8);
  CHECK(verify_describes(res.formula, d4, *cat).verdict == "describes");
}

TEST_CASE("cyclic two-power driver matches the table pipeline") {
  for (int k = 1; k <= 6; ++k) {
    DescriptionResult a = describe_cyclic_2power(k);
    DescriptionResult b = describe_group(cyclic_group(1 << k));
    CHECK(equal(a.formula, b.formula));
    CHECK(a.metrics.symbol_length == b.metrics.symbol_length);
  }
  // Table-free construction far beyond the dense-table bound.
  DescriptionResult big = describe_cyclic_2power(20);
  long long lg = 20;
  CHECK(big.metrics.symbol_length <= config::kPipelineC * (lg + 1) * (lg + 1) * (lg + 1));
  CHECK(big.factors.size() == 20);
}

TEST_CASE("interpretation combinator with identity schemes") {
  InterpretationScheme id_ring = identity_scheme(ring_sig());
  EtaTemplate eta;
  eta.vars = {1, 2};
  eta.formula = mk_eq(Term::v(1), Term::v(2));
  FormulaP phi_f = builders::field_sentence(4);
  FormulaP psi = interpretation_describe(id_ring, id_ring, eta, phi_f);
  FiniteField gf4(4);
  RingStructure f4 = RingStructure::from_field(gf4);
  RingStructure z4 = RingStructure::integers_mod(4);
  Evaluator e1(f4), e2(z4), e3(f4), e4(z4);
  CHECK(e1.evaluate(psi) == e3.evaluate(phi_f));
  CHECK(e2.evaluate(psi) == e4.evaluate(phi_f));
  // Alternation grows by at most a scheme constant.
  CHECK(alternation_rank(psi).rank <= alternation_rank(phi_f).rank + 2);
}

TEST_CASE("interpretation translate through a quotient-by-predicate scheme") {
  InterpretationScheme quo;
  quo.source_sig = &group_pred_sig();
  quo.target_sig = &group_sig();
  quo.dim = 1;
  quo.domain_vars = {1};
  quo.domain = mk_eq(Term::v(1), Term::v(1));
  quo.equiv_vars = {1, 2};
  quo.equiv =
      mk_rel("P", {Term::f("mul", {Term::v(1), Term::f("inv", {Term::v(2)})})});
  InterpretationScheme::Graph mulg;
  mulg.vars = {1, 2, 3};
  mulg.formula =
      mk_rel("P", {Term::f("mul", {Term::f("mul", {Term::v(1), Term::v(2)}),
                                   Term::f("inv", {Term::v(3)})})});
  quo.func_graphs["mul"] = mulg;
  InterpretationScheme::Graph invg;
  invg.vars = {1, 2};
  invg.formula = mk_rel("P", {Term::f("mul", {Term::f("inv", {Term::v(1)}),
                                              Term::f("inv", {Term::v(2)})})});
  quo.func_graphs["inv"] = invg;
  InterpretationScheme::Graph eg;
  eg.vars = {1};
  eg.formula = mk_rel("P", {Term::v(1)});
  quo.func_graphs["e"] = eg;

  int next = 500;
  FormulaP rel = interpretation_translate(builders::cyclic_sentence(2, 1), quo, next);
  FiniteGroup c4 = cyclic_group(4);
  GroupStructure with_n = GroupStructure::with_predicate(c4, {0, 2});
  GroupStructure with_triv = GroupStructure::with_predicate(c4, {0});
  Evaluator e1(with_n), e2(with_triv);
  CHECK(e1.evaluate(rel));        // C4 / <g^2> is C2
  CHECK_FALSE(e2.evaluate(rel));  // C4 / 1 is not
}

TEST_CASE("provenance json carries the conjunct breakdown") {
  DescriptionResult res = describe_group(dicyclic_group(2));
  std::string j = res.provenance_json();
  CHECK(j.find("\"psi\"") != std::string::npos);
  CHECK(j.find("\"chi\"") != std::string::npos);
  CHECK(j.find("\"kappa\"") != std::string::npos);
  CHECK(j.find("\"rho\"") != std::string::npos);
  CHECK(j.find("s1^2") != std::string::npos);  // the D4/Q8 separator word
}
