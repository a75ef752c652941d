#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fgdesc/builders.hpp"
#include "fgdesc/catalog.hpp"
#include "fgdesc/eval.hpp"
#include "fgdesc/field.hpp"
#include "fgdesc/metrics.hpp"
#include "fgdesc/numtheory.hpp"
#include "fgdesc/sexpr.hpp"
#include "fgdesc/structure.hpp"

using namespace fgdesc;
using namespace fgdesc::fo;
using namespace fgdesc::builders;

namespace {

bool eval_with(const Structure& s, const FormulaP& f, std::vector<std::pair<int, int>> asg,
               EvalOptions::Mode mode = EvalOptions::Mode::Checked) {
  Assignment a(f->max_var() + 1, kUnset);
  for (auto [v, val] : asg) {
    if (v >= static_cast<int>(a.size())) a.resize(v + 1, kUnset);
    a[v] = val;
  }
  Evaluator ev(s, {mode});
  return ev.evaluate(f, a);
}

}  // namespace

TEST_CASE("theta matches powering on every group of order <= 8") {
  auto groups_to_8 = [] {
    std::vector<FiniteGroup> out;
    for (int n = 1; n <= 8; ++n)
      for (const FiniteGroup& g : enumerate_groups(n)->groups) out.push_back(g);
    return out;
  }();
  REQUIRE(groups_to_8.size() == 14);
  for (const FiniteGroup& g : groups_to_8) {
    GroupStructure s(g);
    for (long long n : {1, 2, 3, 5, 6, 7, 8, 12}) {
      int next = 3;
      FormulaP th = theta(n, Term::v(1), Term::v(2), next);
      for (int gv = 0; gv < g.order(); ++gv)
        for (int xv = 0; xv < g.order(); ++xv)
          CHECK(eval_with(s, th, {{1, gv}, {2, xv}}) == (g.pow(xv, n) == gv));
    }
  }
}

TEST_CASE("theta on an additive monoid reduct") {
  // Z/12 as an additive monoid: theta_5(g, 1) holds iff g = 5.
  RingStructure z12 = RingStructure::integers_mod(12);
  int next = 3;
  FormulaP th = theta(5, Term::v(1), Term::v(2), next, "add", "0");
  for (int gv = 0; gv < 12; ++gv)
    CHECK(eval_with(z12, th, {{1, gv}, {2, 1}}) == (gv == 5));
}

TEST_CASE("theta_6 has the squaring-chain shape") {
  int next = 3;
  FormulaP th = theta(6, Term::v(1), Term::v(2), next);
  CHECK(render(th) ==
        "(exists x3 (exists x4 (exists x5 (and (= x3 x2) (= x5 x1) "
        "(= x4 (mul (mul x3 x3) x2)) (= x5 (mul x4 x4))))))");
  CHECK_THROWS(theta(0, Term::v(1), Term::v(2), next));
}

TEST_CASE("chi matches bounded powers exhaustively on order <= 8") {
  for (int n = 1; n <= 8; ++n)
    for (const FiniteGroup& g : enumerate_groups(n)->groups) {
      GroupStructure s(g);
      for (long long nn : {1, 4, 5, 8}) {
        int next = 3;
        FormulaP ch = chi(nn, Term::v(1), Term::v(2), next);
        long long bound = 1LL << paper_log(nn);
        for (int gv = 0; gv < g.order(); ++gv)
          for (int xv = 0; xv < g.order(); ++xv) {
            bool want = false;
            for (long long r = 0; r < bound; ++r)
              if (g.pow(xv, r) == gv) want = true;
            CHECK(eval_with(s, ch, {{1, gv}, {2, xv}}) == want);
          }
      }
    }
}

TEST_CASE("chi at the identity always holds") {
  FiniteGroup g = dihedral_group(4);
  GroupStructure s(g);
  int next = 3;
  FormulaP ch = chi(8, Term::v(1), Term::v(2), next);
  for (int xv = 0; xv < g.order(); ++xv)
    CHECK(eval_with(s, ch, {{1, g.identity()}, {2, xv}}));
}

TEST_CASE("alpha and beta match the closure oracle exhaustively on order <= 8") {
  for (int n = 1; n <= 8; ++n)
    for (const FiniteGroup& g : enumerate_groups(n)->groups) {
      GroupStructure s(g);
      for (int k = 1; k <= 2; ++k) {
        int next = k + 2;
        std::vector<Term> xs;
        for (int i = 0; i < k; ++i) xs.push_back(Term::v(2 + i));
        FormulaP al = alpha(g.order(), Term::v(1), xs, next);
        FormulaP be = beta(g.order(), Term::v(1), xs, next);
        std::vector<int> tuple(k, 0);
        while (true) {
          ClosureResult c = closure(g, tuple);
          for (int gv = 0; gv < g.order(); ++gv) {
            std::vector<std::pair<int, int>> asg{{1, gv}};
            for (int i = 0; i < k; ++i) asg.push_back({2 + i, tuple[i]});
            bool want = c.subgroup.contains(gv);
            CHECK(eval_with(s, al, asg) == want);
            CHECK(eval_with(s, be, asg, EvalOptions::Mode::Shortcut) == want);
          }
          int i = 0;
          for (; i < k; ++i) {
            if (++tuple[i] < g.order()) break;
            tuple[i] = 0;
          }
          if (i == k) break;
        }
      }
    }
}

TEST_CASE("alpha/beta/theta/chi on 1000 random instances of order <= 16") {
  std::mt19937 rng(424242);
  std::vector<FiniteGroup> pool;
  for (int n = 9; n <= 16; ++n)
    for (const FiniteGroup& g : enumerate_groups(n)->groups) pool.push_back(g);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(pool.size()) - 1);
  for (int trial = 0; trial < 1000; ++trial) {
    const FiniteGroup& g = pool[pick(rng)];
    GroupStructure s(g);
    std::uniform_int_distribution<int> elem(0, g.order() - 1);
    switch (trial % 4) {
      case 0: {
        long long n = 1 + rng() % 40;
        int next = 3;
        FormulaP th = theta(n, Term::v(1), Term::v(2), next);
        int xv = elem(rng), gv = elem(rng);
        CHECK(eval_with(s, th, {{1, gv}, {2, xv}}) == (g.pow(xv, n) == gv));
        break;
      }
      case 1: {
        long long n = 1 + rng() % 40;
        int next = 3;
        FormulaP ch = chi(n, Term::v(1), Term::v(2), next);
        int xv = elem(rng), gv = elem(rng);
        bool want = false;
        for (long long r = 0, bound = 1LL << paper_log(n); r < bound; ++r)
          if (g.pow(xv, r) == gv) want = true;
        CHECK(eval_with(s, ch, {{1, gv}, {2, xv}}) == want);
        break;
      }
      default: {
        int k = 1 + static_cast<int>(rng() % 3);
        std::vector<Term> xs;
        std::vector<int> vals;
        std::vector<std::pair<int, int>> asg;
        int gv = elem(rng);
        asg.push_back({1, gv});
        for (int i = 0; i < k; ++i) {
          xs.push_back(Term::v(2 + i));
          vals.push_back(elem(rng));
          asg.push_back({2 + i, vals.back()});
        }
        int next = k + 2;
        bool want = closure(g, vals).subgroup.contains(gv);
        if (trial % 4 == 2) {
          FormulaP al = alpha(g.order(), Term::v(1), xs, next);
          CHECK(eval_with(s, al, asg) == want);
        } else {
          FormulaP be = beta(g.order(), Term::v(1), xs, next);
          CHECK(eval_with(s, be, asg, EvalOptions::Mode::Shortcut) == want);
        }
        break;
      }
    }
  }
}

TEST_CASE("beta is existential and negation-free") {
  int next = 4;
  FormulaP be = beta(16, Term::v(1), {Term::v(2), Term::v(3)}, next);
  CHECK(alternation_rank(be).lead == AlternationClass::Lead::Sigma);
  CHECK(alternation_rank(be).rank == 1);
  // No negations or implications anywhere.
  std::function<bool(const FormulaP&)> clean = [&](const FormulaP& f) {
    if (f->kind == Formula::Kind::Not || f->kind == Formula::Kind::Implies)
      return false;
    for (const FormulaP& c : f->children)
      if (!clean(c)) return false;
    return true;
  };
  CHECK(clean(be));
}

TEST_CASE("cyclic sentences describe exactly the cyclic prime powers") {
  FormulaP c8 = cyclic_sentence(2, 3);
  CHECK(alternation_rank(c8).lead == AlternationClass::Lead::Sigma);
  CHECK(alternation_rank(c8).rank == 3);
  int holds = 0;
  for (const FiniteGroup& g : enumerate_groups(8)->groups) {
    GroupStructure s(g);
    Evaluator ev(s, {EvalOptions::Mode::Checked});
    bool sat = ev.evaluate(c8);
    if (sat) {
      ++holds;
      CHECK(is_isomorphic(g, cyclic_group(8)));
    }
  }
  CHECK(holds == 1);
  // C_p for small primes.
  for (int p : {2, 3, 5, 7}) {
    FiniteGroup cp = cyclic_group(p);
    GroupStructure s(cp);
    Evaluator ev(s, {EvalOptions::Mode::Checked});
    CHECK(ev.evaluate(cyclic_sentence(p, 1)));
  }
  // C9 vs C3^2.
  FormulaP c9 = cyclic_sentence(3, 2);
  for (const FiniteGroup& g : enumerate_groups(9)->groups) {
    GroupStructure s(g);
    Evaluator ev(s, {EvalOptions::Mode::Checked});
    CHECK(ev.evaluate(c9) == is_isomorphic(g, cyclic_group(9)));
  }
  CHECK_THROWS(cyclic_sentence(4, 2));
}

TEST_CASE("field sentences pin the field among rings and other field sizes") {
  FiniteField gf4(4);
  RingStructure f4 = RingStructure::from_field(gf4);
  RingStructure z4 = RingStructure::integers_mod(4);
  FormulaP phi4 = field_sentence(4);
  Evaluator e1(f4, {EvalOptions::Mode::Checked});
  CHECK(e1.evaluate(phi4));
  Evaluator e2(z4, {EvalOptions::Mode::Checked});
  CHECK_FALSE(e2.evaluate(phi4));
  for (long long p : {2, 3, 5, 7}) {
    FiniteField fp(static_cast<int>(p));
    RingStructure rp = RingStructure::from_field(fp);
    Evaluator ep(rp, {EvalOptions::Mode::Checked});
    CHECK(ep.evaluate(field_sentence(p)));
  }
  // Proper subfields and superfields are rejected (degree clauses).
  FiniteField gf16(16);
  RingStructure f16 = RingStructure::from_field(gf16);
  Evaluator e3(f16, {EvalOptions::Mode::Checked});
  CHECK_FALSE(e3.evaluate(phi4));
  CHECK(e3.evaluate(field_sentence(16)));
  Evaluator e4(f4, {EvalOptions::Mode::Checked});
  CHECK_FALSE(e4.evaluate(field_sentence(16)));
  CHECK(alternation_rank(phi4).rank <= 3);
  CHECK_THROWS(field_sentence(12));
}

TEST_CASE("difference field sentence pins the automorphism power") {
  FiniteField gf9(9);
  FormulaP phi = difference_field_sentence(9, 1);
  RingStructure frob = RingStructure::from_field_with_sigma(gf9, 1);
  RingStructure ident = RingStructure::from_field_with_sigma(gf9, 0);
  Evaluator e1(frob, {EvalOptions::Mode::Checked});
  Evaluator e2(ident, {EvalOptions::Mode::Checked});
  CHECK(e1.evaluate(phi));
  CHECK_FALSE(e2.evaluate(phi));
  Evaluator e3(ident, {EvalOptions::Mode::Checked});
  CHECK(e3.evaluate(difference_field_sentence(9, 0)));
}

TEST_CASE("field constant formula pins the Frobenius orbit") {
  FiniteField gf4(4);
  RingStructure f4 = RingStructure::from_field(gf4);
  int c = -1;
  for (int x = 0; x < 4; ++x)
    if (gf4.mul(x, x) == gf4.add(x, 1)) c = x;
  REQUIRE(c >= 0);
  int next = 2;
  FormulaP cf = field_constant_formula(gf4, c, Term::v(1), next);
  std::set<int> satisfied;
  for (int y = 0; y < 4; ++y)
    if (eval_with(f4, cf, {{1, y}})) satisfied.insert(y);
  CHECK(satisfied == std::set<int>{c, gf4.frobenius(c)});
  // Prime-field constants are pinned exactly.
  FiniteField gf5(5);
  RingStructure f5 = RingStructure::from_field(gf5);
  int next2 = 2;
  FormulaP cf2 = field_constant_formula(gf5, 3, Term::v(1), next2);
  for (int y = 0; y < 5; ++y)
    CHECK(eval_with(f5, cf2, {{1, y}}) == (y == 3));
}

TEST_CASE("minimal polynomials from the field table") {
  FiniteField gf8(8);
  for (int c = 0; c < 8; ++c) {
    std::vector<int> mp = gf8.minimal_polynomial(c);
    // Evaluate at c inside the field: must vanish.
    int acc = gf8.zero();
    int pw = gf8.one();
    for (int coeff : mp) {
      int term = pw;
      int scaled = gf8.zero();
      for (int i = 0; i < coeff; ++i) scaled = gf8.add(scaled, term);
      acc = gf8.add(acc, scaled);
      pw = gf8.mul(pw, c);
    }
    CHECK(acc == gf8.zero());
    CHECK(mp.back() == 1);
  }
}

TEST_CASE("presentation descriptions of A5 reject other order-60 groups") {
  FiniteGroup a5 = alternating_group(5);
  const PresentationSpec* pres = PresentationCatalog::shipped().by_name("A5");
  REQUIRE(pres);
  FormulaP phi = presentation_description_sentence(a5, *pres, 60);
  GroupStructure sa(a5);
  Evaluator ev(sa, {EvalOptions::Mode::Shortcut});
  CHECK(ev.evaluate(phi));
  std::vector<FiniteGroup> other = {
      cyclic_group(60),
      direct_product(cyclic_group(2), cyclic_group(30)),
      dihedral_group(30),
      dicyclic_group(15),
      direct_product(symmetric_group(3), dihedral_group(5)),
      direct_product(cyclic_group(5), alternating_group(4)),
      direct_product(cyclic_group(3), dihedral_group(10))};
  for (const FiniteGroup& h : other) {
    GroupStructure sh(h);
    Evaluator eh(sh, {EvalOptions::Mode::Shortcut});
    CHECK_FALSE(eh.evaluate(phi));
  }
  // The x1 != 1 conjunct is present.
  CHECK(render(phi).find("(not (= x1 e))") != std::string::npos);
}

TEST_CASE("char simple sentences") {
  const PresentationCatalog* cat = &PresentationCatalog::shipped();
  FormulaP c23 = char_simple_sentence(cyclic_group(2), 3, cat);
  for (const FiniteGroup& g : enumerate_groups(8)->groups) {
    GroupStructure s(g);
    Evaluator ev(s, {EvalOptions::Mode::Shortcut});
    CHECK(ev.evaluate(c23) ==
          is_isomorphic(g, direct_product(direct_product(cyclic_group(2),
                                                         cyclic_group(2)),
                                          cyclic_group(2))));
  }
  FormulaP c32 = char_simple_sentence(cyclic_group(3), 2, cat);
  for (const FiniteGroup& g : enumerate_groups(9)->groups) {
    GroupStructure s(g);
    Evaluator ev(s, {EvalOptions::Mode::Shortcut});
    CHECK(ev.evaluate(c32) == !is_isomorphic(g, cyclic_group(9)));
  }
  // k = 1 reduces to a description of S.
  FormulaP c51 = char_simple_sentence(cyclic_group(5), 1, cat);
  GroupStructure s5(cyclic_group(5));
  Evaluator e5(s5, {EvalOptions::Mode::Checked});
  CHECK(e5.evaluate(c51));
  CHECK_THROWS(char_simple_sentence(cyclic_group(6), 2, cat));
}

TEST_CASE("nonabelian char simple at k = 1 describes A5") {
  FormulaP phi = char_simple_sentence(alternating_group(5), 1,
                                      &PresentationCatalog::shipped());
  GroupStructure sa(alternating_group(5));
  Evaluator ev(sa, {EvalOptions::Mode::Shortcut});
  CHECK(ev.evaluate(phi));
  GroupStructure sc(cyclic_group(60));
  Evaluator ec(sc, {EvalOptions::Mode::Shortcut});
  CHECK_FALSE(ec.evaluate(phi));
}

TEST_CASE("general presentation descriptions") {
  // D4 from its dihedral presentation, checked over the order-8 catalog.
  FiniteGroup d4 = dihedral_group(4);
  FormulaP phi = general_presentation_description_sentence(d4, dihedral_presentation(4));
  for (const FiniteGroup& g : enumerate_groups(8)->groups) {
    GroupStructure s(g);
    Evaluator ev(s, {EvalOptions::Mode::Shortcut});
    CHECK(ev.evaluate(phi) == is_isomorphic(g, d4));
  }
  // Trivial group with the empty presentation.
  PresentationSpec empty;
  empty.name = "1";
  empty.order = 1;
  FiniteGroup triv(1, {0});
  FormulaP phi1 = general_presentation_description(triv, empty);
  CHECK(render(phi1) == "(forall x1 (= x1 e))");
  // S4 from its Coxeter presentation over the order-24 catalog.
  FiniteGroup s4 = symmetric_group(4);
  const PresentationSpec* coxeter = PresentationCatalog::shipped().by_name("S4");
  REQUIRE(coxeter);
  FormulaP phi24 = general_presentation_description_sentence(s4, *coxeter);
  for (const FiniteGroup& g : enumerate_groups(24)->groups) {
    GroupStructure s(g);
    Evaluator ev(s, {EvalOptions::Mode::Shortcut});
    CHECK(ev.evaluate(phi24) == is_isomorphic(g, s4));
  }
}

TEST_CASE("length guards hold on large parameters") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    long long n = 1 + rng() % (1LL << 20);
    int next = 3;
    FormulaP th = theta(n, Term::v(1), Term::v(2), next);
    CHECK(fo::symbol_length(th) <= config::kThetaC * (paper_log(n) + 1));
    next = 3;
    chi(n, Term::v(1), Term::v(2), next);
    int k = 1 + static_cast<int>(rng() % 20);
    std::vector<Term> xs;
    for (int i = 0; i < k; ++i) xs.push_back(Term::v(2 + i));
    next = k + 2;
    long long v = 1 + rng() % (1LL << 20);
    alpha(v, Term::v(1), xs, next);
    next = k + 2;
    beta(v, Term::v(1), xs, next);
  }
  for (long long q : {1048576LL, 531441LL, 9765625LL / 5, 16807LL, 65536LL}) {
    long long p;
    int nn;
    if (!is_prime_power(q, &p, &nn)) continue;
    FormulaP f = field_sentence(q);
    CHECK(fo::symbol_length(f) <= config::kFieldC * (paper_log(q) + 1));
    cyclic_sentence(p, nn);
  }
}
