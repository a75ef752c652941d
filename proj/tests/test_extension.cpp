#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fgdesc/catalog.hpp"
#include "fgdesc/config.hpp"
#include "fgdesc/extdesc.hpp"
#include "fgdesc/extension.hpp"
#include "fgdesc/numtheory.hpp"

using namespace fgdesc;

namespace {

std::vector<std::vector<int>> trivial_action(const FiniteGroup& n,
                                             const FiniteGroup& h) {
  std::vector<int> id(n.order());
  for (int i = 0; i < n.order(); ++i) id[i] = i;
  return std::vector<std::vector<int>>(h.order(), id);
}

}  // namespace

TEST_CASE("C4 by C2 with the inversion action yields D4 and Q8") {
  FiniteGroup c4 = cyclic_group(4), c2 = cyclic_group(2);
  std::vector<std::vector<int>> inversion = {{0, 1, 2, 3}, {0, 3, 2, 1}};
  auto exts = enumerate_extensions(c4, c2, {1}, inversion);
  REQUIRE(exts.size() == 2);
  int d4 = 0, q8 = 0;
  for (const auto& e : exts) {
    if (is_isomorphic(e.e, dihedral_group(4))) ++d4;
    if (is_isomorphic(e.e, dicyclic_group(2))) ++q8;
  }
  CHECK(d4 == 1);
  CHECK(q8 == 1);
}

TEST_CASE("C2 by C2 with the trivial action yields C4 and C2xC2") {
  FiniteGroup c2 = cyclic_group(2);
  auto exts = enumerate_extensions(c2, c2, {1}, trivial_action(c2, c2));
  REQUIRE(exts.size() == 2);
  int c4 = 0, v4 = 0;
  for (const auto& e : exts) {
    if (is_isomorphic(e.e, cyclic_group(4))) ++c4;
    if (is_isomorphic(e.e, direct_product(c2, c2))) ++v4;
  }
  CHECK(c4 == 1);
  CHECK(v4 == 1);
}

TEST_CASE("trivial-center kernels admit one extension per action") {
  FiniteGroup s3 = symmetric_group(3), c2 = cyclic_group(2);
  REQUIRE(center(s3).order() == 1);
  for (const auto& action : automorphism_actions(s3, c2)) {
    auto exts = enumerate_extensions(s3, c2, {1}, action);
    CHECK(exts.size() == 1);
  }
}

TEST_CASE("extension data is coherent") {
  FiniteGroup c4 = cyclic_group(4), c2 = cyclic_group(2);
  std::vector<std::vector<int>> inversion = {{0, 1, 2, 3}, {0, 3, 2, 1}};
  for (const auto& e : enumerate_extensions(c4, c2, {1}, inversion)) {
    // Kernel is normal and isomorphic to N; quotient is H.
    Subgroup ker(e.e, e.kernel);
    CHECK(ker.is_normal());
    SubgroupAsGroup kg = subgroup_as_group(ker);
    CHECK(is_isomorphic(kg.group, c4));
    QuotientResult q = quotient(e.e, ker);
    CHECK(is_isomorphic(q.group, c2));
    // Lift conjugation realizes the prescribed action.
    CHECK(e.action[0] == inversion[1]);
  }
  CHECK_THROWS_AS(enumerate_extensions(cyclic_group(2), cyclic_group(8), {1},
                                       trivial_action(cyclic_group(2), cyclic_group(8))),
                  BudgetExceeded);
}

TEST_CASE("phi restricted to short words") {
  FiniteGroup c4 = cyclic_group(4), c2 = cyclic_group(2);
  std::vector<std::vector<int>> inversion = {{0, 1, 2, 3}, {0, 3, 2, 1}};
  auto exts = enumerate_extensions(c4, c2, {1}, inversion);
  for (auto& e : exts) {
    phi_restricted(e, c2, 1);
    // The empty word maps to the identity of N.
    CHECK(e.phi.at(Word{}) == c4.identity());
    // phi(s^2) distinguishes D4 (identity) from Q8 (the involution).
    Word s2{1, 1};
    int val = e.phi.at(s2);
    if (is_isomorphic(e.e, dihedral_group(4))) CHECK(val == c4.identity());
    else CHECK(c4.element_order(val) == 2);
    // phi respects concatenation where both sides are defined.
    for (const auto& [w1, v1] : e.phi)
      for (const auto& [w2, v2] : e.phi) {
        Word cat = word_concat(w1, w2);
        auto it = e.phi.find(cat);
        if (it != e.phi.end()) {
          int expect = e.e.mul(e.encode(v1, 0), e.encode(v2, 0));
          CHECK(e.encode(it->second, 0) == expect);
        }
      }
  }
}

// The lemma-level equivalences, swept over all kernels and quotients with
// |N| * |H| <= 16 and every within-budget action.
TEST_CASE("restricted phi agreement is equivalent to over-N isomorphism") {
  long long pairs = 0;
  for (int no = 2; no <= 8; ++no)
    for (int ho = 2; no * ho <= 16; ++ho)
      for (const FiniteGroup& n : enumerate_groups(no)->groups)
        for (const FiniteGroup& h : enumerate_groups(ho)->groups) {
          if (std::pow(static_cast<double>(no), static_cast<double>(ho) * ho) >
              config::kExtensionEnumBudget)
            continue;
          std::vector<int> hgens = small_generating_set(h);
          // Every action: tuples of automorphisms per generator, extended to
          // functions H -> Aut(N) through the enumerated factor sets; the
          // per-element function space is covered by automorphism_actions
          // plus the compatibility pruning inside the enumerator.
          for (const auto& action : automorphism_actions(n, h)) {
            std::vector<ExtensionData> exts;
            try {
              exts = enumerate_extensions(n, h, hgens, action);
            } catch (const BudgetExceeded&) {
              continue;
            }
            int m = std::max(2 * paper_log(ho), cayley_radius(h, hgens));
            for (std::size_t i = 0; i < exts.size(); ++i)
              for (std::size_t j = 0; j < exts.size(); ++j) {
                bool agree = phi_agree_3m(exts[i], exts[j], h, m);
                bool iso = over_n_isomorphism(exts[i], exts[j]).has_value();
                CHECK(agree == iso);
                ++pairs;
              }
          }
        }
  CHECK(pairs > 1000);
}

TEST_CASE("distinguishing words determine extensions") {
  for (int no = 2; no <= 8; ++no)
    for (int ho = 2; no * ho <= 16; ++ho)
      for (const FiniteGroup& n : enumerate_groups(no)->groups) {
        if (center(n).order() == 1) continue;
        for (const FiniteGroup& h : enumerate_groups(ho)->groups) {
          if (std::pow(static_cast<double>(no), static_cast<double>(ho) * ho) >
              config::kExtensionEnumBudget)
            continue;
          std::vector<int> hgens = small_generating_set(h);
          PresentationSpec pres;
          {
            // A straight presentation of H on its small generating set is
            // not needed; only the relator count enters the bound. Use the
            // cyclic one for cyclic H, else a two-relator placeholder count
            // via the shipped catalog when available.
            if (is_prime(h.order())) pres = cyclic_presentation(h.order());
            else {
              pres.generators.resize(hgens.size());
              for (std::size_t i = 0; i < hgens.size(); ++i)
                pres.generators[i] = "s" + std::to_string(i + 1);
              pres.relators.resize(std::min<std::size_t>(hgens.size() + 1, 3));
            }
          }
          for (const auto& action : automorphism_actions(n, h)) {
            std::vector<ExtensionData> exts;
            try {
              exts = enumerate_extensions(n, h, hgens, action);
            } catch (const BudgetExceeded&) {
              continue;
            }
            if (exts.size() < 2) continue;
            int m = std::max(2 * paper_log(ho), cayley_radius(h, hgens));
            DistinguishingReport rep =
                distinguishing_words(n, h, hgens, action, pres, m);
            if (rep.method != "oracle") continue;
            CHECK(static_cast<int>(rep.words.size()) <= rep.d_bound);
            for (std::size_t i = 0; i < exts.size(); ++i)
              for (std::size_t j = 0; j < exts.size(); ++j) {
                bool words_agree = true;
                for (const Word& w : rep.words) {
                  auto value = [&](const ExtensionData& e) {
                    int acc = e.e.identity();
                    for (int letter : w)
                      acc = e.e.mul(acc, letter > 0
                                             ? e.lifts[letter - 1]
                                             : e.e.inv(e.lifts[-letter - 1]));
                    return acc;
                  };
                  if (value(exts[i]) != value(exts[j])) words_agree = false;
                }
                if (words_agree)
                  CHECK(over_n_isomorphism(exts[i], exts[j]).has_value());
              }
          }
        }
      }
}

TEST_CASE("difference group regularity on the D4/Q8 family") {
  FiniteGroup c4 = cyclic_group(4), c2 = cyclic_group(2);
  std::vector<std::vector<int>> inversion = {{0, 1, 2, 3}, {0, 3, 2, 1}};
  auto exts = enumerate_extensions(c4, c2, {1}, inversion);
  DifferenceGroup diff = difference_group(exts, c4, c2, 2, 1);
  CHECK(diff.rank_bound == 1 * lambda_omega(center(c4).order()));
  // Differences land in the center (the construction throws otherwise) and
  // translation acts freely: distinct value columns for distinct factor sets.
  REQUIRE(exts.size() == 2);
  bool columns_differ = false;
  for (const auto& vals : diff.class_values)
    if (vals[0] != vals[1]) columns_differ = true;
  CHECK(columns_differ);
  // The selected word is the squared generator, verbatim.
  PinDownResult pin =
      pin_down_subset(diff.z, static_cast<int>(diff.class_words.size()), diff.v_gens);
  REQUIRE(pin.indices.size() == 1);
  CHECK(render_word(diff.class_words[pin.indices[0]], {"s1"}) == "s1^2");
}

TEST_CASE("pin_down_subset: paper instances") {
  // C2 x C3 with one generator hitting both coordinates: |Y| = 2 exactly.
  FiniteGroup c6 = cyclic_group(6);
  PinDownResult pin = pin_down_subset(c6, 2, {{3, 2}});
  CHECK(pin.rank == 1);
  CHECK(pin.indices.size() == 2);
  CHECK(pin.injectivity_checked);

  // V = 0 gives the empty set.
  PinDownResult pin0 = pin_down_subset(c6, 3, {});
  CHECK(pin0.indices.empty());
  CHECK(pin0.rank == 0);

  // C4 example: <(2,0),(0,1)> inside C4^2.
  FiniteGroup c4 = cyclic_group(4);
  PinDownResult pin4 = pin_down_subset(c4, 2, {{2, 0}, {0, 1}});
  CHECK(pin4.rank == 2);
  CHECK(static_cast<int>(pin4.indices.size()) <= pin4.rank * lambda_omega(4));
  CHECK(pin4.v_size == 8);
}

TEST_CASE("pin_down_subset: randomized instances") {
  std::mt19937 rng(31337);
  std::vector<FiniteGroup> abelians{cyclic_group(2), cyclic_group(4), cyclic_group(6),
                                    cyclic_group(12),
                                    direct_product(cyclic_group(2), cyclic_group(2)),
                                    direct_product(cyclic_group(2), cyclic_group(4)),
                                    direct_product(cyclic_group(3), cyclic_group(3))};
  for (int trial = 0; trial < 120; ++trial) {
    const FiniteGroup& a = abelians[trial % abelians.size()];
    int x_size = 2 + static_cast<int>(rng() % 5);
    int gens = 1 + static_cast<int>(rng() % 3);
    std::vector<std::vector<int>> v;
    for (int i = 0; i < gens; ++i) {
      std::vector<int> vec(x_size);
      for (int& e : vec) e = rng() % a.order();
      v.push_back(std::move(vec));
    }
    PinDownResult pin = pin_down_subset(a, x_size, v);
    CHECK(pin.injectivity_checked);  // the scan throws on violation
    CHECK(static_cast<int>(pin.indices.size()) <=
          std::max(1, pin.rank) * lambda_omega(a.order()));
    CHECK(pin.v_size <= config::kPinDownScanBudget);
  }
}
