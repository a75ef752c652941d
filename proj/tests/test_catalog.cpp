#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fgdesc/catalog.hpp"
#include "fgdesc/numtheory.hpp"
#include "fgdesc/series.hpp"

using namespace fgdesc;

// Group counts for orders 1..16, frozen from the canonical table search and
// cross-checked against the independent naive enumerator below for n <= 8.
static const int kCounts[17] = {0, 1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14};

TEST_CASE("backtracking enumerator counts for n <= 16") {
  for (int n = 1; n <= 16; ++n)
    CHECK(enumerate_groups_backtracking(n).size() == static_cast<std::size_t>(kCounts[n]));
}

TEST_CASE("independent naive oracle agrees for n <= 8") {
  for (int n = 1; n <= 8; ++n) {
    auto naive = enumerate_groups_naive(n);
    auto fast = enumerate_groups_backtracking(n);
    REQUIRE(naive.size() == fast.size());
    // Same isomorphism classes, not just the same count.
    for (const FiniteGroup& g : naive) {
      bool found = false;
      for (const FiniteGroup& h : fast)
        if (is_isomorphic(g, h)) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("catalogs are complete and pairwise non-isomorphic") {
  for (int n : {8, 12, 16, 18, 20, 21, 24}) {
    auto cat = enumerate_groups(n);
    CHECK(cat->complete);
    CHECK(cat->order == n);
    for (std::size_t i = 0; i < cat->groups.size(); ++i) {
      CHECK(cat->groups[i].order() == n);
      for (std::size_t j = i + 1; j < cat->groups.size(); ++j)
        CHECK_FALSE(is_isomorphic(cat->groups[i], cat->groups[j]));
    }
  }
}

TEST_CASE("prime orders have one group") {
  for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23})
    CHECK(enumerate_groups(p)->groups.size() == 1);
}

TEST_CASE("curated order 24 covers the familiar groups") {
  auto cat = enumerate_groups(24);
  REQUIRE(cat->groups.size() == 15);
  auto contains = [&](const FiniteGroup& g) {
    for (const FiniteGroup& h : cat->groups)
      if (is_isomorphic(g, h)) return true;
    return false;
  };
  CHECK(contains(symmetric_group(4)));
  CHECK(contains(cyclic_group(24)));
  CHECK(contains(dicyclic_group(6)));
  CHECK(contains(direct_product(cyclic_group(2), alternating_group(4))));
  CHECK(contains(direct_product(cyclic_group(3), dicyclic_group(2))));
}

TEST_CASE("catalog order bound is enforced") {
  CHECK_THROWS(enumerate_groups(25));
  CHECK_THROWS(enumerate_groups(0));
}

TEST_CASE("composition series of S4 and friends") {
  CompositionSeries cs = composition_series(symmetric_group(4), nullptr);
  REQUIRE(cs.length() == 4);
  std::multiset<int> orders;
  long long prod = 1;
  for (const auto& f : cs.factors) {
    orders.insert(f.group.order());
    prod *= f.group.order();
    CHECK(is_simple(f.group));
  }
  CHECK(prod == 24);
  CHECK(orders == std::multiset<int>{2, 2, 2, 3});

  CompositionSeries cp = composition_series(cyclic_group(7), nullptr);
  CHECK(cp.length() == 1);
  CHECK(cp.factors[0].group.order() == 7);

  CompositionSeries ca = composition_series(alternating_group(5));
  CHECK(ca.length() == 1);
  CHECK(ca.factors[0].group.order() == 60);
  CHECK(ca.factors[0].pres != nullptr);
}

TEST_CASE("series genset sizes respect the catalog generator bound") {
  int c0 = PresentationCatalog::shipped().max_generators();
  for (int n : {8, 12, 16, 24}) {
    auto cat = enumerate_groups(n);
    for (const FiniteGroup& g : cat->groups) {
      CompositionSeries cs = composition_series(g);
      for (int i = 1; i <= cs.length(); ++i) {
        int added = static_cast<int>(cs.gensets[i].size() - cs.gensets[i - 1].size());
        CHECK(added <= c0);
        // T_i generates G_i (validated again here for the record).
        ClosureResult c = closure(g, cs.gensets[i]);
        CHECK(c.subgroup.elements == cs.chain[i].elements);
      }
    }
  }
}

TEST_CASE("D4 series goes through the rotation subgroup") {
  FiniteGroup d4 = dihedral_group(4);
  CompositionSeries cs = composition_series(d4);
  REQUIRE(cs.length() == 3);
  // 1 < C2 < C4 < D4 with the cyclic subgroup in the middle.
  CHECK(cs.chain[2].order() == 4);
  SubgroupAsGroup mid = subgroup_as_group(cs.chain[2]);
  CHECK(is_isomorphic(mid.group, cyclic_group(4)));
}

TEST_CASE("shipped presentations hold on their groups") {
  const PresentationCatalog& cat = PresentationCatalog::shipped();
  CHECK(cat.by_name("A5") != nullptr);
  CHECK(find_generator_images(alternating_group(5), *cat.by_name("A5")).has_value());
  CHECK(find_generator_images(symmetric_group(4), *cat.by_name("S4")).has_value());
  CHECK(find_generator_images(symmetric_group(5), *cat.by_name("S5")).has_value());
  // Wrong group: no images.
  CHECK_FALSE(find_generator_images(cyclic_group(60), *cat.by_name("A5")).has_value());
}

TEST_CASE("presentation size inequality log rank + log q <= log order") {
  for (const PresentationSpec& s : PresentationCatalog::shipped().entries()) {
    if (s.lie_rank == 0) continue;
    CHECK(paper_log(s.lie_rank) + paper_log(std::max(1, s.field_q)) <=
          paper_log(s.order));
  }
}
