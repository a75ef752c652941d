#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "fgdesc/group.hpp"

using namespace fgdesc;

TEST_CASE("closure of two transpositions generates S3") {
  FiniteGroup s3 = symmetric_group(3);
  std::vector<int> transpositions;
  for (int e = 0; e < 6; ++e)
    if (s3.element_order(e) == 2) transpositions.push_back(e);
  REQUIRE(transpositions.size() == 3);
  ClosureResult c = closure(s3, {transpositions[0], transpositions[1]});
  CHECK(c.subgroup.order() == 6);
  // Every element carries a product expression evaluating back to it.
  for (std::size_t i = 0; i < c.subgroup.elements.size(); ++i) {
    int acc = s3.identity();
    for (int gi : c.words[i])
      acc = s3.mul(acc, gi == 0 ? transpositions[0] : transpositions[1]);
    CHECK(acc == c.subgroup.elements[i]);
    CHECK(static_cast<int>(c.words[i].size()) <= s3.order());
  }
}

TEST_CASE("closure of the empty set is the trivial subgroup") {
  FiniteGroup g = dihedral_group(4);
  ClosureResult c = closure(g, {});
  CHECK(c.subgroup.elements == std::vector<int>{g.identity()});
}

TEST_CASE("closure of the square inside C6") {
  FiniteGroup c6 = cyclic_group(6);
  ClosureResult c = closure(c6, {2});  // g^2 in additive labeling
  CHECK(c.subgroup.elements == std::vector<int>{0, 2, 4});
}

TEST_CASE("closure equals the product fixed point on small catalogs") {
  for (int n : {4, 6, 8, 12}) {
    FiniteGroup g = n == 8 ? dicyclic_group(2) : dihedral_group(n / 2);
    for (int a = 0; a < g.order(); ++a)
      for (int b = a; b < g.order(); ++b) {
        ClosureResult c = closure(g, {a, b});
        // Fixed point of S u S*S u S^-1.
        std::vector<char> in(g.order(), 0);
        in[g.identity()] = in[a] = in[b] = 1;
        bool grew = true;
        while (grew) {
          grew = false;
          for (int x = 0; x < g.order(); ++x) {
            if (!in[x]) continue;
            if (!in[g.inv(x)]) in[g.inv(x)] = 1, grew = true;
            for (int y = 0; y < g.order(); ++y)
              if (in[y] && !in[g.mul(x, y)]) in[g.mul(x, y)] = 1, grew = true;
          }
        }
        for (int x = 0; x < g.order(); ++x)
          CHECK(in[x] == (c.subgroup.contains(x) ? 1 : 0));
      }
  }
}

TEST_CASE("centers: Q8, S3, and abelian groups") {
  CHECK(center(dicyclic_group(2)).order() == 2);
  CHECK(center(symmetric_group(3)).order() == 1);
  FiniteGroup c12 = cyclic_group(12);
  CHECK(center(c12).order() == 12);
}

TEST_CASE("quotients: D4 by its center, C6 by C3, G by G") {
  FiniteGroup d4 = dihedral_group(4);
  QuotientResult q = quotient(d4, center(d4));
  CHECK(q.group.order() == 4);
  CHECK(is_isomorphic(q.group, direct_product(cyclic_group(2), cyclic_group(2))));
  // Projection is a homomorphism.
  for (int a = 0; a < d4.order(); ++a)
    for (int b = 0; b < d4.order(); ++b)
      CHECK(q.projection[d4.mul(a, b)] ==
            q.group.mul(q.projection[a], q.projection[b]));

  FiniteGroup c6 = cyclic_group(6);
  QuotientResult q2 = quotient(c6, Subgroup(c6, {0, 2, 4}));
  CHECK(q2.group.order() == 2);

  std::vector<int> all(c6.order());
  std::iota(all.begin(), all.end(), 0);
  CHECK(quotient(c6, Subgroup(c6, all)).group.order() == 1);
}

TEST_CASE("quotient rejects non-normal subgroups") {
  FiniteGroup s3 = symmetric_group(3);
  int t = -1;
  for (int e = 0; e < 6; ++e)
    if (s3.element_order(e) == 2) t = e;
  CHECK_THROWS(quotient(s3, Subgroup(s3, {s3.identity(), t})));
}

TEST_CASE("isomorphism testing") {
  CHECK_FALSE(is_isomorphic(cyclic_group(4),
                            direct_product(cyclic_group(2), cyclic_group(2))));
  FiniteGroup d6 = dihedral_group(6);
  CHECK(is_isomorphic(d6, d6));
  CHECK(is_isomorphic(d6, direct_product(cyclic_group(2), symmetric_group(3))));
  // The witness is a real isomorphism.
  auto f = find_isomorphism(d6, direct_product(cyclic_group(2), symmetric_group(3)));
  REQUIRE(f.has_value());
  FiniteGroup other = direct_product(cyclic_group(2), symmetric_group(3));
  for (int a = 0; a < d6.order(); ++a)
    for (int b = 0; b < d6.order(); ++b)
      CHECK((*f)[d6.mul(a, b)] == other.mul((*f)[a], (*f)[b]));
}

TEST_CASE("automorphism counts of familiar groups") {
  CHECK(automorphisms(cyclic_group(4)).size() == 2);
  CHECK(automorphisms(cyclic_group(8)).size() == 4);
  CHECK(automorphisms(direct_product(cyclic_group(2), cyclic_group(2))).size() == 6);
  CHECK(automorphisms(dicyclic_group(2)).size() == 24);  // Aut(Q8) = S4
  CHECK(automorphisms(symmetric_group(3)).size() == 6);
}

TEST_CASE("simplicity scan") {
  CHECK(is_simple(cyclic_group(5)));
  CHECK_FALSE(is_simple(cyclic_group(6)));
  CHECK_FALSE(is_simple(symmetric_group(4)));
  CHECK(is_simple(alternating_group(5)));
}

TEST_CASE("permutation input expands to a table") {
  // (1 2) and (1 2 3) generate S3.
  std::vector<int> a = parse_cycles("(1 2)", 3);
  std::vector<int> b = parse_cycles("(1 2 3)", 3);
  FiniteGroup g = group_from_permutations(3, {a, b});
  CHECK(g.order() == 6);
  CHECK(is_isomorphic(g, symmetric_group(3)));
  CHECK_THROWS(parse_cycles("(1 4)", 3));
  CHECK_THROWS(parse_cycles("(1 2", 3));
}

TEST_CASE("table validation rejects non-groups") {
  // A Latin square that is not associative (order 5 loop).
  std::vector<int> latin = {0, 1, 2, 3, 4, 1, 0, 3, 4, 2, 2, 3, 4, 0, 1,
                            3, 4, 1, 2, 0, 4, 2, 0, 1, 3};
  CHECK_THROWS(FiniteGroup(5, latin));
  CHECK_THROWS(FiniteGroup(2, {0, 0, 1, 1}));  // not a Latin square
}
