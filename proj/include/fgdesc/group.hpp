#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fgdesc {

/// Finite group backed by a dense multiplication table. Elements are the
/// indices 0..order-1. Construction validates the Latin-square property and
/// associativity (full check up to order 256, sampled above), and computes
/// the identity and inverse tables.
class FiniteGroup {
 public:
  FiniteGroup(int order, std::vector<int> table, std::string label = "");

  int order() const { return order_; }
  int mul(int a, int b) const { return table_[a * order_ + b]; }
  int inv(int a) const { return inv_[a]; }
  int identity() const { return identity_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  int conj(int a, int g) const { return mul(mul(inv(g), a), g); }
  int commutator(int a, int b) const {
    return mul(mul(inv(a), inv(b)), mul(a, b));
  }
  /// a^n for any integer n (binary powering).
  int pow(int a, long long n) const;
  /// Multiplicative order of a.
  int element_order(int a) const;
  /// Sorted multiset of element orders (an isomorphism invariant).
  std::vector<int> order_profile() const;

  const std::vector<int>& raw_table() const { return table_; }

 private:
  int order_;
  std::vector<int> table_;
  std::vector<int> inv_;
  int identity_ = -1;
  std::string label_;
};

/// Subgroup of a parent group, stored as a sorted element set containing the
/// identity and closed under product and inverse (checked on construction).
struct Subgroup {
  const FiniteGroup* parent = nullptr;
  std::vector<int> elements;  // sorted

  Subgroup() = default;
  Subgroup(const FiniteGroup& g, std::vector<int> elems);

  int order() const { return static_cast<int>(elements.size()); }
  bool contains(int e) const;
  bool is_normal() const;
};

/// Result of closing a set under products: the subgroup, plus for each member
/// one witnessing product over S (as a list of S-indices; empty = identity).
struct ClosureResult {
  Subgroup subgroup;
  std::vector<std::vector<int>> words;  // words[i] belongs to elements[i]
  int word_length(int element) const;
};

/// Least subgroup containing S (identity always included).
ClosureResult closure(const FiniteGroup& g, const std::vector<int>& gens);

/// Elements commuting with every member of S; S = all elements gives Z(G).
Subgroup centralizer(const FiniteGroup& g, const std::vector<int>& s);
Subgroup center(const FiniteGroup& g);

/// Smallest normal subgroup containing S.
Subgroup normal_closure(const FiniteGroup& g, const std::vector<int>& s);

/// Quotient group together with the projection element -> coset index.
struct QuotientResult {
  FiniteGroup group;
  std::vector<int> projection;  // size |G|
};
QuotientResult quotient(const FiniteGroup& g, const Subgroup& n);

/// Table of a subgroup as a group in its own right; second member maps
/// new indices back to parent elements.
struct SubgroupAsGroup {
  FiniteGroup group;
  std::vector<int> to_parent;
  std::vector<int> from_parent;  // parent elem -> index or -1
};
SubgroupAsGroup subgroup_as_group(const Subgroup& h);

/// Explicit isomorphism G -> H as an image vector, if one exists.
std::optional<std::vector<int>> find_isomorphism(const FiniteGroup& g,
                                                 const FiniteGroup& h);
bool is_isomorphic(const FiniteGroup& g, const FiniteGroup& h);

/// All automorphisms of g, each as an image vector. Order-stable.
std::vector<std::vector<int>> automorphisms(const FiniteGroup& g);

/// Greedy small generating set: repeatedly adjoins the least element outside
/// the closure so far. At most log2|G|+1 generators.
std::vector<int> small_generating_set(const FiniteGroup& g);

bool is_abelian(const FiniteGroup& g);
/// No proper nontrivial normal subgroup (exhaustive normal-closure scan).
bool is_simple(const FiniteGroup& g);

// --- standard constructions ------------------------------------------------

FiniteGroup cyclic_group(int n);
FiniteGroup dihedral_group(int n);    // order 2n, n >= 1
FiniteGroup dicyclic_group(int n);    // order 4n, n >= 1 (n=2: quaternion)
FiniteGroup symmetric_group(int n);   // order n!
FiniteGroup alternating_group(int n); // order n!/2
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);
/// Semidirect product N x| H; action[x] is an automorphism of N (image
/// vector), and action[x*y] must equal action[x] composed after action[y].
FiniteGroup semidirect_product(const FiniteGroup& n, const FiniteGroup& h,
                               const std::vector<std::vector<int>>& action);

/// Group generated by permutations of {0..degree-1}; elements become the
/// generated permutations, expanded to a dense table.
FiniteGroup group_from_permutations(int degree,
                                    const std::vector<std::vector<int>>& gens,
                                    std::string label = "");

/// Parses cycle notation "(1 2)(3 4)" into a permutation of {0..degree-1}
/// (input is 1-based).
std::vector<int> parse_cycles(const std::string& text, int degree);

}  // namespace fgdesc
