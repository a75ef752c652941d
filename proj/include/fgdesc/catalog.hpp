#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fgdesc/group.hpp"

namespace fgdesc {

/// Complete list of the groups of one order, up to isomorphism.
struct GroupCatalog {
  int order = 0;
  std::vector<FiniteGroup> groups;  // pairwise non-isomorphic
  bool complete = false;
};

/// All groups of order n up to isomorphism. Orders up to 16 are enumerated by
/// Cayley-table backtracking with isomorphism rejection; orders 17..24 come
/// from curated constructions (cyclic, direct and semidirect products) whose
/// completeness counts are validated against data/group_counts.toml.
/// Results are cached per process.
std::shared_ptr<const GroupCatalog> enumerate_groups(int n);

/// The backtracking enumerator itself (no curated data, no cache). Exposed
/// so tests can cross-check it; practical up to n = 16.
std::vector<FiniteGroup> enumerate_groups_backtracking(int n);

/// Row-major cell-order enumerator with no symmetry breaking beyond the
/// normalized identity row/column. Much slower; used as an independent
/// oracle in tests for n <= 8.
std::vector<FiniteGroup> enumerate_groups_naive(int n);

/// Directory holding the shipped data files (group_counts.toml etc.).
/// Defaults to the build-time source path; override with FGDESC_DATA_DIR.
std::string data_dir();

/// All homomorphisms H -> Aut(N), each as a per-element automorphism table
/// (action[x] is an image vector on N). Order-stable.
std::vector<std::vector<std::vector<int>>> automorphism_actions(
    const FiniteGroup& n, const FiniteGroup& h);

}  // namespace fgdesc
