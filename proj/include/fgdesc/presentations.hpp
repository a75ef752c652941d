#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fgdesc/group.hpp"

namespace fgdesc {

/// Word over abstract generators: entries +(i+1) / -(i+1) mean generator i
/// or its inverse. Words are kept freely reduced.
using Word = std::vector<int>;

Word parse_word(const std::string& text, const std::vector<std::string>& gens);
std::string render_word(const Word& w, const std::vector<std::string>& gens);
Word free_reduce(Word w);
Word word_inverse(const Word& w);
Word word_concat(const Word& a, const Word& b);
int evaluate_word(const FiniteGroup& g, const Word& w, const std::vector<int>& images);

/// Finite presentation <generators | relators> with the length convention
/// k + sum |r_j|.
struct PresentationSpec {
  std::string name;
  int order = 0;  // order of the presented group, when known
  std::vector<std::string> generators;
  std::vector<Word> relators;
  std::string source;
  int lie_rank = 0;  // 0 when not applicable
  int field_q = 0;   // 0 when not applicable

  int length() const;
};

PresentationSpec cyclic_presentation(int p);
PresentationSpec dihedral_presentation(int n);   // order 2n
PresentationSpec dicyclic_presentation(int n);   // order 4n

/// First tuple (in index order) whose entries satisfy every relator and
/// generate g; this is the "pres presents g" check used before building
/// description formulas.
std::optional<std::vector<int>> find_generator_images(const FiniteGroup& g,
                                                      const PresentationSpec& pres);

/// Shipped presentation entries (data/presentations.toml), keyed by name and
/// queryable by order. Loaded once per process.
class PresentationCatalog {
 public:
  static const PresentationCatalog& shipped();
  explicit PresentationCatalog(std::vector<PresentationSpec> entries);

  const std::vector<PresentationSpec>& entries() const { return entries_; }
  const PresentationSpec* by_name(const std::string& name) const;
  /// Entries whose recorded order matches; ascending name order.
  std::vector<const PresentationSpec*> by_order(int order) const;
  /// Max generator count over shipped entries (the catalog generator bound).
  int max_generators() const;

 private:
  std::vector<PresentationSpec> entries_;
};

}  // namespace fgdesc
