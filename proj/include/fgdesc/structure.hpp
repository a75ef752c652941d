#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "fgdesc/field.hpp"
#include "fgdesc/formula.hpp"
#include "fgdesc/group.hpp"

namespace fgdesc::fo {

/// Finite structure for a signature: a domain 0..size-1 with interpreted
/// functions, constants, and relations.
class Structure {
 public:
  virtual ~Structure() = default;
  virtual const Signature& sig() const = 0;
  virtual int size() const = 0;
  virtual int func(const std::string& sym, const std::vector<int>& args) const = 0;
  virtual bool rel(const std::string& sym, const std::vector<int>& args) const = 0;
  virtual int constant(const std::string& sym) const = 0;
};

/// Group (or monoid-reduct) structure over a dense table, optionally
/// expanded by a distinguished-subgroup predicate or automorphism function.
class GroupStructure : public Structure {
 public:
  explicit GroupStructure(const FiniteGroup& g, bool monoid_view = false);

  /// Expansion with a unary predicate holding on `members`.
  static GroupStructure with_predicate(const FiniteGroup& g, std::vector<int> members);
  /// Expansion with a unary function given by an automorphism image vector.
  static GroupStructure with_automorphism(const FiniteGroup& g, std::vector<int> aut);

  const Signature& sig() const override;
  int size() const override { return group_->order(); }
  int func(const std::string& sym, const std::vector<int>& args) const override;
  bool rel(const std::string& sym, const std::vector<int>& args) const override;
  int constant(const std::string& sym) const override;

  const FiniteGroup& group() const { return *group_; }

 private:
  const FiniteGroup* group_;
  bool monoid_view_ = false;
  std::optional<std::vector<char>> pred_;
  std::optional<std::vector<int>> aut_;
};

/// Ring-signature structure over explicit addition/multiplication tables,
/// optionally with a distinguished endomorphism sigma.
class RingStructure : public Structure {
 public:
  RingStructure(int size, std::vector<int> add_table, std::vector<int> mul_table,
                int zero, int one);

  static RingStructure from_field(const FiniteField& f);
  static RingStructure from_field_with_sigma(const FiniteField& f, int frobenius_power);
  static RingStructure integers_mod(int m);

  void set_sigma(std::vector<int> sigma);

  const Signature& sig() const override;
  int size() const override { return size_; }
  int func(const std::string& sym, const std::vector<int>& args) const override;
  bool rel(const std::string& sym, const std::vector<int>& args) const override;
  int constant(const std::string& sym) const override;

 private:
  int size_;
  std::vector<int> add_, mul_;
  int zero_, one_;
  std::optional<std::vector<int>> sigma_;
};

}  // namespace fgdesc::fo
