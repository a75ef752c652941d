#include "fgdesc/structure.hpp"

#include <stdexcept>

namespace fgdesc::fo {

GroupStructure::GroupStructure(const FiniteGroup& g, bool monoid_view)
    : group_(&g), monoid_view_(monoid_view) {}

GroupStructure GroupStructure::with_predicate(const FiniteGroup& g,
                                              std::vector<int> members) {
  GroupStructure s(g);
  std::vector<char> mask(g.order(), 0);
  for (int e : members) mask.at(e) = 1;
  s.pred_ = std::move(mask);
  return s;
}

GroupStructure GroupStructure::with_automorphism(const FiniteGroup& g,
                                                 std::vector<int> aut) {
  GroupStructure s(g);
  if (static_cast<int>(aut.size()) != g.order())
    throw std::invalid_argument("automorphism table has wrong size");
  s.aut_ = std::move(aut);
  return s;
}

const Signature& GroupStructure::sig() const {
  if (pred_) return group_pred_sig();
  if (aut_) return group_aut_sig();
  return monoid_view_ ? monoid_sig() : group_sig();
}

int GroupStructure::func(const std::string& sym, const std::vector<int>& args) const {
  if (sym == "mul") return group_->mul(args[0], args[1]);
  if (sym == "inv" && !monoid_view_) return group_->inv(args[0]);
  if (sym == "aut" && aut_) return (*aut_)[args[0]];
  throw std::invalid_argument("group structure: unknown function " + sym);
}

bool GroupStructure::rel(const std::string& sym, const std::vector<int>& args) const {
  if (sym == "P" && pred_) return (*pred_)[args[0]];
  throw std::invalid_argument("group structure: unknown relation " + sym);
}

int GroupStructure::constant(const std::string& sym) const {
  if (sym == "e") return group_->identity();
  throw std::invalid_argument("group structure: unknown constant " + sym);
}

RingStructure::RingStructure(int size, std::vector<int> add_table,
                             std::vector<int> mul_table, int zero, int one)
    : size_(size), add_(std::move(add_table)), mul_(std::move(mul_table)),
      zero_(zero), one_(one) {
  if (static_cast<int>(add_.size()) != size * size ||
      static_cast<int>(mul_.size()) != size * size)
    throw std::invalid_argument("ring tables have wrong size");
}

RingStructure RingStructure::from_field(const FiniteField& f) {
  std::vector<int> add(f.q() * f.q()), mul(f.q() * f.q());
  for (int a = 0; a < f.q(); ++a)
    for (int b = 0; b < f.q(); ++b) {
      add[a * f.q() + b] = f.add(a, b);
      mul[a * f.q() + b] = f.mul(a, b);
    }
  return RingStructure(f.q(), std::move(add), std::move(mul), f.zero(), f.one());
}

RingStructure RingStructure::from_field_with_sigma(const FiniteField& f,
                                                   int frobenius_power) {
  RingStructure s = from_field(f);
  std::vector<int> sigma(f.q());
  for (int a = 0; a < f.q(); ++a) {
    int x = a;
    for (int i = 0; i < frobenius_power; ++i) x = f.frobenius(x);
    sigma[a] = x;
  }
  s.set_sigma(std::move(sigma));
  return s;
}

RingStructure RingStructure::integers_mod(int m) {
  std::vector<int> add(m * m), mul(m * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      add[a * m + b] = (a + b) % m;
      mul[a * m + b] = (a * b) % m;
    }
  return RingStructure(m, std::move(add), std::move(mul), 0, 1 % m);
}

void RingStructure::set_sigma(std::vector<int> sigma) {
  if (static_cast<int>(sigma.size()) != size_)
    throw std::invalid_argument("sigma table has wrong size");
  sigma_ = std::move(sigma);
}

const Signature& RingStructure::sig() const {
  return sigma_ ? diff_ring_sig() : ring_sig();
}

int RingStructure::func(const std::string& sym, const std::vector<int>& args) const {
  if (sym == "add") return add_[args[0] * size_ + args[1]];
  if (sym == "mul") return mul_[args[0] * size_ + args[1]];
  if (sym == "sigma" && sigma_) return (*sigma_)[args[0]];
  throw std::invalid_argument("ring structure: unknown function " + sym);
}

bool RingStructure::rel(const std::string& sym, const std::vector<int>&) const {
  throw std::invalid_argument("ring structure: unknown relation " + sym);
}

int RingStructure::constant(const std::string& sym) const {
  if (sym == "0") return zero_;
  if (sym == "1") return one_;
  throw std::invalid_argument("ring structure: unknown constant " + sym);
}

}  // namespace fgdesc::fo
