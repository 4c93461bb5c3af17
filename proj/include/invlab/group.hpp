#pragma once
// Finite constant groups as verified multiplication tables, with the
// subgroup / coset / quotient bookkeeping the action layer needs.
// Element ids are table indices; all enumerations are deterministic.

#include <string>
#include <vector>

namespace invlab {

struct GroupQuotient;

class ConstantGroup {
 public:
  ConstantGroup() = default;

  static ConstantGroup cyclic(int n);
  static ConstantGroup klein_four();
  static ConstantGroup symmetric(int n);  // n <= 5; ids in lex order, id 0
  static ConstantGroup product(const ConstantGroup& a, const ConstantGroup& b);
  // Table is verified: closure, associativity, identity, inverses.
  static ConstantGroup from_table(std::string name,
                                  std::vector<std::string> names,
                                  std::vector<std::vector<int>> table,
                                  int identity);

  bool valid() const { return order_ > 0; }
  int order() const { return order_; }
  int identity() const { return id_; }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inv_[a]; }
  int pow(int a, int k) const;
  int element_order(int a) const;
  bool is_abelian() const;
  const std::string& name(int a) const { return names_[a]; }
  int by_name(const std::string& n) const;  // -1 when absent
  const std::string& describe() const { return desc_; }

  // Closure of gens under products/inverses, returned sorted.
  std::vector<int> subgroup(const std::vector<int>& gens) const;
  bool is_subgroup(const std::vector<int>& sub) const;
  bool is_normal(const std::vector<int>& sub) const;
  // Left cosets gH.  Coset 0 is H itself; the rest appear in order of their
  // smallest element.  Each coset is sorted.
  std::vector<std::vector<int>> cosets(const std::vector<int>& sub) const;
  // Representatives: identity for coset 0, smallest element otherwise.
  std::vector<int> coset_reps(const std::vector<int>& sub) const;
  // Index of the coset containing g (relative to cosets(sub)).
  int coset_of(int g, const std::vector<int>& sub) const;

  GroupQuotient quotient(const std::vector<int>& sub) const;  // sub normal

 private:
  int order_ = 0;
  int id_ = 0;
  std::vector<std::string> names_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inv_;
  std::string desc_;
};

struct GroupQuotient {
  ConstantGroup group;
  std::vector<int> proj;  // element id -> quotient element id
};

}  // namespace invlab
