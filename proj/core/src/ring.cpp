#include "stonemod/ring.hpp"

#include <stdexcept>

namespace stonemod {

namespace {
constexpr Int kRingOrderCap = 4096;
}

FiniteRing::FiniteRing(FinAbGroup additive,
                       std::vector<std::vector<GroupElem>> table, GroupElem one)
    : add_(std::move(additive)), table_(std::move(table)), one_(std::move(one)) {
  if (add_.order() > kRingOrderCap)
    throw std::invalid_argument("ring order exceeds the 4096 cap");
  const int k = add_.rank();
  if (static_cast<int>(table_.size()) != k)
    throw std::invalid_argument("multiplication table has wrong height");
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != k)
      throw std::invalid_argument("multiplication table has wrong width");
    for (const auto& e : row)
      if (!add_.is_valid(e))
        throw std::invalid_argument("multiplication table entry is not a group element");
  }
  if (!add_.is_valid(one_))
    throw std::invalid_argument("ring unity is not a group element");

  const auto& d = add_.invariant_factors();
  // Bilinear extension is well defined iff d_i and d_j both kill e_i * e_j.
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (!add_.is_zero(add_.scalar_mul(d[i], table_[i][j])) ||
          !add_.is_zero(add_.scalar_mul(d[j], table_[i][j])))
        throw std::invalid_argument(
            "multiplication is not well defined on residues at generators " +
            std::to_string(i) + "," + std::to_string(j));
    }
  // Associativity on generator triples; both sides of (xy)z = x(yz) are
  // trilinear, so this is equivalent to full associativity.
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l) {
        GroupElem gen_l{std::vector<Int>(k, 0)};
        gen_l.residues[l] = 1;
        GroupElem gen_i{std::vector<Int>(k, 0)};
        gen_i.residues[i] = 1;
        if (mul(table_[i][j], gen_l) != mul(gen_i, table_[j][l]))
          throw std::invalid_argument("ring multiplication is not associative");
      }
  // Unitality on generators; x -> 1*x and x -> x*1 are additive.
  for (int i = 0; i < k; ++i) {
    GroupElem gen{std::vector<Int>(k, 0)};
    gen.residues[i] = 1;
    if (mul(one_, gen) != gen || mul(gen, one_) != gen)
      throw std::invalid_argument("ring unity does not act as identity");
  }
}

GroupElem FiniteRing::mul(const GroupElem& r, const GroupElem& s) const {
  if (!add_.is_valid(r) || !add_.is_valid(s))
    throw std::invalid_argument("ring multiplication of invalid elements");
  GroupElem acc = add_.zero();
  const int k = add_.rank();
  for (int i = 0; i < k; ++i) {
    if (r.residues[i] == 0) continue;
    for (int j = 0; j < k; ++j) {
      if (s.residues[j] == 0) continue;
      acc = add_.add(acc, add_.scalar_mul(checked_mul(r.residues[i], s.residues[j]),
                                          table_[i][j]));
    }
  }
  return acc;
}

bool FiniteRing::is_commutative() const {
  const int k = add_.rank();
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (table_[i][j] != table_[j][i]) return false;
  return true;
}

AbHom FiniteRing::left_mult_gen(int i) const {
  const int k = add_.rank();
  IntMat m(k, k);
  for (int j = 0; j < k; ++j) m.set_col(j, table_[i][j].residues);
  return AbHom(add_, add_, m);
}

AbHom FiniteRing::right_mult_gen(int i) const {
  const int k = add_.rank();
  IntMat m(k, k);
  for (int j = 0; j < k; ++j) m.set_col(j, table_[j][i].residues);
  return AbHom(add_, add_, m);
}

AbHom FiniteRing::left_mult(const GroupElem& r) const {
  AbHom acc = AbHom::zero(add_, add_);
  for (int i = 0; i < add_.rank(); ++i)
    if (r.residues[i] != 0)
      acc = hom_add(acc, hom_scale(r.residues[i], left_mult_gen(i)));
  return acc;
}

AbHom FiniteRing::right_mult(const GroupElem& r) const {
  AbHom acc = AbHom::zero(add_, add_);
  for (int i = 0; i < add_.rank(); ++i)
    if (r.residues[i] != 0)
      acc = hom_add(acc, hom_scale(r.residues[i], right_mult_gen(i)));
  return acc;
}

FiniteRing cyclic_ring(Int m) {
  if (m < 2) throw std::invalid_argument("cyclic ring needs modulus >= 2");
  FinAbGroup add = FinAbGroup::cyclic(m);
  std::vector<std::vector<GroupElem>> table{{GroupElem{{1}}}};
  FiniteRing r(add, table, GroupElem{{1}});
  r.set_group_info(GroupRingInfo{m, FinGroup::trivial()});
  return r;
}

FiniteRing group_ring(Int m, const FinGroup& g) {
  if (m < 2) throw std::invalid_argument("group ring needs modulus >= 2");
  const int n = g.order();
  FinAbGroup add{std::vector<Int>(n, m)};
  std::vector<std::vector<GroupElem>> table(
      n, std::vector<GroupElem>(n, add.zero()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) table[i][j].residues[g.mul(i, j)] = 1;
  GroupElem one = add.zero();
  one.residues[g.identity()] = 1;
  FiniteRing r(add, std::move(table), one);
  r.set_group_info(GroupRingInfo{m, g});
  return r;
}

}  // namespace stonemod
