#pragma once

// Exact integer matrices and Smith normal form.
//
// Everything downstream (finite abelian groups, homomorphism kernels, duality,
// cohomology) reduces to integer linear algebra over Z.  All arithmetic is
// exact; intermediate products are checked for 64-bit overflow and throw
// rather than silently wrapping.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stonemod {

using Int = std::int64_t;

[[noreturn]] inline void throw_overflow(const char* where) {
  throw std::overflow_error(std::string("integer overflow in ") + where);
}

inline Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw_overflow("checked_add");
  return r;
}

inline Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw_overflow("checked_mul");
  return r;
}

// Mathematical mod: result in [0, m) for m > 0.
inline Int pos_mod(Int a, Int m) {
  if (m <= 0) throw std::invalid_argument("pos_mod: modulus must be positive");
  Int r = a % m;
  return r < 0 ? r + m : r;
}

inline Int gcd_ll(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline Int lcm_ll(Int a, Int b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / gcd_ll(a, b), b);
}

// Dense row-major integer matrix.  Zero-dimensional shapes (0 x n, n x 0) are
// legal and show up constantly: maps to and from the trivial group.
class IntMat {
 public:
  IntMat() : rows_(0), cols_(0) {}
  IntMat(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("IntMat: negative shape");
  }
  IntMat(int rows, int cols, std::vector<Int> data)
      : rows_(rows), cols_(cols), a_(std::move(data)) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("IntMat: negative shape");
    if (a_.size() != static_cast<size_t>(rows) * cols)
      throw std::invalid_argument("IntMat: data size does not match shape");
  }
  // Rows-of-rows constructor, mostly for tests and literals.
  static IntMat from_rows(const std::vector<std::vector<Int>>& rows);
  static IntMat identity(int n);
  static IntMat diagonal(const std::vector<Int>& d);
  static IntMat column(const std::vector<Int>& v);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Int& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  Int at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

  std::vector<Int> col(int c) const;
  std::vector<Int> row(int r) const;
  void set_col(int c, const std::vector<Int>& v);

  IntMat transpose() const;
  bool operator==(const IntMat& o) const = default;

  std::string to_string() const;

 private:
  int rows_, cols_;
  std::vector<Int> a_;
};

IntMat mat_mul(const IntMat& a, const IntMat& b);
IntMat mat_add(const IntMat& a, const IntMat& b);
IntMat mat_neg(const IntMat& a);
IntMat mat_scale(Int c, const IntMat& a);
std::vector<Int> mat_apply(const IntMat& a, const std::vector<Int>& x);
// Horizontal concatenation [a | b].
IntMat mat_hcat(const IntMat& a, const IntMat& b);

// Exact determinant via fraction-free (Bareiss) elimination.
Int bareiss_det(const IntMat& m);

// Smith normal form: u * m * v = d with u, v unimodular and d diagonal with
// d[0][0] | d[1][1] | ... , all diagonal entries >= 0.  u_inv and v_inv are
// the exact inverses of u and v (also unimodular), tracked during reduction.
struct SNFDecomposition {
  IntMat u, d, v;
  IntMat u_inv, v_inv;
  int rank = 0;  // number of nonzero diagonal entries
};

SNFDecomposition smith_normal_form(const IntMat& m);

// Solve m * x = b over the integers.  Returns a particular solution (the one
// determined by the SNF of m with free coordinates set to zero), or nullopt
// if no integer solution exists.  Deterministic for fixed input.
std::optional<std::vector<Int>> solve_integer(const IntMat& m, const std::vector<Int>& b);
std::optional<std::vector<Int>> solve_integer(const SNFDecomposition& snf,
                                              const std::vector<Int>& b);

// Is x in the column span (integer lattice) generated by the columns of m?
bool in_column_span(const IntMat& m, const std::vector<Int>& x);

// Basis for the integer kernel {x : m * x = 0}, as matrix columns.
IntMat kernel_basis(const IntMat& m);

}  // namespace stonemod
