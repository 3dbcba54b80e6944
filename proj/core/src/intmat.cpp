#include "stonemod/intmat.hpp"

#include <algorithm>
#include <sstream>

namespace stonemod {

IntMat IntMat::from_rows(const std::vector<std::vector<Int>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  IntMat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c)
      throw std::invalid_argument("IntMat::from_rows: ragged rows");
    for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

IntMat IntMat::identity(int n) {
  IntMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMat IntMat::diagonal(const std::vector<Int>& d) {
  int n = static_cast<int>(d.size());
  IntMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = d[i];
  return m;
}

IntMat IntMat::column(const std::vector<Int>& v) {
  IntMat m(static_cast<int>(v.size()), 1);
  for (int i = 0; i < m.rows(); ++i) m.at(i, 0) = v[i];
  return m;
}

std::vector<Int> IntMat::col(int c) const {
  std::vector<Int> v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = at(i, c);
  return v;
}

std::vector<Int> IntMat::row(int r) const {
  std::vector<Int> v(cols_);
  for (int j = 0; j < cols_; ++j) v[j] = at(r, j);
  return v;
}

void IntMat::set_col(int c, const std::vector<Int>& v) {
  if (static_cast<int>(v.size()) != rows_)
    throw std::invalid_argument("IntMat::set_col: size mismatch");
  for (int i = 0; i < rows_; ++i) at(i, c) = v[i];
}

IntMat IntMat::transpose() const {
  IntMat t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

std::string IntMat::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j);
  }
  os << "]";
  return os.str();
}

IntMat mat_mul(const IntMat& a, const IntMat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: shape mismatch");
  IntMat r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      Int aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols(); ++j) {
        if (b.at(k, j) == 0) continue;
        r.at(i, j) = checked_add(r.at(i, j), checked_mul(aik, b.at(k, j)));
      }
    }
  return r;
}

IntMat mat_add(const IntMat& a, const IntMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("mat_add: shape mismatch");
  IntMat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = checked_add(a.at(i, j), b.at(i, j));
  return r;
}

IntMat mat_neg(const IntMat& a) { return mat_scale(-1, a); }

IntMat mat_scale(Int c, const IntMat& a) {
  IntMat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = checked_mul(c, a.at(i, j));
  return r;
}

std::vector<Int> mat_apply(const IntMat& a, const std::vector<Int>& x) {
  if (static_cast<int>(x.size()) != a.cols())
    throw std::invalid_argument("mat_apply: size mismatch");
  std::vector<Int> y(a.rows(), 0);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a.at(i, j) != 0 && x[j] != 0)
        y[i] = checked_add(y[i], checked_mul(a.at(i, j), x[j]));
  return y;
}

IntMat mat_hcat(const IntMat& a, const IntMat& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("mat_hcat: row mismatch");
  IntMat r(a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols(); ++j) r.at(i, a.cols() + j) = b.at(i, j);
  }
  return r;
}

Int bareiss_det(const IntMat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("bareiss_det: not square");
  int n = m.rows();
  if (n == 0) return 1;
  std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = m.at(i, j);
  __int128 prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i][k] != 0) { p = i; break; }
      if (p < 0) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  __int128 det = a[n - 1][n - 1] * sign;
  Int out = static_cast<Int>(det);
  if (static_cast<__int128>(out) != det) throw_overflow("bareiss_det");
  return out;
}

namespace {

// Elementary operations on the working matrix d, mirrored into the transform
// matrices so that u * m * v = d stays invariant, with u_inv, v_inv the exact
// inverses of u and v.
struct SNFWork {
  IntMat d, u, v, u_inv, v_inv;

  void row_swap(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < d.cols(); ++c) std::swap(d.at(i, c), d.at(j, c));
    for (int c = 0; c < u.cols(); ++c) std::swap(u.at(i, c), u.at(j, c));
    for (int r = 0; r < u_inv.rows(); ++r) std::swap(u_inv.at(r, i), u_inv.at(r, j));
  }
  void col_swap(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < d.rows(); ++r) std::swap(d.at(r, i), d.at(r, j));
    for (int r = 0; r < v.rows(); ++r) std::swap(v.at(r, i), v.at(r, j));
    for (int c = 0; c < v_inv.cols(); ++c) std::swap(v_inv.at(i, c), v_inv.at(j, c));
  }
  // row[i] += q * row[j]
  void row_add(int i, int j, Int q) {
    if (q == 0) return;
    for (int c = 0; c < d.cols(); ++c)
      d.at(i, c) = checked_add(d.at(i, c), checked_mul(q, d.at(j, c)));
    for (int c = 0; c < u.cols(); ++c)
      u.at(i, c) = checked_add(u.at(i, c), checked_mul(q, u.at(j, c)));
    for (int r = 0; r < u_inv.rows(); ++r)
      u_inv.at(r, j) = checked_add(u_inv.at(r, j), checked_mul(-q, u_inv.at(r, i)));
  }
  // col[i] += q * col[j]
  void col_add(int i, int j, Int q) {
    if (q == 0) return;
    for (int r = 0; r < d.rows(); ++r)
      d.at(r, i) = checked_add(d.at(r, i), checked_mul(q, d.at(r, j)));
    for (int r = 0; r < v.rows(); ++r)
      v.at(r, i) = checked_add(v.at(r, i), checked_mul(q, v.at(r, j)));
    for (int c = 0; c < v_inv.cols(); ++c)
      v_inv.at(j, c) = checked_add(v_inv.at(j, c), checked_mul(-q, v_inv.at(i, c)));
  }
  void row_negate(int i) {
    for (int c = 0; c < d.cols(); ++c) d.at(i, c) = -d.at(i, c);
    for (int c = 0; c < u.cols(); ++c) u.at(i, c) = -u.at(i, c);
    for (int r = 0; r < u_inv.rows(); ++r) u_inv.at(r, i) = -u_inv.at(r, i);
  }
};

}  // namespace

SNFDecomposition smith_normal_form(const IntMat& m) {
  int rows = m.rows(), cols = m.cols();
  SNFWork w{m, IntMat::identity(rows), IntMat::identity(cols),
            IntMat::identity(rows), IntMat::identity(cols)};
  int lim = std::min(rows, cols);
  std::vector<int> rnnz(rows, 0), cnnz(cols, 0);
  int t = 0;
  for (; t < lim; ++t) {
    // Find a pivot of minimal absolute value in the remaining block, breaking
    // ties by Markowitz fill count (row nnz - 1) * (col nnz - 1).  Minimal
    // value keeps the elimination quotients small; minimal fill keeps sparse
    // structured inputs from densifying, which is what lets entries (and the
    // accumulated transforms) blow up.
    for (;;) {
      Int best = 0;
      for (int i = t; i < rows; ++i) {
        rnnz[i] = 0;
        for (int j = t; j < cols; ++j) {
          Int x = w.d.at(i, j);
          if (x == 0) continue;
          ++rnnz[i];
          Int ax = x < 0 ? -x : x;
          if (best == 0 || ax < best) best = ax;
        }
      }
      if (best == 0) goto done;  // remaining block is zero
      for (int j = t; j < cols; ++j) {
        cnnz[j] = 0;
        for (int i = t; i < rows; ++i)
          if (w.d.at(i, j) != 0) ++cnnz[j];
      }
      int pi = -1, pj = -1;
      long long fill = 0;
      for (int i = t; i < rows; ++i)
        for (int j = t; j < cols; ++j) {
          Int x = w.d.at(i, j);
          if (x != best && x != -best) continue;
          long long f = static_cast<long long>(rnnz[i] - 1) * (cnnz[j] - 1);
          if (pi < 0 || f < fill) { pi = i; pj = j; fill = f; }
        }
      w.row_swap(t, pi);
      w.col_swap(t, pj);
      bool cleared = true;
      for (int i = t + 1; i < rows; ++i) {
        if (w.d.at(i, t) == 0) continue;
        Int q = w.d.at(i, t) / w.d.at(t, t);
        w.row_add(i, t, -q);
        if (w.d.at(i, t) != 0) cleared = false;
      }
      for (int j = t + 1; j < cols; ++j) {
        if (w.d.at(t, j) == 0) continue;
        Int q = w.d.at(t, j) / w.d.at(t, t);
        w.col_add(j, t, -q);
        if (w.d.at(t, j) != 0) cleared = false;
      }
      if (!cleared) continue;  // smaller remainders exist; repick pivot
      // Divisibility fix-up: the pivot must divide every entry of the
      // remaining block for the diagonal to form a chain.
      Int p = w.d.at(t, t);
      int bi = -1;
      for (int i = t + 1; i < rows && bi < 0; ++i)
        for (int j = t + 1; j < cols; ++j)
          if (w.d.at(i, j) % p != 0) { bi = i; break; }
      if (bi >= 0) {
        w.row_add(t, bi, 1);
        continue;
      }
      break;
    }
    if (w.d.at(t, t) < 0) w.row_negate(t);
  }
done:
  SNFDecomposition out{std::move(w.u), std::move(w.d), std::move(w.v),
                       std::move(w.u_inv), std::move(w.v_inv), 0};
  for (int i = 0; i < lim; ++i)
    if (out.d.at(i, i) != 0) ++out.rank;
  return out;
}

std::optional<std::vector<Int>> solve_integer(const SNFDecomposition& snf,
                                              const std::vector<Int>& b) {
  const IntMat& d = snf.d;
  int rows = d.rows(), cols = d.cols();
  if (static_cast<int>(b.size()) != rows)
    throw std::invalid_argument("solve_integer: rhs size mismatch");
  std::vector<Int> ub = mat_apply(snf.u, b);
  std::vector<Int> y(cols, 0);
  int lim = std::min(rows, cols);
  for (int i = 0; i < rows; ++i) {
    Int di = i < lim ? d.at(i, i) : 0;
    if (di == 0) {
      if (ub[i] != 0) return std::nullopt;
    } else {
      if (ub[i] % di != 0) return std::nullopt;
      y[i] = ub[i] / di;
    }
  }
  return mat_apply(snf.v, y);
}

std::optional<std::vector<Int>> solve_integer(const IntMat& m, const std::vector<Int>& b) {
  return solve_integer(smith_normal_form(m), b);
}

bool in_column_span(const IntMat& m, const std::vector<Int>& x) {
  return solve_integer(m, x).has_value();
}

IntMat kernel_basis(const IntMat& m) {
  SNFDecomposition snf = smith_normal_form(m);
  int cols = m.cols();
  std::vector<int> free_cols;
  for (int j = 0; j < cols; ++j) {
    Int dj = j < std::min(m.rows(), cols) ? snf.d.at(j, j) : 0;
    if (dj == 0) free_cols.push_back(j);
  }
  IntMat k(cols, static_cast<int>(free_cols.size()));
  for (int c = 0; c < static_cast<int>(free_cols.size()); ++c)
    for (int r = 0; r < cols; ++r) k.at(r, c) = snf.v.at(r, free_cols[c]);
  return k;
}

}  // namespace stonemod
