#pragma once

#include "twoorbit/rational.hpp"

#include <optional>
#include <vector>

namespace twoorbit {

template <class Scalar>
bool is_zero(const VectorX<Scalar>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i] != Scalar(0)) return false;
  return true;
}

template <class Scalar>
Scalar dot(const VectorX<Scalar>& a, const VectorX<Scalar>& b) {
  Scalar s(0);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a[i] != Scalar(0) && b[i] != Scalar(0)) s += a[i] * b[i];
  return s;
}

/// Reduced row echelon form by exact Gauss-Jordan elimination. Returns the
/// pivot column of each nonzero row; the rank is the size of the result.
template <class Scalar>
std::vector<Eigen::Index> rref_in_place(MatrixX<Scalar>& m) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index p = row;
    while (p < m.rows() && m(p, col) == Scalar(0)) ++p;
    if (p == m.rows()) continue;
    if (p != row) m.row(p).swap(m.row(row));
    const Scalar inv = Scalar(1) / m(row, col);
    for (Eigen::Index c = col; c < m.cols(); ++c)
      if (m(row, c) != Scalar(0)) m(row, c) *= inv;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == Scalar(0)) continue;
      const Scalar f = m(r, col);
      for (Eigen::Index c = col; c < m.cols(); ++c)
        if (m(row, c) != Scalar(0)) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class Scalar>
MatrixX<Scalar> rref(MatrixX<Scalar> m) {
  rref_in_place(m);
  return m;
}

template <class Scalar>
Eigen::Index rank(MatrixX<Scalar> m) {
  return static_cast<Eigen::Index>(rref_in_place(m).size());
}

/// Basis of {x : m x = 0}, one basis vector per column.
template <class Scalar>
MatrixX<Scalar> nullspace(MatrixX<Scalar> m) {
  const auto pivots = rref_in_place(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (auto p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<Eigen::Index> free_cols;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) free_cols.push_back(c);
  MatrixX<Scalar> basis = MatrixX<Scalar>::Zero(m.cols(), static_cast<Eigen::Index>(free_cols.size()));
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const Eigen::Index f = free_cols[k];
    basis(f, static_cast<Eigen::Index>(k)) = Scalar(1);
    for (std::size_t r = 0; r < pivots.size(); ++r)
      basis(pivots[r], static_cast<Eigen::Index>(k)) = -m(static_cast<Eigen::Index>(r), f);
  }
  return basis;
}

/// Some x with a x = b, or nullopt when the system is inconsistent.
template <class Scalar>
std::optional<VectorX<Scalar>> solve_exact(const MatrixX<Scalar>& a, const VectorX<Scalar>& b) {
  MatrixX<Scalar> aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  const auto pivots = rref_in_place(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  VectorX<Scalar> x = VectorX<Scalar>::Zero(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(static_cast<Eigen::Index>(r), a.cols());
  return x;
}

/// True when v is a linear combination of the columns of span.
template <class Scalar>
bool in_column_span(const MatrixX<Scalar>& span, const VectorX<Scalar>& v) {
  if (span.cols() == 0) return is_zero(v);
  return solve_exact(span, v).has_value();
}

/// Stack vectors as the columns of a matrix.
template <class Scalar>
MatrixX<Scalar> columns(const std::vector<VectorX<Scalar>>& vs, Eigen::Index rows) {
  MatrixX<Scalar> m(rows, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vs[i];
  return m;
}

/// v = c w for some scalar c (the zero vector is proportional to anything).
template <class Scalar>
bool proportional(const VectorX<Scalar>& v, const VectorX<Scalar>& w) {
  std::optional<Scalar> ratio;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (w[i] == Scalar(0)) {
      if (v[i] != Scalar(0)) return false;
      continue;
    }
    const Scalar r = v[i] / w[i];
    if (ratio && *ratio != r) return false;
    ratio = r;
  }
  return true;
}

}  // namespace twoorbit
