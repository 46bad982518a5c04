#pragma once

// Dense exact linear algebra over the fraction field Q(q): row reduction with
// a configurable pivot-column preference, rank, kernels, solving, inversion.

#include <numeric>
#include <optional>
#include <vector>

#include "qplane/scalar.hpp"

namespace qplane {

class QMatrix {
 public:
  QMatrix() : rows_(0), cols_(0) {}
  QMatrix(size_t rows, size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, QScalar(0)) {}

  static QMatrix identity(size_t n) {
    QMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = QScalar(1);
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  QScalar& at(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const QScalar& at(size_t i, size_t j) const { return a_[i * cols_ + j]; }

  bool isZero() const {
    for (const auto& x : a_)
      if (!x.isZero()) return false;
    return true;
  }

  friend QMatrix operator+(const QMatrix& a, const QMatrix& b) {
    a.requireSameShape(b);
    QMatrix r = a;
    for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += b.a_[i];
    return r;
  }
  friend QMatrix operator-(const QMatrix& a, const QMatrix& b) {
    a.requireSameShape(b);
    QMatrix r = a;
    for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= b.a_[i];
    return r;
  }
  friend QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("QMatrix: shape mismatch");
    QMatrix r(a.rows_, b.cols_);
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t k = 0; k < a.cols_; ++k) {
        if (a.at(i, k).isZero()) continue;
        for (size_t j = 0; j < b.cols_; ++j)
          r.at(i, j) += a.at(i, k) * b.at(k, j);
      }
    return r;
  }
  friend QMatrix operator*(const QScalar& s, const QMatrix& m) {
    QMatrix r = m;
    for (auto& x : r.a_) x *= s;
    return r;
  }
  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  friend bool operator!=(const QMatrix& a, const QMatrix& b) { return !(a == b); }

  QMatrix transpose() const {
    QMatrix r(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  /// Reduced row echelon data; pivot columns are searched following a given
  /// column order, first nonzero entry wins, so the result is deterministic.
  struct Echelon;

  Echelon echelon(std::vector<size_t> colOrder = {}) const;
  size_t rank() const;

  /// Basis of the right kernel {v : A v = 0}, one vector per free column.
  std::vector<std::vector<QScalar>> nullspaceBasis(
      std::vector<size_t> colOrder = {}) const;

  /// Basis of the left kernel {v : v A = 0}.
  std::vector<std::vector<QScalar>> leftNullspaceBasis() const {
    return transpose().nullspaceBasis();
  }

  /// One exact solution of A x = b (free variables set to zero), or nullopt
  /// when the system is inconsistent.
  std::optional<std::vector<QScalar>> solve(const std::vector<QScalar>& b) const;

  std::optional<QMatrix> inverse() const;

 private:
  void swapRows(size_t i, size_t j) {
    if (i == j) return;
    for (size_t c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
  }
  void requireSameShape(const QMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("QMatrix: shape mismatch");
  }

  size_t rows_, cols_;
  std::vector<QScalar> a_;
};

struct QMatrix::Echelon {
  QMatrix rref;
  std::vector<int> pivotRowOfCol;  // -1 when the column is free
  std::vector<size_t> pivotCols;   // in column-order sequence
  size_t rank = 0;
};

inline QMatrix::Echelon QMatrix::echelon(std::vector<size_t> colOrder) const {
  if (colOrder.empty()) {
    colOrder.resize(cols_);
    std::iota(colOrder.begin(), colOrder.end(), size_t{0});
  }
  Echelon e;
  e.rref = *this;
  e.pivotRowOfCol.assign(cols_, -1);
  size_t row = 0;
  for (size_t c : colOrder) {
    if (row >= rows_) break;
    size_t p = row;
    while (p < rows_ && e.rref.at(p, c).isZero()) ++p;
    if (p == rows_) continue;
    e.rref.swapRows(row, p);
    QScalar inv = e.rref.at(row, c).inverse();
    for (size_t j = 0; j < cols_; ++j) e.rref.at(row, j) *= inv;
    for (size_t i = 0; i < rows_; ++i) {
      if (i == row || e.rref.at(i, c).isZero()) continue;
      QScalar f = e.rref.at(i, c);
      for (size_t j = 0; j < cols_; ++j)
        e.rref.at(i, j) -= f * e.rref.at(row, j);
    }
    e.pivotRowOfCol[c] = static_cast<int>(row);
    e.pivotCols.push_back(c);
    ++row;
  }
  e.rank = row;
  return e;
}

inline size_t QMatrix::rank() const { return echelon().rank; }

inline std::vector<std::vector<QScalar>> QMatrix::nullspaceBasis(
    std::vector<size_t> colOrder) const {
  Echelon e = echelon(std::move(colOrder));
  std::vector<std::vector<QScalar>> basis;
  for (size_t f = 0; f < cols_; ++f) {
    if (e.pivotRowOfCol[f] >= 0) continue;
    std::vector<QScalar> v(cols_, QScalar(0));
    v[f] = QScalar(1);
    for (size_t c = 0; c < cols_; ++c) {
      int r = e.pivotRowOfCol[c];
      if (r >= 0) v[c] = -e.rref.at(static_cast<size_t>(r), f);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::optional<std::vector<QScalar>> QMatrix::solve(
    const std::vector<QScalar>& b) const {
  if (b.size() != rows_) throw std::invalid_argument("QMatrix: rhs size");
  QMatrix aug(rows_, cols_ + 1);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_) = b[i];
  }
  std::vector<size_t> order(cols_);
  std::iota(order.begin(), order.end(), size_t{0});
  Echelon e = aug.echelon(order);  // never pivots on the rhs column
  for (size_t i = 0; i < rows_; ++i) {
    bool lhsZero = true;
    for (size_t j = 0; j < cols_ && lhsZero; ++j)
      lhsZero = e.rref.at(i, j).isZero();
    if (lhsZero && !e.rref.at(i, cols_).isZero()) return std::nullopt;
  }
  std::vector<QScalar> x(cols_, QScalar(0));
  for (size_t c = 0; c < cols_; ++c) {
    int r = e.pivotRowOfCol[c];
    if (r >= 0) x[c] = e.rref.at(static_cast<size_t>(r), cols_);
  }
  return x;
}

inline std::optional<QMatrix> QMatrix::inverse() const {
  if (rows_ != cols_) return std::nullopt;
  QMatrix aug(rows_, 2 * cols_);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_ + i) = QScalar(1);
  }
  std::vector<size_t> order(cols_);
  std::iota(order.begin(), order.end(), size_t{0});
  Echelon e = aug.echelon(order);
  if (e.rank < rows_) return std::nullopt;
  QMatrix inv(rows_, cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) inv.at(i, j) = e.rref.at(i, cols_ + j);
  return inv;
}

}  // namespace qplane
