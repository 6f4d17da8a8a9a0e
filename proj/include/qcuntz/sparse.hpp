#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qcuntz {

using Complex = std::complex<double>;

struct Entry {
  std::size_t row;
  Complex value;
};

/// Column-compressed complex matrix. Each column keeps its entries sorted by
/// row with no stored zeros, so structural comparisons are exact.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  static SparseMatrix identity(std::size_t dim);
  static SparseMatrix diagonal(std::span<const double> values);
  static SparseMatrix from_columns(std::size_t rows, std::vector<std::vector<Entry>> columns);
  static SparseMatrix from_dense(const Eigen::MatrixXcd& dense, double drop = 0.0);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_.size(); }
  std::size_t nonzeros() const noexcept;

  /// Writes v at (row, col); writing zero erases the entry.
  void set(std::size_t row, std::size_t col, Complex v);
  Complex at(std::size_t row, std::size_t col) const;
  std::span<const Entry> column(std::size_t col) const { return cols_[col]; }

  SparseMatrix adjoint() const;
  SparseMatrix operator*(const SparseMatrix& rhs) const;
  SparseMatrix operator+(const SparseMatrix& rhs) const;
  SparseMatrix operator-(const SparseMatrix& rhs) const;
  SparseMatrix scaled(Complex factor) const;

  std::vector<Complex> apply(std::span<const Complex> x) const;

  /// Weighted-shift test: at most one stored entry per column.
  bool is_weighted_shift() const;

  /// Row i of the result is row perm[i] of this matrix, column j is column
  /// perm[j]: the matrix expressed in the basis e'_i = e_{perm[i]}.
  SparseMatrix permuted(std::span<const std::size_t> perm) const;

  /// Compression to the given index set (rows and columns, in that order).
  SparseMatrix restricted(std::span<const std::size_t> indices) const;

  Eigen::MatrixXcd to_dense() const;

  double max_abs() const;

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::vector<std::vector<Entry>> cols_;
};

SparseMatrix direct_sum(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace qcuntz
