#include "qcuntz/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "qcuntz/error.hpp"
#include "qcuntz/kernels.hpp"

namespace qcuntz {

namespace {

void require_same_shape(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::Structure, "matrix shape mismatch");
  }
}

// Merge two sorted columns, dropping exact cancellations.
std::vector<Entry> merge(std::span<const Entry> x, std::span<const Entry> y, Complex ysign) {
  std::vector<Entry> out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, k = 0;
  while (i < x.size() || k < y.size()) {
    if (k == y.size() || (i < x.size() && x[i].row < y[k].row)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[k].row < x[i].row) {
      out.push_back({y[k].row, ysign * y[k].value});
      ++k;
    } else {
      Complex v = x[i].value + ysign * y[k].value;
      if (v != Complex{}) out.push_back({x[i].row, v});
      ++i;
      ++k;
    }
  }
  return out;
}

}  // namespace

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

SparseMatrix SparseMatrix::identity(std::size_t dim) {
  SparseMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m.cols_[i].push_back({i, Complex{1.0, 0.0}});
  return m;
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> values) {
  SparseMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) m.cols_[i].push_back({i, Complex{values[i], 0.0}});
  }
  return m;
}

SparseMatrix SparseMatrix::from_columns(std::size_t rows, std::vector<std::vector<Entry>> columns) {
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = std::move(columns);
#ifndef NDEBUG
  for (const auto& col : m.cols_) {
    for (std::size_t i = 0; i < col.size(); ++i) {
      assert(col[i].row < rows);
      assert(i == 0 || col[i - 1].row < col[i].row);
    }
  }
#endif
  return m;
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXcd& dense, double drop) {
  SparseMatrix m(static_cast<std::size_t>(dense.rows()), static_cast<std::size_t>(dense.cols()));
  for (Eigen::Index c = 0; c < dense.cols(); ++c) {
    for (Eigen::Index r = 0; r < dense.rows(); ++r) {
      const Complex v = dense(r, c);
      if (std::abs(v) > drop && v != Complex{}) {
        m.cols_[static_cast<std::size_t>(c)].push_back({static_cast<std::size_t>(r), v});
      }
    }
  }
  return m;
}

std::size_t SparseMatrix::nonzeros() const noexcept {
  std::size_t total = 0;
  for (const auto& col : cols_) total += col.size();
  return total;
}

void SparseMatrix::set(std::size_t row, std::size_t col, Complex v) {
  auto& c = cols_.at(col);
  if (row >= rows_) throw Error(ErrorCode::Structure, "row index out of range");
  auto it = std::lower_bound(c.begin(), c.end(), row,
                             [](const Entry& e, std::size_t r) { return e.row < r; });
  if (it != c.end() && it->row == row) {
    if (v == Complex{}) {
      c.erase(it);
    } else {
      it->value = v;
    }
  } else if (v != Complex{}) {
    c.insert(it, {row, v});
  }
}

Complex SparseMatrix::at(std::size_t row, std::size_t col) const {
  const auto& c = cols_.at(col);
  auto it = std::lower_bound(c.begin(), c.end(), row,
                             [](const Entry& e, std::size_t r) { return e.row < r; });
  return (it != c.end() && it->row == row) ? it->value : Complex{};
}

SparseMatrix SparseMatrix::adjoint() const {
  SparseMatrix t(cols(), rows_);
  for (std::size_t c = 0; c < cols(); ++c) {
    for (const Entry& e : cols_[c]) t.cols_[e.row].push_back({c, std::conj(e.value)});
  }
  return t;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& rhs) const {
  if (cols() != rhs.rows()) throw Error(ErrorCode::Structure, "product shape mismatch");
  return kernels::parallel::multiply(*this, rhs);
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& rhs) const {
  require_same_shape(*this, rhs);
  SparseMatrix out(rows_, cols());
  for (std::size_t c = 0; c < cols(); ++c) out.cols_[c] = merge(cols_[c], rhs.cols_[c], 1.0);
  return out;
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& rhs) const {
  require_same_shape(*this, rhs);
  SparseMatrix out(rows_, cols());
  for (std::size_t c = 0; c < cols(); ++c) out.cols_[c] = merge(cols_[c], rhs.cols_[c], -1.0);
  return out;
}

SparseMatrix SparseMatrix::scaled(Complex factor) const {
  SparseMatrix out(rows_, cols());
  if (factor == Complex{}) return out;
  for (std::size_t c = 0; c < cols(); ++c) {
    out.cols_[c].reserve(cols_[c].size());
    for (const Entry& e : cols_[c]) {
      const Complex v = e.value * factor;
      if (v != Complex{}) out.cols_[c].push_back({e.row, v});
    }
  }
  return out;
}

std::vector<Complex> SparseMatrix::apply(std::span<const Complex> x) const {
  if (x.size() != cols()) throw Error(ErrorCode::Structure, "vector length mismatch");
  std::vector<Complex> y(rows_);
  for (std::size_t c = 0; c < cols(); ++c) {
    if (x[c] == Complex{}) continue;
    for (const Entry& e : cols_[c]) y[e.row] += e.value * x[c];
  }
  return y;
}

bool SparseMatrix::is_weighted_shift() const {
  return std::all_of(cols_.begin(), cols_.end(), [](const auto& c) { return c.size() <= 1; });
}

SparseMatrix SparseMatrix::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != rows_ || perm.size() != cols()) {
    throw Error(ErrorCode::Structure, "permutation size mismatch");
  }
  std::vector<std::size_t> inverse(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inverse[perm[i]] = i;
  SparseMatrix out(rows_, cols());
  for (std::size_t j = 0; j < perm.size(); ++j) {
    auto& col = out.cols_[j];
    for (const Entry& e : cols_[perm[j]]) col.push_back({inverse[e.row], e.value});
    std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
  }
  return out;
}

SparseMatrix SparseMatrix::restricted(std::span<const std::size_t> indices) const {
  constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> position(rows_, kAbsent);
  for (std::size_t i = 0; i < indices.size(); ++i) position.at(indices[i]) = i;
  SparseMatrix out(indices.size(), indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    auto& col = out.cols_[j];
    for (const Entry& e : cols_.at(indices[j])) {
      if (position[e.row] != kAbsent) col.push_back({position[e.row], e.value});
    }
    std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
  }
  return out;
}

Eigen::MatrixXcd SparseMatrix::to_dense() const {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows_),
                                              static_cast<Eigen::Index>(cols()));
  for (std::size_t c = 0; c < cols(); ++c) {
    for (const Entry& e : cols_[c]) {
      d(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(c)) = e.value;
    }
  }
  return d;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& col : cols_) {
    for (const Entry& e : col) m = std::max(m, std::abs(e.value));
  }
  return m;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_.size() != b.cols_.size()) return false;
  for (std::size_t c = 0; c < a.cols_.size(); ++c) {
    const auto& x = a.cols_[c];
    const auto& y = b.cols_[c];
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].row != y[i].row || x[i].value != y[i].value) return false;
    }
  }
  return true;
}

SparseMatrix direct_sum(const SparseMatrix& a, const SparseMatrix& b) {
  std::vector<std::vector<Entry>> cols;
  cols.reserve(a.cols() + b.cols());
  for (std::size_t c = 0; c < a.cols(); ++c) {
    cols.emplace_back(a.column(c).begin(), a.column(c).end());
  }
  for (std::size_t c = 0; c < b.cols(); ++c) {
    std::vector<Entry> col;
    for (const Entry& e : b.column(c)) col.push_back({e.row + a.rows(), e.value});
    cols.push_back(std::move(col));
  }
  return SparseMatrix::from_columns(a.rows() + b.rows(), std::move(cols));
}

}  // namespace qcuntz
