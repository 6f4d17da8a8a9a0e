#include "qcuntz/kernels.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qcuntz::kernels {

namespace {

// Scatter-gather accumulator for one output column. `marks` holds the rows
// touched so far in insertion order; sorting them restores row order.
struct Accumulator {
  std::vector<Complex> values;
  std::vector<char> touched;
  std::vector<std::size_t> marks;

  explicit Accumulator(std::size_t rows) : values(rows), touched(rows, 0) {}

  std::vector<Entry> product_column(const SparseMatrix& a, std::span<const Entry> bcol) {
    for (const Entry& be : bcol) {
      for (const Entry& ae : a.column(be.row)) {
        if (!touched[ae.row]) {
          touched[ae.row] = 1;
          marks.push_back(ae.row);
        }
        values[ae.row] += ae.value * be.value;
      }
    }
    std::sort(marks.begin(), marks.end());
    std::vector<Entry> out;
    out.reserve(marks.size());
    for (std::size_t r : marks) {
      if (values[r] != Complex{}) out.push_back({r, values[r]});
      values[r] = Complex{};
      touched[r] = 0;
    }
    marks.clear();
    return out;
  }
};

double column_norm(std::span<const Entry> col) {
  double sum = 0.0;
  for (const Entry& e : col) sum += std::norm(e.value);
  return std::sqrt(sum);
}

}  // namespace

namespace serial {

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  std::vector<std::vector<Entry>> cols(b.cols());
  Accumulator acc(a.rows());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    cols[j] = acc.product_column(a, b.column(j));
  }
  return SparseMatrix::from_columns(a.rows(), std::move(cols));
}

std::vector<double> column_norms(const SparseMatrix& m, std::span<const std::size_t> cols) {
  std::vector<double> out(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) out[i] = column_norm(m.column(cols[i]));
  return out;
}

}  // namespace serial

namespace parallel {

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  const auto ncols = static_cast<std::ptrdiff_t>(b.cols());
  std::vector<std::vector<Entry>> cols(b.cols());
#pragma omp parallel
  {
    Accumulator acc(a.rows());
#pragma omp for schedule(dynamic, 64)
    for (std::ptrdiff_t j = 0; j < ncols; ++j) {
      cols[j] = acc.product_column(a, b.column(static_cast<std::size_t>(j)));
    }
  }
  return SparseMatrix::from_columns(a.rows(), std::move(cols));
}

std::vector<double> column_norms(const SparseMatrix& m, std::span<const std::size_t> cols) {
  const auto count = static_cast<std::ptrdiff_t>(cols.size());
  std::vector<double> out(cols.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = column_norm(m.column(cols[i]));
  return out;
}

}  // namespace parallel

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace qcuntz::kernels
