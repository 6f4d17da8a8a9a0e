#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qcuntz/sparse.hpp"

// Column-parallel inner loops. Every kernel exists twice: `serial` is the
// reference the tests compare against, `parallel` is the OpenMP version the
// library calls. Both produce bit-identical results because each output
// column is computed independently with the same operation order.
namespace qcuntz::kernels {

namespace serial {

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
std::vector<double> column_norms(const SparseMatrix& m, std::span<const std::size_t> cols);

}  // namespace serial

namespace parallel {

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
std::vector<double> column_norms(const SparseMatrix& m, std::span<const std::size_t> cols);

}  // namespace parallel

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int thread_count();

}  // namespace qcuntz::kernels
