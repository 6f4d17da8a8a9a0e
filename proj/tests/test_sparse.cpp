#include <doctest.h>

#include <random>

#include "qcuntz/kernels.hpp"
#include "qcuntz/sparse.hpp"

using namespace qcuntz;

namespace {

SparseMatrix random_sparse(std::size_t rows, std::size_t cols, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (keep(rng)) d(i, j) = Complex(u(rng), u(rng));
    }
  }
  return SparseMatrix::from_dense(d);
}

}  // namespace

TEST_CASE("sparse products agree with dense Eigen") {
  const SparseMatrix a = random_sparse(40, 30, 0.1, 1);
  const SparseMatrix b = random_sparse(30, 50, 0.1, 2);
  const Eigen::MatrixXcd ref = a.to_dense() * b.to_dense();
  CHECK((( a * b).to_dense() - ref).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(((a.adjoint()).to_dense() - a.to_dense().adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SparseMatrix a = random_sparse(120, 90, 0.05, seed);
    const SparseMatrix b = random_sparse(90, 110, 0.05, seed + 100);
    CHECK(kernels::serial::multiply(a, b) == kernels::parallel::multiply(a, b));
    std::vector<std::size_t> cols{0, 5, 17, 89};
    CHECK(kernels::serial::column_norms(a, cols) == kernels::parallel::column_norms(a, cols));
  }
}

TEST_CASE("set erases zeros and shift detection") {
  SparseMatrix m(3, 3);
  m.set(1, 0, 2.0);
  m.set(2, 1, Complex(0, 1));
  CHECK(m.nonzeros() == 2);
  CHECK(m.is_weighted_shift());
  m.set(1, 0, 0.0);
  CHECK(m.nonzeros() == 1);
  m.set(0, 1, 1.0);
  CHECK_FALSE(m.is_weighted_shift());
}

TEST_CASE("permuted and restricted") {
  const SparseMatrix a = random_sparse(6, 6, 0.5, 9);
  const std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
  const SparseMatrix p = a.permuted(perm);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) CHECK(p.at(i, j) == a.at(perm[i], perm[j]));
  }
  const std::vector<std::size_t> idx{4, 1};
  const SparseMatrix r = a.restricted(idx);
  CHECK(r.rows() == 2);
  CHECK(r.at(0, 1) == a.at(4, 1));
  CHECK(r.at(1, 0) == a.at(1, 4));
  const SparseMatrix s = direct_sum(a, SparseMatrix::identity(2));
  CHECK(s.rows() == 8);
  CHECK(s.at(7, 7) == Complex(1.0));
  CHECK(s.at(2, 3) == a.at(2, 3));
}
