#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qcuntz/analysis.hpp"
#include "qcuntz/rep.hpp"
#include "qcuntz/sparse.hpp"

namespace qcuntz::analysis {

/// Operators whose common commutant is measured: isometric parts S_k and the
/// diagonals D_k^2 whose spectral projections E_k(delta) join them.
struct CommutantInput {
  std::vector<SparseMatrix> S;
  std::vector<std::vector<double>> D_sq;
  std::size_t interior_count = 0;  // interior_depth_2 size
  bool untruncated = false;        // the basis is the whole representation space
};

CommutantInput commutant_input(const OperatorFamily& family);
CommutantInput direct_sum(const CommutantInput& a, const CommutantInput& b);

struct CommutantReport {
  int dimension = 0;
  Status status = Status::Inconclusive;
  std::size_t basis_size = 0;
  std::size_t interior_count = 0;
  std::string method;  // "monomial" or "dense"
};

/// Dimension of {X : [X, S_k] = [X, S_k^*] = [X, E_k(delta)] = 0}. A value of 1
/// signals irreducibility. Heuristic: truncation breaks exact invariance.
CommutantReport commutant_dimension(const CommutantInput& input, double tol = 1e-9);

/// Solver for phase-weighted partial permutations: each commutation equation
/// links at most two unknowns, so the solution space is counted by union-find.
int commutant_dimension_monomial(const CommutantInput& input, double tol = 1e-9);

/// Gram-matrix null space; works for any S_k but is cubic in the unknown count.
int commutant_dimension_dense(const CommutantInput& input, double tol = 1e-9);

}  // namespace qcuntz::analysis
