#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qcuntz/rep.hpp"
#include "qcuntz/sparse.hpp"

namespace qcuntz::analysis {

struct WoldOptions {
  double tol = 1e-10;           // relation residual gate and kernel threshold
  double grouping_tol = 1e-8;   // unitary detection and orbit grouping
  double x0 = 0.0;              // fundamental domain anchor; <= 0 means 2/(1-q)
};

using SparseVector = std::vector<std::pair<std::size_t, Complex>>;

struct FockBlock {
  SparseVector vacuum;
  std::size_t chain_length = 0;
  std::vector<std::size_t> labels;
  bool boundary = false;  // vacuum found outside the flagged interior
};

struct UnitaryBlock {
  std::vector<std::size_t> labels;
  bool present = false;
};

struct UnboundedBlock {
  std::vector<std::size_t> labels;
  double x = 0.0;       // orbit representative in the fundamental domain
  int shift = 0;        // f^shift(x) equals the reference eigenvalue
  double reference = 0.0;
  std::vector<double> eigenvalues;
};

struct WoldDecomposition {
  double q = 0.0;
  double x0 = 0.0;
  std::vector<FockBlock> fock_blocks;
  UnitaryBlock unitary_block;
  std::vector<UnboundedBlock> unbounded_blocks;
  double relation_residual = 0.0;  // max over the flagged interior
  double leakage = 0.0;            // max |(1 - P_B) A v|, v in block B
};

/// q-Wold decomposition of a single operator satisfying A^*A = 1 + qAA^* on the
/// flagged interior. The sparsity graph of A splits the space into invariant
/// coordinate components, each handled densely: vacua from ker A^*, Fock
/// chains A^m vacuum, then the spectrum of A^*A on what is left. Throws
/// RejectInput when the relation fails on the interior and
/// UnclassifiedRemainder when an eigenvalue fits no block type.
WoldDecomposition q_wold(const SparseMatrix& A, double q, const std::vector<std::size_t>& interior,
                         const WoldOptions& options = {});

/// Generators and interior flags, without labels: what detect_parameters and
/// the CLI see.
struct MatrixSystem {
  double q = 0.0;
  int n = 1;
  std::vector<SparseMatrix> A;
  std::vector<std::size_t> interior;
};

MatrixSystem matrix_system(const OperatorFamily& family);

}  // namespace qcuntz::analysis
