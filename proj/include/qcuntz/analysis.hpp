#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "qcuntz/rep.hpp"
#include "qcuntz/sparse.hpp"

namespace qcuntz::analysis {

enum class Status { Pass, Fail, Inconclusive };

const char* to_string(Status s);

/// Outcome of one identity check. Residuals are per basis vector and measured
/// relative to the local scale max(1, |A_k^* A_k v|) so that large unbounded
/// weights do not swamp a fixed absolute tolerance.
struct ResidualReport {
  std::string check;
  double tolerance = 0.0;
  double max_residual = 0.0;
  std::size_t vectors_checked = 0;
  Status status = Status::Inconclusive;
  std::string note;

  bool pass() const noexcept { return status == Status::Pass; }
};

/// Folds a residual into a report: status is Pass iff max_residual <= tol,
/// Inconclusive when nothing was checked.
ResidualReport make_report(std::string check, double tol, double max_residual,
                           std::size_t vectors_checked, std::string note = {});

/// |(A_i^*A_i - 1 - q A_iA_i^*) v| and |A_i^*A_j v| (i != j) over interior_depth_2.
ResidualReport relation_residuals(const OperatorFamily& family, double tol = 1e-12);

/// E_k(delta) S_k = S_k E_k(q^{-1}(delta - 1)) over interior_depth_1, checked
/// both through the interval transform and through the indicator of
/// 1 + q D_k^2 evaluated pointwise. At q = 0 only the second route applies.
ResidualReport check_shift_identity(const OperatorFamily& family, int k,
                                    const std::vector<IntervalSet>& deltas, double tol = 1e-12);

/// Bounded test sets for check_shift_identity. Endpoints avoid a 1e-6
/// neighbourhood of the spectrum and of its image under t -> 1 + qt; about a
/// third of the draws are narrow windows isolating one eigenvalue.
std::vector<IntervalSet> sample_intervals(const OperatorFamily& family, int k, int count,
                                          std::mt19937_64& rng);

/// [C_i^2, C_j^2] = 0 exactly, and |(S_i^*S_j - delta_ij) v| over interior_depth_1.
ResidualReport check_structure_bc(const OperatorFamily& family, double tol = 1e-12);

/// D_k^2 on every basis label against (1 - q^{m_k(a)})/(1-q), 0, lambda_{s-1}
/// or 1/(1-q). Only defined for word-labelled families.
ResidualReport check_eigenvalue_laws(const OperatorFamily& family, double tol = 1e-12);

/// Sum_{m=0..K} q^m S^m S^{*m}.
SparseMatrix series_sum(const SparseMatrix& S, double q, int K);

struct SeriesReport {
  SparseMatrix series;
  double tail_bound = 0.0;      // q^{K+1}/(1-q)
  ResidualReport against_c_sq;  // |series - C^2| within tail_bound
  ResidualReport sqrt_form;     // |A - S series^{1/2}| within tail_bound
  double linear_form_deviation = 0.0;  // |A - S series|
  bool linear_form_discrepancy = false;
};

/// Compares the truncated series against C_k^2 and A_k on interior_depth_{K+1}.
/// The linear form a = s (Sum q^m s^m s^{*m}) is evaluated too; it does not
/// reproduce A for q > 0 and the report flags that.
SeriesReport series_number_operator(const OperatorFamily& family, int k, int K,
                                    double tol = 1e-12);

struct SpectrumReport {
  std::vector<double> computed;   // sorted diagonal of C_k^2 on the truncation
  std::vector<double> predicted;  // sorted closed-form multiset
  std::vector<double> interior_matrix_eigenvalues;
  ResidualReport report;
};

/// Eigenvalues of C_k^2 against the closed-form multiset, plus membership of
/// every value in {(1-q^m)/(1-q) : m >= 1} U {1/(1-q)} U Delta_x.
SpectrumReport spectrum_check(const OperatorFamily& family, int k, double tol = 1e-12);

/// True when every generator is bounded in the direction k (the series
/// identity only holds there).
bool is_bounded_direction(const RepSpec& spec, int k);

}  // namespace qcuntz::analysis
