#include "qcuntz/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qcuntz/classify.hpp"
#include "qcuntz/error.hpp"
#include "qcuntz/kernels.hpp"

namespace qcuntz::analysis {

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

ResidualReport make_report(std::string check, double tol, double max_residual,
                           std::size_t vectors_checked, std::string note) {
  ResidualReport r;
  r.check = std::move(check);
  r.tolerance = tol;
  r.max_residual = max_residual;
  r.vectors_checked = vectors_checked;
  r.note = std::move(note);
  if (vectors_checked == 0) {
    r.status = Status::Inconclusive;
  } else {
    r.status = max_residual <= tol ? Status::Pass : Status::Fail;
  }
  return r;
}

namespace {

std::vector<double> local_scales(const OperatorFamily& f) {
  std::vector<double> s(f.dim(), 1.0);
  for (int k = 1; k <= f.n(); ++k) {
    const auto& c = f.C_sq(k);
    for (std::size_t v = 0; v < s.size(); ++v) s[v] = std::max(s[v], c[v]);
  }
  return s;
}

double max_norm(const SparseMatrix& m, const std::vector<std::size_t>& cols,
                const std::vector<double>* scales = nullptr) {
  const auto norms = kernels::parallel::column_norms(m, cols);
  double worst = 0.0;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const double r = scales ? norms[i] / (*scales)[cols[i]] : norms[i];
    worst = std::max(worst, r);
  }
  return worst;
}

double rel_dev(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

bool word_family(Family f) {
  return f == Family::FockQn || f == Family::UnboundedXJ || f == Family::BoundedPhiJ;
}

void check_k(const OperatorFamily& f, int k) {
  if (k < 1 || k > f.n()) throw Error(ErrorCode::OutOfRange, "generator index out of range");
}

}  // namespace

ResidualReport relation_residuals(const OperatorFamily& family, double tol) {
  const auto cols = family.basis().interior(2);
  const auto scales = local_scales(family);
  const double q = family.q();
  const SparseMatrix I = SparseMatrix::identity(family.dim());
  double worst = 0.0;
  for (int i = 1; i <= family.n(); ++i) {
    const SparseMatrix R =
        family.A_adj(i) * family.A(i) - I - (family.A(i) * family.A_adj(i)).scaled(q);
    worst = std::max(worst, max_norm(R, cols, &scales));
    for (int j = 1; j <= family.n(); ++j) {
      if (j == i) continue;
      worst = std::max(worst, max_norm(family.A_adj(i) * family.A(j), cols, &scales));
    }
  }
  return make_report("relations", tol, worst, cols.size(),
                     cols.empty() ? "empty interior_depth_2" : "");
}

ResidualReport check_shift_identity(const OperatorFamily& family, int k,
                                    const std::vector<IntervalSet>& deltas, double tol) {
  check_k(family, k);
  const auto cols = family.basis().interior(1);
  const double q = family.q();
  const SparseMatrix& S = family.S(k);
  const auto& res = family.resolution(k);
  const auto& d_sq = family.D_sq(k);
  double worst = 0.0;
  for (const IntervalSet& delta : deltas) {
    const SparseMatrix lhs = apply_E(res, delta) * S;
    std::vector<double> indicator(family.dim());
    for (std::size_t v = 0; v < indicator.size(); ++v) {
      indicator[v] = delta.contains(1.0 + q * d_sq[v]) ? 1.0 : 0.0;
    }
    worst = std::max(worst, max_norm(lhs - S * SparseMatrix::diagonal(indicator), cols));
    if (q > 0.0) {
      const SparseMatrix rhs = S * apply_E(res, delta.shifted_preimage(q));
      worst = std::max(worst, max_norm(lhs - rhs, cols));
    }
  }
  return make_report("shift_identity[k=" + std::to_string(k) + "]", tol, worst,
                     deltas.empty() ? 0 : cols.size(),
                     q > 0.0 ? "" : "q=0: E(delta)S = S iff 1 in delta");
}

std::vector<IntervalSet> sample_intervals(const OperatorFamily& family, int k, int count,
                                          std::mt19937_64& rng) {
  check_k(family, k);
  const double q = family.q();
  const auto& res = family.resolution(k);
  std::vector<double> marks;
  for (const Eigenspace& e : res.spaces) {
    marks.push_back(e.value);
    marks.push_back(1.0 + q * e.value);
  }
  const double lo = -0.5;
  const double hi = (marks.empty() ? 1.0 : *std::max_element(marks.begin(), marks.end())) + 1.0;
  auto clear_of_marks = [&](double t) {
    return std::none_of(marks.begin(), marks.end(), [&](double m) {
      return std::abs(t - m) <= 1e-6 * (1.0 + std::abs(m));
    });
  };
  std::uniform_real_distribution<double> coord(lo, hi);
  std::bernoulli_distribution coin(0.5);
  auto endpoint = [&] {
    double t = coord(rng);
    while (!clear_of_marks(t)) t = coord(rng);
    return t;
  };
  auto random_interval = [&] {
    double a = endpoint(), b = endpoint();
    if (a > b) std::swap(a, b);
    return Interval{a, b, coin(rng), coin(rng)};
  };

  std::vector<IntervalSet> out;
  for (int i = 0; i < count; ++i) {
    if (i % 3 == 2 && !res.spaces.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, res.spaces.size() - 1);
      const double u = res.spaces[pick(rng)].value;
      const double w = 1e-7 * (1.0 + std::abs(u));
      out.push_back({Interval::closed(u - w, u + w)});
    } else if (i % 3 == 1) {
      out.push_back({random_interval(), random_interval()});
    } else {
      out.push_back({random_interval()});
    }
  }
  return out;
}

ResidualReport check_structure_bc(const OperatorFamily& family, double tol) {
  const auto cols = family.basis().interior(1);
  const std::size_t dim = family.dim();
  double worst = 0.0;
  for (int i = 1; i <= family.n(); ++i) {
    const SparseMatrix Ci = SparseMatrix::diagonal(family.C_sq(i));
    const SparseMatrix Si_adj = family.S(i).adjoint();
    for (int j = 1; j <= family.n(); ++j) {
      if (j > i) {
        const SparseMatrix Cj = SparseMatrix::diagonal(family.C_sq(j));
        worst = std::max(worst, (Ci * Cj - Cj * Ci).max_abs());
      }
      SparseMatrix G = Si_adj * family.S(j);
      if (i == j) G = G - SparseMatrix::identity(dim);
      worst = std::max(worst, max_norm(G, cols));
    }
  }
  return make_report("structure_bc", tol, worst, cols.size());
}

ResidualReport check_eigenvalue_laws(const OperatorFamily& family, double tol) {
  const RepSpec& spec = family.spec();
  if (!word_family(spec.family)) {
    throw Error(ErrorCode::InvalidSpec, "eigenvalue laws need a word-labelled family");
  }
  const double q = spec.q;
  double worst = 0.0;
  for (int k = 1; k <= spec.n; ++k) {
    const Letter letter(k, spec.n);
    const auto& d_sq = family.D_sq(k);
    const SparseMatrix& A_adj = family.A_adj(k);
    for (std::size_t v = 0; v < family.dim(); ++v) {
      const BasisLabel& label = family.basis().label(v);
      double expected = 0.0;
      if (!label.word.empty()) {
        expected = fock_weight_sq(q, m_k(letter, label.word));
      } else if (k == spec.j && spec.family == Family::UnboundedXJ) {
        expected = level_weight_sq(q, spec.x, label.level - 1);
      } else if (k == spec.j && spec.family == Family::BoundedPhiJ) {
        expected = 1.0 / (1.0 - q);
      }
      worst = std::max(worst, rel_dev(d_sq[v], expected));
      // Rows of A_k are complete unless the preimage fell outside the window.
      if (family.backward(k, v) != Link::kOutside) {
        double row_sq = 0.0;
        for (const Entry& e : A_adj.column(v)) row_sq += std::norm(e.value);
        worst = std::max(worst, rel_dev(row_sq, expected));
      }
    }
  }
  return make_report("eigenvalue_laws", tol, worst, family.dim());
}

SparseMatrix series_sum(const SparseMatrix& S, double q, int K) {
  if (K < 0) throw Error(ErrorCode::OutOfRange, "K must be >= 0");
  const SparseMatrix S_adj = S.adjoint();
  SparseMatrix P = SparseMatrix::identity(S.cols());
  SparseMatrix total = P;
  for (int m = 1; m <= K; ++m) {
    P = S * P * S_adj;
    total = total + P.scaled(std::pow(q, m));
  }
  return total;
}

SeriesReport series_number_operator(const OperatorFamily& family, int k, int K, double tol) {
  check_k(family, k);
  const double q = family.q();
  SeriesReport out;
  out.series = series_sum(family.S(k), q, K);
  out.tail_bound = std::pow(q, K + 1) / (1.0 - q);
  const auto cols = family.basis().interior(K + 1);
  const std::size_t dim = family.dim();

  const SparseMatrix C_sq = SparseMatrix::diagonal(family.C_sq(k));
  const double dev = max_norm(out.series - C_sq, cols);

  std::vector<double> root(dim);
  for (std::size_t v = 0; v < dim; ++v) {
    const auto col = out.series.column(v);
    if (col.size() != 1 || col[0].row != v) {
      throw Error(ErrorCode::Structure, "series is not diagonal; S is not a shift");
    }
    root[v] = std::sqrt(col[0].value.real());
  }
  const SparseMatrix& A = family.A(k);
  const double sqrt_dev = max_norm(A - family.S(k) * SparseMatrix::diagonal(root), cols);
  out.linear_form_deviation = max_norm(A - family.S(k) * out.series, cols);

  const double bound = out.tail_bound + tol;
  const std::string tag = "[k=" + std::to_string(k) + ",K=" + std::to_string(K) + "]";
  out.against_c_sq = make_report("series_vs_c_sq" + tag, bound, dev, cols.size());
  out.sqrt_form = make_report("series_sqrt_form" + tag, bound, sqrt_dev, cols.size());
  out.linear_form_discrepancy = !cols.empty() && out.linear_form_deviation > bound;
  return out;
}

namespace {

double predicted_c_sq(const RepSpec& spec, int k, const BasisLabel& label) {
  const double q = spec.q;
  switch (spec.family) {
    case Family::FockQ1: return fock_weight_sq(q, label.level + 1);
    case Family::Circle: return 1.0 / (1.0 - q);
    case Family::LineZ: return level_weight_sq(q, spec.x, label.level);
    case Family::FockQn:
    case Family::UnboundedXJ:
    case Family::BoundedPhiJ:
      if (label.word.empty() && k == spec.j) {
        if (spec.family == Family::UnboundedXJ) return level_weight_sq(q, spec.x, label.level);
        if (spec.family == Family::BoundedPhiJ) return 1.0 / (1.0 - q);
      }
      return fock_weight_sq(q, m_k(Letter(k, spec.n), label.word) + 1);
  }
  return 0.0;
}

// Relative distance from v to {(1-q^m)/(1-q) : m >= 1} U {1/(1-q)} U Delta_x.
double spectrum_distance(const RepSpec& spec, double v) {
  const double q = spec.q;
  const double c = 1.0 / (1.0 - q);
  double best = rel_dev(v, c);
  if (q == 0.0) return best;
  if (v < c) {
    const double t = 1.0 - v * (1.0 - q);
    if (t > 0.0) {
      const int m = std::max(1, static_cast<int>(std::lround(std::log(t) / std::log(q))));
      for (int mm : {m - 1, m, m + 1}) {
        if (mm >= 1) best = std::min(best, rel_dev(v, fock_weight_sq(q, mm)));
      }
    }
  } else if (spec.has_levels() && v > c) {
    const double r = (v - c) / (spec.x - c);
    const int s = static_cast<int>(std::lround(std::log(r) / std::log(q)));
    for (int ss : {s - 1, s, s + 1}) best = std::min(best, rel_dev(v, level_weight_sq(q, spec.x, ss)));
  }
  return best;
}

}  // namespace

SpectrumReport spectrum_check(const OperatorFamily& family, int k, double tol) {
  check_k(family, k);
  const RepSpec& spec = family.spec();
  SpectrumReport out;
  out.computed = family.C_sq(k);
  for (const BasisLabel& label : family.basis().labels()) {
    out.predicted.push_back(predicted_c_sq(spec, k, label));
  }
  std::sort(out.computed.begin(), out.computed.end());
  std::sort(out.predicted.begin(), out.predicted.end());

  double worst = 0.0;
  for (std::size_t i = 0; i < out.computed.size(); ++i) {
    worst = std::max(worst, rel_dev(out.computed[i], out.predicted[i]));
    worst = std::max(worst, spectrum_distance(spec, out.computed[i]));
  }

  // The compressed matrix A_k^*A_k on interior_depth_1 must carry the same
  // multiset as the stored diagonal there.
  const auto cols = family.basis().interior(1);
  const SparseMatrix M = (family.A_adj(k) * family.A(k)).restricted(cols);
  bool diagonal = true;
  for (std::size_t c = 0; c < M.cols() && diagonal; ++c) {
    for (const Entry& e : M.column(c)) diagonal = diagonal && e.row == c;
  }
  if (diagonal) {
    for (std::size_t c = 0; c < M.cols(); ++c) out.interior_matrix_eigenvalues.push_back(M.at(c, c).real());
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(M.to_dense(), Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      out.interior_matrix_eigenvalues.push_back(solver.eigenvalues()[i]);
    }
  }
  std::sort(out.interior_matrix_eigenvalues.begin(), out.interior_matrix_eigenvalues.end());
  std::vector<double> stored;
  for (std::size_t v : cols) stored.push_back(family.C_sq(k)[v]);
  std::sort(stored.begin(), stored.end());
  for (std::size_t i = 0; i < stored.size(); ++i) {
    worst = std::max(worst, rel_dev(out.interior_matrix_eigenvalues[i], stored[i]));
  }

  out.report = make_report("spectrum[k=" + std::to_string(k) + "]", tol, worst, out.computed.size());
  return out;
}

bool is_bounded_direction(const RepSpec& spec, int k) {
  if (spec.family == Family::LineZ) return false;
  if (spec.family == Family::UnboundedXJ && k == spec.j) return false;
  return true;
}

}  // namespace qcuntz::analysis
