#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcuntz/sparse.hpp"
#include "qcuntz/words.hpp"

namespace qcuntz {

enum class Family {
  FockQ1,       // Fock representation of one q-oscillator on l2(N)
  Circle,       // one-dimensional representations a = e^{i phi} / sqrt(1-q)
  LineZ,        // unbounded one-oscillator representations on l2(Z)
  FockQn,       // Fock representation of n generators on l2(Lambda)
  UnboundedXJ,  // irreducible unbounded pi_(x,j) on l2(Lambda_j x Z)
  BoundedPhiJ,  // representations with a unitary part in direction j
};

const char* family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

/// Parameters of one representation family. Only the fields relevant to
/// `family` are read: x for LineZ/UnboundedXJ, phi for Circle (radians, in
/// [0, 2pi)) and BoundedPhiJ (turns, in [0, 1)), j for the two n-generator
/// families with a distinguished direction.
struct RepSpec {
  Family family = Family::FockQ1;
  double q = 0.0;
  int n = 1;
  int j = 1;
  double x = 0.0;
  double phi = 0.0;

  static RepSpec fock_q1(double q);
  static RepSpec circle(double q, double phi);
  static RepSpec line_z(double q, double x);
  static RepSpec fock_qn(double q, int n);
  static RepSpec unbounded_xj(double q, int n, int j, double x);
  static RepSpec bounded_phi_j(double q, int n, int j, double phi);

  bool has_levels() const { return family == Family::LineZ || family == Family::UnboundedXJ; }

  /// Throws Error(InvalidSpec) when parameters are outside the family's range.
  void validate() const;
};

/// Finite window of an infinite basis. L bounds word length, [s_min, s_max]
/// bounds levels. FockQ1 uses [0, s_max] and ignores s_min.
struct TruncationParams {
  int L = 0;
  int s_min = 0;
  int s_max = 0;
};

enum class LabelKind { FockLevel, ZLevel, WordOnly, WordLevel, Single };

struct BasisLabel {
  LabelKind kind = LabelKind::Single;
  Word word;
  int level = 0;

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
  friend auto operator<=>(const BasisLabel&, const BasisLabel&) = default;
};

std::string to_string(const BasisLabel& label);

/// Closed/open interval endpoints; infinite endpoints are allowed.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = true;
  bool hi_closed = true;

  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
  static Interval point(double t) { return {t, t, true, true}; }
  static Interval all() { return {}; }

  bool contains(double t) const;
};

/// Finite union of intervals standing in for a Borel set.
struct IntervalSet {
  std::vector<Interval> parts;

  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> p) : parts(p) {}

  bool contains(double t) const;

  /// {(t - 1) / q : t in this set}, for q > 0.
  IntervalSet shifted_preimage(double q) const;
};

class Basis {
 public:
  /// Labels whose interior depth is "unbounded" (e.g. the one-dimensional
  /// Circle basis) report this value.
  static constexpr int kDepthCap = 64;

  Basis() = default;
  Basis(std::vector<BasisLabel> labels, std::vector<int> depth);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<BasisLabel>& labels() const noexcept { return labels_; }
  const BasisLabel& label(std::size_t ordinal) const { return labels_.at(ordinal); }
  std::optional<std::size_t> ordinal(const BasisLabel& label) const;

  /// Ordinals whose images under any d applications of generators or
  /// adjoints are computed exactly by the truncated matrices.
  std::vector<std::size_t> interior(int d) const;
  int depth(std::size_t ordinal) const { return depth_.at(ordinal); }

  /// Relabels as e'_i = e_{perm[i]}.
  Basis permuted(std::span<const std::size_t> perm) const;

 private:
  std::vector<BasisLabel> labels_;
  std::map<BasisLabel, std::size_t> ordinal_;
  std::vector<int> depth_;
};

/// Where a generator (or its adjoint) sends a basis vector in the untruncated
/// representation.
struct Link {
  static constexpr std::int64_t kZero = -1;     // exact zero
  static constexpr std::int64_t kOutside = -2;  // target lies outside the window
};

struct Eigenspace {
  double value = 0.0;
  std::vector<std::size_t> ordinals;
};

/// Spectral partition of a real diagonal operator.
struct SpectralResolution {
  std::size_t dim = 0;
  std::vector<Eigenspace> spaces;  // ascending by value

  std::optional<double> eigenvalue_of(std::size_t ordinal) const;
};

/// Debug hook: adds `delta` to the stored weight of one generator column.
struct Perturbation {
  int generator = 1;
  std::size_t ordinal = 0;
  double delta = 0.0;
};

class OperatorFamily {
 public:
  const RepSpec& spec() const noexcept { return spec_; }
  const TruncationParams& truncation() const noexcept { return trunc_; }
  const Basis& basis() const noexcept { return basis_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  int n() const noexcept { return spec_.n; }
  double q() const noexcept { return spec_.q; }

  // Generator accessors take k in 1..n.
  const SparseMatrix& A(int k) const { return A_.at(static_cast<std::size_t>(k - 1)); }
  const SparseMatrix& A_adj(int k) const { return A_adj_.at(static_cast<std::size_t>(k - 1)); }
  const SparseMatrix& S(int k) const { return S_.at(static_cast<std::size_t>(k - 1)); }
  const std::vector<double>& C_sq(int k) const { return C_sq_.at(static_cast<std::size_t>(k - 1)); }
  const std::vector<double>& D_sq(int k) const { return D_sq_.at(static_cast<std::size_t>(k - 1)); }
  const SpectralResolution& resolution(int k) const {
    return resolutions_.at(static_cast<std::size_t>(k - 1));
  }
  /// Link::kZero, Link::kOutside or the target ordinal.
  std::int64_t forward(int k, std::size_t ordinal) const;
  std::int64_t backward(int k, std::size_t ordinal) const;

  /// Same family with its basis relabelled by e'_i = e_{perm[i]}.
  OperatorFamily permuted(std::span<const std::size_t> perm) const;

  friend OperatorFamily build_generators(const RepSpec&, const TruncationParams&,
                                         std::optional<Perturbation>);

 private:
  RepSpec spec_;
  TruncationParams trunc_;
  Basis basis_;
  std::vector<std::vector<std::int64_t>> forward_, backward_;
  std::vector<SparseMatrix> A_, A_adj_, S_;
  std::vector<std::vector<double>> C_sq_, D_sq_;
  std::vector<SpectralResolution> resolutions_;
};

Basis build_basis(const RepSpec& spec, const TruncationParams& trunc);

OperatorFamily build_generators(const RepSpec& spec, const TruncationParams& trunc,
                                std::optional<Perturbation> perturb = std::nullopt);

/// Unit-modulus phase of every stored weight of a weighted shift.
SparseMatrix polar_isometry(const SparseMatrix& A);

/// Diagonals of C_k^2 = A_k^* A_k and D_k^2 = A_k A_k^*, k = 1..n.
std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>> number_operators(
    const OperatorFamily& family);

SpectralResolution spectral_resolution(const std::vector<double>& diagonal, double tol = 1e-9);

/// Orthogonal projection onto the eigenspaces whose value lies in delta.
SparseMatrix apply_E(const SpectralResolution& resolution, const IntervalSet& delta);

/// lambda_s = (1 - q^s)/(1 - q) + q^s x, evaluated as c + q^s (x - c) with
/// c = 1/(1-q) to avoid cancellation at negative s.
double level_weight_sq(double q, double x, int s);

/// (1 - q^m)/(1 - q).
double fock_weight_sq(double q, int m);

}  // namespace qcuntz
