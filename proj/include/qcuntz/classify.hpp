#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcuntz/rep.hpp"
#include "qcuntz/wold.hpp"

namespace qcuntz::classify {

/// 2/(1-q): any value above 1/(1-q) works as an anchor.
double default_x0(double q);

/// The half-open interval (1 + q x0, x0]. Its images under f(t) = 1 + qt
/// tile (1/(1-q), infinity).
struct FundamentalDomain {
  double q;
  double x0;

  double lo() const { return 1.0 + q * x0; }
  double hi() const { return x0; }
  bool contains(double x) const { return lo() < x && x <= hi(); }
};

/// f^k(t) for f(t) = 1 + qt; negative k applies the inverse (t - 1)/q.
double orbit_step(double q, double t, int k);

struct NormalizedParam {
  double x = 0.0;
  int shift = 0;  // f^shift(x) == input
  double input = 0.0;
};

NormalizedParam normalize_x(double y, double q, double x0);

/// "x=2.8 (shift +2 from 2.2)".
std::string describe(const NormalizedParam& p);

/// Values 1/(1-q) + q^m (x - 1/(1-q)), m in Z, inside [lo, hi], ascending.
/// When lo <= 1/(1-q) the set accumulates at 1/(1-q) and max_exponent must
/// bound m from above.
std::vector<double> delta_set(double x, double q, double lo, double hi,
                              std::optional<int> max_exponent = std::nullopt);

struct Certificate {
  std::string kind;  // "matched" or "distinguished"
  std::optional<int> j;
  std::optional<double> x;
  std::optional<double> phi;
  std::string detail;
};

struct EquivalenceDecision {
  bool equivalent = false;
  Certificate certificate;
};

/// Unitary equivalence of two irreducible representations given by their
/// parameters. Throws Incomparable when q or n differ.
EquivalenceDecision same_rep(const RepSpec& a, const RepSpec& b, double x0);

/// "unbounded:1:2.2", "bounded:2:0.25", "linez:2.8", "circle:1.5", "fock1",
/// "fockn". q and n come from the caller.
RepSpec parse_spec_string(const std::string& text, double q, int n);

struct Detection {
  RepSpec spec;
  std::vector<analysis::WoldDecomposition> per_generator;
};

/// Recovers the family and its parameters from matrices alone (labels are
/// never read), by running q_wold on every generator.
Detection detect_parameters(const analysis::MatrixSystem& system,
                            const analysis::WoldOptions& options = {});

}  // namespace qcuntz::classify
