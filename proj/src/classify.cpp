#include "qcuntz/classify.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qcuntz/error.hpp"

namespace qcuntz::classify {

namespace {

constexpr double kBoundaryGuard = 1e-14;

void require_q(double q) {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorCode::OutOfRange, "q must lie in (0, 1)");
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

}  // namespace

double default_x0(double q) { return 2.0 / (1.0 - q); }

double orbit_step(double q, double t, int k) {
  const double c = 1.0 / (1.0 - q);
  return c + std::pow(q, k) * (t - c);
}

NormalizedParam normalize_x(double y, double q, double x0) {
  require_q(q);
  const double c = 1.0 / (1.0 - q);
  if (!(y > c)) {
    throw Error(ErrorCode::OutOfRange, "x=" + fmt(y) + " is not above 1/(1-q)=" + fmt(c));
  }
  if (!(x0 > c)) throw Error(ErrorCode::OutOfRange, "x0 must exceed 1/(1-q)");
  const FundamentalDomain dom{q, x0};
  // y - c = q^k (x - c) with x - c in (q (x0 - c), x0 - c].
  int k = static_cast<int>(std::floor(std::log((y - c) / (x0 - c)) / std::log(q)));
  auto candidate = [&](int kk) { return c + (y - c) * std::pow(q, -kk); };
  double x = candidate(k);
  for (int guard = 0; guard < 4; ++guard) {
    const double g = kBoundaryGuard * std::max(1.0, std::abs(x));
    if (x > dom.hi() + g) {
      x = candidate(++k);
    } else if (x <= dom.lo() + g) {
      x = candidate(--k);
    } else {
      break;
    }
  }
  if (std::abs(x - dom.hi()) <= kBoundaryGuard * std::max(1.0, x)) x = dom.hi();
  return {x, k, y};
}

std::string describe(const NormalizedParam& p) {
  std::string shift = p.shift > 0 ? "+" + std::to_string(p.shift) : std::to_string(p.shift);
  return "x=" + fmt(p.x) + " (shift " + shift + " from " + fmt(p.input) + ")";
}

std::vector<double> delta_set(double x, double q, double lo, double hi,
                              std::optional<int> max_exponent) {
  require_q(q);
  const double c = 1.0 / (1.0 - q);
  if (!(x > c)) throw Error(ErrorCode::OutOfRange, "x must exceed 1/(1-q)");
  if (!(lo <= hi)) throw Error(ErrorCode::OutOfRange, "window is empty");
  std::vector<double> out;
  if (hi <= c) return out;
  const double lq = std::log(q);
  const int m_min = static_cast<int>(std::ceil(std::log((hi - c) / (x - c)) / lq)) - 1;
  int m_max;
  if (lo > c) {
    m_max = static_cast<int>(std::floor(std::log((lo - c) / (x - c)) / lq)) + 1;
  } else if (max_exponent) {
    m_max = *max_exponent;
  } else {
    throw Error(ErrorCode::OutOfRange,
                "window reaches the accumulation point 1/(1-q); an exponent bound is required");
  }
  if (max_exponent) m_max = std::min(m_max, *max_exponent);
  for (int m = m_max; m >= m_min; --m) {
    const double v = orbit_step(q, x, m);
    const double g = 1e-13 * std::max(1.0, std::abs(v));
    if (v >= lo - g && v <= hi + g) out.push_back(v);
  }
  return out;
}

EquivalenceDecision same_rep(const RepSpec& a, const RepSpec& b, double x0) {
  if (a.q != b.q) throw Error(ErrorCode::Incomparable, "specs use different q");
  if (a.n != b.n) throw Error(ErrorCode::Incomparable, "specs use different n");
  a.validate();
  b.validate();
  EquivalenceDecision d;
  Certificate& cert = d.certificate;
  auto distinguished = [&](std::string why) {
    d.equivalent = false;
    cert.kind = "distinguished";
    cert.detail = std::move(why);
    return d;
  };
  auto matched = [&](std::string why) {
    d.equivalent = true;
    cert.kind = "matched";
    cert.detail = std::move(why);
    return d;
  };
  if (a.family != b.family) {
    return distinguished(std::string("family ") + family_name(a.family) + " vs " +
                         family_name(b.family));
  }
  const bool has_j = a.family == Family::UnboundedXJ || a.family == Family::BoundedPhiJ;
  if (has_j && a.j != b.j) {
    return distinguished("direction j=" + std::to_string(a.j) + " vs j=" + std::to_string(b.j));
  }
  if (has_j) cert.j = a.j;
  switch (a.family) {
    case Family::FockQ1:
    case Family::FockQn:
      return matched("Fock representation");
    case Family::Circle:
    case Family::BoundedPhiJ:
      if (a.phi != b.phi) {
        return distinguished("phase phi=" + fmt(a.phi) + " vs phi=" + fmt(b.phi));
      }
      cert.phi = a.phi;
      return matched("phase phi=" + fmt(a.phi));
    case Family::LineZ:
    case Family::UnboundedXJ: {
      const NormalizedParam na = normalize_x(a.x, a.q, x0);
      const NormalizedParam nb = normalize_x(b.x, b.q, x0);
      if (std::abs(na.x - nb.x) > 1e-12 * std::max(1.0, std::abs(na.x))) {
        return distinguished("orbit invariant Delta_x differs: normalized " + describe(na) +
                             " vs " + describe(nb));
      }
      cert.x = na.x;
      return matched("same orbit: " + describe(na) + ", " + describe(nb));
    }
  }
  return distinguished("unknown family");
}

RepSpec parse_spec_string(const std::string& text, double q, int n) {
  std::vector<std::pair<std::string, std::size_t>> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    parts.emplace_back(text.substr(start, colon - start), start);
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  const auto family = family_from_name(parts[0].first);
  if (!family) throw ParseError(0, "unknown family '" + parts[0].first + "'");

  auto number = [&](std::size_t idx) {
    if (idx >= parts.size()) throw ParseError(text.size(), "missing field");
    const auto& [s, off] = parts[idx];
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || s.empty()) {
      throw ParseError(off, "expected a number, got '" + s + "'");
    }
    return v;
  };
  auto integer = [&](std::size_t idx) {
    if (idx >= parts.size()) throw ParseError(text.size(), "missing field");
    const auto& [s, off] = parts[idx];
    int v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || s.empty()) {
      throw ParseError(off, "expected an integer, got '" + s + "'");
    }
    return v;
  };
  auto arity = [&](std::size_t expected) {
    if (parts.size() != expected) {
      throw ParseError(parts.size() > expected ? parts[expected].second : text.size(),
                       "expected " + std::to_string(expected - 1) + " parameter(s) for " +
                           parts[0].first);
    }
  };

  RepSpec spec;
  switch (*family) {
    case Family::FockQ1: arity(1); spec = RepSpec::fock_q1(q); break;
    case Family::Circle: arity(2); spec = RepSpec::circle(q, number(1)); break;
    case Family::LineZ: arity(2); spec = RepSpec::line_z(q, number(1)); break;
    case Family::FockQn: arity(1); spec = RepSpec::fock_qn(q, n); break;
    case Family::UnboundedXJ:
      arity(3);
      spec = RepSpec::unbounded_xj(q, n, integer(1), number(2));
      break;
    case Family::BoundedPhiJ:
      arity(3);
      spec = RepSpec::bounded_phi_j(q, n, integer(1), number(2));
      break;
  }
  spec.validate();
  return spec;
}

namespace {

double reduce_mod(double v, double period) {
  v = std::fmod(v, period);
  if (v < 0.0) v += period;
  if (period - v <= 1e-10 * period) v = 0.0;
  return v;
}

}  // namespace

Detection detect_parameters(const analysis::MatrixSystem& system,
                            const analysis::WoldOptions& options) {
  if (static_cast<int>(system.A.size()) != system.n || system.n < 1) {
    throw Error(ErrorCode::Structure, "generator count does not match n");
  }
  const double q = system.q;
  Detection det;
  std::vector<int> unbounded_dirs, unitary_dirs;
  bool any_vacuum = false;
  for (int k = 1; k <= system.n; ++k) {
    det.per_generator.push_back(
        analysis::q_wold(system.A[static_cast<std::size_t>(k - 1)], q, system.interior, options));
    const auto& w = det.per_generator.back();
    if (!w.unbounded_blocks.empty()) unbounded_dirs.push_back(k);
    if (w.unitary_block.present) unitary_dirs.push_back(k);
    if (!w.fock_blocks.empty()) any_vacuum = true;
  }
  auto unrecognized = [](const std::string& why) {
    throw Error(ErrorCode::UnrecognizedStructure, why);
  };

  if (!unbounded_dirs.empty()) {
    if (unbounded_dirs.size() > 1) unrecognized("unbounded blocks in several directions");
    const int j = unbounded_dirs.front();
    const auto& blocks = det.per_generator[static_cast<std::size_t>(j - 1)].unbounded_blocks;
    if (blocks.size() > 1) unrecognized("several unbounded orbits: the input is reducible");
    const double x = blocks.front().x;
    det.spec = system.n == 1 ? RepSpec::line_z(q, x) : RepSpec::unbounded_xj(q, system.n, j, x);
    return det;
  }
  if (!unitary_dirs.empty()) {
    if (unitary_dirs.size() > 1) unrecognized("unitary blocks in several directions");
    const int j = unitary_dirs.front();
    const auto& labels = det.per_generator[static_cast<std::size_t>(j - 1)].unitary_block.labels;
    const Eigen::MatrixXcd B =
        system.A[static_cast<std::size_t>(j - 1)].restricted(labels).to_dense() *
        std::sqrt(1.0 - q);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(B, false);
    const Complex first = eig.eigenvalues()[0];
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
      const Complex z = eig.eigenvalues()[i];
      if (std::abs(std::abs(z) - 1.0) > 1e-10) unrecognized("unitary block is not unit-modulus");
      if (std::abs(z - first) > 1e-10) unrecognized("several eigenphases: the input is reducible");
    }
    const double angle = std::arg(first);
    const double two_pi = 2.0 * std::numbers::pi;
    det.spec = system.n == 1
                   ? RepSpec::circle(q, reduce_mod(angle, two_pi))
                   : RepSpec::bounded_phi_j(q, system.n, j, reduce_mod(angle / two_pi, 1.0));
    return det;
  }
  if (!any_vacuum) unrecognized("no unbounded block, no unitary block and no vacuum");
  det.spec = system.n == 1 ? RepSpec::fock_q1(q) : RepSpec::fock_qn(q, system.n);
  return det;
}

}  // namespace qcuntz::classify
