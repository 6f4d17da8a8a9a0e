#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "qcuntz/rep.hpp"
#include "qcuntz/sparse.hpp"

namespace qcuntz::testing {

struct GridCase {
  RepSpec spec;
  TruncationParams trunc;
  std::string name;
};

inline std::string describe(const RepSpec& s) {
  std::string out = std::string(family_name(s.family)) + " q=" + std::to_string(s.q) +
                    " n=" + std::to_string(s.n);
  if (s.family == Family::UnboundedXJ || s.family == Family::BoundedPhiJ) {
    out += " j=" + std::to_string(s.j);
  }
  if (s.has_levels()) out += " x=" + std::to_string(s.x);
  if (s.family == Family::Circle || s.family == Family::BoundedPhiJ) {
    out += " phi=" + std::to_string(s.phi);
  }
  return out;
}

/// q in {0, 0.3, 0.5, 0.9} x n in {1, 2, 3} x every family defined there.
/// Word lengths: L=6 for n=2, L=5 for n=3; level window [-8, 8].
inline std::vector<GridCase> parameter_grid(bool include_q0 = true) {
  std::vector<GridCase> out;
  for (double q : {0.0, 0.3, 0.5, 0.9}) {
    if (q == 0.0 && !include_q0) continue;
    const double x = 1.0 / (1.0 - q) + 0.8;
    out.push_back({RepSpec::fock_q1(q), {0, 0, 12}, ""});
    out.push_back({RepSpec::circle(q, 1.3), {}, ""});
    if (q > 0.0) out.push_back({RepSpec::line_z(q, x), {0, -8, 8}, ""});
    for (int n : {2, 3}) {
      const int L = n == 2 ? 6 : 5;
      out.push_back({RepSpec::fock_qn(q, n), {L, 0, 0}, ""});
      for (int j : {1, n}) {
        if (q > 0.0) out.push_back({RepSpec::unbounded_xj(q, n, j, x), {L, -8, 8}, ""});
        out.push_back({RepSpec::bounded_phi_j(q, n, j, 0.25), {L, 0, 0}, ""});
      }
    }
  }
  for (GridCase& c : out) c.name = describe(c.spec);
  return out;
}

inline std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Fock truncation (+) (1-q)^{-1/2} times a cyclic 3x3 permutation (+) LineZ
/// truncation, optionally relabelled by a random permutation. The coordinate
/// lists report where each planted block ended up.
struct PlantedSystem {
  SparseMatrix A;
  std::vector<std::size_t> interior;
  std::vector<std::size_t> fock, unitary, line;
};

inline PlantedSystem planted_system(double q, double x, std::uint64_t seed, bool shuffle = true) {
  const auto fock = build_generators(RepSpec::fock_q1(q), {0, 0, 10});
  const auto line = build_generators(RepSpec::line_z(q, x), {0, -8, 8});
  SparseMatrix perm(3, 3);
  for (std::size_t i = 0; i < 3; ++i) perm.set((i + 1) % 3, i, std::sqrt(1.0 / (1.0 - q)));
  const SparseMatrix A = direct_sum(direct_sum(fock.A(1), perm), line.A(1));
  const std::size_t nf = fock.dim(), nl = line.dim(), N = nf + 3 + nl;

  std::vector<std::size_t> interior, f_coords, u_coords, l_coords;
  for (std::size_t v : fock.basis().interior(1)) interior.push_back(v);
  for (std::size_t v = 0; v < 3; ++v) interior.push_back(nf + v);
  for (std::size_t v : line.basis().interior(1)) interior.push_back(nf + 3 + v);
  for (std::size_t v = 0; v < nf; ++v) f_coords.push_back(v);
  for (std::size_t v = 0; v < 3; ++v) u_coords.push_back(nf + v);
  for (std::size_t v = 0; v < nl; ++v) l_coords.push_back(nf + 3 + v);

  std::vector<std::size_t> p(N);
  std::iota(p.begin(), p.end(), 0);
  if (shuffle) p = random_permutation(N, seed);
  std::vector<std::size_t> inv(N);
  for (std::size_t i = 0; i < N; ++i) inv[p[i]] = i;
  auto remap = [&](std::vector<std::size_t> v) {
    for (auto& i : v) i = inv[i];
    std::sort(v.begin(), v.end());
    return v;
  };
  return {A.permuted(p), remap(interior), remap(f_coords), remap(u_coords), remap(l_coords)};
}

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

}  // namespace qcuntz::testing
