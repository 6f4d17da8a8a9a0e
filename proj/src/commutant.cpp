#include "qcuntz/commutant.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>

#include "qcuntz/error.hpp"

namespace qcuntz::analysis {

CommutantInput commutant_input(const OperatorFamily& family) {
  CommutantInput in;
  for (int k = 1; k <= family.n(); ++k) {
    in.S.push_back(family.S(k));
    in.D_sq.push_back(family.D_sq(k));
  }
  in.interior_count = family.basis().interior(2).size();
  in.untruncated = family.spec().family == Family::Circle;
  return in;
}

CommutantInput direct_sum(const CommutantInput& a, const CommutantInput& b) {
  if (a.S.size() != b.S.size()) throw Error(ErrorCode::Structure, "generator counts differ");
  CommutantInput out;
  for (std::size_t k = 0; k < a.S.size(); ++k) {
    out.S.push_back(qcuntz::direct_sum(a.S[k], b.S[k]));
    std::vector<double> d = a.D_sq[k];
    d.insert(d.end(), b.D_sq[k].begin(), b.D_sq[k].end());
    out.D_sq.push_back(std::move(d));
  }
  out.interior_count = a.interior_count + b.interior_count;
  out.untruncated = a.untruncated && b.untruncated;
  return out;
}

namespace {

// Unknowns X_ab are only allowed between coordinates with the same joint
// spectral signature, since X must commute with every E_k(delta).
struct Unknowns {
  std::size_t dim = 0;
  std::vector<std::size_t> cls, pos, base, size;
  std::size_t count = 0;

  explicit Unknowns(const CommutantInput& in, double tol) {
    dim = in.S.empty() ? 0 : in.S.front().cols();
    std::vector<std::vector<std::size_t>> sig(dim);
    for (const auto& d : in.D_sq) {
      const SpectralResolution res = spectral_resolution(d, tol);
      for (std::size_t s = 0; s < res.spaces.size(); ++s) {
        for (std::size_t v : res.spaces[s].ordinals) sig[v].push_back(s);
      }
    }
    std::map<std::vector<std::size_t>, std::size_t> ids;
    cls.resize(dim);
    pos.resize(dim);
    for (std::size_t v = 0; v < dim; ++v) {
      auto [it, fresh] = ids.emplace(sig[v], size.size());
      if (fresh) size.push_back(0);
      cls[v] = it->second;
      pos[v] = size[it->second]++;
    }
    for (std::size_t s : size) {
      base.push_back(count);
      count += s * s;
    }
  }

  std::optional<std::size_t> id(std::size_t a, std::size_t b) const {
    if (cls[a] != cls[b]) return std::nullopt;
    return base[cls[a]] + pos[a] * size[cls[a]] + pos[b];
  }
};

std::vector<SparseMatrix> generators(const CommutantInput& in) {
  std::vector<SparseMatrix> g;
  for (const SparseMatrix& s : in.S) {
    g.push_back(s);
    g.push_back(s.adjoint());
  }
  return g;
}

bool is_monomial(const SparseMatrix& m) {
  std::vector<int> row_hits(m.rows(), 0);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (m.column(c).size() > 1) return false;
    for (const Entry& e : m.column(c)) {
      if (++row_hits[e.row] > 1) return false;
    }
  }
  return true;
}

// X_u = ratio[u] * X_parent[u].
struct PhaseUnionFind {
  std::vector<std::size_t> parent;
  std::vector<Complex> ratio;
  std::vector<char> zero;
  double tol;

  PhaseUnionFind(std::size_t n, double t) : parent(n), ratio(n, 1.0), zero(n, 0), tol(t) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  std::pair<std::size_t, Complex> find(std::size_t u) {
    std::vector<std::size_t> path;
    std::size_t root = u;
    while (parent[root] != root) {
      path.push_back(root);
      root = parent[root];
    }
    // Compress from the top so each node points at the root directly.
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      const std::size_t p = parent[*it];
      if (p != root) ratio[*it] *= ratio[p];
      parent[*it] = root;
    }
    return {root, u == root ? Complex{1.0} : ratio[u]};
  }

  void link(std::size_t u, std::size_t v, Complex gamma) {
    const auto [ru, a] = find(u);
    const auto [rv, b] = find(v);
    const Complex rel = gamma * b / a;
    if (ru == rv) {
      if (std::abs(rel - 1.0) > tol) zero[ru] = 1;
      return;
    }
    parent[ru] = rv;
    ratio[ru] = rel;
    if (zero[ru]) zero[rv] = 1;
  }

  void force_zero(std::size_t u) { zero[find(u).first] = 1; }
};

}  // namespace

int commutant_dimension_monomial(const CommutantInput& input, double tol) {
  const Unknowns unk(input, tol);
  const std::size_t N = unk.dim;
  PhaseUnionFind uf(unk.count, tol);
  for (const SparseMatrix& G : generators(input)) {
    if (!is_monomial(G)) throw Error(ErrorCode::Structure, "generator is not monomial");
    std::vector<std::int64_t> target(N, -1), source(N, -1);
    std::vector<Complex> weight(N);
    for (std::size_t b = 0; b < N; ++b) {
      for (const Entry& e : G.column(b)) {
        target[b] = static_cast<std::int64_t>(e.row);
        source[e.row] = static_cast<std::int64_t>(b);
        weight[b] = e.value;
      }
    }
    // (XG - GX)_ab = g_b X_{a,t(b)} - g_{s(a)} X_{s(a),b}.
    for (std::size_t a = 0; a < N; ++a) {
      for (std::size_t b = 0; b < N; ++b) {
        std::optional<std::size_t> u1, u2;
        if (target[b] >= 0) u1 = unk.id(a, static_cast<std::size_t>(target[b]));
        if (source[a] >= 0) u2 = unk.id(static_cast<std::size_t>(source[a]), b);
        if (u1 && u2) {
          uf.link(*u1, *u2, weight[static_cast<std::size_t>(source[a])] / weight[b]);
        } else if (u1) {
          uf.force_zero(*u1);
        } else if (u2) {
          uf.force_zero(*u2);
        }
      }
    }
  }
  int dim = 0;
  for (std::size_t u = 0; u < unk.count; ++u) {
    if (uf.parent[u] == u && !uf.zero[u]) ++dim;
  }
  return dim;
}

int commutant_dimension_dense(const CommutantInput& input, double tol) {
  const Unknowns unk(input, tol);
  const std::size_t N = unk.dim;
  const auto U = static_cast<Eigen::Index>(unk.count);
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(U, U);
  for (const SparseMatrix& G : generators(input)) {
    const SparseMatrix Gt = G.adjoint();  // column a of Gt lists row a of G (conjugated)
    for (std::size_t a = 0; a < N; ++a) {
      for (std::size_t b = 0; b < N; ++b) {
        std::map<std::size_t, Complex> row;
        for (const Entry& e : G.column(b)) {
          if (auto u = unk.id(a, e.row)) row[*u] += e.value;
        }
        for (const Entry& e : Gt.column(a)) {
          if (auto u = unk.id(e.row, b)) row[*u] -= std::conj(e.value);
        }
        for (const auto& [i, vi] : row) {
          for (const auto& [j, vj] : row) {
            gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += std::conj(vi) * vj;
          }
        }
      }
    }
  }
  if (U == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  int dim = 0;
  for (Eigen::Index i = 0; i < U; ++i) {
    if (eig.eigenvalues()[i] <= tol * scale) ++dim;
  }
  return dim;
}

CommutantReport commutant_dimension(const CommutantInput& input, double tol) {
  CommutantReport r;
  r.basis_size = input.S.empty() ? 0 : input.S.front().cols();
  r.interior_count = input.interior_count;
  const bool monomial = std::all_of(input.S.begin(), input.S.end(), is_monomial);
  r.method = monomial ? "monomial" : "dense";
  r.dimension = monomial ? commutant_dimension_monomial(input, tol)
                         : commutant_dimension_dense(input, tol);
  r.status = (input.interior_count >= 4 || input.untruncated) ? Status::Pass
                                                               : Status::Inconclusive;
  return r;
}

}  // namespace qcuntz::analysis
