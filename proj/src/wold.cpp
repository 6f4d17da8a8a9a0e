#include "qcuntz/wold.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "qcuntz/classify.hpp"
#include "qcuntz/error.hpp"
#include "qcuntz/kernels.hpp"

namespace qcuntz::analysis {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

void orthogonalize(VectorXcd& v, const std::vector<VectorXcd>& against) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const VectorXcd& f : against) v -= f * f.dot(v);
  }
}

// Row-reduces the span of the columns of N so that each basis vector is as
// sparse as the space allows, then orthonormalizes.
std::vector<VectorXcd> sparse_basis(const MatrixXcd& N) {
  MatrixXcd R = N.transpose();
  const Eigen::Index rows = R.rows(), cols = R.cols();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index piv = r;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (std::abs(R(i, c)) > std::abs(R(piv, c))) piv = i;
    }
    if (std::abs(R(piv, c)) < 1e-9) continue;
    R.row(r).swap(R.row(piv));
    R.row(r) /= R(r, c);
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i != r) R.row(i) -= R(i, c) * R.row(r);
    }
    ++r;
  }
  std::vector<VectorXcd> out;
  for (Eigen::Index i = 0; i < r; ++i) {
    VectorXcd v = R.row(i).transpose();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      if (std::abs(v[k]) < 1e-13) v[k] = 0.0;
    }
    orthogonalize(v, out);
    out.push_back(v / v.norm());
  }
  return out;
}

// Fixes the global phase so the largest entry is real and positive.
SparseVector to_sparse(const VectorXcd& v, const std::vector<std::size_t>& coords) {
  Eigen::Index big = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[big]) + 1e-12) big = i;
  }
  const Complex phase = std::abs(v[big]) > 0 ? std::conj(v[big]) / std::abs(v[big]) : 1.0;
  SparseVector out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Complex z = v[i] * phase;
    if (std::abs(z) > 1e-14) out.emplace_back(coords[static_cast<std::size_t>(i)], z);
  }
  return out;
}

enum class SlotKind { Fock, Unitary, Unbounded };

struct Slot {
  SlotKind kind;
  std::size_t id;  // index into fock list or unbounded eigen list
  std::vector<VectorXcd> vectors;
};

struct EigenMember {
  double value;
  std::vector<std::size_t> coords;
};

bool same_orbit(double a, double b, double q, double tol) {
  if (a < b) std::swap(a, b);
  double t = a;
  for (int step = 0; step <= 64; ++step) {
    if (std::abs(t - b) <= tol * (1.0 + std::abs(b))) return true;
    t = 1.0 + q * t;
  }
  return false;
}

}  // namespace

WoldDecomposition q_wold(const SparseMatrix& A, double q, const std::vector<std::size_t>& interior,
                         const WoldOptions& options) {
  if (A.rows() != A.cols()) throw Error(ErrorCode::Structure, "q_wold needs a square matrix");
  if (!(q >= 0.0 && q < 1.0)) throw Error(ErrorCode::OutOfRange, "q must lie in [0, 1)");
  const std::size_t N = A.rows();
  const double c = 1.0 / (1.0 - q);
  const double tol = options.tol;
  const double gtol = options.grouping_tol;

  WoldDecomposition out;
  out.q = q;
  out.x0 = options.x0 > 0.0 ? options.x0 : classify::default_x0(q);

  std::vector<char> is_interior(N, 0);
  for (std::size_t v : interior) {
    if (v >= N) throw Error(ErrorCode::OutOfRange, "interior index out of range");
    is_interior[v] = 1;
  }

  const SparseMatrix A_adj = A.adjoint();
  {
    const SparseMatrix R =
        A_adj * A - SparseMatrix::identity(N) - (A * A_adj).scaled(q);
    const auto res = kernels::parallel::column_norms(R, interior);
    const auto a_norms = kernels::parallel::column_norms(A, interior);
    for (std::size_t i = 0; i < interior.size(); ++i) {
      const double scale = std::max(1.0, a_norms[i] * a_norms[i]);
      out.relation_residual = std::max(out.relation_residual, res[i] / scale);
    }
    if (!(out.relation_residual <= tol)) {
      std::ostringstream msg;
      msg << "relation residual " << out.relation_residual << " exceeds tolerance " << tol
          << " on the flagged interior";
      throw Error(ErrorCode::RejectInput, msg.str());
    }
  }

  UnionFind comps(N);
  for (std::size_t col = 0; col < N; ++col) {
    for (const Entry& e : A.column(col)) comps.unite(e.row, col);
  }
  std::map<std::size_t, std::vector<std::size_t>> by_root;
  for (std::size_t v = 0; v < N; ++v) by_root[comps.find(v)].push_back(v);

  std::vector<int> owner(N, -1);  // global slot index per coordinate
  std::vector<Slot> slots;
  std::vector<EigenMember> unbounded_members;
  std::vector<std::size_t> unitary_coords;

  for (auto& [root, coords] : by_root) {
    const std::size_t m = coords.size();
    const MatrixXcd Ad = A.restricted(coords).to_dense();
    std::vector<Eigen::Index> inner;
    for (std::size_t i = 0; i < m; ++i) {
      if (is_interior[coords[i]]) inner.push_back(static_cast<Eigen::Index>(i));
    }
    const std::size_t first_slot = slots.size();
    std::vector<VectorXcd> fock_vectors;

    // (1) vacua: ker A^* restricted to span(interior).
    std::vector<VectorXcd> vacua;
    if (!inner.empty()) {
      MatrixXcd M(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(inner.size()));
      const MatrixXcd Adj = Ad.adjoint();
      for (std::size_t i = 0; i < inner.size(); ++i) M.col(static_cast<Eigen::Index>(i)) = Adj.col(inner[i]);
      Eigen::BDCSVD<MatrixXcd> svd(M, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      const double smax = sv.size() > 0 ? sv[0] : 0.0;
      Eigen::Index rank = 0;
      while (rank < sv.size() && sv[rank] > tol * std::max(1.0, smax)) ++rank;
      const Eigen::Index nullity = static_cast<Eigen::Index>(inner.size()) - rank;
      if (nullity > 0) {
        const MatrixXcd N_local = svd.matrixV().rightCols(nullity);
        for (const VectorXcd& small : sparse_basis(N_local)) {
          VectorXcd v = VectorXcd::Zero(static_cast<Eigen::Index>(m));
          for (std::size_t i = 0; i < inner.size(); ++i) v[inner[i]] = small[static_cast<Eigen::Index>(i)];
          vacua.push_back(v);
        }
      }
    }

    // (2) Fock chains.
    auto outside_weight = [&](const VectorXcd& v) {
      double w = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (!is_interior[coords[i]]) w += std::norm(v[static_cast<Eigen::Index>(i)]);
      }
      return std::sqrt(w);
    };
    auto grow_chain = [&](VectorXcd start, bool stop_at_boundary, bool boundary_vacuum) {
      orthogonalize(start, fock_vectors);
      const double n0 = start.norm();
      if (n0 <= gtol) return;
      start /= n0;
      Slot slot{SlotKind::Fock, out.fock_blocks.size(), {}};
      FockBlock block;
      block.vacuum = to_sparse(start, coords);
      block.boundary = boundary_vacuum;
      VectorXcd cur = start;
      fock_vectors.push_back(cur);
      slot.vectors.push_back(cur);
      while (true) {
        if (stop_at_boundary && (slot.vectors.size() > 1 || !boundary_vacuum) &&
            outside_weight(cur) > gtol) {
          break;
        }
        VectorXcd next = Ad * cur;
        const double raw = next.norm();
        orthogonalize(next, fock_vectors);
        const double nn = next.norm();
        if (raw == 0.0 || nn <= gtol * std::max(1.0, raw)) break;
        cur = next / nn;
        fock_vectors.push_back(cur);
        slot.vectors.push_back(cur);
      }
      block.chain_length = slot.vectors.size();
      out.fock_blocks.push_back(std::move(block));
      slots.push_back(std::move(slot));
    };
    for (const VectorXcd& u : vacua) grow_chain(u, true, false);

    // Boundary coordinates killed by A^* whose first step has a Fock weight
    // (below 1/(1-q)) start chains that run into the interior. Truncated
    // bilateral shifts have weights above 1/(1-q) and are left alone.
    for (std::size_t i = 0; i < m; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      if (is_interior[coords[i]] || Ad.row(ii).norm() > tol) continue;
      const double w = Ad.col(ii).squaredNorm();
      if (q > 0.0 && w >= c - gtol * (1.0 + c)) continue;
      VectorXcd e = VectorXcd::Zero(static_cast<Eigen::Index>(m));
      e[ii] = 1.0;
      grow_chain(e, true, true);
    }

    // (3) spectrum of A^*A on span(interior) minus the Fock part.
    std::vector<VectorXcd> Q;
    for (Eigen::Index i : inner) {
      VectorXcd r = VectorXcd::Zero(static_cast<Eigen::Index>(m));
      r[i] = 1.0;
      orthogonalize(r, fock_vectors);
      orthogonalize(r, Q);
      const double nr = r.norm();
      if (nr > 1e-6) Q.push_back(r / nr);
    }
    if (!Q.empty()) {
      MatrixXcd Qm(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(Q.size()));
      for (std::size_t i = 0; i < Q.size(); ++i) Qm.col(static_cast<Eigen::Index>(i)) = Q[i];
      const MatrixXcd AQ = Ad * Qm;
      const MatrixXcd H = AQ.adjoint() * AQ;
      Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(H);
      const MatrixXcd Z = Qm * eig.eigenvectors();
      std::vector<double> unclassified;
      Slot unitary{SlotKind::Unitary, 0, {}};
      for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        const double mu = eig.eigenvalues()[i];
        if (std::abs(mu - c) <= gtol * (1.0 + c)) {
          unitary.vectors.push_back(Z.col(i));
        } else if (q > 0.0 && mu > c) {
          slots.push_back({SlotKind::Unbounded, unbounded_members.size(), {Z.col(i)}});
          unbounded_members.push_back({mu, {}});
        } else {
          unclassified.push_back(mu);
        }
      }
      if (!unclassified.empty()) {
        std::ostringstream msg;
        msg << "eigenvalues of A^*A fit no block type:";
        for (double mu : unclassified) msg << ' ' << mu;
        throw Error(ErrorCode::UnclassifiedRemainder, msg.str());
      }
      if (!unitary.vectors.empty()) slots.push_back(std::move(unitary));
    }

    // Coordinates go to the local slot carrying most of their weight; the
    // rest attach to whichever slot they are coupled to through A.
    std::vector<int> local_owner(m, -1);
    auto assign_by_weight = [&] {
      for (std::size_t i = 0; i < m; ++i) {
        if (local_owner[i] >= 0) continue;
        double best = 1e-6;
        for (std::size_t s = first_slot; s < slots.size(); ++s) {
          double w = 0.0;
          for (const VectorXcd& z : slots[s].vectors) w += std::norm(z[static_cast<Eigen::Index>(i)]);
          if (w > best) {
            best = w;
            local_owner[i] = static_cast<int>(s);
          }
        }
      }
    };
    auto attach_by_coupling = [&] {
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t i = 0; i < m; ++i) {
          if (local_owner[i] >= 0) continue;
          std::map<int, double> coupling;
          for (std::size_t j = 0; j < m; ++j) {
            if (local_owner[j] < 0) continue;
            const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
            const double w = std::abs(Ad(ii, jj)) + std::abs(Ad(jj, ii));
            if (w > 0.0) coupling[local_owner[j]] += w;
          }
          if (coupling.empty()) continue;
          local_owner[i] = std::max_element(coupling.begin(), coupling.end(), [](auto& a, auto& b) {
                             return a.second < b.second;
                           })->first;
          changed = true;
        }
      }
    };
    assign_by_weight();
    attach_by_coupling();

    // Vacua sitting on the boundary: chains without the interior stop.
    for (std::size_t i = 0; i < m; ++i) {
      if (local_owner[i] >= 0) continue;
      const auto ii = static_cast<Eigen::Index>(i);
      if (Ad.row(ii).norm() > tol) continue;
      VectorXcd e = VectorXcd::Zero(static_cast<Eigen::Index>(m));
      e[ii] = 1.0;
      grow_chain(e, false, true);
      assign_by_weight();
      attach_by_coupling();
    }
    std::vector<std::size_t> stray;
    for (std::size_t i = 0; i < m; ++i) {
      if (local_owner[i] < 0) stray.push_back(coords[i]);
      else owner[coords[i]] = local_owner[i];
    }
    if (!stray.empty()) {
      std::ostringstream msg;
      msg << "coordinates not assignable to any block:";
      for (std::size_t v : stray) msg << ' ' << v;
      throw Error(ErrorCode::UnclassifiedRemainder, msg.str());
    }
  }

  for (std::size_t v = 0; v < N; ++v) {
    const Slot& s = slots[static_cast<std::size_t>(owner[v])];
    switch (s.kind) {
      case SlotKind::Fock: out.fock_blocks[s.id].labels.push_back(v); break;
      case SlotKind::Unitary: unitary_coords.push_back(v); break;
      case SlotKind::Unbounded: unbounded_members[s.id].coords.push_back(v); break;
    }
  }
  out.unitary_block.labels = unitary_coords;
  out.unitary_block.present = !unitary_coords.empty();

  // (4) orbits of t -> 1 + qt among the unbounded eigenvalues.
  UnionFind orbits(unbounded_members.size());
  for (std::size_t a = 0; a < unbounded_members.size(); ++a) {
    for (std::size_t b = a + 1; b < unbounded_members.size(); ++b) {
      if (orbits.find(a) == orbits.find(b)) continue;
      if (same_orbit(unbounded_members[a].value, unbounded_members[b].value, q, gtol)) {
        orbits.unite(a, b);
      }
    }
  }
  std::map<std::size_t, std::size_t> block_of_root;
  std::vector<int> unbounded_block_of(unbounded_members.size());
  for (std::size_t a = 0; a < unbounded_members.size(); ++a) {
    const std::size_t r = orbits.find(a);
    auto [it, fresh] = block_of_root.emplace(r, out.unbounded_blocks.size());
    if (fresh) out.unbounded_blocks.emplace_back();
    UnboundedBlock& blk = out.unbounded_blocks[it->second];
    unbounded_block_of[a] = static_cast<int>(it->second);
    blk.eigenvalues.push_back(unbounded_members[a].value);
    blk.labels.insert(blk.labels.end(), unbounded_members[a].coords.begin(),
                      unbounded_members[a].coords.end());
  }
  for (UnboundedBlock& blk : out.unbounded_blocks) {
    std::sort(blk.labels.begin(), blk.labels.end());
    std::sort(blk.eigenvalues.begin(), blk.eigenvalues.end());
    bool first = true;
    for (double mu : blk.eigenvalues) {
      const classify::NormalizedParam p = classify::normalize_x(mu, q, out.x0);
      if (first || std::abs(p.shift) < std::abs(blk.shift)) {
        blk.x = p.x;
        blk.shift = p.shift;
        blk.reference = mu;
        first = false;
      }
    }
  }

  // Leakage of A and A^* out of each coordinate block.
  std::vector<int> block_id(N);
  const int n_fock = static_cast<int>(out.fock_blocks.size());
  for (std::size_t v = 0; v < N; ++v) {
    const Slot& s = slots[static_cast<std::size_t>(owner[v])];
    switch (s.kind) {
      case SlotKind::Fock: block_id[v] = static_cast<int>(s.id); break;
      case SlotKind::Unitary: block_id[v] = n_fock; break;
      case SlotKind::Unbounded: block_id[v] = n_fock + 1 + unbounded_block_of[s.id]; break;
    }
  }
  for (const SparseMatrix* M : {&A, &A_adj}) {
    for (std::size_t v = 0; v < N; ++v) {
      double leak = 0.0, total = 0.0;
      for (const Entry& e : M->column(v)) {
        total += std::norm(e.value);
        if (block_id[e.row] != block_id[v]) leak += std::norm(e.value);
      }
      out.leakage = std::max(out.leakage, std::sqrt(leak) / std::max(1.0, std::sqrt(total)));
    }
  }
  return out;
}

MatrixSystem matrix_system(const OperatorFamily& family) {
  MatrixSystem s;
  s.q = family.q();
  s.n = family.n();
  for (int k = 1; k <= family.n(); ++k) s.A.push_back(family.A(k));
  s.interior = family.basis().interior(1);
  return s;
}

}  // namespace qcuntz::analysis
