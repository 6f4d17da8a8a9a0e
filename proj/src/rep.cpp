#include "qcuntz/rep.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "qcuntz/error.hpp"

namespace qcuntz {

const char* family_name(Family f) {
  switch (f) {
    case Family::FockQ1: return "fock1";
    case Family::Circle: return "circle";
    case Family::LineZ: return "linez";
    case Family::FockQn: return "fockn";
    case Family::UnboundedXJ: return "unbounded";
    case Family::BoundedPhiJ: return "bounded";
  }
  return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
  for (Family f : {Family::FockQ1, Family::Circle, Family::LineZ, Family::FockQn,
                   Family::UnboundedXJ, Family::BoundedPhiJ}) {
    if (name == family_name(f)) return f;
  }
  return std::nullopt;
}

RepSpec RepSpec::fock_q1(double q) { return {Family::FockQ1, q, 1, 1, 0.0, 0.0}; }
RepSpec RepSpec::circle(double q, double phi) { return {Family::Circle, q, 1, 1, 0.0, phi}; }
RepSpec RepSpec::line_z(double q, double x) { return {Family::LineZ, q, 1, 1, x, 0.0}; }
RepSpec RepSpec::fock_qn(double q, int n) { return {Family::FockQn, q, n, 1, 0.0, 0.0}; }
RepSpec RepSpec::unbounded_xj(double q, int n, int j, double x) {
  return {Family::UnboundedXJ, q, n, j, x, 0.0};
}
RepSpec RepSpec::bounded_phi_j(double q, int n, int j, double phi) {
  return {Family::BoundedPhiJ, q, n, j, 0.0, phi};
}

void RepSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidSpec, msg); };
  if (!std::isfinite(q) || q < 0.0 || q >= 1.0) fail("q must lie in [0, 1)");
  if (n < 1) fail("n must be >= 1");
  switch (family) {
    case Family::FockQ1:
    case Family::Circle:
    case Family::LineZ:
      if (n != 1) fail(std::string(family_name(family)) + " has exactly one generator");
      break;
    case Family::UnboundedXJ:
    case Family::BoundedPhiJ:
      if (j < 1 || j > n) fail("j must lie in 1..n");
      break;
    case Family::FockQn:
      break;
  }
  if (has_levels()) {
    if (q <= 0.0) fail("unbounded families need q in (0, 1)");
    if (!std::isfinite(x) || x <= 1.0 / (1.0 - q)) fail("x must exceed 1/(1-q)");
  }
  if (family == Family::Circle && !(phi >= 0.0 && phi < 2.0 * std::numbers::pi)) {
    fail("phi must lie in [0, 2pi)");
  }
  if (family == Family::BoundedPhiJ && !(phi >= 0.0 && phi < 1.0)) {
    fail("phi_j must lie in [0, 1)");
  }
}

std::string to_string(const BasisLabel& label) {
  switch (label.kind) {
    case LabelKind::FockLevel: return "m=" + std::to_string(label.level);
    case LabelKind::ZLevel: return "s=" + std::to_string(label.level);
    case LabelKind::WordOnly: return to_string(label.word);
    case LabelKind::WordLevel: return to_string(label.word) + "^" + std::to_string(label.level);
    case LabelKind::Single: return "*";
  }
  return "?";
}

bool Interval::contains(double t) const {
  const bool above = lo_closed ? t >= lo : t > lo;
  const bool below = hi_closed ? t <= hi : t < hi;
  return above && below;
}

bool IntervalSet::contains(double t) const {
  return std::any_of(parts.begin(), parts.end(), [t](const Interval& i) { return i.contains(t); });
}

IntervalSet IntervalSet::shifted_preimage(double q) const {
  if (!(q > 0.0)) throw Error(ErrorCode::OutOfRange, "shifted_preimage needs q > 0");
  IntervalSet out;
  for (const Interval& i : parts) {
    out.parts.push_back({(i.lo - 1.0) / q, (i.hi - 1.0) / q, i.lo_closed, i.hi_closed});
  }
  return out;
}

double level_weight_sq(double q, double x, int s) {
  const double c = 1.0 / (1.0 - q);
  return c + std::pow(q, s) * (x - c);
}

double fock_weight_sq(double q, int m) { return (1.0 - std::pow(q, m)) / (1.0 - q); }

Basis::Basis(std::vector<BasisLabel> labels, std::vector<int> depth)
    : labels_(std::move(labels)), depth_(std::move(depth)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!ordinal_.emplace(labels_[i], i).second) {
      throw Error(ErrorCode::InvalidTruncation, "duplicate basis label " + to_string(labels_[i]));
    }
  }
  if (depth_.size() != labels_.size()) depth_.assign(labels_.size(), kDepthCap);
}

std::optional<std::size_t> Basis::ordinal(const BasisLabel& label) const {
  auto it = ordinal_.find(label);
  if (it == ordinal_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> Basis::interior(int d) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < depth_.size(); ++i) {
    if (depth_[i] >= d) out.push_back(i);
  }
  return out;
}

Basis Basis::permuted(std::span<const std::size_t> perm) const {
  std::vector<BasisLabel> labels;
  std::vector<int> depth;
  for (std::size_t p : perm) {
    labels.push_back(labels_.at(p));
    depth.push_back(depth_.at(p));
  }
  return Basis(std::move(labels), std::move(depth));
}

std::optional<double> SpectralResolution::eigenvalue_of(std::size_t ordinal) const {
  for (const Eigenspace& e : spaces) {
    if (std::binary_search(e.ordinals.begin(), e.ordinals.end(), ordinal)) return e.value;
  }
  return std::nullopt;
}

namespace {

// One edge of the untruncated representation: A_k e_v = weight * e_target.
struct Edge {
  std::optional<BasisLabel> target;
  Complex weight;
};

Complex real_weight(double sq) { return {std::sqrt(sq), 0.0}; }

Complex circle_weight(const RepSpec& spec) {
  return std::polar(std::sqrt(1.0 / (1.0 - spec.q)), spec.phi);
}

Complex bounded_vacuum_weight(const RepSpec& spec) {
  return std::polar(std::sqrt(1.0 / (1.0 - spec.q)), 2.0 * std::numbers::pi * spec.phi);
}

// Word part of the unbounded and bounded families: A_k e_a = sqrt((1 - q^{m_k(k a)})/(1-q)) e_{k a}.
Edge word_step(const RepSpec& spec, const BasisLabel& v, int k) {
  const Letter letter(k, spec.n);
  BasisLabel t = v;
  t.word = sigma_k(letter, v.word);
  return {t, real_weight(fock_weight_sq(spec.q, m_k(letter, t.word)))};
}

Edge forward_edge(const RepSpec& spec, const BasisLabel& v, int k) {
  switch (spec.family) {
    case Family::FockQ1:
      return {BasisLabel{LabelKind::FockLevel, {}, v.level + 1},
              real_weight(fock_weight_sq(spec.q, v.level + 1))};
    case Family::Circle:
      return {v, circle_weight(spec)};
    case Family::LineZ:
      return {BasisLabel{LabelKind::ZLevel, {}, v.level + 1},
              real_weight(level_weight_sq(spec.q, spec.x, v.level))};
    case Family::FockQn:
      return word_step(spec, v, k);
    case Family::UnboundedXJ:
      if (k == spec.j && v.word.empty()) {
        return {BasisLabel{LabelKind::WordLevel, {}, v.level + 1},
                real_weight(level_weight_sq(spec.q, spec.x, v.level))};
      }
      return word_step(spec, v, k);
    case Family::BoundedPhiJ:
      if (k == spec.j && v.word.empty()) return {v, bounded_vacuum_weight(spec)};
      return word_step(spec, v, k);
  }
  return {std::nullopt, {}};
}

// The unique u with A_k e_u proportional to e_v, if any.
std::optional<BasisLabel> preimage(const RepSpec& spec, const BasisLabel& v, int k) {
  switch (spec.family) {
    case Family::FockQ1:
      if (v.level == 0) return std::nullopt;
      return BasisLabel{LabelKind::FockLevel, {}, v.level - 1};
    case Family::Circle:
      return v;
    case Family::LineZ:
      return BasisLabel{LabelKind::ZLevel, {}, v.level - 1};
    case Family::FockQn:
    case Family::UnboundedXJ:
    case Family::BoundedPhiJ:
      if (!v.word.empty()) {
        if (v.word.front() != k) return std::nullopt;
        BasisLabel u = v;
        u.word = sigma(v.word);
        return u;
      }
      if (k != spec.j || spec.family == Family::FockQn) return std::nullopt;
      if (spec.family == Family::BoundedPhiJ) return v;
      return BasisLabel{LabelKind::WordLevel, {}, v.level - 1};
  }
  return std::nullopt;
}

bool in_window(const RepSpec& spec, const TruncationParams& t, const BasisLabel& v) {
  switch (spec.family) {
    case Family::FockQ1: return v.level >= 0 && v.level <= t.s_max;
    case Family::Circle: return true;
    case Family::LineZ: return v.level >= t.s_min && v.level <= t.s_max;
    case Family::FockQn:
    case Family::BoundedPhiJ: return static_cast<int>(v.word.size()) <= t.L;
    case Family::UnboundedXJ:
      return static_cast<int>(v.word.size()) <= t.L && v.level >= t.s_min && v.level <= t.s_max;
  }
  return false;
}

void validate_truncation(const RepSpec& spec, const TruncationParams& t) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidTruncation, msg); };
  switch (spec.family) {
    case Family::FockQ1:
      if (t.s_max < 0) fail("FockQ1 needs s_max >= 0");
      break;
    case Family::Circle:
      break;
    case Family::LineZ:
      if (t.s_min > t.s_max) fail("level window is empty");
      break;
    case Family::FockQn:
    case Family::BoundedPhiJ:
      if (t.L < 0) fail("L must be >= 0");
      break;
    case Family::UnboundedXJ:
      if (t.L < 0) fail("L must be >= 0");
      if (t.s_min > t.s_max) fail("level window is empty");
      break;
  }
}

std::vector<BasisLabel> enumerate_labels(const RepSpec& spec, const TruncationParams& t) {
  std::vector<BasisLabel> labels;
  switch (spec.family) {
    case Family::FockQ1:
      for (int m = 0; m <= t.s_max; ++m) labels.push_back({LabelKind::FockLevel, {}, m});
      break;
    case Family::Circle:
      labels.push_back({LabelKind::Single, {}, 0});
      break;
    case Family::LineZ:
      for (int s = t.s_min; s <= t.s_max; ++s) labels.push_back({LabelKind::ZLevel, {}, s});
      break;
    case Family::FockQn:
      for (Word& w : enumerate_lambda(spec.n, t.L)) {
        labels.push_back({LabelKind::WordOnly, std::move(w), 0});
      }
      break;
    case Family::BoundedPhiJ:
      for (Word& w : enumerate_lambda_j(spec.n, Letter(spec.j, spec.n), t.L)) {
        labels.push_back({LabelKind::WordOnly, std::move(w), 0});
      }
      break;
    case Family::UnboundedXJ: {
      const auto words = enumerate_lambda_j(spec.n, Letter(spec.j, spec.n), t.L);
      for (int s = t.s_min; s <= t.s_max; ++s) {
        for (const Word& w : words) labels.push_back({LabelKind::WordLevel, w, s});
      }
      break;
    }
  }
  return labels;
}

std::int64_t resolve(const std::optional<BasisLabel>& target, const RepSpec& spec,
                     const TruncationParams& t, const std::map<BasisLabel, std::size_t>& ord) {
  if (!target) return Link::kZero;
  if (!in_window(spec, t, *target)) return Link::kOutside;
  return static_cast<std::int64_t>(ord.at(*target));
}

struct Links {
  std::vector<std::vector<std::int64_t>> forward, backward;  // [k-1][ordinal]
};

Links compute_links(const RepSpec& spec, const TruncationParams& t,
                    const std::vector<BasisLabel>& labels) {
  std::map<BasisLabel, std::size_t> ord;
  for (std::size_t i = 0; i < labels.size(); ++i) ord.emplace(labels[i], i);
  Links links;
  links.forward.assign(spec.n, std::vector<std::int64_t>(labels.size()));
  links.backward.assign(spec.n, std::vector<std::int64_t>(labels.size()));
  for (int k = 1; k <= spec.n; ++k) {
    for (std::size_t v = 0; v < labels.size(); ++v) {
      links.forward[k - 1][v] = resolve(forward_edge(spec, labels[v], k).target, spec, t, ord);
      links.backward[k - 1][v] = resolve(preimage(spec, labels[v], k), spec, t, ord);
    }
  }
  return links;
}

// depth(v) = 0 if some generator or adjoint leaves the window from v,
// otherwise 1 + min depth over its in-window neighbours (capped).
std::vector<int> interior_depths(const Links& links, std::size_t dim) {
  std::vector<std::vector<std::size_t>> incoming(dim);
  std::vector<int> depth(dim, Basis::kDepthCap);
  std::deque<std::size_t> queue;
  auto scan = [&](const std::vector<std::int64_t>& table) {
    for (std::size_t v = 0; v < dim; ++v) {
      const std::int64_t u = table[v];
      if (u == Link::kOutside) {
        if (depth[v] != 0) {
          depth[v] = 0;
          queue.push_back(v);
        }
      } else if (u >= 0) {
        incoming[static_cast<std::size_t>(u)].push_back(v);
      }
    }
  };
  for (const auto& t : links.forward) scan(t);
  for (const auto& t : links.backward) scan(t);
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : incoming[u]) {
      if (depth[v] > depth[u] + 1) {
        depth[v] = depth[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return depth;
}

}  // namespace

Basis build_basis(const RepSpec& spec, const TruncationParams& trunc) {
  spec.validate();
  validate_truncation(spec, trunc);
  auto labels = enumerate_labels(spec, trunc);
  if (labels.empty()) throw Error(ErrorCode::InvalidTruncation, "truncation is empty");
  const Links links = compute_links(spec, trunc, labels);
  auto depth = interior_depths(links, labels.size());
  return Basis(std::move(labels), std::move(depth));
}

std::int64_t OperatorFamily::forward(int k, std::size_t ordinal) const {
  return forward_.at(static_cast<std::size_t>(k - 1)).at(ordinal);
}

std::int64_t OperatorFamily::backward(int k, std::size_t ordinal) const {
  return backward_.at(static_cast<std::size_t>(k - 1)).at(ordinal);
}

OperatorFamily build_generators(const RepSpec& spec, const TruncationParams& trunc,
                                std::optional<Perturbation> perturb) {
  OperatorFamily f;
  f.spec_ = spec;
  f.trunc_ = trunc;
  f.basis_ = build_basis(spec, trunc);
  const auto& labels = f.basis_.labels();
  const std::size_t dim = labels.size();
  Links links = compute_links(spec, trunc, labels);
  f.forward_ = std::move(links.forward);
  f.backward_ = std::move(links.backward);

  if (perturb && (perturb->generator < 1 || perturb->generator > spec.n || perturb->ordinal >= dim)) {
    throw Error(ErrorCode::InvalidSpec, "perturbation target out of range");
  }

  for (int k = 1; k <= spec.n; ++k) {
    const auto& fwd = f.forward_[k - 1];
    const auto& bwd = f.backward_[k - 1];
    std::vector<Complex> out_weight(dim), in_weight(dim);
    for (std::size_t v = 0; v < dim; ++v) {
      if (fwd[v] != Link::kZero) out_weight[v] = forward_edge(spec, labels[v], k).weight;
      if (bwd[v] != Link::kZero) {
        in_weight[v] = forward_edge(spec, *preimage(spec, labels[v], k), k).weight;
      }
    }
    if (perturb && perturb->generator == k) {
      const std::size_t v = perturb->ordinal;
      out_weight[v] += perturb->delta;
      if (fwd[v] >= 0) in_weight[static_cast<std::size_t>(fwd[v])] = out_weight[v];
    }

    std::vector<std::vector<Entry>> cols(dim);
    std::vector<double> c_sq(dim), d_sq(dim);
    for (std::size_t v = 0; v < dim; ++v) {
      if (fwd[v] >= 0 && out_weight[v] != Complex{}) {
        cols[v].push_back({static_cast<std::size_t>(fwd[v]), out_weight[v]});
      }
      c_sq[v] = std::norm(out_weight[v]);
      d_sq[v] = std::norm(in_weight[v]);
    }
    SparseMatrix A = SparseMatrix::from_columns(dim, std::move(cols));
    f.A_adj_.push_back(A.adjoint());
    f.S_.push_back(polar_isometry(A));
    f.A_.push_back(std::move(A));
    f.resolutions_.push_back(spectral_resolution(d_sq));
    f.C_sq_.push_back(std::move(c_sq));
    f.D_sq_.push_back(std::move(d_sq));
  }
  return f;
}

OperatorFamily OperatorFamily::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != dim()) throw Error(ErrorCode::Structure, "permutation size mismatch");
  std::vector<std::size_t> inverse(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inverse.at(perm[i]) = i;
  auto remap = [&](std::int64_t link) {
    return link >= 0 ? static_cast<std::int64_t>(inverse[static_cast<std::size_t>(link)]) : link;
  };
  OperatorFamily f;
  f.spec_ = spec_;
  f.trunc_ = trunc_;
  f.basis_ = basis_.permuted(perm);
  for (std::size_t k = 0; k < A_.size(); ++k) {
    std::vector<std::int64_t> fwd(dim()), bwd(dim());
    std::vector<double> c_sq(dim()), d_sq(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      fwd[i] = remap(forward_[k][perm[i]]);
      bwd[i] = remap(backward_[k][perm[i]]);
      c_sq[i] = C_sq_[k][perm[i]];
      d_sq[i] = D_sq_[k][perm[i]];
    }
    f.forward_.push_back(std::move(fwd));
    f.backward_.push_back(std::move(bwd));
    f.A_.push_back(A_[k].permuted(perm));
    f.A_adj_.push_back(A_adj_[k].permuted(perm));
    f.S_.push_back(S_[k].permuted(perm));
    f.resolutions_.push_back(spectral_resolution(d_sq));
    f.C_sq_.push_back(std::move(c_sq));
    f.D_sq_.push_back(std::move(d_sq));
  }
  return f;
}

SparseMatrix polar_isometry(const SparseMatrix& A) {
  if (!A.is_weighted_shift()) {
    throw Error(ErrorCode::Structure, "polar_isometry needs at most one entry per column");
  }
  std::vector<std::vector<Entry>> cols(A.cols());
  for (std::size_t c = 0; c < A.cols(); ++c) {
    for (const Entry& e : A.column(c)) cols[c].push_back({e.row, e.value / std::abs(e.value)});
  }
  return SparseMatrix::from_columns(A.rows(), std::move(cols));
}

std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>> number_operators(
    const OperatorFamily& family) {
  std::vector<std::vector<double>> c, d;
  for (int k = 1; k <= family.n(); ++k) {
    c.push_back(family.C_sq(k));
    d.push_back(family.D_sq(k));
  }
  return {std::move(c), std::move(d)};
}

SpectralResolution spectral_resolution(const std::vector<double>& diagonal, double tol) {
  std::vector<std::size_t> order(diagonal.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return diagonal[a] < diagonal[b]; });
  SpectralResolution res;
  res.dim = diagonal.size();
  for (std::size_t idx : order) {
    const double v = diagonal[idx];
    if (res.spaces.empty() || v - res.spaces.back().value > tol) {
      res.spaces.push_back({v, {}});
    }
    res.spaces.back().ordinals.push_back(idx);
  }
  for (Eigenspace& e : res.spaces) std::sort(e.ordinals.begin(), e.ordinals.end());
  return res;
}

SparseMatrix apply_E(const SpectralResolution& resolution, const IntervalSet& delta) {
  std::vector<double> diag(resolution.dim, 0.0);
  for (const Eigenspace& e : resolution.spaces) {
    if (!delta.contains(e.value)) continue;
    for (std::size_t i : e.ordinals) diag[i] = 1.0;
  }
  return SparseMatrix::diagonal(diag);
}

}  // namespace qcuntz
