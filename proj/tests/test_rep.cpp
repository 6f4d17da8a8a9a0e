#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qcuntz/error.hpp"
#include "qcuntz/rep.hpp"
#include "support.hpp"

using namespace qcuntz;
using qcuntz::testing::parameter_grid;

TEST_CASE("basis sizes") {
  CHECK(build_basis(RepSpec::unbounded_xj(0.5, 2, 1, 2.8), {2, -1, 1}).size() == 12);
  CHECK(build_basis(RepSpec::circle(0.5, 1.0), {}).size() == 1);
  CHECK(build_basis(RepSpec::fock_qn(0.5, 2), {2, 0, 0}).size() == 7);
  CHECK(build_basis(RepSpec::unbounded_xj(0.5, 2, 1, 2.8), {6, -8, 8}).size() == 1088);
  CHECK_THROWS_AS(build_basis(RepSpec::line_z(0.5, 2.8), {0, 2, 1}), Error);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(RepSpec::line_z(0.5, 2.0).validate(), Error);
  CHECK_THROWS_AS(RepSpec::unbounded_xj(0.0, 2, 1, 3.0).validate(), Error);
  CHECK_THROWS_AS(RepSpec::bounded_phi_j(0.5, 2, 3, 0.1).validate(), Error);
  CHECK_THROWS_AS(RepSpec::bounded_phi_j(0.5, 2, 1, 1.0).validate(), Error);
  CHECK_THROWS_AS(RepSpec::circle(0.5, 7.0).validate(), Error);
  CHECK_NOTHROW(RepSpec::bounded_phi_j(0.0, 2, 1, 0.5).validate());
}

TEST_CASE("generator entries from the closed forms") {
  const auto fock = build_generators(RepSpec::fock_q1(0.5), {0, 0, 6});
  CHECK(std::abs(fock.A(1).at(3, 2) - std::sqrt(1.75)) < 1e-15);
  CHECK(fock.C_sq(1)[0] == doctest::Approx(1.0));

  const auto line = build_generators(RepSpec::line_z(0.5, 2.8), {0, -2, 2});
  const auto e0 = *line.basis().ordinal({LabelKind::ZLevel, {}, 0});
  const auto e1 = *line.basis().ordinal({LabelKind::ZLevel, {}, 1});
  CHECK(std::abs(line.A(1).at(e1, e0) - std::sqrt(2.8)) < 1e-15);

  const auto circle = build_generators(RepSpec::circle(0.5, 1.0), {});
  CHECK(std::abs(circle.A(1).at(0, 0) - std::polar(std::sqrt(2.0), 1.0)) < 1e-15);
  CHECK(std::abs(circle.S(1).at(0, 0) - std::polar(1.0, 1.0)) < 1e-15);
}

TEST_CASE("q = 0 weights are all 1") {
  for (const auto& c : parameter_grid()) {
    if (c.spec.q != 0.0) continue;
    const auto f = build_generators(c.spec, c.trunc);
    for (int k = 1; k <= f.n(); ++k) {
      for (std::size_t v = 0; v < f.dim(); ++v) {
        for (const Entry& e : f.A(k).column(v)) CHECK(std::abs(std::abs(e.value) - 1.0) < 1e-15);
      }
    }
  }
}

TEST_CASE("polar isometry") {
  const auto f = build_generators(RepSpec::fock_q1(0.5), {0, 0, 5});
  const SparseMatrix S = polar_isometry(f.A(1));
  for (std::size_t v = 0; v < 5; ++v) CHECK(S.at(v + 1, v) == Complex(1.0));
  CHECK(S.column(5).empty());
  CHECK(polar_isometry(SparseMatrix(3, 3)).nonzeros() == 0);
  SparseMatrix bad(2, 2);
  bad.set(0, 0, 1.0);
  bad.set(1, 0, 1.0);
  CHECK_THROWS_AS(polar_isometry(bad), Error);
}

TEST_CASE("number operators and resolutions") {
  const double q = 0.5;
  const auto f = build_generators(RepSpec::unbounded_xj(q, 2, 1, 2.8), {4, -3, 3});
  const auto w221 = *f.basis().ordinal({LabelKind::WordLevel, Word{2, 2, 1, 2}, 0});
  CHECK(f.D_sq(2)[w221] == doctest::Approx(1.5).epsilon(1e-15));
  for (std::size_t v = 0; v < f.dim(); ++v) {
    if (f.basis().label(v).word.empty()) CHECK(f.D_sq(2)[v] == 0.0);
  }
  // D_2^2 spectrum: {0} U {(1-q^m)/(1-q) : 1 <= m <= L}.
  const auto& res = f.resolution(2);
  REQUIRE(res.spaces.size() == 5);
  CHECK(res.spaces[0].value == 0.0);
  for (int m = 1; m <= 4; ++m) {
    CHECK(res.spaces[static_cast<std::size_t>(m)].value == doctest::Approx(fock_weight_sq(q, m)));
  }
  const auto bounded = build_generators(RepSpec::bounded_phi_j(q, 2, 1, 0.3), {3, 0, 0});
  const auto empty = *bounded.basis().ordinal({LabelKind::WordOnly, {}, 0});
  CHECK(bounded.D_sq(1)[empty] == doctest::Approx(2.0));
  const auto zero = spectral_resolution(std::vector<double>(4, 0.0));
  CHECK(zero.spaces.size() == 1);
  CHECK(zero.spaces[0].ordinals.size() == 4);
}

TEST_CASE("apply_E") {
  const auto f = build_generators(RepSpec::unbounded_xj(0.5, 2, 1, 2.8), {3, -2, 2});
  CHECK(apply_E(f.resolution(1), {Interval::all()}) == SparseMatrix::identity(f.dim()));
  CHECK(apply_E(f.resolution(1), {Interval::closed(-5, -4)}).nonzeros() == 0);
  const SparseMatrix P = apply_E(f.resolution(2), {Interval::point(0.0)});
  for (std::size_t v = 0; v < f.dim(); ++v) {
    const auto& w = f.basis().label(v).word;
    const bool expected = m_k(Letter(2, 2), w) == 0;
    CHECK((P.at(v, v) == Complex(1.0)) == expected);
  }
}

TEST_CASE("structural invariants over the grid") {
  for (const auto& c : parameter_grid()) {
    INFO(c.name);
    const auto f = build_generators(c.spec, c.trunc);
    const auto inner1 = f.basis().interior(1);
    const auto inner2 = f.basis().interior(2);
    CHECK(std::includes(inner1.begin(), inner1.end(), inner2.begin(), inner2.end()));
    for (int k = 1; k <= f.n(); ++k) {
      CHECK(f.A(k).is_weighted_shift());
      CHECK(f.A_adj(k) == f.A(k).adjoint());
      for (std::size_t v : inner1) {
        CHECK(f.C_sq(k)[v] == doctest::Approx(1.0 + c.spec.q * f.D_sq(k)[v]).epsilon(1e-12));
      }
      for (std::size_t v = 0; v < f.dim(); ++v) {
        CHECK(f.C_sq(k)[v] >= 0.0);
        CHECK(f.D_sq(k)[v] >= 0.0);
      }
    }
    if (c.spec.has_levels()) {
      for (int s = -8; s <= 8; ++s) {
        CHECK(level_weight_sq(c.spec.q, c.spec.x, s) ==
              doctest::Approx(1.0 + c.spec.q * level_weight_sq(c.spec.q, c.spec.x, s - 1)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("permuted family relabels consistently") {
  const auto f = build_generators(RepSpec::unbounded_xj(0.5, 2, 2, 2.8), {3, -2, 2});
  const auto perm = qcuntz::testing::random_permutation(f.dim(), 7);
  const auto g = f.permuted(perm);
  for (std::size_t i = 0; i < f.dim(); ++i) {
    CHECK(g.basis().label(i) == f.basis().label(perm[i]));
    CHECK(g.D_sq(2)[i] == f.D_sq(2)[perm[i]]);
    CHECK(g.basis().depth(i) == f.basis().depth(perm[i]));
  }
  CHECK(g.A(1) == f.A(1).permuted(perm));
}

TEST_CASE("perturbation changes one weight") {
  const RepSpec spec = RepSpec::fock_q1(0.5);
  const auto f = build_generators(spec, {0, 0, 6}, Perturbation{1, 2, 1e-3});
  CHECK(std::abs(f.A(1).at(3, 2) - (std::sqrt(1.75) + 1e-3)) < 1e-15);
}
