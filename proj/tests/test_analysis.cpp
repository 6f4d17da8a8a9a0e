#include <doctest.h>

#include <cmath>
#include <random>

#include "qcuntz/analysis.hpp"
#include "qcuntz/commutant.hpp"
#include "qcuntz/error.hpp"
#include "support.hpp"

using namespace qcuntz;
using namespace qcuntz::analysis;
using qcuntz::testing::parameter_grid;

TEST_CASE("relation residuals vanish on every grid family") {
  for (const auto& c : parameter_grid()) {
    INFO(c.name);
    const auto f = build_generators(c.spec, c.trunc);
    const auto r = relation_residuals(f, 1e-12);
    CHECK(r.pass());
    CHECK(r.vectors_checked > 0);
  }
}

TEST_CASE("relation residuals: controls") {
  const auto circle = build_generators(RepSpec::circle(0.9, 2.0), {});
  CHECK(relation_residuals(circle).max_residual < 1e-15);
  const auto bad = build_generators(RepSpec::fock_q1(0.5), {0, 0, 10}, Perturbation{1, 4, 1e-3});
  const auto r = relation_residuals(bad, 1e-12);
  CHECK(r.status == Status::Fail);
  CHECK(r.max_residual > 1e-4);
  const auto tiny = build_generators(RepSpec::fock_qn(0.5, 2), {0, 0, 0});
  CHECK(relation_residuals(tiny).status == Status::Inconclusive);
}

TEST_CASE("shift identity") {
  std::mt19937_64 rng(3);
  for (const auto& c : parameter_grid()) {
    INFO(c.name);
    const auto f = build_generators(c.spec, c.trunc);
    for (int k = 1; k <= f.n(); ++k) {
      const auto deltas = sample_intervals(f, k, 20, rng);
      CHECK(check_shift_identity(f, k, deltas, 1e-12).pass());
    }
  }
  const auto u = build_generators(RepSpec::unbounded_xj(0.5, 2, 1, 2.8), {4, -6, 6});
  CHECK(check_shift_identity(u, 1, {{Interval::closed(0.0, 1e4)}}).pass());
  CHECK(check_shift_identity(u, 1, {{Interval::closed(-3.0, -2.0)}}).max_residual == 0.0);
}

TEST_CASE("shift identity at delta = {0} on the Fock representation") {
  const auto f = build_generators(RepSpec::fock_q1(0.5), {0, 0, 10});
  const IntervalSet zero{Interval::point(0.0)};
  const SparseMatrix lhs = apply_E(f.resolution(1), zero) * f.S(1);
  // (1 - SS^*) S = 0 on the interior.
  const SparseMatrix vac = SparseMatrix::identity(f.dim()) - f.S(1) * f.S(1).adjoint();
  for (std::size_t v : f.basis().interior(1)) {
    CHECK(lhs.column(v).empty());
    CHECK((vac * f.S(1)).column(v).empty());
  }
  CHECK(check_shift_identity(f, 1, {zero}).pass());
}

TEST_CASE("shift identity detects a wrong weight") {
  const auto bad = build_generators(RepSpec::line_z(0.5, 2.8), {0, -6, 6}, Perturbation{1, 6, 0.01});
  std::mt19937_64 rng(5);
  CHECK_FALSE(check_shift_identity(bad, 1, sample_intervals(bad, 1, 30, rng)).pass());
}

TEST_CASE("structure (b) and (c)") {
  for (const auto& c : parameter_grid()) {
    INFO(c.name);
    CHECK(check_structure_bc(build_generators(c.spec, c.trunc)).pass());
  }
}

TEST_CASE("eigenvalue laws") {
  for (const auto& c : parameter_grid()) {
    const Family fam = c.spec.family;
    const auto f = build_generators(c.spec, c.trunc);
    if (fam == Family::FockQ1 || fam == Family::Circle || fam == Family::LineZ) {
      CHECK_THROWS_AS(check_eigenvalue_laws(f), Error);
      continue;
    }
    INFO(c.name);
    CHECK(check_eigenvalue_laws(f, 1e-12).pass());
  }
}

TEST_CASE("series number operator") {
  const auto f = build_generators(RepSpec::fock_q1(0.5), {0, 0, 48});
  const auto rep = series_number_operator(f, 1, 20, 1e-12);
  CHECK(rep.against_c_sq.pass());
  CHECK(rep.sqrt_form.pass());
  CHECK(rep.against_c_sq.vectors_checked >= 20);
  CHECK(rep.linear_form_discrepancy);
  CHECK(rep.linear_form_deviation > 0.1);
  CHECK(rep.tail_bound == doctest::Approx(std::pow(0.5, 21) / 0.5));

  double previous = INFINITY;
  for (int K = 0; K <= 25; ++K) {
    const auto r = series_number_operator(f, 1, K);
    CHECK(r.against_c_sq.max_residual <= r.tail_bound + 1e-12);
    CHECK(r.against_c_sq.max_residual <= previous);
    previous = r.against_c_sq.max_residual;
  }

  const auto g = build_generators(RepSpec::fock_q1(0.0), {0, 0, 10});
  for (int K : {0, 3}) {
    const auto r = series_number_operator(g, 1, K);
    CHECK(r.series == SparseMatrix::identity(g.dim()));
    CHECK(r.sqrt_form.max_residual == 0.0);
    CHECK_FALSE(r.linear_form_discrepancy);
  }
  CHECK(g.A(1) == g.S(1));
}

TEST_CASE("series on bounded directions of word families") {
  const auto b = build_generators(RepSpec::bounded_phi_j(0.3, 2, 1, 0.25), {6, 0, 0});
  for (int k = 1; k <= 2; ++k) {
    const auto r = series_number_operator(b, k, 3);
    CHECK(r.against_c_sq.pass());
    CHECK(r.sqrt_form.pass());
  }
}

TEST_CASE("spectrum check") {
  const auto f = build_generators(RepSpec::fock_q1(0.5), {0, 0, 6});
  const auto s = spectrum_check(f, 1);
  CHECK(s.report.pass());
  REQUIRE(s.computed.size() == 7);
  for (int m = 1; m <= 7; ++m) {
    CHECK(s.computed[static_cast<std::size_t>(m - 1)] ==
          doctest::Approx((1.0 - std::pow(0.5, m)) / 0.5).epsilon(1e-14));
  }
  const auto c = spectrum_check(build_generators(RepSpec::circle(0.3, 0.2), {}), 1);
  REQUIRE(c.computed.size() == 1);
  CHECK(c.computed[0] == doctest::Approx(1.0 / 0.7));
  const auto line = spectrum_check(build_generators(RepSpec::line_z(0.5, 2.8), {0, -2, 2}), 1);
  const std::vector<double> lambdas{2.2, 2.4, 2.8, 3.6, 5.2};
  REQUIRE(line.computed.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(line.computed[i] == doctest::Approx(lambdas[i]).epsilon(1e-14));
  for (const auto& g : parameter_grid()) {
    INFO(g.name);
    const auto fam = build_generators(g.spec, g.trunc);
    for (int k = 1; k <= fam.n(); ++k) CHECK(spectrum_check(fam, k).report.pass());
  }
}

TEST_CASE("commutant dimension") {
  const auto u = build_generators(RepSpec::unbounded_xj(0.5, 2, 1, 2.8), {4, -4, 4});
  const auto one = commutant_dimension(commutant_input(u));
  CHECK(one.dimension == 1);
  CHECK(one.status == Status::Pass);
  CHECK(one.method == "monomial");
  const auto v = build_generators(RepSpec::unbounded_xj(0.5, 2, 1, 2.9), {4, -4, 4});
  CHECK(commutant_dimension(direct_sum(commutant_input(u), commutant_input(v))).dimension >= 2);
  CHECK(commutant_dimension(commutant_input(build_generators(RepSpec::circle(0.5, 1.0), {}))).dimension == 1);
  const auto small = commutant_dimension(commutant_input(build_generators(RepSpec::fock_q1(0.5), {0, 0, 2})));
  CHECK(small.status == Status::Inconclusive);
}

TEST_CASE("monomial commutant solver agrees with the dense null space") {
  const std::vector<std::pair<RepSpec, TruncationParams>> cases{
      {RepSpec::unbounded_xj(0.5, 2, 1, 2.8), {2, -2, 2}},
      {RepSpec::fock_qn(0.3, 2), {3, 0, 0}},
      {RepSpec::bounded_phi_j(0.5, 2, 2, 0.25), {3, 0, 0}},
      {RepSpec::fock_q1(0.5), {0, 0, 8}},
  };
  for (const auto& [spec, trunc] : cases) {
    const auto in = commutant_input(build_generators(spec, trunc));
    CHECK(commutant_dimension_monomial(in) == commutant_dimension_dense(in));
    const auto twice = direct_sum(in, in);
    CHECK(commutant_dimension_monomial(twice) == commutant_dimension_dense(twice));
    CHECK(commutant_dimension_monomial(twice) == 4 * commutant_dimension_monomial(in));
  }
}
