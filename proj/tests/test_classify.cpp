#include <doctest.h>

#include <cmath>
#include <random>

#include "qcuntz/classify.hpp"
#include "qcuntz/error.hpp"
#include "support.hpp"

using namespace qcuntz;
using namespace qcuntz::classify;

TEST_CASE("normalize_x examples") {
  auto a = normalize_x(2.8, 0.5, 3.0);
  CHECK(a.x == doctest::Approx(2.8));
  CHECK(a.shift == 0);
  auto b = normalize_x(2.2, 0.5, 3.0);
  CHECK(std::abs(b.x - 2.8) < 1e-12);
  CHECK(b.shift == 2);
  auto c = normalize_x(3.6, 0.5, 3.0);
  CHECK(std::abs(c.x - 2.8) < 1e-12);
  CHECK(c.shift == -1);
  CHECK(describe(b) == "x=2.8 (shift +2 from 2.2)");
  CHECK_THROWS_AS(normalize_x(2.0, 0.5, 3.0), Error);
  CHECK_THROWS_AS(normalize_x(1.5, 0.5, 3.0), Error);
  // Boundaries: x0 itself stays, 1 + q x0 maps to x0.
  CHECK(normalize_x(3.0, 0.5, 3.0).x == 3.0);
  CHECK(normalize_x(2.5, 0.5, 3.0).x == 3.0);
  CHECK(normalize_x(2.5, 0.5, 3.0).shift == 1);
}

TEST_CASE("normalize_x properties") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uq(0.05, 0.95), ux(1e-3, 50.0);
  for (int t = 0; t < 500; ++t) {
    const double q = uq(rng);
    const double c = 1.0 / (1.0 - q);
    const double y = c + ux(rng);
    const double x0 = default_x0(q);
    const FundamentalDomain dom{q, x0};
    const auto n = normalize_x(y, q, x0);
    CHECK(dom.contains(n.x));
    CHECK(std::abs(orbit_step(q, n.x, n.shift) - y) <= 1e-12 * y);
    const auto m = normalize_x(1.0 + q * y, q, x0);
    CHECK(std::abs(m.x - n.x) <= 1e-12 * n.x);
    CHECK(m.shift == n.shift + 1);
  }
}

TEST_CASE("delta_set") {
  const auto d = delta_set(2.8, 0.5, 2.0, 4.0, 4);
  const std::vector<double> expected{2.05, 2.1, 2.2, 2.4, 2.8, 3.6};
  REQUIRE(d.size() == expected.size());
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == doctest::Approx(expected[i]).epsilon(1e-14));
  CHECK_THROWS_AS(delta_set(2.8, 0.5, 2.0, 4.0), Error);
  CHECK(delta_set(2.8, 0.5, 0.0, 1.9).empty());
  const auto a = delta_set(2.8, 0.5, 2.01, 40.0);
  const auto b = delta_set(1.0 + 0.5 * 2.8, 0.5, 2.01, 40.0);
  const auto c = delta_set(normalize_x(2.2, 0.5, 4.0).x, 0.5, 2.01, 40.0);
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() == c.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i] - b[i]) <= 1e-12 * a[i]);
    CHECK(std::abs(a[i] - c[i]) <= 1e-12 * a[i]);
  }
}

TEST_CASE("same_rep") {
  const double q = 0.5;
  auto U = [&](int j, double x) { return RepSpec::unbounded_xj(q, 2, j, x); };
  CHECK(same_rep(U(1, 2.2), U(1, 2.8), 3.0).equivalent);
  CHECK_FALSE(same_rep(U(1, 2.8), U(2, 2.8), 3.0).equivalent);
  CHECK_FALSE(same_rep(U(1, 2.8), U(1, 2.9), 3.0).equivalent);
  CHECK(same_rep(RepSpec::fock_qn(q, 2), RepSpec::fock_qn(q, 2), 3.0).equivalent);
  CHECK_FALSE(same_rep(RepSpec::fock_qn(q, 2), U(1, 2.8), 3.0).equivalent);
  CHECK(same_rep(RepSpec::circle(q, 1.0), RepSpec::circle(q, 1.0), 3.0).equivalent);
  CHECK_FALSE(same_rep(RepSpec::bounded_phi_j(q, 2, 1, 0.25), RepSpec::bounded_phi_j(q, 2, 1, 0.5), 3.0).equivalent);
  CHECK_THROWS_AS(same_rep(U(1, 2.8), RepSpec::unbounded_xj(0.3, 2, 1, 2.8), 3.0), Error);
  CHECK_THROWS_AS(same_rep(U(1, 2.8), RepSpec::unbounded_xj(q, 3, 1, 2.8), 3.0), Error);
  const auto d = same_rep(U(1, 2.2), U(1, 2.8), 3.0);
  REQUIRE(d.certificate.x);
  CHECK(*d.certificate.x == doctest::Approx(2.8));
  CHECK(*d.certificate.j == 1);
}

TEST_CASE("same_rep is reflexive, symmetric and orbit-invariant") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ux(0.01, 10.0);
  const double q = 0.3, c = 1.0 / 0.7, x0 = default_x0(q);
  for (int t = 0; t < 50; ++t) {
    const double x = c + ux(rng), y = c + ux(rng);
    const RepSpec a = RepSpec::unbounded_xj(q, 2, 1, x), b = RepSpec::unbounded_xj(q, 2, 1, y);
    CHECK(same_rep(a, a, x0).equivalent);
    CHECK(same_rep(a, b, x0).equivalent == same_rep(b, a, x0).equivalent);
    const RepSpec a2 = RepSpec::unbounded_xj(q, 2, 1, 1.0 + q * x);
    CHECK(same_rep(a, a2, x0).equivalent);
    CHECK(same_rep(a2, b, x0).equivalent == same_rep(a, b, x0).equivalent);
  }
}

TEST_CASE("spec strings") {
  const RepSpec u = parse_spec_string("unbounded:1:2.2", 0.5, 2);
  CHECK(u.family == Family::UnboundedXJ);
  CHECK(u.j == 1);
  CHECK(u.x == 2.2);
  CHECK(parse_spec_string("bounded:2:0.25", 0.5, 2).phi == 0.25);
  CHECK(parse_spec_string("fock1", 0.5, 1).family == Family::FockQ1);
  CHECK(parse_spec_string("linez:2.8", 0.5, 1).x == 2.8);
  CHECK_THROWS_AS(parse_spec_string("unbounded:1", 0.5, 2), ParseError);
  CHECK_THROWS_AS(parse_spec_string("nope:1:2", 0.5, 2), ParseError);
  CHECK_THROWS_AS(parse_spec_string("unbounded:1:abc", 0.5, 2), ParseError);
  CHECK_THROWS_AS(parse_spec_string("unbounded:1:1.5", 0.5, 2), Error);
}

TEST_CASE("detect_parameters round trips") {
  const auto u = build_generators(RepSpec::unbounded_xj(0.5, 2, 2, 2.8), {4, -6, 6});
  const auto perm = qcuntz::testing::random_permutation(u.dim(), 3);
  analysis::WoldOptions opt;
  opt.x0 = 3.0;
  const auto d = detect_parameters(analysis::matrix_system(u.permuted(perm)), opt);
  CHECK(d.spec.family == Family::UnboundedXJ);
  CHECK(d.spec.j == 2);
  CHECK(std::abs(d.spec.x - 2.8) < 1e-10);

  const auto b = build_generators(RepSpec::bounded_phi_j(0.5, 2, 1, 0.25), {4, 0, 0});
  const auto db = detect_parameters(analysis::matrix_system(b));
  CHECK(db.spec.family == Family::BoundedPhiJ);
  CHECK(db.spec.j == 1);
  CHECK(std::abs(db.spec.phi - 0.25) < 1e-10);

  const auto f = build_generators(RepSpec::fock_qn(0.5, 3), {3, 0, 0});
  CHECK(detect_parameters(analysis::matrix_system(f)).spec.family == Family::FockQn);

  analysis::MatrixSystem empty{0.5, 1, {SparseMatrix(2, 2)}, {}};
  SparseMatrix m(2, 2);
  m.set(0, 0, std::sqrt(2.0));
  m.set(1, 1, Complex(0, std::sqrt(2.0)));
  analysis::MatrixSystem two_phases{0.5, 1, {m}, {0, 1}};
  CHECK_THROWS_AS(detect_parameters(two_phases), Error);
}
