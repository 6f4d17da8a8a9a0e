#include <doctest.h>

#include <random>

#include "qcuntz/error.hpp"
#include "qcuntz/kernels.hpp"
#include "qcuntz/wick.hpp"

using namespace qcuntz;
using namespace qcuntz::wick;

TEST_CASE("QPoly arithmetic") {
  const QPoly one = QPoly::constant(1);
  const QPoly q = QPoly::monomial(1, 1);
  const QPoly p = (one + q) * (one + q);
  CHECK(p.coefficient(0) == 1);
  CHECK(p.coefficient(1) == 2);
  CHECK(p.coefficient(2) == 1);
  CHECK(to_string(p) == "1 + 2 q + q^2");
  CHECK(to_string(QPoly{}) == "0");
  CHECK((p + QPoly::monomial(-2, 1)).coefficient(1) == 0);
  CHECK((p + QPoly::monomial(-2, 1)).coefficients().count(1) == 0);
  CHECK(p.evaluate(0.5) == doctest::Approx(2.25));
}

TEST_CASE("parse_expr") {
  const RawExpr e = parse_expr("a1* a1", 2);
  REQUIRE(e.terms.size() == 1);
  CHECK(e.terms[0].symbols == SymbolWord{{1, true}, {1, false}});
  CHECK(parse_expr("a1 a2*", 2).terms[0].symbols == SymbolWord{{1, false}, {2, true}});
  const RawExpr s = parse_expr("2 q^3 a1 + q a2* + -1", 2);
  REQUIRE(s.terms.size() == 3);
  CHECK(s.terms[0].coeff == QPoly::monomial(2, 3));
  CHECK(s.terms[2].symbols.empty());
  try {
    parse_expr("a1 a0", 2);
    FAIL("expected a parse error");
  } catch (const ParseError& err) {
    CHECK(err.offset() == 3);
  }
  CHECK_THROWS_AS(parse_expr("a3", 2), ParseError);
  CHECK_THROWS_AS(parse_expr("b1", 2), ParseError);
}

TEST_CASE("normal forms of the defining relations") {
  CHECK(normal_form(parse_expr("a1* a2", 2)).is_zero());
  const WickExpr r = normal_form(parse_expr("a1* a1", 1));
  REQUIRE(r.monomials.size() == 2);
  CHECK(r.monomials[0].creators.empty());
  CHECK(r.monomials[0].coeff == QPoly::constant(1));
  CHECK(r.monomials[1].creators == Word{1});
  CHECK(r.monomials[1].annihilators == Word{1});
  CHECK(r.monomials[1].coeff == QPoly::monomial(1, 1));
  CHECK(normal_form(parse_expr("a1* a2 a1", 2)).is_zero());
  CHECK(normal_form(parse_expr("a1* a2 a1", 2), Strategy::RightmostInnermost).is_zero());
}

TEST_CASE("a1* a1* a1 a1 normal form") {
  // Hand expansion: (1+q) + (q + 2q^2 + q^3) a1 a1* + q^4 a1 a1 a1* a1*.
  const WickExpr r = normal_form(parse_expr("a1* a1* a1 a1", 2));
  REQUIRE(r.monomials.size() == 3);
  CHECK(r.monomials[0].creators.empty());
  CHECK(r.monomials[0].coeff == QPoly::constant(1) + QPoly::monomial(1, 1));
  CHECK(r.monomials[1].creators == Word{1});
  CHECK(r.monomials[1].coeff == QPoly::monomial(1, 1) + QPoly::monomial(2, 2) + QPoly::monomial(1, 3));
  CHECK(r.monomials[2].creators == Word{1, 1});
  CHECK(r.monomials[2].annihilators == Word{1, 1});
  CHECK(r.monomials[2].coeff == QPoly::monomial(1, 4));
  CHECK(to_string(r) == "(1 + q) · a[] a*[] + (q + 2 q^2 + q^3) · a[1] a*[1] + (q^4) · a[1,1] a*[1,1]");
}

TEST_CASE("annihilator words follow the product convention") {
  // a2* a1* = (a1 a2)^*, so the annihilator word is [1,2].
  const WickExpr r = normal_form(parse_expr("a1 a2* a1*", 2));
  REQUIRE(r.monomials.size() == 1);
  CHECK(r.monomials[0].creators == Word{1});
  CHECK(r.monomials[0].annihilators == Word{1, 2});
}

TEST_CASE("q = 0 specialisation of a^*m a^m is 1") {
  for (int m = 1; m <= 5; ++m) {
    SymbolWord w;
    for (int i = 0; i < m; ++i) w.push_back({1, true});
    for (int i = 0; i < m; ++i) w.push_back({1, false});
    const WickExpr r = normal_form(w, 1);
    for (const auto& mono : r.monomials) {
      const double at0 = mono.coeff.evaluate(0.0);
      if (mono.creators.empty()) CHECK(at0 == 1.0);
      else CHECK(at0 == 0.0);
    }
  }
}

TEST_CASE("rewrite steps lower the inversion count and terminate") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const SymbolWord w = random_word(3, 12, rng);
    const WickExpr r = normal_form(w, 3);
    for (const auto& m : r.monomials) {
      SymbolWord s;
      for (int c : m.creators.letters()) s.push_back({c, false});
      for (auto it = m.annihilators.letters().rbegin(); it != m.annihilators.letters().rend(); ++it) {
        s.push_back({*it, true});
      }
      CHECK(inversion_count(s) == 0);
    }
  }
}

TEST_CASE("evaluation bridge") {
  const double q = 0.5;
  const auto f = build_generators(RepSpec::fock_q1(q), {0, 0, 10});
  const auto inner = f.basis().interior(2);
  const SparseMatrix lhs = evaluate(normal_form(parse_expr("a1* a1", 1)), f, q);
  const SparseMatrix rhs = f.A_adj(1) * f.A(1);
  const auto norms = kernels::serial::column_norms(lhs - rhs, inner);
  for (double r : norms) CHECK(r < 1e-12);
  WickExpr unit{1, {{Word{}, Word{}, QPoly::constant(1)}}};
  CHECK(evaluate(unit, f, q) == SparseMatrix::identity(f.dim()));
  const auto g = build_generators(RepSpec::fock_qn(q, 2), {3, 0, 0});
  const SparseMatrix z = evaluate(parse_expr("a1* a2", 2), g, q);
  for (double r : kernels::serial::column_norms(z, g.basis().interior(2))) CHECK(r == 0.0);
  CHECK_THROWS_AS(evaluate(parse_expr("a1", 2), f, q), Error);
}

TEST_CASE("column evaluation matches full evaluation") {
  const auto f = build_generators(RepSpec::unbounded_xj(0.5, 2, 1, 2.8), {4, -4, 4});
  const auto cols = f.basis().interior(3);
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const SymbolWord w = random_word(2, 3, rng);
    const Eigen::MatrixXcd full = evaluate(w, f).to_dense();
    const Eigen::MatrixXcd part = evaluate_columns(w, f, cols).to_dense();
    const Eigen::MatrixXcd nf_full = evaluate(normal_form(w, 2), f, 0.5).to_dense();
    const Eigen::MatrixXcd nf_part = evaluate_columns(normal_form(w, 2), f, 0.5, cols).to_dense();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const auto c = static_cast<Eigen::Index>(cols[i]);
      const auto ii = static_cast<Eigen::Index>(i);
      CHECK((full.col(c) - part.col(ii)).norm() <= 1e-13 * (1.0 + full.col(c).norm()));
      CHECK((nf_full.col(c) - nf_part.col(ii)).norm() <= 1e-13 * (1.0 + nf_full.col(c).norm()));
    }
  }
}

TEST_CASE("confluence probe") {
  const ConfluenceReport rep = confluence_probe(2, 6, 200, 42);
  CHECK(rep.mismatches == 0);
  CHECK(rep.trials == 200);
  const WickExpr plain = normal_form(SymbolWord{{1, false}, {1, false}}, 1);
  REQUIRE(plain.monomials.size() == 1);
  CHECK(plain.monomials[0].creators == Word{1, 1});
}
