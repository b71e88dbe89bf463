#include <doctest.h>

#include "twoorbit/linalg.hpp"
#include "twoorbit/polyhedron.hpp"
#include "twoorbit/rational.hpp"

#include <random>

using namespace twoorbit;

TEST_SUITE("numerics") {
  TEST_CASE("rational arithmetic stays in lowest terms") {
    const Rational a(6, -4);
    CHECK(a.num() == -3);
    CHECK(a.den() == 2);
    CHECK((a + Rational(3, 2)).is_zero());
    CHECK(Rational(1, 3) * Rational(3) == Rational(1));
    CHECK(Rational(2, 3) / Rational(4, 9) == Rational(3, 2));
    CHECK(Rational::parse("-7/21") == Rational(-1, 3));
    CHECK(Rational(5, 10).str() == "1/2");
    CHECK_THROWS_AS(Rational::parse("1/0x"), std::invalid_argument);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
  }

  TEST_CASE("rational ordering agrees with long double on random pairs") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> num(-1000, 1000), den(1, 1000);
    for (int k = 0; k < 2000; ++k) {
      const int a = num(rng), b = den(rng), c = num(rng), d = den(rng);
      const long double x = static_cast<long double>(a) / b, y = static_cast<long double>(c) / d;
      if (x == y) continue;
      CHECK((Rational(a, b) < Rational(c, d)) == (x < y));
    }
  }

  TEST_CASE("overflow is reported instead of wrapping") {
    const Rational big(std::int64_t{1} << 62);
    CHECK_THROWS_AS(big * big, RationalOverflow);
  }

  TEST_CASE("nullspace vectors are annihilated and rank-nullity holds") {
    QMatrix m(3, 5);
    const int vals[3][5] = {{1, 2, 0, -1, 3}, {2, 4, 1, 0, 1}, {3, 6, 1, -1, 4}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 5; ++j) m(i, j) = Rational(vals[i][j]);
    const QMatrix ns = nullspace(m);
    CHECK(rank(m) + ns.cols() == 5);
    const QMatrix prod = m * ns;
    for (Eigen::Index i = 0; i < prod.rows(); ++i)
      for (Eigen::Index j = 0; j < prod.cols(); ++j) CHECK(prod(i, j).is_zero());
  }

  TEST_CASE("solve_exact finds solutions and detects inconsistency") {
    QMatrix a(2, 2);
    a << Rational(1), Rational(1), Rational(2), Rational(2);
    QVector ok(2), bad(2);
    ok << Rational(3), Rational(6);
    bad << Rational(3), Rational(7);
    const auto x = solve_exact(a, ok);
    REQUIRE(x);
    CHECK((a * *x - ok).isZero());
    CHECK_FALSE(solve_exact(a, bad));
    CHECK(proportional<Rational>(ok, QVector(Rational(2) * ok)));
    CHECK_FALSE(proportional<Rational>(ok, bad));
  }

  TEST_CASE("fourier-motzkin returns a verified witness or proves emptiness") {
    const auto c = [](std::initializer_list<int> coeffs, Relation rel, int rhs) {
      LinearConstraint k;
      k.coeffs = QVector(static_cast<Eigen::Index>(coeffs.size()));
      Eigen::Index i = 0;
      for (int v : coeffs) k.coeffs[i++] = Rational(v);
      k.rel = rel;
      k.rhs = Rational(rhs);
      return k;
    };
    // x + y <= 4, x - y >= 1, y >= 1: feasible.
    std::vector<LinearConstraint> sys{c({1, 1}, Relation::LessEqual, 4), c({1, -1}, Relation::GreaterEqual, 1),
                                      c({0, 1}, Relation::GreaterEqual, 1)};
    const auto f = fourier_motzkin(2, sys);
    REQUIRE(f.feasible);
    REQUIRE(f.witness);
    CHECK(satisfies(*f.witness, sys));
    // Adding x + y >= 5 empties it.
    sys.push_back(c({1, 1}, Relation::GreaterEqual, 5));
    CHECK_FALSE(fourier_motzkin(2, sys).feasible);
    // Equalities: x = 2y, x + y = 3.
    const std::vector<LinearConstraint> eq{c({1, -2}, Relation::Equal, 0), c({1, 1}, Relation::Equal, 3)};
    const auto g = fourier_motzkin(2, eq);
    REQUIRE(g.witness);
    CHECK((*g.witness)[0] == Rational(2));
    CHECK((*g.witness)[1] == Rational(1));
  }
}
