#include <doctest.h>

#include "../oracles.hpp"

using namespace twoorbit;

namespace {

// Largest p with beta - p alpha a root.
int string_below(const RootSystem& phi, int a, int b) {
  int p = 0;
  QVector v = phi.root(b);
  while (true) {
    v -= phi.root(a);
    if (phi.index_of(v) < 0) return p;
    ++p;
  }
}

SubalgebraSpec borel(const RootSystem& phi) {
  SubalgebraSpec h;
  for (int i = 0; i < phi.num_positive(); ++i) h.root_spaces.set(static_cast<std::size_t>(i));
  return h;
}

}  // namespace

TEST_SUITE("chevalley") {
  TEST_CASE("structure constants: |N_ab| = p + 1 and antisymmetry") {
    for (const std::string label : {"B3", "C3", "G2", "F4"}) {
      CAPTURE(label);
      const RootSystem phi = parse_root_system(label);
      const ChevalleyAlgebra g = build_algebra(phi);
      for (int a = 0; a < phi.num_roots(); ++a)
        for (int b = 0; b < phi.num_roots(); ++b) {
          const int n = g.structure_constant(a, b);
          REQUIRE(n == -g.structure_constant(b, a));
          if (phi.index_of(QVector(phi.root(a) + phi.root(b))) < 0) {
            REQUIRE(n == 0);
          } else {
            REQUIRE(std::abs(n) == string_below(phi, a, b) + 1);
          }
        }
    }
  }

  TEST_CASE("[Y_a, Y_-a] is the coroot element of a") {
    const RootSystem phi = parse_root_system("G2");
    const ChevalleyAlgebra g = build_algebra(phi);
    for (int a = 0; a < phi.num_roots(); ++a) {
      const Element h = g.bracket(g.root_vector(a), g.root_vector(phi.negative(a)));
      QVector coroot = QVector::Zero(phi.ambient_dim());
      for (int i = 0; i < phi.rank(); ++i) {
        CHECK(h[i] == Rational(g.coroot_element(a)[static_cast<std::size_t>(i)]));
        coroot += h[i] * phi.coroot(phi.simple_index(i));
      }
      CHECK(coroot == phi.coroot(a));
    }
  }

  TEST_CASE("Jacobi identity on small algebras") {
    for (const std::string label : {"A1xA1", "A2", "B2", "G2"}) {
      const ChevalleyAlgebra g = build_algebra(parse_root_system(label));
      const auto rep = check_jacobi(g);
      CHECK(rep.violations == 0);
      CHECK(rep.triples_checked == static_cast<long long>(g.dim()) * g.dim() * g.dim());
    }
  }

  TEST_CASE("closure agrees with the elimination reference") {
    const RootSystem phi = parse_root_system("B2");
    const ChevalleyAlgebra g = build_algebra(phi);
    SubalgebraSpec b = borel(phi);
    CHECK(check_closure(g, b).closed);
    CHECK(oracle::closed(g, b));
    SubalgebraSpec broken;
    broken.root_spaces.set(static_cast<std::size_t>(phi.simple_index(0)));
    broken.root_spaces.set(static_cast<std::size_t>(phi.simple_index(1)));
    const auto rep = check_closure(g, broken);
    CHECK_FALSE(rep.closed);
    CHECK_FALSE(rep.witnesses.empty());
    CHECK_FALSE(oracle::closed(g, broken));
    CHECK(declared_dimension(g, b) == phi.rank() + phi.num_positive());
  }

  TEST_CASE("mixed coefficients are solved to a closed subalgebra") {
    // ker(a1 - a2) in A2 with the line Y_a1 + c Y_a2 and the root space of
    // a1 + a2: closed for every nonzero c.
    const RootSystem phi = parse_root_system("A2");
    const ChevalleyAlgebra g = build_algebra(phi);
    const int a1 = phi.simple_index(0), a2 = phi.simple_index(1);
    SubalgebraSpec h;
    h.toral = ToralPart::kernel({QVector(phi.root(a1) - phi.root(a2))});
    h.root_spaces.set(static_cast<std::size_t>(phi.highest_root()));
    h.mixed.push_back({{{a1, Rational(1)}, {a2, std::nullopt}}});
    CHECK(validate_spec(phi, h).empty());
    CHECK(has_unknown_coefficients(h));
    const auto sols = solve_mixed_coefficients(g, h);
    REQUIRE_FALSE(sols.empty());
    for (const auto& s : sols) CHECK(oracle::closed(g, s.spec));
    CHECK(declared_dimension(g, h) == 3);
  }

  TEST_CASE("rank, regularity and type of standard subalgebras") {
    const RootSystem phi = parse_root_system("C3");
    const ChevalleyAlgebra g = build_algebra(phi);
    SubalgebraSpec whole;
    for (int i = 0; i < phi.num_roots(); ++i) whole.root_spaces.set(static_cast<std::size_t>(i));
    const auto id = identify_type(g, whole);
    CHECK(id.resolved);
    CHECK(id.semisimple_type == "C3");
    CHECK(oracle::lie_dimension(id.semisimple_type) == g.dim());
    CHECK(subalgebra_rank(g, whole).rank == 3);

    const SubalgebraSpec b = borel(phi);
    const auto bid = identify_type(g, b);
    CHECK(bid.semisimple_type == "0");
    CHECK(bid.center_dim + bid.nilradical_dim == 3 + phi.num_positive());

    // A kernel containing a root direction is not regular.
    const ToralPart bad = ToralPart::kernel({phi.root(phi.simple_index(0))});
    CHECK_FALSE(check_regular_torus(phi, bad));
    CHECK_FALSE(oracle::vanishing_roots(phi, bad).empty());
    const ToralPart good = ToralPart::kernel({QVector(Rational(3) * phi.root(phi.simple_index(0)) + phi.root(phi.simple_index(1)))});
    CHECK(check_regular_torus(phi, good) == oracle::vanishing_roots(phi, good).empty());
  }

  TEST_CASE("nonclosed spec is rejected by subalgebra_rank") {
    const RootSystem phi = parse_root_system("A2");
    const ChevalleyAlgebra g = build_algebra(phi);
    SubalgebraSpec h;
    h.root_spaces.set(static_cast<std::size_t>(phi.simple_index(0)));
    h.root_spaces.set(static_cast<std::size_t>(phi.simple_index(1)));
    CHECK_THROWS_AS(subalgebra_rank(g, h), std::invalid_argument);
  }
}
