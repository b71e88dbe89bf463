#include <doctest.h>

#include "twoorbit/classify.hpp"

#include <random>
#include <set>

using namespace twoorbit;

namespace {

// Every Weyl group element as a permutation of the roots, by closing the
// simple reflections under composition.
std::vector<std::vector<int>> weyl_permutations(const RootSystem& phi) {
  std::vector<int> id(static_cast<std::size_t>(phi.num_roots()));
  for (int i = 0; i < phi.num_roots(); ++i) id[static_cast<std::size_t>(i)] = i;
  std::set<std::vector<int>> seen{id};
  std::vector<std::vector<int>> out{id};
  for (std::size_t k = 0; k < out.size(); ++k)
    for (int s = 0; s < phi.rank(); ++s) {
      const auto& r = phi.simple_reflection_perm(s);
      std::vector<int> next(out[k].size());
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = r[static_cast<std::size_t>(out[k][i])];
      if (seen.insert(next).second) out.push_back(next);
    }
  return out;
}

RootSet permute(const RootSet& s, const std::vector<int>& perm) {
  RootSet out;
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (s.test(i)) out.set(static_cast<std::size_t>(perm[i]));
  return out;
}

}  // namespace

TEST_SUITE("classify") {
  TEST_CASE("conjugate sandwich agrees with a search over the Weyl group") {
    for (const std::string label : {"A3", "B3", "G2"}) {
      CAPTURE(label);
      const RootSystem phi = parse_root_system(label);
      const auto group = weyl_permutations(phi);
      std::mt19937 rng(11);
      std::bernoulli_distribution coin(0.5);
      for (int trial = 0; trial < 40; ++trial) {
        RootSet psi;
        for (int i = 0; i < phi.num_roots(); ++i)
          if (coin(rng)) psi.set(static_cast<std::size_t>(i));
        psi = additive_closure(phi, psi);
        bool brute = false;
        for (const auto& w : group)
          if (parabolic_sandwich_exists(phi, permute(psi, w))) {
            brute = true;
            break;
          }
        CHECK(conjugate_sandwich_exists(phi, psi) == brute);
      }
    }
  }

  TEST_CASE("plane constraints reject degenerate input") {
    const RootSystem phi = parse_root_system("B3");
    const int b = phi.simple_index(0);
    CHECK_THROWS_AS(reformul_constraint(phi, b, b), std::invalid_argument);
    CHECK_THROWS_AS(reformul_constraint(phi, b, phi.negative(b)), std::invalid_argument);
    const auto c = reformul_constraint(phi, b, phi.simple_index(2));
    CHECK(c.case_tag == "i");
    for (const auto& pattern : plane_patterns(phi, c)) {
      CHECK_FALSE(pattern.test(static_cast<std::size_t>(b)));
      CHECK_FALSE(pattern.test(static_cast<std::size_t>(phi.negative(b))));
    }
  }

  TEST_CASE("type I counts on small groups") {
    CHECK(enumerate_type1(parse_root_system("G2")).size() == 4);
    CHECK(enumerate_type1(parse_root_system("A2")).size() == 1);
    CHECK_THROWS(enumerate_type1(parse_root_system("A1xA1")));
    for (const auto& p : enumerate_type1(parse_root_system("B3"))) {
      CHECK(p.kind == PairKind::TypeI);
      CHECK(p.closed);
      CHECK(p.stabilizer_rank == 3);
    }
  }

  TEST_CASE("type II pairs of rank-2 groups have dimension npos") {
    for (const std::string label : {"A2", "B2", "G2"}) {
      const RootSystem phi = parse_root_system(label);
      const auto pairs = enumerate_type2(phi);
      REQUIRE(pairs.size() == 1);
      CHECK(pairs[0].dimension == phi.num_positive());
      CHECK(pairs[0].regular_torus);
      CHECK(pairs[0].stabilizer_rank == 1);
    }
  }

  TEST_CASE("candidate triples satisfy their defining conditions") {
    const RootSystem phi = parse_root_system("C4");
    for (const auto& c : type2_candidate_triples(phi)) {
      CHECK(phi.simple_index(c.alpha_index) == c.alpha);
      CHECK(phi.is_positive(c.beta));
      CHECK(phi.inner(c.alpha, c.beta) <= Rational(0));
      if (c.eliminated_at == Type2Stage::Accepted) {
        CHECK(c.feasible);
        CHECK(c.lambda.has_value());
      }
    }
    CHECK(stage_name(Type2Stage::Descent) == "descent");
  }

  TEST_CASE("three-root coordinate property requires rank three") {
    const RootSystem phi = parse_root_system("A3");
    const QVector a = phi.root(phi.simple_index(0)), b = phi.root(phi.simple_index(1)),
                  c = phi.root(phi.simple_index(2));
    CHECK_NOTHROW(remark_property(phi, a, b, c));
    CHECK_THROWS(remark_property(phi, a, b, QVector(a + b)));
  }

  TEST_CASE("canonical keys are automorphism invariant and conjugators are correct") {
    const RootSystem phi = parse_root_system("D4");
    const auto pairs = enumerate_type2(phi);
    REQUIRE(pairs.size() == 1);
    const SubalgebraSpec& h = pairs[0].stabilizer;
    const std::string key = canonical_key(phi, h);
    for (const auto& a : phi.automorphism_generators()) {
      CAPTURE(a.name);
      const SpecShape moved = apply_automorphism(a, spec_shape(phi, h));
      SubalgebraSpec image;
      image.toral.full = moved.full_torus;
      for (const auto& f : moved.functionals) {
        QVector c(static_cast<Eigen::Index>(f.size()));
        for (std::size_t i = 0; i < f.size(); ++i) c[static_cast<Eigen::Index>(i)] = f[i];
        image.toral.functionals.push_back(phi.from_simple_coordinates(c));
      }
      image.root_spaces = moved.full;
      for (const auto& line : moved.lines) {
        MixedLine m;
        for (int r : line) m.terms.push_back({r, Rational(1)});
        image.mixed.push_back(m);
      }
      CHECK(canonical_key(phi, image) == key);
      const auto word = find_conjugator(phi, h, image);
      REQUIRE(word);
      CHECK(word->size() <= 1);
    }
    const auto self = find_conjugator(phi, h, h);
    REQUIRE(self);
    CHECK(self->empty());
    CHECK(canonical_key(phi, h) == key);
    // Pairs of type I and type II have different shapes.
    const auto t1 = enumerate_type1(parse_root_system("B3"));
    CHECK_FALSE(find_conjugator(parse_root_system("B3"), t1[0].stabilizer, t1[1].stabilizer));
  }
}
