#include <doctest.h>

#include "../oracles.hpp"
#include "twoorbit/catalog.hpp"

using namespace twoorbit;
using nlohmann::json;

TEST_SUITE("catalog") {
  TEST_CASE("index expressions") {
    const Bindings v{{"n", 5}, {"j", 2}};
    CHECK(evaluate_index_expression("n*(2*n-1)", v) == 45);
    CHECK(evaluate_index_expression("(n*n+n-2)/2", v) == 14);
    CHECK(evaluate_index_expression("-j+n", v) == 3);
    CHECK_THROWS_AS(evaluate_index_expression("n/2", v), std::invalid_argument);
    CHECK_THROWS_AS(evaluate_index_expression("m+1", v), std::invalid_argument);
    CHECK_THROWS_AS(evaluate_index_expression("(n", v), std::invalid_argument);
  }

  TEST_CASE("root expressions in both notations") {
    const RootSystem phi = parse_root_system("B4");
    const Bindings v{{"n", 4}, {"j", 3}};
    const QVector e1_e3 = evaluate_root_expression(phi, "e1+e{j}", v);
    CHECK(phi.name(phi.index_of(e1_e3)) == "1122");
    CHECK(evaluate_root_expression(phi, "a{n-1}+2a{n}", v) == phi.root(phi.index_of_name("0012")));
    CHECK(evaluate_root_expression(phi, "-0110", v) == phi.root(phi.index_of_name("-0110")));
    CHECK_THROWS(evaluate_root_expression(phi, "a9", v));
  }

  TEST_CASE("template expansion: loops, closure and kernels") {
    const RootSystem phi = parse_root_system("C4");
    const json tmpl = json::parse(R"({
      "toral": {"kernel": ["e1+e2"]},
      "roots": [{"for": [["i", 3, "n"]], "root": "2e{i}", "pm": true}],
      "closure": "additive"
    })");
    const SubalgebraSpec h = expand_template(phi, tmpl, 4);
    CHECK_FALSE(h.toral.full);
    REQUIRE(h.toral.functionals.size() == 1);
    // Closure of {+-2e3, +-2e4} adds nothing (their sums are not roots).
    CHECK(members(h.root_spaces, phi.num_roots()).size() == 4);
    const json bad = json::parse(R"({"toral": "some", "roots": []})");
    CHECK_THROWS(expand_template(phi, bad, 4));
  }

  TEST_CASE("expected type names") {
    CHECK(expected_type_name("C1xC{n-1}", 3) == "A1xB2");
    CHECK(expected_type_name("B{n-1}", 2) == "A1");
    CHECK(expected_type_name("A{n-3}", 3) == "0");
  }

  TEST_CASE("shipped catalog: every instantiation is closed and has the expected invariants") {
    const Catalog c = load_catalog(default_catalog_path());
    CHECK(c.table(1).size() == 12);
    CHECK(c.table(2).size() == 6);
    for (const std::string label : {"A3", "B3", "C4", "D5", "G2", "F4", "A1xA1", "B2"}) {
      CAPTURE(label);
      const ChevalleyAlgebra g = build_algebra(parse_root_system(label));
      for (const auto& inst : instantiate_all(g, c)) {
        CAPTURE(inst.entry->id);
        CHECK(oracle::closed(g, inst.pair.stabilizer));
        CHECK(inst.pair.dimension == inst.expected_dimension);
        CHECK(inst.pair.type.semisimple_type == inst.expected_type);
        CHECK(inst.pair.type.center_dim == inst.expected_center);
      }
    }
    CHECK_THROWS_AS(load_catalog("/nonexistent/catalog.json"), std::runtime_error);
  }

  TEST_CASE("diff reports missing and extra entries") {
    const RootSystem phi = parse_root_system("G2");
    const ChevalleyAlgebra g = build_algebra(phi);
    const Catalog c = load_catalog(default_catalog_path());
    auto computed = enumerate_type1(phi);
    const auto expected = instantiate_all(g, c, PairKind::TypeI);
    const DiffReport full = diff(phi, computed, expected);
    CHECK(full.empty());
    CHECK(full.matched.size() == 4);
    annotate_matches(computed, full);
    for (const auto& p : computed) CHECK(p.catalog_match.has_value());

    const auto fewer = std::vector<ClassifiedPair>(computed.begin() + 1, computed.end());
    const DiffReport d = diff(phi, fewer, expected);
    CHECK(d.missing.size() == 1);
    CHECK(d.extra.empty());

    // A pair of the other kind never matches.
    const DiffReport cross = diff(phi, enumerate_type2(phi), expected);
    CHECK(cross.extra.size() == 1);
    CHECK(cross.missing.size() == 4);
  }
}
