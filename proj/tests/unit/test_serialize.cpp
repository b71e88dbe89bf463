#include <doctest.h>

#include "twoorbit/serialize.hpp"

using namespace twoorbit;
using nlohmann::json;

TEST_SUITE("serialize") {
  TEST_CASE("spec round trip preserves every field") {
    for (const std::string label : {"B3", "D4", "F4"}) {
      CAPTURE(label);
      const RootSystem phi = parse_root_system(label);
      for (const auto& p : enumerate_type2(phi)) {
        const json j = spec_to_json(phi, p.stabilizer);
        const SubalgebraSpec back = spec_from_json(phi, json::parse(dump(j)));
        CHECK(spec_to_json(phi, back) == j);
        CHECK(back.root_spaces == p.stabilizer.root_spaces);
        CHECK(back.mixed.size() == p.stabilizer.mixed.size());
      }
    }
  }

  TEST_CASE("unknown coefficients survive as null") {
    const RootSystem phi = parse_root_system("A2");
    SubalgebraSpec h;
    h.mixed.push_back({{{phi.simple_index(0), Rational(1)}, {phi.simple_index(1), std::nullopt}}});
    const json j = spec_to_json(phi, h);
    const SubalgebraSpec back = spec_from_json(phi, j);
    REQUIRE(back.mixed.size() == 1);
    CHECK_FALSE(back.mixed[0].terms[1].coeff.has_value());
    json q = j;
    q["mixed"][0][1]["coeff"] = "?";
    CHECK_FALSE(spec_from_json(phi, q).mixed[0].terms[1].coeff.has_value());
  }

  TEST_CASE("malformed specs are rejected") {
    const RootSystem phi = parse_root_system("A2");
    CHECK_THROWS_AS(spec_from_json(phi, json::parse(R"({"root_spaces": [["1", "1", "1"]]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(spec_from_json(phi, json::parse(R"({"toral": {"kind": "half"}})")), std::invalid_argument);
    CHECK_THROWS_AS(spec_from_json(phi, json::parse(R"([1, 2])")), std::invalid_argument);
  }

  TEST_CASE("pair and group documents") {
    const RootSystem phi = parse_root_system("B3");
    const auto pairs = enumerate_type2(phi);
    REQUIRE(pairs.size() == 1);
    const json j = pair_to_json(phi, pairs[0]);
    CHECK(j["kind"] == "II");
    CHECK(j["checks"]["dimension"] == 14);
    CHECK(j["checks"]["type"] == "G2");
    CHECK(j["checks"]["closed"] == true);
    CHECK(group_to_json(phi)["rank"] == 3);
    CHECK(group_to_json(parse_root_system("A1xA1"))["type"] == "A1xA1");
    CHECK(dump(j).back() == '\n');
  }
}
