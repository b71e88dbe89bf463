#include "twoorbit/serialize.hpp"

#include <stdexcept>

namespace twoorbit {

namespace {

using nlohmann::json;

json vector_json(const QVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i].str());
  return a;
}

Rational rational_json(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw std::invalid_argument("expected a rational written as a string or an integer");
}

QVector vector_from_json(const RootSystem& phi, const json& j) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != phi.ambient_dim())
    throw std::invalid_argument("expected a vector of length " + std::to_string(phi.ambient_dim()));
  QVector v(phi.ambient_dim());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = rational_json(j[i]);
  return v;
}

int root_from_json(const RootSystem& phi, const json& j) {
  const int r = phi.index_of(vector_from_json(phi, j));
  if (r < 0) throw std::invalid_argument("vector " + j.dump() + " is not a root of " + phi.label());
  return r;
}

}  // namespace

json spec_to_json(const RootSystem& phi, const SubalgebraSpec& h) {
  json j;
  j["toral"]["kind"] = h.toral.full ? "full" : "kernel";
  j["toral"]["functionals"] = json::array();
  for (const auto& f : h.toral.functionals) j["toral"]["functionals"].push_back(vector_json(f));
  j["root_spaces"] = json::array();
  for (int r : members(h.root_spaces, phi.num_roots())) j["root_spaces"].push_back(vector_json(phi.root(r)));
  j["mixed"] = json::array();
  for (const auto& line : h.mixed) {
    json l = json::array();
    for (const auto& t : line.terms) {
      json term;
      term["root"] = vector_json(phi.root(t.root));
      term["coeff"] = t.coeff ? json(t.coeff->str()) : json(nullptr);
      l.push_back(term);
    }
    j["mixed"].push_back(l);
  }
  return j;
}

SubalgebraSpec spec_from_json(const RootSystem& phi, const json& j) {
  try {
    SubalgebraSpec h;
    const auto& toral = j.at("toral");
    const std::string kind = toral.at("kind").get<std::string>();
    if (kind == "full") {
      h.toral = ToralPart::whole();
    } else if (kind == "kernel") {
      std::vector<QVector> fs;
      for (const auto& f : toral.at("functionals")) fs.push_back(vector_from_json(phi, f));
      h.toral = ToralPart::kernel(fs);
    } else {
      throw std::invalid_argument("toral kind must be \"full\" or \"kernel\"");
    }
    for (const auto& r : j.value("root_spaces", json::array())) h.root_spaces.set(static_cast<std::size_t>(root_from_json(phi, r)));
    for (const auto& l : j.value("mixed", json::array())) {
      MixedLine line;
      for (const auto& t : l) {
        MixedTerm term;
        term.root = root_from_json(phi, t.at("root"));
        if (t.contains("coeff") && !t.at("coeff").is_null()) {
          const auto& c = t.at("coeff");
          if (!(c.is_string() && c.get<std::string>() == "?")) term.coeff = rational_json(c);
        }
        line.terms.push_back(term);
      }
      h.mixed.push_back(line);
    }
    return h;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed subalgebra spec: ") + e.what());
  }
}

json group_to_json(const RootSystem& phi) {
  json g;
  if (phi.is_simple_type())
    g["type"] = phi.label().substr(0, 1);
  else
    g["type"] = phi.label();
  g["rank"] = phi.rank();
  return g;
}

json pair_to_json(const RootSystem& phi, const ClassifiedPair& p) {
  json j = spec_to_json(phi, p.stabilizer);
  j["group"] = group_to_json(phi);
  j["kind"] = p.kind == PairKind::TypeI ? "I" : "II";
  json prov;
  prov["beta"] = p.provenance.beta;
  if (p.provenance.alpha) prov["alpha"] = *p.provenance.alpha;
  prov["branch"] = p.provenance.branch;
  prov["notes"] = p.provenance.notes;
  j["provenance"] = prov;
  json checks;
  checks["dimension"] = p.dimension;
  checks["closed"] = p.closed;
  checks["rank"] = p.stabilizer_rank;
  checks["regular_torus"] = p.regular_torus;
  checks["type"] = p.type.resolved ? json(p.type.semisimple_type) : json(nullptr);
  checks["center_dim"] = p.type.center_dim;
  checks["nilradical_dim"] = p.type.nilradical_dim;
  j["checks"] = checks;
  j["catalog_match"] = p.catalog_match ? json(*p.catalog_match) : json(nullptr);
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace twoorbit
