#include "twoorbit/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#ifndef TWOORBIT_DATA_DIR
#define TWOORBIT_DATA_DIR "data"
#endif

namespace twoorbit {

namespace {

using nlohmann::json;

class IndexParser {
 public:
  IndexParser(std::string_view s, const Bindings& vars) : s_(s), vars_(vars) {}

  long long parse() {
    const long long v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("index expression '" + std::string(s_) + "': " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  long long sum() {
    long long v = product();
    for (;;) {
      if (eat('+'))
        v += product();
      else if (eat('-'))
        v -= product();
      else
        return v;
    }
  }
  long long product() {
    long long v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        const long long d = unary();
        if (d == 0 || v % d != 0) fail("inexact division");
        v /= d;
      } else {
        return v;
      }
    }
  }
  long long unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return atom();
  }
  long long atom() {
    skip();
    if (eat('(')) {
      const long long v = sum();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      long long v = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) v = v * 10 + (s_[pos_++] - '0');
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      const auto it = vars_.find(name);
      if (it == vars_.end()) fail("unbound variable '" + name + "'");
      return it->second;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  const Bindings& vars_;
  std::size_t pos_ = 0;
};

std::string_view strip_braces(std::string_view s) {
  if (s.size() >= 2 && s.front() == '{' && s.back() == '}') return s.substr(1, s.size() - 2);
  return s;
}

long long json_index(const json& j, const Bindings& vars) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_string()) return evaluate_index_expression(strip_braces(j.get<std::string>()), vars);
  throw std::invalid_argument("expected an integer or an index expression, got " + j.dump());
}

/// Reads an integer literal or a braced expression starting at pos.
std::optional<long long> read_number(std::string_view s, std::size_t& pos, const Bindings& vars) {
  if (pos < s.size() && s[pos] == '{') {
    const auto close = s.find('}', pos);
    if (close == std::string_view::npos) throw std::invalid_argument("unbalanced '{' in '" + std::string(s) + "'");
    const long long v = evaluate_index_expression(s.substr(pos + 1, close - pos - 1), vars);
    pos = close + 1;
    return v;
  }
  if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    long long v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) v = v * 10 + (s[pos++] - '0');
    return v;
  }
  return std::nullopt;
}

bool is_simple_coordinate_string(const RootSystem& phi, std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  return static_cast<int>(s.size()) == phi.rank() &&
         std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

/// Cartesian product of the loop ranges in `spec` ("for": [[var, lo, hi] or
/// [var, [values]]]), each extending `base`.
std::vector<Bindings> expand_loops(const json& spec, const Bindings& base) {
  std::vector<Bindings> out{base};
  if (spec.is_null()) return out;
  if (!spec.is_array()) throw std::invalid_argument("\"for\" must be an array of loops");
  for (const auto& loop : spec) {
    if (!loop.is_array() || loop.size() < 2 || !loop[0].is_string())
      throw std::invalid_argument("malformed loop " + loop.dump());
    const std::string var = loop[0].get<std::string>();
    std::vector<Bindings> next;
    for (const auto& b : out) {
      std::vector<long long> values;
      if (loop.size() == 2 && loop[1].is_array()) {
        for (const auto& v : loop[1]) values.push_back(json_index(v, b));
      } else if (loop.size() == 3) {
        const long long lo = json_index(loop[1], b), hi = json_index(loop[2], b);
        for (long long v = lo; v <= hi; ++v) values.push_back(v);
      } else {
        throw std::invalid_argument("malformed loop " + loop.dump());
      }
      for (long long v : values) {
        Bindings nb = b;
        nb[var] = v;
        next.push_back(std::move(nb));
      }
    }
    out = std::move(next);
  }
  return out;
}

int root_index(const RootSystem& phi, const std::string& expr, const Bindings& vars) {
  const int r = phi.index_of(evaluate_root_expression(phi, expr, vars));
  if (r < 0) throw std::invalid_argument("'" + expr + "' is not a root of " + phi.label());
  return r;
}

const json& field(const json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("catalog entry lacks \"") + key + "\"");
  return j.at(key);
}

}  // namespace

long long evaluate_index_expression(std::string_view expr, const Bindings& vars) {
  return IndexParser(expr, vars).parse();
}

QVector evaluate_root_expression(const RootSystem& phi, std::string_view expr, const Bindings& vars) {
  std::string compact;
  for (char c : expr)
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  std::string_view s = compact;
  if (s.empty()) throw std::invalid_argument("empty root expression");

  if (is_simple_coordinate_string(phi, s)) {
    const bool neg = s.front() == '-';
    if (neg) s.remove_prefix(1);
    QVector c(phi.rank());
    for (int i = 0; i < phi.rank(); ++i) c[i] = Rational(s[static_cast<std::size_t>(i)] - '0');
    QVector v = phi.from_simple_coordinates(c);
    return neg ? QVector(-v) : v;
  }

  QVector v = QVector::Zero(phi.ambient_dim());
  std::size_t pos = 0;
  bool first = true;
  while (pos < s.size()) {
    long long sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      throw std::invalid_argument("expected '+' or '-' in '" + compact + "'");
    }
    first = false;
    const long long coef = read_number(s, pos, vars).value_or(1);
    if (pos >= s.size() || (s[pos] != 'a' && s[pos] != 'e'))
      throw std::invalid_argument("expected 'a' or 'e' in '" + compact + "'");
    const char kind = s[pos++];
    const auto idx = read_number(s, pos, vars);
    if (!idx) throw std::invalid_argument("missing index in '" + compact + "'");
    QVector term;
    if (kind == 'a') {
      if (*idx < 1 || *idx > phi.rank()) throw std::invalid_argument("simple root index out of range in '" + compact + "'");
      term = phi.simple_root(static_cast<int>(*idx - 1));
    } else {
      if (*idx < 1 || *idx > phi.ambient_dim()) throw std::invalid_argument("coordinate index out of range in '" + compact + "'");
      term = QVector::Zero(phi.ambient_dim());
      term[static_cast<Eigen::Index>(*idx - 1)] = Rational(1);
    }
    v += Rational(sign * coef) * term;
  }
  return v;
}

SubalgebraSpec expand_template(const RootSystem& phi, const json& tmpl, long long n) {
  const Bindings base{{"n", n}, {"npos", phi.num_positive()}};
  SubalgebraSpec h;

  const json toral = tmpl.value("toral", json("full"));
  if (toral.is_string() && toral.get<std::string>() == "full") {
    h.toral = ToralPart::whole();
  } else if (toral.is_object() && toral.contains("kernel")) {
    std::vector<QVector> fs;
    for (const auto& f : toral.at("kernel")) fs.push_back(evaluate_root_expression(phi, f.get<std::string>(), base));
    h.toral = ToralPart::kernel(std::move(fs));
  } else {
    throw std::invalid_argument("toral part must be \"full\" or {\"kernel\": [...]}");
  }

  for (const auto& item : tmpl.value("roots", json::array())) {
    if (item.is_string()) {
      h.root_spaces.set(static_cast<std::size_t>(root_index(phi, item.get<std::string>(), base)));
      continue;
    }
    const bool pm = item.value("pm", false);
    for (const auto& b : expand_loops(item.value("for", json()), base)) {
      const int r = root_index(phi, field(item, "root").get<std::string>(), b);
      h.root_spaces.set(static_cast<std::size_t>(r));
      if (pm) h.root_spaces.set(static_cast<std::size_t>(phi.negative(r)));
    }
  }

  if (tmpl.contains("positive_except")) {
    RootSet except;
    for (const auto& e : tmpl.at("positive_except")) except.set(static_cast<std::size_t>(root_index(phi, e.get<std::string>(), base)));
    for (int r = 0; r < phi.num_positive(); ++r)
      if (!except.test(static_cast<std::size_t>(r))) h.root_spaces.set(static_cast<std::size_t>(r));
  }

  const std::string closure = tmpl.value("closure", std::string("none"));
  if (closure == "additive")
    h.root_spaces = additive_closure(phi, h.root_spaces);
  else if (closure != "none")
    throw std::invalid_argument("closure must be \"additive\" or \"none\"");

  for (const auto& m : tmpl.value("mixed", json::array())) {
    for (const auto& b : expand_loops(m.value("for", json()), base)) {
      MixedLine line;
      for (const auto& t : field(m, "terms")) {
        MixedTerm term;
        term.root = root_index(phi, field(t, "root").get<std::string>(), b);
        const std::string c = t.value("coeff", std::string("?"));
        if (c != "?") term.coeff = Rational::parse(c);
        line.terms.push_back(term);
      }
      h.mixed.push_back(std::move(line));
    }
  }
  return h;
}

std::string expected_type_name(std::string_view tmpl, long long n) {
  const Bindings vars{{"n", n}};
  std::vector<std::string> parts;
  std::size_t pos = 0;
  const std::string s(tmpl);
  if (s == "0") return "0";
  while (pos < s.size()) {
    const char family = s[pos++];
    if (std::string_view("ABCDFG").find(family) == std::string_view::npos)
      throw std::invalid_argument("bad type template '" + s + "'");
    const auto rank = read_number(s, pos, vars);
    if (!rank) throw std::invalid_argument("bad type template '" + s + "'");
    if (*rank > 0) {
      const std::string name = canonical_type_name(family, static_cast<int>(*rank));
      for (std::size_t a = 0; a <= name.size();) {
        const auto b = std::min(name.find('x', a), name.size());
        parts.push_back(name.substr(a, b - a));
        a = b + 1;
      }
    }
    if (pos < s.size()) {
      if (s[pos] != 'x') throw std::invalid_argument("bad type template '" + s + "'");
      ++pos;
    }
  }
  if (parts.empty()) return "0";
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "x") + p;
  return out;
}

bool CatalogVariant::applies_to(const RootSystem& phi) const {
  if (!labels.empty()) return std::find(labels.begin(), labels.end(), phi.label()) != labels.end();
  if (!family || phi.family() != *family) return false;
  return phi.rank() >= min_rank && (max_rank == 0 || phi.rank() <= max_rank);
}

const CatalogVariant* CatalogEntry::variant_for(const RootSystem& phi) const {
  for (const auto& v : variants)
    if (v.applies_to(phi)) return &v;
  return nullptr;
}

std::vector<const CatalogEntry*> Catalog::entries_for(const RootSystem& phi, std::optional<PairKind> kind) const {
  std::vector<const CatalogEntry*> out;
  for (const auto& e : entries)
    if ((!kind || e.kind == *kind) && e.variant_for(phi)) out.push_back(&e);
  return out;
}

std::vector<const CatalogEntry*> Catalog::table(int t) const {
  std::vector<const CatalogEntry*> out;
  for (const auto& e : entries)
    if (e.table == t) out.push_back(&e);
  return out;
}

Catalog parse_catalog(const json& j) {
  Catalog c;
  try {
    for (const auto& e : field(j, "entries")) {
      CatalogEntry entry;
      entry.id = field(e, "id").get<std::string>();
      entry.table = field(e, "table").get<int>();
      const std::string kind = field(e, "kind").get<std::string>();
      if (kind != "I" && kind != "II") throw std::invalid_argument("kind must be \"I\" or \"II\" in " + entry.id);
      entry.kind = kind == "I" ? PairKind::TypeI : PairKind::TypeII;
      entry.row = e.value("row", std::string());
      entry.embedding_note = e.value("embedding", std::string());
      entry.derived_expansion = e.value("derived_expansion", false);
      entry.literal_condition = e.value("literal_condition", std::string());
      entry.expected_type = field(e, "expected_type").get<std::string>();
      entry.expected_center = e.value("expected_center", std::string("0"));
      entry.expected_dimension = field(e, "expected_dimension").get<std::string>();
      for (const auto& v : field(e, "variants")) {
        CatalogVariant var;
        if (v.contains("labels")) {
          var.labels = v.at("labels").get<std::vector<std::string>>();
        } else {
          const std::string fam = field(v, "family").get<std::string>();
          if (fam.size() != 1) throw std::invalid_argument("family must be one letter in " + entry.id);
          var.family = fam[0];
          const auto& ranks = field(v, "ranks");
          var.min_rank = ranks.at(0).get<int>();
          var.max_rank = ranks.at(1).is_null() ? 0 : ranks.at(1).get<int>();
        }
        var.stabilizer = field(v, "stabilizer");
        entry.variants.push_back(std::move(var));
      }
      c.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& ex) {
    throw std::invalid_argument(std::string("malformed catalog: ") + ex.what());
  }
  return c;
}

Catalog load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog '" + path + "'");
  try {
    return parse_catalog(json::parse(in));
  } catch (const std::exception& ex) {
    throw std::runtime_error("catalog '" + path + "': " + ex.what());
  }
}

std::string default_catalog_path() { return std::string(TWOORBIT_DATA_DIR) + "/catalog.json"; }

Instantiation instantiate(const ChevalleyAlgebra& g, const CatalogEntry& entry) {
  const RootSystem& phi = g.root_system();
  const CatalogVariant* v = entry.variant_for(phi);
  if (!v) throw std::out_of_range("catalog entry " + entry.id + " does not apply to " + phi.label());
  const long long n = phi.rank();

  Instantiation inst;
  inst.entry = &entry;
  inst.raw = expand_template(phi, v->stabilizer, n);
  if (const auto problems = validate_spec(phi, inst.raw); !problems.empty())
    throw std::invalid_argument("catalog entry " + entry.id + " on " + phi.label() + ": " + problems.front());

  SubalgebraSpec spec = inst.raw;
  if (has_unknown_coefficients(inst.raw)) {
    inst.solutions = solve_mixed_coefficients(g, inst.raw);
    if (!inst.solutions.empty()) {
      spec = inst.solutions.front().spec;
      for (std::size_t l = 0; l < spec.mixed.size(); ++l)
        for (std::size_t t = 0; t < spec.mixed[l].terms.size(); ++t) {
          const auto& raw_term = inst.raw.mixed[l].terms[t];
          const auto& term = spec.mixed[l].terms[t];
          if (!raw_term.coeff && term.coeff && *term.coeff != Rational(1))
            inst.coefficient_log.push_back("line " + std::to_string(l + 1) + ": coefficient of Y[" +
                                           phi.name(term.root) + "] = " + term.coeff->str());
        }
    } else {
      for (auto& line : spec.mixed)
        for (auto& term : line.terms)
          if (!term.coeff) term.coeff = Rational(1);
    }
  }

  inst.pair.group = phi.label();
  inst.pair.kind = entry.kind;
  inst.pair.stabilizer = std::move(spec);
  inst.pair.provenance.branch = "catalog " + entry.id;
  inst.pair.catalog_match = entry.id;
  attach_checks(g, inst.pair);

  const Bindings vars{{"n", n}, {"npos", phi.num_positive()}};
  inst.expected_type = expected_type_name(entry.expected_type, n);
  inst.expected_center = static_cast<int>(evaluate_index_expression(entry.expected_center, vars));
  inst.expected_dimension = static_cast<int>(evaluate_index_expression(entry.expected_dimension, vars));
  return inst;
}

std::vector<Instantiation> instantiate_all(const ChevalleyAlgebra& g, const Catalog& c, std::optional<PairKind> kind) {
  std::vector<Instantiation> out;
  for (const auto* e : c.entries_for(g.root_system(), kind)) out.push_back(instantiate(g, *e));
  return out;
}

DiffReport diff(const RootSystem& phi, const std::vector<ClassifiedPair>& computed,
                const std::vector<Instantiation>& expected) {
  std::vector<std::string> keys;
  for (const auto& p : computed) keys.push_back(canonical_key(phi, p.stabilizer));
  std::vector<bool> used(computed.size(), false);

  DiffReport report;
  for (const auto& inst : expected) {
    const std::string key = canonical_key(phi, inst.pair.stabilizer);
    bool found = false;
    for (std::size_t i = 0; i < computed.size(); ++i) {
      if (used[i] || computed[i].kind != inst.pair.kind || keys[i] != key) continue;
      used[i] = true;
      found = true;
      DiffMatch m;
      m.entry_id = inst.entry ? inst.entry->id : inst.pair.provenance.branch;
      m.computed_index = static_cast<int>(i);
      m.conjugator = find_conjugator(phi, computed[i].stabilizer, inst.pair.stabilizer).value_or(std::vector<std::string>{});
      report.matched.push_back(std::move(m));
      break;
    }
    if (!found) report.missing.push_back(inst.entry ? inst.entry->id : inst.pair.provenance.branch);
  }
  for (std::size_t i = 0; i < computed.size(); ++i)
    if (!used[i]) report.extra.push_back(static_cast<int>(i));
  return report;
}

void annotate_matches(std::vector<ClassifiedPair>& computed, const DiffReport& report) {
  for (const auto& m : report.matched) computed[static_cast<std::size_t>(m.computed_index)].catalog_match = m.entry_id;
}

}  // namespace twoorbit
