// Acceptance run: one PASS/FAIL line per criterion. With arguments, only the
// listed criteria run and the exit status reflects them.

#include "oracles.hpp"

#include "twoorbit/catalog.hpp"
#include "twoorbit/classify.hpp"
#include "twoorbit/serialize.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace twoorbit;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;

  void fail(const std::string& why) {
    pass = false;
    details.push_back("FAIL " + why);
  }
  void note(const std::string& what) { details.push_back(what); }
};

std::vector<std::string> labels(char family, int lo, int hi) {
  std::vector<std::string> out;
  for (int r = lo; r <= hi; ++r) out.push_back(std::string(1, family) + std::to_string(r));
  return out;
}

std::vector<std::string> concat(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

const Catalog& catalog() {
  static const Catalog c = load_catalog(default_catalog_path());
  return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed1(double s) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(2);
  o << s;
  return o.str();
}

QVector unit(const RootSystem& phi, int i) {
  QVector v = QVector::Zero(phi.ambient_dim());
  v[i - 1] = Rational(1);
  return v;
}

int idx(const RootSystem& phi, const QVector& v) {
  const int r = phi.index_of(v);
  if (r < 0) throw std::logic_error("expected a root");
  return r;
}

/// Diff of one enumeration against the catalog, appending to the outcome.
void diff_group(Outcome& out, const std::string& label, PairKind kind, std::size_t& pair_count) {
  const RootSystem phi = parse_root_system(label);
  const ChevalleyAlgebra g = build_algebra(phi);
  const auto computed = kind == PairKind::TypeI ? enumerate_type1(phi) : enumerate_type2(phi);
  const auto expected = instantiate_all(g, catalog(), kind);
  const DiffReport d = diff(phi, computed, expected);
  pair_count += computed.size();
  std::string line = label + ": " + std::to_string(computed.size()) + " computed, " +
                     std::to_string(expected.size()) + " expected";
  for (const auto& m : d.matched) line += ", " + m.entry_id;
  out.note(line);
  for (const auto& m : d.missing) out.fail(label + " missing " + m);
  for (int i : d.extra)
    out.fail(label + " extra pair of dimension " + std::to_string(computed[static_cast<std::size_t>(i)].dimension));
  if (computed.size() != expected.size()) out.fail(label + " count mismatch");
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const auto groups = concat({labels('A', 3, 8), labels('B', 3, 8), labels('C', 3, 8), {"F4", "G2"}});
  std::size_t n = 0;
  for (const auto& l : groups) diff_group(out, l, PairKind::TypeI, n);
  const auto t1 = catalog().table(1);
  if (t1.size() != 12) out.fail("table 1 has " + std::to_string(t1.size()) + " rows, expected 12");
  const double s = seconds_since(t0);
  if (s >= 60) out.fail("runtime " + fixed1(s) + " s exceeds 60 s");
  out.summary = std::to_string(groups.size()) + " groups, " + std::to_string(n) + " type I pairs, " +
                std::to_string(t1.size()) + " table rows, " + fixed1(s) + " s";
  return out;
}

Outcome criterion2() {
  Outcome out;
  const RootSystem phi = build_root_system("B", 2);
  const int a1 = phi.simple_index(0), a2 = phi.simple_index(1);
  const int b_short = idx(phi, QVector(phi.root(a1) + phi.root(a2)));
  const int b_long = idx(phi, QVector(phi.root(a1) + Rational(2) * phi.root(a2)));

  RootSet borel_like, so4, levi_like;
  borel_like.set(static_cast<std::size_t>(a2));
  borel_like.set(static_cast<std::size_t>(b_long));
  for (int r = 0; r < phi.num_roots(); ++r)
    if (phi.norm2(r) == Rational(2)) so4.set(static_cast<std::size_t>(r));
  levi_like.set(static_cast<std::size_t>(a1));
  levi_like.set(static_cast<std::size_t>(phi.negative(a1)));
  levi_like.set(static_cast<std::size_t>(b_long));

  const auto show = [&](const std::vector<RootSet>& sets) {
    std::string s = "{";
    for (const auto& set : sets) {
      s += " {";
      for (int r : members(set, phi.num_roots())) s += " " + phi.name(r);
      s += " }";
    }
    return s + " }";
  };
  const auto as_set = [](const std::vector<RootSet>& v) {
    std::set<std::string> s;
    for (const auto& x : v) s.insert(x.to_string());
    return s;
  };

  const auto short_sets = type1_candidates_for_beta(phi, b_short);
  const auto long_sets = type1_candidates_for_beta(phi, b_long);
  out.note("beta = " + phi.name(b_short) + " gives " + show(short_sets));
  out.note("beta = " + phi.name(b_long) + " gives " + show(long_sets));
  if (as_set(short_sets) != as_set({borel_like}))
    out.fail("beta = " + phi.name(b_short) + " should give exactly " + show({borel_like}));
  if (as_set(long_sets) != as_set({so4, levi_like}))
    out.fail("beta = " + phi.name(b_long) + " should give exactly " + show({so4, levi_like}));
  // The second expected set contains beta itself, which no candidate for
  // that beta can do; the split that the derivation actually produces is
  // reported for reference.
  const bool derivation_split = as_set(short_sets) == as_set({borel_like, so4, levi_like});
  out.note(std::string("reference: beta = ") + phi.name(b_short) + " gives all three pairs: " +
           (derivation_split ? "yes" : "no"));
  out.summary = out.pass ? "B2 split matches" : "B2 split differs from the criterion (see ledger)";
  return out;
}

/// (alpha index, beta index) pairs closed under diagram automorphisms, with
/// one canonical representative per orbit.
std::pair<int, int> canonical_triple(const RootSystem& phi, int alpha, int beta) {
  std::vector<const RootAutomorphism*> diagram;
  for (const auto& a : phi.automorphism_generators())
    if (a.name.rfind("sigma", 0) == 0) diagram.push_back(&a);
  std::set<std::pair<int, int>> seen{{alpha, beta}};
  std::vector<std::pair<int, int>> queue{{alpha, beta}};
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (const auto* a : diagram) {
      const std::pair<int, int> next{a->perm[static_cast<std::size_t>(queue[h].first)],
                                     a->perm[static_cast<std::size_t>(queue[h].second)]};
      if (seen.insert(next).second) queue.push_back(next);
    }
  return *seen.begin();
}

Outcome criterion3() {
  Outcome out;
  const auto groups = concat({labels('A', 3, 8), labels('B', 3, 8), labels('C', 3, 8), labels('D', 4, 8)});
  std::size_t seven_total = 0, five_total = 0;
  bool descent_checked = false;
  for (const auto& label : groups) {
    const RootSystem phi = parse_root_system(label);
    const char f = phi.family();
    const int n = phi.rank();
    const auto e = [&](int i) { return unit(phi, i); };
    const auto a = [&](int i) { return phi.simple_index(i - 1); };
    const int top = phi.highest_root();

    using T = std::pair<int, int>;
    std::set<T> seven, five;
    const auto add = [&](std::set<T>& s, int alpha, int beta) { s.insert(canonical_triple(phi, alpha, beta)); };
    if (f == 'A' && n == 3) {
      add(seven, a(2), top);
      add(five, a(2), top);
    }
    if (f == 'B' || f == 'C' || f == 'D') add(seven, a(2), idx(phi, QVector(e(1) + e(3))));
    if (f == 'B' && n == 3) {
      add(seven, a(3), top);
      add(five, a(3), top);
    }
    if (f == 'B') add(seven, a(1), idx(phi, e(2)));
    if (f == 'C') {
      add(seven, a(2), top);
      add(five, a(2), top);
      add(seven, a(1), idx(phi, QVector(Rational(2) * e(2))));
    }
    if (f == 'C' && n == 3) add(five, a(2), idx(phi, QVector(e(1) + e(3))));
    if (f == 'D') {
      add(seven, a(1), top);
      add(five, a(1), top);
    }

    std::set<T> got_seven, got_five;
    for (const auto& c : type2_candidate_triples(phi)) {
      if (!c.in_regime || !c.regular) continue;
      if (c.eliminated_at == Type2Stage::Trick) continue;
      add(got_seven, c.alpha, c.beta);
      if (c.eliminated_at != Type2Stage::Plan && c.eliminated_at != Type2Stage::Sphericity)
        add(got_five, c.alpha, c.beta);
      if (f == 'C' && c.alpha == a(2) && c.beta == top) {
        const std::string want = "(w(lambda),a1)>=0 is infeasible";
        descent_checked = true;
        if (c.eliminated_at != Type2Stage::Descent || c.elimination_detail != want)
          out.fail(label + " (a2, highest root) eliminated at " + stage_name(c.eliminated_at) + ": " +
                   c.elimination_detail);
      }
    }
    const auto names = [&](const std::set<T>& s) {
      std::string r;
      for (const auto& [x, y] : s) r += " (" + phi.name(x) + "," + phi.name(y) + ")";
      return r.empty() ? std::string(" none") : r;
    };
    if (got_seven != seven) out.fail(label + " intermediate list" + names(got_seven) + " expected" + names(seven));
    if (got_five != five) out.fail(label + " reduced list" + names(got_five) + " expected" + names(five));
    seven_total += got_seven.size();
    five_total += got_five.size();
    if (!seven.empty()) out.note(label + ":" + names(got_seven) + " ->" + names(got_five));
  }
  if (!descent_checked) out.fail("no C_n candidate (a2, highest root) was examined");
  out.summary = std::to_string(groups.size()) + " groups, " + std::to_string(seven_total) + " intermediate and " +
                std::to_string(five_total) + " reduced triples; C_n (a2, highest root) removed by (w(lambda),a1)";
  return out;
}

Outcome criterion4() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const auto groups = concat({{"A1xA1", "A2", "B2", "G2", "B3", "C3"}, labels('D', 4, 8), {"F4"}});
  std::size_t n = 0;
  for (const auto& l : groups) diff_group(out, l, PairKind::TypeII, n);
  const double s = seconds_since(t0);
  if (s >= 120) out.fail("runtime " + fixed1(s) + " s exceeds 120 s");
  out.summary = std::to_string(groups.size()) + " groups, " + std::to_string(n) + " type II pairs, " + fixed1(s) + " s";
  return out;
}

Outcome criterion5() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  long long triples = 0;
  for (const std::string label : {"A2", "B2", "G2", "A3", "B3", "C3", "D4", "B4", "F4"}) {
    const ChevalleyAlgebra g = build_algebra(parse_root_system(label));
    const auto rep = check_jacobi(g);
    const long long d = g.dim();
    triples += rep.triples_checked;
    if (rep.triples_checked != d * d * d) out.fail(label + " checked " + std::to_string(rep.triples_checked) + " triples");
    if (rep.violations != 0) out.fail(label + " has " + std::to_string(rep.violations) + " violations");
    out.note(label + ": dim " + std::to_string(d) + ", " + std::to_string(rep.violations) + " violations");
  }
  const double s = seconds_since(t0);
  if (s >= 60) out.fail("runtime " + fixed1(s) + " s exceeds 60 s");
  out.summary = std::to_string(triples) + " triples, zero violations required, " + fixed1(s) + " s";
  return out;
}

Outcome criterion6() {
  Outcome out;
  const auto groups = concat({{"A1xA1"}, labels('A', 2, 8), labels('B', 2, 8), labels('C', 3, 8), labels('D', 4, 8),
                              {"F4", "G2"}});
  int checked = 0;
  for (const auto& label : groups) {
    const RootSystem phi = parse_root_system(label);
    const ChevalleyAlgebra g = build_algebra(phi);
    for (const auto& inst : instantiate_all(g, catalog())) {
      ++checked;
      const auto& p = inst.pair;
      const int want = inst.entry->kind == PairKind::TypeI ? phi.rank() : phi.rank() - 1;
      const std::string tag = label + " " + inst.entry->id;
      if (inst.entry->kind == PairKind::TypeII && has_unknown_coefficients(inst.raw) && inst.solutions.empty())
        out.fail(tag + " has no closed coefficient solution");
      if (!p.closed) out.fail(tag + " not closed (library)");
      if (!oracle::closed(g, p.stabilizer)) out.fail(tag + " not closed (reference elimination)");
      const int toral = oracle::toral_dimension(phi, p.stabilizer.toral);
      if (toral != want) out.fail(tag + " toral dimension " + std::to_string(toral) + ", expected " + std::to_string(want));
      if (p.closed) {
        const auto rk = subalgebra_rank(g, p.stabilizer);
        if (rk.rank != want || rk.exceptional)
          out.fail(tag + " rank " + std::to_string(rk.rank) + (rk.exceptional ? " (exceptional)" : ""));
      }
      for (const auto& l : inst.coefficient_log) out.note(tag + ": " + l);
    }
  }
  out.summary = std::to_string(checked) + " instantiated entries over " + std::to_string(groups.size()) + " groups";
  return out;
}

Outcome criterion7() {
  Outcome out;
  const auto groups = concat({{"A1xA1", "A2", "B2", "G2", "A3", "B3", "C3"}, labels('D', 4, 8), {"F4"}});
  int checked = 0;
  for (const auto& label : groups) {
    const RootSystem phi = parse_root_system(label);
    const ChevalleyAlgebra g = build_algebra(phi);
    std::vector<std::pair<std::string, ToralPart>> torals;
    for (const auto& inst : instantiate_all(g, catalog(), PairKind::TypeII))
      torals.emplace_back("catalog " + inst.entry->id, inst.pair.stabilizer.toral);
    for (const auto& p : enumerate_type2(phi)) torals.emplace_back("computed", p.stabilizer.toral);
    for (const auto& [who, t] : torals) {
      ++checked;
      const auto bad = oracle::vanishing_roots(phi, t);
      if (!bad.empty()) out.fail(label + " " + who + ": root " + phi.name(bad.front()) + " vanishes on the toral part");
      if (check_regular_torus(phi, t) != bad.empty()) out.fail(label + " " + who + ": library verdict disagrees");
    }
  }
  const auto not_proportional = [&](const RootSystem& phi, const QVector& f, const std::string& name) {
    for (int r = 0; r < phi.num_roots(); ++r)
      if (proportional(f, phi.root(r))) {
        out.fail(name + " is proportional to root " + phi.name(r));
        return;
      }
    out.note(name + " is proportional to no root");
  };
  {
    const RootSystem f4 = build_root_system("F", 4);
    const int a4 = f4.simple_index(3);
    const int r1232 = f4.index_of_name("1232");
    not_proportional(f4, QVector(f4.root(a4) + f4.root(r1232)), "F4 functional a4+1232");
  }
  {
    const RootSystem c3 = build_root_system("C", 3);
    not_proportional(c3, QVector(unit(c3, 1) + Rational(2) * unit(c3, 2) - unit(c3, 3)), "C3 functional e1+2e2-e3");
  }
  out.summary = std::to_string(checked) + " toral parts scanned against every root";
  return out;
}

Outcome criterion8() {
  Outcome out;
  const auto check = [&](const std::string& what, const ChevalleyAlgebra& g, const SubalgebraSpec& h,
                         const std::string& type, int dim) {
    const auto id = identify_type(g, h);
    const int d = declared_dimension(g, h);
    const int semisimple = oracle::lie_dimension(id.semisimple_type);
    const std::string line = what + ": " + (id.resolved ? id.semisimple_type : "unresolved") + ", dim " + std::to_string(d);
    if (!id.resolved || id.semisimple_type != type) out.fail(line + ", expected " + type);
    if (d != dim) out.fail(line + ", expected dim " + std::to_string(dim));
    if (semisimple + id.center_dim + id.nilradical_dim != d)
      out.fail(line + ": type dimension " + std::to_string(semisimple) + " plus center and nilradical does not add up");
    out.note(line);
  };
  const auto from_catalog = [&](const std::string& label, const std::string& id) {
    const ChevalleyAlgebra g = build_algebra(parse_root_system(label));
    for (const auto& inst : instantiate_all(g, catalog()))
      if (inst.entry->id == id) return inst.pair.stabilizer;
    throw std::logic_error("catalog lacks " + id + " on " + label);
  };
  const auto computed_type2 = [&](const std::string& label) {
    const auto pairs = enumerate_type2(parse_root_system(label));
    if (pairs.size() != 1) throw std::logic_error(label + " should have one type II pair");
    return pairs.front().stabilizer;
  };
  {
    const ChevalleyAlgebra g = build_algebra(parse_root_system("B3"));
    check("B3 computed stabilizer", g, computed_type2("B3"), "G2", 14);
  }
  {
    const ChevalleyAlgebra g = build_algebra(parse_root_system("G2"));
    SubalgebraSpec h;
    for (int r = 0; r < g.root_system().num_roots(); ++r)
      if (g.root_system().norm2(r) == Rational(6)) h.root_spaces.set(static_cast<std::size_t>(r));
    check("G2 long-root stabilizer", g, h, "A2", 8);
  }
  {
    const ChevalleyAlgebra g = build_algebra(parse_root_system("D4"));
    check("D4 computed stabilizer", g, computed_type2("D4"), "B3", 21);
  }
  {
    const ChevalleyAlgebra g = build_algebra(parse_root_system("F4"));
    check("F4 spin9 entry", g, from_catalog("F4", "I.F4.spin9"), "B4", 36);
  }
  out.summary = "4 identifications";
  return out;
}

Outcome criterion9() {
  Outcome out;
  // Literal A2 form.
  {
    const RootSystem phi = build_root_system("A", 2);
    const ChevalleyAlgebra g = build_algebra(phi);
    std::ifstream in(std::string(TWOORBIT_DATA_DIR) + "/examples/listII_a2_literal.json");
    const SubalgebraSpec h = spec_from_json(phi, json::parse(in));
    const auto rep = check_closure(g, h);
    if (rep.closed || rep.witnesses.empty()) {
      out.fail("literal A2 form reported closed");
    } else {
      out.note("literal A2 form not closed, witness [" + rep.witnesses.front().first + ", " +
               rep.witnesses.front().second + "]");
    }
    if (oracle::closed(g, h)) out.fail("reference elimination finds the literal A2 form closed");
  }
  // G2 square alternative.
  {
    const RootSystem phi = build_root_system("G", 2);
    int seen = 0;
    for (const auto& c : type2_candidate_triples(phi)) {
      if (!c.g2_square_obstructed) continue;
      ++seen;
      if (!*c.g2_square_obstructed)
        out.fail("square alternative not obstructed for (" + phi.name(c.alpha) + ", " + phi.name(c.beta) + ")");
    }
    if (seen == 0) out.fail("no G2 plane candidate examined");
    out.note("G2 square alternative obstructed for " + std::to_string(seen) + " candidate(s)");
  }
  // Deleted catalog row, and deleted computed pair.
  {
    std::ifstream in(default_catalog_path());
    json full = json::parse(in);
    const std::string dropped = "II.B3.g2";
    json reduced = full;
    auto& entries = reduced["entries"];
    entries.erase(std::remove_if(entries.begin(), entries.end(), [&](const json& e) { return e["id"] == dropped; }),
                  entries.end());
    const Catalog small = parse_catalog(reduced);
    const auto groups = concat({{"A1xA1"}, labels('A', 2, 8), labels('B', 2, 8), labels('C', 3, 8),
                                labels('D', 4, 8), {"F4", "G2"}});
    std::size_t missing = 0, extra = 0, missing_after_removal = 0;
    std::string missing_id;
    for (const auto& label : groups) {
      const RootSystem phi = parse_root_system(label);
      const ChevalleyAlgebra g = build_algebra(phi);
      std::vector<ClassifiedPair> computed;
      if (phi.is_simple_type()) computed = enumerate_type1(phi);
      for (auto& p : enumerate_type2(phi)) computed.push_back(std::move(p));
      const DiffReport d = diff(phi, computed, instantiate_all(g, small));
      missing += d.missing.size();
      extra += d.extra.size();
      if (label == "B3") {
        auto fewer = computed;
        const DiffReport full_diff = diff(phi, computed, instantiate_all(g, catalog()));
        for (const auto& m : full_diff.matched)
          if (m.entry_id == dropped) fewer.erase(fewer.begin() + m.computed_index);
        const DiffReport d2 = diff(phi, fewer, instantiate_all(g, catalog()));
        missing_after_removal = d2.missing.size();
        if (!d2.missing.empty()) missing_id = d2.missing.front();
        if (!d2.extra.empty()) out.fail("removing a computed pair created extras");
      }
    }
    if (missing + extra != 1 || extra != 1)
      out.fail("catalog without " + dropped + ": " + std::to_string(missing) + " missing, " + std::to_string(extra) +
               " extra, expected exactly one discrepancy");
    else
      out.note("catalog without " + dropped + ": exactly one discrepancy (the B3 pair has no catalog row)");
    if (missing_after_removal != 1 || missing_id != dropped)
      out.fail("computed list without the B3 pair: " + std::to_string(missing_after_removal) + " missing");
    else
      out.note("computed list without the B3 pair: exactly one missing entry, " + missing_id);
  }
  out.summary = "3 negative controls";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cerr << "usage: acceptance [criterion numbers 1-9]\n";
      return 2;
    }
    which.push_back(k);
  }
  if (which.empty())
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) which.push_back(k);

  bool all = true;
  for (int k : which) {
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(k - 1)]();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    all = all && o.pass;
    std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.summary << "\n";
    for (const auto& d : o.details) std::cout << "    " << d << "\n";
    std::cout.flush();
  }
  return all ? 0 : 1;
}
