#include "twoorbit/catalog.hpp"
#include "twoorbit/serialize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

using namespace twoorbit;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string group = "all";
  int max_rank = 8;
  bool json_out = false;
  unsigned jobs = 0;
  std::string catalog_path;
  std::string spec_path;
  bool triples = false;
};

struct GroupResult {
  std::string text;
  json report;
  bool ok = true;
};

/// Groups named by a selector: "all", a family letter ("B"), a label
/// ("F4", "A1xA1"), or a comma-separated list of these.
std::vector<std::string> resolve_groups(const std::string& selector, int max_rank) {
  if (max_rank < 2) throw UsageError("--max-rank must be at least 2");
  const auto family_members = [&](char f) {
    std::vector<std::string> out;
    const int lo = f == 'C' ? 3 : f == 'D' ? 4 : 2;
    if (f == 'G') return std::vector<std::string>{"G2"};
    if (f == 'F') return max_rank >= 4 ? std::vector<std::string>{"F4"} : out;
    for (int r = lo; r <= max_rank; ++r) out.push_back(std::string(1, f) + std::to_string(r));
    return out;
  };
  std::vector<std::string> out;
  std::stringstream ss(selector);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item == "all") {
      out.push_back("A1xA1");
      for (char f : std::string("ABCDFG"))
        for (auto& g : family_members(f)) out.push_back(g);
    } else if (item.size() == 1 && std::string("ABCDFG").find(item[0]) != std::string::npos) {
      for (auto& g : family_members(item[0])) out.push_back(g);
    } else {
      try {
        out.push_back(parse_root_system(item).label());
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
  }
  if (out.empty()) throw UsageError("group selector '" + selector + "' names no group");
  return out;
}

/// Runs `work` on every group with a pool of `jobs` threads; results keep
/// the order of `groups`.
std::vector<GroupResult> run_pool(const std::vector<std::string>& groups, unsigned jobs,
                                  const std::function<GroupResult(const std::string&)>& work) {
  std::vector<GroupResult> results(groups.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(groups.size());
  const auto worker = [&] {
    for (std::size_t i; (i = next++) < groups.size();) {
      try {
        results[i] = work(groups[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(groups.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

GroupResult roots_of(const std::string& label) {
  const RootSystem phi = parse_root_system(label);
  GroupResult r;
  json roots = json::array();
  std::ostringstream out;
  out << phi.label() << ": " << phi.num_roots() << " roots, " << phi.num_positive() << " positive\n";
  for (int i = 0; i < phi.num_roots(); ++i) {
    json e;
    e["name"] = phi.name(i);
    e["coefficients"] = phi.coefficients(i);
    json coords = json::array();
    std::string cs;
    for (Eigen::Index k = 0; k < phi.ambient_dim(); ++k) {
      coords.push_back(phi.root(i)[k].str());
      cs += (k ? " " : "") + phi.root(i)[k].str();
    }
    e["coords"] = coords;
    e["height"] = phi.height(i);
    e["norm2"] = phi.norm2(i).str();
    roots.push_back(e);
    out << "  " << phi.name(i) << "  [" << cs << "]  height " << phi.height(i) << "\n";
  }
  r.report["group"] = group_to_json(phi);
  r.report["label"] = phi.label();
  r.report["count"] = phi.num_roots();
  r.report["roots"] = roots;
  r.text = out.str();
  return r;
}

std::string pair_line(const ClassifiedPair& p) {
  std::ostringstream out;
  out << "  dim " << p.dimension << ", type " << (p.type.resolved ? p.type.semisimple_type : "?");
  if (p.type.center_dim) out << " + center " << p.type.center_dim;
  if (p.type.nilradical_dim) out << " + nilradical " << p.type.nilradical_dim;
  out << ", rank " << p.stabilizer_rank << ", beta " << p.provenance.beta;
  if (p.provenance.alpha) out << ", alpha " << *p.provenance.alpha;
  out << ", " << (p.catalog_match ? "matches " + *p.catalog_match : std::string("no catalog match"));
  if (!p.closed) out << ", NOT CLOSED";
  out << "\n";
  return out.str();
}

std::vector<ClassifiedPair> enumerate(const RootSystem& phi, PairKind kind) {
  if (kind == PairKind::TypeI) return phi.is_simple_type() ? enumerate_type1(phi) : std::vector<ClassifiedPair>{};
  return enumerate_type2(phi);
}

GroupResult classify_group(const std::string& label, PairKind kind, const Catalog& catalog, bool triples) {
  const RootSystem phi = parse_root_system(label);
  const ChevalleyAlgebra g = build_algebra(phi);
  auto pairs = enumerate(phi, kind);
  const auto expected = instantiate_all(g, catalog, kind);
  const DiffReport d = diff(phi, pairs, expected);
  annotate_matches(pairs, d);

  GroupResult r;
  std::ostringstream out;
  out << phi.label() << ": " << pairs.size() << " pair" << (pairs.size() == 1 ? "" : "s") << " of type "
      << (kind == PairKind::TypeI ? "I" : "II") << "\n";
  json arr = json::array();
  for (const auto& p : pairs) {
    out << pair_line(p);
    arr.push_back(pair_to_json(phi, p));
    r.ok = r.ok && p.closed;
  }
  r.report["group"] = group_to_json(phi);
  r.report["label"] = phi.label();
  r.report["pairs"] = arr;

  if (triples && kind == PairKind::TypeII) {
    json ts = json::array();
    for (const auto& c : type2_candidate_triples(phi)) {
      json t;
      t["alpha"] = phi.name(c.alpha);
      t["beta"] = phi.name(c.beta);
      t["plane"] = c.plane_type;
      t["in_regime"] = c.in_regime;
      t["regular"] = c.regular;
      t["stage"] = stage_name(c.eliminated_at);
      t["detail"] = c.elimination_detail;
      if (c.g2_square_obstructed) t["square_obstructed"] = *c.g2_square_obstructed;
      ts.push_back(t);
      out << "  triple (" << phi.name(c.alpha) << ", " << phi.name(c.beta) << ") " << c.plane_type << ": "
          << stage_name(c.eliminated_at) << (c.elimination_detail.empty() ? "" : " (" + c.elimination_detail + ")")
          << "\n";
    }
    r.report["triples"] = ts;
  }
  r.text = out.str();
  return r;
}

GroupResult verify_group(const std::string& label, const Catalog& catalog) {
  const RootSystem phi = parse_root_system(label);
  const ChevalleyAlgebra g = build_algebra(phi);
  GroupResult r;
  std::ostringstream out;
  json checks = json::array();

  const auto expected = instantiate_all(g, catalog);
  for (const auto& inst : expected) {
    const auto& p = inst.pair;
    const int want_rank = inst.entry->kind == PairKind::TypeI ? phi.rank() : phi.rank() - 1;
    json c;
    c["entry"] = inst.entry->id;
    c["closed"] = p.closed;
    c["rank"] = p.stabilizer_rank;
    c["expected_rank"] = want_rank;
    c["dimension"] = p.dimension;
    c["expected_dimension"] = inst.expected_dimension;
    c["type"] = p.type.semisimple_type;
    c["expected_type"] = inst.expected_type;
    c["center"] = p.type.center_dim;
    c["expected_center"] = inst.expected_center;
    c["regular_torus"] = p.regular_torus;
    c["coefficients"] = inst.coefficient_log;
    std::vector<std::string> problems;
    if (!p.closed) problems.push_back("not closed");
    if (p.stabilizer_rank != want_rank) problems.push_back("rank " + std::to_string(p.stabilizer_rank));
    if (p.dimension != inst.expected_dimension) problems.push_back("dimension " + std::to_string(p.dimension));
    if (!p.type.resolved || p.type.semisimple_type != inst.expected_type || p.type.center_dim != inst.expected_center)
      problems.push_back("type " + p.type.semisimple_type + " center " + std::to_string(p.type.center_dim));
    if (inst.entry->kind == PairKind::TypeII && !p.regular_torus) problems.push_back("toral part not regular");
    c["problems"] = problems;
    c["ok"] = problems.empty();
    checks.push_back(c);
    r.ok = r.ok && problems.empty();
    out << "  " << inst.entry->id << ": dim " << p.dimension << ", " << p.type.semisimple_type;
    if (p.type.center_dim) out << " + center " << p.type.center_dim;
    for (const auto& l : inst.coefficient_log) out << ", " << l;
    out << (problems.empty() ? "" : ", FAIL:");
    for (const auto& pr : problems) out << " " << pr;
    out << "\n";
  }

  std::vector<ClassifiedPair> computed = enumerate(phi, PairKind::TypeI);
  for (auto& p : enumerate(phi, PairKind::TypeII)) computed.push_back(std::move(p));
  const DiffReport d = diff(phi, computed, expected);
  json dj;
  dj["missing"] = d.missing;
  json extra = json::array();
  for (int i : d.extra) extra.push_back(pair_to_json(phi, computed[static_cast<std::size_t>(i)]));
  dj["extra"] = extra;
  json matched = json::array();
  for (const auto& m : d.matched) matched.push_back({{"entry", m.entry_id}, {"conjugator", m.conjugator}});
  dj["matched"] = matched;
  r.ok = r.ok && d.empty();

  std::ostringstream head;
  head << phi.label() << ": " << computed.size() << " computed, " << expected.size() << " in catalog, "
       << d.matched.size() << " matched";
  if (!d.missing.empty()) head << ", " << d.missing.size() << " missing";
  if (!d.extra.empty()) head << ", " << d.extra.size() << " extra";
  head << (r.ok ? " [ok]" : " [FAIL]") << "\n";
  std::string text = head.str() + out.str();
  for (const auto& m : d.missing) text += "  missing " + m + "\n";
  for (int i : d.extra) text += "  extra" + pair_line(computed[static_cast<std::size_t>(i)]);

  r.report["group"] = group_to_json(phi);
  r.report["label"] = phi.label();
  r.report["instantiations"] = checks;
  r.report["diff"] = dj;
  r.report["ok"] = r.ok;
  r.text = text;
  return r;
}

GroupResult jacobi_group(const std::string& label) {
  const RootSystem phi = parse_root_system(label);
  const auto rep = check_jacobi(build_algebra(phi));
  GroupResult r;
  r.ok = rep.violations == 0;
  r.report = {{"label", phi.label()},
              {"triples", rep.triples_checked},
              {"violations", rep.violations},
              {"examples", rep.examples}};
  r.text = phi.label() + ": " + std::to_string(rep.triples_checked) + " triples, " +
           std::to_string(rep.violations) + " violations\n";
  for (const auto& e : rep.examples) r.text += "  " + e + "\n";
  return r;
}

int check_subalgebra(const RunConfig& cfg) {
  const auto groups = resolve_groups(cfg.group, std::max(cfg.max_rank, 2));
  if (groups.size() != 1) throw UsageError("check-subalgebra needs exactly one group");
  if (cfg.spec_path.empty()) throw UsageError("check-subalgebra needs --spec");
  const RootSystem phi = parse_root_system(groups.front());
  std::ifstream in(cfg.spec_path);
  if (!in) throw UsageError("cannot open spec file '" + cfg.spec_path + "'");
  SubalgebraSpec h;
  try {
    h = spec_from_json(phi, json::parse(in));
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad spec file: ") + e.what());
  }
  const ChevalleyAlgebra g = build_algebra(phi);
  json rep;
  rep["label"] = phi.label();
  const auto problems = validate_spec(phi, h);
  rep["problems"] = problems;
  std::ostringstream out;
  bool closed = false;
  if (problems.empty()) {
    SubalgebraSpec spec = h;
    if (has_unknown_coefficients(h)) {
      const auto sols = solve_mixed_coefficients(g, h);
      json sj = json::array();
      for (const auto& s : sols) sj.push_back(spec_to_json(phi, s.spec));
      rep["solutions"] = sj;
      out << sols.size() << " coefficient solution(s)\n";
      if (!sols.empty()) spec = sols.front().spec;
      for (auto& line : spec.mixed)
        for (auto& t : line.terms)
          if (!t.coeff) t.coeff = Rational(1);
    }
    const auto cr = check_closure(g, spec);
    closed = cr.closed;
    json w = json::array();
    for (const auto& [a, b] : cr.witnesses) w.push_back({a, b});
    rep["witnesses"] = w;
    rep["dimension"] = declared_dimension(g, spec);
    rep["regular_torus"] = check_regular_torus(phi, spec.toral);
    out << "dimension " << declared_dimension(g, spec) << "\n";
    out << (closed ? "closed" : "NOT closed") << "\n";
    for (const auto& [a, b] : cr.witnesses) out << "  witness: [" << a << ", " << b << "] leaves the span\n";
    if (closed) {
      const auto rk = subalgebra_rank(g, spec);
      const auto ty = identify_type(g, spec);
      rep["rank"] = rk.rank;
      rep["rank_exceptional"] = rk.exceptional;
      rep["type"] = ty.resolved ? json(ty.semisimple_type) : json(nullptr);
      rep["center_dim"] = ty.center_dim;
      rep["nilradical_dim"] = ty.nilradical_dim;
      out << "rank " << rk.rank << (rk.exceptional ? " (lower bound)" : "") << ", type "
          << (ty.resolved ? ty.semisimple_type : "unresolved: " + ty.diagnostic);
      if (ty.center_dim) out << " + center " << ty.center_dim;
      if (ty.nilradical_dim) out << " + nilradical " << ty.nilradical_dim;
      out << "\n";
    }
    out << "toral part " << (check_regular_torus(phi, spec.toral) ? "regular" : "not regular") << "\n";
  } else {
    for (const auto& p : problems) out << "malformed: " << p << "\n";
  }
  rep["closed"] = closed;
  if (cfg.json_out)
    std::cout << dump(rep);
  else
    std::cout << out.str();
  return closed ? kExitPass : kExitFail;
}

int run(const RunConfig& cfg) {
  if (cfg.command == "check-subalgebra") return check_subalgebra(cfg);
  const auto groups = resolve_groups(cfg.group, cfg.max_rank);
  const unsigned jobs = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());

  Catalog catalog;
  if (cfg.command == "type1" || cfg.command == "type2" || cfg.command == "verify-tables") {
    const std::string path = cfg.catalog_path.empty() ? default_catalog_path() : cfg.catalog_path;
    try {
      catalog = load_catalog(path);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }

  std::function<GroupResult(const std::string&)> work;
  if (cfg.command == "roots")
    work = roots_of;
  else if (cfg.command == "type1")
    work = [&](const std::string& l) { return classify_group(l, PairKind::TypeI, catalog, false); };
  else if (cfg.command == "type2")
    work = [&](const std::string& l) { return classify_group(l, PairKind::TypeII, catalog, cfg.triples); };
  else if (cfg.command == "verify-tables")
    work = [&](const std::string& l) { return verify_group(l, catalog); };
  else if (cfg.command == "jacobi")
    work = jacobi_group;
  else
    throw UsageError("unknown command '" + cfg.command + "'");

  const auto results = run_pool(groups, jobs, work);
  bool ok = true;
  json all = json::array();
  for (const auto& r : results) {
    ok = ok && r.ok;
    all.push_back(r.report);
  }
  if (cfg.json_out) {
    if (cfg.command == "roots" && results.size() == 1)
      std::cout << dump(results.front().report);
    else
      std::cout << dump({{"command", cfg.command}, {"ok", ok}, {"groups", all}});
  } else {
    for (const auto& r : results) std::cout << r.text;
    if (cfg.command == "verify-tables" || cfg.command == "jacobi") std::cout << (ok ? "PASS\n" : "FAIL\n");
  }
  return ok ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classification engine for cuspidal two-orbit varieties"};
  app.require_subcommand(1);
  RunConfig cfg;

  const auto add_common = [&](CLI::App* sub, bool with_catalog) {
    sub->add_option("-g,--group", cfg.group, "Group label (B3, A1xA1), family letter, comma list, or \"all\"");
    sub->add_option("--max-rank", cfg.max_rank, "Largest rank for family and \"all\" selectors")->check(CLI::Range(2, 8));
    sub->add_flag("--json", cfg.json_out, "Write JSON to standard output");
    sub->add_option("-j,--jobs", cfg.jobs, "Worker threads (default: all cores)");
    if (with_catalog) sub->add_option("--catalog", cfg.catalog_path, "Catalog file (default: bundled)");
  };

  auto* roots = app.add_subcommand("roots", "List the roots of a group");
  add_common(roots, false);
  roots->add_option("label", cfg.group, "Group label (same as --group)");
  auto* t1 = app.add_subcommand("type1", "Enumerate cuspidal pairs of type I");
  add_common(t1, true);
  auto* t2 = app.add_subcommand("type2", "Enumerate pairs of type II");
  add_common(t2, true);
  t2->add_flag("--triples", cfg.triples, "Also report every candidate (alpha, beta) and its filter verdict");
  auto* vt = app.add_subcommand("verify-tables", "Diff the engines against the catalog");
  add_common(vt, true);
  auto* cs = app.add_subcommand("check-subalgebra", "Verify a subalgebra spec given as JSON");
  add_common(cs, false);
  cs->add_option("--spec", cfg.spec_path, "Spec file")->required();
  auto* jc = app.add_subcommand("jacobi", "Check the Jacobi identity on the Chevalley basis");
  add_common(jc, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  try {
    return run(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
