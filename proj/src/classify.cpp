#include "twoorbit/classify.hpp"

#include "twoorbit/linalg.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace twoorbit {

namespace {

RootSet set_of(std::initializer_list<int> roots) {
  RootSet s;
  for (int r : roots) s.set(static_cast<std::size_t>(r));
  return s;
}

bool subset_of(const RootSet& a, const RootSet& b) { return (a & ~b).none(); }

std::string names_of(const RootSystem& phi, const RootSet& s) {
  std::string out = "{";
  bool first = true;
  for (int r : members(s, phi.num_roots())) {
    out += (first ? "" : ",") + phi.name(r);
    first = false;
  }
  return out + "}";
}

QVector coeff_vector(const RootSystem& phi, int root) {
  QVector c(phi.rank());
  for (int i = 0; i < phi.rank(); ++i) c[i] = Rational(phi.coefficients(root)[static_cast<std::size_t>(i)]);
  return c;
}

LinearConstraint constraint(QVector coeffs, Relation rel, Rational rhs, std::string label) {
  return {std::move(coeffs), rel, rhs, std::move(label)};
}

bool proportional_to_some_root(const RootSystem& phi, const QVector& v) {
  for (int r = 0; r < phi.num_positive(); ++r)
    if (proportional(v, phi.root(r))) return true;
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// Constraints on rank-2 planes through beta

ReformulConstraint reformul_constraint(const RootSystem& phi, int beta, int gamma) {
  if (gamma == beta || gamma == phi.negative(beta)) throw std::invalid_argument("reformul_constraint: gamma must differ from +-beta");
  ReformulConstraint c;
  c.plane = rank2_subsystem(phi, gamma, beta);
  c.beta = beta;
  const auto& plane = c.plane;
  std::vector<int> others;
  for (int r : plane.roots)
    if (phi.is_positive(r) && r != beta && r != phi.negative(beta)) others.push_back(r);
  const bool beta_simple = std::find(plane.basis.begin(), plane.basis.end(), beta) != plane.basis.end() ||
                           std::find(plane.basis.begin(), plane.basis.end(), phi.negative(beta)) != plane.basis.end();

  if (plane.type_tag == "G2") {
    if (phi.num_roots() != 12) throw std::invalid_argument("reformul_constraint: G2 plane inside a larger system");
    c.case_tag = "g2";
    if (phi.name(beta) == "11") {
      for (const auto& names : std::vector<std::vector<std::string>>{{"10", "21", "31", "32"},
                                                                     {"01", "21", "31", "32"},
                                                                     {"01", "-01", "21", "31", "32"},
                                                                     {"01", "-01", "31", "-31", "32", "-32"}}) {
        RootSet s;
        for (const auto& n : names) s.set(static_cast<std::size_t>(phi.index_of_name(n)));
        c.alternatives.push_back({s, s});
      }
    }
    return c;
  }
  if (beta_simple) {
    RootSet pos;
    for (int r : others) pos.set(static_cast<std::size_t>(r));
    if (plane.type_tag == "A1xA1") {
      c.case_tag = "i";
      const int g = others.front();
      c.alternatives.push_back({set_of({g, phi.negative(g)}), std::nullopt});
      c.alternatives.push_back({pos, std::nullopt});
    } else {
      c.case_tag = "free";
      c.alternatives.push_back({pos, std::nullopt});
    }
    return c;
  }
  if (plane.type_tag == "A2") {
    c.case_tag = "ii";
    for (int p : plane.basis) c.alternatives.push_back({set_of({p, phi.negative(p)}), std::nullopt});
    return c;
  }
  if (plane.type_tag == "B2") {
    int a = plane.basis[0], b = plane.basis[1];
    if (phi.norm2(a) < phi.norm2(b)) std::swap(a, b);
    const int ab = phi.sum(a, b);
    const int a2b = phi.sum(ab, b);
    if (beta == ab) {
      c.case_tag = "iv";
      c.alternatives.push_back({set_of({a2b, a, phi.negative(a)}), std::nullopt});
      const RootSet eq = set_of({a2b, b});
      c.alternatives.push_back({eq, eq});
    } else if (beta == a2b) {
      c.case_tag = "iii";
      const RootSet eq = set_of({a, ab});
      c.alternatives.push_back({eq, eq});
    } else {
      throw std::logic_error("reformul_constraint: unexpected position of beta in a B2 plane");
    }
    return c;
  }
  throw std::invalid_argument("reformul_constraint: unsupported plane type " + plane.type_tag);
}

std::vector<RootSet> plane_patterns(const RootSystem& phi, const ReformulConstraint& c) {
  const int beta = c.beta, mbeta = phi.negative(beta);
  std::vector<int> free_roots;
  RootSet plane_set;
  for (int r : c.plane.roots) {
    plane_set.set(static_cast<std::size_t>(r));
    if (r != beta && r != mbeta) free_roots.push_back(r);
  }
  auto admissible = [&](const RootSet& s) {
    if (s.test(static_cast<std::size_t>(beta)) || s.test(static_cast<std::size_t>(mbeta))) return false;
    for (int a : members(s, phi.num_roots()))
      for (int b : members(s, phi.num_roots())) {
        const int t = phi.sum(a, b);
        if (t < 0) continue;
        if (t == beta || t == mbeta) return false;
        if (plane_set.test(static_cast<std::size_t>(t)) && !s.test(static_cast<std::size_t>(t))) return false;
      }
    return true;
  };
  std::set<std::string> seen;
  std::vector<RootSet> out;
  auto add = [&](const RootSet& s) {
    if (admissible(s) && seen.insert(s.to_string()).second) out.push_back(s);
  };
  for (const auto& alt : c.alternatives) {
    if (alt.must_equal) {
      add(*alt.must_equal);
      continue;
    }
    const auto n = free_roots.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      RootSet s;
      for (std::size_t k = 0; k < n; ++k)
        if (mask >> k & 1U) s.set(static_cast<std::size_t>(free_roots[k]));
      if (subset_of(alt.must_contain, s)) add(s);
    }
  }
  std::sort(out.begin(), out.end(), [](const RootSet& a, const RootSet& b) { return a.count() != b.count() ? a.count() < b.count() : a.to_string() > b.to_string(); });
  return out;
}

bool conjugate_sandwich_exists(const RootSystem& phi, const RootSet& psi) {
  // f vanishes on roots whose sign class is symmetric in psi (both or neither).
  std::vector<QVector> zero_rows;
  std::vector<int> one_sided;
  for (int r = 0; r < phi.num_positive(); ++r) {
    const bool p = psi.test(static_cast<std::size_t>(r));
    const bool n = psi.test(static_cast<std::size_t>(phi.negative(r)));
    if (p == n)
      zero_rows.push_back(coeff_vector(phi, r));
    else
      one_sided.push_back(p ? r : phi.negative(r));
  }
  QMatrix e(static_cast<Eigen::Index>(zero_rows.size()), phi.rank());
  for (std::size_t i = 0; i < zero_rows.size(); ++i) e.row(static_cast<Eigen::Index>(i)) = zero_rows[i].transpose();
  const QMatrix basis = zero_rows.empty() ? QMatrix(QMatrix::Identity(phi.rank(), phi.rank())) : nullspace(e);
  const Eigen::Index k = basis.cols();
  if (k == 0) return false;
  std::vector<LinearConstraint> cone;
  std::vector<QVector> rows;
  for (int s : one_sided) {
    QVector row = (coeff_vector(phi, s).transpose() * basis).transpose();
    rows.push_back(row);
    cone.push_back(constraint(row, Relation::GreaterEqual, Rational(0), phi.name(s)));
  }
  for (const auto& row : rows) {
    if (is_zero(row)) continue;
    auto cs = cone;
    cs.push_back(constraint(row, Relation::GreaterEqual, Rational(1), "nonzero"));
    if (fourier_motzkin(k, cs).feasible) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Conjugacy

std::string SpecShape::key() const {
  std::string k = full.to_string();
  k += '|';
  for (const auto& l : lines) {
    for (int r : l) k += std::to_string(r) + ',';
    k += ';';
  }
  k += '|';
  if (full_torus) k += "T";
  for (const auto& row : functionals) {
    for (const auto& x : row) k += x.str() + ',';
    k += ';';
  }
  return k;
}

namespace {

std::vector<std::vector<Rational>> reduced_rows(const QMatrix& m) {
  QMatrix r = m;
  const auto pivots = rref_in_place(r);
  std::vector<std::vector<Rational>> out;
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    std::vector<Rational> row;
    for (Eigen::Index j = 0; j < r.cols(); ++j) row.push_back(r(static_cast<Eigen::Index>(i), j));
    out.push_back(row);
  }
  return out;
}

QMatrix rows_matrix(const std::vector<std::vector<Rational>>& rows, Eigen::Index cols) {
  QMatrix m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
  return m;
}

void sort_lines(std::vector<std::vector<int>>& lines) {
  for (auto& l : lines) std::sort(l.begin(), l.end());
  std::sort(lines.begin(), lines.end());
}

constexpr std::size_t kOrbitCap = 4'000'000;

}  // namespace

SpecShape spec_shape(const RootSystem& phi, const SubalgebraSpec& h) {
  SpecShape s;
  s.full = h.root_spaces;
  for (const auto& line : h.mixed) {
    std::vector<int> roots;
    for (const auto& t : line.terms) roots.push_back(t.root);
    s.lines.push_back(roots);
  }
  sort_lines(s.lines);
  s.full_torus = h.toral.full;
  if (!h.toral.full) {
    QMatrix m(static_cast<Eigen::Index>(h.toral.functionals.size()), phi.rank());
    for (std::size_t i = 0; i < h.toral.functionals.size(); ++i)
      m.row(static_cast<Eigen::Index>(i)) = phi.simple_coordinates(h.toral.functionals[i]).transpose();
    s.functionals = reduced_rows(m);
  }
  return s;
}

SpecShape apply_automorphism(const RootAutomorphism& a, const SpecShape& s) {
  SpecShape t;
  t.full_torus = s.full_torus;
  for (std::size_t i = 0; i < a.perm.size(); ++i)
    if (s.full.test(i)) t.full.set(static_cast<std::size_t>(a.perm[i]));
  for (const auto& l : s.lines) {
    std::vector<int> m;
    for (int r : l) m.push_back(a.perm[static_cast<std::size_t>(r)]);
    t.lines.push_back(m);
  }
  sort_lines(t.lines);
  if (!s.functionals.empty()) {
    const Eigen::Index r = a.on_simple.rows();
    const QMatrix m = rows_matrix(s.functionals, r);
    const QMatrix act = a.on_simple.cast<Rational>();
    t.functionals = reduced_rows(QMatrix(m * act.transpose()));
  }
  return t;
}

namespace {

struct OrbitSearch {
  std::unordered_map<std::string, std::pair<std::string, int>> parent;
  std::string minimum;
};

// Breadth-first orbit walk; stops early when `target` is reached.
OrbitSearch walk_orbit(const RootSystem& phi, const SpecShape& start, const std::string* target) {
  OrbitSearch out;
  const auto& gens = phi.automorphism_generators();
  std::deque<SpecShape> queue{start};
  const std::string k0 = start.key();
  out.parent.emplace(k0, std::make_pair(std::string(), -1));
  out.minimum = k0;
  if (target && *target == k0) return out;
  while (!queue.empty()) {
    SpecShape cur = std::move(queue.front());
    queue.pop_front();
    const std::string ck = cur.key();
    for (std::size_t g = 0; g < gens.size(); ++g) {
      SpecShape next = apply_automorphism(gens[g], cur);
      std::string nk = next.key();
      if (out.parent.count(nk)) continue;
      out.parent.emplace(nk, std::make_pair(ck, static_cast<int>(g)));
      if (nk < out.minimum) out.minimum = nk;
      if (target && *target == nk) return out;
      if (out.parent.size() > kOrbitCap) throw std::runtime_error("orbit enumeration exceeded its size cap");
      queue.push_back(std::move(next));
    }
  }
  return out;
}

}  // namespace

std::string canonical_key(const RootSystem& phi, const SubalgebraSpec& h) {
  return walk_orbit(phi, spec_shape(phi, h), nullptr).minimum;
}

std::optional<std::vector<std::string>> find_conjugator(const RootSystem& phi, const SubalgebraSpec& from,
                                                        const SubalgebraSpec& to) {
  const std::string target = spec_shape(phi, to).key();
  const auto search = walk_orbit(phi, spec_shape(phi, from), &target);
  auto it = search.parent.find(target);
  if (it == search.parent.end()) return std::nullopt;
  std::vector<std::string> word;
  for (std::string k = target; search.parent.at(k).second >= 0;) {
    const auto& [prev, gen] = search.parent.at(k);
    word.push_back(phi.automorphism_generators()[static_cast<std::size_t>(gen)].name);
    k = prev;
  }
  std::reverse(word.begin(), word.end());
  return word;
}

void attach_checks(const ChevalleyAlgebra& g, ClassifiedPair& p) {
  p.dimension = declared_dimension(g, p.stabilizer);
  p.closed = check_closure(g, p.stabilizer).closed;
  p.regular_torus = check_regular_torus(g.root_system(), p.stabilizer.toral);
  if (p.closed) {
    p.stabilizer_rank = subalgebra_rank(g, p.stabilizer).rank;
    p.type = identify_type(g, p.stabilizer);
  }
}

// ---------------------------------------------------------------------------
// Type I

namespace {

struct Type1Candidate {
  RootSet psi;
  std::string branch;
};

std::vector<Type1Candidate> search_beta(const RootSystem& phi, int beta) {
  const int n = phi.num_roots();
  const int mbeta = phi.negative(beta);
  std::vector<int> plane_of(static_cast<std::size_t>(n), -1);
  std::vector<ReformulConstraint> constraints;
  for (int g = 0; g < n; ++g) {
    if (g == beta || g == mbeta || plane_of[static_cast<std::size_t>(g)] >= 0) continue;
    const int gp = phi.is_positive(g) ? g : phi.negative(g);
    constraints.push_back(reformul_constraint(phi, beta, gp));
    for (int r : constraints.back().plane.roots)
      if (r != beta && r != mbeta) plane_of[static_cast<std::size_t>(r)] = static_cast<int>(constraints.size()) - 1;
  }
  std::vector<std::vector<RootSet>> patterns;
  for (const auto& c : constraints) patterns.push_back(plane_patterns(phi, c));
  std::vector<int> order(constraints.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return patterns[static_cast<std::size_t>(a)].size() < patterns[static_cast<std::size_t>(b)].size();
  });
  std::vector<int> rank_of_plane(constraints.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank_of_plane[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

  std::vector<std::pair<RootSet, std::vector<int>>> found;
  std::vector<int> choice(constraints.size(), -1);
  std::function<void(std::size_t, const RootSet&)> rec = [&](std::size_t depth, const RootSet& cur) {
    if (depth == order.size()) {
      if (is_additively_closed(phi, cur)) found.emplace_back(cur, choice);
      return;
    }
    const auto plane = static_cast<std::size_t>(order[depth]);
    for (std::size_t p = 0; p < patterns[plane].size(); ++p) {
      const RootSet& pat = patterns[plane][p];
      const RootSet next = cur | pat;
      bool ok = true;
      const auto added = members(pat, n);
      const auto all = members(next, n);
      for (std::size_t i = 0; i < added.size() && ok; ++i)
        for (std::size_t j = 0; j < all.size() && ok; ++j) {
          const int c = phi.sum(added[i], all[j]);
          if (c < 0) continue;
          if (c == beta || c == mbeta) {
            ok = false;
          } else if (!next.test(static_cast<std::size_t>(c)) &&
                     rank_of_plane[static_cast<std::size_t>(plane_of[static_cast<std::size_t>(c)])] <= static_cast<int>(depth)) {
            ok = false;
          }
        }
      if (!ok) continue;
      choice[plane] = static_cast<int>(p);
      rec(depth + 1, next);
    }
    choice[plane] = -1;
  };
  rec(0, RootSet());

  // Keep candidates that are maximal among those agreeing on every non-free plane.
  auto signature = [&](const std::vector<int>& ch) {
    std::vector<int> sig;
    for (std::size_t i = 0; i < constraints.size(); ++i)
      if (!constraints[i].free()) sig.push_back(ch[i]);
    return sig;
  };
  std::vector<Type1Candidate> out;
  for (std::size_t i = 0; i < found.size(); ++i) {
    bool dominated = false;
    const auto si = signature(found[i].second);
    for (std::size_t j = 0; j < found.size() && !dominated; ++j) {
      if (i == j) continue;
      if (found[i].first != found[j].first && subset_of(found[i].first, found[j].first) && si == signature(found[j].second))
        dominated = true;
    }
    if (dominated) continue;
    std::string branch;
    for (std::size_t p = 0; p < constraints.size(); ++p) {
      if (constraints[p].free()) continue;
      if (!branch.empty()) branch += " ";
      branch += constraints[p].case_tag + ":" + names_of(phi, patterns[p][static_cast<std::size_t>(found[i].second[p])]);
    }
    out.push_back({found[i].first, branch.empty() ? "free planes only" : branch});
  }
  return out;
}

bool full_support(const RootSystem& phi, int r) {
  const auto& c = phi.coefficients(r);
  return std::all_of(c.begin(), c.end(), [](int x) { return x != 0; });
}

}  // namespace

std::vector<RootSet> type1_candidates_for_beta(const RootSystem& phi, int beta) {
  std::vector<RootSet> out;
  for (const auto& c : search_beta(phi, beta))
    if (!conjugate_sandwich_exists(phi, c.psi)) out.push_back(c.psi);
  return out;
}

std::vector<ClassifiedPair> enumerate_type1(const RootSystem& phi) {
  if (!phi.is_simple_type()) throw std::invalid_argument("enumerate_type1: the root system must be simple");
  const ChevalleyAlgebra g(phi);
  const ParabolicTable table = parabolic_table(phi);
  std::map<std::string, ClassifiedPair> by_key;
  for (int beta = 0; beta < phi.num_positive(); ++beta) {
    if (!full_support(phi, beta)) continue;
    for (const auto& cand : search_beta(phi, beta)) {
      if (parabolic_sandwich_exists(table, cand.psi) || conjugate_sandwich_exists(phi, cand.psi)) continue;
      ClassifiedPair p;
      p.group = phi.label();
      p.kind = PairKind::TypeI;
      p.stabilizer.toral = ToralPart::whole();
      p.stabilizer.root_spaces = cand.psi;
      const std::string key = canonical_key(phi, p.stabilizer);
      if (by_key.count(key)) continue;
      p.provenance.beta = phi.name(beta);
      p.provenance.branch = cand.branch;
      attach_checks(g, p);
      if (!p.closed || p.stabilizer_rank != phi.rank()) continue;
      by_key.emplace(key, std::move(p));
    }
  }
  std::vector<std::pair<std::string, ClassifiedPair>> items(by_key.begin(), by_key.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.second.dimension > b.second.dimension; });
  std::vector<ClassifiedPair> out;
  for (auto& [k, p] : items) out.push_back(std::move(p));
  return out;
}

// ---------------------------------------------------------------------------
// Type II

bool remark_property(const RootSystem& phi, const QVector& g1, const QVector& g2, const QVector& g3) {
  const QMatrix span = columns(std::vector<QVector>{g1, g2, g3}, phi.ambient_dim());
  if (rank(span) != 3) throw std::invalid_argument("remark_property: the three roots must span a rank-3 space");
  for (int r = 0; r < phi.num_roots(); ++r) {
    const auto n = solve_exact(span, QVector(phi.root(r)));
    if (!n) continue;
    const QVector v = phi.root(r) - (*n)[2] * g3;
    if (is_zero(v)) continue;
    if (!proportional_to_some_root(phi, v)) return false;
  }
  return true;
}

std::string stage_name(Type2Stage s) {
  switch (s) {
    case Type2Stage::Regime: return "regime";
    case Type2Stage::Regularity: return "regularity";
    case Type2Stage::Trick: return "sign-conditions";
    case Type2Stage::Plan: return "plan-equalities";
    case Type2Stage::Descent: return "descent";
    case Type2Stage::Sphericity: return "sphericity";
    case Type2Stage::Accepted: return "accepted";
  }
  return "?";
}

bool g2_integrality_obstruction(const RootSystem& phi, const RootSubsystem& plane, int alpha, int beta,
                                const std::vector<LinearConstraint>& constraints) {
  if (plane.type_tag != "G2") throw std::invalid_argument("g2_integrality_obstruction: plane is not of type G2");
  const QVector& a = phi.root(alpha);
  const QVector& b = phi.root(beta);
  // The cone is stable under scaling by t >= 1, so strict positivity is
  // normalized to >= 1.
  for (int k : {0, 1}) {
    auto cs = constraints;
    cs.push_back(constraint(a, Relation::GreaterEqual, Rational(1), "(lambda,alpha)>0"));
    cs.push_back(constraint(b, Relation::GreaterEqual, Rational(1), "(lambda,beta)>0"));
    cs.push_back(constraint(QVector(a - Rational(k) * (a + b)), Relation::Equal, Rational(0), "ratio=" + std::to_string(k)));
    if (fourier_motzkin(phi.ambient_dim(), cs).feasible) return false;
  }
  return true;
}

Type2Levi type2_stabilizer_levi(const ChevalleyAlgebra& g, int alpha, int beta) {
  const auto& phi = g.root_system();
  Type2Levi out;
  const RootSubsystem plane = rank2_subsystem(phi, alpha, beta);
  const QVector sab = reflect(phi.root(alpha), phi.root(beta));
  const int s = phi.index_of(sab);
  out.literal.toral = ToralPart::kernel({QVector(phi.root(alpha) + sab)});
  if (plane.type_tag == "A1xA1") {
    out.literal.mixed.push_back({{{phi.negative(alpha), Rational(1)}, {beta, std::nullopt}}});
    out.literal.mixed.push_back({{{alpha, Rational(1)}, {phi.negative(beta), std::nullopt}}});
  } else {
    out.literal.mixed.push_back({{{phi.negative(alpha), Rational(1)}, {s, std::nullopt}}});
  }
  SubalgebraSpec unit = out.literal;
  for (auto& line : unit.mixed)
    for (auto& t : line.terms) t.coeff = Rational(1);
  out.literal_closure = check_closure(g, unit);
  out.literal_solutions = solve_mixed_coefficients(g, out.literal);
  if (phi.rank() == 2 && phi.is_simple_type()) {
    SubalgebraSpec pf;
    pf.toral = ToralPart::kernel({QVector(phi.simple_root(0) - phi.simple_root(1))});
    const int a1 = phi.simple_index(0), a2 = phi.simple_index(1);
    pf.mixed.push_back({{{a1, Rational(1)}, {a2, std::nullopt}}});
    for (int r = 0; r < phi.num_positive(); ++r)
      if (r != a1 && r != a2) pf.root_spaces.set(static_cast<std::size_t>(r));
    out.positive_solutions = solve_mixed_coefficients(g, pf);
    out.positive_form = pf;
  }
  return out;
}

namespace {

// lambda pairings expressed as ambient coefficient vectors.
struct WeightAlgebra {
  const RootSystem& phi;
  QVector alpha, beta, phi_vec, alpha_co;

  // (w(lambda), g) = (lambda, g - (phi, g) alpha coroot)
  QVector wpair(const QVector& g) const { return g - dot(phi_vec, g) * alpha_co; }
};

std::vector<std::vector<int>> weight_search_order(int rank) {
  std::vector<std::vector<int>> all;
  std::vector<int> cur(static_cast<std::size_t>(rank), 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == rank) {
      if (std::any_of(cur.begin(), cur.end(), [](int x) { return x != 0; })) all.push_back(cur);
      return;
    }
    for (int v = 0; v < 3; ++v) {
      cur[static_cast<std::size_t>(i)] = v;
      rec(i + 1);
    }
  };
  rec(0);
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    const int sa = std::accumulate(a.begin(), a.end(), 0), sb = std::accumulate(b.begin(), b.end(), 0);
    return sa != sb ? sa < sb : a < b;
  });
  return all;
}

std::optional<QVector> choose_lambda(const RootSystem& phi, const std::vector<LinearConstraint>& cs) {
  const auto omegas = fundamental_weights(phi);
  for (const auto& coeffs : weight_search_order(phi.rank())) {
    QVector lam = QVector::Zero(phi.ambient_dim());
    for (int i = 0; i < phi.rank(); ++i) lam += Rational(coeffs[static_cast<std::size_t>(i)]) * omegas[static_cast<std::size_t>(i)];
    if (satisfies(lam, cs)) return lam;
  }
  const auto f = fourier_motzkin(phi.ambient_dim(), cs);
  if (f.feasible) return f.witness;
  return std::nullopt;
}

bool is_base_of_plane(const RootSystem& phi, const RootSubsystem& plane, int alpha, int beta) {
  const QMatrix span = columns(std::vector<QVector>{phi.root(alpha), phi.root(beta)}, phi.ambient_dim());
  for (int r : plane.roots) {
    const auto xy = solve_exact(span, QVector(phi.root(r)));
    if (!xy) return false;
    const Rational x = (*xy)[0], y = (*xy)[1];
    if (!x.is_integer() || !y.is_integer()) return false;
    if ((x.sign() < 0 && y.sign() > 0) || (x.sign() > 0 && y.sign() < 0)) return false;
  }
  return true;
}

std::vector<Type2Candidate> triples_impl(const ChevalleyAlgebra& g) {
  const auto& phi = g.root_system();
  const int r = phi.rank();
  const Eigen::Index d = phi.ambient_dim();
  std::vector<Type2Candidate> out;
  for (int ia = 0; ia < r; ++ia) {
    const int alpha = phi.simple_index(ia);
    for (int beta = 0; beta < phi.num_positive(); ++beta) {
      if (beta == alpha || phi.inner(alpha, beta).sign() > 0) continue;
      std::set<int> supp;
      for (int i = 0; i < r; ++i)
        if (phi.coefficients(beta)[static_cast<std::size_t>(i)] != 0) supp.insert(i);
      supp.insert(ia);
      if (static_cast<int>(supp.size()) != r) continue;
      const RootSubsystem plane = rank2_subsystem(phi, alpha, beta);
      if (!is_base_of_plane(phi, plane, alpha, beta)) continue;

      Type2Candidate c;
      c.alpha_index = ia;
      c.alpha = alpha;
      c.beta = beta;
      c.plane_type = plane.type_tag;
      c.w = compose(phi, reflection(phi, phi.root(alpha)), reflection(phi, phi.root(beta)));
      const QVector sab = reflect(phi.root(alpha), phi.root(beta));
      WeightAlgebra wa{phi, phi.root(alpha), phi.root(beta), QVector(phi.root(alpha) + sab), phi.coroot(alpha)};
      c.regular = !proportional_to_some_root(phi, wa.phi_vec);

      std::vector<int> deltas;
      for (int i = 0; i < r; ++i)
        if (phi.inner(beta, phi.simple_index(i)).sign() > 0) deltas.push_back(i);
      c.in_regime = true;
      if (r >= 3)
        for (int i : deltas)
          if (phi.inner(alpha, phi.simple_index(i)).sign() >= 0) c.in_regime = false;

      std::vector<LinearConstraint> base;
      for (int i = 0; i < r; ++i)
        base.push_back(constraint(phi.simple_root(i), Relation::GreaterEqual, Rational(0), "dominant a" + std::to_string(i + 1)));
      base.push_back(constraint(QVector(phi.coroot(alpha) - phi.coroot(beta)), Relation::Equal, Rational(0), "(l,a^v)=(l,b^v)"));
      base.push_back(constraint(phi.coroot(alpha), Relation::GreaterEqual, Rational(1), "(l,a^v)>=1"));
      std::vector<LinearConstraint> trick, plan;
      if (r >= 3) {
        for (int i : deltas) {
          const QVector gam = reflect(phi.root(alpha), phi.simple_root(i));
          const std::string nm = phi.name(phi.index_of(gam));
          trick.push_back(constraint(wa.wpair(gam), Relation::LessEqual, Rational(0), "(w l," + nm + ")<=0"));
          const QMatrix span = columns(std::vector<QVector>{phi.root(alpha), phi.root(beta), gam}, d);
          if (rank(span) == 3 && remark_property(phi, phi.root(alpha), phi.root(beta), gam))
            plan.push_back(constraint(wa.wpair(gam), Relation::Equal, Rational(0), "(w l," + nm + ")=0"));
        }
        for (int i = 0; i < r; ++i)
          if (i != ia)
            c.descent_constraints.push_back(
                constraint(wa.wpair(phi.simple_root(i)), Relation::GreaterEqual, Rational(0), "a" + std::to_string(i + 1)));
      }
      c.lambda_constraints = base;
      c.lambda_constraints.insert(c.lambda_constraints.end(), trick.begin(), trick.end());
      auto with_trick = c.lambda_constraints;
      c.lambda_constraints.insert(c.lambda_constraints.end(), plan.begin(), plan.end());
      c.feasible = fourier_motzkin(d, c.lambda_constraints).feasible;
      if (plane.type_tag == "G2") c.g2_square_obstructed = g2_integrality_obstruction(phi, plane, alpha, beta, base);

      auto eliminate = [&](Type2Stage s, std::string why) {
        c.eliminated_at = s;
        c.elimination_detail = std::move(why);
      };
      auto all = c.lambda_constraints;
      all.insert(all.end(), c.descent_constraints.begin(), c.descent_constraints.end());
      if (!c.in_regime) {
        eliminate(Type2Stage::Regime, "a simple root delta with (beta,delta)>0 has (alpha,delta)>=0");
      } else if (!c.regular) {
        eliminate(Type2Stage::Regularity, "alpha+s_alpha(beta) is proportional to a root");
      } else if (!fourier_motzkin(d, with_trick).feasible) {
        eliminate(Type2Stage::Trick, "dominance and sign conditions are infeasible");
      } else if (!c.feasible) {
        eliminate(Type2Stage::Plan, "plan equalities empty the cone");
      } else if (!fourier_motzkin(d, all).feasible) {
        std::string who = "combined";
        for (const auto& dc : c.descent_constraints) {
          auto cs = c.lambda_constraints;
          cs.push_back(dc);
          if (!fourier_motzkin(d, cs).feasible) {
            who = dc.label;
            break;
          }
        }
        eliminate(Type2Stage::Descent, "(w(lambda)," + who + ")>=0 is infeasible");
      } else {
        c.lambda = choose_lambda(phi, all);
        const QVector mu = reflect(phi.root(alpha), reflect(phi.root(beta), *c.lambda));
        const Type2Levi levi = type2_stabilizer_levi(g, alpha, beta);
        const auto stabs = complete_stabilizer(g, {wa.phi_vec}, levi.literal, WeightWitness{*c.lambda, mu});
        if (stabs.empty()) {
          eliminate(Type2Stage::Sphericity, "no closed stabilizer for the weight witness");
        } else {
          c.stabilizer = stabs.front();
          const int dim = declared_dimension(g, *c.stabilizer);
          if (dim < phi.num_positive())
            eliminate(Type2Stage::Sphericity,
                      "dim h = " + std::to_string(dim) + " < " + std::to_string(phi.num_positive()) + " positive roots");
        }
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

std::vector<Type2Candidate> type2_candidate_triples(const RootSystem& phi) {
  if (phi.rank() < 2) throw std::invalid_argument("type2_candidate_triples: rank must be at least 2");
  return triples_impl(ChevalleyAlgebra(phi));
}

std::vector<ClassifiedPair> enumerate_type2(const RootSystem& phi) {
  if (phi.rank() < 2) throw std::invalid_argument("enumerate_type2: rank must be at least 2");
  const ChevalleyAlgebra g(phi);
  std::map<std::string, ClassifiedPair> by_key;
  for (auto& c : triples_impl(g)) {
    if (c.eliminated_at != Type2Stage::Accepted) continue;
    ClassifiedPair p;
    p.group = phi.label();
    p.kind = PairKind::TypeII;
    p.stabilizer = *c.stabilizer;
    const std::string key = canonical_key(phi, p.stabilizer);
    if (by_key.count(key)) continue;
    p.provenance.alpha = phi.name(c.alpha);
    p.provenance.beta = phi.name(c.beta);
    p.provenance.branch = "w=s_alpha s_beta";
    if (c.g2_square_obstructed)
      p.provenance.notes.push_back(std::string("w=(s_alpha s_beta)^2 ") + (*c.g2_square_obstructed ? "obstructed" : "NOT obstructed"));
    attach_checks(g, p);
    if (!p.closed || p.stabilizer_rank != phi.rank() - 1) continue;
    by_key.emplace(key, std::move(p));
  }
  std::vector<ClassifiedPair> out;
  for (auto& [k, p] : by_key) out.push_back(std::move(p));
  return out;
}

}  // namespace twoorbit
