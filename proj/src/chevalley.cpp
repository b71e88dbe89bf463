#include "twoorbit/chevalley.hpp"

#include "twoorbit/linalg.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace twoorbit {

// ---------------------------------------------------------------------------
// Structure constants

namespace {

class CarterSolver {
 public:
  explicit CarterSolver(const RootSystem& phi) : phi_(phi), n_(phi.num_roots()) {
    pos_.assign(static_cast<std::size_t>(n_ * n_), 0);
    known_.assign(static_cast<std::size_t>(n_ * n_), false);
  }

  std::vector<int> run() {
    const int np = phi_.num_positive();
    for (int xi = 0; xi < np; ++xi) {
      if (phi_.height(xi) == 1) continue;
      std::vector<std::pair<int, int>> special;
      for (int a = 0; a < np; ++a) {
        const int b = phi_.sum(xi, phi_.negative(a));
        if (b >= 0 && phi_.is_positive(b) && a < b) special.emplace_back(a, b);
      }
      // The extraspecial pair has the smallest first entry.
      const auto [alpha, beta] = special.front();
      int p = 0;
      for (int cur = beta; (cur = phi_.sum(cur, phi_.negative(alpha))) >= 0;) ++p;
      set_positive(alpha, beta, p + 1);
      const Rational nxi = phi_.norm2(xi);
      for (std::size_t k = 1; k < special.size(); ++k) {
        const auto [gamma, delta] = special[k];
        Rational acc(0);
        const int bg = phi_.sum(beta, phi_.negative(gamma));
        if (bg >= 0)
          acc += Rational(get(beta, phi_.negative(gamma)) * get(alpha, phi_.negative(delta))) / phi_.norm2(bg);
        const int ag = phi_.sum(alpha, phi_.negative(gamma));
        if (ag >= 0)
          acc += Rational(get(phi_.negative(gamma), alpha) * get(beta, phi_.negative(delta))) / phi_.norm2(ag);
        const Rational value = nxi / Rational(p + 1) * acc;
        if (!value.is_integer() || value.is_zero())
          throw std::logic_error("structure constant construction failed for " + phi_.label());
        set_positive(gamma, delta, static_cast<int>(value.num()));
      }
    }
    std::vector<int> table(static_cast<std::size_t>(n_ * n_), 0);
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y)
        if (phi_.sum(x, y) >= 0) table[static_cast<std::size_t>(x * n_ + y)] = get(x, y);
    return table;
  }

 private:
  void set_positive(int a, int b, int v) {
    pos_[static_cast<std::size_t>(a * n_ + b)] = v;
    pos_[static_cast<std::size_t>(b * n_ + a)] = -v;
    known_[static_cast<std::size_t>(a * n_ + b)] = known_[static_cast<std::size_t>(b * n_ + a)] = true;
  }

  // N_{x,y} for arbitrary roots, reduced to positive pairs with smaller sums
  // via N_{-x,-y} = -N_{x,y} and the cyclic relation for x+y+z = 0.
  int get(int x, int y) const {
    const int s = phi_.sum(x, y);
    if (s < 0) return 0;
    const bool px = phi_.is_positive(x), py = phi_.is_positive(y);
    if (px && py) {
      if (!known_[static_cast<std::size_t>(x * n_ + y)]) throw std::logic_error("structure constant requested too early");
      return pos_[static_cast<std::size_t>(x * n_ + y)];
    }
    if (!px && !py) return -get(phi_.negative(x), phi_.negative(y));
    if (!px) return -get(y, x);
    const int z = phi_.negative(s);
    Rational v;
    if (phi_.is_positive(s)) {
      // z negative: N_{x,y} = (z,z)/(x,x) N_{y,z}, with y, z negative.
      v = phi_.norm2(z) / phi_.norm2(x) * Rational(get(y, z));
    } else {
      // z positive: N_{x,y} = (z,z)/(y,y) N_{z,x}.
      v = phi_.norm2(z) / phi_.norm2(y) * Rational(get(z, x));
    }
    if (!v.is_integer()) throw std::logic_error("non-integral structure constant");
    return static_cast<int>(v.num());
  }

  const RootSystem& phi_;
  int n_;
  std::vector<int> pos_;
  std::vector<bool> known_;
};

std::vector<int> nonzeros(const Element& x) {
  std::vector<int> nz;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!x[i].is_zero()) nz.push_back(static_cast<int>(i));
  return nz;
}

}  // namespace

ChevalleyAlgebra::ChevalleyAlgebra(RootSystem phi) : phi_(std::move(phi)) {
  n_ = CarterSolver(phi_).run();
  const int r = phi_.rank();
  const int nr = phi_.num_roots();
  h_.assign(static_cast<std::size_t>(nr), std::vector<int>(static_cast<std::size_t>(r), 0));
  for (int a = 0; a < nr; ++a) {
    for (int i = 0; i < r; ++i) {
      const Rational c = Rational(phi_.coefficients(a)[static_cast<std::size_t>(i)]) * phi_.norm2(phi_.simple_index(i)) / phi_.norm2(a);
      h_[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] = static_cast<int>(c.num());
    }
  }
  const int d = dim();
  table_.assign(static_cast<std::size_t>(d * d), {});
  for (int x = 0; x < d; ++x) {
    for (int y = 0; y < d; ++y) {
      SparseTerms& t = table_[static_cast<std::size_t>(x * d + y)];
      const bool hx = x < r, hy = y < r;
      if (hx && hy) continue;
      if (hx) {
        const int c = phi_.pairing(y - r, phi_.simple_index(x));
        if (c != 0) t.emplace_back(y, c);
      } else if (hy) {
        const int c = phi_.pairing(x - r, phi_.simple_index(y));
        if (c != 0) t.emplace_back(x, -c);
      } else {
        const int a = x - r, b = y - r;
        if (b == phi_.negative(a)) {
          for (int i = 0; i < r; ++i)
            if (h_[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] != 0)
              t.emplace_back(i, h_[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)]);
        } else if (const int s = phi_.sum(a, b); s >= 0) {
          t.emplace_back(r + s, structure_constant(a, b));
        }
      }
    }
  }
}

ChevalleyAlgebra build_algebra(const RootSystem& phi) { return ChevalleyAlgebra(phi); }

Element ChevalleyAlgebra::basis(int x) const {
  Element e = Element::Zero(dim());
  e[x] = Rational(1);
  return e;
}

Element ChevalleyAlgebra::bracket(const Element& x, const Element& y) const {
  if (x.size() != dim() || y.size() != dim()) throw std::invalid_argument("bracket: elements of a different algebra");
  Element out = Element::Zero(dim());
  const auto nx = nonzeros(x);
  const auto ny = nonzeros(y);
  for (int i : nx)
    for (int j : ny)
      for (const auto& [k, c] : basis_bracket(i, j)) out[k] += x[i] * y[j] * Rational(c);
  return out;
}

std::string ChevalleyAlgebra::describe(const Element& x) const {
  std::ostringstream os;
  bool first = true;
  for (int i : nonzeros(x)) {
    const Rational& c = x[i];
    std::string coef;
    if (c == Rational(1))
      coef = first ? "" : "+";
    else if (c == Rational(-1))
      coef = "-";
    else
      coef = (c.sign() > 0 && !first ? "+" : "") + c.str() + "*";
    os << coef;
    if (i < rank())
      os << "H" << (i + 1);
    else
      os << "Y[" << phi_.name(i - rank()) << "]";
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

JacobiReport check_jacobi(const ChevalleyAlgebra& g) {
  JacobiReport rep;
  const int d = g.dim();
  std::vector<long long> acc(static_cast<std::size_t>(d), 0);
  auto add_nested = [&](int x, int y, int z, int sign) {
    for (const auto& [u, c] : g.basis_bracket(x, y))
      for (const auto& [v, e] : g.basis_bracket(u, z)) acc[static_cast<std::size_t>(v)] += sign * static_cast<long long>(c) * e;
  };
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z) {
        std::fill(acc.begin(), acc.end(), 0);
        add_nested(x, y, z, 1);
        add_nested(y, z, x, 1);
        add_nested(z, x, y, 1);
        ++rep.triples_checked;
        if (std::any_of(acc.begin(), acc.end(), [](long long v) { return v != 0; })) {
          ++rep.violations;
          if (rep.examples.size() < 8)
            rep.examples.push_back(g.describe(g.basis(x)) + ", " + g.describe(g.basis(y)) + ", " + g.describe(g.basis(z)));
        }
      }
  return rep;
}

// ---------------------------------------------------------------------------
// Subalgebra specs

namespace {

// Simple-root coordinates of the functionals, as rows.
QMatrix functional_matrix(const RootSystem& phi, const ToralPart& t) {
  QMatrix m(static_cast<Eigen::Index>(t.functionals.size()), phi.rank());
  for (std::size_t k = 0; k < t.functionals.size(); ++k) {
    if (t.functionals[k].size() != phi.ambient_dim()) throw std::invalid_argument("toral functional has the wrong dimension");
    m.row(static_cast<Eigen::Index>(k)) = phi.simple_coordinates(t.functionals[k]).transpose();
  }
  return m;
}

// True when the root difference vanishes on the toral part.
bool vanishes_on(const RootSystem& phi, const ToralPart& t, const QVector& v) {
  if (t.full) return is_zero(phi.simple_coordinates(v));
  const QMatrix f = functional_matrix(phi, t);
  return in_column_span(QMatrix(f.transpose()), QVector(phi.simple_coordinates(v)));
}

// Pairing matrix M(k, i) = (functional_k, coroot of alpha_i).
QMatrix pairing_matrix(const RootSystem& phi, const ToralPart& t) {
  QMatrix m(static_cast<Eigen::Index>(t.functionals.size()), phi.rank());
  for (std::size_t k = 0; k < t.functionals.size(); ++k)
    for (int i = 0; i < phi.rank(); ++i) m(static_cast<Eigen::Index>(k), i) = phi.simple_pairing(t.functionals[k], i);
  return m;
}

// Where each root sits in a spec.
struct Layout {
  enum Kind { Absent, Full, Line };
  std::vector<Kind> kind;
  std::vector<int> line;
  std::vector<int> pos;
  QMatrix toral_pairing;  // empty rows for a full toral part
};

Layout layout_of(const RootSystem& phi, const SubalgebraSpec& h) {
  Layout l;
  const auto n = static_cast<std::size_t>(phi.num_roots());
  l.kind.assign(n, Layout::Absent);
  l.line.assign(n, -1);
  l.pos.assign(n, -1);
  for (int i = 0; i < phi.num_roots(); ++i)
    if (h.root_spaces.test(static_cast<std::size_t>(i))) l.kind[static_cast<std::size_t>(i)] = Layout::Full;
  for (std::size_t k = 0; k < h.mixed.size(); ++k)
    for (std::size_t j = 0; j < h.mixed[k].terms.size(); ++j) {
      const auto r = static_cast<std::size_t>(h.mixed[k].terms[j].root);
      l.kind[r] = Layout::Line;
      l.line[r] = static_cast<int>(k);
      l.pos[r] = static_cast<int>(j);
    }
  l.toral_pairing = h.toral.full ? QMatrix(0, phi.rank()) : pairing_matrix(phi, h.toral);
  return l;
}

Element line_vector(const ChevalleyAlgebra& g, const MixedLine& line) {
  Element e = Element::Zero(g.dim());
  for (const auto& t : line.terms) e[g.root_slot(t.root)] = *t.coeff;
  return e;
}

bool layout_contains(const ChevalleyAlgebra& g, const SubalgebraSpec& h, const Layout& l, const Element& x) {
  const int r = g.rank();
  if (l.toral_pairing.rows() > 0) {
    QVector hx = x.head(r);
    if (!is_zero(QVector(l.toral_pairing * hx))) return false;
  }
  const auto& phi = g.root_system();
  for (int a = 0; a < phi.num_roots(); ++a)
    if (l.kind[static_cast<std::size_t>(a)] == Layout::Absent && !x[r + a].is_zero()) return false;
  for (const auto& line : h.mixed) {
    std::optional<Rational> scale;
    for (const auto& t : line.terms) {
      const Rational& v = x[r + t.root];
      const Rational s = v / *t.coeff;
      if (scale && *scale != s) return false;
      scale = s;
    }
  }
  return true;
}

}  // namespace

std::vector<std::string> validate_spec(const RootSystem& phi, const SubalgebraSpec& h) {
  std::vector<std::string> problems;
  std::set<int> seen;
  for (std::size_t k = 0; k < h.mixed.size(); ++k) {
    const auto& line = h.mixed[k];
    if (line.terms.empty()) problems.push_back("mixed line " + std::to_string(k) + " is empty");
    for (const auto& t : line.terms) {
      if (t.root < 0 || t.root >= phi.num_roots()) {
        problems.push_back("mixed line " + std::to_string(k) + " refers to a non-root");
        continue;
      }
      if (t.coeff && t.coeff->is_zero()) problems.push_back("mixed line " + std::to_string(k) + " has a zero coefficient");
      if (h.root_spaces.test(static_cast<std::size_t>(t.root)))
        problems.push_back("root " + phi.name(t.root) + " is both a full root space and part of a mixed line");
      if (!seen.insert(t.root).second) problems.push_back("root " + phi.name(t.root) + " occurs in two mixed terms");
    }
    for (std::size_t j = 1; j < line.terms.size(); ++j) {
      if (line.terms[j].root < 0 || line.terms[0].root < 0) continue;
      const QVector diff = phi.root(line.terms[j].root) - phi.root(line.terms[0].root);
      if (!vanishes_on(phi, h.toral, diff))
        problems.push_back("mixed line " + std::to_string(k) + " is not homogeneous for the toral part");
    }
  }
  for (const auto& f : h.toral.functionals)
    if (f.size() != phi.ambient_dim()) problems.push_back("toral functional has the wrong dimension");
  return problems;
}

std::vector<Element> toral_basis(const ChevalleyAlgebra& g, const ToralPart& t) {
  std::vector<Element> out;
  if (t.full) {
    for (int i = 0; i < g.rank(); ++i) out.push_back(g.cartan(i));
    return out;
  }
  const QMatrix ns = nullspace(pairing_matrix(g.root_system(), t));
  for (Eigen::Index c = 0; c < ns.cols(); ++c) {
    Element e = Element::Zero(g.dim());
    e.head(g.rank()) = ns.col(c);
    out.push_back(e);
  }
  return out;
}

int declared_dimension(const ChevalleyAlgebra& g, const SubalgebraSpec& h) {
  return static_cast<int>(toral_basis(g, h.toral).size()) + static_cast<int>(h.root_spaces.count()) + static_cast<int>(h.mixed.size());
}

bool has_unknown_coefficients(const SubalgebraSpec& h) {
  for (const auto& line : h.mixed)
    for (const auto& t : line.terms)
      if (!t.coeff) return true;
  return false;
}

std::vector<Element> spanning_set(const ChevalleyAlgebra& g, const SubalgebraSpec& h) {
  if (has_unknown_coefficients(h)) throw std::invalid_argument("spanning_set: unsolved mixed coefficients");
  std::vector<Element> out = toral_basis(g, h.toral);
  for (int a = 0; a < g.root_system().num_roots(); ++a)
    if (h.root_spaces.test(static_cast<std::size_t>(a))) out.push_back(g.root_vector(a));
  for (const auto& line : h.mixed) out.push_back(line_vector(g, line));
  return out;
}

bool contains(const ChevalleyAlgebra& g, const SubalgebraSpec& h, const Element& x) {
  if (has_unknown_coefficients(h)) throw std::invalid_argument("contains: unsolved mixed coefficients");
  return layout_contains(g, h, layout_of(g.root_system(), h), x);
}

ClosureReport check_closure(const ChevalleyAlgebra& g, const SubalgebraSpec& h) {
  const auto problems = validate_spec(g.root_system(), h);
  if (!problems.empty()) throw std::invalid_argument("check_closure: " + problems.front());
  const Layout l = layout_of(g.root_system(), h);
  const auto span = spanning_set(g, h);
  ClosureReport rep;
  for (std::size_t i = 0; i < span.size(); ++i)
    for (std::size_t j = i + 1; j < span.size(); ++j) {
      const Element b = g.bracket(span[i], span[j]);
      if (!layout_contains(g, h, l, b)) {
        rep.closed = false;
        rep.witnesses.emplace_back(g.describe(span[i]), g.describe(span[j]));
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Mixed coefficients

namespace {

// Linear conditions on the unknowns u of one line L, from "x + sum_u u * y_u
// lies in h", ignoring components on lines that still carry unknowns.
struct LinearSystem {
  std::vector<std::vector<Rational>> rows;  // coefficients of the unknowns, then constant
};

class MixedSolver {
 public:
  MixedSolver(const ChevalleyAlgebra& g, SubalgebraSpec h) : g_(g), h_(std::move(h)), layout_(layout_of(g.root_system(), h_)) {
    for (auto& line : h_.mixed) {
      bool any_known = std::any_of(line.terms.begin(), line.terms.end(), [](const MixedTerm& t) { return t.coeff.has_value(); });
      if (!any_known) line.terms.front().coeff = Rational(1);
    }
  }

  std::vector<MixedSolution> solve() {
    std::vector<int> free_lines, forced;
    for (;;) {
      for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t k = 0; k < h_.mixed.size(); ++k) {
          if (known(k)) continue;
          const auto res = try_determine(k);
          if (res == Outcome::Inconsistent) return {};
          if (res == Outcome::Determined) {
            forced.push_back(static_cast<int>(k));
            progress = true;
          }
        }
      }
      int pending = -1;
      for (std::size_t k = 0; k < h_.mixed.size() && pending < 0; ++k)
        if (!known(k)) pending = static_cast<int>(k);
      if (pending < 0) break;
      for (auto& t : h_.mixed[static_cast<std::size_t>(pending)].terms)
        if (!t.coeff) t.coeff = Rational(1);
      free_lines.push_back(pending);
    }
    for (std::size_t k = 0; k < h_.mixed.size(); ++k) {
      const bool was_forced = std::find(forced.begin(), forced.end(), static_cast<int>(k)) != forced.end();
      const bool was_free = std::find(free_lines.begin(), free_lines.end(), static_cast<int>(k)) != free_lines.end();
      if (!was_forced && !was_free && h_.mixed[k].terms.size() > 1 && original_unknown(k)) free_lines.push_back(static_cast<int>(k));
    }
    if (!check_closure(g_, h_).closed) return {};
    std::sort(free_lines.begin(), free_lines.end());
    return {MixedSolution{h_, free_lines, forced}};
  }

  void remember_unknowns(const SubalgebraSpec& original) {
    for (const auto& line : original.mixed) {
      bool u = false;
      for (const auto& t : line.terms) u = u || !t.coeff;
      unknown_at_start_.push_back(u);
    }
  }

 private:
  enum class Outcome { Nothing, Determined, Inconsistent };

  bool original_unknown(std::size_t k) const { return k < unknown_at_start_.size() && unknown_at_start_[k]; }

  bool known(std::size_t k) const {
    return std::all_of(h_.mixed[k].terms.begin(), h_.mixed[k].terms.end(), [](const MixedTerm& t) { return t.coeff.has_value(); });
  }

  std::vector<Element> known_elements() const {
    std::vector<Element> out = toral_basis(g_, h_.toral);
    for (int a = 0; a < g_.root_system().num_roots(); ++a)
      if (h_.root_spaces.test(static_cast<std::size_t>(a))) out.push_back(g_.root_vector(a));
    for (std::size_t k = 0; k < h_.mixed.size(); ++k)
      if (known(k)) out.push_back(line_vector(g_, h_.mixed[k]));
    return out;
  }

  // Conditions for v = v0 + sum_u c_u v_u to lie in h, skipping lines with
  // unknowns. Each row: coefficients of c_u followed by the constant term.
  void add_conditions(const std::vector<Element>& parts, LinearSystem& sys) const {
    const int r = g_.rank();
    const std::size_t nu = parts.size() - 1;
    auto row_for = [&](auto&& component) {
      std::vector<Rational> row(nu + 1);
      for (std::size_t u = 0; u < nu; ++u) row[u] = component(parts[u + 1]);
      row[nu] = component(parts[0]);
      return row;
    };
    for (Eigen::Index k = 0; k < layout_.toral_pairing.rows(); ++k) {
      auto comp = [&](const Element& e) {
        Rational s(0);
        for (int i = 0; i < r; ++i) s += layout_.toral_pairing(k, i) * e[i];
        return s;
      };
      sys.rows.push_back(row_for(comp));
    }
    const auto& phi = g_.root_system();
    for (int a = 0; a < phi.num_roots(); ++a)
      if (layout_.kind[static_cast<std::size_t>(a)] == Layout::Absent)
        sys.rows.push_back(row_for([&](const Element& e) { return e[r + a]; }));
    for (std::size_t k = 0; k < h_.mixed.size(); ++k) {
      if (!known(k)) continue;
      const auto& terms = h_.mixed[k].terms;
      for (std::size_t j = 1; j < terms.size(); ++j) {
        const int a0 = r + terms[0].root, aj = r + terms[j].root;
        const Rational c0 = *terms[0].coeff, cj = *terms[j].coeff;
        sys.rows.push_back(row_for([&](const Element& e) { return e[a0] * cj - e[aj] * c0; }));
      }
    }
  }

  // Components of [x, L] split by the unknowns of L; parts[0] is the part
  // coming from terms with known coefficients.
  std::vector<Element> bracket_parts(const Element& x, std::size_t k, std::vector<std::size_t>& unknown_terms) const {
    const auto& terms = h_.mixed[k].terms;
    std::vector<Element> parts{Element::Zero(g_.dim())};
    unknown_terms.clear();
    for (std::size_t j = 0; j < terms.size(); ++j) {
      const Element b = g_.bracket(x, g_.root_vector(terms[j].root));
      if (terms[j].coeff) {
        parts[0] += *terms[j].coeff * b;
      } else {
        parts.push_back(b);
        unknown_terms.push_back(j);
      }
    }
    return parts;
  }

  Outcome try_determine(std::size_t k) {
    std::vector<std::size_t> unknown_terms;
    LinearSystem sys;
    for (const Element& x : known_elements()) {
      auto parts = bracket_parts(x, k, unknown_terms);
      add_conditions(parts, sys);
    }
    // Components landing on the line itself, from brackets of known elements.
    const auto known_now = known_elements();
    for (std::size_t i = 0; i < known_now.size(); ++i)
      for (std::size_t j = i + 1; j < known_now.size(); ++j) {
        const Element v = g_.bracket(known_now[i], known_now[j]);
        const auto out = fit_line(v, k, unknown_terms);
        if (out != Outcome::Nothing) return out;
      }
    const std::size_t nu = unknown_terms.size();
    if (sys.rows.empty()) return Outcome::Nothing;
    QMatrix a(static_cast<Eigen::Index>(sys.rows.size()), static_cast<Eigen::Index>(nu));
    QVector b(static_cast<Eigen::Index>(sys.rows.size()));
    for (std::size_t i = 0; i < sys.rows.size(); ++i) {
      for (std::size_t u = 0; u < nu; ++u) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(u)) = sys.rows[i][u];
      b[static_cast<Eigen::Index>(i)] = -sys.rows[i][nu];
    }
    const auto sol = solve_exact(a, b);
    if (!sol) return Outcome::Inconsistent;
    if (rank(a) < static_cast<Eigen::Index>(nu)) return Outcome::Nothing;
    for (std::size_t u = 0; u < nu; ++u) {
      if ((*sol)[static_cast<Eigen::Index>(u)].is_zero()) return Outcome::Inconsistent;
      h_.mixed[k].terms[unknown_terms[u]].coeff = (*sol)[static_cast<Eigen::Index>(u)];
    }
    return Outcome::Determined;
  }

  // A known vector with a component on line k pins its coefficients.
  Outcome fit_line(const Element& v, std::size_t k, const std::vector<std::size_t>& /*unknown_terms*/) {
    const int r = g_.rank();
    auto& terms = h_.mixed[k].terms;
    std::optional<Rational> scale;
    bool touches = false;
    for (const auto& t : terms) {
      if (!v[r + t.root].is_zero()) touches = true;
      if (t.coeff && !v[r + t.root].is_zero()) scale = v[r + t.root] / *t.coeff;
    }
    if (!touches) return Outcome::Nothing;
    if (!scale) return Outcome::Inconsistent;
    for (auto& t : terms) {
      const Rational c = v[r + t.root] / *scale;
      if (t.coeff) {
        if (*t.coeff != c) return Outcome::Inconsistent;
      } else {
        if (c.is_zero()) return Outcome::Inconsistent;
        t.coeff = c;
      }
    }
    return Outcome::Determined;
  }

  const ChevalleyAlgebra& g_;
  SubalgebraSpec h_;
  Layout layout_;
  std::vector<bool> unknown_at_start_;
};

}  // namespace

std::vector<MixedSolution> solve_mixed_coefficients(const ChevalleyAlgebra& g, const SubalgebraSpec& h) {
  const auto problems = validate_spec(g.root_system(), h);
  if (!problems.empty()) throw std::invalid_argument("solve_mixed_coefficients: " + problems.front());
  MixedSolver solver(g, h);
  solver.remember_unknowns(h);
  return solver.solve();
}

// ---------------------------------------------------------------------------
// Rank, regularity, type

RestrictedRootDatum restricted_datum(const ChevalleyAlgebra& g, const SubalgebraSpec& h) {
  const auto& phi = g.root_system();
  const auto basis = toral_basis(g, h.toral);
  RestrictedRootDatum d;
  d.toral_dim = static_cast<int>(basis.size());
  auto weight_of = [&](int a) {
    QVector w(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
      Rational s(0);
      for (int i = 0; i < g.rank(); ++i)
        if (!basis[k][i].is_zero()) s += basis[k][i] * Rational(phi.pairing(a, phi.simple_index(i)));
      w[static_cast<Eigen::Index>(k)] = s;
    }
    return w;
  };
  std::map<std::vector<Rational>, int> mult;
  std::vector<QVector> order;
  auto add = [&](const QVector& w) {
    if (is_zero(w)) return;
    std::vector<Rational> key(w.data(), w.data() + w.size());
    if (mult[key]++ == 0) order.push_back(w);
  };
  for (int a = 0; a < phi.num_roots(); ++a)
    if (h.root_spaces.test(static_cast<std::size_t>(a))) add(weight_of(a));
  for (const auto& line : h.mixed) add(weight_of(line.terms.front().root));
  for (const auto& w : order) {
    d.weights.push_back(w);
    d.multiplicities.push_back(mult[std::vector<Rational>(w.data(), w.data() + w.size())]);
  }
  return d;
}

RankReport subalgebra_rank(const ChevalleyAlgebra& g, const SubalgebraSpec& h) {
  if (!check_closure(g, h).closed) throw std::invalid_argument("subalgebra_rank: spec is not closed");
  RankReport rep;
  rep.rank = static_cast<int>(toral_basis(g, h.toral).size());
  const auto d = restricted_datum(g, h);
  int nonzero = 0;
  for (int m : d.multiplicities) nonzero += m;
  rep.exceptional = nonzero != static_cast<int>(h.root_spaces.count() + h.mixed.size());
  return rep;
}

bool check_regular_torus(const RootSystem& phi, const ToralPart& t) {
  if (t.full) return true;
  for (int a = 0; a < phi.num_positive(); ++a)
    if (vanishes_on(phi, t, phi.root(a))) return false;
  return true;
}

namespace {

int root_count(const std::string& label) {
  int total = 0;
  std::stringstream ss(label);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    const char f = part[0];
    const int n = std::stoi(part.substr(1));
    switch (f) {
      case 'A': total += n * (n + 1); break;
      case 'B':
      case 'C': total += 2 * n * n; break;
      case 'D': total += 2 * n * (n - 1); break;
      case 'F': total += 48; break;
      case 'G': total += 12; break;
      default: return -1;
    }
  }
  return total;
}

}  // namespace

TypeIdentification identify_type(const ChevalleyAlgebra& g, const SubalgebraSpec& h) {
  TypeIdentification id;
  id.datum = restricted_datum(g, h);
  id.dimension = declared_dimension(g, h);
  const auto& ws = id.datum.weights;
  auto key = [](const QVector& w) { return std::vector<Rational>(w.data(), w.data() + w.size()); };
  std::map<std::vector<Rational>, int> index;
  for (std::size_t i = 0; i < ws.size(); ++i) index[key(ws[i])] = static_cast<int>(i);
  std::vector<int> reductive;
  for (std::size_t i = 0; i < ws.size(); ++i)
    if (index.count(key(QVector(-ws[i])))) reductive.push_back(static_cast<int>(i));
  int non_reductive = 0;
  for (std::size_t i = 0; i < ws.size(); ++i)
    if (!index.count(key(QVector(-ws[i])))) non_reductive += id.datum.multiplicities[i];
  id.nilradical_dim = non_reductive;
  for (int i : reductive)
    if (id.datum.multiplicities[static_cast<std::size_t>(i)] != 1) {
      id.diagnostic = "restricted weight with multiplicity > 1 in the reductive part";
      return id;
    }
  std::set<std::vector<Rational>> rh;
  for (int i : reductive) rh.insert(key(ws[static_cast<std::size_t>(i)]));
  // Generic functional separating the weights from zero.
  QVector f(id.datum.toral_dim);
  bool found = false;
  for (int base = 1000003; !found && base < 1000003 + 64; base += 7) {
    Rational m(1);
    for (Eigen::Index k = 0; k < f.size(); ++k) {
      f[k] = m;
      m = m * Rational(base % 97 + 3) + Rational(k + 1);
    }
    found = std::all_of(reductive.begin(), reductive.end(), [&](int i) { return !dot(f, ws[static_cast<std::size_t>(i)]).is_zero(); });
  }
  if (!found) {
    id.diagnostic = "no separating functional found";
    return id;
  }
  std::vector<QVector> positive;
  for (int i : reductive)
    if (dot(f, ws[static_cast<std::size_t>(i)]).sign() > 0) positive.push_back(ws[static_cast<std::size_t>(i)]);
  std::vector<QVector> simple;
  for (const auto& p : positive) {
    bool decomposable = false;
    for (const auto& q : positive) {
      const QVector diff = p - q;
      if (!is_zero(diff) && rh.count(key(diff)) && dot(f, diff).sign() > 0) decomposable = true;
    }
    if (!decomposable) simple.push_back(p);
  }
  const auto k = static_cast<Eigen::Index>(simple.size());
  MatrixX<int> a(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      if (i == j) {
        a(i, j) = 2;
        continue;
      }
      // A(j, i) = (nu_j, nu_i coroot) = -(length of the nu_i-string above nu_j).
      int q = 0;
      for (QVector cur = simple[static_cast<std::size_t>(j)] + simple[static_cast<std::size_t>(i)]; rh.count(key(cur));
           cur += simple[static_cast<std::size_t>(i)])
        ++q;
      a(j, i) = -q;
    }
  if (k > 0) {
    QMatrix span = columns(simple, static_cast<Eigen::Index>(id.datum.toral_dim));
    if (rank(span) != k) {
      id.diagnostic = "restricted simple weights are linearly dependent";
      return id;
    }
  }
  const auto type = k == 0 ? std::optional<std::string>("0") : cartan_type(a);
  if (!type) {
    id.diagnostic = "Cartan matrix of the restricted weights is not of finite type";
    return id;
  }
  if (k > 0 && root_count(*type) != static_cast<int>(rh.size())) {
    id.diagnostic = "restricted weights do not form a root system of type " + *type;
    return id;
  }
  id.resolved = true;
  id.semisimple_type = *type;
  id.center_dim = id.datum.toral_dim - static_cast<int>(k);
  return id;
}

// ---------------------------------------------------------------------------
// Stabilizer completion

namespace {

bool spec_contains_seed(const SubalgebraSpec& h, const SubalgebraSpec& seed) {
  if ((seed.root_spaces & ~h.root_spaces).any()) return false;
  for (const auto& sl : seed.mixed) {
    bool found = false;
    for (const auto& hl : h.mixed) {
      std::set<int> a, b;
      for (const auto& t : sl.terms) a.insert(t.root);
      for (const auto& t : hl.terms) b.insert(t.root);
      if (a == b) found = true;
    }
    if (!found) return false;
  }
  return true;
}

// Carries known seed coefficients over to the matching lines.
void copy_seed_coefficients(SubalgebraSpec& h, const SubalgebraSpec& seed) {
  for (const auto& sl : seed.mixed)
    for (auto& hl : h.mixed)
      for (auto& ht : hl.terms)
        for (const auto& st : sl.terms)
          if (st.root == ht.root && st.coeff) ht.coeff = st.coeff;
}

}  // namespace

std::vector<SubalgebraSpec> complete_stabilizer(const ChevalleyAlgebra& g, const std::vector<QVector>& functionals,
                                                const SubalgebraSpec& seed, const std::optional<WeightWitness>& witness,
                                                int max_drop) {
  const auto& phi = g.root_system();
  const ToralPart t = ToralPart::kernel(functionals);
  if (toral_basis(g, t).size() + 1 != static_cast<std::size_t>(phi.rank()))
    throw std::invalid_argument("complete_stabilizer: toral part must have codimension one");
  for (const auto& line : seed.mixed)
    for (std::size_t j = 1; j < line.terms.size(); ++j)
      if (!vanishes_on(phi, t, QVector(phi.root(line.terms[j].root) - phi.root(line.terms[0].root))))
        throw std::invalid_argument("complete_stabilizer: seed line is not homogeneous for the toral part");

  SubalgebraSpec base;
  base.toral = t;
  if (witness) {
    const QVector phi_vec = witness->lambda - witness->mu;
    auto pairing = [&](const QVector& w, int a) { return dot(w, phi.coroot(a)); };
    for (int a = 0; a < phi.num_roots(); ++a)
      if (pairing(witness->lambda, a).sign() >= 0 && pairing(witness->mu, a).sign() >= 0) base.root_spaces.set(static_cast<std::size_t>(a));
    const QVector lam_dom = dominant_representative(phi, witness->lambda);
    for (int a = 0; a < phi.num_roots(); ++a) {
      const int s = phi.index_of(QVector(phi.root(a) - phi_vec));
      if (s < 0) continue;
      if (pairing(witness->lambda, a).sign() < 0 || pairing(witness->mu, s).sign() < 0) continue;
      if (pairing(witness->mu, a).sign() >= 0 || pairing(witness->lambda, s).sign() >= 0) continue;
      if (dominant_representative(phi, QVector(witness->lambda + phi.root(s))) != lam_dom) continue;
      base.mixed.push_back(MixedLine{{MixedTerm{a, Rational(1)}, MixedTerm{s, std::nullopt}}});
    }
    copy_seed_coefficients(base, seed);
    if (!spec_contains_seed(base, seed)) return {};
    std::vector<SubalgebraSpec> out;
    for (auto& sol : solve_mixed_coefficients(g, base)) out.push_back(std::move(sol.spec));
    return out;
  }

  // Classes of roots with equal restriction to the toral part.
  std::vector<std::vector<int>> classes;
  std::vector<bool> placed(static_cast<std::size_t>(phi.num_roots()), false);
  for (int a = 0; a < phi.num_roots(); ++a) {
    if (placed[static_cast<std::size_t>(a)]) continue;
    std::vector<int> cls{a};
    placed[static_cast<std::size_t>(a)] = true;
    for (int b = a + 1; b < phi.num_roots(); ++b)
      if (!placed[static_cast<std::size_t>(b)] && vanishes_on(phi, t, QVector(phi.root(b) - phi.root(a)))) {
        cls.push_back(b);
        placed[static_cast<std::size_t>(b)] = true;
      }
    classes.push_back(cls);
  }
  struct Component {
    bool line;
    std::vector<int> roots;
    bool required;
  };
  std::vector<Component> comps;
  for (const auto& cls : classes) {
    bool required = false;
    for (int a : cls) required = required || seed.root_spaces.test(static_cast<std::size_t>(a));
    for (const auto& sl : seed.mixed)
      for (const auto& st : sl.terms)
        if (std::find(cls.begin(), cls.end(), st.root) != cls.end()) required = true;
    comps.push_back({cls.size() > 1, cls, required});
  }
  auto build = [&](const std::vector<bool>& keep) {
    SubalgebraSpec s;
    s.toral = t;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      if (!keep[c]) continue;
      if (!comps[c].line) {
        s.root_spaces.set(static_cast<std::size_t>(comps[c].roots.front()));
      } else {
        MixedLine line;
        for (int a : comps[c].roots) line.terms.push_back({a, std::nullopt});
        s.mixed.push_back(line);
      }
    }
    copy_seed_coefficients(s, seed);
    return s;
  };
  std::vector<std::size_t> optional_comps;
  for (std::size_t c = 0; c < comps.size(); ++c)
    if (!comps[c].required) optional_comps.push_back(c);
  for (int drop = 0; drop <= max_drop && drop <= static_cast<int>(optional_comps.size()); ++drop) {
    std::vector<SubalgebraSpec> found;
    std::vector<bool> pick(optional_comps.size(), false);
    std::fill(pick.begin(), pick.begin() + drop, true);
    do {
      std::vector<bool> keep(comps.size(), true);
      for (std::size_t i = 0; i < optional_comps.size(); ++i)
        if (pick[i]) keep[optional_comps[i]] = false;
      const SubalgebraSpec s = build(keep);
      for (auto& sol : solve_mixed_coefficients(g, s))
        if (spec_contains_seed(sol.spec, seed)) found.push_back(std::move(sol.spec));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    if (!found.empty()) return found;
  }
  return {};
}

}  // namespace twoorbit
