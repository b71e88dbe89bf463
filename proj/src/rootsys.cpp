#include "twoorbit/rootsys.hpp"

#include "twoorbit/linalg.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <functional>
#include <set>

namespace twoorbit {

namespace {

QVector unit(Eigen::Index dim, Eigen::Index i) {
  QVector v = QVector::Zero(dim);
  v[i] = Rational(1);
  return v;
}

std::vector<Rational> as_key(const QVector& v) { return {v.data(), v.data() + v.size()}; }

std::vector<QVector> simple_roots_for(char family, int n, Eigen::Index& ambient) {
  std::vector<QVector> s;
  auto chain = [&](Eigen::Index dim, int count) {
    for (int i = 0; i < count; ++i) s.push_back(unit(dim, i) - unit(dim, i + 1));
  };
  switch (family) {
    case 'A':
      ambient = n + 1;
      chain(ambient, n);
      break;
    case 'B':
      ambient = n;
      chain(ambient, n - 1);
      s.push_back(unit(ambient, n - 1));
      break;
    case 'C':
      ambient = n;
      chain(ambient, n - 1);
      s.push_back(Rational(2) * unit(ambient, n - 1));
      break;
    case 'D':
      ambient = n;
      chain(ambient, n - 1);
      s.push_back(unit(ambient, n - 2) + unit(ambient, n - 1));
      break;
    case 'G': {
      ambient = 3;
      QVector a1(3), a2(3);
      a1 << Rational(1), Rational(-1), Rational(0);
      a2 << Rational(-2), Rational(1), Rational(1);
      s = {a1, a2};
      break;
    }
    case 'F': {
      ambient = 4;
      const Rational h(1, 2);
      QVector a4(4);
      a4 << h, -h, -h, -h;
      s = {unit(4, 1) - unit(4, 2), unit(4, 2) - unit(4, 3), unit(4, 3), a4};
      break;
    }
    case 'P':
      ambient = 4;
      s = {unit(4, 0) - unit(4, 1), unit(4, 2) - unit(4, 3)};
      break;
    default:
      throw InvalidRootSystem(std::string("unsupported root system family '") + family + "'");
  }
  return s;
}

void validate(char family, int n) {
  auto fail = [&](const std::string& why) {
    throw InvalidRootSystem(std::string(1, family) + std::to_string(n) + ": " + why);
  };
  if (n < 1) fail("rank must be positive");
  if (n > 8 && family != 'A') fail("ranks above 8 are not supported");
  if (family == 'A' && n > 15) fail("ranks above 15 are not supported");
  switch (family) {
    case 'A':
      break;
    case 'B':
    case 'C':
      if (n < 2) fail("needs rank >= 2");
      break;
    case 'D':
      if (n < 3) fail("needs rank >= 3 (D2 is A1xA1, D1 is a torus)");
      break;
    case 'F':
      if (n != 4) fail("F exists only in rank 4");
      break;
    case 'G':
      if (n != 2) fail("G exists only in rank 2");
      break;
    case 'P':
      if (n != 2) fail("the only supported product is A1xA1");
      break;
    case 'E':
      fail("exceptional E types are not supported");
      break;
    default:
      fail("unknown family");
  }
}

}  // namespace

int RootSystem::height(int i) const {
  int h = 0;
  for (int c : coefficients(i)) h += c;
  return h;
}

Rational RootSystem::inner(int i, int j) const { return dot(root(i), root(j)); }

int RootSystem::index_of_coefficients(const std::vector<int>& c) const {
  auto it = by_coeffs_.find(c);
  return it == by_coeffs_.end() ? -1 : it->second;
}

QVector RootSystem::simple_coordinates(const QVector& v) const {
  QVector rhs(rank_);
  for (int i = 0; i < rank_; ++i) rhs[i] = dot(simple_root(i), v);
  return gram_inverse_ * rhs;
}

QVector RootSystem::from_simple_coordinates(const QVector& c) const {
  QVector v = QVector::Zero(ambient_dim_);
  for (int i = 0; i < rank_; ++i)
    if (!c[i].is_zero()) v += c[i] * simple_root(i);
  return v;
}

bool RootSystem::in_root_span(const QVector& v) const {
  return v.size() == ambient_dim_ && from_simple_coordinates(simple_coordinates(v)) == v;
}

int RootSystem::index_of(const QVector& v) const {
  if (v.size() != ambient_dim_) return -1;
  const QVector c = simple_coordinates(v);
  std::vector<int> key(static_cast<std::size_t>(rank_));
  for (int i = 0; i < rank_; ++i) {
    if (!c[i].is_integer()) return -1;
    key[static_cast<std::size_t>(i)] = static_cast<int>(c[i].num());
  }
  const int idx = index_of_coefficients(key);
  if (idx < 0 || root(idx) != v) return -1;
  return idx;
}

Rational RootSystem::simple_pairing(const QVector& v, int i) const {
  return Rational(2) * dot(v, simple_root(i)) / dot(simple_root(i), simple_root(i));
}

std::string RootSystem::name(int i) const {
  std::string s = is_positive(i) ? "" : "-";
  for (int c : coefficients(i)) s += std::to_string(c < 0 ? -c : c);
  return s;
}

int RootSystem::index_of_name(std::string_view s) const {
  bool neg = !s.empty() && s.front() == '-';
  if (neg) s.remove_prefix(1);
  if (static_cast<int>(s.size()) != rank_) return -1;
  std::vector<int> c;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return -1;
    c.push_back(neg ? -(ch - '0') : ch - '0');
  }
  return index_of_coefficients(c);
}

void RootSystem::finalize() {
  const auto r = static_cast<std::size_t>(rank_);
  form_ = QMatrix::Identity(ambient_dim_, ambient_dim_);

  QMatrix gram(rank_, rank_);
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j) gram(i, j) = dot(simple_[static_cast<std::size_t>(i)], simple_[static_cast<std::size_t>(j)]);
  gram_inverse_ = QMatrix(rank_, rank_);
  for (int j = 0; j < rank_; ++j) gram_inverse_.col(j) = *solve_exact(gram, QVector(unit(rank_, j)));

  // Reflection closure of the simple roots.
  std::set<std::vector<Rational>> seen;
  std::vector<QVector> all;
  std::deque<QVector> queue;
  for (const auto& a : simple_) {
    if (seen.insert(as_key(a)).second) {
      all.push_back(a);
      queue.push_back(a);
    }
  }
  while (!queue.empty()) {
    QVector v = queue.front();
    queue.pop_front();
    for (const auto& a : simple_) {
      QVector w = reflect(a, v);
      if (seen.insert(as_key(w)).second) {
        all.push_back(w);
        queue.push_back(w);
      }
    }
  }
  if (all.size() > static_cast<std::size_t>(kMaxRoots)) throw InvalidRootSystem(label_ + ": too many roots");

  struct Entry {
    std::vector<int> c;
    QVector v;
  };
  std::vector<Entry> pos;
  for (const auto& v : all) {
    const QVector c = simple_coordinates(v);
    std::vector<int> ci(r);
    bool positive = true;
    for (std::size_t i = 0; i < r; ++i) {
      ci[i] = static_cast<int>(c[static_cast<Eigen::Index>(i)].num());
      if (ci[i] < 0) positive = false;
    }
    if (positive) pos.push_back({ci, v});
  }
  std::sort(pos.begin(), pos.end(), [](const Entry& a, const Entry& b) {
    int ha = 0, hb = 0;
    for (int x : a.c) ha += x;
    for (int x : b.c) hb += x;
    if (ha != hb) return ha < hb;
    return a.c < b.c;
  });
  num_positive_ = static_cast<int>(pos.size());
  roots_.clear();
  coeffs_.clear();
  for (const auto& e : pos) {
    roots_.push_back(e.v);
    coeffs_.push_back(e.c);
  }
  for (const auto& e : pos) {
    roots_.push_back(-e.v);
    std::vector<int> c = e.c;
    for (int& x : c) x = -x;
    coeffs_.push_back(c);
  }
  const int n = num_roots();
  by_coeffs_.clear();
  for (int i = 0; i < n; ++i) by_coeffs_[coeffs_[static_cast<std::size_t>(i)]] = i;
  coroots_.clear();
  for (int i = 0; i < n; ++i) coroots_.push_back(Rational(2) / norm2(i) * root(i));

  simple_idx_.assign(r, -1);
  for (int i = 0; i < rank_; ++i) {
    std::vector<int> c(r, 0);
    c[static_cast<std::size_t>(i)] = 1;
    simple_idx_[static_cast<std::size_t>(i)] = index_of_coefficients(c);
  }

  sum_.assign(static_cast<std::size_t>(n * n), -1);
  pair_.assign(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<int> c(r);
      for (std::size_t k = 0; k < r; ++k) c[k] = coeffs_[static_cast<std::size_t>(i)][k] + coeffs_[static_cast<std::size_t>(j)][k];
      sum_[static_cast<std::size_t>(i * n + j)] = index_of_coefficients(c);
      const Rational p = dot(root(i), coroot(j));
      if (!p.is_integer()) throw InvalidRootSystem(label_ + ": non-integral pairing");
      pair_[static_cast<std::size_t>(i * n + j)] = static_cast<int>(p.num());
    }
  }

  cartan_ = MatrixX<int>(rank_, rank_);
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j) cartan_(i, j) = pairing(simple_index(i), simple_index(j));

  // Simple reflections as root permutations.
  refl_.clear();
  aut_gens_.clear();
  for (int k = 0; k < rank_; ++k) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      std::vector<int> c = coeffs_[static_cast<std::size_t>(i)];
      c[static_cast<std::size_t>(k)] -= pairing(i, simple_index(k));
      perm[static_cast<std::size_t>(i)] = index_of_coefficients(c);
    }
    refl_.push_back(perm);
    MatrixX<int> on_simple = MatrixX<int>::Identity(rank_, rank_);
    for (int j = 0; j < rank_; ++j) on_simple(k, j) -= cartan_(j, k);
    aut_gens_.push_back({perm, on_simple, "s" + std::to_string(k + 1)});
  }

  // Nontrivial diagram automorphisms by backtracking over Cartan-preserving
  // permutations of the simple roots.
  std::vector<int> img(r, -1);
  std::vector<bool> used(r, false);
  std::function<void(int)> extend = [&](int i) {
    if (i == rank_) {
      bool identity = true;
      for (int k = 0; k < rank_; ++k) identity = identity && img[static_cast<std::size_t>(k)] == k;
      if (identity) return;
      std::vector<int> perm(static_cast<std::size_t>(n));
      for (int q = 0; q < n; ++q) {
        std::vector<int> c(r, 0);
        for (std::size_t k = 0; k < r; ++k) c[static_cast<std::size_t>(img[k])] = coeffs_[static_cast<std::size_t>(q)][k];
        perm[static_cast<std::size_t>(q)] = index_of_coefficients(c);
      }
      MatrixX<int> on_simple = MatrixX<int>::Zero(rank_, rank_);
      std::string nm = "sigma(";
      for (int k = 0; k < rank_; ++k) {
        on_simple(img[static_cast<std::size_t>(k)], k) = 1;
        nm += (k ? "," : "") + std::to_string(img[static_cast<std::size_t>(k)] + 1);
      }
      aut_gens_.push_back({perm, on_simple, nm + ")"});
      return;
    }
    for (int t = 0; t < rank_; ++t) {
      if (used[static_cast<std::size_t>(t)]) continue;
      bool ok = cartan_(t, t) == cartan_(i, i);
      for (int j = 0; j < i && ok; ++j) {
        const int tj = img[static_cast<std::size_t>(j)];
        ok = cartan_(t, tj) == cartan_(i, j) && cartan_(tj, t) == cartan_(j, i);
      }
      if (!ok) continue;
      used[static_cast<std::size_t>(t)] = true;
      img[static_cast<std::size_t>(i)] = t;
      extend(i + 1);
      used[static_cast<std::size_t>(t)] = false;
    }
  };
  extend(0);
}

RootSystem build_root_system(std::string_view label, int rank) {
  std::string l(label);
  char family = 0;
  if (l == "A1xA1" || l == "A1*A1" || l == "A1+A1") {
    family = 'P';
  } else if (!l.empty()) {
    family = static_cast<char>(std::toupper(static_cast<unsigned char>(l[0])));
    if (l.size() > 1) {
      int given = 0;
      auto [p, ec] = std::from_chars(l.data() + 1, l.data() + l.size(), given);
      if (ec != std::errc() || p != l.data() + l.size())
        throw InvalidRootSystem("malformed root system label '" + l + "'");
      if (given != rank) throw InvalidRootSystem("label '" + l + "' does not match rank " + std::to_string(rank));
    }
  } else {
    throw InvalidRootSystem("empty root system label");
  }
  validate(family, rank);
  RootSystem phi;
  phi.family_ = family;
  phi.rank_ = rank;
  phi.label_ = family == 'P' ? std::string("A1xA1") : std::string(1, family) + std::to_string(rank);
  phi.simple_ = simple_roots_for(family, rank, phi.ambient_dim_);
  phi.finalize();
  return phi;
}

RootSystem parse_root_system(std::string_view label) {
  std::string l(label);
  if (l == "A1xA1" || l == "A1*A1" || l == "A1+A1") return build_root_system("A1xA1", 2);
  if (l.size() < 2) throw InvalidRootSystem("malformed root system label '" + l + "'");
  int rank = 0;
  auto [p, ec] = std::from_chars(l.data() + 1, l.data() + l.size(), rank);
  if (ec != std::errc() || p != l.data() + l.size())
    throw InvalidRootSystem("malformed root system label '" + l + "'");
  return build_root_system(l.substr(0, 1), rank);
}

std::vector<int> support(const RootSystem& phi, const QVector& rho) {
  const int idx = phi.index_of(rho);
  if (idx < 0) throw std::invalid_argument("support: vector is not a root");
  std::vector<int> s;
  for (int i = 0; i < phi.rank(); ++i)
    if (phi.coefficients(idx)[static_cast<std::size_t>(i)] != 0) s.push_back(i);
  return s;
}

QVector coroot(const RootSystem& phi, const QVector& rho) {
  const int idx = phi.index_of(rho);
  if (idx < 0) throw std::invalid_argument("coroot: vector is not a root");
  return phi.coroot(idx);
}

QVector reflect(const QVector& rho, const QVector& sigma) {
  const Rational c = Rational(2) * dot(sigma, rho) / dot(rho, rho);
  return sigma - c * rho;
}

std::vector<int> members(const RootSet& s, int num_roots) {
  std::vector<int> out;
  for (int i = 0; i < num_roots; ++i)
    if (s.test(static_cast<std::size_t>(i))) out.push_back(i);
  return out;
}

namespace {

RootSubsystem finish_subsystem(const RootSystem& phi, std::vector<int> roots) {
  RootSubsystem sub;
  std::sort(roots.begin(), roots.end());
  sub.roots = roots;
  std::set<int> in(roots.begin(), roots.end());
  for (int r : roots) {
    if (!phi.is_positive(r)) continue;
    bool decomposable = false;
    for (int a : roots) {
      if (!phi.is_positive(a)) continue;
      const int b = phi.sum(r, phi.negative(a));
      if (b >= 0 && phi.is_positive(b) && in.count(b)) {
        decomposable = true;
        break;
      }
    }
    if (!decomposable) sub.basis.push_back(r);
  }
  const auto k = static_cast<Eigen::Index>(sub.basis.size());
  MatrixX<int> a(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) a(i, j) = phi.pairing(sub.basis[static_cast<std::size_t>(i)], sub.basis[static_cast<std::size_t>(j)]);
  sub.type_tag = cartan_type(a).value_or("unresolved");
  return sub;
}

}  // namespace

RootSubsystem span_subsystem(const RootSystem& phi, const std::vector<int>& generators) {
  std::vector<QVector> gens;
  for (int g : generators) gens.push_back(phi.root(g));
  const QMatrix span = columns(gens, phi.ambient_dim());
  const Eigen::Index base = rank(span);
  std::vector<int> roots;
  for (int i = 0; i < phi.num_roots(); ++i) {
    QMatrix m(phi.ambient_dim(), span.cols() + 1);
    m.leftCols(span.cols()) = span;
    m.col(span.cols()) = phi.root(i);
    if (rank(m) == base) roots.push_back(i);
  }
  return finish_subsystem(phi, roots);
}

RootSubsystem rank2_subsystem(const RootSystem& phi, int gamma, int beta) {
  if (gamma == beta || gamma == phi.negative(beta))
    throw std::invalid_argument("rank2_subsystem: the two roots are proportional");
  return span_subsystem(phi, {gamma, beta});
}

RootSubsystem rank2_subsystem(const RootSystem& phi, const QVector& gamma, const QVector& beta) {
  const int g = phi.index_of(gamma);
  const int b = phi.index_of(beta);
  if (g < 0 || b < 0) throw std::invalid_argument("rank2_subsystem: arguments must be roots");
  return rank2_subsystem(phi, g, b);
}

std::vector<QVector> weyl_orbit(const RootSystem& phi, const QVector& lambda) {
  std::set<std::vector<Rational>> seen{as_key(lambda)};
  std::vector<QVector> orbit{lambda};
  for (std::size_t head = 0; head < orbit.size(); ++head) {
    for (int i = 0; i < phi.rank(); ++i) {
      QVector w = reflect(phi.simple_root(i), orbit[head]);
      if (seen.insert(as_key(w)).second) orbit.push_back(w);
    }
  }
  std::sort(orbit.begin(), orbit.end(), [](const QVector& a, const QVector& b) { return as_key(a) < as_key(b); });
  return orbit;
}

QVector dominant_representative(const RootSystem& phi, QVector v) {
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < phi.rank(); ++i) {
      if (dot(v, phi.simple_root(i)).sign() < 0) {
        v = reflect(phi.simple_root(i), v);
        changed = true;
      }
    }
  }
  return v;
}

std::vector<QVector> fundamental_weights(const RootSystem& phi) {
  const int r = phi.rank();
  QMatrix at(r, r);  // at(j, k) = (alpha_k, alpha_j coroot)
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < r; ++k) at(j, k) = Rational(phi.cartan_matrix()(k, j));
  std::vector<QVector> out;
  for (int i = 0; i < r; ++i) {
    const QVector x = *solve_exact(at, QVector(unit(r, i)));
    out.push_back(phi.from_simple_coordinates(x));
  }
  return out;
}

ParabolicTable parabolic_table(const RootSystem& phi) {
  ParabolicTable t;
  const int r = phi.rank();
  for (int mask = 0; mask < (1 << r) - 1; ++mask) {
    RootSet levi, nil;
    for (int i = 0; i < phi.num_roots(); ++i) {
      bool inside = true;
      for (int k = 0; k < r; ++k)
        if (phi.coefficients(i)[static_cast<std::size_t>(k)] != 0 && !((mask >> k) & 1)) inside = false;
      if (inside)
        levi.set(static_cast<std::size_t>(i));
      else if (phi.is_positive(i))
        nil.set(static_cast<std::size_t>(i));
    }
    t.levi_and_nilradical.emplace_back(levi, nil);
  }
  return t;
}

bool parabolic_sandwich_exists(const ParabolicTable& table, const RootSet& psi) {
  for (const auto& [levi, nil] : table.levi_and_nilradical) {
    if ((nil & ~psi).none() && (psi & ~(levi | nil)).none()) return true;
  }
  return false;
}

bool parabolic_sandwich_exists(const RootSystem& phi, const RootSet& psi) {
  return parabolic_sandwich_exists(parabolic_table(phi), psi);
}

WeylElement weyl_identity(const RootSystem& phi) {
  return {QMatrix::Identity(phi.ambient_dim(), phi.ambient_dim()), {}};
}

namespace {

QMatrix reflection_matrix(const QVector& rho) {
  const Rational n = dot(rho, rho);
  return QMatrix::Identity(rho.size(), rho.size()) - (Rational(2) / n) * rho * rho.transpose();
}

}  // namespace

WeylElement simple_reflection(const RootSystem& phi, int i) {
  return {reflection_matrix(phi.simple_root(i)), {i}};
}

WeylElement reflection(const RootSystem& phi, const QVector& rho) {
  if (phi.index_of(rho) < 0) throw std::invalid_argument("reflection: vector is not a root");
  QMatrix m = reflection_matrix(rho);
  return {m, reduced_word(phi, m)};
}

WeylElement compose(const RootSystem& phi, const WeylElement& a, const WeylElement& b) {
  QMatrix m = a.matrix * b.matrix;
  return {m, reduced_word(phi, m)};
}

std::vector<int> reduced_word(const RootSystem& phi, const QMatrix& matrix) {
  QMatrix w = matrix;
  std::vector<int> reversed;
  const QMatrix id = QMatrix::Identity(phi.ambient_dim(), phi.ambient_dim());
  for (int guard = 0; w != id; ++guard) {
    if (guard > phi.num_positive()) throw std::invalid_argument("reduced_word: matrix is not in the Weyl group");
    bool found = false;
    for (int i = 0; i < phi.rank(); ++i) {
      const int img = phi.index_of(QVector(w * phi.simple_root(i)));
      if (img < 0) throw std::invalid_argument("reduced_word: matrix does not permute the roots");
      if (!phi.is_positive(img)) {
        w = w * reflection_matrix(phi.simple_root(i));
        reversed.push_back(i);
        found = true;
        break;
      }
    }
    if (!found) throw std::invalid_argument("reduced_word: matrix is not in the Weyl group");
  }
  return {reversed.rbegin(), reversed.rend()};
}

std::vector<int> root_permutation(const RootSystem& phi, const QMatrix& matrix) {
  std::vector<int> perm(static_cast<std::size_t>(phi.num_roots()));
  for (int i = 0; i < phi.num_roots(); ++i) perm[static_cast<std::size_t>(i)] = phi.index_of(QVector(matrix * phi.root(i)));
  return perm;
}

bool is_additively_closed(const RootSystem& phi, const RootSet& s) {
  const auto m = members(s, phi.num_roots());
  for (int a : m)
    for (int b : m) {
      const int c = phi.sum(a, b);
      if (c >= 0 && !s.test(static_cast<std::size_t>(c))) return false;
    }
  return true;
}

RootSet additive_closure(const RootSystem& phi, RootSet s) {
  for (bool grew = true; grew;) {
    grew = false;
    const auto m = members(s, phi.num_roots());
    for (int a : m)
      for (int b : m) {
        const int c = phi.sum(a, b);
        if (c >= 0 && !s.test(static_cast<std::size_t>(c))) {
          s.set(static_cast<std::size_t>(c));
          grew = true;
        }
      }
  }
  return s;
}

std::string canonical_type_name(char family, int rank) {
  if (rank == 1) return "A1";
  if (family == 'C' && rank == 2) return "B2";
  if (family == 'D' && rank == 3) return "A3";
  if (family == 'D' && rank == 2) return "A1xA1";
  return std::string(1, family) + std::to_string(rank);
}

std::optional<std::string> cartan_type(const MatrixX<int>& a) {
  const auto n = static_cast<int>(a.rows());
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  std::vector<std::string> names;
  for (int start = 0; start < n; ++start) {
    if (comp[static_cast<std::size_t>(start)] >= 0) continue;
    const int cid = static_cast<int>(names.size());
    std::vector<int> nodes{start};
    comp[static_cast<std::size_t>(start)] = cid;
    for (std::size_t h = 0; h < nodes.size(); ++h)
      for (int j = 0; j < n; ++j)
        if (comp[static_cast<std::size_t>(j)] < 0 && a(nodes[h], j) != 0) {
          comp[static_cast<std::size_t>(j)] = cid;
          nodes.push_back(j);
        }
    const int k = static_cast<int>(nodes.size());
    int edges = 0, doubles = 0, triples = 0;
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    for (int x : nodes) {
      if (a(x, x) != 2) return std::nullopt;
      for (int y : nodes) {
        if (x >= y) continue;
        if (a(x, y) == 0 && a(y, x) == 0) continue;
        if (a(x, y) >= 0 || a(y, x) >= 0) return std::nullopt;
        const int prod = a(x, y) * a(y, x);
        if (prod == 1) {
        } else if (prod == 2) {
          ++doubles;
        } else if (prod == 3) {
          ++triples;
        } else {
          return std::nullopt;
        }
        ++edges;
        ++degree[static_cast<std::size_t>(x)];
        ++degree[static_cast<std::size_t>(y)];
      }
    }
    if (edges != k - 1) return std::nullopt;  // must be a tree
    int branch = -1;
    for (int x : nodes)
      if (degree[static_cast<std::size_t>(x)] > 2) {
        if (branch >= 0 || degree[static_cast<std::size_t>(x)] > 3) return std::nullopt;
        branch = x;
      }
    std::string name;
    if (triples > 0) {
      if (k != 2) return std::nullopt;
      name = "G2";
    } else if (doubles > 1) {
      return std::nullopt;
    } else if (doubles == 1) {
      if (branch >= 0) return std::nullopt;
      if (k == 2) {
        name = "B2";
      } else {
        int sx = -1, lx = -1;  // short and long end of the double bond
        for (int x : nodes)
          for (int y : nodes)
            if (a(x, y) == -2) {
              sx = y;
              lx = x;
            }
        const bool short_is_end = degree[static_cast<std::size_t>(sx)] == 1;
        const bool long_is_end = degree[static_cast<std::size_t>(lx)] == 1;
        if (short_is_end)
          name = canonical_type_name('B', k);
        else if (long_is_end)
          name = canonical_type_name('C', k);
        else if (k == 4)
          name = "F4";
        else
          return std::nullopt;
      }
    } else if (branch >= 0) {
      // Arms from the branch node; D needs two arms of length one.
      std::vector<int> arms;
      for (int y : nodes) {
        if (y == branch || a(branch, y) == 0) continue;
        int len = 1, prev = branch, cur = y;
        for (bool more = true; more;) {
          more = false;
          for (int z : nodes)
            if (z != prev && z != cur && a(cur, z) != 0) {
              prev = cur;
              cur = z;
              ++len;
              more = true;
              break;
            }
        }
        arms.push_back(len);
      }
      std::sort(arms.begin(), arms.end());
      if (arms[0] == 1 && arms[1] == 1) {
        name = canonical_type_name('D', k);
      } else {
        return std::nullopt;  // E types are outside the supported range
      }
    } else {
      name = canonical_type_name('A', k);
    }
    names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  std::string out;
  for (const auto& s : names) out += (out.empty() ? "" : "x") + s;
  return out;
}

}  // namespace twoorbit
