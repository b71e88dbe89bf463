#include "twoorbit/polyhedron.hpp"

#include "twoorbit/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace twoorbit {

namespace {

// a . x <= b, stored with integral primitive coefficients.
struct Ineq {
  std::vector<Rational> a;
  Rational b;

  bool operator<(const Ineq& o) const {
    if (a.size() != o.a.size()) return a.size() < o.a.size();
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != o.a[i]) return a[i] < o.a[i];
    return b < o.b;
  }
};

std::int64_t gcd64(std::int64_t x, std::int64_t y) { return std::gcd(x < 0 ? -x : x, y < 0 ? -y : y); }
std::int64_t lcm64(std::int64_t x, std::int64_t y) { return x / gcd64(x, y) * y; }

// Scale by a positive factor so the coefficients are coprime integers.
Ineq normalize(Ineq in) {
  std::int64_t l = 1;
  for (const auto& c : in.a) l = lcm64(l, c.den());
  std::int64_t g = 0;
  for (auto& c : in.a) {
    c *= Rational(l);
    g = gcd64(g, c.num());
  }
  in.b *= Rational(l);
  if (g > 1) {
    for (auto& c : in.a) c /= Rational(g);
    in.b /= Rational(g);
  }
  return in;
}

bool all_zero(const std::vector<Rational>& a) {
  return std::all_of(a.begin(), a.end(), [](const Rational& c) { return c.is_zero(); });
}

}  // namespace

Feasibility fourier_motzkin(Eigen::Index dim, const std::vector<LinearConstraint>& constraints) {
  const auto n = static_cast<std::size_t>(dim);
  std::set<Ineq> current;
  auto push = [&](std::vector<Rational> a, Rational b, std::set<Ineq>& into) {
    into.insert(normalize(Ineq{std::move(a), b}));
  };
  for (const auto& c : constraints) {
    std::vector<Rational> a(c.coeffs.data(), c.coeffs.data() + c.coeffs.size());
    std::vector<Rational> neg(a.size());
    std::transform(a.begin(), a.end(), neg.begin(), [](const Rational& q) { return -q; });
    if (c.rel != Relation::GreaterEqual) push(a, c.rhs, current);
    if (c.rel != Relation::LessEqual) push(neg, -c.rhs, current);
  }

  // stages[k] holds the system after eliminating variables 0..k-1.
  std::vector<std::vector<Ineq>> stages;
  stages.emplace_back(current.begin(), current.end());
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<const Ineq*> pos, neg;
    std::set<Ineq> next;
    for (const auto& q : stages.back()) {
      if (q.a[j].sign() > 0)
        pos.push_back(&q);
      else if (q.a[j].sign() < 0)
        neg.push_back(&q);
      else
        next.insert(q);
    }
    for (const Ineq* p : pos) {
      for (const Ineq* m : neg) {
        const Rational sp = p->a[j];
        const Rational sm = -m->a[j];
        std::vector<Rational> a(n);
        for (std::size_t k = 0; k < n; ++k) a[k] = sm * p->a[k] + sp * m->a[k];
        Rational b = sm * p->b + sp * m->b;
        Ineq combined = normalize(Ineq{std::move(a), b});
        if (all_zero(combined.a) && combined.b.sign() >= 0) continue;
        next.insert(std::move(combined));
      }
    }
    stages.emplace_back(next.begin(), next.end());
  }

  for (const auto& q : stages.back())
    if (q.b.sign() < 0) return {false, std::nullopt};

  QVector x = QVector::Zero(dim);
  for (std::size_t j = n; j-- > 0;) {
    std::optional<Rational> lo, hi;
    for (const auto& q : stages[j]) {
      if (q.a[j].is_zero()) continue;
      Rational rest = q.b;
      for (std::size_t k = j + 1; k < n; ++k)
        if (!q.a[k].is_zero()) rest -= q.a[k] * x[static_cast<Eigen::Index>(k)];
      const Rational bound = rest / q.a[j];
      if (q.a[j].sign() > 0) {
        if (!hi || bound < *hi) hi = bound;
      } else {
        if (!lo || bound > *lo) lo = bound;
      }
    }
    Rational v(0);
    if (lo && hi)
      v = (*lo + *hi) / Rational(2);
    else if (lo)
      v = *lo + Rational(1);
    else if (hi)
      v = *hi - Rational(1);
    x[static_cast<Eigen::Index>(j)] = v;
  }
  return {true, x};
}

bool satisfies(const QVector& x, const std::vector<LinearConstraint>& constraints) {
  for (const auto& c : constraints) {
    const Rational lhs = dot(c.coeffs, x);
    switch (c.rel) {
      case Relation::LessEqual:
        if (lhs > c.rhs) return false;
        break;
      case Relation::GreaterEqual:
        if (lhs < c.rhs) return false;
        break;
      case Relation::Equal:
        if (lhs != c.rhs) return false;
        break;
    }
  }
  return true;
}

}  // namespace twoorbit
