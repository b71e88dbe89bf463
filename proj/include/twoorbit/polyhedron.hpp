#pragma once

#include "twoorbit/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twoorbit {

enum class Relation { LessEqual, GreaterEqual, Equal };

/// coeffs . x  (rel)  rhs
struct LinearConstraint {
  QVector coeffs;
  Relation rel = Relation::LessEqual;
  Rational rhs;
  std::string label;
};

struct Feasibility {
  bool feasible = false;
  /// A rational point satisfying every constraint, when feasible.
  std::optional<QVector> witness;
};

/// Exact feasibility of a rational polyhedron in `dim` variables by
/// Fourier-Motzkin elimination. A witness is rebuilt by back-substitution.
Feasibility fourier_motzkin(Eigen::Index dim, const std::vector<LinearConstraint>& constraints);

/// Convenience check that x satisfies every constraint.
bool satisfies(const QVector& x, const std::vector<LinearConstraint>& constraints);

}  // namespace twoorbit
