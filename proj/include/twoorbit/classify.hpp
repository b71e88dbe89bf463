#pragma once

#include "twoorbit/chevalley.hpp"
#include "twoorbit/polyhedron.hpp"
#include "twoorbit/rootsys.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twoorbit {

// ---------------------------------------------------------------------------
// Type I

/// One admissible shape for the intersection of the stabilizer's root set
/// with a plane: it must contain `must_contain`, and when `must_equal` is
/// set the intersection is exactly that set.
struct ReformulRequirement {
  RootSet must_contain;
  std::optional<RootSet> must_equal;
};

/// Constraint attached to the plane spanned by beta and gamma.
/// `case_tag` is one of "i" (A1xA1), "ii" (A2), "iii" (B2, beta long),
/// "iv" (B2, beta short), "free" (beta is a simple root of the plane) and
/// "g2" (the whole G2 system).
struct ReformulConstraint {
  RootSubsystem plane;
  int beta = -1;
  std::string case_tag;
  std::vector<ReformulRequirement> alternatives;
  /// Free planes only restrict the stabilizer through closure; the others
  /// take part in the maximality comparison of enumerate_type1.
  bool free() const { return case_tag == "i" || case_tag == "free"; }
};

/// Throws std::invalid_argument for gamma = +-beta and for G2 planes inside
/// a larger system.
ReformulConstraint reformul_constraint(const RootSystem& phi, int beta, int gamma);

/// Every exact intersection with the plane allowed by the constraint: subsets
/// of the plane that avoid +-beta, contain no pair summing to +-beta, are
/// closed inside the plane, and satisfy one of the alternatives. Sorted and
/// deduplicated.
std::vector<RootSet> plane_patterns(const RootSystem& phi, const ReformulConstraint& c);

/// True iff some proper parabolic subset P of the roots (any Weyl conjugate
/// of a standard one) satisfies nilradical(P) in psi and psi in P.
/// Decided exactly as the existence of a nonzero linear functional f with
/// f >= 0 on psi and f <= 0 off psi.
bool conjugate_sandwich_exists(const RootSystem& phi, const RootSet& psi);

enum class PairKind { TypeI, TypeII };

struct Provenance {
  /// Root names, for example beta = "1231" and alpha = "0001".
  std::string beta;
  std::optional<std::string> alpha;
  /// Which constraint branch produced the pair.
  std::string branch;
  std::vector<std::string> notes;
};

struct ClassifiedPair {
  std::string group;
  PairKind kind = PairKind::TypeI;
  SubalgebraSpec stabilizer;
  Provenance provenance;
  int dimension = 0;
  int stabilizer_rank = 0;
  bool closed = false;
  bool regular_torus = true;
  TypeIdentification type;
  std::optional<std::string> catalog_match;
};

/// Cuspidal type I pairs of a simple system, one per conjugacy class under
/// the automorphism group, in canonical order. Throws for A1xA1.
std::vector<ClassifiedPair> enumerate_type1(const RootSystem& phi);

/// Root sets produced for one beta before deduplication (exposed for tests
/// and for the per-beta acceptance check).
std::vector<RootSet> type1_candidates_for_beta(const RootSystem& phi, int beta);

// ---------------------------------------------------------------------------
// Type II

/// For every root eta in the span of g1, g2, g3, eta - n3 g3 is zero or a
/// rational multiple of a root, where eta = n1 g1 + n2 g2 + n3 g3.
/// Throws when the span does not have rank three.
bool remark_property(const RootSystem& phi, const QVector& g1, const QVector& g2, const QVector& g3);

enum class Type2Stage { Regime, Regularity, Trick, Plan, Descent, Sphericity, Accepted };
std::string stage_name(Type2Stage s);

struct Type2Candidate {
  int alpha_index = -1;  // which simple root (0-based)
  int alpha = -1;        // root indices
  int beta = -1;
  WeylElement w;
  std::string plane_type;
  /// Every simple delta with (beta, delta) > 0 has (alpha, delta) < 0.
  bool in_regime = false;
  /// alpha + s_alpha(beta) is not proportional to any root.
  bool regular = false;
  /// Base constraints plus the sign conditions and the equalities of the
  /// plan stage, in the ambient coordinates of lambda.
  std::vector<LinearConstraint> lambda_constraints;
  std::vector<LinearConstraint> descent_constraints;
  bool feasible = false;
  Type2Stage eliminated_at = Type2Stage::Accepted;
  std::string elimination_detail;
  std::optional<QVector> lambda;
  std::optional<SubalgebraSpec> stabilizer;
  /// Set for G2 planes: whether the alternative w = (s_alpha s_beta)^2 is
  /// ruled out by the integrality test.
  std::optional<bool> g2_square_obstructed;
};

/// All (alpha, beta) with alpha simple, beta positive, beta != alpha,
/// (alpha, beta) <= 0, {alpha, beta} a base of its plane and
/// supp(beta) + {alpha} = all simple roots, with the verdict of each filter.
/// Filters run in the order regime, regularity, sign conditions, plan
/// equalities, descent, sphericity (dim h >= number of positive roots); the
/// first one that fails is recorded. Rank-2 systems only use regularity and
/// sphericity.
std::vector<Type2Candidate> type2_candidate_triples(const RootSystem& phi);

/// For a G2 plane with base {alpha, beta}: true iff no lambda in the cone
/// given by `constraints` with (lambda, alpha) > 0 and (lambda, beta) > 0
/// makes (lambda, alpha) / ((lambda, alpha) + (lambda, beta)) an integer.
/// Only the values 0 and 1 can occur at the boundary and are tested exactly.
/// Throws for planes that are not of type G2.
bool g2_integrality_obstruction(const RootSystem& phi, const RootSubsystem& plane, int alpha, int beta,
                                const std::vector<LinearConstraint>& constraints);

struct Type2Levi {
  /// Toral part ker(alpha + s_alpha(beta)) with the line
  /// Y_-alpha + c Y_{s_alpha(beta)} (two lines for A1xA1 planes).
  SubalgebraSpec literal;
  ClosureReport literal_closure;
  std::vector<MixedSolution> literal_solutions;
  /// For rank-2 groups: ker(alpha_1 - alpha_2) + C(Y_alpha1 + c Y_alpha2)
  /// + the remaining positive root spaces.
  std::optional<SubalgebraSpec> positive_form;
  std::vector<MixedSolution> positive_solutions;
};

Type2Levi type2_stabilizer_levi(const ChevalleyAlgebra& g, int alpha, int beta);

/// Type II pairs, one per conjugacy class under the automorphism group.
std::vector<ClassifiedPair> enumerate_type2(const RootSystem& phi);

// ---------------------------------------------------------------------------
// Conjugacy

/// Orbit key of a spec under the automorphism group (Weyl group extended by
/// diagram symmetries): full root spaces, root sets of mixed lines, and the
/// toral functionals up to scalar. Coefficients are ignored.
struct SpecShape {
  RootSet full;
  std::vector<std::vector<int>> lines;
  std::vector<std::vector<Rational>> functionals;  // simple coordinates, row-reduced
  bool full_torus = true;

  std::string key() const;
};

SpecShape spec_shape(const RootSystem& phi, const SubalgebraSpec& h);
SpecShape apply_automorphism(const RootAutomorphism& a, const SpecShape& s);

/// Smallest key in the orbit.
std::string canonical_key(const RootSystem& phi, const SubalgebraSpec& h);

/// Word in automorphism_generators() names (applied left to right) taking
/// `from` onto `to`, or nullopt when they are not conjugate.
std::optional<std::vector<std::string>> find_conjugator(const RootSystem& phi, const SubalgebraSpec& from,
                                                        const SubalgebraSpec& to);

/// Verification data for a finished stabilizer (closure, rank, regularity,
/// type).
void attach_checks(const ChevalleyAlgebra& g, ClassifiedPair& p);

}  // namespace twoorbit
