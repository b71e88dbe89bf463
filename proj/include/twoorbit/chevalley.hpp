#pragma once

#include "twoorbit/rational.hpp"
#include "twoorbit/rootsys.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace twoorbit {

/// Coordinates in the basis [H_1..H_r, Y_0..Y_{N-1}], where H_i is the
/// coroot element of the i-th simple root and Y_k spans the root space of
/// RootSystem::root(k).
using Element = QVector;

/// Sparse integer bracket of two basis elements: (basis index, coefficient).
using SparseTerms = std::vector<std::pair<int, int>>;

/// Chevalley basis of the split semisimple Lie algebra of a root system.
/// Structure constants follow Carter's extraspecial-pair construction for
/// the root order of the RootSystem, with [Y_a, Y_-a] = H_a for every root.
class ChevalleyAlgebra {
 public:
  explicit ChevalleyAlgebra(RootSystem phi);

  const RootSystem& root_system() const { return phi_; }
  int rank() const { return phi_.rank(); }
  int dim() const { return phi_.rank() + phi_.num_roots(); }
  int root_slot(int root) const { return phi_.rank() + root; }

  /// N_{a,b} with [Y_a, Y_b] = N_{a,b} Y_{a+b}; zero when a+b is not a root.
  int structure_constant(int a, int b) const { return n_[static_cast<std::size_t>(a * phi_.num_roots() + b)]; }
  /// H_a expressed in the simple coroot elements H_1..H_r.
  const std::vector<int>& coroot_element(int a) const { return h_[static_cast<std::size_t>(a)]; }

  const SparseTerms& basis_bracket(int x, int y) const { return table_[static_cast<std::size_t>(x * dim() + y)]; }
  Element basis(int x) const;
  Element cartan(int i) const { return basis(i); }
  Element root_vector(int a) const { return basis(root_slot(a)); }
  Element bracket(const Element& x, const Element& y) const;

  /// Human-readable form such as "H1-H2" or "Y[-01]+2*Y[10]".
  std::string describe(const Element& x) const;

 private:
  RootSystem phi_;
  std::vector<int> n_;
  std::vector<std::vector<int>> h_;
  std::vector<SparseTerms> table_;
};

ChevalleyAlgebra build_algebra(const RootSystem& phi);

struct JacobiReport {
  long long triples_checked = 0;
  long long violations = 0;
  std::vector<std::string> examples;
};

/// Checks [[x,y],z] + [[y,z],x] + [[z,x],y] = 0 on every ordered basis triple.
JacobiReport check_jacobi(const ChevalleyAlgebra& g);

// ---------------------------------------------------------------------------
// Subalgebra descriptions

struct MixedTerm {
  int root = -1;
  /// nullopt marks a coefficient still to be solved.
  std::optional<Rational> coeff;
};

/// One-dimensional span of sum_j c_j Y_{root_j}.
struct MixedLine {
  std::vector<MixedTerm> terms;
};

/// Either the whole Cartan subalgebra or the common kernel of functionals,
/// given as ambient vectors paired with coroot elements.
struct ToralPart {
  bool full = true;
  std::vector<QVector> functionals;

  static ToralPart whole() { return {}; }
  static ToralPart kernel(std::vector<QVector> fs) { return {false, std::move(fs)}; }
};

struct SubalgebraSpec {
  ToralPart toral;
  RootSet root_spaces;
  std::vector<MixedLine> mixed;
};

/// Structural problems (empty when well formed): repeated roots, mixed roots
/// that are also full root spaces, lines that are not homogeneous for the
/// toral part.
std::vector<std::string> validate_spec(const RootSystem& phi, const SubalgebraSpec& h);

/// Basis of the toral part as Cartan elements (columns of a null space).
std::vector<Element> toral_basis(const ChevalleyAlgebra& g, const ToralPart& t);
int declared_dimension(const ChevalleyAlgebra& g, const SubalgebraSpec& h);
bool has_unknown_coefficients(const SubalgebraSpec& h);
/// Toral basis, then root vectors, then mixed lines. Requires known coefficients.
std::vector<Element> spanning_set(const ChevalleyAlgebra& g, const SubalgebraSpec& h);

/// Exact membership of x in the span described by h.
bool contains(const ChevalleyAlgebra& g, const SubalgebraSpec& h, const Element& x);

struct ClosureReport {
  bool closed = true;
  /// Failing pairs of spanning elements, in human-readable form.
  std::vector<std::pair<std::string, std::string>> witnesses;
};

ClosureReport check_closure(const ChevalleyAlgebra& g, const SubalgebraSpec& h);

struct MixedSolution {
  SubalgebraSpec spec;
  /// Lines whose scale was fixed arbitrarily (any nonzero value works).
  std::vector<int> free_lines;
  /// Lines whose coefficients were forced by the closure equations.
  std::vector<int> forced_lines;
};

/// All solutions of the closure equations for the unknown coefficients, up
/// to rescaling each line. Empty when no nonzero solution closes h.
std::vector<MixedSolution> solve_mixed_coefficients(const ChevalleyAlgebra& g, const SubalgebraSpec& h);

struct RankReport {
  int rank = 0;
  /// A root space or mixed line of restricted weight zero: a larger toral
  /// part could exist and the value above is only a lower bound.
  bool exceptional = false;
};

/// Throws std::invalid_argument when h is not closed.
RankReport subalgebra_rank(const ChevalleyAlgebra& g, const SubalgebraSpec& h);

/// No root vanishes identically on the toral part.
bool check_regular_torus(const RootSystem& phi, const ToralPart& t);

struct RestrictedRootDatum {
  int toral_dim = 0;
  /// Distinct restricted weights (values on the toral basis) and their
  /// multiplicities; the zero weight is excluded.
  std::vector<QVector> weights;
  std::vector<int> multiplicities;
};

RestrictedRootDatum restricted_datum(const ChevalleyAlgebra& g, const SubalgebraSpec& h);

struct TypeIdentification {
  bool resolved = false;
  /// Canonical label of the semisimple part, "0" when it is trivial.
  std::string semisimple_type;
  int center_dim = 0;
  int nilradical_dim = 0;
  int dimension = 0;
  std::string diagnostic;
  RestrictedRootDatum datum;
};

TypeIdentification identify_type(const ChevalleyAlgebra& g, const SubalgebraSpec& h);

/// Dominant weight lambda and mu = w(lambda) selecting one stabilizer among
/// several closed candidates (see complete_stabilizer).
struct WeightWitness {
  QVector lambda;
  QVector mu;
};

/// Builds the stabilizer with toral part ker(functionals). With a witness,
/// keeps Y_rho when rho pairs nonnegatively with both weights and mixed lines
/// Y_rho + c Y_sigma (rho - sigma = lambda - mu) when Y_rho kills v_lambda,
/// Y_sigma kills v_mu and lambda + sigma is W-conjugate to lambda. Without a
/// witness, returns the maximum-dimension closed specs made of all unshared
/// root spaces and one line per shared class, dropping as few components as
/// possible (at most `max_drop`). Coefficients are solved in both modes.
std::vector<SubalgebraSpec> complete_stabilizer(const ChevalleyAlgebra& g, const std::vector<QVector>& functionals,
                                                const SubalgebraSpec& seed,
                                                const std::optional<WeightWitness>& witness = std::nullopt,
                                                int max_drop = 3);

}  // namespace twoorbit
