#pragma once

#include "twoorbit/rational.hpp"

#include <bitset>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twoorbit {

inline constexpr int kMaxRoots = 256;

/// Subset of the roots of a RootSystem, indexed like RootSystem::root.
using RootSet = std::bitset<kMaxRoots>;

class InvalidRootSystem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A permutation of the roots induced by an automorphism of the root system,
/// together with its action on simple-root coordinates (column j holds the
/// image of the j-th simple root).
struct RootAutomorphism {
  std::vector<int> perm;
  MatrixX<int> on_simple;
  std::string name;
};

/// Finite crystallographic root system realized in a rational ambient space
/// with the standard dot product. Roots are indexed with the positive roots
/// first, ordered by height and then by coefficient tuple, followed by their
/// negatives in the same order.
class RootSystem {
 public:
  const std::string& label() const { return label_; }
  /// 'A', 'B', 'C', 'D', 'F', 'G', or 'P' for the A1xA1 product.
  char family() const { return family_; }
  int rank() const { return rank_; }
  Eigen::Index ambient_dim() const { return ambient_dim_; }
  int num_roots() const { return static_cast<int>(roots_.size()); }
  int num_positive() const { return num_positive_; }
  bool is_simple_type() const { return family_ != 'P'; }

  const QVector& simple_root(int i) const { return simple_[static_cast<std::size_t>(i)]; }
  const QVector& root(int i) const { return roots_[static_cast<std::size_t>(i)]; }
  const QVector& coroot(int i) const { return coroots_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& coefficients(int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
  int height(int i) const;
  bool is_positive(int i) const { return i < num_positive_; }
  int negative(int i) const { return i < num_positive_ ? i + num_positive_ : i - num_positive_; }
  /// Index of the i-th simple root (simple roots are the height-one roots).
  int simple_index(int i) const { return simple_idx_[static_cast<std::size_t>(i)]; }
  int highest_root() const { return num_positive_ - 1; }

  /// Index of root(i) + root(j), or -1 when the sum is not a root.
  int sum(int i, int j) const { return sum_[static_cast<std::size_t>(i * num_roots() + j)]; }
  /// (root(i), coroot(j)), always an integer.
  int pairing(int i, int j) const { return pair_[static_cast<std::size_t>(i * num_roots() + j)]; }
  Rational inner(int i, int j) const;
  Rational norm2(int i) const { return inner(i, i); }

  /// -1 when v is not a root.
  int index_of(const QVector& v) const;
  int index_of_coefficients(const std::vector<int>& c) const;
  /// Coefficient string such as "1231" or "-0100".
  std::string name(int i) const;
  /// Accepts the strings produced by name().
  int index_of_name(std::string_view s) const;

  /// Coordinates of the orthogonal projection of v onto the root span, in
  /// the basis of simple roots.
  QVector simple_coordinates(const QVector& v) const;
  QVector from_simple_coordinates(const QVector& c) const;
  bool in_root_span(const QVector& v) const;

  /// Pairing (v, coroot of the i-th simple root).
  Rational simple_pairing(const QVector& v, int i) const;

  const QMatrix& bilinear_form() const { return form_; }
  /// A(i, j) = (alpha_i, alpha_j coroot).
  const MatrixX<int>& cartan_matrix() const { return cartan_; }

  const std::vector<int>& simple_reflection_perm(int i) const { return refl_[static_cast<std::size_t>(i)]; }
  /// Simple reflections followed by the nontrivial diagram automorphisms.
  const std::vector<RootAutomorphism>& automorphism_generators() const { return aut_gens_; }
  int num_diagram_automorphisms() const { return static_cast<int>(aut_gens_.size()) - rank_; }

 private:
  friend RootSystem build_root_system(std::string_view label, int rank);
  void finalize();

  std::string label_;
  char family_ = 'A';
  int rank_ = 0;
  Eigen::Index ambient_dim_ = 0;
  int num_positive_ = 0;
  std::vector<QVector> simple_;
  std::vector<QVector> roots_;
  std::vector<QVector> coroots_;
  std::vector<std::vector<int>> coeffs_;
  std::vector<int> simple_idx_;
  std::vector<int> sum_;
  std::vector<int> pair_;
  std::map<std::vector<int>, int> by_coeffs_;
  QMatrix form_;
  MatrixX<int> cartan_;
  QMatrix gram_inverse_;
  std::vector<std::vector<int>> refl_;
  std::vector<RootAutomorphism> aut_gens_;
};

/// Builds A_n (n >= 1), B_n and C_n (n >= 2), D_n (n >= 3), F4, G2 or A1xA1.
/// `label` is the family letter ("B"), a full label ("F4"), or "A1xA1".
RootSystem build_root_system(std::string_view label, int rank);
/// Parses labels such as "B3", "F4", "A1xA1".
RootSystem parse_root_system(std::string_view label);

/// Indices i with a nonzero coefficient of the i-th simple root (0-based).
std::vector<int> support(const RootSystem& phi, const QVector& rho);
QVector coroot(const RootSystem& phi, const QVector& rho);
/// s_rho(sigma) = sigma - (sigma, rho coroot) rho.
QVector reflect(const QVector& rho, const QVector& sigma);

struct RootSubsystem {
  std::vector<int> roots;
  /// Simple system of the subsystem, positive with respect to the parent.
  std::vector<int> basis;
  std::string type_tag;
};

/// Roots of phi in the rational plane spanned by gamma and beta.
RootSubsystem rank2_subsystem(const RootSystem& phi, const QVector& gamma, const QVector& beta);
RootSubsystem rank2_subsystem(const RootSystem& phi, int gamma, int beta);

/// Roots in the rational span of the given roots, with a simple system.
RootSubsystem span_subsystem(const RootSystem& phi, const std::vector<int>& generators);

std::vector<QVector> weyl_orbit(const RootSystem& phi, const QVector& lambda);
/// The dominant element of the Weyl orbit of v.
QVector dominant_representative(const RootSystem& phi, QVector v);
std::vector<QVector> fundamental_weights(const RootSystem& phi);

/// True iff some proper subset S of the simple roots gives
/// (positive roots outside Phi_S) in psi, and psi inside Phi_S union those.
bool parabolic_sandwich_exists(const RootSystem& phi, const RootSet& psi);

/// Precomputed (Levi roots, unipotent roots) for every proper subset S.
struct ParabolicTable {
  std::vector<std::pair<RootSet, RootSet>> levi_and_nilradical;
};
ParabolicTable parabolic_table(const RootSystem& phi);
bool parabolic_sandwich_exists(const ParabolicTable& table, const RootSet& psi);

/// Orthogonal transformation of the ambient space together with a reduced
/// word in the simple reflections (0-based indices).
struct WeylElement {
  QMatrix matrix;
  std::vector<int> word;
};

WeylElement weyl_identity(const RootSystem& phi);
WeylElement simple_reflection(const RootSystem& phi, int i);
WeylElement reflection(const RootSystem& phi, const QVector& rho);
WeylElement compose(const RootSystem& phi, const WeylElement& a, const WeylElement& b);
/// Recomputes a reduced word for an ambient matrix in the Weyl group.
std::vector<int> reduced_word(const RootSystem& phi, const QMatrix& matrix);
std::vector<int> root_permutation(const RootSystem& phi, const QMatrix& matrix);

bool is_additively_closed(const RootSystem& phi, const RootSet& s);
RootSet additive_closure(const RootSystem& phi, RootSet s);
std::vector<int> members(const RootSet& s, int num_roots);

/// Canonical Dynkin label of a Cartan matrix given as A(i,j) = (a_i, a_j coroot).
/// Components are joined with "x" in a canonical order; A1=B1=C1, C2=B2 and
/// D3=A3 are normalized. Returns nullopt for matrices that are not of the
/// supported finite types.
std::optional<std::string> cartan_type(const MatrixX<int>& a);
/// Normalizes a single family/rank pair, for example ('C', 2) -> "B2".
std::string canonical_type_name(char family, int rank);

}  // namespace twoorbit
