#pragma once

#include "krein/core.hpp"

namespace krein {

inline constexpr double kRankTol = 1e-10;

/// A subspace L of a Krein space given by a full-column-rank basis.
class SubspaceBasis {
 public:
  SubspaceBasis(Signature space, Matrix columns);

  const Signature& space() const { return space_; }
  const Matrix& columns() const { return columns_; }
  int dim() const { return static_cast<int>(columns_.cols()); }

  /// Orthonormal basis of the same span.
  Matrix orthonormal() const;

 private:
  Signature space_;
  Matrix columns_;
};

/// Graph representation L = { x + Kx : x in L+ } of a positive subspace.
///
/// L+ is spanned by the orthonormal columns of domain_basis (n_plus x k) and
/// K (n_minus x k) acts on coordinates with respect to that basis. For a
/// maximal positive subspace k = n_plus and domain_basis is the identity, so K
/// is the angular operator H+ -> H- in the usual sense.
class AngularOperator {
 public:
  /// Maximal case, domain_basis = I.
  AngularOperator(Signature space, Matrix k, double norm_tol = 1e-8);
  AngularOperator(Signature space, Matrix k, Matrix domain_basis, double norm_tol = 1e-8);

  const Signature& space() const { return space_; }
  const Matrix& k() const { return k_; }
  const Matrix& domain_basis() const { return domain_basis_; }
  int dim() const { return static_cast<int>(k_.cols()); }
  bool is_maximal() const { return dim() == space_.n_plus; }
  double norm() const { return operator_norm(k_); }

 private:
  Signature space_;
  Matrix k_;
  Matrix domain_basis_;
};

SubspaceBasis angular_to_basis(const AngularOperator& a);

/// Throws NotPositive when span(B) is not nonnegative and NotGraph when its
/// projection onto H+ loses rank.
AngularOperator basis_to_angular(const SubspaceBasis& b, double tol = 1e-10);

/// Gram matrix Q^* J Q of an orthonormal basis Q of span(B); its eigenvalues
/// lie in [-1, 1] independently of the basis scaling.
Matrix normalized_gram(const SubspaceBasis& b);

bool is_positive(const SubspaceBasis& b, double tol = 1e-10);
bool is_maximal_positive(const SubspaceBasis& b, double tol = 1e-10);

/// |(I - P_L) T Q| for an orthonormal basis Q of L.
double invariance_residual(const KreinOperator& t, const SubspaceBasis& b);
/// |(I - P_M) T Q_L|: how far T maps L outside M (T may be rectangular).
double mapping_residual(const KreinOperator& t, const SubspaceBasis& from,
                        const SubspaceBasis& into);

/// invariance_residual <= tol * (1 + |T|)
bool is_invariant(const KreinOperator& t, const SubspaceBasis& b, double tol = 1e-10);

/// Largest principal angle (radians) between two subspaces of equal
/// dimension.
double subspace_distance(const SubspaceBasis& a, const SubspaceBasis& b);

/// The same subspace viewed in the anti-space (J -> -J). Coordinates are
/// rotated so the new plus part comes first.
SubspaceBasis flip_signature(const SubspaceBasis& b);

}  // namespace krein
