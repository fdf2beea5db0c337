#include "krein/subspace.hpp"

#include <algorithm>
#include <cmath>

namespace krein {

namespace {

int numerical_rank(const Eigen::JacobiSVD<Matrix>& svd) {
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = kRankTol * s(0);
  return static_cast<int>((s.array() > cut).count());
}

}  // namespace

SubspaceBasis::SubspaceBasis(Signature space, Matrix columns)
    : space_(space), columns_(std::move(columns)) {
  if (columns_.rows() != space_.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "basis has " + std::to_string(columns_.rows()) + " rows, space " +
                    to_string(space_) + " has dimension " + std::to_string(space_.dim()));
  }
  if (!columns_.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "basis has non-finite entries");
  }
  if (columns_.cols() > 0) {
    Eigen::JacobiSVD<Matrix> svd(columns_);
    if (numerical_rank(svd) != columns_.cols()) {
      throw Error(ErrorCode::InvalidArgument, "basis columns are not linearly independent");
    }
  }
}

Matrix SubspaceBasis::orthonormal() const {
  if (columns_.cols() == 0) return Matrix(columns_.rows(), 0);
  Eigen::HouseholderQR<Matrix> qr(columns_);
  return qr.householderQ() * Matrix::Identity(columns_.rows(), columns_.cols());
}

AngularOperator::AngularOperator(Signature space, Matrix k, double norm_tol)
    : AngularOperator(space, k, Matrix::Identity(space.n_plus, k.cols()), norm_tol) {
  if (k_.cols() != space.n_plus) {
    throw Error(ErrorCode::DimensionMismatch,
                "maximal angular operator needs n_plus columns");
  }
}

AngularOperator::AngularOperator(Signature space, Matrix k, Matrix domain_basis,
                                 double norm_tol)
    : space_(space), k_(std::move(k)), domain_basis_(std::move(domain_basis)) {
  if (k_.rows() != space_.n_minus || domain_basis_.rows() != space_.n_plus ||
      domain_basis_.cols() != k_.cols() || k_.cols() > space_.n_plus) {
    throw Error(ErrorCode::DimensionMismatch, "angular operator shape does not match " +
                                                  to_string(space_));
  }
  const Matrix gram = domain_basis_.adjoint() * domain_basis_;
  if (max_abs(gram - Matrix::Identity(gram.rows(), gram.cols())) > 1e-10) {
    throw Error(ErrorCode::InvalidArgument, "domain basis is not orthonormal");
  }
  if (norm() > 1.0 + norm_tol) {
    throw Error(ErrorCode::NotContraction,
                "angular operator norm " + std::to_string(norm()) + " exceeds 1");
  }
}

SubspaceBasis angular_to_basis(const AngularOperator& a) {
  Matrix cols(a.space().dim(), a.dim());
  cols.topRows(a.space().n_plus) = a.domain_basis();
  cols.bottomRows(a.space().n_minus) = a.k();
  return SubspaceBasis(a.space(), std::move(cols));
}

AngularOperator basis_to_angular(const SubspaceBasis& b, double tol) {
  const Signature& sig = b.space();
  if (!is_positive(b, tol)) {
    throw Error(ErrorCode::NotPositive, "subspace contains negative vectors");
  }
  const int d = b.dim();
  if (d > sig.n_plus) {
    throw Error(ErrorCode::NotGraph, "positive subspace cannot exceed dim H+");
  }
  // Orthonormalize first so that the rank test on the plus part is scale free.
  const Matrix q = b.orthonormal();
  const Matrix plus = q.topRows(sig.n_plus);
  const Matrix minus = q.bottomRows(sig.n_minus);
  if (d == 0) {
    return AngularOperator(sig, Matrix(sig.n_minus, 0), Matrix(sig.n_plus, 0));
  }

  // plus = U S W^*: new coordinates c = S W^* a give plus-part U c and
  // minus-part (minus W S^-1) c.
  Eigen::JacobiSVD<Matrix> svd(plus, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  if (s(d - 1) <= kRankTol * std::max(1.0, s(0))) {
    throw Error(ErrorCode::NotGraph, "plus-part projection is rank deficient");
  }
  const Matrix w_over_s = svd.matrixV() * s.cwiseInverse().cast<Complex>().asDiagonal();
  Matrix k = minus * w_over_s;
  const double norm_tol = std::max(1e-8, 10 * tol);
  if (d == sig.n_plus) {
    // Maximal: express K on H+ directly, independent of the SVD phases.
    k = k * svd.matrixU().adjoint();
    return AngularOperator(sig, std::move(k), norm_tol);
  }
  return AngularOperator(sig, std::move(k), svd.matrixU(), norm_tol);
}

Matrix normalized_gram(const SubspaceBasis& b) {
  const Matrix q = b.orthonormal();
  const Vector j = fundamental_signs(b.space()).cast<Complex>();
  return hermitian_part(q.adjoint() * j.asDiagonal() * q);
}

bool is_positive(const SubspaceBasis& b, double tol) {
  return min_hermitian_eig(normalized_gram(b)) >= -tol;
}

bool is_maximal_positive(const SubspaceBasis& b, double tol) {
  return b.dim() == b.space().n_plus && is_positive(b, tol);
}

double mapping_residual(const KreinOperator& t, const SubspaceBasis& from,
                        const SubspaceBasis& into) {
  if (from.space().dim() != t.domain().dim() || into.space().dim() != t.codomain().dim()) {
    throw Error(ErrorCode::DimensionMismatch, "subspaces do not live on the operator's spaces");
  }
  if (from.dim() == 0) return 0.0;
  const Matrix image = t.matrix() * from.orthonormal();
  const Matrix q = into.orthonormal();
  return operator_norm(image - q * (q.adjoint() * image));
}

double invariance_residual(const KreinOperator& t, const SubspaceBasis& b) {
  if (t.domain().dim() != t.codomain().dim()) {
    throw Error(ErrorCode::DimensionMismatch, "invariance needs a square operator");
  }
  return mapping_residual(t, b, b);
}

bool is_invariant(const KreinOperator& t, const SubspaceBasis& b, double tol) {
  return invariance_residual(t, b) <= tol * (1.0 + operator_norm(t.matrix()));
}

double subspace_distance(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.space().dim() != b.space().dim() || a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "subspaces must share ambient space and dimension");
  }
  if (a.dim() == 0) return 0.0;
  const Matrix qa = a.orthonormal();
  const Matrix qb = b.orthonormal();
  // sin and cos of the largest angle, each accurate in its own regime.
  const double sine = std::min(1.0, operator_norm(qb - qa * (qa.adjoint() * qb)));
  Eigen::JacobiSVD<Matrix> svd(qa.adjoint() * qb);
  const double cosine = std::min(1.0, svd.singularValues().minCoeff());
  return std::atan2(sine, cosine);
}

SubspaceBasis flip_signature(const SubspaceBasis& b) {
  const Signature& sig = b.space();
  Matrix cols(sig.dim(), b.dim());
  cols.topRows(sig.n_minus) = b.columns().bottomRows(sig.n_minus);
  cols.bottomRows(sig.n_plus) = b.columns().topRows(sig.n_plus);
  return SubspaceBasis(Signature(sig.n_minus, sig.n_plus), std::move(cols));
}

}  // namespace krein
