#include "krein/core.hpp"

#include <algorithm>
#include <cmath>

namespace krein {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotNoncontraction: return "NotNoncontraction";
    case ErrorCode::NotIsometry: return "NotIsometry";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotGraph: return "NotGraph";
    case ErrorCode::NotContraction: return "NotContraction";
    case ErrorCode::DegenerateIntersection: return "DegenerateIntersection";
    case ErrorCode::SingularPivot: return "SingularPivot";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Defective: return "Defective";
    case ErrorCode::Precondition: return "Precondition";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

Signature::Signature(int plus, int minus) : n_plus(plus), n_minus(minus) {
  if (plus < 0 || minus < 0) {
    throw Error(ErrorCode::InvalidArgument, "signature dimensions must be nonnegative");
  }
}

std::string to_string(const Signature& sig) {
  return "(" + std::to_string(sig.n_plus) + "," + std::to_string(sig.n_minus) + ")";
}

RealVector fundamental_signs(const Signature& sig) {
  RealVector s(sig.dim());
  s.head(sig.n_plus).setOnes();
  s.tail(sig.n_minus).setConstant(-1.0);
  return s;
}

RealMatrix fundamental_symmetry(const Signature& sig) {
  return fundamental_signs(sig).asDiagonal();
}

Complex indefinite_product(const Signature& sig, const Vector& x, const Vector& y) {
  if (x.size() != sig.dim() || y.size() != sig.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector length does not match signature " + to_string(sig));
  }
  // Eigen's dot conjugates its first argument: (Jy).dot(x) = sum conj(Jy)_i x_i.
  const Vector jy = fundamental_signs(sig).cast<Complex>().cwiseProduct(y);
  return jy.dot(x);
}

KreinOperator::KreinOperator(Signature domain, Signature codomain, Matrix matrix)
    : domain_(domain), codomain_(codomain), matrix_(std::move(matrix)) {
  if (matrix_.rows() != codomain_.dim() || matrix_.cols() != domain_.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix is " + std::to_string(matrix_.rows()) + "x" +
                    std::to_string(matrix_.cols()) + " but signatures are " +
                    to_string(codomain_) + " <- " + to_string(domain_));
  }
  if (!matrix_.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "operator has non-finite entries");
  }
}

KreinOperator::KreinOperator(Signature space, Matrix matrix)
    : KreinOperator(space, space, std::move(matrix)) {}

namespace {

// J_left * M * J_right without materializing the diagonal matrices.
Matrix sandwich(const Signature& left, const Matrix& m, const Signature& right) {
  const RealVector l = fundamental_signs(left);
  const RealVector r = fundamental_signs(right);
  return l.cast<Complex>().asDiagonal() * m * r.cast<Complex>().asDiagonal();
}

}  // namespace

KreinOperator j_adjoint(const KreinOperator& t) {
  return KreinOperator(t.codomain(), t.domain(),
                       sandwich(t.domain(), t.matrix().adjoint(), t.codomain()));
}

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double min_hermitian_eig(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Matrix domain_defect(const KreinOperator& t) {
  const Vector jc = fundamental_signs(t.codomain()).cast<Complex>();
  const Matrix jt = jc.asDiagonal() * t.matrix();
  Matrix d = t.matrix().adjoint() * jt;
  d.diagonal() -= fundamental_signs(t.domain()).cast<Complex>();
  return hermitian_part(d);
}

Matrix codomain_defect(const KreinOperator& t) {
  const Vector jd = fundamental_signs(t.domain()).cast<Complex>();
  Matrix d = -(t.matrix() * jd.asDiagonal() * t.matrix().adjoint());
  d.diagonal() += fundamental_signs(t.codomain()).cast<Complex>();
  return hermitian_part(d);
}

Classification classify(const KreinOperator& t, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "classification tolerance must be positive");
  }
  Classification c;
  const double norm = operator_norm(t.matrix());
  c.tolerance_used = tol * (1.0 + norm * norm);

  const Matrix dd = domain_defect(t);
  const Matrix cd = codomain_defect(t);
  c.min_domain_defect_eig = min_hermitian_eig(dd);
  c.min_codomain_defect_eig = min_hermitian_eig(-cd);
  c.max_isometry_residual = max_abs(dd);
  c.max_coisometry_residual = max_abs(cd);

  c.is_noncontraction = c.min_domain_defect_eig >= -c.tolerance_used;
  c.is_isometric_embedding = c.max_isometry_residual <= c.tolerance_used;

  if (!t.is_square()) {
    c.note = "rectangular operator " + to_string(t.codomain()) + " <- " +
             to_string(t.domain()) +
             ": isometry, binoncontraction and unitarity require equal signatures";
    return c;
  }
  c.is_isometry = c.is_noncontraction && c.is_isometric_embedding;
  c.is_binoncontraction =
      c.is_noncontraction && c.min_codomain_defect_eig >= -c.tolerance_used;
  c.is_unitary = c.is_isometry && c.is_binoncontraction &&
                 c.max_coisometry_residual <= c.tolerance_used;
  return c;
}

}  // namespace krein
