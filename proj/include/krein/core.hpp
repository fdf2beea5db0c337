#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace krein {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NotNoncontraction,
  NotIsometry,
  NotPositive,
  NotGraph,
  NotContraction,
  DegenerateIntersection,
  SingularPivot,
  NotFound,
  Defective,
  Precondition,
};

const char* to_string(ErrorCode code);

/// Every failure in the library is reported through this exception; the code
/// lets callers (the CLI in particular) map failures onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Fundamental decomposition H = H+ (+) H- of a coordinate space. The first
/// n_plus coordinates span H+, the remaining n_minus span H-.
struct Signature {
  int n_plus = 0;
  int n_minus = 0;

  Signature() = default;
  Signature(int plus, int minus);

  int dim() const { return n_plus + n_minus; }
  bool operator==(const Signature&) const = default;
};

std::string to_string(const Signature& sig);

/// diag(+1 x n_plus, -1 x n_minus)
RealMatrix fundamental_symmetry(const Signature& sig);
RealVector fundamental_signs(const Signature& sig);

/// <x,y> = (x, Jy), linear in x and conjugate-linear in y.
Complex indefinite_product(const Signature& sig, const Vector& x, const Vector& y);

/// A bounded operator between two (possibly different) Krein spaces.
class KreinOperator {
 public:
  KreinOperator(Signature domain, Signature codomain, Matrix matrix);
  /// Square operator on a single space.
  KreinOperator(Signature space, Matrix matrix);

  const Signature& domain() const { return domain_; }
  const Signature& codomain() const { return codomain_; }
  const Matrix& matrix() const { return matrix_; }
  bool is_square() const { return domain_ == codomain_; }

 private:
  Signature domain_;
  Signature codomain_;
  Matrix matrix_;
};

/// T^dagger = J_dom T^* J_cod, so that <Tx,y>_cod = <x,T^dagger y>_dom.
KreinOperator j_adjoint(const KreinOperator& t);

/// T^* J_cod T - J_dom, symmetrized.
Matrix domain_defect(const KreinOperator& t);

/// J_cod - T J_dom T^*, symmetrized.
Matrix codomain_defect(const KreinOperator& t);

struct Classification {
  bool is_noncontraction = false;
  bool is_isometry = false;
  bool is_binoncontraction = false;
  bool is_unitary = false;
  // Rectangular variant of is_isometry: T^* J_cod T = J_dom without
  // requiring equal signatures.
  bool is_isometric_embedding = false;
  double min_domain_defect_eig = 0.0;
  double min_codomain_defect_eig = 0.0;  // of T J_dom T^* - J_cod
  double max_isometry_residual = 0.0;
  double max_coisometry_residual = 0.0;
  double tolerance_used = 0.0;  // tol * (1 + |T|^2)
  std::string note;
};

inline constexpr double kDefaultClassifyTol = 1e-9;

Classification classify(const KreinOperator& t, double tol = kDefaultClassifyTol);

// Small numerical helpers shared across modules.

Matrix hermitian_part(const Matrix& m);
double operator_norm(const Matrix& m);
double max_abs(const Matrix& m);
/// Smallest eigenvalue of a Hermitian matrix (symmetrized first). Returns 0
/// for empty matrices.
double min_hermitian_eig(const Matrix& m);

}  // namespace krein
