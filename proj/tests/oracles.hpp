// Test-only reference computations. Each one avoids the code path it is used
// to check (no QR orthonormalization, no library eigen-helpers, no graph
// formulas).
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "krein/core.hpp"

namespace krein::oracle {

/// sum conj(y_i) s_i x_i, written out.
inline Complex product(const Signature& sig, const Vector& x, const Vector& y) {
  Complex acc = 0.0;
  for (int i = 0; i < sig.dim(); ++i) {
    const double s = i < sig.n_plus ? 1.0 : -1.0;
    acc += std::conj(y(i)) * s * x(i);
  }
  return acc;
}

/// Positivity of span(C) from the generalized eigenproblem
/// (C^*JC) v = mu (C^*C) v: the span is nonnegative iff min mu >= -tol.
inline double min_generalized_gram_eig(const Signature& sig, const Matrix& c) {
  if (c.cols() == 0) return 0.0;
  Matrix jc = c;
  for (int i = sig.n_plus; i < sig.dim(); ++i) jc.row(i) *= -1.0;
  Matrix g = c.adjoint() * jc;
  g = (g + g.adjoint()).eval() * 0.5;
  Matrix m = c.adjoint() * c;
  m = (m + m.adjoint()).eval() * 0.5;
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(g, m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Largest principal angle between two lines.
inline double line_angle(const Vector& u, const Vector& v) {
  const double c = std::abs(u.dot(v)) / (u.norm() * v.norm());
  return std::acos(std::min(1.0, c));
}

/// Membership of y in span(C) by least squares.
inline double distance_to_span(const Matrix& c, const Vector& y) {
  if (c.cols() == 0) return y.norm();
  const Vector coef = c.colPivHouseholderQr().solve(y);
  return (c * coef - y).norm();
}

}  // namespace krein::oracle
