#include "krein/dilation.hpp"

#include <algorithm>
#include <cmath>

namespace krein {

BlockVector::BlockVector(Signature base) : base_(base) {}

BlockVector::BlockVector(Signature base, std::vector<Vector> blocks)
    : base_(base), blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) {
    if (b.size() != base_.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "block length does not match " + to_string(base_));
    }
  }
  trim();
}

BlockVector BlockVector::embed(Signature base, const Vector& v) {
  return BlockVector(base, {v});
}

void BlockVector::trim() {
  while (!blocks_.empty() && blocks_.back().isZero(0.0)) blocks_.pop_back();
}

Vector BlockVector::block(int i) const {
  if (i < support()) return blocks_[i];
  return Vector::Zero(base_.dim());
}

Vector BlockVector::project() const { return block(0); }

double BlockVector::squared_norm() const {
  double s = 0.0;
  for (const auto& b : blocks_) s += b.squaredNorm();
  return s;
}

Complex dilation_hat_product(const Signature& base, const BlockVector& x, const BlockVector& y) {
  if (!(x.base() == base) || !(y.base() == base)) {
    throw Error(ErrorCode::DimensionMismatch, "block vectors over different base spaces");
  }
  Complex sum = indefinite_product(base, x.block(0), y.block(0));
  const int n = std::min(x.support(), y.support());
  for (int k = 1; k < n; ++k) sum -= y.blocks()[k].dot(x.blocks()[k]);
  return sum;
}

Matrix defect_root(const KreinOperator& t, double tol) {
  if (!t.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, "defect root needs a square operator");
  }
  const double norm = operator_norm(t.matrix());
  const double cut = tol * (1.0 + norm * norm);
  Eigen::SelfAdjointEigenSolver<Matrix> es(domain_defect(t));
  RealVector lambda = es.eigenvalues();
  if (lambda.size() > 0 && lambda(0) < -cut) {
    throw Error(ErrorCode::NotNoncontraction,
                "defect T*JT - J has eigenvalue " + std::to_string(lambda(0)));
  }
  lambda = lambda.cwiseMax(0.0).cwiseSqrt();
  const Matrix& q = es.eigenvectors();
  return hermitian_part(q * lambda.cast<Complex>().asDiagonal() * q.adjoint());
}

DilationOperator::DilationOperator(KreinOperator t, double tol)
    : t_(std::move(t)), d_(defect_root(t_, tol)) {}

BlockVector apply_dilation(const DilationOperator& dil, const BlockVector& x) {
  if (!(x.base() == dil.base())) {
    throw Error(ErrorCode::DimensionMismatch, "block vector base does not match the dilation");
  }
  const Vector x1 = x.project();
  std::vector<Vector> out;
  out.reserve(x.support() + 1);
  out.push_back(dil.t().matrix() * x1);
  out.push_back(dil.d() * x1);
  for (int k = 1; k < x.support(); ++k) out.push_back(x.blocks()[k]);
  return BlockVector(dil.base(), std::move(out));
}

Signature truncated_signature(const Signature& base, int depth) {
  return Signature(base.n_plus, base.n_minus + (depth - 1) * base.dim());
}

KreinOperator truncate_dilation(const DilationOperator& dil, int depth) {
  if (depth < 2) {
    throw Error(ErrorCode::InvalidArgument, "truncation depth must be at least 2");
  }
  const int n = dil.base().dim();
  Matrix m = Matrix::Zero(depth * n, depth * n);
  m.block(0, 0, n, n) = dil.t().matrix();
  m.block(n, 0, n, n) = dil.d();
  for (int k = 2; k < depth; ++k) {
    m.block(k * n, (k - 1) * n, n, n).setIdentity();
  }
  return KreinOperator(truncated_signature(dil.base(), depth), std::move(m));
}

AngularOperator pushdown_subspace(const AngularOperator& khat, int depth) {
  if (depth < 2) {
    throw Error(ErrorCode::InvalidArgument, "truncation depth must be at least 2");
  }
  if (!khat.is_maximal()) {
    throw Error(ErrorCode::InvalidArgument, "pushdown needs a maximal positive subspace");
  }
  // minus dim of the section = depth * n- + (depth - 1) * n+
  const Signature& big = khat.space();
  const int rest = big.n_minus - (depth - 1) * big.n_plus;
  if (rest < 0 || rest % depth != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                to_string(big) + " is not a depth-" + std::to_string(depth) + " section");
  }
  const Signature base(big.n_plus, rest / depth);
  return AngularOperator(base, khat.k().topRows(base.n_minus));
}

}  // namespace krein
