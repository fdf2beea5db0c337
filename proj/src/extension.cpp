#include "krein/extension.hpp"

#include <algorithm>
#include <cmath>

namespace krein {

namespace {

Matrix j_of(const Signature& sig) {
  return fundamental_signs(sig).cast<Complex>().asDiagonal();
}

double cutoff_for(const RealVector& lambda, const SpectralCutoff& c) {
  const double top = lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0;
  return std::max(c.abs_tol, c.rel_tol * top);
}

// Permutation taking plus-first coordinates of (S (+) extra) with extra
// positive to the natural layout [S+, S-, extra].
std::vector<int> plus_first_order(const Signature& s, int extra) {
  std::vector<int> order;
  order.reserve(s.dim() + extra);
  for (int i = 0; i < s.n_plus; ++i) order.push_back(i);
  for (int i = 0; i < extra; ++i) order.push_back(s.dim() + i);
  for (int i = 0; i < s.n_minus; ++i) order.push_back(s.n_plus + i);
  return order;
}

Matrix permuted(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

}  // namespace

PositivePart positive_part_root(const Matrix& s, SpectralCutoff cutoff) {
  const int n = static_cast<int>(s.rows());
  PositivePart out{Matrix::Zero(n, n), Matrix::Zero(n, n), 0};
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(s));
  const RealVector& lambda = es.eigenvalues();
  const double cut = cutoff_for(lambda, cutoff);
  for (int i = 0; i < n; ++i) {
    if (lambda(i) <= cut) continue;
    const Vector v = es.eigenvectors().col(i);
    const Matrix proj = v * v.adjoint();
    out.p_plus += proj;
    out.a += std::sqrt(lambda(i)) * proj;
    ++out.rank;
  }
  out.p_plus = hermitian_part(out.p_plus);
  out.a = hermitian_part(out.a);
  return out;
}

PolarDecomposition polar(const Matrix& m, SpectralCutoff cutoff) {
  const int n = static_cast<int>(m.cols());
  PolarDecomposition out{Matrix::Zero(m.rows(), n), Matrix::Zero(n, n)};
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m.adjoint() * m));
  const RealVector& lambda = es.eigenvalues();
  // M^*M carries squared singular values; cut on the square root scale.
  const RealVector sigma = lambda.cwiseMax(0.0).cwiseSqrt();
  const double cut = cutoff_for(sigma, cutoff);
  Matrix abs_pinv = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const Vector v = es.eigenvectors().col(i);
    out.abs += sigma(i) * (v * v.adjoint());
    if (sigma(i) > cut) abs_pinv += (v * v.adjoint()) / sigma(i);
  }
  out.abs = hermitian_part(out.abs);
  out.u = m * abs_pinv;
  return out;
}

Matrix defect_isometry(const Matrix& p_plus) {
  const int n = static_cast<int>(p_plus.rows());
  if (n == 0) return Matrix(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(p_plus));
  std::vector<Vector> cols;
  for (int i = 0; i < n; ++i) {
    if (es.eigenvalues()(i) >= 0.5) continue;
    Vector v = es.eigenvectors().col(i);
    for (int r = 0; r < n; ++r) {
      if (std::abs(v(r)) > 1e-12) {
        v *= std::conj(v(r)) / std::abs(v(r));
        break;
      }
    }
    cols.push_back(std::move(v));
  }
  Matrix b(n, static_cast<int>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) b.col(c) = cols[c];
  return b;
}

void assemble_vhat(ExtensionResult& res) {
  const Signature& h = res.v.domain();
  const Signature& k = res.v.codomain();
  const int dh = h.dim(), dk = k.dim(), dm = static_cast<int>(res.b.cols());
  Matrix blocks = Matrix::Zero(dk + dm, dh + dk);
  blocks.block(0, 0, dk, dh) = res.v.matrix();
  blocks.block(0, dh, dk, dk) = res.a;
  blocks.block(dk, dh, dm, dk) = res.b.adjoint();

  res.domain_order = plus_first_order(h, dk);
  res.codomain_order = plus_first_order(k, dm);
  res.vhat = KreinOperator(Signature(h.n_plus + dk, h.n_minus), Signature(k.n_plus + dm, k.n_minus),
                           permuted(blocks, res.codomain_order, res.domain_order));
  res.vhat_blocks = std::move(blocks);
}

ExtensionResult build_extension(const KreinOperator& v, double tol, SpectralCutoff cutoff) {
  const double norm = operator_norm(v.matrix());
  const double iso = max_abs(domain_defect(v));
  if (iso > tol * (1.0 + norm * norm)) {
    throw Error(ErrorCode::NotIsometry,
                "|V*JV - J| = " + std::to_string(iso) + " exceeds tolerance");
  }
  const Matrix delta = codomain_defect(v);
  PositivePart pp = positive_part_root(delta, cutoff);
  Matrix b = defect_isometry(pp.p_plus);
  PolarDecomposition jv = polar(j_of(v.codomain()) * v.matrix(), cutoff);

  ExtensionResult res{v,
                      delta,
                      std::move(pp.p_plus),
                      std::move(pp.a),
                      std::move(b),
                      std::move(jv),
                      Matrix(),
                      v,  // placeholder until assembled
                      {},
                      {},
                      {}};
  assemble_vhat(res);
  res.residuals = verify_extension(res, tol).residuals;
  return res;
}

ExtensionReport verify_extension(const ExtensionResult& res, double tol) {
  ExtensionReport rep;
  const Matrix jh = j_of(res.v.domain());
  const Matrix jk = j_of(res.v.codomain());
  const Matrix& vm = res.v.matrix();
  const Matrix& a = res.a;
  const Matrix& b = res.b;
  const Matrix& p = res.p_plus;
  const int dk = res.dim_k();
  const double vnorm = operator_norm(vm);
  rep.scale = 1.0 + vnorm * vnorm;
  rep.tol = tol;

  auto& r = rep.residuals;
  r["v_star_j_a"] = max_abs(vm.adjoint() * jk * a);
  r["a_b"] = max_abs(a * b);
  r["a_j_a_minus_p_plus"] = max_abs(a * jk * a - p);
  r["vhat_isometry"] = max_abs(domain_defect(res.vhat));
  r["vhat_codomain_defect_min_eig"] = min_hermitian_eig(-codomain_defect(res.vhat));

  // Supporting identities.
  const Matrix ik = Matrix::Identity(dk, dk);
  r["a_p_plus_minus_a"] = std::max(max_abs(a * p - a), max_abs(p * a - a));
  r["b_star_b_minus_i"] = max_abs(b.adjoint() * b - Matrix::Identity(b.cols(), b.cols()));
  r["b_b_star_minus_complement"] = max_abs(b * b.adjoint() - (ik - p));
  r["delta_j_delta_minus_delta"] = max_abs(res.delta * jk * res.delta - res.delta);
  r["j_adjoint_v_p_plus"] = max_abs(jh * vm.adjoint() * jk * p);
  r["p_plus_polar_u"] = max_abs(p * res.jv_polar.u);
  r["polar_reconstruction"] = max_abs(res.jv_polar.u * res.jv_polar.abs - jk * vm);
  r["a_squared_minus_delta_min_eig"] = min_hermitian_eig(a * a - res.delta);

  const double bound = tol * rep.scale;
  rep.passed = r["v_star_j_a"] <= bound && r["a_b"] <= bound &&
               r["a_j_a_minus_p_plus"] <= bound && r["vhat_isometry"] <= bound &&
               r["vhat_codomain_defect_min_eig"] >= -bound;
  return rep;
}

SubspaceBasis intersect_and_project(const SubspaceBasis& l, const Signature& target, int extra,
                                    double tol) {
  if (l.space().dim() != target.dim() + extra) {
    throw Error(ErrorCode::DimensionMismatch, "subspace does not live on target (+) extra");
  }
  const Matrix q = l.orthonormal();
  const int d = l.dim();
  Matrix null_basis(d, 0);
  if (extra == 0) {
    null_basis = Matrix::Identity(d, d);
  } else if (d > 0) {
    const Matrix e = q.middleRows(target.n_plus, extra);
    Eigen::JacobiSVD<Matrix> svd(e, Eigen::ComputeFullV);
    const RealVector& s = svd.singularValues();
    const int rank = static_cast<int>((s.array() > tol).count());
    null_basis = svd.matrixV().rightCols(d - rank);
  }
  if (null_basis.cols() != target.n_plus) {
    throw Error(ErrorCode::DegenerateIntersection,
                "intersection has dimension " + std::to_string(null_basis.cols()) +
                    ", expected " + std::to_string(target.n_plus));
  }
  const Matrix slice = q * null_basis;
  Matrix cols(target.dim(), slice.cols());
  cols.topRows(target.n_plus) = slice.topRows(target.n_plus);
  cols.bottomRows(target.n_minus) = slice.bottomRows(target.n_minus);
  return SubspaceBasis(target, std::move(cols));
}

SubspaceBasis pullback_subspace(const ExtensionResult& res, const SubspaceBasis& l, double tol) {
  if (!(l.space() == res.vhat.domain())) {
    throw Error(ErrorCode::DimensionMismatch, "subspace is not on the extension's domain");
  }
  return intersect_and_project(l, res.v.domain(), res.dim_k(), tol);
}

SubspaceBasis codomain_pullback_subspace(const ExtensionResult& res, const SubspaceBasis& l,
                                         double tol) {
  if (l.space().dim() != res.vhat.codomain().dim()) {
    throw Error(ErrorCode::DimensionMismatch, "subspace is not on the extension's codomain");
  }
  const SubspaceBasis read(res.vhat.codomain(), l.columns());
  return intersect_and_project(read, res.v.codomain(), res.dim_m(), tol);
}

}  // namespace krein
