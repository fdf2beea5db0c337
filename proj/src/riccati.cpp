#include "krein/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "krein/generate.hpp"

namespace krein {

Matrix RiccatiBlocks::assemble() const {
  const int p = space.n_plus, q = space.n_minus;
  Matrix t(p + q, p + q);
  t.topLeftCorner(p, p) = t11;
  t.topRightCorner(p, q) = t12;
  t.bottomLeftCorner(q, p) = t21;
  t.bottomRightCorner(q, q) = t22;
  return t;
}

RiccatiBlocks block_decompose(const KreinOperator& t) {
  if (!t.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, "block decomposition needs a square operator");
  }
  const int p = t.domain().n_plus, q = t.domain().n_minus;
  const Matrix& m = t.matrix();
  return {t.domain(), m.topLeftCorner(p, p), m.topRightCorner(p, q), m.bottomLeftCorner(q, p),
          m.bottomRightCorner(q, q)};
}

Matrix riccati_map(const RiccatiBlocks& b, const Matrix& k) {
  if (k.rows() != b.space.n_minus || k.cols() != b.space.n_plus) {
    throw Error(ErrorCode::DimensionMismatch, "K must be n- x n+");
  }
  const Matrix pivot = b.t11 + b.t12 * k;
  const Matrix top = b.t21 + b.t22 * k;
  if (pivot.size() == 0) return top;
  Eigen::JacobiSVD<Matrix> svd(pivot, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0) || s(0) / smin > 1e12) {
    throw Error(ErrorCode::SingularPivot, "T11 + T12 K is numerically singular");
  }
  // top * pivot^{-1} = top V S^{-1} U^*
  return top * svd.matrixV() * s.cwiseInverse().cast<Complex>().asDiagonal() *
         svd.matrixU().adjoint();
}

double fixed_point_residual(const RiccatiBlocks& blocks, const Matrix& k) {
  try {
    return max_abs(riccati_map(blocks, k) - k);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularPivot) throw;
    return std::numeric_limits<double>::infinity();
  }
}

namespace {

struct Attempt {
  bool converged = false;
  Matrix k;
  int iterations = 0;
  std::string failure;
};

Attempt iterate(const RiccatiBlocks& blocks, Matrix k, const SolveOptions& opts) {
  Attempt a;
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  for (int it = 0; it < opts.max_iter; ++it) {
    Matrix next;
    try {
      next = riccati_map(blocks, k);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularPivot) throw;
      a.failure = "singular pivot at iteration " + std::to_string(it);
      a.iterations = it;
      return a;
    }
    const double step = max_abs(next - k);
    k = std::move(next);
    a.iterations = it + 1;
    if (step <= opts.fix_tol) {
      a.converged = true;
      a.k = std::move(k);
      return a;
    }
    if (step < best * (1.0 - 1e-12)) {
      best = step;
      since_best = 0;
    } else if (++since_best >= opts.stagnation_window) {
      a.failure = "stagnated at step " + std::to_string(step) + " after " +
                  std::to_string(it + 1) + " iterations";
      return a;
    }
  }
  a.failure = "no convergence in " + std::to_string(opts.max_iter) + " iterations";
  return a;
}

bool validate(const KreinOperator& t, const RiccatiBlocks& blocks, const Matrix& k,
              const SolveOptions& opts, SolveDiagnostics& diag) {
  diag.norm = operator_norm(k);
  diag.fixed_point_residual = fixed_point_residual(blocks, k);
  bool ok = diag.norm <= 1.0 + 1e-10;
  if (ok) {
    const SubspaceBasis graph = angular_to_basis(AngularOperator(t.domain(), k, 1e-10));
    diag.invariance_residual = invariance_residual(t, graph);
    ok = is_invariant(t, graph, opts.invariance_tol);
  }
  if (!ok) {
    diag.notes.push_back("candidate rejected: norm " + std::to_string(diag.norm) +
                         ", invariance residual " + std::to_string(diag.invariance_residual));
  }
  return ok;
}

}  // namespace

SolveResult find_invariant_maximal_positive(const KreinOperator& t, const SolveOptions& opts) {
  if (opts.max_iter < 1 || !(opts.fix_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "max_iter >= 1 and fix_tol > 0 required");
  }
  if (!t.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, "invariant subspaces need a square operator");
  }
  if (!classify(t).is_noncontraction) {
    throw Error(ErrorCode::NotNoncontraction, "operator is not a J-noncontraction");
  }
  const Signature& sig = t.domain();
  const RiccatiBlocks blocks = block_decompose(t);
  SolveDiagnostics diag;

  Matrix start = opts.start.value_or(Matrix::Zero(sig.n_minus, sig.n_plus));
  if (start.rows() != sig.n_minus || start.cols() != sig.n_plus) {
    throw Error(ErrorCode::DimensionMismatch, "start must be n- x n+");
  }
  Rng rng(opts.seed);
  for (int attempt = 0; attempt <= opts.restarts; ++attempt) {
    if (attempt > 0) {
      start = random_contraction(rng, sig.n_minus, sig.n_plus, rng.uniform(0.1, 0.9));
      diag.restarts_used = attempt;
    }
    Attempt a = iterate(blocks, start, opts);
    diag.iterations += a.iterations;
    if (!a.converged) {
      diag.notes.push_back("fixed point attempt " + std::to_string(attempt) + ": " + a.failure);
      continue;
    }
    if (validate(t, blocks, a.k, opts, diag)) {
      diag.strategy = "fixed_point";
      return {AngularOperator(sig, std::move(a.k), 1e-10), std::move(diag)};
    }
  }

  if (opts.use_oracle_fallback) {
    try {
      OracleResult o = eigen_oracle(t);
      if (validate(t, blocks, o.k.k(), opts, diag)) {
        diag.strategy = "eigen_oracle";
        return {std::move(o.k), std::move(diag)};
      }
    } catch (const Error& e) {
      diag.notes.push_back(std::string("eigen oracle: ") + e.what());
    }
  }
  std::string msg = "no maximal positive invariant subspace found;";
  for (const auto& n : diag.notes) msg += " [" + n + "]";
  throw Error(ErrorCode::NotFound, msg);
}

OracleResult eigen_oracle(const KreinOperator& t, double tol, double gap) {
  if (!t.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, "eigen oracle needs a square operator");
  }
  const Signature& sig = t.domain();
  const int n = sig.dim(), p = sig.n_plus;
  if (n > 16) {
    throw Error(ErrorCode::InvalidArgument, "eigen oracle is exhaustive; dimension too large");
  }
  Eigen::ComplexEigenSolver<Matrix> es(t.matrix());
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::Defective, "eigendecomposition failed");
  }
  Eigen::VectorXcd lambda = es.eigenvalues();
  Matrix x = es.eigenvectors();
  for (int j = 0; j < n; ++j) x.col(j).normalize();

  // Repeated eigenvalues: back-substitution gives nearly parallel vectors, so
  // take the eigenspace from the null space of T - mu instead and split it
  // J-orthogonally so every vector has a definite type.
  const double tnorm = operator_norm(t.matrix());
  const double merge = 1e-8 * (1.0 + tnorm);
  std::vector<int> cluster(n, -1);
  int clusters = 0;
  for (int i = 0; i < n; ++i) {
    if (cluster[i] >= 0) continue;
    cluster[i] = clusters;
    for (int j = i + 1; j < n; ++j)
      if (cluster[j] < 0 && std::abs(lambda(j) - lambda(i)) <= merge) cluster[j] = clusters;
    ++clusters;
  }
  const Matrix jm = fundamental_signs(sig).cast<Complex>().asDiagonal();
  for (int c = 0; c < clusters; ++c) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (cluster[i] == c) members.push_back(i);
    const int m = static_cast<int>(members.size());
    if (m == 1) continue;
    Complex mu = 0.0;
    for (int i : members) mu += lambda(i);
    mu /= static_cast<double>(m);
    Eigen::JacobiSVD<Matrix> null_svd(t.matrix() - mu * Matrix::Identity(n, n),
                                      Eigen::ComputeFullV);
    if (null_svd.singularValues()(n - m) > merge) {
      throw Error(ErrorCode::Defective, "eigenvalue " + std::to_string(mu.real()) + (mu.imag() < 0 ? "" : "+") +
                                            std::to_string(mu.imag()) +
                                            "i has fewer eigenvectors than its multiplicity");
    }
    const Matrix q = null_svd.matrixV().rightCols(m);
    Eigen::SelfAdjointEigenSolver<Matrix> split(hermitian_part(q.adjoint() * jm * q));
    const Matrix basis = q * split.eigenvectors();
    for (int k = 0; k < m; ++k) {
      x.col(members[k]) = basis.col(k);
      lambda(members[k]) = mu;
    }
  }
  Eigen::JacobiSVD<Matrix> svd(x);
  const RealVector& s = svd.singularValues();
  if (!(s(n - 1) > 0.0) || s(0) / s(n - 1) > 1e8) {
    throw Error(ErrorCode::Defective, "eigenvector matrix is numerically singular");
  }

  // All n-choose-p index subsets in lexicographic order, then stably sorted by
  // descending modulus product. Scores are quantized so equal products tie
  // deterministically.
  std::vector<std::vector<int>> subsets;
  std::vector<int> idx(p);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    subsets.push_back(idx);
    int i = p - 1;
    while (i >= 0 && idx[i] == n - p + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
  }
  auto score = [&](const std::vector<int>& sub) {
    double acc = 0.0;
    for (int i : sub) acc += std::log(std::abs(lambda(i)));
    return acc;
  };
  auto key = [&](double sc) -> long long {
    if (!std::isfinite(sc)) return std::numeric_limits<long long>::min();
    return std::llround(sc * 1e9);
  };
  std::vector<std::pair<long long, std::size_t>> order;
  for (std::size_t i = 0; i < subsets.size(); ++i) order.emplace_back(key(score(subsets[i])), i);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  std::optional<OracleResult> best;
  for (const auto& [k, i] : order) {
    const auto& sub = subsets[i];
    Matrix cols(n, p);
    for (int c = 0; c < p; ++c) cols.col(c) = x.col(sub[c]);
    std::optional<AngularOperator> ang;
    try {
      ang = basis_to_angular(SubspaceBasis(sig, cols), tol);
    } catch (const Error&) {
      continue;  // dependent, negative somewhere, or not a graph
    }
    if (!best) {
      best = OracleResult{*ang, sub, lambda, score(sub), true};
      continue;
    }
    const double other = score(sub);
    const double mine = best->log_modulus_product;
    // relative gap between modulus products
    if (std::isfinite(mine) && std::isfinite(other)) {
      best->unique = std::abs(std::exp(other - mine) - 1.0) > gap;
    } else {
      best->unique = std::isfinite(mine) != std::isfinite(other);
    }
    break;
  }
  if (!best) {
    throw Error(ErrorCode::NotFound, "no nonnegative invariant eigenvector span of dimension " +
                                         std::to_string(p));
  }
  return std::move(*best);
}

}  // namespace krein
