#include "krein/generate.hpp"

#include <cmath>
#include <numbers>

namespace krein {

double Rng::uniform() {
  // 53 high bits -> [0, 1)
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

Complex Rng::complex_entry() {
  const double re = uniform(-1.0, 1.0);
  const double im = uniform(-1.0, 1.0);
  return {re, im};
}

Complex Rng::phase() { return std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi)); }

Matrix Rng::matrix(int rows, int cols) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = complex_entry();
  return m;
}

Vector Rng::vector(int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = complex_entry();
  return v;
}

Matrix Rng::unitary(int n) {
  if (n == 0) return Matrix(0, 0);
  Eigen::HouseholderQR<Matrix> qr(matrix(n, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

Matrix random_contraction(Rng& rng, int rows, int cols, double norm) {
  Matrix m = rng.matrix(rows, cols);
  const double current = operator_norm(m);
  if (current > 0.0) m *= norm / current;
  return m;
}

Matrix random_j_unitary(Rng& rng, const Signature& sig, double max_angle) {
  const int p = sig.n_plus, q = sig.n_minus, n = sig.dim();
  auto block_unitary = [&] {
    Matrix u = Matrix::Zero(n, n);
    u.topLeftCorner(p, p) = rng.unitary(p);
    u.bottomRightCorner(q, q) = rng.unitary(q);
    return u;
  };
  Matrix g = block_unitary();
  const int rotations = std::min(p, q);
  for (int r = 0; r < rotations; ++r) {
    // boost in the (plus r, minus r) plane; the unitaries around it mix the
    // remaining coordinates
    const double t = rng.uniform(-max_angle, max_angle);
    const Complex ph = rng.phase();
    Matrix h = Matrix::Identity(n, n);
    h(r, r) = std::cosh(t);
    h(p + r, p + r) = std::cosh(t);
    h(r, p + r) = ph * std::sinh(t);
    h(p + r, r) = std::conj(ph) * std::sinh(t);
    g = h * g;
  }
  return block_unitary() * g;
}

Matrix random_binoncontraction(Rng& rng, const Signature& sig) {
  const int p = sig.n_plus, n = sig.dim();
  Vector scale(n);
  for (int i = 0; i < n; ++i) {
    const double mag = i < p ? rng.uniform(1.0, 2.0) : rng.uniform(0.0, 1.0);
    scale(i) = mag * rng.phase();
  }
  return random_j_unitary(rng, sig) * scale.asDiagonal() * random_j_unitary(rng, sig);
}

Matrix random_rect_isometry(Rng& rng, const Signature& domain, const Signature& codomain,
                            double max_angle) {
  if (codomain.n_plus < domain.n_plus || codomain.n_minus < domain.n_minus) {
    throw Error(ErrorCode::InvalidArgument,
                "no Krein isometry " + to_string(domain) + " -> " + to_string(codomain));
  }
  Matrix iota = Matrix::Zero(codomain.dim(), domain.dim());
  for (int i = 0; i < domain.n_plus; ++i) iota(i, i) = 1.0;
  for (int i = 0; i < domain.n_minus; ++i) iota(codomain.n_plus + i, domain.n_plus + i) = 1.0;
  return random_j_unitary(rng, codomain, max_angle) * iota *
         random_j_unitary(rng, domain, max_angle);
}

}  // namespace krein
