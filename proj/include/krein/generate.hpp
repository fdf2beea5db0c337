#pragma once

#include <cstdint>
#include <random>

#include "krein/core.hpp"

namespace krein {

/// Seeded source of test data. Values are derived from the raw mt19937_64
/// stream only, so a seed produces the same matrices on every standard
/// library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                    // [0, 1)
  double uniform(double lo, double hi);
  int integer(int lo, int hi);         // inclusive
  Complex complex_entry();             // real and imaginary parts in [-1, 1)
  Complex phase();                     // |z| = 1
  Matrix matrix(int rows, int cols);
  Vector vector(int n);
  Matrix unitary(int n);

 private:
  std::mt19937_64 engine_;
};

/// Random matrix rescaled to the given operator norm.
Matrix random_contraction(Rng& rng, int rows, int cols, double norm);

/// Product of block unitaries and hyperbolic rotations between plus and minus
/// coordinates with |angle| <= max_angle.
Matrix random_j_unitary(Rng& rng, const Signature& sig, double max_angle = 1.0);

/// G1 diag(a, b) G2 with G_i J-unitary, |a_i| in [1, 2], |b_i| in [0, 1].
/// Every such T satisfies T^*JT >= J and TJT^* >= J. In finite dimensions
/// the noncontractions and binoncontractions coincide, so this serves both.
Matrix random_binoncontraction(Rng& rng, const Signature& sig);

/// V = G_K iota F_H with iota the coordinate embedding H+ -> K+, H- -> K-,
/// F_H and G_K J-unitary. Requires codomain.n_plus >= domain.n_plus and
/// codomain.n_minus >= domain.n_minus.
Matrix random_rect_isometry(Rng& rng, const Signature& domain, const Signature& codomain,
                            double max_angle = 1.0);

}  // namespace krein
