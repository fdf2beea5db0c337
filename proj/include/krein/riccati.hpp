#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "krein/core.hpp"
#include "krein/subspace.hpp"

namespace krein {

/// T in plus-first block form [[T11, T12], [T21, T22]].
struct RiccatiBlocks {
  Signature space;
  Matrix t11, t12, t21, t22;

  Matrix assemble() const;
};

RiccatiBlocks block_decompose(const KreinOperator& t);

/// Phi(K) = (T21 + T22 K)(T11 + T12 K)^{-1}. The graph of K is T-invariant
/// exactly when Phi(K) = K. Throws SingularPivot when the pivot
/// T11 + T12 K has condition number above 1e12.
Matrix riccati_map(const RiccatiBlocks& blocks, const Matrix& k);

struct SolveOptions {
  int max_iter = 20000;
  double fix_tol = 1e-12;
  std::optional<Matrix> start;  // zero when empty
  int restarts = 5;
  int stagnation_window = 50;
  std::uint64_t seed = 0x5eed;  // random restarts
  double invariance_tol = 1e-8;
  bool use_oracle_fallback = true;
};

struct SolveDiagnostics {
  std::string strategy;  // "fixed_point" or "eigen_oracle"
  int iterations = 0;
  int restarts_used = 0;
  double fixed_point_residual = 0.0;  // |Phi(K) - K|_max, NaN if Phi undefined at K
  double invariance_residual = 0.0;
  double norm = 0.0;
  std::vector<std::string> notes;
};

struct SolveResult {
  AngularOperator k;
  SolveDiagnostics diagnostics;
};

/// Maximal positive T-invariant subspace of a J-noncontraction. Every answer
/// is checked against the defining properties (contraction, fixed point,
/// invariance) before it is returned; NotFound carries the diagnostics of
/// all attempts and says nothing about existence.
SolveResult find_invariant_maximal_positive(const KreinOperator& t, const SolveOptions& opts = {});

struct OracleResult {
  AngularOperator k;
  std::vector<int> eigen_indices;   // chosen eigenvectors
  Eigen::VectorXcd eigenvalues;     // all eigenvalues of T
  double log_modulus_product = 0.0;
  // No other nonnegative eigenvector span has a modulus product within
  // `gap` (relative) of the chosen one.
  bool unique = false;
};

/// Exhaustive search over the C(n, n+) eigenvector spans, ordered by
/// descending product of |lambda| then lexicographically; returns the first
/// nonnegative one. Eigenvalues closer than 1e-8 (1 + |T|) are merged, their
/// eigenspace is taken from the null space of T - mu and split into
/// J-orthogonal vectors. Throws Defective when T is not numerically
/// diagonalizable and NotFound when no span qualifies.
OracleResult eigen_oracle(const KreinOperator& t, double tol = 1e-10, double gap = 1e-6);

/// Fixed-point residual |Phi(K) - K|_max, or +infinity if the pivot is
/// singular.
double fixed_point_residual(const RiccatiBlocks& blocks, const Matrix& k);

}  // namespace krein
