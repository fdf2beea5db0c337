#pragma once

#include <vector>

#include "krein/core.hpp"
#include "krein/subspace.hpp"

namespace krein {

/// Finitely supported element x1 (+) x2 (+) ... of the countable direct sum of
/// copies of H. Block 0 is the distinguished copy: the image of the embedding
/// j and the target of the projection p. The remaining copies carry the
/// uniformly negative form.
class BlockVector {
 public:
  explicit BlockVector(Signature base);
  BlockVector(Signature base, std::vector<Vector> blocks);

  /// j(v) = v (+) 0 (+) 0 ...
  static BlockVector embed(Signature base, const Vector& v);

  const Signature& base() const { return base_; }
  const std::vector<Vector>& blocks() const { return blocks_; }
  int support() const { return static_cast<int>(blocks_.size()); }
  /// Block i, or zero beyond the support.
  Vector block(int i) const;

  /// p(x) = x1
  Vector project() const;
  double squared_norm() const;

 private:
  void trim();

  Signature base_;
  std::vector<Vector> blocks_;
};

/// <<x,y>> = <x1,y1>_J - sum_{k>=2} (x_k, y_k)
Complex dilation_hat_product(const Signature& base, const BlockVector& x, const BlockVector& y);

/// Principal square root of T^* J T - J. Eigenvalues in [-tol(1+|T|^2), 0)
/// are treated as roundoff and clamped, anything lower throws
/// NotNoncontraction.
Matrix defect_root(const KreinOperator& t, double tol = kDefaultClassifyTol);

/// Isometric dilation V: x1 (+) x2 (+) ... -> Tx1 (+) Dx1 (+) x2 (+) x3 ...
class DilationOperator {
 public:
  explicit DilationOperator(KreinOperator t, double tol = kDefaultClassifyTol);

  const KreinOperator& t() const { return t_; }
  const Matrix& d() const { return d_; }
  const Signature& base() const { return t_.domain(); }

 private:
  KreinOperator t_;
  Matrix d_;
};

BlockVector apply_dilation(const DilationOperator& dil, const BlockVector& x);

/// Signature of the first `depth` copies: (n+, n- + (depth-1) dim H). Block
/// coordinates are already plus-first since every copy past the first is
/// negative.
Signature truncated_signature(const Signature& base, int depth);

/// Finite section [x1..x_depth] -> [Tx1, Dx1, x2, ..., x_{depth-1}]. It is a
/// noncontraction whose defect is exactly |x_depth|^2.
KreinOperator truncate_dilation(const DilationOperator& dil, int depth);

/// Angular operator of pL for a maximal positive L of the truncated space:
/// the rows of Khat belonging to H- of the first copy.
AngularOperator pushdown_subspace(const AngularOperator& khat, int depth);

}  // namespace krein
