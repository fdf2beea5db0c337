#pragma once

#include <map>
#include <string>
#include <vector>

#include "krein/core.hpp"
#include "krein/subspace.hpp"

namespace krein {

struct SpectralCutoff {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
};

struct PositivePart {
  Matrix a;       // S_+^{1/2}
  Matrix p_plus;  // orthoprojector onto the strictly positive spectral subspace
  int rank = 0;
};

/// Spectral positive part of a Hermitian S: eigenvalues above
/// max(abs_tol, rel_tol * max|lambda|) count as positive.
PositivePart positive_part_root(const Matrix& s, SpectralCutoff cutoff = {});

struct PolarDecomposition {
  Matrix u;    // M |M|^+, orthonormal columns when M is injective
  Matrix abs;  // (M^* M)^{1/2}
};

PolarDecomposition polar(const Matrix& m, SpectralCutoff cutoff = {});

/// Isometry onto Ker p_plus: dim - rank(p_plus) orthonormal columns, each
/// with its first significant entry made real positive.
Matrix defect_isometry(const Matrix& p_plus);

/// Extension of a Krein isometry V: (H, J_H) -> (K, J_K) to
///
///          [ V   A  ]
///   Vhat = [ 0   B* ] : H (+) K -> K (+) M
///
/// with Delta = J_K - V J_H V^*, A = Delta_+^{1/2}, B an isometry M -> K onto
/// Ker p_plus, and the forms J_H (+) I_K on the domain, J_K (+) I_M on the
/// codomain.
///
/// `vhat_blocks` keeps the natural block layout above. `vhat` is the same map
/// in plus-first coordinates: the domain is ordered (H+, K, H-) and the
/// codomain (K+, M, K-), so both carry ordinary Signatures.
struct ExtensionResult {
  KreinOperator v;
  Matrix delta;
  Matrix p_plus;
  Matrix a;
  Matrix b;
  PolarDecomposition jv_polar;
  Matrix vhat_blocks;
  KreinOperator vhat;
  std::vector<int> domain_order;    // plus-first index -> natural index
  std::vector<int> codomain_order;
  std::map<std::string, double> residuals;

  int dim_h() const { return v.domain().dim(); }
  int dim_k() const { return v.codomain().dim(); }
  int dim_m() const { return static_cast<int>(b.cols()); }
};

/// Reassemble vhat, vhat_blocks and the coordinate orders from v, a and b.
/// Used by build_extension; exposed so perturbed factors can be re-verified.
void assemble_vhat(ExtensionResult& res);

/// Throws NotIsometry when |V^* J_K V - J_H|_max > tol (1 + |V|^2).
ExtensionResult build_extension(const KreinOperator& v, double tol = kDefaultClassifyTol,
                                SpectralCutoff cutoff = {});

struct ExtensionReport {
  std::map<std::string, double> residuals;
  double scale = 1.0;
  double tol = 0.0;
  bool passed = false;
};

/// Residual names: "v_star_j_a", "a_b", "a_j_a_minus_p_plus", "vhat_isometry"
/// (these four must be <= tol * scale) and "vhat_codomain_defect_min_eig"
/// (must be >= -tol * scale). Supporting identities are reported alongside
/// but do not decide `passed`.
ExtensionReport verify_extension(const ExtensionResult& res, double tol = 1e-9);

/// L' = p(L n (H (+) 0)) for L given in the plus-first domain coordinates of
/// vhat. Throws DegenerateIntersection unless dim L' = n+(H).
SubspaceBasis pullback_subspace(const ExtensionResult& res, const SubspaceBasis& l,
                                double tol = 1e-8);

/// L'' = p(L n (K (+) 0)) for L read in the plus-first codomain coordinates
/// of vhat. When H = K this is the same subspace as pullback_subspace.
SubspaceBasis codomain_pullback_subspace(const ExtensionResult& res, const SubspaceBasis& l,
                                         double tol = 1e-8);

/// Slice of a subspace of (target+, extra, target-) where the extra block of
/// size `extra` (positive coordinates) vanishes, returned in target
/// coordinates.
/// Singular values of the extra rows at or below tol count as null.
SubspaceBasis intersect_and_project(const SubspaceBasis& l, const Signature& target, int extra,
                                    double tol = 1e-8);

}  // namespace krein
