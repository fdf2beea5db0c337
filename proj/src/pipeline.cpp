#include "krein/pipeline.hpp"

#include <algorithm>

namespace krein {

bool Checks::all_passed() const {
  return std::all_of(passed.begin(), passed.end(), [](const auto& kv) { return kv.second; });
}

namespace {

template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

void record_subspace_checks(Checks& c, const std::string& prefix, const KreinOperator& t,
                            const SubspaceBasis& basis) {
  c.residuals[prefix + "_invariance"] = invariance_residual(t, basis);
  c.passed[prefix + "_invariance"] = c.residuals[prefix + "_invariance"] <= kInvarianceTol;
}

}  // namespace

Theorem1Outcome run_theorem1(const KreinOperator& t, int depth, const SolveOptions& opts) {
  Theorem1Outcome out;
  out.depth = depth;
  Checks& c = out.checks;
  if (!t.is_square()) {
    throw StageError("dilate", Error(ErrorCode::Precondition, "T must act on a single space"));
  }
  const double tnorm = operator_norm(t.matrix());
  const double scale = 1.0 + tnorm * tnorm;

  out.dilation = stage("dilate", [&] { return DilationOperator(t); });
  out.section = stage("dilate", [&] { return truncate_dilation(*out.dilation, depth); });
  const Matrix& d = out.dilation->d();
  c.residuals["defect_root"] = max_abs(d * d - domain_defect(t));
  c.passed["defect_root"] = c.residuals["defect_root"] <= 1e-9 * scale;
  c.residuals["section_defect_min_eig"] = min_hermitian_eig(domain_defect(*out.section));
  c.passed["section_noncontraction"] = c.residuals["section_defect_min_eig"] >= -1e-9 * scale;

  out.lifted = stage("solve", [&] { return find_invariant_maximal_positive(*out.section, opts); });
  const SubspaceBasis lifted = angular_to_basis(out.lifted->k);
  record_subspace_checks(c, "lifted", *out.section, lifted);

  // Tp = pV on the lifted basis
  const int n = t.domain().dim();
  const Matrix& x = lifted.columns();
  c.residuals["intertwining"] =
      max_abs((out.section->matrix() * x).topRows(n) - t.matrix() * x.topRows(n));
  c.passed["intertwining"] = c.residuals["intertwining"] <= 1e-12 * scale * (1.0 + max_abs(x));

  out.pushed = stage("pushdown", [&] { return pushdown_subspace(out.lifted->k, depth); });
  const SubspaceBasis pushed = angular_to_basis(*out.pushed);
  record_subspace_checks(c, "pushdown", t, pushed);
  c.residuals["pushdown_norm"] = out.pushed->norm();
  c.passed["pushdown_norm"] = out.pushed->norm() <= 1.0 + kAngularNormSlack;
  c.residuals["pushdown_dimension"] = pushed.dim();
  c.passed["pushdown_dimension"] = pushed.dim() == t.domain().n_plus;
  c.passed["pushdown_maximal_positive"] = is_maximal_positive(pushed);
  return out;
}

Theorem2Outcome run_theorem2(const KreinOperator& v, double tol, const SolveOptions& opts) {
  Theorem2Outcome out;
  Checks& c = out.checks;

  out.extension = stage("extend", [&] { return build_extension(v, tol); });
  out.report = verify_extension(*out.extension, tol);
  for (const auto& [name, value] : out.report->residuals) c.residuals["extension_" + name] = value;
  c.passed["extension_identities"] = out.report->passed;
  const Classification vc = classify(out.extension->vhat, tol);
  c.passed["vhat_isometric"] = vc.is_isometric_embedding;

  const KreinOperator& vhat = out.extension->vhat;
  if (!(vhat.domain() == vhat.codomain())) {
    throw StageError("extend",
                     Error(ErrorCode::Precondition,
                           "extension maps " + to_string(vhat.domain()) + " to " +
                               to_string(vhat.codomain()) +
                               "; the codomain adds negative dimensions, so there is no "
                               "single space to look for invariant subspaces in"));
  }
  c.passed["vhat_binoncontraction"] = vc.is_binoncontraction;
  const KreinOperator on_space(vhat.domain(), vhat.matrix());

  out.lifted = stage("solve", [&] { return find_invariant_maximal_positive(on_space, opts); });
  const SubspaceBasis lifted = angular_to_basis(out.lifted->k);
  record_subspace_checks(c, "lifted", on_space, lifted);

  out.domain_slice = stage("pullback", [&] { return pullback_subspace(*out.extension, lifted); });
  out.codomain_slice =
      stage("pullback", [&] { return codomain_pullback_subspace(*out.extension, lifted); });
  c.passed["domain_slice_maximal_positive"] = is_maximal_positive(*out.domain_slice);
  c.passed["codomain_slice_maximal_positive"] = is_maximal_positive(*out.codomain_slice);
  c.residuals["v_invariance"] = mapping_residual(v, *out.domain_slice, *out.codomain_slice);
  c.passed["v_invariance"] = c.residuals["v_invariance"] <= kInvarianceTol;
  if (v.is_square()) {
    // one space: L' itself must be V-invariant
    c.residuals["v_invariance_square"] = invariance_residual(v, *out.domain_slice);
    c.passed["v_invariance_square"] = c.residuals["v_invariance_square"] <= kInvarianceTol;
  }
  return out;
}

}  // namespace krein
