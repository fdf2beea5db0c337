#pragma once

#include <map>
#include <optional>
#include <string>

#include "krein/dilation.hpp"
#include "krein/extension.hpp"
#include "krein/riccati.hpp"

namespace krein {

/// Named residuals and pass/fail checks collected along a pipeline.
struct Checks {
  std::map<std::string, double> residuals;
  std::map<std::string, bool> passed;

  bool all_passed() const;
};

/// Noncontraction T -> truncated dilation -> invariant maximal positive
/// subspace of the dilation -> pushdown to H -> verification against T.
struct Theorem1Outcome {
  int depth = 2;
  std::optional<DilationOperator> dilation;
  std::optional<KreinOperator> section;
  std::optional<SolveResult> lifted;       // subspace of the section
  std::optional<AngularOperator> pushed;   // its pushdown
  Checks checks;
};

Theorem1Outcome run_theorem1(const KreinOperator& t, int depth = 2, const SolveOptions& opts = {});

/// Isometry V -> extension Vhat -> invariant maximal positive subspace of
/// Vhat -> pullbacks to H and K -> verification against V.
///
/// The domain (H+, K, H-) and codomain (K+, M, K-) of Vhat carry the same
/// signature whenever K adds no negative dimensions to H; Vhat is then
/// treated as an operator on one space by identifying the two coordinate
/// systems. L' and L'' are the slices of the invariant subspace on each side;
/// V maps L' into L'', and for square V both coincide so that L' is
/// V-invariant.
struct Theorem2Outcome {
  std::optional<ExtensionResult> extension;
  std::optional<ExtensionReport> report;
  std::optional<SolveResult> lifted;
  std::optional<SubspaceBasis> domain_slice;    // L'
  std::optional<SubspaceBasis> codomain_slice;  // L''
  Checks checks;
};

Theorem2Outcome run_theorem2(const KreinOperator& v, double tol = kDefaultClassifyTol,
                             const SolveOptions& opts = {});

/// Tolerances of the end-to-end checks.
inline constexpr double kInvarianceTol = 1e-8;
inline constexpr double kAngularNormSlack = 1e-10;

/// Raised by the pipelines with the stage that failed. The wrapped code is
/// the one of the underlying library error.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.code(), stage + ": " + cause.what()), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace krein
