// Acceptance suite: one PASS/FAIL line per criterion. argv[1] is the
// kreintool executable used by the determinism check.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "krein/dilation.hpp"
#include "krein/extension.hpp"
#include "krein/generate.hpp"
#include "krein/io.hpp"
#include "krein/pipeline.hpp"
#include "krein/riccati.hpp"
#include "krein/subspace.hpp"
#include "oracles.hpp"

using namespace krein;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Tracks the worst observed value of a quantity against its bound.
struct Worst {
  double value = 0.0;
  int failures = 0;
  void le(double v, double bound) {
    value = std::max(value, v / bound);
    if (!(v <= bound)) ++failures;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<KreinOperator> noncontraction_seeds() {
  std::vector<KreinOperator> out;
  for (int seed = 0; seed < 200; ++seed) {
    Rng rng(1000 + seed);
    const Signature s(1 + seed % 3, 1 + (seed / 3) % 3);
    out.emplace_back(s, random_binoncontraction(rng, s));
  }
  return out;
}

BlockVector random_block_vector(Rng& rng, const Signature& base) {
  std::vector<Vector> blocks;
  const int support = rng.integer(1, 5);
  for (int i = 0; i < support; ++i) blocks.push_back(rng.vector(base.dim()));
  return BlockVector(base, std::move(blocks));
}

double tnorm_scale(const KreinOperator& t) {
  const double n = operator_norm(t.matrix());
  return 1.0 + n * n;
}

Verdict criterion1() {
  Worst iso, inter;
  Rng rng(1001);
  for (const KreinOperator& t : noncontraction_seeds()) {
    const DilationOperator dil(t);
    const double scale = tnorm_scale(t);
    for (int k = 0; k < 200; ++k) {
      const BlockVector x = random_block_vector(rng, t.domain());
      const BlockVector y = random_block_vector(rng, t.domain());
      const BlockVector vx = apply_dilation(dil, x), vy = apply_dilation(dil, y);
      const double nx = std::sqrt(x.squared_norm()), ny = std::sqrt(y.squared_norm());
      iso.le(std::abs(dilation_hat_product(t.domain(), vx, vy) -
                      dilation_hat_product(t.domain(), x, y)),
             1e-10 * (1 + nx * ny * scale));
      inter.le((vx.project() - t.matrix() * x.project()).norm(), 1e-12 * scale * (1 + nx));
    }
  }
  return {iso.failures == 0 && inter.failures == 0,
          "200 operators x 200 pairs; worst isometry/bound " + fmt(iso.value) +
              ", worst intertwining/bound " + fmt(inter.value)};
}

Verdict criterion2() {
  Worst root, psd;
  for (const KreinOperator& t : noncontraction_seeds()) {
    const Matrix d = defect_root(t);
    root.le(max_abs(d * d - domain_defect(t)), 1e-9 * tnorm_scale(t));
    psd.le(std::max(0.0, -min_hermitian_eig(d)), 1e-10);
    if (max_abs(d - d.adjoint()) > 1e-14 * tnorm_scale(t)) ++psd.failures;
  }
  return {root.failures == 0 && psd.failures == 0,
          "worst |D^2 - defect|/bound " + fmt(root.value) + ", negative or non-Hermitian D: " +
              std::to_string(psd.failures)};
}

Verdict criterion3() {
  Worst defect, iso;
  Rng rng(3003);
  for (const KreinOperator& t : noncontraction_seeds()) {
    const DilationOperator dil(t);
    for (int depth = 2; depth <= 4; ++depth) {
      const KreinOperator sec = truncate_dilation(dil, depth);
      const Signature hs = sec.domain();
      defect.le(std::max(0.0, -min_hermitian_eig(domain_defect(sec))), 1e-9);
      Vector x = rng.vector(hs.dim());
      x.tail(t.domain().dim()).setZero();
      x /= x.norm();
      const Vector vx = sec.matrix() * x;
      iso.le(std::abs(oracle::product(hs, vx, vx) - oracle::product(hs, x, x)), 1e-10);
    }
  }
  return {defect.failures == 0 && iso.failures == 0,
          "depths 2..4 on 200 operators; worst defect deficit/bound " + fmt(defect.value) +
              ", worst restricted isometry/bound " + fmt(iso.value)};
}

KreinOperator s06() {
  Matrix v(3, 2);
  v << 0.8, 0, 0.6, 0, 0, 1;
  return KreinOperator(Signature(1, 1), Signature(2, 1), v);
}

Verdict criterion4() {
  Worst w;
  Rng rng(4004);
  for (int i = 0; i < 100; ++i) {
    const int n = rng.integer(1, 4);
    const int p = rng.integer(0, n);
    const Signature h(p, n - p);
    Signature k;
    do {
      k = Signature(p + rng.integer(0, 2), n - p + rng.integer(0, 2));
    } while (k.dim() > 6);
    const ExtensionResult r = build_extension(KreinOperator(h, k, random_rect_isometry(rng, h, k)));
    const ExtensionReport rep = verify_extension(r);
    const double bound = 1e-9 * rep.scale;
    for (const char* name : {"vhat_isometry", "a_j_a_minus_p_plus", "a_b", "v_star_j_a"})
      w.le(rep.residuals.at(name), bound);
    w.le(std::max(0.0, -rep.residuals.at("vhat_codomain_defect_min_eig")), bound);
  }
  Worst fixture;
  const ExtensionReport rep = verify_extension(build_extension(s06()));
  for (const auto& [name, value] : rep.residuals) {
    const bool eig = name.find("min_eig") != std::string::npos;
    fixture.le(eig ? std::max(0.0, -value) : value, 1e-12);
  }
  return {w.failures == 0 && fixture.failures == 0,
          "100 rectangular isometries, worst residual/bound " + fmt(w.value) +
              "; fixture worst residual/1e-12 " + fmt(fixture.value)};
}

Verdict criterion5() {
  Rng rng(5005);
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = rng.integer(1, 4);
    const int p = rng.integer(0, n);
    const Signature s(p, n - p);
    const ExtensionResult r = build_extension(KreinOperator(s, random_j_unitary(rng, s)));
    Eigen::SelfAdjointEigenSolver<Matrix> es(r.delta, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    worst = std::max(worst, top);
    if (top > 1e-9 || r.a != Matrix::Zero(n, n) || !classify(r.vhat).is_unitary) ++bad;
  }
  return {bad == 0, "100 square isometries, max |eig Delta| " + fmt(worst) +
                        ", cases with A != 0 or Vhat not unitary: " + std::to_string(bad)};
}

Verdict criterion6() {
  Rng rng(6006);
  Worst inv, norm;
  int bad_dim = 0, errors = 0;
  for (int i = 0; i < 50; ++i) {
    const int n = rng.integer(2, 6);
    const int p = rng.integer(1, n - 1);
    const Signature s(p, n - p);
    const KreinOperator t(s, random_binoncontraction(rng, s));
    try {
      const Theorem1Outcome out = run_theorem1(t);
      const SubspaceBasis b = angular_to_basis(*out.pushed);
      inv.le(invariance_residual(t, b), 1e-8);
      norm.le(out.pushed->norm(), 1.0 + 1e-10);
      if (b.dim() != p || !is_maximal_positive(b)) ++bad_dim;
    } catch (const Error& e) {
      ++errors;
      std::cerr << "criterion 6 case " << i << ": " << e.what() << "\n";
    }
  }
  return {inv.failures == 0 && norm.failures == 0 && bad_dim == 0 && errors == 0,
          "50 binoncontractions; worst invariance/1e-8 " + fmt(inv.value) +
              ", wrong dimension " + std::to_string(bad_dim) + ", errors " +
              std::to_string(errors)};
}

Verdict criterion7() {
  Rng rng(7007);
  Worst inv;
  int not_maximal = 0, errors = 0;
  for (int i = 0; i < 50; ++i) {
    // extra positive dimensions only, so that Vhat acts on one space
    const int n = rng.integer(1, 4);
    const int p = rng.integer(0, n);
    const Signature h(p, n - p), k(p + rng.integer(0, 2), n - p);
    const KreinOperator v(h, k, random_rect_isometry(rng, h, k));
    try {
      const Theorem2Outcome out = run_theorem2(v);
      inv.le(mapping_residual(v, *out.domain_slice, *out.codomain_slice), 1e-8);
      if (v.is_square()) inv.le(invariance_residual(v, *out.domain_slice), 1e-8);
      if (!is_maximal_positive(*out.domain_slice) || !is_maximal_positive(*out.codomain_slice))
        ++not_maximal;
    } catch (const Error& e) {
      ++errors;
      std::cerr << "criterion 7 case " << i << ": " << e.what() << "\n";
    }
  }
  return {inv.failures == 0 && not_maximal == 0 && errors == 0,
          "50 isometries; worst V-invariance/1e-8 " + fmt(inv.value) + ", not maximal " +
              std::to_string(not_maximal) + ", errors " + std::to_string(errors)};
}

double modulus_gap(const Matrix& t) {
  Eigen::ComplexEigenSolver<Matrix> es(t, false);
  std::vector<double> m;
  for (int i = 0; i < es.eigenvalues().size(); ++i) m.push_back(std::abs(es.eigenvalues()(i)));
  std::sort(m.begin(), m.end());
  double gap = 1.0;
  for (std::size_t i = 1; i < m.size(); ++i) gap = std::min(gap, (m[i] - m[i - 1]) / m.back());
  return gap;
}

Verdict criterion8() {
  Rng rng(8008);
  int used = 0, unique = 0, invalid = 0, disagree = 0, skipped = 0;
  double worst_angle = 0.0;
  while (used < 100) {
    const int n = rng.integer(2, 8);
    const int p = rng.integer(1, n - 1);
    const Signature s(p, n - p);
    const KreinOperator t(s, random_binoncontraction(rng, s));
    if (modulus_gap(t.matrix()) <= 1e-6) {
      ++skipped;
      continue;
    }
    std::optional<OracleResult> oracle;
    try {
      oracle = eigen_oracle(t);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Defective) throw;
      ++skipped;
      continue;
    }
    const OracleResult& o = *oracle;
    ++used;
    SolveOptions opts;
    opts.use_oracle_fallback = false;
    try {
      const SolveResult sol = find_invariant_maximal_positive(t, opts);
      const SubspaceBasis bo = angular_to_basis(o.k), bs = angular_to_basis(sol.k);
      for (const SubspaceBasis* b : {&bo, &bs})
        if (!is_maximal_positive(*b) || !is_invariant(t, *b, 1e-8)) ++invalid;
      if (o.unique) {
        ++unique;
        const double a = subspace_distance(bo, bs);
        worst_angle = std::max(worst_angle, a);
        if (a > 1e-6) ++disagree;
      }
    } catch (const Error& e) {
      ++invalid;
      std::cerr << "criterion 8: " << e.what() << "\n";
    }
  }
  return {invalid == 0 && disagree == 0,
          "100 seeds (" + std::to_string(skipped) + " skipped for gap/diagonalizability), " +
              std::to_string(unique) + " unique; invalid " + std::to_string(invalid) +
              ", worst angle " + fmt(worst_angle)};
}

Verdict criterion9() {
  Rng rng(9009);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Signature s(rng.integer(1, 4), rng.integer(0, 4));
    const Matrix k = random_contraction(rng, s.n_minus, s.n_plus, rng.uniform(0.0, 1.0));
    const Matrix cols = angular_to_basis(AngularOperator(s, k)).columns() *
                        (rng.matrix(s.n_plus, s.n_plus) + 3.0 * Matrix::Identity(s.n_plus, s.n_plus));
    worst = std::max(worst, max_abs(basis_to_angular(SubspaceBasis(s, cols)).k() - k));
  }
  int disagreements = 0, cases = 0;
  for (int i = 0; i < 300; ++i) {
    const Signature s(rng.integer(1, 4), rng.integer(1, 4));
    Matrix cols;
    switch (i % 3) {
      case 0: {  // graph, clearly inside or outside the unit ball
        const double r = rng.uniform() < 0.5 ? rng.uniform(0.0, 0.99) : rng.uniform(1.01, 2.0);
        cols.resize(s.dim(), s.n_plus);
        cols << Matrix::Identity(s.n_plus, s.n_plus), random_contraction(rng, s.n_minus, s.n_plus, r);
        cols = cols * rng.unitary(s.n_plus);
        break;
      }
      case 1:  // generic subspace of random dimension
        cols = rng.matrix(s.dim(), rng.integer(1, s.dim() - 1));
        break;
      default: {  // non-maximal positive candidate
        const int d = rng.integer(1, s.n_plus);
        cols = Matrix::Zero(s.dim(), d);
        cols.topRows(s.n_plus) = rng.matrix(s.n_plus, d);
        cols.bottomRows(s.n_minus) = 0.3 * rng.matrix(s.n_minus, d);
      }
    }
    const SubspaceBasis b(s, cols);
    const double mu = oracle::min_generalized_gram_eig(s, cols);
    const bool pos = mu >= -1e-10;
    ++cases;
    if (is_positive(b) != pos || is_maximal_positive(b) != (pos && b.dim() == s.n_plus))
      ++disagreements;
  }
  return {worst <= 1e-10 && disagreements == 0,
          "round-trip worst " + fmt(worst) + " over 100 seeds; predicate disagreements " +
              std::to_string(disagreements) + "/" + std::to_string(cases)};
}

std::string capture(const std::string& cmd, int& status) {
  std::string text;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return text;
  }
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) text.append(buf, n);
  status = pclose(pipe);
  return text;
}

Verdict criterion10(const std::string& tool) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "kreintool_acceptance";
  fs::create_directories(dir);
  const std::string t = (dir / "t.json").string(), v = (dir / "v.json").string();
  const std::vector<std::string> commands = {
      "gen --kind binoncontraction --dims 2,2 --seed 42 --out " + t,
      "gen --kind rect-isometry --dims 1,2 --codims 3,2 --seed 7 --out " + v,
      "gen --kind noncontraction --dims 3,1 --seed 9",
      "check " + t,
      "dilate " + t + " --depth 3",
      "find-subspace " + t,
      "pipeline " + t + " --theorem 1",
      "extend " + v,
      "pipeline " + v + " --theorem 2",
  };
  int mismatches = 0, failures = 0;
  for (const std::string& c : commands) {
    int s1 = 0, s2 = 0;
    const std::string a = capture(tool + " " + c + " 2>/dev/null", s1);
    const std::string b = capture(tool + " " + c + " 2>/dev/null", s2);
    if (a != b || s1 != s2) ++mismatches;
    if (s1 != 0 || a.empty()) {
      ++failures;
      std::cerr << "criterion 10: '" << c << "' exited with status " << s1 << "\n";
    }
  }
  fs::remove_all(dir);
  return {mismatches == 0 && failures == 0,
          std::to_string(commands.size()) + " commands run twice; mismatches " +
              std::to_string(mismatches) + ", failed runs " + std::to_string(failures)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance PATH_TO_KREINTOOL\n";
    return 2;
  }
  const std::string tool = argv[1];
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"dilation isometry and intertwining", criterion1},
      {"defect root", criterion2},
      {"finite section", criterion3},
      {"extension identities", criterion4},
      {"square isometry degeneracy", criterion5},
      {"subspace transfer through the dilation", criterion6},
      {"subspace transfer through the extension", criterion7},
      {"fixed point vs eigen oracle", criterion8},
      {"angular calculus", criterion9},
      {"CLI determinism", [&] { return criterion10(tool); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " ("
              << criteria[i].first << "): " << v.detail << " [" << fmt(secs) << "s]\n";
  }
  return failed == 0 ? 0 : 1;
}
