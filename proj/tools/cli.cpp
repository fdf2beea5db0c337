#include "cli.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "CLI11.hpp"
#include "krein/core.hpp"
#include "krein/dilation.hpp"
#include "krein/extension.hpp"
#include "krein/generate.hpp"
#include "krein/io.hpp"
#include "krein/pipeline.hpp"
#include "krein/riccati.hpp"

namespace krein::cli {

namespace {

using io::Json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::DimensionMismatch:
      return kInputError;
    case ErrorCode::NotNoncontraction:
    case ErrorCode::NotIsometry:
    case ErrorCode::NotPositive:
    case ErrorCode::NotGraph:
    case ErrorCode::NotContraction:
    case ErrorCode::Precondition:
      return kPrecondition;
    case ErrorCode::NotFound:
    case ErrorCode::SingularPivot:
    case ErrorCode::Defective:
      return kNotFound;
    case ErrorCode::DegenerateIntersection:
      return kVerificationFailed;
  }
  return kVerificationFailed;
}

struct Context {
  std::vector<std::string> args;
  std::ostream& out;
  std::ostream& err;

  Json report(const std::string& command) const {
    Json r;
    r["command"] = command;
    r["argv"] = args;
    return r;
  }

  int emit(const Json& r, int code) const {
    out << io::dump(r);
    return code;
  }

  int fail(Json r, const Error& e, const std::string& stage) const {
    r["error"] = {{"code", to_string(e.code())}, {"message", e.what()}, {"stage", stage}};
    err << "error: " << e.what() << "\n";
    return emit(r, exit_code_for(e.code()));
  }
};

struct Loaded {
  KreinOperator op;
  Json input;
};

Loaded load(const std::string& path) {
  const std::string text = io::read_text_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, "malformed file: " + path + ": " + e.what());
  }
  return {io::operator_from_json(j), {{"file", path}, {"digest", io::digest(text)}}};
}

Json classification_json(const Classification& c) {
  return {{"is_noncontraction", c.is_noncontraction},
          {"is_isometry", c.is_isometry},
          {"is_isometric_embedding", c.is_isometric_embedding},
          {"is_binoncontraction", c.is_binoncontraction},
          {"is_unitary", c.is_unitary},
          {"min_domain_defect_eig", c.min_domain_defect_eig},
          {"min_codomain_defect_eig", c.min_codomain_defect_eig},
          {"max_isometry_residual", c.max_isometry_residual},
          {"max_coisometry_residual", c.max_coisometry_residual},
          {"tolerance_used", c.tolerance_used},
          {"note", c.note}};
}

Json checks_json(const Checks& c) {
  Json j;
  j["residuals"] = c.residuals;
  j["checks"] = c.passed;
  j["passed"] = c.all_passed();
  return j;
}

Json angular_json(const AngularOperator& a) {
  return {{"signature", io::signature_to_json(a.space())},
          {"k", io::matrix_to_json(a.k())},
          {"domain_basis", io::matrix_to_json(a.domain_basis())}};
}

Json solve_json(const SolveResult& s) {
  const auto& d = s.diagnostics;
  return {{"strategy", d.strategy},
          {"iterations", d.iterations},
          {"restarts", d.restarts_used},
          {"norm", d.norm},
          {"fixed_point_residual", d.fixed_point_residual},
          {"invariance_residual", d.invariance_residual},
          {"notes", d.notes}};
}

Signature parse_dims(const std::vector<int>& v, const std::string& flag) {
  if (v.size() != 2 || v[0] < 0 || v[1] < 0 || v[0] + v[1] == 0) {
    throw Error(ErrorCode::InvalidArgument, flag + " must be two nonnegative integers n+,n-");
  }
  return Signature(v[0], v[1]);
}

// --- commands --------------------------------------------------------------

int cmd_check(const Context& ctx, const std::string& file, double tol) {
  Json r = ctx.report("check");
  r["tolerances"] = {{"tol", tol}};
  try {
    const Loaded in = load(file);
    r["inputs"] = in.input;
    r["classification"] = classification_json(classify(in.op, tol));
    return ctx.emit(r, kOk);
  } catch (const Error& e) {
    return ctx.fail(r, e, "check");
  }
}

int cmd_dilate(const Context& ctx, const std::string& file, int depth, double tol,
               const std::string& out_path) {
  Json r = ctx.report("dilate");
  r["tolerances"] = {{"tol", tol}};
  r["depth"] = depth;
  std::string stage = "load";
  try {
    const Loaded in = load(file);
    r["inputs"] = in.input;
    stage = "dilate";
    if (!in.op.is_square()) {
      throw Error(ErrorCode::Precondition, "dilation needs an operator on a single space");
    }
    const DilationOperator dil(in.op, tol);
    const KreinOperator section = truncate_dilation(dil, depth);
    const double tn = operator_norm(in.op.matrix());
    const double scale = 1.0 + tn * tn;

    const Matrix defect = domain_defect(section);
    Eigen::SelfAdjointEigenSolver<Matrix> es(defect, Eigen::EigenvaluesOnly);
    std::vector<double> eigs(es.eigenvalues().data(),
                             es.eigenvalues().data() + es.eigenvalues().size());
    const int head = (depth - 1) * in.op.domain().dim();
    Checks c;
    c.residuals["defect_root"] = max_abs(dil.d() * dil.d() - domain_defect(in.op));
    c.passed["defect_root"] = c.residuals["defect_root"] <= 1e-9 * scale;
    c.residuals["section_defect_min_eig"] = eigs.empty() ? 0.0 : eigs.front();
    c.passed["section_noncontraction"] = c.residuals["section_defect_min_eig"] >= -1e-9 * scale;
    c.residuals["restricted_isometry"] = max_abs(defect.topLeftCorner(head, head));
    c.passed["restricted_isometry"] = c.residuals["restricted_isometry"] <= 1e-10 * scale;
    r["verification"] = checks_json(c);
    r["section_defect_eigenvalues"] = eigs;
    r["defect_root"] = io::matrix_to_json(dil.d());
    r["section_signature"] = io::signature_to_json(section.domain());

    if (!out_path.empty()) {
      Json f = io::operator_to_json(section);
      f["base_signature"] = io::signature_to_json(in.op.domain());
      f["depth"] = depth;
      io::write_text_file(out_path, io::dump(f));
      r["output"] = out_path;
    }
    return ctx.emit(r, c.all_passed() ? kOk : kVerificationFailed);
  } catch (const Error& e) {
    return ctx.fail(r, e, stage);
  }
}

int cmd_extend(const Context& ctx, const std::string& file, double tol,
               const std::string& out_path) {
  Json r = ctx.report("extend");
  r["tolerances"] = {{"tol", tol}};
  std::string stage = "load";
  try {
    const Loaded in = load(file);
    r["inputs"] = in.input;
    stage = "extend";
    const ExtensionResult ext = build_extension(in.op, tol);
    const ExtensionReport rep = verify_extension(ext, tol);
    r["residuals"] = rep.residuals;
    r["scale"] = rep.scale;
    r["passed"] = rep.passed;
    r["rank_p_plus"] = ext.dim_k() - ext.dim_m();
    r["vhat_signature_domain"] = io::signature_to_json(ext.vhat.domain());
    r["vhat_signature_codomain"] = io::signature_to_json(ext.vhat.codomain());
    r["vhat_classification"] = classification_json(classify(ext.vhat, tol));

    if (!out_path.empty()) {
      Json f = io::operator_to_json(ext.vhat);
      f["domain_order"] = ext.domain_order;
      f["codomain_order"] = ext.codomain_order;
      f["blocks"] = {{"vhat", io::matrix_to_json(ext.vhat_blocks)},
                     {"delta", io::matrix_to_json(ext.delta)},
                     {"a", io::matrix_to_json(ext.a)},
                     {"b", io::matrix_to_json(ext.b)},
                     {"p_plus", io::matrix_to_json(ext.p_plus)}};
      io::write_text_file(out_path, io::dump(f));
      r["output"] = out_path;
    }
    return ctx.emit(r, rep.passed ? kOk : kVerificationFailed);
  } catch (const Error& e) {
    return ctx.fail(r, e, stage);
  }
}

int cmd_find_subspace(const Context& ctx, const std::string& file, int max_iter,
                      const std::string& out_path) {
  Json r = ctx.report("find-subspace");
  SolveOptions opts;
  opts.max_iter = max_iter;
  r["tolerances"] = {{"fix_tol", opts.fix_tol}, {"invariance_tol", opts.invariance_tol}};
  std::string stage = "load";
  try {
    const Loaded in = load(file);
    r["inputs"] = in.input;
    stage = "solve";
    if (!(in.op.domain() == in.op.codomain())) {
      throw Error(ErrorCode::Precondition, "invariant subspaces need an operator on one space");
    }
    const KreinOperator t(in.op.domain(), in.op.matrix());
    const SolveResult s = find_invariant_maximal_positive(t, opts);
    r["solve"] = solve_json(s);
    r["angular_operator"] = angular_json(s.k);
    if (!out_path.empty()) {
      io::write_text_file(out_path, io::dump(angular_json(s.k)));
      r["output"] = out_path;
    }
    return ctx.emit(r, kOk);
  } catch (const Error& e) {
    return ctx.fail(r, e, stage);
  }
}

int cmd_pipeline(const Context& ctx, const std::string& file, int theorem, int depth, double tol,
                 int max_iter) {
  Json r = ctx.report("pipeline");
  r["theorem"] = theorem;
  r["tolerances"] = {{"tol", tol}, {"invariance_tol", kInvarianceTol}};
  SolveOptions opts;
  opts.max_iter = max_iter;
  try {
    const Loaded in = load(file);
    r["inputs"] = in.input;
    if (theorem == 1) {
      r["depth"] = depth;
      const Theorem1Outcome o = run_theorem1(in.op, depth, opts);
      r["solve"] = solve_json(*o.lifted);
      r["pushdown"] = angular_json(*o.pushed);
      r["verification"] = checks_json(o.checks);
      return ctx.emit(r, o.checks.all_passed() ? kOk : kVerificationFailed);
    }
    const Theorem2Outcome o = run_theorem2(in.op, tol, opts);
    r["solve"] = solve_json(*o.lifted);
    r["domain_slice"] = io::matrix_to_json(o.domain_slice->columns());
    r["codomain_slice"] = io::matrix_to_json(o.codomain_slice->columns());
    r["verification"] = checks_json(o.checks);
    return ctx.emit(r, o.checks.all_passed() ? kOk : kVerificationFailed);
  } catch (const StageError& e) {
    return ctx.fail(r, e, e.stage());
  } catch (const Error& e) {
    return ctx.fail(r, e, "load");
  }
}

int cmd_gen(const Context& ctx, const std::string& kind, const std::vector<int>& dims,
            const std::vector<int>& codims, std::uint64_t seed, const std::string& out_path) {
  Json r = ctx.report("gen");
  r["seed"] = seed;
  r["kind"] = kind;
  const double check_tol = 1e-10;
  r["tolerances"] = {{"classify_tol", check_tol}};
  try {
    const Signature dom = parse_dims(dims, "--dims");
    Signature cod = dom;
    if (kind == "rect-isometry") {
      cod = codims.empty() ? Signature(dom.n_plus + 1, dom.n_minus) : parse_dims(codims, "--codims");
      if (cod.n_plus < dom.n_plus || cod.n_minus < dom.n_minus) {
        throw Error(ErrorCode::InvalidArgument, "no Krein isometry " + to_string(dom) + " -> " +
                                                    to_string(cod));
      }
    }
    Rng rng(seed);
    std::function<Matrix()> make;
    std::function<bool(const Classification&)> accept;
    if (kind == "noncontraction") {
      make = [&] { return random_binoncontraction(rng, dom); };
      accept = [](const Classification& c) { return c.is_noncontraction; };
    } else if (kind == "binoncontraction") {
      make = [&] { return random_binoncontraction(rng, dom); };
      accept = [](const Classification& c) { return c.is_binoncontraction; };
    } else if (kind == "isometry") {
      make = [&] { return random_j_unitary(rng, dom); };
      accept = [](const Classification& c) { return c.is_isometry; };
    } else if (kind == "rect-isometry") {
      make = [&] { return random_rect_isometry(rng, dom, cod); };
      accept = [](const Classification& c) { return c.is_isometric_embedding; };
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown kind '" + kind + "'");
    }

    int rejections = 0;
    std::optional<KreinOperator> op;
    while (!op) {
      KreinOperator candidate(dom, cod, make());
      if (accept(classify(candidate, check_tol))) {
        op = std::move(candidate);
      } else if (++rejections > 1000) {
        throw Error(ErrorCode::NotFound, "generator rejected 1000 candidates");
      }
    }
    Json f = io::operator_to_json(*op);
    f["generator"] = {{"kind", kind}, {"seed", seed}, {"rejections", rejections}};
    const std::string text = io::dump(f);
    r["rejections"] = rejections;
    r["classification"] = classification_json(classify(*op, check_tol));
    if (out_path.empty()) {
      ctx.out << text;
      return kOk;
    }
    io::write_text_file(out_path, text);
    r["output"] = out_path;
    r["output_digest"] = io::digest(text);
    return ctx.emit(r, kOk);
  } catch (const Error& e) {
    return ctx.fail(r, e, "gen");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical toolkit for operators on Krein spaces", "kreintool"};
  app.require_subcommand(1);
  Context ctx{args, out, err};

  std::string file, out_path;
  double tol = kDefaultClassifyTol;
  int depth = 2, max_iter = SolveOptions{}.max_iter, theorem = 1;

  auto* check = app.add_subcommand("check", "classify an operator");
  check->add_option("file", file, "operator file")->required();
  check->add_option("--tol", tol, "classification tolerance")->check(CLI::PositiveNumber);

  auto* dilate = app.add_subcommand("dilate", "finite section of the isometric dilation");
  dilate->add_option("file", file, "operator file")->required();
  dilate->add_option("--depth", depth, "number of copies kept")->check(CLI::Range(2, 64));
  dilate->add_option("--tol", tol, "noncontraction tolerance")->check(CLI::PositiveNumber);
  dilate->add_option("--out", out_path, "write the section here");

  auto* extend = app.add_subcommand("extend", "binoncontractive extension of an isometry");
  extend->add_option("file", file, "operator file")->required();
  extend->add_option("--tol", tol, "isometry tolerance")->check(CLI::PositiveNumber);
  extend->add_option("--out", out_path, "write the extension here");

  auto* find = app.add_subcommand("find-subspace", "maximal positive invariant subspace");
  find->add_option("file", file, "operator file")->required();
  find->add_option("--max-iter", max_iter, "fixed-point iterations per attempt")
      ->check(CLI::PositiveNumber);
  find->add_option("--out", out_path, "write the angular operator here");

  auto* pipeline = app.add_subcommand("pipeline", "end-to-end subspace transfer");
  pipeline->add_option("file", file, "operator file")->required();
  pipeline->add_option("--theorem", theorem, "1: dilation, 2: extension")
      ->check(CLI::IsMember({1, 2}));
  pipeline->add_option("--depth", depth, "dilation depth (theorem 1)")->check(CLI::Range(2, 64));
  pipeline->add_option("--tol", tol, "tolerance")->check(CLI::PositiveNumber);
  pipeline->add_option("--max-iter", max_iter, "fixed-point iterations per attempt")
      ->check(CLI::PositiveNumber);

  std::string kind;
  std::vector<int> dims, codims;
  std::uint64_t seed = 1;
  auto* gen = app.add_subcommand("gen", "seeded random operator");
  gen->add_option("--kind", kind, "noncontraction|binoncontraction|isometry|rect-isometry")
      ->required()
      ->check(CLI::IsMember({"noncontraction", "binoncontraction", "isometry", "rect-isometry"}));
  gen->add_option("--dims", dims, "n+,n- of the (domain) space")->required()->delimiter(',');
  gen->add_option("--codims", codims, "n+,n- of the codomain (rect-isometry)")->delimiter(',');
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--out", out_path, "write the operator here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kInputError;
  }

  if (*check) return cmd_check(ctx, file, tol);
  if (*dilate) return cmd_dilate(ctx, file, depth, tol, out_path);
  if (*extend) return cmd_extend(ctx, file, tol, out_path);
  if (*find) return cmd_find_subspace(ctx, file, max_iter, out_path);
  if (*pipeline) return cmd_pipeline(ctx, file, theorem, depth, tol, max_iter);
  return cmd_gen(ctx, kind, dims, codims, seed, out_path);
}

}  // namespace krein::cli
