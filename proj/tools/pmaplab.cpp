// pmaplab: batch front end for the pseudomap library.
//
// Usage:
//   pmaplab <subcommand> [--config PATH] [--out DIR] [--seed N] [--h H]
//
// Subcommands: solve verify norms hodge lorentz counterexample probe
// Exit codes: 0 all checks pass, 1 a check failed, 2 config error,
//             3 numerical non-convergence, 4 I/O error.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pseudomap/config.hpp"
#include "pseudomap/conservation.hpp"
#include "pseudomap/counterexample.hpp"
#include "pseudomap/field_io.hpp"
#include "pseudomap/hodge.hpp"
#include "pseudomap/lorentz.hpp"
#include "pseudomap/maps.hpp"
#include "pseudomap/norms.hpp"
#include "pseudomap/probe.hpp"
#include "pseudomap/report.hpp"
#include "pseudomap/synthetic.hpp"

using namespace pmap;

namespace {

struct CliArgs {
  std::string subcommand;
  std::string config_path;
  std::string out_dir = "out";
  unsigned seed = 0;
  std::optional<double> h_override;
};

void print_usage() {
  std::cout
      << "Usage: pmaplab <subcommand> [--config PATH] [--out DIR] [--seed N] [--h H]\n"
      << "Subcommands:\n"
      << "  solve           pseudosphere solve from [grid]/[target]/[boundary]/[solver]\n"
      << "  verify          conservation-law and identity checks across grids\n"
      << "  norms           Morrey / Lorentz / Holder norm checks\n"
      << "  hodge           Hodge decomposition residual and orthogonality checks\n"
      << "  lorentz         stationary Lorentzian solve, assembly and bound checks\n"
      << "  counterexample  loglog singular weak solution: table and residuals\n"
      << "  probe           amplitude sweep: Morrey norm vs Holder exponent\n"
      << "Values for --h accept fractions (1/256).\n";
}

CliArgs parse_args(int argc, char** argv) {
  CliArgs args;
  if (argc < 2) throw ConfigError("missing subcommand");
  args.subcommand = argv[1];
  for (int i = 2; i < argc; ++i) {
    const std::string flag = argv[i];
    auto need_value = [&](const char* name) -> std::string {
      if (i + 1 >= argc) throw ConfigError(std::string("missing value for ") + name);
      return argv[++i];
    };
    if (flag == "--config")
      args.config_path = need_value("--config");
    else if (flag == "--out")
      args.out_dir = need_value("--out");
    else if (flag == "--seed")
      args.seed = static_cast<unsigned>(std::stoul(need_value("--seed")));
    else if (flag == "--h")
      args.h_override = Config::parse_number(need_value("--h"));
    else
      throw ConfigError("unknown flag " + flag);
  }
  return args;
}

GridPtr grid_from(const Config& cfg, const CliArgs& args, double default_h,
                  bool offset = false, bool puncture = false) {
  double h = cfg.get_double("grid", "h", default_h);
  if (args.h_override) h = *args.h_override;
  offset = cfg.get_bool("grid", "offset", offset);
  puncture = cfg.get_bool("grid", "puncture", puncture);
  return DiscGrid::make(h, offset, puncture);
}

SolverConfig solver_from(const Config& cfg) {
  SolverConfig sc;
  sc.damping = cfg.get_double("solver", "damping", sc.damping);
  sc.max_iters = cfg.get_int("solver", "max_iters", sc.max_iters);
  sc.residual_tol = cfg.get_double("solver", "residual_tol", sc.residual_tol);
  return sc;
}

BoundaryClosure boundary_from(const Config& cfg, const QuadricSpec& q, const GridPtr& grid) {
  std::string default_kind = q.sig.dim() == 2 ? "s11_exact" : "cap";
  if (q.level < 0) default_kind = "h2_cap";
  const std::string kind = cfg.get_str("boundary", "kind", default_kind);
  if (kind == "s11_exact")
    return boundary_s11_exact(cfg.get_double("boundary", "a", 0.6),
                              cfg.get_double("boundary", "b", 0.6));
  if (kind == "cap") return boundary_cap(q, cfg.get_double("boundary", "r0", 0.4));
  if (kind == "h2_cap") return boundary_h2_cap(cfg.get_double("boundary", "r0", 0.5));
  if (kind == "constant") {
    const std::vector<double> v = cfg.get_doubles("boundary", "v", {});
    if (static_cast<int>(v.size()) != q.sig.dim())
      throw ConfigError("boundary constant: wrong dimension");
    Eigen::VectorXd vv(v.size());
    for (size_t i = 0; i < v.size(); ++i) vv[static_cast<int>(i)] = v[i];
    return boundary_constant(vv);
  }
  if (kind == "csv") {
    const std::string path = cfg.get_str("boundary", "path", "");
    const auto cols = read_field_csv(path, grid);
    if (static_cast<int>(cols.size()) != q.sig.dim())
      throw ConfigError("boundary csv: wrong component count");
    const GridPtr g = grid;
    return [cols, g, d = q.sig.dim()](double x, double y) {
      const int k = g->nearest_node(x, y);
      Eigen::VectorXd v(d);
      for (int i = 0; i < d; ++i) v[i] = cols[i][k];
      return v;
    };
  }
  throw ConfigError("unknown boundary kind " + kind);
}

StationaryTarget target_from(const Config& cfg) {
  const std::string m = cfg.get_str("target", "manifold", "S1");
  const std::string beta = cfg.get_str("target", "beta", "linear");
  const std::string omega = cfg.get_str("target", "omega", "angular");
  const double kappa = cfg.get_double("target", "kappa", 0.3);
  using M = StationaryTarget::Manifold;
  using B = StationaryTarget::BetaKind;
  using W = StationaryTarget::OmegaKind;
  const M mm = (m == "T2") ? M::Torus : M::Circle;
  const B bb = (beta == "linear") ? B::LinearY1 : B::One;
  W ww = W::Zero;
  if (omega == "angular") ww = W::Angular;
  if (omega == "mixed") ww = W::MixedTorus;
  return StationaryTarget::make(mm, bb, ww, kappa);
}

// ---------------------------------------------------------------------------

ExperimentReport run_solve(const Config& cfg, const CliArgs& args) {
  ExperimentReport rep;
  rep.experiment = "solve";
  const GridPtr grid = grid_from(cfg, args, 1.0 / 64);
  const int nu = cfg.get_int("target", "nu", 1);
  const int n = cfg.get_int("target", "n", 1);
  const std::string family = cfg.get_str("target", "family", "pseudosphere");
  const SolverConfig sc = solver_from(cfg);
  const QuadricSpec q = family == "pseudohyperbolic" ? QuadricSpec::pseudohyperbolic(nu, n)
                                                     : QuadricSpec::pseudosphere(nu, n);
  auto solved = family == "pseudohyperbolic"
                    ? solve_pseudohyperbolic(boundary_from(cfg, q, grid), nu, n, sc, grid)
                    : solve(boundary_from(cfg, q, grid), q, sc, grid);
  auto& m = solved.first;
  auto& conv = solved.second;

  rep.checks.push_back(
      CheckResult::leq("fixedpoint_step_l2", conv.final_residual, sc.residual_tol));
  rep.checks.push_back(CheckResult::leq("constraint_defect", m.constraint_defect(), 1e-12));
  rep.checks.push_back(CheckResult::info("el_residual_l2", conv.final_el_residual));
  rep.checks.push_back(CheckResult::info("energy", energy(m)));
  rep.checks.push_back(CheckResult::info("iterations", conv.iterations));

  std::vector<std::pair<std::string, const Eigen::ArrayXd*>> comps;
  for (int i = 0; i < m.dim(); ++i)
    comps.emplace_back("component_" + std::to_string(i), &m.u[i]);
  write_field_csv(args.out_dir + "/solution.csv", grid, comps);
  write_grid_meta_json(args.out_dir + "/grid.json", *grid);
  return rep;
}

ExperimentReport run_verify(const Config& cfg, const CliArgs& args) {
  ExperimentReport rep;
  rep.experiment = "verify";
  const std::vector<std::string> checks = cfg.get_strs(
      "verify", "checks",
      {"divergence", "identity", "noether", "generalized", "perturbed"});
  if (checks.empty()) return rep;

  std::vector<double> hs = cfg.get_doubles("verify", "grids", {1.0 / 32, 1.0 / 64});
  if (args.h_override) hs = {*args.h_override / 2, *args.h_override};
  const int nu = cfg.get_int("target", "nu", 1);
  const int n = cfg.get_int("target", "n", 2);
  const QuadricSpec q = QuadricSpec::pseudosphere(nu, n);
  SolverConfig sc = solver_from(cfg);
  std::mt19937 rng(args.seed);

  auto has = [&checks](const char* name) {
    for (const auto& c : checks)
      if (c == name) return true;
    return false;
  };

  std::vector<std::string> residual_jsons;
  if (has("divergence")) {
    std::vector<double> norms;
    ResidualReport coarse, fine;
    for (double h : hs) {
      GridPtr grid = DiscGrid::make(h);
      auto [m, conv] = solve(boundary_from(cfg, q, grid), q, sc, grid);
      coarse = fine;
      fine = divergence_residual(theta(m)).report;
      norms.push_back(fine.norm_max);
    }
    if (hs.size() > 1) fine = with_order(fine, coarse);
    residual_jsons.push_back(residual_report_json(fine));
    rep.checks.push_back(CheckResult::geq("div_theta_order",
                                          observed_order(norms.front(), norms.back()), 1.0));
  }
  if (has("identity")) {
    std::mt19937 rng_id(args.seed + 1);
    auto mapfn = synthetic_constrained_map(rng_id, q, 0.3);
    std::vector<double> norms;
    ResidualReport coarse, fine;
    for (double h : hs) {
      GridPtr grid = DiscGrid::make(h);
      const DiscMap m = DiscMap::sample(grid, q, mapfn);
      coarse = fine;
      fine = identity_residual(m);
      norms.push_back(fine.norm_max);
    }
    if (hs.size() > 1) fine = with_order(fine, coarse);
    residual_jsons.push_back(residual_report_json(fine));
    rep.checks.push_back(CheckResult::geq("identity_order",
                                          observed_order(norms.front(), norms.back()), 0.9));
  }
  if (has("noether")) {
    GridPtr grid = DiscGrid::make(hs.back());
    double worst = 0;
    const int trials = cfg.get_int("verify", "noether_maps", 20);
    for (int t = 0; t < trials; ++t) {
      const DiscMap m = DiscMap::sample(grid, q, synthetic_constrained_map(rng, q, 0.4));
      for (int i = 0; i < q.sig.dim(); ++i)
        for (int j = i + 1; j < q.sig.dim(); ++j)
          worst = std::max(worst, noether_defect(m, i, j));
    }
    rep.checks.push_back(CheckResult::leq("noether_exactness", worst, 1e-13));
  }
  if (has("generalized")) {
    GridPtr grid = DiscGrid::make(hs.back());
    auto [m, conv] = solve(boundary_from(cfg, q, grid), q, sc, grid);
    auto [ok, r] = generalized_harmonic_check(m, 10.0 * grid->h());
    residual_jsons.push_back(residual_report_json(r));
    rep.checks.push_back(CheckResult::geq("generalized_harmonic", ok ? 1.0 : 0.0, 1.0));
  }
  if (has("perturbed")) {
    // a deliberately non-harmonic constrained map keeps a bounded-below
    // div Theta residual under refinement
    auto perturbed = [](double x, double y) {
      Eigen::VectorXd v(2);
      const double t = 0.6 * (x + y) + 0.35 * std::sin(3 * x) * std::cos(2 * y);
      v << std::sinh(t), std::cosh(t);
      return v;
    };
    std::vector<double> norms;
    for (double h : hs) {
      GridPtr grid = DiscGrid::make(h);
      norms.push_back(divergence_residual(
                          theta(DiscMap::sample(grid, QuadricSpec::pseudosphere(1, 1), perturbed)))
                          .report.norm_max);
    }
    rep.checks.push_back(
        CheckResult::geq("perturbed_nondecay_ratio", norms.back() / norms.front(), 0.8));
  }
  if (!residual_jsons.empty()) {
    std::ofstream out(args.out_dir + "/residuals.json");
    out << "[\n";
    for (size_t i = 0; i < residual_jsons.size(); ++i)
      out << "  " << residual_jsons[i] << (i + 1 < residual_jsons.size() ? ",\n" : "\n");
    out << "]\n";
  }
  return rep;
}

ExperimentReport run_norms(const Config& cfg, const CliArgs& args) {
  ExperimentReport rep;
  rep.experiment = "norms";
  const double h = args.h_override.value_or(cfg.get_double("grid", "h", 1.0 / 128));
  GridPtr grid = DiscGrid::make(h, false, true);  // punctured for 1/|x|
  const double p = cfg.get_double("norms", "p", 4.0 / 3.0);

  const ScalarField invr = ScalarField::sample(
      grid, [](double x, double y) { return 1.0 / std::sqrt(x * x + y * y); });
  const double sqrt_pi = std::sqrt(3.14159265358979323846);
  const NormReport lz = lorentz_2inf(invr);
  rep.checks.push_back(
      CheckResult::leq("lorentz_inv_r_rel_err", std::abs(lz.value - sqrt_pi) / sqrt_pi, 0.03));

  const BallFamily fam = BallFamily::dyadic(grid);
  const RatioResult lm = lorentz_morrey_check(invr, p, fam);
  rep.checks.push_back(CheckResult::info("lorentz_morrey_ratio_inv_r", lm.ratio));

  // ratio stability under refinement
  GridPtr grid2 = DiscGrid::make(h / 2, false, true);
  const ScalarField invr2 = ScalarField::sample(
      grid2, [](double x, double y) { return 1.0 / std::sqrt(x * x + y * y); });
  const RatioResult lm2 = lorentz_morrey_check(invr2, p, BallFamily::dyadic(grid2));
  rep.checks.push_back(CheckResult::leq("lorentz_morrey_ratio_drift",
                                        std::abs(lm2.ratio - lm.ratio) / lm.ratio, 0.10));

  // corpus of random smooth fields: the empirical embedding constant
  std::mt19937 rng(args.seed);
  double corpus_max = 0;
  const int corpus = cfg.get_int("norms", "corpus", 20);
  GridPtr cg = DiscGrid::make(cfg.get_double("norms", "corpus_h", 1.0 / 64));
  const BallFamily cfam = BallFamily::dyadic(cg);
  for (int t = 0; t < corpus; ++t) {
    const ScalarField f = ScalarField::sample(cg, synthetic_trig(rng));
    const RatioResult r = lorentz_morrey_check(f, p, cfam);
    if (!r.degenerate) corpus_max = std::max(corpus_max, r.ratio);
  }
  rep.checks.push_back(CheckResult::info("lorentz_morrey_corpus_max", corpus_max));

  // M^2_2 over the full family reproduces the L2 norm at the largest ball
  {
    const ScalarField f = ScalarField::sample(cg, synthetic_trig(rng));
    const NormReport m22 = morrey_norm(f, 2.0, cfam);
    double l2 = norm_w(f);
    rep.checks.push_back(
        CheckResult::leq("m22_l2_selfcheck", std::abs(m22.value - l2) / l2, 1e-12));
  }

  // Holder exponent of |x| is 1
  {
    const ScalarField f = ScalarField::sample(
        cg, [](double x, double y) { return std::sqrt(x * x + y * y); });
    const double alpha = holder_exponent({&f.v}, cg, {{0.0, 0.0}});
    rep.checks.push_back(CheckResult::leq("holder_abs_x_dev", std::abs(alpha - 1.0), 0.05));
  }
  return rep;
}

ExperimentReport run_hodge(const Config& cfg, const CliArgs& args) {
  ExperimentReport rep;
  rep.experiment = "hodge";
  const double h = args.h_override.value_or(cfg.get_double("grid", "h", 1.0 / 64));
  GridPtr grid = DiscGrid::make(h);
  const int count = cfg.get_int("hodge", "count", 50);
  std::mt19937 rng(args.seed);

  double worst_recon = 0, worst_orth = 0;
  for (int t = 0; t < count; ++t) {
    const VectorField omega =
        VectorField::sample(grid, synthetic_trig(rng), synthetic_trig(rng));
    const HodgeParts parts = hodge_decompose(omega);
    const VectorField gp = parts.grad_part();
    const VectorField cp = parts.curl_part();
    VectorField recon(grid);
    recon.vx = omega.vx - gp.vx - cp.vx - parts.hpart.vx;
    recon.vy = omega.vy - gp.vy - cp.vy - parts.hpart.vy;
    worst_recon = std::max(worst_recon, norm_w(recon));
    const double ngp = norm_w(gp), ncp = norm_w(cp), nh = norm_w(parts.hpart);
    auto normed = [](double dot, double na, double nb) {
      const double d = na * nb;
      return d > 1e-300 ? std::abs(dot) / d : 0.0;
    };
    worst_orth = std::max({worst_orth, normed(dot_w(gp, cp), ngp, ncp),
                           normed(dot_w(gp, parts.hpart), ngp, nh),
                           normed(dot_w(cp, parts.hpart), ncp, nh)});
  }
  rep.checks.push_back(CheckResult::leq("reconstruction_residual", worst_recon, 1e-8));
  rep.checks.push_back(CheckResult::leq("pairwise_orthogonality", worst_orth, 1e-6));

  // pure-gradient and pure-curl inputs: cross-part leakage
  {
    const ScalarField f = ScalarField::sample(grid, synthetic_trig(rng));
    const HodgeParts parts = hodge_decompose(grad(f));
    rep.checks.push_back(CheckResult::leq("pure_gradient_leakage",
                                          norm_w(parts.curl_part()), 1e-7));
  }
  {
    auto raw = synthetic_trig(rng);
    const TwoVectorField xi = TwoVectorField::sample(grid, [&](double x, double y) {
      const double r2 = x * x + y * y;
      if (r2 >= 0.64) return 0.0;
      return raw(x, y) * std::exp(-r2 / (0.64 - r2));
    });
    const HodgeParts parts = hodge_decompose(curl2(xi));
    rep.checks.push_back(CheckResult::leq("pure_curl_leakage",
                                          norm_w(parts.grad_part()), 1e-7));
  }
  return rep;
}

ExperimentReport run_lorentz(const Config& cfg, const CliArgs& args) {
  ExperimentReport rep;
  rep.experiment = "lorentz";
  const StationaryTarget target = target_from(cfg);
  LorentzSolverConfig lc;
  lc.residual_tol = cfg.get_double("solver", "residual_tol", 1e-7);
  lc.damping = cfg.get_double("solver", "damping", 0.5);
  lc.max_iters = cfg.get_int("solver", "max_iters", 2000);

  const double amp_t = cfg.get_double("boundary", "amplitude_t", 0.3);
  const double amp_u = cfg.get_double("boundary", "amplitude_u", 0.4);
  auto t_g = [amp_t](double x, double y) { return amp_t * (x + 0.5 * y); };
  auto u_g = [amp_u](double x, double y) {
    const double phi = amp_u * (x - 0.3 * y);
    Eigen::VectorXd v(2);
    v << std::cos(phi), std::sin(phi);
    return v;
  };

  const double h = args.h_override.value_or(cfg.get_double("grid", "h", 1.0 / 32));
  std::vector<double> tworoute, current;
  double qinv_defect = 0;
  for (double hh : {h, h / 2}) {
    GridPtr grid = DiscGrid::make(hh);
    auto [m, conv] = solve_lorentz(t_g, u_g, target, lc, grid);
    const TwoRouteDiff diff = two_route_consistency(m.t, m.u, target);
    tworoute.push_back(diff.l2);
    current.push_back(stationary_current_residual(m.t, m.u, target).norm_max);
    const AssembledSystem sys = assemble_system(m.t, m.u, target);
    const BoundReport bounds = bound_check(sys, m.t, m.u, target);
    qinv_defect = std::max(qinv_defect, bounds.qinv_closed_form_defect);
    if (hh == h) {
      rep.checks.push_back(CheckResult::info("Q_frob_max", bounds.Q_frob_max));
      rep.checks.push_back(CheckResult::info("Qinv_frob_max", bounds.Qinv_frob_max));
      rep.checks.push_back(CheckResult::info("F_frob_max", bounds.F_frob_max));
      rep.checks.push_back(CheckResult::info("theta_ratio", bounds.theta_ratio));
      rep.checks.push_back(CheckResult::info("curlzeta_ratio", bounds.curlzeta_ratio));
    }
  }
  rep.checks.push_back(CheckResult::leq("qinv_closed_form_defect", qinv_defect, 1e-12));
  rep.checks.push_back(
      CheckResult::geq("two_route_order", observed_order(tworoute[0], tworoute[1]), 0.8));
  rep.checks.push_back(
      CheckResult::geq("current_residual_order", observed_order(current[0], current[1]), 1.0));
  return rep;
}

ExperimentReport run_counterexample(const Config& cfg, const CliArgs& args) {
  ExperimentReport rep;
  rep.experiment = "counterexample";
  const double h = args.h_override.value_or(cfg.get_double("grid", "h", 1.0 / 256));
  std::vector<double> grid_hs = cfg.get_doubles("counterexample", "grids", {1.0 / 64, 1.0 / 128});
  bool have_h = false;
  for (double gh : grid_hs) have_h = have_h || std::abs(gh - h) < 1e-15;
  if (!have_h) grid_hs.push_back(h);
  std::sort(grid_hs.begin(), grid_hs.end(), std::greater<double>());  // coarse to fine
  const std::vector<double> sampled_hs =
      cfg.get_doubles("counterexample", "sampled", {1e-3, 1e-4});

  const auto rows = unboundedness_report(grid_hs, sampled_hs);
  std::vector<std::vector<double>> csv_rows;
  std::vector<std::string> suffixes;
  for (const auto& r : rows) {
    csv_rows.push_back({r.h, r.max_abs_u, r.grad_l2});
    suffixes.push_back(r.mode);
  }
  write_csv(args.out_dir + "/unboundedness.csv", "h,max_abs_u,grad_l2,mode", csv_rows, suffixes);

  // growth + stability checks
  const auto& fine = rows[grid_hs.size() - 1];
  const auto& prev = rows[grid_hs.size() - 2];
  rep.checks.push_back(CheckResult::geq("sup_growth", fine.max_abs_u - prev.max_abs_u, 1e-3));
  rep.checks.push_back(CheckResult::leq(
      "grad_l2_stability",
      std::abs(fine.grad_l2 * fine.grad_l2 - prev.grad_l2 * prev.grad_l2) /
          (prev.grad_l2 * prev.grad_l2),
      0.02));
  for (const auto& r : rows)
    if (r.mode == "sampled" && r.h == 1e-4)
      rep.checks.push_back(CheckResult::geq("sampled_sup_at_1e-4", r.max_abs_u, 2.29));

  // weak residual and pointwise Laplacian at the configured grid
  GridPtr grid = DiscGrid::make(h, false, true);
  const SingularSolution sol = build_singular(grid);
  const WeakSolutionReport weak = verify_weak_solution(sol);
  rep.checks.push_back(
      CheckResult::leq("pointwise_laplacian_rel_err", weak.pointwise_rel_error_at_half, 1e-3));
  rep.checks.push_back(CheckResult::info("weak_defect_max", weak.max_normalized));

  // so(1,1) structure: decomposition and transformed system
  const So11Parts parts = so11_decompose(sol.omega);
  VectorField curl_part = curl2(parts.s2);
  rep.checks.push_back(CheckResult::leq("omega2_norm", norm_w(curl_part), 1e-7));
  const TransformedReport tr = transformed_residual(sol, parts.s2);
  {
    std::ofstream out(args.out_dir + "/residuals.json");
    out << "[\n  " << residual_report_json(tr.residual) << "\n]\n";
  }
  rep.checks.push_back(CheckResult::info("transformed_residual_max", tr.residual.norm_max));
  rep.checks.push_back(CheckResult::info("commutation_defect", tr.commutation_max));

  // value anchor: s = 0 at r = 2/e
  const int k0 = grid->nearest_node(2.0 / std::exp(1.0), 0.0);
  rep.checks.push_back(CheckResult::leq("s_zero_at_2_over_e", std::abs(sol.s.v[k0]),
                                        3.0 * grid->h()));
  return rep;
}

ExperimentReport run_probe(const Config& cfg, const CliArgs& args) {
  ExperimentReport rep;
  rep.experiment = "probe";
  const double h = args.h_override.value_or(cfg.get_double("grid", "h", 1.0 / 32));
  GridPtr grid = DiscGrid::make(h);
  const QuadricSpec q = QuadricSpec::pseudosphere(cfg.get_int("target", "nu", 1),
                                                  cfg.get_int("target", "n", 2));
  SolverConfig sc = solver_from(cfg);
  const double p = cfg.get_double("probe", "p", 4.0 / 3.0);
  const std::vector<double> amplitudes = cfg.get_doubles(
      "probe", "amplitudes", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0});

  const auto rows = epsilon_probe([&](double s) { return boundary_cap(q, s); }, amplitudes, q,
                                  sc, grid, p);
  write_probe_csv(args.out_dir + "/probe.csv", rows);

  bool monotone = true;
  double prev = -1;
  int converged = 0;
  for (const auto& r : rows) {
    if (r.status == "NonConvergence") continue;
    ++converged;
    if (r.morrey < prev) monotone = false;
    prev = r.morrey;
  }
  rep.checks.push_back(CheckResult::geq("morrey_column_monotone", monotone ? 1.0 : 0.0, 1.0));
  rep.checks.push_back(CheckResult::geq("converged_rows", converged,
                                        std::min<double>(3.0, amplitudes.size())));
  double min_alpha_small = 1e300;
  for (size_t i = 0; i < rows.size() && i < 3; ++i)
    if (rows[i].status == "ok") min_alpha_small = std::min(min_alpha_small, rows[i].holder_alpha);
  rep.checks.push_back(CheckResult::geq("holder_alpha_small_amplitudes", min_alpha_small, 0.5));
  // the sweep brackets an empirical transition; it does not estimate the
  // epsilon-regularity threshold constant
  rep.checks.push_back(CheckResult::info("transition_is_empirical_only", 1.0));
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CliArgs args;
  try {
    args = parse_args(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    print_usage();
    return 2;
  }

  try {
    Config cfg;
    if (!args.config_path.empty()) cfg = Config::parse_file(args.config_path);
    std::filesystem::create_directories(args.out_dir);

    std::vector<ExperimentReport> reports;
    if (args.subcommand == "solve")
      reports.push_back(run_solve(cfg, args));
    else if (args.subcommand == "verify")
      reports.push_back(run_verify(cfg, args));
    else if (args.subcommand == "norms")
      reports.push_back(run_norms(cfg, args));
    else if (args.subcommand == "hodge")
      reports.push_back(run_hodge(cfg, args));
    else if (args.subcommand == "lorentz")
      reports.push_back(run_lorentz(cfg, args));
    else if (args.subcommand == "counterexample")
      reports.push_back(run_counterexample(cfg, args));
    else if (args.subcommand == "probe")
      reports.push_back(run_probe(cfg, args));
    else {
      std::cerr << "error: unknown subcommand " << args.subcommand << "\n";
      print_usage();
      return 2;
    }

    write_report_json(args.out_dir + "/report.json", reports);
    bool ok = true;
    for (const auto& r : reports) ok = ok && r.all_passed();
    for (const auto& r : reports)
      for (const auto& c : r.checks)
        std::cout << (c.pass ? "[pass] " : "[FAIL] ") << r.experiment << "/" << c.name << " = "
                  << c.value << (std::isfinite(c.tol) ? " (tol " + std::to_string(c.tol) + ")" : "")
                  << "\n";
    return ok ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NonConvergence& e) {
    std::cerr << "non-convergence: " << e.what() << " (iterations " << e.iterations
              << ", residual " << e.residual << ")\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
