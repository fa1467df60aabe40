#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pseudomap/conservation.hpp"
#include "pseudomap/hodge.hpp"
#include "pseudomap/synthetic.hpp"

using namespace pmap;

namespace {

DiscMap s11_exact_map(GridPtr g, double a, double b) {
  return DiscMap::sample(g, QuadricSpec::pseudosphere(1, 1), [a, b](double x, double y) {
    Eigen::VectorXd v(2);
    const double t = a * x + b * y;
    v << std::sinh(t), std::cosh(t);
    return v;
  });
}

DiscMap constant_map(GridPtr g, const QuadricSpec& q) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(q.sig.dim());
  p[q.level > 0 ? q.sig.dim() - 1 : 0] = 1.0;
  return DiscMap::sample(g, q, [p](double, double) { return p; });
}

}  // namespace

TEST(DivergenceResidual, ConstantMapExactZero) {
  auto g = DiscGrid::make(1.0 / 24);
  const DiscMap m = constant_map(g, QuadricSpec::pseudosphere(1, 2));
  const DivergenceResidual dr = divergence_residual(theta(m));
  EXPECT_DOUBLE_EQ(dr.report.norm_max, 0.0);
  EXPECT_DOUBLE_EQ(dr.report.norm_l1, 0.0);
}

TEST(DivergenceResidual, ExactSolutionResidualTiny) {
  // For the affine-angle family the discrete Theta is exactly constant
  // (cosh^2 - sinh^2 = 1 collapses the centered differences), so div Theta
  // vanishes in exact arithmetic; only 1/h^2-scaled roundoff remains.
  for (double h : {1.0 / 32, 1.0 / 64}) {
    auto g = DiscGrid::make(h);
    EXPECT_LE(divergence_residual(theta(s11_exact_map(g, 0.6, 0.4))).report.norm_max, 1e-10);
  }
}

TEST(DivergenceResidual, SolverOutputDecaysFirstOrder) {
  const QuadricSpec q = QuadricSpec::pseudosphere(1, 2);
  SolverConfig cfg;
  std::vector<double> norms;
  for (double h : {1.0 / 32, 1.0 / 64}) {
    auto g = DiscGrid::make(h);
    auto [m, rep] = solve(boundary_cap(q, 0.4), q, cfg, g);
    norms.push_back(divergence_residual(theta(m)).report.norm_max);
  }
  EXPECT_GE(observed_order(norms[0], norms[1]), 1.0);
}

TEST(DivergenceResidual, PerturbedMapDoesNotDecay) {
  // a fixed non-harmonic constrained map: div Theta stays bounded below
  const QuadricSpec q = QuadricSpec::pseudosphere(1, 1);
  auto perturbed = [](double x, double y) {
    Eigen::VectorXd v(2);
    const double t = 0.6 * (x + y) + 0.35 * std::sin(3 * x) * std::cos(2 * y);
    v << std::sinh(t), std::cosh(t);
    return v;
  };
  std::vector<double> norms;
  for (double h : {1.0 / 32, 1.0 / 64}) {
    auto g = DiscGrid::make(h);
    norms.push_back(
        divergence_residual(theta(DiscMap::sample(g, q, perturbed))).report.norm_max);
  }
  EXPECT_GE(norms[1] / norms[0], 0.8);  // ratio between refinements: non-decaying
}

TEST(IdentityResidual, ConstantMapExactZeroAndDecay) {
  auto g = DiscGrid::make(1.0 / 24);
  const QuadricSpec q = QuadricSpec::pseudosphere(1, 2);
  EXPECT_DOUBLE_EQ(identity_residual(constant_map(g, q)).norm_max, 0.0);

  // random smooth constrained, deliberately non-harmonic: identity decays anyway
  std::mt19937 rng(71);
  auto mapfn = synthetic_constrained_map(rng, q, 0.4);
  std::vector<double> norms;
  for (double h : {1.0 / 32, 1.0 / 64}) {
    norms.push_back(identity_residual(DiscMap::sample(DiscGrid::make(h), q, mapfn)).norm_max);
  }
  EXPECT_GE(observed_order(norms[0], norms[1]), 0.9);
}

TEST(IdentityResidual, ExactSolutionResidualTiny) {
  // discretely exact for the affine-angle family (see DivergenceResidual)
  for (double h : {1.0 / 32, 1.0 / 64}) {
    EXPECT_LE(identity_residual(s11_exact_map(DiscGrid::make(h), 0.6, 0.6)).norm_max, 1e-10);
  }
}

TEST(IdentityResidual, RejectsHyperbolicLevel) {
  auto g = DiscGrid::make(1.0 / 16);
  const QuadricSpec q = QuadricSpec::pseudohyperbolic(0, 1);
  Eigen::VectorXd p(2);
  p << 1, 0;
  const DiscMap m = DiscMap::sample(g, q, [p](double, double) { return p; });
  EXPECT_THROW(identity_residual(m), Error);
}

TEST(Noether, ProportionalityExact) {
  std::mt19937 rng(73);
  auto g = DiscGrid::make(1.0 / 16);
  // nu = 0: J = Theta^{ij} exactly
  {
    const QuadricSpec q = QuadricSpec::pseudosphere(0, 2);
    const DiscMap m = DiscMap::sample(g, q, synthetic_constrained_map(rng, q, 0.5));
    const ThetaField th = theta(m);
    const VectorField J = noether_current(m, 0, 1);
    double worst = 0;
    for (int k = 0; k < g->num_nodes(); ++k)
      worst = std::max(worst, std::abs(J.vx[k] - th.get(0, 1, 0, k)));
    EXPECT_LE(worst, 1e-15);
  }
  // nu = 1, (i,j) = (0,1): eps_00 eps_11 = -1, so J = -Theta^{01}
  {
    const QuadricSpec q = QuadricSpec::pseudosphere(1, 2);
    const DiscMap m = DiscMap::sample(g, q, synthetic_constrained_map(rng, q, 0.5));
    const ThetaField th = theta(m);
    const VectorField J = noether_current(m, 0, 1);
    double worst = 0;
    for (int k = 0; k < g->num_nodes(); ++k)
      worst = std::max(worst, std::abs(J.vx[k] + th.get(0, 1, 0, k)));
    EXPECT_LE(worst, 1e-15);
  }
  // constant map: zero current
  {
    const QuadricSpec q = QuadricSpec::pseudosphere(1, 2);
    const VectorField J = noether_current(constant_map(g, q), 0, 2);
    EXPECT_DOUBLE_EQ(J.vx.abs().maxCoeff(), 0.0);
  }
  EXPECT_THROW(noether_current(constant_map(g, QuadricSpec::pseudosphere(1, 2)), 1, 1), Error);
}

TEST(Noether, DefectTinyOnRandomMaps) {
  std::mt19937 rng(79);
  auto g = DiscGrid::make(1.0 / 16);
  for (int nu = 0; nu <= 3; ++nu) {
    const QuadricSpec q = QuadricSpec::pseudosphere(nu, 3);
    for (int t = 0; t < 5; ++t) {
      const DiscMap m = DiscMap::sample(g, q, synthetic_constrained_map(rng, q, 0.5));
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) EXPECT_LE(noether_defect(m, i, j), 1e-13);
    }
  }
}

TEST(MorreyEstimate, DegenerateAndStable) {
  auto g = DiscGrid::make(1.0 / 32);
  EXPECT_TRUE(morrey_estimate_ratio(constant_map(g, QuadricSpec::pseudosphere(1, 2)), 4.0 / 3.0)
                  .degenerate);

  std::vector<double> ratios;
  for (double h : {1.0 / 64, 1.0 / 128}) {
    ratios.push_back(
        morrey_estimate_ratio(s11_exact_map(DiscGrid::make(h), 0.6, 0.6), 4.0 / 3.0).ratio);
  }
  EXPECT_GT(ratios[0], 0.0);
  EXPECT_NEAR(ratios[1], ratios[0], 0.10 * ratios[0]);
}

TEST(MorreyEstimate, ShrinkingAmplitudeFamilyBounded) {
  auto g = DiscGrid::make(1.0 / 48);
  double worst = 0;
  for (double s : {0.1, 0.2, 0.4, 0.6}) {
    const MorreyRatio r = morrey_estimate_ratio(s11_exact_map(g, s, s), 4.0 / 3.0);
    EXPECT_FALSE(r.degenerate);
    worst = std::max(worst, r.ratio);
  }
  EXPECT_LT(worst, 50.0);  // uniformly bounded across the sweep
}

TEST(StationaryCurrent, HarmonicTSecondOrder) {
  const StationaryTarget target = StationaryTarget::make(
      StationaryTarget::Manifold::Circle, StationaryTarget::BetaKind::One,
      StationaryTarget::OmegaKind::Zero);
  std::vector<double> norms;
  for (double h : {1.0 / 32, 1.0 / 64}) {
    auto g = DiscGrid::make(h);
    const ScalarField t =
        ScalarField::sample(g, [](double x, double y) { return std::exp(x) * std::sin(y); });
    std::vector<Eigen::ArrayXd> u(2, Eigen::ArrayXd::Zero(g->num_nodes()));
    u[0].setConstant(1.0);  // constant point on the circle
    norms.push_back(stationary_current_residual(t, u, target).norm_max);
  }
  EXPECT_GE(observed_order(norms[0], norms[1]), 1.8);
}

TEST(StationaryCurrent, ConstantPairExactZero) {
  const StationaryTarget target = StationaryTarget::make(
      StationaryTarget::Manifold::Circle, StationaryTarget::BetaKind::LinearY1,
      StationaryTarget::OmegaKind::Angular, 0.3);
  auto g = DiscGrid::make(1.0 / 24);
  const ScalarField t = ScalarField::sample(g, [](double, double) { return 0.7; });
  std::vector<Eigen::ArrayXd> u(2, Eigen::ArrayXd::Zero(g->num_nodes()));
  u[0].setConstant(std::cos(0.4));
  u[1].setConstant(std::sin(0.4));
  EXPECT_DOUBLE_EQ(stationary_current_residual(t, u, target).norm_max, 0.0);
}

TEST(GeneralizedHarmonic, SeparatesSolutionsFromPerturbations) {
  const QuadricSpec q = QuadricSpec::pseudosphere(1, 1);
  auto g = DiscGrid::make(1.0 / 64);
  auto [ok_exact, rep_exact] = generalized_harmonic_check(s11_exact_map(g, 0.6, 0.6),
                                                          10.0 * g->h());
  EXPECT_TRUE(ok_exact);

  std::mt19937 rng(83);
  const DiscMap bad = DiscMap::sample(g, q, synthetic_constrained_map(rng, q, 0.5));
  auto [ok_bad, rep_bad] = generalized_harmonic_check(bad, 10.0 * g->h());
  EXPECT_FALSE(ok_bad);
}

TEST(DivergenceResidual, ConservedCurrentsAdmitStreamPotentials) {
  // div Theta^{ij} ~ 0 for a converged solve, so each component is a curl:
  // the recovered stream potential reproduces it within the contract.
  const QuadricSpec q = QuadricSpec::pseudosphere(1, 2);
  SolverConfig cfg;
  auto g = DiscGrid::make(1.0 / 48);
  auto [m, rep] = solve(boundary_cap(q, 0.4), q, cfg, g);
  const ThetaField th = theta(m);
  for (size_t p = 0; p < th.tx.size(); ++p) {
    VectorField V(g);
    V.vx = th.tx[p];
    V.vy = th.ty[p];
    const ScalarField dv = div(V);
    double div_l2 = 0;
    for (int k : g->nodes_with_min_layer(3)) div_l2 += g->weight(k) * dv.v[k] * dv.v[k];
    div_l2 = std::sqrt(div_l2);
    const double tol = 1.5 * div_l2 + 1e-12;
    const TwoVectorField eta = curl_potential(V, tol);
    const VectorField back = curl2(eta);
    VectorField diff(g);
    diff.vx = back.vx - V.vx;
    diff.vy = back.vy - V.vy;
    EXPECT_LE(norm_w(diff), 10.0 * tol) << "pair " << p;
  }
}
