#include "pseudomap/maps.hpp"

#include <cmath>

namespace pmap {

double DiscMap::constraint_defect() const {
  double worst = 0;
  for (int k = 0; k < grid->num_nodes(); ++k) {
    double q = 0;
    for (int i = 0; i < dim(); ++i) q += quadric.sig.diag(i) * u[i][k] * u[i][k];
    worst = std::max(worst, std::abs(q - quadric.level));
  }
  return worst;
}

void DiscMap::project_all(double cone_tol) {
  for (int k = 0; k < grid->num_nodes(); ++k)
    set(k, project_to_quadric(at(k), quadric, cone_tol));
}

DiscMap DiscMap::sample(GridPtr g, const QuadricSpec& q,
                        const std::function<Eigen::VectorXd(double, double)>& f,
                        bool project) {
  DiscMap m(std::move(g), q);
  for (int k = 0; k < m.grid->num_nodes(); ++k) m.set(k, f(m.grid->x(k), m.grid->y(k)));
  if (project) m.project_all();
  return m;
}

double energy(const DiscMap& m) {
  const auto& g = *m.grid;
  Eigen::ArrayXd dx, dy;
  Eigen::ArrayXd dens = Eigen::ArrayXd::Zero(g.num_nodes());
  for (int i = 0; i < m.dim(); ++i) {
    g.apply_d(m.u[i], 0, dx);
    g.apply_d(m.u[i], 1, dy);
    dens += m.quadric.sig.diag(i) * (dx.square() + dy.square());
  }
  double e = 0;
  for (int k = 0; k < g.num_nodes(); ++k) e += g.weight(k) * dens[k];
  return 0.5 * e;
}

ThetaField theta(const DiscMap& m) {
  const auto& g = *m.grid;
  const int d = m.dim();
  ThetaField th;
  th.grid = m.grid;
  th.dim = d;
  std::vector<Eigen::ArrayXd> gx(d), gy(d);
  for (int i = 0; i < d; ++i) {
    g.apply_d(m.u[i], 0, gx[i]);
    g.apply_d(m.u[i], 1, gy[i]);
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      th.tx.push_back(m.u[i] * gx[j] - m.u[j] * gx[i]);
      th.ty.push_back(m.u[i] * gy[j] - m.u[j] * gy[i]);
    }
  }
  return th;
}

ElResidual el_residual(const DiscMap& m) {
  const auto& g = *m.grid;
  const int d = m.dim();
  const int nn = g.num_nodes();

  std::vector<Eigen::ArrayXd> gx(d), gy(d), lap(d);
  for (int i = 0; i < d; ++i) {
    g.apply_d(m.u[i], 0, gx[i]);
    g.apply_d(m.u[i], 1, gy[i]);
    Eigen::ArrayXd a, b;
    g.apply_d2(m.u[i], 0, a);
    g.apply_d2(m.u[i], 1, b);
    lap[i] = a + b;
  }

  // lambda = (grad u)^T E grad u
  Eigen::ArrayXd lambda = Eigen::ArrayXd::Zero(nn);
  for (int j = 0; j < d; ++j)
    lambda += m.quadric.sig.diag(j) * (gx[j].square() + gy[j].square());

  ElResidual out;
  out.theta_form.assign(d, Eigen::ArrayXd::Zero(nn));
  out.lambda_form.assign(d, Eigen::ArrayXd::Zero(nn));
  for (int i = 0; i < d; ++i) {
    // (Theta E grad u)^i = sum_j eps_j Theta^{ij} . grad u^j
    Eigen::ArrayXd contraction = Eigen::ArrayXd::Zero(nn);
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      const double eps = m.quadric.sig.diag(j);
      contraction += eps * ((m.u[i] * gx[j] - m.u[j] * gx[i]) * gx[j] +
                            (m.u[i] * gy[j] - m.u[j] * gy[i]) * gy[j]);
    }
    out.theta_form[i] = -lap[i] - contraction;
    out.lambda_form[i] = -lap[i] - lambda * m.u[i];
  }
  for (int k : g.interior_nodes())
    for (int i = 0; i < d; ++i)
      out.discrepancy_max =
          std::max(out.discrepancy_max, std::abs(out.theta_form[i][k] - out.lambda_form[i][k]));
  return out;
}

namespace {

double interior_l2(const DiscGrid& g, const std::vector<Eigen::ArrayXd>& fields) {
  double acc = 0;
  for (int k : g.interior_nodes()) {
    double s = 0;
    for (const auto& f : fields) s += f[k] * f[k];
    acc += g.weight(k) * s;
  }
  return std::sqrt(acc);
}

}  // namespace

std::pair<DiscMap, ConvergenceReport> solve(const BoundaryClosure& g, const QuadricSpec& q,
                                            const SolverConfig& cfg, GridPtr grid) {
  const int d = q.sig.dim();
  auto poisson = PoissonSolver::shared_for(grid);

  // boundary data, projected onto the quadric; large mismatch is an input error
  DiscMap m(grid, q);
  for (int k : grid->boundary_nodes()) {
    const Eigen::VectorXd raw = g(grid->x(k), grid->y(k));
    if (static_cast<int>(raw.size()) != d)
      throw DimensionMismatch("solve: boundary data has wrong dimension");
    const Eigen::VectorXd proj = project_to_quadric(raw, q, cfg.cone_tol);
    if ((proj - raw).cwiseAbs().maxCoeff() > cfg.boundary_mismatch_tol)
      throw Error("solve: boundary data leaves the quadric by more than the tolerance");
    m.set(k, proj);
  }

  // start from the componentwise harmonic extension, projected
  {
    ScalarField zero(grid);
    for (int i = 0; i < d; ++i) {
      ScalarField bd(grid);
      bd.v = m.u[i];
      m.u[i] = poisson->solve_dirichlet(zero, bd).v;
    }
    m.project_all(cfg.cone_tol);
  }

  ConvergenceReport rep;
  double damping = cfg.damping;
  ScalarField rhs(grid);
  for (int it = 1; it <= cfg.max_iters; ++it) {
    rep.iterations = it;
    const ElResidual r = el_residual(m);
    rep.final_el_residual = interior_l2(*grid, r.theta_form);

    // correction: u <- project(u + damping * delta) with lap delta = r,
    // delta|bd = 0. (Equivalently u - damping (-lap)^{-1} r: the tangential
    // residual shrinks by 1 - damping on the linearized problem.)
    std::vector<Eigen::ArrayXd> delta(d);
    for (int i = 0; i < d; ++i) {
      rhs.v = r.theta_form[i];
      for (int k : grid->boundary_nodes()) rhs.v[k] = 0;
      ScalarField zero_b(grid);
      delta[i] = poisson->solve_dirichlet(rhs, zero_b).v;
    }

    for (;;) {
      DiscMap trial = m;
      for (int i = 0; i < d; ++i) trial.u[i] += damping * delta[i];
      try {
        trial.project_all(cfg.cone_tol);
        double step = 0;
        for (int k = 0; k < grid->num_nodes(); ++k) {
          double s = 0;
          for (int i = 0; i < d; ++i) {
            const double diff = trial.u[i][k] - m.u[i][k];
            s += diff * diff;
          }
          step += grid->weight(k) * s;
        }
        step = std::sqrt(step) / damping;
        rep.residual_trace.push_back(step);
        rep.final_residual = step;
        m = std::move(trial);
        break;
      } catch (const NullConeViolation&) {
        if (rep.damping_halvings >= cfg.max_damping_halvings)
          throw NullConeViolation(
              "solve: step crosses the null cone even after damping reduction");
        damping *= 0.5;
        ++rep.damping_halvings;
      }
    }
    if (rep.final_residual <= cfg.residual_tol) {
      rep.converged = true;
      break;
    }
  }
  rep.damping_used = damping;
  if (!rep.converged)
    throw NonConvergence("solve: Picard iteration did not reach residual_tol",
                         rep.iterations, rep.final_residual);
  if (m.constraint_defect() > cfg.constraint_tol)
    throw Error("solve: constraint defect above tolerance after projection");
  {
    const ElResidual r = el_residual(m);
    rep.final_el_residual = interior_l2(*grid, r.theta_form);
  }
  return {std::move(m), std::move(rep)};
}

std::pair<DiscMap, ConvergenceReport> solve_pseudohyperbolic(const BoundaryClosure& g, int nu,
                                                             int n, const SolverConfig& cfg,
                                                             GridPtr grid) {
  // H^n_nu = sigma(S^n_{n-nu}); solve the pseudosphere problem for the
  // rotated data and push the solution forward.
  const int nu_s = n - nu;
  const int dim = n + 1;
  const QuadricSpec qs = QuadricSpec::pseudosphere(nu_s, n);
  BoundaryClosure gs = [g, nu_s, dim](double x, double y) {
    // sigma^{-1} = left rotation by dim - nu_s
    return anti_isometry(g(x, y), dim - nu_s);
  };
  auto [ms, rep] = solve(gs, qs, cfg, grid);
  DiscMap mh(grid, QuadricSpec::pseudohyperbolic(nu, n));
  for (int k = 0; k < grid->num_nodes(); ++k) mh.set(k, anti_isometry(ms.at(k), nu_s));
  return {std::move(mh), std::move(rep)};
}

BoundaryClosure boundary_s11_exact(double a, double b) {
  return [a, b](double x, double y) {
    Eigen::VectorXd v(2);
    const double t = a * x + b * y;
    v << std::sinh(t), std::cosh(t);
    return v;
  };
}

BoundaryClosure boundary_cap(const QuadricSpec& q, double r0) {
  if (q.sig.dim() != 3 || q.level != 1)
    throw Error("boundary_cap: built-in caps are defined for S^2 and S^2_1");
  const int nu = q.sig.nu();
  if (nu == 0) {
    return [r0](double x, double y) {
      const double th = std::atan2(y, x);
      Eigen::VectorXd v(3);
      v << std::sin(r0) * std::cos(th), std::sin(r0) * std::sin(th), std::cos(r0);
      return v;
    };
  }
  if (nu == 1) {
    return [r0](double x, double y) {
      const double th = std::atan2(y, x);
      const double w = r0 * std::cos(th);
      const double p = r0 * std::sin(th);
      Eigen::VectorXd v(3);
      v << std::sinh(w), std::cosh(w) * std::sin(p), std::cosh(w) * std::cos(p);
      return v;
    };
  }
  throw Error("boundary_cap: unsupported signature");
}

BoundaryClosure boundary_constant(const Eigen::VectorXd& v) {
  return [v](double, double) { return v; };
}

BoundaryClosure boundary_h2_cap(double r0) {
  return [r0](double x, double y) {
    const double th = std::atan2(y, x);
    Eigen::VectorXd v(3);
    v << std::cosh(r0), std::sinh(r0) * std::cos(th), std::sinh(r0) * std::sin(th);
    return v;
  };
}

}  // namespace pmap
