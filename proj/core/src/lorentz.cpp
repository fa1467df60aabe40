#include "pseudomap/lorentz.hpp"

#include <cmath>

#include "pseudomap/norms.hpp"

namespace pmap {

// ---------------------------------------------------------------------------
// StationaryTarget
// ---------------------------------------------------------------------------

double StationaryTarget::block_radius(const Eigen::VectorXd& y, int b) const {
  return std::sqrt(y[2 * b] * y[2 * b] + y[2 * b + 1] * y[2 * b + 1]);
}

void StationaryTarget::compute_lambda() {
  // lambda bound: sup over M of beta, 1/beta, omega and first derivatives,
  // sampled densely on the compact manifold.
  double lam = 1.0;
  const int samples = 512;
  const double two_pi = 2.0 * 3.14159265358979323846;
  auto consider = [&lam](double v) { lam = std::max(lam, std::abs(v)); };
  const int inner = (manifold_ == Manifold::Torus) ? 64 : 1;
  for (int s = 0; s < samples; ++s) {
    const double pa = s * two_pi / samples;
    for (int q = 0; q < inner; ++q) {
      const double pb = q * two_pi / inner;
      Eigen::VectorXd y(ambient_dim());
      y[0] = std::cos(pa);
      y[1] = std::sin(pa);
      if (manifold_ == Manifold::Torus) {
        y[2] = std::cos(pb);
        y[3] = std::sin(pb);
      }
      consider(beta(y));
      consider(1.0 / beta(y));
      consider(grad_beta(y).cwiseAbs().maxCoeff() * ambient_dim());
      consider(omega(y).cwiseAbs().maxCoeff() * ambient_dim());
      consider(omega_jacobian(y).cwiseAbs().maxCoeff() * ambient_dim());
    }
  }
  lambda_ = lam;
}

StationaryTarget StationaryTarget::make(Manifold m, BetaKind b, OmegaKind w, double kappa) {
  StationaryTarget t;
  t.manifold_ = m;
  t.beta_kind_ = b;
  t.omega_kind_ = w;
  t.kappa_ = kappa;
  t.delta_ = (m == Manifold::Circle) ? 0.5 : 0.35;
  if (w == OmegaKind::MixedTorus && m != Manifold::Torus)
    throw Error("StationaryTarget: MixedTorus omega needs the torus");
  t.name_ = (m == Manifold::Circle ? std::string("S1") : std::string("T2"));
  t.name_ += (b == BetaKind::One ? "/beta=1" : "/beta=2+y1/2");
  t.name_ += (w == OmegaKind::Zero      ? "/omega=0"
              : w == OmegaKind::Angular ? "/omega=angular"
                                        : "/omega=mixed");
  t.compute_lambda();
  return t;
}

StationaryTarget StationaryTarget::custom(
    Manifold m, std::function<double(const Eigen::VectorXd&)> beta,
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_beta,
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> omega,
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> omega_jac, std::string name) {
  if (!beta || !grad_beta || !omega || !omega_jac)
    throw Error("StationaryTarget::custom: closures must come with their gradients");
  StationaryTarget t;
  t.manifold_ = m;
  t.delta_ = (m == Manifold::Circle) ? 0.5 : 0.35;
  t.name_ = std::move(name);
  t.beta_fn_ = std::move(beta);
  t.grad_beta_fn_ = std::move(grad_beta);
  t.omega_fn_ = std::move(omega);
  t.omega_jac_fn_ = std::move(omega_jac);
  t.compute_lambda();
  if (!(t.lambda_ < 1e12) || t.lambda_ <= 0)
    throw Error("StationaryTarget::custom: beta must be positive and bounded on M");
  return t;
}

bool StationaryTarget::in_tube(const Eigen::VectorXd& y) const {
  for (int b = 0; b < blocks(); ++b)
    if (std::abs(block_radius(y, b) - 1.0) > delta_) return false;
  return true;
}

Eigen::VectorXd StationaryTarget::project(const Eigen::VectorXd& y) const {
  Eigen::VectorXd out = y;
  for (int b = 0; b < blocks(); ++b) {
    const double r = block_radius(y, b);
    if (r <= 0) throw OutOfTube("StationaryTarget::project: block at the origin");
    out[2 * b] /= r;
    out[2 * b + 1] /= r;
  }
  return out;
}

double StationaryTarget::beta(const Eigen::VectorXd& y) const {
  if (beta_fn_) return beta_fn_(y);
  if (beta_kind_ == BetaKind::One) return 1.0;
  return 2.0 + 0.5 * y[0] / block_radius(y, 0);
}

Eigen::VectorXd StationaryTarget::grad_beta(const Eigen::VectorXd& y) const {
  if (grad_beta_fn_) return grad_beta_fn_(y);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(ambient_dim());
  if (beta_kind_ == BetaKind::One) return g;
  const double r = block_radius(y, 0);
  const double r3 = r * r * r;
  g[0] = 0.5 * y[1] * y[1] / r3;
  g[1] = -0.5 * y[0] * y[1] / r3;
  return g;
}

Eigen::VectorXd StationaryTarget::omega(const Eigen::VectorXd& y) const {
  if (omega_fn_) return omega_fn_(y);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(ambient_dim());
  if (omega_kind_ == OmegaKind::Zero) return w;
  if (omega_kind_ == OmegaKind::Angular) {
    const double r2 = y[0] * y[0] + y[1] * y[1];
    w[0] = -kappa_ * y[1] / r2;
    w[1] = kappa_ * y[0] / r2;
    return w;
  }
  // kappa sin(phi1) dphi2 pulled back through Pi
  const double r0 = block_radius(y, 0);
  const double r1sq = y[2] * y[2] + y[3] * y[3];
  const double A = kappa_ * y[1] / r0;
  w[2] = -A * y[3] / r1sq;
  w[3] = A * y[2] / r1sq;
  return w;
}

Eigen::MatrixXd StationaryTarget::omega_jacobian(const Eigen::VectorXd& y) const {
  if (omega_jac_fn_) return omega_jac_fn_(y);
  const int d = ambient_dim();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(d, d);
  if (omega_kind_ == OmegaKind::Zero) return J;
  if (omega_kind_ == OmegaKind::Angular) {
    const double r2 = y[0] * y[0] + y[1] * y[1];
    const double r4 = r2 * r2;
    J(0, 0) = kappa_ * 2.0 * y[0] * y[1] / r4;
    J(0, 1) = kappa_ * (y[1] * y[1] - y[0] * y[0]) / r4;
    J(1, 0) = kappa_ * (y[1] * y[1] - y[0] * y[0]) / r4;
    J(1, 1) = -kappa_ * 2.0 * y[0] * y[1] / r4;
    return J;
  }
  const double r0 = block_radius(y, 0);
  const double r03 = r0 * r0 * r0;
  const double r1sq = y[2] * y[2] + y[3] * y[3];
  const double r14 = r1sq * r1sq;
  const double A = kappa_ * y[1] / r0;
  const double dA0 = -kappa_ * y[0] * y[1] / r03;
  const double dA1 = kappa_ * y[0] * y[0] / r03;
  // omega_2 = -A y3 / r1^2, omega_3 = A y2 / r1^2
  J(2, 0) = -(y[3] / r1sq) * dA0;
  J(2, 1) = -(y[3] / r1sq) * dA1;
  J(2, 2) = 2.0 * A * y[2] * y[3] / r14;
  J(2, 3) = A * (2.0 * y[3] * y[3] - r1sq) / r14;
  J(3, 0) = (y[2] / r1sq) * dA0;
  J(3, 1) = (y[2] / r1sq) * dA1;
  J(3, 2) = A * (r1sq - 2.0 * y[2] * y[2]) / r14;
  J(3, 3) = -2.0 * A * y[2] * y[3] / r14;
  return J;
}

Eigen::VectorXd StationaryTarget::normal(int l, const Eigen::VectorXd& y) const {
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(ambient_dim());
  const double r = block_radius(y, l);
  nu[2 * l] = y[2 * l] / r;
  nu[2 * l + 1] = y[2 * l + 1] / r;
  return nu;
}

Eigen::MatrixXd StationaryTarget::normal_jacobian(int l, const Eigen::VectorXd& y) const {
  const int d = ambient_dim();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(d, d);
  const double r = block_radius(y, l);
  const double r3 = r * r * r;
  const double a = y[2 * l], b = y[2 * l + 1];
  J(2 * l, 2 * l) = b * b / r3;
  J(2 * l, 2 * l + 1) = -a * b / r3;
  J(2 * l + 1, 2 * l) = -a * b / r3;
  J(2 * l + 1, 2 * l + 1) = a * a / r3;
  return J;
}

// ---------------------------------------------------------------------------
// Fields along a map
// ---------------------------------------------------------------------------

namespace {

struct MapGradients {
  Eigen::ArrayXd tx, ty;
  std::vector<Eigen::ArrayXd> ux, uy;
};

MapGradients gradients(const ScalarField& t, const std::vector<Eigen::ArrayXd>& u) {
  MapGradients g;
  t.grid->apply_d(t.v, 0, g.tx);
  t.grid->apply_d(t.v, 1, g.ty);
  g.ux.resize(u.size());
  g.uy.resize(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    t.grid->apply_d(u[i], 0, g.ux[i]);
    t.grid->apply_d(u[i], 1, g.uy[i]);
  }
  return g;
}

Eigen::VectorXd map_value(const std::vector<Eigen::ArrayXd>& u, int k) {
  Eigen::VectorXd y(u.size());
  for (size_t i = 0; i < u.size(); ++i) y[static_cast<int>(i)] = u[i][k];
  return y;
}

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

VectorField lorentz_current(const ScalarField& t, const std::vector<Eigen::ArrayXd>& u,
                            const StationaryTarget& target) {
  const GridPtr grid = t.grid;
  const MapGradients g = gradients(t, u);
  VectorField J(grid);
  const int n = target.ambient_dim();
  for (int k = 0; k < grid->num_nodes(); ++k) {
    const Eigen::VectorXd y = map_value(u, k);
    if (!target.in_tube(y)) throw OutOfTube("lorentz_current: map left the tube");
    const double b = target.beta(y);
    const Eigen::VectorXd w = target.omega(y);
    double cx = g.tx[k], cy = g.ty[k];
    for (int i = 0; i < n; ++i) {
      cx += w[i] * g.ux[i][k];
      cy += w[i] * g.uy[i][k];
    }
    J.vx[k] = b * cx;
    J.vy[k] = b * cy;
  }
  return J;
}

double lorentz_energy(const ScalarField& t, const std::vector<Eigen::ArrayXd>& u,
                      const StationaryTarget& target) {
  const GridPtr grid = t.grid;
  const MapGradients g = gradients(t, u);
  const int n = target.ambient_dim();
  double e = 0;
  for (int k = 0; k < grid->num_nodes(); ++k) {
    const Eigen::VectorXd y = map_value(u, k);
    if (!target.in_tube(y)) throw OutOfTube("lorentz_energy: map left the tube");
    const double b = target.beta(y);
    const Eigen::VectorXd w = target.omega(y);
    double cx = g.tx[k], cy = g.ty[k];
    double du2 = 0;
    for (int i = 0; i < n; ++i) {
      cx += w[i] * g.ux[i][k];
      cy += w[i] * g.uy[i][k];
      du2 += g.ux[i][k] * g.ux[i][k] + g.uy[i][k] * g.uy[i][k];
    }
    e += grid->weight(k) * (-0.5 * b * (cx * cx + cy * cy) + 0.5 * du2);
  }
  return e;
}

std::vector<Eigen::ArrayXd> lorentz_H(const ScalarField& t, const std::vector<Eigen::ArrayXd>& u,
                                      const StationaryTarget& target) {
  const GridPtr grid = t.grid;
  const MapGradients g = gradients(t, u);
  const int n = target.ambient_dim();
  const int nn = grid->num_nodes();
  std::vector<Eigen::ArrayXd> H(n, Eigen::ArrayXd::Zero(nn));
  for (int k = 0; k < nn; ++k) {
    const Eigen::VectorXd y = map_value(u, k);
    if (!target.in_tube(y)) throw OutOfTube("lorentz_H: map left the tube");
    const double b = target.beta(y);
    const Eigen::VectorXd gb = target.grad_beta(y);
    const Eigen::VectorXd w = target.omega(y);
    const Eigen::MatrixXd Jw = target.omega_jacobian(y);
    double cx = g.tx[k], cy = g.ty[k];
    for (int i = 0; i < n; ++i) {
      cx += w[i] * g.ux[i][k];
      cy += w[i] * g.uy[i][k];
    }
    const double csq = cx * cx + cy * cy;
    for (int j = 0; j < n; ++j) {
      double acc = 0;
      for (int m = 0; m < n; ++m)
        acc += (cx * g.ux[m][k] + cy * g.uy[m][k]) * (Jw(j, m) - Jw(m, j));
      H[j][k] = b * acc - 0.5 * gb[j] * csq;
    }
  }
  return H;
}

LorentzResidual el_residual_lorentz(const ScalarField& t, const std::vector<Eigen::ArrayXd>& u,
                                    const StationaryTarget& target) {
  const GridPtr grid = t.grid;
  const int n = target.ambient_dim();
  const int nn = grid->num_nodes();
  LorentzResidual out;

  out.t_eq = div(lorentz_current(t, u, target));

  const MapGradients g = gradients(t, u);
  const std::vector<Eigen::ArrayXd> H = lorentz_H(t, u, target);
  out.u_eq.assign(n, Eigen::ArrayXd::Zero(nn));
  std::vector<Eigen::ArrayXd> lap(n);
  for (int i = 0; i < n; ++i) {
    Eigen::ArrayXd a, b;
    grid->apply_d2(u[i], 0, a);
    grid->apply_d2(u[i], 1, b);
    lap[i] = a + b;
  }
  for (int k = 0; k < nn; ++k) {
    const Eigen::VectorXd y = map_value(u, k);
    Eigen::VectorXd Hk(n);
    for (int j = 0; j < n; ++j) Hk[j] = H[j][k];
    Eigen::VectorXd rhs = -Hk;
    for (int l = 0; l < target.normal_count(); ++l) {
      const Eigen::VectorXd nu = target.normal(l, y);
      const Eigen::MatrixXd Jnu = target.normal_jacobian(l, y);
      double pairing = 0;  // grad(nu_l) . grad u
      for (int i = 0; i < n; ++i) {
        double gx = 0, gy = 0;
        for (int m = 0; m < n; ++m) {
          gx += Jnu(i, m) * g.ux[m][k];
          gy += Jnu(i, m) * g.uy[m][k];
        }
        pairing += gx * g.ux[i][k] + gy * g.uy[i][k];
      }
      rhs += nu * pairing + nu.dot(Hk) * nu;
    }
    for (int j = 0; j < n; ++j) out.u_eq[j][k] = -lap[j][k] - rhs[j];
  }
  return out;
}

AssembledSystem assemble_system(const ScalarField& t, const std::vector<Eigen::ArrayXd>& u,
                                const StationaryTarget& target) {
  const GridPtr grid = t.grid;
  const int n = target.ambient_dim();
  const int d = n + 1;
  const int nn = grid->num_nodes();
  AssembledSystem sys;
  sys.grid = grid;
  sys.n = n;

  const MapGradients g = gradients(t, u);

  auto poisson = PoissonSolver::shared_for(grid);
  sys.current = lorentz_current(t, u, target);
  // eta per (3.11): stream potential with curl2(eta) ~ current, fit over all
  // nodes (grad eta ~ rotated current in least squares)
  {
    VectorField rotated(grid);
    rotated.vx = sys.current.vy;
    rotated.vy = -sys.current.vx;
    const ScalarField pot = poisson->gradient_potential(rotated);
    sys.eta = TwoVectorField(grid);
    sys.eta.xy = pot.v;
  }

  sys.theta_x.assign(static_cast<size_t>(d) * d, Eigen::ArrayXd::Zero(nn));
  sys.theta_y.assign(static_cast<size_t>(d) * d, Eigen::ArrayXd::Zero(nn));
  sys.a.assign(static_cast<size_t>(n) * n, Eigen::ArrayXd::Zero(nn));
  sys.b.assign(n, Eigen::ArrayXd::Zero(nn));
  sys.Q.assign(static_cast<size_t>(d) * d, Eigen::ArrayXd::Zero(nn));
  sys.F.assign(static_cast<size_t>(d) * d, Eigen::ArrayXd::Zero(nn));
  sys.H = lorentz_H(t, u, target);

  for (int k = 0; k < nn; ++k) {
    const Eigen::VectorXd y = map_value(u, k);
    const double b = target.beta(y);
    const Eigen::VectorXd gb = target.grad_beta(y);
    const Eigen::VectorXd w = target.omega(y);
    const Eigen::MatrixXd Jw = target.omega_jacobian(y);

    // Q = [[beta, beta omega], [0, I_n]]  (3.17)
    sys.Q[0][k] = b;
    for (int j = 0; j < n; ++j) sys.Q[j + 1][k] = b * w[j];
    for (int j = 0; j < n; ++j) sys.Q[(j + 1) * d + (j + 1)][k] = 1.0;

    // frame projector P = sum_l nu_l nu_l^T
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    for (int l = 0; l < target.normal_count(); ++l) {
      const Eigen::VectorXd nu = target.normal(l, y);
      P += nu * nu.transpose();
      const Eigen::MatrixXd Jnu = target.normal_jacobian(l, y);
      for (int i = 0; i < n; ++i) {
        double gx = 0, gy = 0;
        for (int m = 0; m < n; ++m) {
          gx += Jnu(i, m) * g.ux[m][k];
          gy += Jnu(i, m) * g.uy[m][k];
        }
        // Theta^{jk} = nu^j grad nu^k - nu^k grad nu^j  (3.13)
        for (int j = 0; j < n; ++j) {
          sys.theta_x[(j + 1) * d + (i + 1)][k] += nu[j] * gx;
          sys.theta_y[(j + 1) * d + (i + 1)][k] += nu[j] * gy;
          sys.theta_x[(i + 1) * d + (j + 1)][k] -= nu[j] * gx;
          sys.theta_y[(i + 1) * d + (j + 1)][k] -= nu[j] * gy;
        }
      }
    }

    // a_{jm} = -(dw_j/dy^m - dw_m/dy^j) + (dw_i/dy^m - dw_m/dy^i) nu^i nu^j  (3.14)
    for (int j = 0; j < n; ++j) {
      for (int m = 0; m < n; ++m) {
        double acc = -(Jw(j, m) - Jw(m, j));
        for (int i = 0; i < n; ++i) acc += (Jw(i, m) - Jw(m, i)) * P(i, j);
        sys.a[j * n + m][k] = acc;
      }
      // b_j = (dbeta/dy^j - dbeta/dy^i nu^i nu^j) / (2 beta^2)  (3.15)
      double accb = gb[j];
      for (int i = 0; i < n; ++i) accb -= gb[i] * P(i, j);
      sys.b[j][k] = accb / (2.0 * b * b);
    }
  }

  // F per (3.19): first row zero, row j+1 = (b_j, a_j1 ... a_jn)
  for (int j = 0; j < n; ++j) {
    sys.F[(j + 1) * d + 0] = sys.b[j];
    for (int m = 0; m < n; ++m) sys.F[(j + 1) * d + (m + 1)] = sys.a[j * n + m];
  }
  return sys;
}

std::vector<Eigen::ArrayXd> assembled_residual(const AssembledSystem& sys, const ScalarField& t,
                                               const std::vector<Eigen::ArrayXd>& u) {
  const GridPtr grid = sys.grid;
  const int n = sys.n;
  const int d = n + 1;
  const int nn = grid->num_nodes();

  // gradU rows: (grad t; grad u^1..grad u^n)
  std::vector<Eigen::ArrayXd> gx(d), gy(d);
  grid->apply_d(t.v, 0, gx[0]);
  grid->apply_d(t.v, 1, gy[0]);
  for (int i = 0; i < n; ++i) {
    grid->apply_d(u[i], 0, gx[i + 1]);
    grid->apply_d(u[i], 1, gy[i + 1]);
  }

  // P_i = (Q gradU)_i
  std::vector<Eigen::ArrayXd> px(d, Eigen::ArrayXd::Zero(nn)), py(d, Eigen::ArrayXd::Zero(nn));
  for (int i = 0; i < d; ++i) {
    for (int m = 0; m < d; ++m) {
      px[i] += sys.Q[i * d + m] * gx[m];
      py[i] += sys.Q[i * d + m] * gy[m];
    }
  }

  const VectorField ce = curl2(sys.eta);

  std::vector<Eigen::ArrayXd> res(d, Eigen::ArrayXd::Zero(nn));
  for (int i = 0; i < d; ++i) {
    VectorField Pi(grid);
    Pi.vx = px[i];
    Pi.vy = py[i];
    const ScalarField divPi = div(Pi);
    res[i] = -divPi.v;
    for (int m = 0; m < d; ++m) {
      res[i] -= sys.theta_x[i * d + m] * px[m] + sys.theta_y[i * d + m] * py[m];
      // curl zeta = diag(curl eta): (F curl zeta . Q gradU)_i = F_im curl eta . P_m
      res[i] -= sys.F[i * d + m] * (ce.vx * px[m] + ce.vy * py[m]);
    }
  }
  return res;
}

BoundReport bound_check(const AssembledSystem& sys, const ScalarField& t,
                        const std::vector<Eigen::ArrayXd>& u, const StationaryTarget& target) {
  const GridPtr grid = sys.grid;
  const int n = sys.n;
  const int d = n + 1;
  const int nn = grid->num_nodes();
  BoundReport rep;

  Eigen::MatrixXd Qk(d, d), Qinv_closed(d, d);
  for (int k = 0; k < nn; ++k) {
    double qf = 0, ff = 0;
    for (int i = 0; i < d * d; ++i) {
      qf += sys.Q[i][k] * sys.Q[i][k];
      ff += sys.F[i][k] * sys.F[i][k];
    }
    rep.Q_frob_max = std::max(rep.Q_frob_max, std::sqrt(qf));
    rep.F_frob_max = std::max(rep.F_frob_max, std::sqrt(ff));

    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) Qk(i, j) = sys.Q[i * d + j][k];
    const double det = Qk.determinant();
    if (std::abs(det) < 1e-14) throw SingularMatrix("bound_check: Q singular at a node");
    const Eigen::MatrixXd Qinv = Qk.inverse();
    rep.Qinv_frob_max = std::max(rep.Qinv_frob_max, Qinv.norm());

    // closed form [[1/beta, -omega],[0, I_n]] (display before (3.24))
    const Eigen::VectorXd y = map_value(u, k);
    const double b = target.beta(y);
    const Eigen::VectorXd w = target.omega(y);
    Qinv_closed.setZero();
    Qinv_closed(0, 0) = 1.0 / b;
    for (int j = 0; j < n; ++j) {
      Qinv_closed(0, j + 1) = -w[j];
      Qinv_closed(j + 1, j + 1) = 1.0;
    }
    rep.qinv_closed_form_defect =
        std::max(rep.qinv_closed_form_defect, (Qinv - Qinv_closed).cwiseAbs().maxCoeff());
  }

  // Morrey norms of the structure fields vs the gradient norm (3.23)/(3.25)/(3.27)
  const BallFamily fam = BallFamily::dyadic(grid);
  auto frob_field = [&](const std::vector<Eigen::ArrayXd>& fx,
                        const std::vector<Eigen::ArrayXd>& fy) {
    ScalarField s(grid);
    for (size_t i = 0; i < fx.size(); ++i) s.v += fx[i].square() + fy[i].square();
    s.v = s.v.sqrt();
    return s;
  };

  rep.theta_m22 = morrey_norm(frob_field(sys.theta_x, sys.theta_y), 2, fam).value;

  // gradients of the entries of F and Q
  std::vector<Eigen::ArrayXd> gFx, gFy, gQx, gQy;
  Eigen::ArrayXd dx, dy;
  for (int i = 0; i < d * d; ++i) {
    grid->apply_d(sys.F[i], 0, dx);
    grid->apply_d(sys.F[i], 1, dy);
    gFx.push_back(dx);
    gFy.push_back(dy);
    grid->apply_d(sys.Q[i], 0, dx);
    grid->apply_d(sys.Q[i], 1, dy);
    gQx.push_back(dx);
    gQy.push_back(dy);
  }
  rep.gradF_m22 = morrey_norm(frob_field(gFx, gFy), 2, fam).value;
  rep.gradQ_m22 = morrey_norm(frob_field(gQx, gQy), 2, fam).value;

  const VectorField ce = curl2(sys.eta);
  ScalarField cz(grid);
  cz.v = (std::sqrt(static_cast<double>(d))) * (ce.vx.square() + ce.vy.square()).sqrt();
  rep.curlzeta_m22 = morrey_norm(cz, 2, fam).value;

  ScalarField gt(grid);
  {
    Eigen::ArrayXd tx, ty;
    grid->apply_d(t.v, 0, tx);
    grid->apply_d(t.v, 1, ty);
    gt.v = (tx.square() + ty.square()).sqrt();
  }
  ScalarField gu(grid);
  {
    Eigen::ArrayXd ax, ay;
    for (int i = 0; i < n; ++i) {
      grid->apply_d(u[i], 0, ax);
      grid->apply_d(u[i], 1, ay);
      gu.v += ax.square() + ay.square();
    }
    gu.v = gu.v.sqrt();
  }
  rep.base_m22 = morrey_norm(gt, 2, fam).value + morrey_norm(gu, 2, fam).value;

  const double denom = std::max(rep.base_m22, 1e-300);
  rep.theta_ratio = rep.theta_m22 / denom;
  rep.gradF_ratio = rep.gradF_m22 / denom;
  rep.gradQ_ratio = rep.gradQ_m22 / denom;
  rep.curlzeta_ratio = rep.curlzeta_m22 / denom;
  return rep;
}

std::pair<LorentzMap, LorentzSolveReport> solve_lorentz(
    const std::function<double(double, double)>& t_g,
    const std::function<Eigen::VectorXd(double, double)>& u_g, const StationaryTarget& target,
    const LorentzSolverConfig& cfg, GridPtr grid) {
  const int n = target.ambient_dim();
  auto poisson = PoissonSolver::shared_for(grid);

  LorentzMap m;
  m.t = ScalarField(grid);
  m.u.assign(n, Eigen::ArrayXd::Zero(grid->num_nodes()));

  ScalarField t_bdata(grid);
  for (int k : grid->boundary_nodes()) {
    t_bdata.v[k] = t_g(grid->x(k), grid->y(k));
    Eigen::VectorXd raw = u_g(grid->x(k), grid->y(k));
    if (raw.size() != n) throw DimensionMismatch("solve_lorentz: boundary data dimension");
    if (!target.in_tube(raw))
      throw OutOfTube("solve_lorentz: boundary data outside the tube");
    const Eigen::VectorXd proj = target.project(raw);
    for (int i = 0; i < n; ++i) m.u[i][k] = proj[i];
  }

  // harmonic extension start, projected blockwise
  {
    ScalarField zero(grid);
    for (int i = 0; i < n; ++i) {
      ScalarField bd(grid);
      bd.v = m.u[i];
      m.u[i] = poisson->solve_dirichlet(zero, bd).v;
    }
    for (int k = 0; k < grid->num_nodes(); ++k) {
      const Eigen::VectorXd proj = target.project(map_value(m.u, k));
      for (int i = 0; i < n; ++i) m.u[i][k] = proj[i];
    }
    m.t = poisson->solve_dirichlet(zero, t_bdata);
  }

  LorentzSolveReport rep;
  double damping = cfg.damping;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    rep.iterations = it;

    // t-step: div(beta grad t) = -div(beta omega_i grad u^i)
    ScalarField coeff(grid);
    VectorField V(grid);
    {
      const MapGradients g = gradients(m.t, m.u);
      for (int k = 0; k < grid->num_nodes(); ++k) {
        const Eigen::VectorXd y = map_value(m.u, k);
        if (!target.in_tube(y)) throw OutOfTube("solve_lorentz: iterate left the tube");
        coeff.v[k] = target.beta(y);
        const Eigen::VectorXd w = target.omega(y);
        double sx = 0, sy = 0;
        for (int i = 0; i < n; ++i) {
          sx += w[i] * g.ux[i][k];
          sy += w[i] * g.uy[i][k];
        }
        V.vx[k] = coeff.v[k] * sx;
        V.vy[k] = coeff.v[k] * sy;
      }
    }
    ScalarField rhs_t(grid);
    rhs_t.v = -div(V).v;
    const ScalarField t_new = divform_dirichlet_solve(coeff, rhs_t, t_bdata);
    ScalarField t_diff(grid);
    t_diff.v = t_new.v - m.t.v;
    rep.t_increment = norm_w(t_diff);
    m.t = t_new;

    // u-step
    const LorentzResidual r = el_residual_lorentz(m.t, m.u, target);
    rep.u_residual = interior_l2(*grid, r.u_eq);

    // contracting correction: lap delta = r_u with zero boundary data
    std::vector<Eigen::ArrayXd> delta(n);
    ScalarField rhs(grid), zero_b(grid);
    for (int i = 0; i < n; ++i) {
      rhs.v = r.u_eq[i];
      for (int k : grid->boundary_nodes()) rhs.v[k] = 0;
      delta[i] = poisson->solve_dirichlet(rhs, zero_b).v;
    }

    double step = 0;
    for (;;) {
      std::vector<Eigen::ArrayXd> trial = m.u;
      for (int i = 0; i < n; ++i) trial[i] += damping * delta[i];
      bool ok = true;
      for (int k = 0; k < grid->num_nodes() && ok; ++k)
        ok = target.in_tube(map_value(trial, k));
      if (ok) {
        for (int k = 0; k < grid->num_nodes(); ++k) {
          const Eigen::VectorXd proj = target.project(map_value(trial, k));
          for (int i = 0; i < n; ++i) trial[i][k] = proj[i];
        }
        for (int k = 0; k < grid->num_nodes(); ++k) {
          double s = 0;
          for (int i = 0; i < n; ++i) {
            const double diff = trial[i][k] - m.u[i][k];
            s += diff * diff;
          }
          step += grid->weight(k) * s;
        }
        step = std::sqrt(step) / damping;
        m.u = std::move(trial);
        break;
      }
      if (rep.damping_halvings >= cfg.max_damping_halvings)
        throw OutOfTube("solve_lorentz: step leaves the tube even after damping reduction");
      damping *= 0.5;
      ++rep.damping_halvings;
    }
    rep.residual_trace.push_back(step);
    if (step <= cfg.residual_tol && rep.t_increment <= cfg.residual_tol) {
      rep.converged = true;
      break;
    }
  }
  rep.damping_used = damping;
  if (!rep.converged)
    throw NonConvergence("solve_lorentz: did not reach residual_tol", rep.iterations,
                         rep.u_residual);
  return {std::move(m), std::move(rep)};
}

TwoRouteDiff two_route_consistency(const ScalarField& t, const std::vector<Eigen::ArrayXd>& u,
                                   const StationaryTarget& target) {
  const GridPtr grid = t.grid;
  const int n = target.ambient_dim();
  const AssembledSystem sys = assemble_system(t, u, target);
  const std::vector<Eigen::ArrayXd> asmres = assembled_residual(sys, t, u);
  const LorentzResidual direct = el_residual_lorentz(t, u, target);

  TwoRouteDiff diff;
  double acc = 0;
  // same report region as the conservation residuals: two layers in and a
  // fixed margin away from the staircase ring
  std::vector<int> core;
  for (int k : grid->nodes_with_min_layer(3))
    if (grid->x(k) * grid->x(k) + grid->y(k) * grid->y(k) <= 0.81) core.push_back(k);
  for (int k : core) {
    double s = 0;
    {
      const double d0 = asmres[0][k] - (-direct.t_eq.v[k]);
      s += d0 * d0;
      diff.linf = std::max(diff.linf, std::abs(d0));
    }
    for (int j = 0; j < n; ++j) {
      const double dj = asmres[j + 1][k] - direct.u_eq[j][k];
      s += dj * dj;
      diff.linf = std::max(diff.linf, std::abs(dj));
    }
    acc += grid->weight(k) * s;
  }
  diff.l2 = std::sqrt(acc);
  return diff;
}

}  // namespace pmap
