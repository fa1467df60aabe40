#include "pseudomap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace pmap {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::shared_ptr<const DiscGrid> DiscGrid::make(const GridOptions& opt) {
  auto g = std::shared_ptr<DiscGrid>(new DiscGrid(opt));
  g->build();
  return g;
}

std::shared_ptr<const DiscGrid> DiscGrid::make(double h, bool offset,
                                               bool puncture_origin) {
  GridOptions opt;
  opt.h = h;
  opt.offset = offset;
  opt.puncture_origin = puncture_origin;
  return make(opt);
}

DiscGrid::DiscGrid(const GridOptions& opt) : opt_(opt), h_(opt.h) {
  if (h_ <= 0 || h_ > 0.5) throw Error("DiscGrid: need 0 < h <= 1/2");
  if (opt_.offset && opt_.puncture_origin)
    throw Error("DiscGrid: puncture_origin applies to the centered lattice only");
}

void DiscGrid::build() {
  const int n = static_cast<int>(std::floor(1.0 / h_)) + 1;
  imin_ = -n;
  imax_ = n;
  jmin_ = -n;
  jmax_ = n;
  const int cols = lat_cols();
  const int rows = jmax_ - jmin_ + 1;
  id_.assign(static_cast<size_t>(cols) * rows, -1);

  auto coord = [this](int i) { return opt_.offset ? (i + 0.5) * h_ : i * h_; };

  for (int j = jmin_; j <= jmax_; ++j) {
    for (int i = imin_; i <= imax_; ++i) {
      const double px = coord(i), py = coord(j);
      if (px * px + py * py > 1.0) continue;
      if (opt_.puncture_origin && i == 0 && j == 0) continue;
      id_[lat_index(i, j)] = static_cast<int>(xs_.size());
      xs_.push_back(px);
      ys_.push_back(py);
    }
  }
  const int nn = num_nodes();
  if (nn == 0) throw Error("DiscGrid: empty grid");

  // neighbors
  nb_.assign(4 * static_cast<size_t>(nn), -1);
  for (int j = jmin_; j <= jmax_; ++j) {
    for (int i = imin_; i <= imax_; ++i) {
      const int k = id_[lat_index(i, j)];
      if (k < 0) continue;
      const int di[4] = {1, -1, 0, 0};
      const int dj[4] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        const int ii = i + di[d], jj = j + dj[d];
        if (ii < imin_ || ii > imax_ || jj < jmin_ || jj > jmax_) continue;
        nb_[4 * k + d] = id_[lat_index(ii, jj)];
      }
    }
  }

  // layers: BFS distance to the mask complement
  layer_.assign(nn, 0);
  std::deque<int> queue;
  for (int k = 0; k < nn; ++k) {
    bool edge = false;
    for (int d = 0; d < 4; ++d) edge = edge || (nb_[4 * k + d] < 0);
    if (edge) {
      layer_[k] = 1;
      queue.push_back(k);
    }
  }
  while (!queue.empty()) {
    const int k = queue.front();
    queue.pop_front();
    for (int d = 0; d < 4; ++d) {
      const int m = nb_[4 * k + d];
      if (m >= 0 && layer_[m] == 0) {
        layer_[m] = layer_[k] + 1;
        queue.push_back(m);
      }
    }
  }
  for (int k = 0; k < nn; ++k) {
    if (layer_[k] >= 2)
      interior_.push_back(k);
    else
      boundary_.push_back(k);
  }

  // quadrature weights: cell fraction by 4x4 subsampling near the circle
  w_.assign(nn, 0.0);
  total_weight_ = 0.0;
  for (int k = 0; k < nn; ++k) {
    const double r = std::sqrt(xs_[k] * xs_[k] + ys_[k] * ys_[k]);
    double frac = 1.0;
    if (r + h_ * 0.7072 > 1.0) {
      int inside = 0;
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          const double sx = xs_[k] + ((a + 0.5) / 4.0 - 0.5) * h_;
          const double sy = ys_[k] + ((b + 0.5) / 4.0 - 0.5) * h_;
          if (sx * sx + sy * sy <= 1.0) ++inside;
        }
      }
      frac = inside / 16.0;
    }
    w_[k] = h_ * h_ * frac;
    total_weight_ += w_[k];
  }

  // first- and second-derivative stencils in difference form
  // (sum of c_t (f[idx_t] - f[base]); exactly zero on constants)
  const double ih = 1.0 / h_;
  const double ih2 = ih * ih;
  d1_.assign(2 * static_cast<size_t>(nn), Stencil{-1, {-1, -1}, {0, 0}, 0});
  d2_.assign(2 * static_cast<size_t>(nn), Stencil{-1, {-1, -1}, {0, 0}, 0});
  for (int k = 0; k < nn; ++k) {
    for (int dir = 0; dir < 2; ++dir) {
      const int p = nb_[4 * k + 2 * dir];       // +dir
      const int m = nb_[4 * k + 2 * dir + 1];   // -dir
      Stencil& s1 = d1_[dir * nn + k];
      Stencil& s2 = d2_[dir * nn + k];
      if (p >= 0 && m >= 0) {
        s1 = {m, {p, -1}, {0.5 * ih, 0}, 1};
        s2 = {k, {m, p}, {ih2, ih2}, 2};
      } else if (p >= 0) {
        const int pp = nb_[4 * p + 2 * dir];
        if (pp >= 0) {
          s1 = {k, {p, pp}, {2.0 * ih, -0.5 * ih}, 2};
          s2 = {k, {p, pp}, {-2.0 * ih2, ih2}, 2};
        } else {
          s1 = {k, {p, -1}, {ih, 0}, 1};
        }
      } else if (m >= 0) {
        const int mm = nb_[4 * m + 2 * dir + 1];
        if (mm >= 0) {
          s1 = {k, {m, mm}, {-2.0 * ih, 0.5 * ih}, 2};
          s2 = {k, {m, mm}, {-2.0 * ih2, ih2}, 2};
        } else {
          s1 = {k, {m, -1}, {-ih, 0}, 1};
        }
      }
    }
  }
}

std::vector<int> DiscGrid::nodes_with_min_layer(int min_layer) const {
  std::vector<int> out;
  for (int k = 0; k < num_nodes(); ++k)
    if (layer_[k] >= min_layer) out.push_back(k);
  return out;
}

int DiscGrid::node_at(int i, int j) const {
  if (i < imin_ || i > imax_ || j < jmin_ || j > jmax_) return -1;
  return id_[lat_index(i, j)];
}

int DiscGrid::nearest_node(double px, double py) const {
  auto lat = [this](double c) {
    return opt_.offset ? static_cast<int>(std::floor(c / h_)) : static_cast<int>(std::lround(c / h_));
  };
  const int ci = lat(px), cj = lat(py);
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int radius = 0; radius <= imax_ - imin_; ++radius) {
    for (int j = cj - radius; j <= cj + radius; ++j) {
      for (int i = ci - radius; i <= ci + radius; ++i) {
        if (std::max(std::abs(i - ci), std::abs(j - cj)) != radius) continue;
        const int k = node_at(i, j);
        if (k < 0) continue;
        const double dx = xs_[k] - px, dy = ys_[k] - py;
        const double d = dx * dx + dy * dy;
        if (d < best_d - 1e-15 || (d < best_d + 1e-15 && (best < 0 || k < best))) {
          best_d = d;
          best = k;
        }
      }
    }
    // a full extra ring guarantees no closer node remains
    if (best >= 0 && radius >= 1 && (radius - 1.0) * h_ > std::sqrt(best_d)) break;
  }
  if (best < 0) throw Error("nearest_node: no node found");
  return best;
}

void DiscGrid::apply_d(const Eigen::ArrayXd& f, int dir, Eigen::ArrayXd& out) const {
  const int nn = num_nodes();
  out.resize(nn);
  const Stencil* st = &d1_[static_cast<size_t>(dir) * nn];
  for (int k = 0; k < nn; ++k) {
    const Stencil& s = st[k];
    double acc = 0;
    for (int t = 0; t < s.n; ++t) acc += s.c[t] * (f[s.idx[t]] - f[s.base]);
    out[k] = acc;
  }
}

void DiscGrid::apply_d2(const Eigen::ArrayXd& f, int dir, Eigen::ArrayXd& out) const {
  const int nn = num_nodes();
  out.resize(nn);
  const Stencil* st = &d2_[static_cast<size_t>(dir) * nn];
  for (int k = 0; k < nn; ++k) {
    const Stencil& s = st[k];
    double acc = 0;
    for (int t = 0; t < s.n; ++t) acc += s.c[t] * (f[s.idx[t]] - f[s.base]);
    out[k] = acc;
  }
}

int DiscGrid::d1_stencil(int k, int dir, int idx[3], double c[3]) const {
  const Stencil& s = d1_[static_cast<size_t>(dir) * num_nodes() + k];
  if (s.n == 0) return 0;
  double base_c = 0;
  for (int t = 0; t < s.n; ++t) {
    idx[t] = s.idx[t];
    c[t] = s.c[t];
    base_c -= s.c[t];
  }
  idx[s.n] = s.base;
  c[s.n] = base_c;
  return s.n + 1;
}

const std::vector<double>& DiscGrid::boundary_arc_weights() const {
  if (!arc_w_.empty()) return arc_w_;
  arc_w_.assign(num_nodes(), 0.0);
  const int segments = std::max(4096, static_cast<int>(std::ceil(16.0 / h_)));
  const double dl = 2.0 * kPi / segments;
  for (int s = 0; s < segments; ++s) {
    const double t = (s + 0.5) * 2.0 * kPi / segments;
    const int k = nearest_node(std::cos(t), std::sin(t));
    arc_w_[k] += dl;
  }
  return arc_w_;
}

ScalarField ScalarField::sample(GridPtr g, const std::function<double(double, double)>& f) {
  ScalarField out(g);
  for (int k = 0; k < g->num_nodes(); ++k) out.v[k] = f(g->x(k), g->y(k));
  return out;
}

VectorField VectorField::sample(GridPtr g,
                                const std::function<double(double, double)>& fx,
                                const std::function<double(double, double)>& fy) {
  VectorField out(g);
  for (int k = 0; k < g->num_nodes(); ++k) {
    out.vx[k] = fx(g->x(k), g->y(k));
    out.vy[k] = fy(g->x(k), g->y(k));
  }
  return out;
}

TwoVectorField TwoVectorField::sample(GridPtr g, const std::function<double(double, double)>& f) {
  TwoVectorField out(g);
  for (int k = 0; k < g->num_nodes(); ++k) out.xy[k] = f(g->x(k), g->y(k));
  return out;
}

VectorField grad(const ScalarField& f) {
  VectorField out(f.grid);
  f.grid->apply_d(f.v, 0, out.vx);
  f.grid->apply_d(f.v, 1, out.vy);
  return out;
}

ScalarField div(const VectorField& V) {
  ScalarField out(V.grid);
  Eigen::ArrayXd dx, dy;
  V.grid->apply_d(V.vx, 0, dx);
  V.grid->apply_d(V.vy, 1, dy);
  out.v = dx + dy;
  return out;
}

VectorField curl2(const TwoVectorField& xi) {
  VectorField out(xi.grid);
  Eigen::ArrayXd d1, d2;
  xi.grid->apply_d(xi.xy, 0, d1);
  xi.grid->apply_d(xi.xy, 1, d2);
  out.vx = -d2;
  out.vy = d1;
  return out;
}

ScalarField vort(const VectorField& V) {
  ScalarField out(V.grid);
  Eigen::ArrayXd a, b;
  V.grid->apply_d(V.vy, 0, a);
  V.grid->apply_d(V.vx, 1, b);
  out.v = a - b;
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  ScalarField out(f.grid);
  Eigen::ArrayXd a, b;
  f.grid->apply_d2(f.v, 0, a);
  f.grid->apply_d2(f.v, 1, b);
  out.v = a + b;
  return out;
}

double sbp_defect(const ScalarField& f, const VectorField& V) {
  const VectorField gf = grad(f);
  const ScalarField dv = div(V);
  double acc = 0;
  const auto& g = *f.grid;
  for (int k = 0; k < g.num_nodes(); ++k)
    acc += g.weight(k) * (gf.vx[k] * V.vx[k] + gf.vy[k] * V.vy[k] + f.v[k] * dv.v[k]);
  return std::abs(acc);
}

double dot_w(const ScalarField& a, const ScalarField& b) {
  double acc = 0;
  for (int k = 0; k < a.grid->num_nodes(); ++k)
    acc += a.grid->weight(k) * a.v[k] * b.v[k];
  return acc;
}

double dot_w(const VectorField& a, const VectorField& b) {
  double acc = 0;
  for (int k = 0; k < a.grid->num_nodes(); ++k)
    acc += a.grid->weight(k) * (a.vx[k] * b.vx[k] + a.vy[k] * b.vy[k]);
  return acc;
}

double norm_w(const ScalarField& a) { return std::sqrt(dot_w(a, a)); }
double norm_w(const VectorField& a) { return std::sqrt(dot_w(a, a)); }

double max_abs_on(const Eigen::ArrayXd& v, const std::vector<int>& nodes) {
  double m = 0;
  for (int k : nodes) m = std::max(m, std::abs(v[k]));
  return m;
}

double l1_w_on(const Eigen::ArrayXd& v, const GridPtr& g, const std::vector<int>& nodes) {
  double acc = 0;
  for (int k : nodes) acc += g->weight(k) * std::abs(v[k]);
  return acc;
}

}  // namespace pmap
