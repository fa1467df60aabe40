#include "pseudomap/poisson.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <map>
#include <mutex>

namespace pmap {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct PoissonSolver::Impl {
  GridPtr g;

  // Dirichlet: interior unknowns, 5-point
  std::vector<int> int_index;  // node -> interior slot, -1 otherwise
  Eigen::SimplicialLDLT<SpMat> dirichlet;
  SpMat dirichlet_mat;
  std::once_flag dirichlet_once;

  // Normal equations A = G^T W G over all nodes, pinned at node 0
  Eigen::SimplicialLDLT<SpMat> normal_pinned;
  SpMat normal_pinned_mat;
  std::once_flag normal_once;

  // Same bilinear form restricted to layer >= 4 (curl potential support)
  std::vector<int> deep_index;  // node -> deep slot, -1
  std::vector<int> deep_nodes;
  Eigen::SimplicialLDLT<SpMat> deep;
  SpMat deep_mat;
  std::once_flag deep_once;

  explicit Impl(GridPtr grid) : g(std::move(grid)) {}

  void build_dirichlet() {
    const auto& grid = *g;
    const int nn = grid.num_nodes();
    int_index.assign(nn, -1);
    const auto& interior = grid.interior_nodes();
    for (size_t s = 0; s < interior.size(); ++s) int_index[interior[s]] = static_cast<int>(s);
    const double ih2 = 1.0 / (grid.h() * grid.h());
    std::vector<Triplet> trips;
    trips.reserve(interior.size() * 5);
    for (size_t s = 0; s < interior.size(); ++s) {
      const int k = interior[s];
      trips.emplace_back(static_cast<int>(s), static_cast<int>(s), 4.0 * ih2);
      for (int d = 0; d < 4; ++d) {
        const int m = grid.neighbor(k, d);
        if (m >= 0 && int_index[m] >= 0)
          trips.emplace_back(static_cast<int>(s), int_index[m], -ih2);
      }
    }
    dirichlet_mat.resize(static_cast<int>(interior.size()), static_cast<int>(interior.size()));
    dirichlet_mat.setFromTriplets(trips.begin(), trips.end());
    dirichlet.compute(dirichlet_mat);
    if (dirichlet.info() != Eigen::Success)
      throw Error("PoissonSolver: Dirichlet factorization failed");
  }

  // Assemble A = G^T W G (wide normal-equations stencil) over all nodes.
  SpMat assemble_normal() const {
    const auto& grid = *g;
    const int nn = grid.num_nodes();
    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(nn) * 10);
    for (int y = 0; y < nn; ++y) {
      for (int dir = 0; dir < 2; ++dir) {
        int idx[3];
        double c[3];
        const int cnt = stencil(grid, y, dir, idx, c);
        const double w = grid.weight(y);
        for (int a = 0; a < cnt; ++a)
          for (int b = 0; b < cnt; ++b)
            trips.emplace_back(idx[a], idx[b], w * c[a] * c[b]);
      }
    }
    SpMat A(nn, nn);
    A.setFromTriplets(trips.begin(), trips.end());
    return A;
  }

  static int stencil(const DiscGrid& grid, int y, int dir, int idx[3], double c[3]) {
    return grid.d1_stencil(y, dir, idx, c);
  }

  void build_normal() {
    SpMat A = assemble_normal();
    const int nn = g->num_nodes();
    // pin node 0 to fix the constant mode: drop row/col 0
    std::vector<Triplet> trips;
    for (int k = 0; k < A.outerSize(); ++k) {
      for (SpMat::InnerIterator it(A, k); it; ++it) {
        if (it.row() == 0 || it.col() == 0) continue;
        trips.emplace_back(static_cast<int>(it.row()) - 1, static_cast<int>(it.col()) - 1,
                           it.value());
      }
    }
    normal_pinned_mat.resize(nn - 1, nn - 1);
    normal_pinned_mat.setFromTriplets(trips.begin(), trips.end());
    normal_pinned.compute(normal_pinned_mat);
    if (normal_pinned.info() != Eigen::Success)
      throw Error("PoissonSolver: normal-equation factorization failed");
  }

  void build_deep() {
    const auto& grid = *g;
    const int nn = grid.num_nodes();
    deep_index.assign(nn, -1);
    deep_nodes = grid.nodes_with_min_layer(4);
    for (size_t s = 0; s < deep_nodes.size(); ++s) deep_index[deep_nodes[s]] = static_cast<int>(s);
    if (deep_nodes.empty())
      throw Error("PoissonSolver: grid too coarse for a curl potential (no layer-4 nodes)");
    SpMat A = assemble_normal();
    std::vector<Triplet> trips;
    for (int k = 0; k < A.outerSize(); ++k) {
      for (SpMat::InnerIterator it(A, k); it; ++it) {
        const int r = deep_index[it.row()], c = deep_index[it.col()];
        if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
      }
    }
    deep_mat.resize(static_cast<int>(deep_nodes.size()), static_cast<int>(deep_nodes.size()));
    deep_mat.setFromTriplets(trips.begin(), trips.end());
    deep.compute(deep_mat);
    if (deep.info() != Eigen::Success)
      throw Error("PoissonSolver: curl-potential factorization failed");
  }

  // accumulate b += G^T W (Vx, Vy)
  void accumulate_GtW(const Eigen::ArrayXd& Vx, const Eigen::ArrayXd& Vy,
                      Eigen::VectorXd& b) const {
    const auto& grid = *g;
    const int nn = grid.num_nodes();
    for (int y = 0; y < nn; ++y) {
      const double w = grid.weight(y);
      for (int dir = 0; dir < 2; ++dir) {
        int idx[3];
        double c[3];
        const int cnt = stencil(grid, y, dir, idx, c);
        const double val = w * (dir == 0 ? Vx[y] : Vy[y]);
        for (int a = 0; a < cnt; ++a) b[idx[a]] += c[a] * val;
      }
    }
  }

  Eigen::VectorXd solve_refined(const Eigen::SimplicialLDLT<SpMat>& fac, const SpMat& A,
                                const Eigen::VectorXd& b) const {
    Eigen::VectorXd x = fac.solve(b);
    const Eigen::VectorXd r = b - A * x;
    x += fac.solve(r);
    return x;
  }
};

PoissonSolver::PoissonSolver(GridPtr grid) : impl_(std::make_shared<Impl>(std::move(grid))) {}

GridPtr PoissonSolver::grid() const { return impl_->g; }

ScalarField PoissonSolver::solve_dirichlet(const ScalarField& rhs,
                                           const ScalarField& bdata) const {
  auto& im = *impl_;
  std::call_once(im.dirichlet_once, [&] { im.build_dirichlet(); });
  const auto& grid = *im.g;
  const auto& interior = grid.interior_nodes();
  const double ih2 = 1.0 / (grid.h() * grid.h());
  Eigen::VectorXd b(interior.size());
  for (size_t s = 0; s < interior.size(); ++s) {
    const int k = interior[s];
    double acc = -rhs.v[k];  // A = -lap, so b = -rhs + boundary terms
    for (int d = 0; d < 4; ++d) {
      const int m = grid.neighbor(k, d);
      if (m >= 0 && im.int_index[m] < 0) acc += ih2 * bdata.v[m];
    }
    b[static_cast<int>(s)] = acc;
  }
  const Eigen::VectorXd x = im.solve_refined(im.dirichlet, im.dirichlet_mat, b);
  ScalarField out(im.g);
  out.v = bdata.v;
  for (size_t s = 0; s < interior.size(); ++s) out.v[interior[s]] = x[static_cast<int>(s)];

  const double rhs_scale = std::max(1.0, rhs.v.abs().maxCoeff());
  const Eigen::VectorXd res = b - im.dirichlet_mat * x;
  if (res.cwiseAbs().maxCoeff() > solver_tol * rhs_scale)
    throw NonConvergence("PoissonSolver: Dirichlet residual above tolerance", 1,
                         res.cwiseAbs().maxCoeff());
  return out;
}

ScalarField PoissonSolver::solve_dirichlet(
    const ScalarField& rhs, const std::function<double(double, double)>& g) const {
  ScalarField bdata(impl_->g);
  for (int k : impl_->g->boundary_nodes()) bdata.v[k] = g(impl_->g->x(k), impl_->g->y(k));
  return solve_dirichlet(rhs, bdata);
}

ScalarField PoissonSolver::solve_neumann(const ScalarField& rhs,
                                         const std::function<double(double, double)>& g) const {
  auto& im = *impl_;
  std::call_once(im.normal_once, [&] { im.build_normal(); });
  const auto& grid = *im.g;
  const int nn = grid.num_nodes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nn);
  for (int k = 0; k < nn; ++k) b[k] = -grid.weight(k) * rhs.v[k];
  const auto& arc = grid.boundary_arc_weights();
  for (int k : grid.boundary_nodes()) b[k] += arc[k] * g(grid.x(k), grid.y(k));
  // project out the compatibility defect
  const double defect = b.sum() / grid.total_weight();
  for (int k = 0; k < nn; ++k) b[k] -= defect * grid.weight(k);

  Eigen::VectorXd br = b.tail(nn - 1);
  Eigen::VectorXd xr = im.solve_refined(im.normal_pinned, im.normal_pinned_mat, br);
  ScalarField out(im.g);
  out.v[0] = 0;
  for (int k = 1; k < nn; ++k) out.v[k] = xr[k - 1];
  // zero weighted mean
  double mean = 0;
  for (int k = 0; k < nn; ++k) mean += grid.weight(k) * out.v[k];
  out.v -= mean / grid.total_weight();
  return out;
}

ScalarField PoissonSolver::gradient_potential(const VectorField& V) const {
  auto& im = *impl_;
  std::call_once(im.normal_once, [&] { im.build_normal(); });
  const auto& grid = *im.g;
  const int nn = grid.num_nodes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nn);
  im.accumulate_GtW(V.vx, V.vy, b);
  Eigen::VectorXd br = b.tail(nn - 1);
  Eigen::VectorXd xr = im.solve_refined(im.normal_pinned, im.normal_pinned_mat, br);
  ScalarField out(im.g);
  out.v[0] = 0;
  for (int k = 1; k < nn; ++k) out.v[k] = xr[k - 1];
  double mean = 0;
  for (int k = 0; k < nn; ++k) mean += grid.weight(k) * out.v[k];
  out.v -= mean / grid.total_weight();
  return out;
}

TwoVectorField PoissonSolver::curl_stream_potential(const VectorField& V) const {
  auto& im = *impl_;
  std::call_once(im.deep_once, [&] { im.build_deep(); });
  const auto& grid = *im.g;
  const int nn = grid.num_nodes();
  // R^T W V = G^T W rot^T V with rot^T (vx, vy) = (vy, -vx)
  Eigen::VectorXd bfull = Eigen::VectorXd::Zero(nn);
  im.accumulate_GtW(V.vy, (-V.vx).eval(), bfull);
  Eigen::VectorXd b(im.deep_nodes.size());
  for (size_t s = 0; s < im.deep_nodes.size(); ++s) b[static_cast<int>(s)] = bfull[im.deep_nodes[s]];
  const Eigen::VectorXd x = im.solve_refined(im.deep, im.deep_mat, b);
  TwoVectorField out(im.g);
  for (size_t s = 0; s < im.deep_nodes.size(); ++s) out.xy[im.deep_nodes[s]] = x[static_cast<int>(s)];
  return out;
}

std::shared_ptr<const PoissonSolver> PoissonSolver::shared_for(const GridPtr& grid) {
  static std::mutex mu;
  static std::map<const DiscGrid*, std::weak_ptr<const PoissonSolver>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[grid.get()];
  if (auto existing = slot.lock()) {
    if (existing->grid() == grid) return existing;
  }
  auto fresh = std::make_shared<const PoissonSolver>(grid);
  slot = fresh;
  return fresh;
}

ScalarField poisson_solve(const ScalarField& rhs, const BoundaryCondition& bc) {
  auto solver = PoissonSolver::shared_for(rhs.grid);
  if (std::holds_alternative<DirichletBC>(bc))
    return solver->solve_dirichlet(rhs, std::get<DirichletBC>(bc).g);
  return solver->solve_neumann(rhs, std::get<NeumannBC>(bc).g);
}

ScalarField divform_dirichlet_solve(const ScalarField& c, const ScalarField& rhs,
                                    const ScalarField& bdata) {
  const auto& grid = *rhs.grid;
  const int nn = grid.num_nodes();
  const auto& interior = grid.interior_nodes();
  std::vector<int> slot(nn, -1);
  for (size_t s = 0; s < interior.size(); ++s) slot[interior[s]] = static_cast<int>(s);
  const double ih2 = 1.0 / (grid.h() * grid.h());

  auto face = [&](int a, int b) {
    const double ca = c.v[a], cb = c.v[b];
    if (ca <= 0 || cb <= 0) throw Error("divform_dirichlet_solve: coefficient must be positive");
    return 2.0 * ca * cb / (ca + cb);
  };

  std::vector<Triplet> trips;
  trips.reserve(interior.size() * 5);
  Eigen::VectorXd b(interior.size());
  for (size_t s = 0; s < interior.size(); ++s) {
    const int k = interior[s];
    double diag = 0;
    double acc = -rhs.v[k];
    for (int d = 0; d < 4; ++d) {
      const int m = grid.neighbor(k, d);
      if (m < 0) continue;
      const double cf = face(k, m) * ih2;
      diag += cf;
      if (slot[m] >= 0)
        trips.emplace_back(static_cast<int>(s), slot[m], -cf);
      else
        acc += cf * bdata.v[m];
    }
    trips.emplace_back(static_cast<int>(s), static_cast<int>(s), diag);
    b[static_cast<int>(s)] = acc;
  }
  SpMat A(static_cast<int>(interior.size()), static_cast<int>(interior.size()));
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<SpMat> fac(A);
  if (fac.info() != Eigen::Success)
    throw Error("divform_dirichlet_solve: factorization failed");
  Eigen::VectorXd x = fac.solve(b);
  x += fac.solve(b - A * x);

  ScalarField out(rhs.grid);
  out.v = bdata.v;
  for (size_t s = 0; s < interior.size(); ++s) out.v[interior[s]] = x[static_cast<int>(s)];
  return out;
}

}  // namespace pmap
