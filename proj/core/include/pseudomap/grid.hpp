#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "pseudomap/errors.hpp"

namespace pmap {

struct GridOptions {
  double h = 1.0 / 64.0;
  /// Nodes at ((i+1/2)h, (j+1/2)h) instead of (ih, jh).
  bool offset = false;
  /// Drop the node at the exact origin (centered lattice only); used for
  /// fields with an integrable singularity at 0.
  bool puncture_origin = false;
};

/// Cartesian lattice on [-1,1]^2 masked to the closed unit disc.
///
/// Nodes are classified by their lattice distance to the mask complement:
/// layer 1 nodes ("boundary") have at least one 4-neighbor outside the mask,
/// layer 2 nodes are their in-mask neighbors, and so on. Interior nodes
/// (layer >= 2) always carry centered difference stencils; one-sided stencils
/// appear only at layer 1. Quadrature weights are h^2 times the covered cell
/// fraction, estimated by 4x4 subsampling for cells cut by the circle.
class DiscGrid : public std::enable_shared_from_this<DiscGrid> {
 public:
  static std::shared_ptr<const DiscGrid> make(const GridOptions& opt);
  static std::shared_ptr<const DiscGrid> make(double h, bool offset = false,
                                              bool puncture_origin = false);

  double h() const { return h_; }
  bool offset() const { return opt_.offset; }
  bool punctured() const { return opt_.puncture_origin; }
  int num_nodes() const { return static_cast<int>(xs_.size()); }

  double x(int k) const { return xs_[k]; }
  double y(int k) const { return ys_[k]; }
  double weight(int k) const { return w_[k]; }
  int layer(int k) const { return layer_[k]; }
  bool is_interior(int k) const { return layer_[k] >= 2; }

  /// Neighbor in direction dir (0:+x, 1:-x, 2:+y, 3:-y); -1 when outside the mask.
  int neighbor(int k, int dir) const { return nb_[4 * k + dir]; }

  const std::vector<int>& interior_nodes() const { return interior_; }
  const std::vector<int>& boundary_nodes() const { return boundary_; }
  /// Nodes with layer >= min_layer.
  std::vector<int> nodes_with_min_layer(int min_layer) const;

  double total_weight() const { return total_weight_; }

  /// Node nearest to (px, py) in Euclidean distance (ties by node id).
  int nearest_node(double px, double py) const;

  /// First derivative d_dir f at every node (dir 0 = x, 1 = y).
  /// Centered where both neighbors exist, else one-sided second order,
  /// else one-sided first order, else 0.
  void apply_d(const Eigen::ArrayXd& f, int dir, Eigen::ArrayXd& out) const;

  /// Second derivative d^2_dir f; compact 3-point at interior nodes,
  /// shifted (first-order) closure at layer-1 nodes.
  void apply_d2(const Eigen::ArrayXd& f, int dir, Eigen::ArrayXd& out) const;

  /// Copies the first-derivative stencil of node k in direction dir into
  /// (idx, c); returns the entry count. Exactly the stencil apply_d uses,
  /// so adjoint assemblies stay consistent with the operator.
  int d1_stencil(int k, int dir, int idx[3], double c[3]) const;

  /// Boundary arc length attributed to each boundary node (sums to 2*pi);
  /// built lazily, used by the weak Neumann solver.
  const std::vector<double>& boundary_arc_weights() const;

  // Lattice access for IO and debugging.
  int node_at(int i, int j) const;  // -1 outside mask
  int imin() const { return imin_; }
  int imax() const { return imax_; }

 private:
  explicit DiscGrid(const GridOptions& opt);
  void build();

  GridOptions opt_;
  double h_ = 0;
  int imin_ = 0, imax_ = 0, jmin_ = 0, jmax_ = 0;
  std::vector<int> id_;  // lattice -> node id
  std::vector<double> xs_, ys_, w_;
  std::vector<int> layer_;
  std::vector<int> nb_;
  std::vector<int> interior_, boundary_;
  double total_weight_ = 0;

  // per node, per direction, in difference form:
  // value = sum_t c[t] * (f[idx[t]] - f[base]); exact zero on constants.
  struct Stencil {
    int base;
    int idx[2];
    double c[2];
    int n;
  };
  std::vector<Stencil> d1_;  // 2 * num_nodes (dir-major: dir * n + k)
  std::vector<Stencil> d2_;
  mutable std::vector<double> arc_w_;

  int lat_cols() const { return imax_ - imin_ + 1; }
  int lat_index(int i, int j) const {
    return (j - jmin_) * lat_cols() + (i - imin_);
  }
};

using GridPtr = std::shared_ptr<const DiscGrid>;

struct ScalarField {
  GridPtr grid;
  Eigen::ArrayXd v;

  ScalarField() = default;
  explicit ScalarField(GridPtr g) : grid(std::move(g)) {
    v = Eigen::ArrayXd::Zero(grid->num_nodes());
  }
  ScalarField(GridPtr g, Eigen::ArrayXd values) : grid(std::move(g)), v(std::move(values)) {}
  static ScalarField sample(GridPtr g, const std::function<double(double, double)>& f);
};

/// A 1-form / vector field with components (vx, vy).
struct VectorField {
  GridPtr grid;
  Eigen::ArrayXd vx, vy;

  VectorField() = default;
  explicit VectorField(GridPtr g) : grid(std::move(g)) {
    vx = Eigen::ArrayXd::Zero(grid->num_nodes());
    vy = Eigen::ArrayXd::Zero(grid->num_nodes());
  }
  static VectorField sample(GridPtr g,
                            const std::function<double(double, double)>& fx,
                            const std::function<double(double, double)>& fy);
};

/// A 2-vector field xi = xi_12 dx ^ dy, stored by its single component.
struct TwoVectorField {
  GridPtr grid;
  Eigen::ArrayXd xy;

  TwoVectorField() = default;
  explicit TwoVectorField(GridPtr g) : grid(std::move(g)) {
    xy = Eigen::ArrayXd::Zero(grid->num_nodes());
  }
  static TwoVectorField sample(GridPtr g, const std::function<double(double, double)>& f);
};

VectorField grad(const ScalarField& f);
ScalarField div(const VectorField& V);

/// curl of a 2-vector in the plane: curl2(xi) = (sum_i d_i xi_ij) d_j
/// = (-d_y xi_12, d_x xi_12). The orientation sign is locked by the exact
/// discrete identity div(curl2 xi) = 0 at nodes two layers inside the mask.
VectorField curl2(const TwoVectorField& xi);

/// Scalar curl (vorticity) d_x V_y - d_y V_x; satisfies vort(curl2 xi) ~ lap xi.
ScalarField vort(const VectorField& V);

/// Compact 5-point Laplacian at interior nodes (= div grad up to O(h^2);
/// the composition itself would use a wide stencil).
ScalarField laplacian(const ScalarField& f);

/// |<grad f, V>_w + <f, div V>_w|: the summation-by-parts defect. Zero to
/// roundoff for f supported away from the one-sided boundary closures;
/// otherwise the value is the discrete boundary term.
double sbp_defect(const ScalarField& f, const VectorField& V);

/// Weighted inner products and norms over all nodes.
double dot_w(const ScalarField& a, const ScalarField& b);
double dot_w(const VectorField& a, const VectorField& b);
double norm_w(const ScalarField& a);
double norm_w(const VectorField& a);

/// Max-abs and weighted-L1 over a node subset.
double max_abs_on(const Eigen::ArrayXd& v, const std::vector<int>& nodes);
double l1_w_on(const Eigen::ArrayXd& v, const GridPtr& g, const std::vector<int>& nodes);

}  // namespace pmap
