#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "pseudomap/errors.hpp"

namespace pmap {

/// Data of a standard stationary Lorentzian target R x M with metric
/// g = -beta (dt + omega)^2 + g_M, for the explicit embeddings
/// M = S^1 in R^2 and M = T^2 = S^1 x S^1 in R^4.
///
/// beta and omega live on the tubular neighborhood as pullbacks through the
/// blockwise normalization Pi, with closed-form gradients; the normal frame
/// is the blockwise radial direction.
class StationaryTarget {
 public:
  enum class Manifold { Circle, Torus };
  enum class BetaKind { One, LinearY1 };
  enum class OmegaKind { Zero, Angular, MixedTorus };

  static StationaryTarget make(Manifold m, BetaKind b, OmegaKind w, double kappa = 0.0);

  /// User-supplied beta and omega on the tube; closures must come with their
  /// gradients (evaluated at tube points, consistent with the pullback
  /// through Pi). The embedding, projection and normal frame stay built in.
  static StationaryTarget custom(Manifold m,
                                 std::function<double(const Eigen::VectorXd&)> beta,
                                 std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_beta,
                                 std::function<Eigen::VectorXd(const Eigen::VectorXd&)> omega,
                                 std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> omega_jac,
                                 std::string name = "custom");

  Manifold manifold() const { return manifold_; }
  int ambient_dim() const { return manifold_ == Manifold::Circle ? 2 : 4; }
  int normal_count() const { return manifold_ == Manifold::Circle ? 1 : 2; }
  double tube_radius() const { return delta_; }
  double lambda() const { return lambda_; }
  const std::string& name() const { return name_; }

  bool in_tube(const Eigen::VectorXd& y) const;
  Eigen::VectorXd project(const Eigen::VectorXd& y) const;  // Pi

  double beta(const Eigen::VectorXd& y) const;
  Eigen::VectorXd grad_beta(const Eigen::VectorXd& y) const;
  Eigen::VectorXd omega(const Eigen::VectorXd& y) const;
  /// J(i,j) = d omega_i / d y^j.
  Eigen::MatrixXd omega_jacobian(const Eigen::VectorXd& y) const;

  Eigen::VectorXd normal(int l, const Eigen::VectorXd& y) const;
  /// J(i,j) = d nu_l^i / d y^j.
  Eigen::MatrixXd normal_jacobian(int l, const Eigen::VectorXd& y) const;

 private:
  Manifold manifold_ = Manifold::Circle;
  BetaKind beta_kind_ = BetaKind::One;
  OmegaKind omega_kind_ = OmegaKind::Zero;
  double kappa_ = 0;
  double delta_ = 0.5;
  double lambda_ = 1;
  std::string name_;
  std::function<double(const Eigen::VectorXd&)> beta_fn_;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_beta_fn_;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> omega_fn_;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> omega_jac_fn_;

  int blocks() const { return manifold_ == Manifold::Circle ? 1 : 2; }
  double block_radius(const Eigen::VectorXd& y, int b) const;
  void compute_lambda();
};

}  // namespace pmap
