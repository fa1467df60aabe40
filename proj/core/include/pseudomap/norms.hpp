#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pseudomap/grid.hpp"

namespace pmap {

struct Ball {
  double cx = 0, cy = 0, R = 0;
};

/// Dyadic ball family: centers on a strided sub-lattice of grid nodes inside
/// the domain disc, radii R_max(x), R_max(x)/2, ... down to min_radius
/// (default 4h). Every ball satisfies B_R(x) inside B(domain_radius).
class BallFamily {
 public:
  static BallFamily dyadic(GridPtr grid, double domain_radius = 1.0,
                           int center_stride = 4, double min_radius_factor = 4.0);

  GridPtr grid;
  double domain_radius = 1.0;
  double min_radius = 0;
  std::string descriptor;
  std::vector<Ball> balls;
};

struct NormReport {
  double value = 0;
  Ball argmax;
  double p = 0;
  std::string family;
};

/// Morrey norm in m = 2: sup over the family of (R^{p-2} sum_ball w |f|^p)^{1/p}.
NormReport morrey_norm(const ScalarField& f, double p, const BallFamily& fam);

/// Weak-L2 quasi-norm of the decreasing rearrangement: values are sorted with
/// their quadrature weights and f* is evaluated at the cumulative-measure
/// breakpoints, sup_k t_k^{1/2} f*(t_k).
NormReport lorentz_2inf(const ScalarField& f);

struct RatioResult {
  double ratio = 0;
  bool degenerate = false;
  double numerator = 0;
  double denominator = 0;
};

/// morrey_norm(f, p) / lorentz_2inf(f); empirical probe of the
/// Lorentz-to-Morrey embedding constant for 1 < p < 2.
RatioResult lorentz_morrey_check(const ScalarField& f, double p,
                                 const BallFamily& fam);

/// Least-squares slope of log osc(B_r(x0)) against log r over dyadic radii
/// (R_max(x0) down to r_min_factor * h), minimized over the given centers.
/// osc is the component-wise max minus min over ball nodes, maximised over
/// components. Returns NaN when some ball has zero oscillation (constant map).
/// Throws when fewer than 3 radii are available at some center.
double holder_exponent(const std::vector<const Eigen::ArrayXd*>& comps, const GridPtr& grid,
                       const std::vector<std::pair<double, double>>& centers,
                       double r_min_factor = 4.0);

/// |sum_w (grad f . curl2 g) h| / (|grad f|_Lp |curl2 g|_Lq |grad h|_{M^s_s});
/// 0/0 is reported as ratio 0, a zero denominator against a nonzero numerator
/// is an error.
RatioResult div_curl_ratio(const ScalarField& f, const TwoVectorField& g,
                           const ScalarField& hfun, double p = 2, double q = 2,
                           double s = 2);

/// Pointwise Euclidean magnitude of the discrete gradient of several components.
ScalarField gradient_magnitude(const std::vector<const Eigen::ArrayXd*>& comps,
                               const GridPtr& grid);

/// log2(coarse/fine) observed convergence order.
double observed_order(double err_coarse, double err_fine);

}  // namespace pmap
