#pragma once

#include <Eigen/Dense>

#include "pseudomap/errors.hpp"

namespace pmap {

/// Diagonal +-1 matrix fixing a pseudo-Euclidean inner product.
/// The nu entries equal to -1 always come first, then +1 entries.
class SignatureMatrix {
 public:
  SignatureMatrix(int nu, int dim);

  int nu() const { return nu_; }
  int dim() const { return dim_; }
  double diag(int i) const { return i < nu_ ? -1.0 : 1.0; }
  Eigen::MatrixXd dense() const;

  bool operator==(const SignatureMatrix& o) const {
    return nu_ == o.nu_ && dim_ == o.dim_;
  }

 private:
  int nu_;
  int dim_;
};

/// Level set u^T E u = level; level is +1 for pseudospheres and -1 for
/// pseudohyperbolic spaces.
struct QuadricSpec {
  SignatureMatrix sig;
  int level;  // +1 or -1

  QuadricSpec(SignatureMatrix s, int lvl) : sig(std::move(s)), level(lvl) {
    if (lvl != 1 && lvl != -1) throw Error("QuadricSpec: level must be +1 or -1");
  }

  static QuadricSpec pseudosphere(int nu, int n) {
    return QuadricSpec(SignatureMatrix(nu, n + 1), +1);
  }
  static QuadricSpec pseudohyperbolic(int nu, int n) {
    return QuadricSpec(SignatureMatrix(nu + 1, n + 1), -1);
  }
};

/// v^T E w.
double inner(const Eigen::VectorXd& v, const Eigen::VectorXd& w,
             const SignatureMatrix& sig);

/// Radial retraction y -> y / sqrt(|y^T E y|) onto the quadric.
/// Throws NullConeViolation when |y^T E y| <= cone_tol or when the sign of
/// y^T E y disagrees with the quadric level; projection there has no
/// geometric meaning and callers are expected to damp their step.
Eigen::VectorXd project_to_quadric(const Eigen::VectorXd& y, const QuadricSpec& q,
                                   double cone_tol = 1e-10);

/// The anti-isometry sigma(y_1,...,y_{n+1}) = (y_{nu+1},...,y_{n+1},y_1,...,y_nu),
/// a cyclic left rotation by nu slots.  It flips the sign of the quadratic
/// form between signature (nu, n+1-nu) and (n+1-nu, nu).
Eigen::VectorXd anti_isometry(const Eigen::VectorXd& y, int nu);

/// Membership test for O(nu, dim-nu): P^T = E P^{-1} E within tol (max-abs).
/// Throws SingularMatrix when P is not invertible.
bool in_group(const Eigen::MatrixXd& P, const SignatureMatrix& sig, double tol);

/// Membership test for so(nu, dim-nu): A^T = -E A E within tol (max-abs).
bool in_algebra(const Eigen::MatrixXd& A, const SignatureMatrix& sig, double tol);

/// Generator E_ij E of the rotation in the (i,j) coordinate plane, where
/// E_ij has (i,j) entry +1, (j,i) entry -1 (0-based indices).
Eigen::MatrixXd rotation_generator(int i, int j, const SignatureMatrix& sig);

/// Matrix exponential by scaling-and-squaring of the truncated Taylor series.
/// Adequate for the bounded generators used here (series error < 1e-12).
Eigen::MatrixXd expm(const Eigen::MatrixXd& A);

}  // namespace pmap
