#include "pseudomap/signature.hpp"

#include <cmath>

namespace pmap {

SignatureMatrix::SignatureMatrix(int nu, int dim) : nu_(nu), dim_(dim) {
  if (dim < 1) throw Error("SignatureMatrix: dim must be positive");
  if (nu < 0 || nu > dim) throw Error("SignatureMatrix: need 0 <= nu <= dim");
}

Eigen::MatrixXd SignatureMatrix::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) m(i, i) = diag(i);
  return m;
}

double inner(const Eigen::VectorXd& v, const Eigen::VectorXd& w,
             const SignatureMatrix& sig) {
  if (v.size() != sig.dim() || w.size() != sig.dim())
    throw DimensionMismatch("inner: vector size does not match signature dim");
  double s = 0.0;
  for (int i = 0; i < sig.dim(); ++i) s += sig.diag(i) * v[i] * w[i];
  return s;
}

Eigen::VectorXd project_to_quadric(const Eigen::VectorXd& y, const QuadricSpec& q,
                                   double cone_tol) {
  const double qy = inner(y, y, q.sig);
  if (std::abs(qy) <= cone_tol)
    throw NullConeViolation("project_to_quadric: point on the null cone");
  if ((qy > 0) != (q.level > 0))
    throw NullConeViolation("project_to_quadric: quadratic form has wrong sign");
  return y / std::sqrt(std::abs(qy));
}

Eigen::VectorXd anti_isometry(const Eigen::VectorXd& y, int nu) {
  const int dim = static_cast<int>(y.size());
  if (nu < 0 || nu > dim) throw Error("anti_isometry: need 0 <= nu <= dim");
  Eigen::VectorXd out(dim);
  for (int i = 0; i < dim; ++i) out[i] = y[(i + nu) % dim];
  return out;
}

bool in_group(const Eigen::MatrixXd& P, const SignatureMatrix& sig, double tol) {
  const int d = sig.dim();
  if (P.rows() != d || P.cols() != d)
    throw DimensionMismatch("in_group: matrix size does not match signature dim");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(P);
  if (!lu.isInvertible()) throw SingularMatrix("in_group: matrix not invertible");
  const Eigen::MatrixXd E = sig.dense();
  const Eigen::MatrixXd defect = P.transpose() - E * lu.inverse() * E;
  return defect.cwiseAbs().maxCoeff() <= tol;
}

bool in_algebra(const Eigen::MatrixXd& A, const SignatureMatrix& sig, double tol) {
  const int d = sig.dim();
  if (A.rows() != d || A.cols() != d)
    throw DimensionMismatch("in_algebra: matrix size does not match signature dim");
  const Eigen::MatrixXd E = sig.dense();
  const Eigen::MatrixXd defect = A.transpose() + E * A * E;
  return defect.cwiseAbs().maxCoeff() <= tol;
}

Eigen::MatrixXd rotation_generator(int i, int j, const SignatureMatrix& sig) {
  const int d = sig.dim();
  if (i == j) throw Error("rotation_generator: indices must differ");
  if (i < 0 || j < 0 || i >= d || j >= d)
    throw Error("rotation_generator: index out of range");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
  // (E_ij E)_{ab} = (E_ij)_{ab} * diag_b
  g(i, j) = sig.diag(j);
  g(j, i) = -sig.diag(i);
  return g;
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw DimensionMismatch("expm: matrix must be square");
  const int d = static_cast<int>(A.rows());
  const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  const Eigen::MatrixXd As = A * scale;
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(d, d);
  for (int k = 1; k <= 24; ++k) {
    term = (term * As) / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace pmap
