#include "pseudomap/synthetic.hpp"

#include <cmath>
#include <vector>

namespace pmap {

std::function<double(double, double)> synthetic_trig(std::mt19937& rng, double amplitude) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_int_distribution<int> freq(1, 3);
  struct Term {
    double a, kx, ky, px, py;
  };
  std::vector<Term> terms;
  for (int t = 0; t < 4; ++t)
    terms.push_back({coeff(rng) * amplitude, static_cast<double>(freq(rng)),
                     static_cast<double>(freq(rng)), coeff(rng) * 3.0, coeff(rng) * 3.0});
  return [terms](double x, double y) {
    double acc = 0;
    for (const auto& t : terms)
      acc += t.a * std::cos(t.kx * x + t.px) * std::sin(t.ky * y + t.py);
    return acc;
  };
}

std::function<Eigen::VectorXd(double, double)> synthetic_constrained_map(
    std::mt19937& rng, const QuadricSpec& q, double amplitude) {
  // u(x) = exp(sum_g phi_g(x) E_{i_g j_g} E) base: a smooth field of
  // isometries applied to a base point. Constrained exactly for any
  // amplitude and never near the null cone.
  const int d = q.sig.dim();
  Eigen::VectorXd base = Eigen::VectorXd::Zero(d);
  if (q.level > 0)
    base[d - 1] = 1.0;
  else
    base[0] = 1.0;

  std::uniform_int_distribution<int> pick(0, d - 1);
  std::vector<Eigen::MatrixXd> gens;
  std::vector<std::function<double(double, double)>> angles;
  for (int g = 0; g < 3; ++g) {
    int i = pick(rng), j = pick(rng);
    while (j == i) j = pick(rng);
    gens.push_back(rotation_generator(i, j, q.sig));
    angles.push_back(synthetic_trig(rng, amplitude));
  }
  return [base, gens, angles, d](double x, double y) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
    for (size_t g = 0; g < gens.size(); ++g) A += angles[g](x, y) * gens[g];
    return (expm(A) * base).eval();
  };
}

}  // namespace pmap
