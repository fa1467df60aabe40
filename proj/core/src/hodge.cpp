#include "pseudomap/hodge.hpp"

#include <cmath>

namespace pmap {

VectorField HodgeParts::grad_part() const { return grad(grad_pot); }
VectorField HodgeParts::curl_part() const { return curl2(curl_pot); }

HodgeParts hodge_decompose(const VectorField& omega) {
  auto solver = PoissonSolver::shared_for(omega.grid);
  HodgeParts parts;
  parts.grad_pot = solver->gradient_potential(omega);
  parts.curl_pot = solver->curl_stream_potential(omega);
  const VectorField gp = grad(parts.grad_pot);
  const VectorField cp = curl2(parts.curl_pot);
  parts.hpart = VectorField(omega.grid);
  parts.hpart.vx = omega.vx - gp.vx - cp.vx;
  parts.hpart.vy = omega.vy - gp.vy - cp.vy;
  return parts;
}

TwoVectorField curl_potential(const VectorField& V, double tol) {
  const GridPtr grid = V.grid;
  // weak divergence against interior test functions two layers in
  const ScalarField dv = div(V);
  const auto core = grid->nodes_with_min_layer(3);
  const double div_l2 = std::sqrt([&] {
    double acc = 0;
    for (int k : core) acc += grid->weight(k) * dv.v[k] * dv.v[k];
    return acc;
  }());
  if (div_l2 > tol)
    throw NotDivergenceFree("curl_potential: weak divergence " + std::to_string(div_l2) +
                            " exceeds tolerance " + std::to_string(tol));
  // stream function: grad eta ~ rot^T V = (V_y, -V_x)
  auto solver = PoissonSolver::shared_for(grid);
  VectorField W(grid);
  W.vx = V.vy;
  W.vy = -V.vx;
  const ScalarField eta = solver->gradient_potential(W);
  TwoVectorField out(grid);
  out.xy = eta.v;
  return out;
}

So11Field so11_from_entries(const ScalarField& a11x, const ScalarField& a12x,
                            const ScalarField& a21x, const ScalarField& a22x,
                            const ScalarField& a11y, const ScalarField& a12y,
                            const ScalarField& a21y, const ScalarField& a22y,
                            double tol) {
  const GridPtr grid = a11x.grid;
  double worst = 0;
  for (int k = 0; k < grid->num_nodes(); ++k) {
    worst = std::max({worst, std::abs(a11x.v[k]), std::abs(a22x.v[k]), std::abs(a11y.v[k]),
                      std::abs(a22y.v[k]), std::abs(a12x.v[k] - a21x.v[k]),
                      std::abs(a12y.v[k] - a21y.v[k])});
  }
  if (worst > tol)
    throw NotSo11("so11_from_entries: matrix field is not so(1,1)-valued");
  So11Field out;
  out.s = VectorField(grid);
  out.s.vx = a12x.v;
  out.s.vy = a12y.v;
  return out;
}

So11Parts so11_decompose(const So11Field& omega) {
  const HodgeParts parts = hodge_decompose(omega.s);
  So11Parts out;
  out.s1 = parts.grad_pot;
  out.s2 = parts.curl_pot;
  out.hpart = parts.hpart;
  return out;
}

}  // namespace pmap
