#include "qwalk/kernels.hpp"

namespace qw::kernels {

std::vector<Mat2> unitaries(const Protocol& p, const MomentumGrid& g) {
  std::vector<Mat2> u(g.total);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < g.total; ++k) {
    const auto q = g.point(k);
    u[k] = compose_protocol(p, q);
  }
  return u;
}

std::vector<BlochDecomp> band_points(const Protocol& p, const MomentumGrid& g) {
  std::vector<BlochDecomp> b(g.total);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < g.total; ++k) {
    const auto q = g.point(k);
    b[k] = bloch_decompose(compose_protocol(p, q));
  }
  return b;
}

void apply(const std::vector<Mat2>& u, std::vector<Vec2>& c, int times) {
  const int n = static_cast<int>(c.size());
#pragma omp parallel for schedule(static)
  for (int k = 0; k < n; ++k) {
    Vec2 v = c[k];
    for (int s = 0; s < times; ++s) v = u[k] * v;
    c[k] = v;
  }
}

std::vector<MaskPoint> solve_grid(const std::vector<Mat2>& targets) {
  const int n = static_cast<int>(targets.size());
  std::vector<MaskPoint> out(n);
  // fallback points cost far more than analytic ones
#pragma omp parallel for schedule(dynamic, 8)
  for (int k = 0; k < n; ++k) out[k] = solve_masks(targets[k]);
  return out;
}

}  // namespace qw::kernels
