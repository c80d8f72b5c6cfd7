#include "qwalk/kernels.hpp"

namespace qw::serial {

std::vector<Mat2> unitaries(const Protocol& p, const MomentumGrid& g) {
  std::vector<Mat2> u;
  u.reserve(g.total);
  for (int k = 0; k < g.total; ++k) u.push_back(compose_protocol(p, g.point(k)));
  return u;
}

std::vector<BlochDecomp> band_points(const Protocol& p, const MomentumGrid& g) {
  std::vector<BlochDecomp> b;
  b.reserve(g.total);
  for (int k = 0; k < g.total; ++k)
    b.push_back(bloch_decompose(compose_protocol(p, g.point(k))));
  return b;
}

void apply(const std::vector<Mat2>& u, std::vector<Vec2>& c, int times) {
  for (int s = 0; s < times; ++s)
    for (size_t k = 0; k < c.size(); ++k) c[k] = u[k] * c[k];
}

std::vector<MaskPoint> solve_grid(const std::vector<Mat2>& targets) {
  std::vector<MaskPoint> out;
  out.reserve(targets.size());
  for (const auto& t : targets) out.push_back(solve_masks(t));
  return out;
}

}  // namespace qw::serial
