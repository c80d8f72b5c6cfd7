#include "qwalk/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace qw {

double wrap_positive(double a) {
  double r = std::fmod(a, two_pi);
  if (r <= 0.0) r += two_pi;
  return r;
}

double wrap_signed(double a) {
  double r = std::fmod(a + pi, two_pi);
  if (r <= 0.0) r += two_pi;
  return r - pi;
}

int LatticeSpec::total() const {
  int n = 1;
  for (const auto& a : axes) n *= a.extent();
  return n;
}

std::vector<int> LatticeSpec::shape() const {
  std::vector<int> s;
  for (const auto& a : axes) s.push_back(a.extent());
  return s;
}

void LatticeSpec::validate() const {
  if (dim() < 1 || dim() > 2)
    throw std::invalid_argument("lattice dimension must be 1 or 2");
  for (const auto& a : axes) {
    if (a.size < 1) throw std::invalid_argument("axis size must be >= 1");
    if (a.boundary == Boundary::emulated_infinite && a.window <= a.size)
      throw std::invalid_argument("emulated axis window must exceed its size");
  }
}

LatticeSpec LatticeSpec::ring(int n) {
  LatticeSpec s{{AxisSpec{n}}};
  s.validate();
  return s;
}

LatticeSpec LatticeSpec::torus(int nx, int ny) {
  LatticeSpec s{{AxisSpec{nx}, AxisSpec{ny}}};
  s.validate();
  return s;
}

LatticeSpec LatticeSpec::cylinder(int ny, int window, int nx_region) {
  LatticeSpec s{{AxisSpec{nx_region, Boundary::emulated_infinite, window},
                 AxisSpec{ny}}};
  s.validate();
  return s;
}

std::array<double, 2> MomentumGrid::point(int k) const {
  if (dim() == 1) return {q[0][k], 0.0};
  return {q[0][k / shape[1]], q[1][k % shape[1]]};
}

MomentumGrid build_momentum_grid(const LatticeSpec& spec) {
  spec.validate();
  MomentumGrid g;
  g.total = 1;
  for (const auto& a : spec.axes) {
    const int n = a.extent();
    std::vector<double> qs(n);
    for (int h = 1; h <= n; ++h) qs[h - 1] = two_pi * h / n;
    g.q.push_back(std::move(qs));
    g.shape.push_back(n);
    g.total *= n;
  }
  return g;
}

int emulated_window(int t_max, int support) {
  if (t_max < 0 || support < 1)
    throw std::invalid_argument("emulated_window needs t_max >= 0, support >= 1");
  return 2 * t_max + support + 4;
}

int ring_distance(int a, int b, int n) {
  int d = ((a - b) % n + n) % n;
  return std::min(d, n - d);
}

}  // namespace qw
