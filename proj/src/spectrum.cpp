#include "qwalk/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qwalk/kernels.hpp"

namespace qw {

namespace {
// u1d with the (s0 + i s1)/sqrt(2) coin sits at q + pi of the printed E_1D;
// u2d needs no shift. Both values are pinned by the fitting tests.
constexpr double kBandOffset1D = pi;
constexpr double kBandOffset2D = 0.0;
}  // namespace

Mat2 BlochDecomp::reconstruct() const {
  Mat2 ns = axis(0) * pauli::s1() + axis(1) * pauli::s2() +
            axis(2) * pauli::s3();
  return std::exp(I * phase) *
         (std::cos(energy) * pauli::s0() + I * std::sin(energy) * ns);
}

Vec2 BlochDecomp::eigenvector(int sigma) const {
  const double th = polar(), ph = azimuth();
  if (sigma > 0) return Vec2(std::cos(th / 2), std::exp(I * ph) * std::sin(th / 2));
  return Vec2(-std::exp(-I * ph) * std::sin(th / 2), std::cos(th / 2));
}

double BlochDecomp::polar() const {
  return std::acos(std::clamp(axis(2), -1.0, 1.0));
}

double BlochDecomp::azimuth() const { return std::atan2(axis(1), axis(0)); }

BlochDecomp bloch_decompose(const Mat2& u) {
  BlochDecomp b;
  b.phase = std::arg(u.determinant()) / 2;
  Mat2 r = std::exp(-I * b.phase) * u;
  double c = std::clamp(r.trace().real() / 2, -1.0, 1.0);
  b.energy = std::acos(c);
  // r - cos E = i sin E n.sigma; read n off the anti-Hermitian part
  const double sx = ((r(0, 1) + r(1, 0)) / (2.0 * I)).real();
  const double sy = ((r(0, 1) - r(1, 0)) / 2.0).real();
  const double sz = ((r(0, 0) - r(1, 1)) / (2.0 * I)).real();
  const double s = std::sqrt(sx * sx + sy * sy + sz * sz);
  if (std::sin(b.energy) < 1e-9 || s < 1e-12) {
    b.degenerate = true;
    b.axis = Vec3(0, 0, 1);
  } else {
    b.axis = Vec3(sx, sy, sz) / s;
    b.energy = std::atan2(s, r.trace().real() / 2);
  }
  return b;
}

BandStructure compute_bands(const Protocol& p, const MomentumGrid& grid,
                            Exec exec) {
  BandStructure bs;
  bs.grid = grid;
  bs.points = exec == Exec::parallel ? kernels::band_points(p, grid)
                                     : serial::band_points(p, grid);
  return bs;
}

double quasi_energy_1d(double q) {
  // printed arctan(x, y) takes x first
  const double c = std::cos(q), s = std::sin(q);
  return std::atan2(std::sqrt(2 * s * s + c * c), c);
}

double quasi_energy_2d(double qx, double qy) {
  const double num = 1 - std::cos(qx) - std::cos(qx - qy) - std::cos(qy);
  return std::acos(std::clamp(num / (2 * std::sqrt(2.0)), -1.0, 1.0));
}

double quasi_energy_1d_lattice(double q) {
  return quasi_energy_1d(q + kBandOffset1D);
}

double quasi_energy_2d_lattice(double qx, double qy) {
  return quasi_energy_2d(qx + kBandOffset2D, qy + kBandOffset2D);
}

double band_offset_1d() { return kBandOffset1D; }
double band_offset_2d() { return kBandOffset2D; }

double group_velocity(const std::function<double(double)>& e, double q,
                      double step) {
  const double ep = e(q + step), em = e(q - step), e0 = e(q);
  if (std::sin(e0) < 1e-6 || std::sin(ep) < 1e-6 || std::sin(em) < 1e-6)
    return std::numeric_limits<double>::quiet_NaN();
  return (ep - em) / (2 * step);
}

double group_velocity(const std::function<double(double, double)>& e,
                      double qx, double qy, int axis, double step) {
  auto f = [&](double s) {
    return axis == 0 ? e(qx + s, qy) : e(qx, qy + s);
  };
  return group_velocity(std::function<double(double)>(f), 0.0, step);
}

double group_velocity_1d_analytic(double q) {
  const double e = quasi_energy_1d(q);
  if (std::sin(e) < 1e-6) return std::numeric_limits<double>::quiet_NaN();
  return std::sin(q) / (std::sqrt(2.0) * std::sin(e));
}

std::pair<double, double> band_gap_deltas(int n) {
  if (n < 5) throw std::invalid_argument("band_gap_deltas needs N >= 5");
  const double d0 = std::abs(quasi_energy_1d(pi / n) - quasi_energy_1d(3 * pi / n));
  const double dpi = std::abs(quasi_energy_1d(pi) - quasi_energy_1d(pi - 2 * pi / n));
  return {d0, dpi};
}

std::pair<double, double> breathing_periods(int n) {
  auto [d0, dpi] = band_gap_deltas(n);
  return {two_pi / d0, two_pi / dpi};
}

}  // namespace qw
