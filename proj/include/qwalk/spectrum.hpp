#pragma once
#include <functional>
#include <utility>
#include <vector>

#include "qwalk/lattice.hpp"
#include "qwalk/protocol.hpp"
#include "qwalk/types.hpp"

namespace qw {

// U = exp(i phase) (cos E + i sin E n.sigma), E in [0, pi].
struct BlochDecomp {
  double phase = 0.0;
  double energy = 0.0;
  Vec3 axis{0.0, 0.0, 1.0};
  bool degenerate = false;

  Mat2 reconstruct() const;
  // eigenvector of n.sigma with eigenvalue sigma = +1 / -1
  Vec2 eigenvector(int sigma) const;
  double polar() const;      // theta of n
  double azimuth() const;    // phi of n
};

BlochDecomp bloch_decompose(const Mat2& u);

struct BandStructure {
  MomentumGrid grid;
  std::vector<BlochDecomp> points;
};

BandStructure compute_bands(const Protocol& p, const MomentumGrid& grid,
                            Exec exec = Exec::parallel);

// Analytic 1D dispersion in band-formula coordinates (E(0) = pi/4).
double quasi_energy_1d(double q);
// Analytic 2D dispersion in band-formula coordinates.
double quasi_energy_2d(double qx, double qy);
// Same dispersions evaluated at lattice momenta of the u1d / u2d presets.
double quasi_energy_1d_lattice(double q);
double quasi_energy_2d_lattice(double qx, double qy);

double band_offset_1d();
double band_offset_2d();

// Group velocity by central difference. Returns NaN when the band is
// degenerate within the stencil (sin E < 1e-6).
double group_velocity(const std::function<double(double)>& e, double q,
                      double step = 1e-5);
double group_velocity(const std::function<double(double, double)>& e,
                      double qx, double qy, int axis, double step = 1e-5);
double group_velocity_1d_analytic(double q);

std::pair<double, double> band_gap_deltas(int n);
std::pair<double, double> breathing_periods(int n);

}  // namespace qw
