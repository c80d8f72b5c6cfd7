#pragma once
#include <utility>
#include <vector>

#include "qwalk/lattice.hpp"
#include "qwalk/protocol.hpp"
#include "qwalk/spectrum.hpp"
#include "qwalk/types.hpp"

namespace qw {

struct MomentumState {
  MomentumGrid grid;
  std::vector<Vec2> c;  // one spinor per grid point, flat row-major

  double norm() const;
};

struct Wavepacket {
  std::vector<int> m0;      // centre per axis
  std::vector<double> q0;   // phase gradient per axis, exp(-i q0.m)
  double w = 1.0;
  Vec2 pol = pol_h();
};

struct EnvelopeSpec {
  double sigma = 0.0;
  int window = 1;
};

struct Distribution {
  std::vector<int> shape;
  std::vector<double> p;

  double at(int i, int j = 0) const { return p[flat_index(shape, i, j)]; }
  double total() const;
};

// Position-space spinor field <-> momentum amplitudes (unitary DFT).
MomentumState to_momentum(const MomentumGrid& grid, const std::vector<Vec2>& psi);
std::vector<Vec2> to_position(const MomentumState& s);

MomentumState prepare_localized(const LatticeSpec& lattice,
                                const std::vector<int>& m0, const Vec2& pol);
MomentumState prepare_wavepacket(const LatticeSpec& lattice, const Wavepacket& wp);
// Lattice momentum at which a wavepacket's amplitude is centred.
std::vector<double> wavepacket_momentum(const Wavepacket& wp);

MomentumState evolve_eigenphase(const MomentumState& s, const BandStructure& b, int t);
MomentumState evolve_stepwise(const MomentumState& s, const Protocol& p, int t,
                              Exec exec = Exec::parallel);

Distribution position_distribution(const MomentumState& s);
Distribution distribution_of(const std::vector<int>& shape,
                             const std::vector<Vec2>& psi);

// P(t) for t = 0..t_max, one protocol step per entry.
std::vector<Distribution> run_distributions(const MomentumState& s0,
                                            const Protocol& p, int t_max,
                                            Exec exec = Exec::parallel);

std::pair<std::vector<double>, std::vector<double>> marginals(const Distribution& d);

// Far-field intensity over `window` Brillouin-zone copies per axis with the
// Fourier-transformed Gaussian beamlet envelope exp(-sigma^2 m^2 / 2).
Distribution far_field_with_envelope(const MomentumState& s, const EnvelopeSpec& env);
double envelope_amplitude(double sigma, double m);

// 2 Ny x 2 Ny step operator at fixed q_x with the y axis kept in sites.
// Basis index: 2 * n + polarization.
MatX effective_cylinder_unitary(const Protocol& p, int ny, double qx);

// Evolve a position-space field on a (window x ny) cylinder through the
// effective multiband route; returns the field after t steps.
std::vector<Vec2> evolve_cylinder_effective(const LatticeSpec& lattice,
                                            const std::vector<Vec2>& psi,
                                            const Protocol& p, int t);

}  // namespace qw
