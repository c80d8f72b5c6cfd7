#pragma once
#include <functional>
#include <string>
#include <vector>

#include "qwalk/evolve.hpp"
#include "qwalk/lattice.hpp"
#include "qwalk/protocol.hpp"
#include "qwalk/types.hpp"

namespace qw {

double similarity(const std::vector<double>& p, const std::vector<double>& q);
double similarity(const Distribution& a, const Distribution& b);

enum class RecurrenceKind { exact_up_to_phase, distributional };

struct Recurrence {
  int t = 0;
  RecurrenceKind kind = RecurrenceKind::distributional;
  double score = 0.0;
};

// Exact: |sum_h tr U_h^t| / (2 N_T), which is 1 iff every U_h^t equals one
// shared phase times I. Distributional: similarity of P(t) to P(0).
std::vector<Recurrence> find_recurrences(const Protocol& p,
                                         const LatticeSpec& lattice, int t_max,
                                         double tol,
                                         const MomentumState* initial = nullptr);
// Highest distributional similarity to the initial state over [t_lo, t_hi].
Recurrence best_recurrence(const Protocol& p, const MomentumState& initial,
                           int t_lo, int t_hi);

struct Trajectory {
  std::vector<std::vector<int>> sites;       // argmax per step
  std::vector<std::vector<double>> unwrapped;  // angle coordinates, unrolled
};

Trajectory peak_trajectory(const std::vector<Distribution>& frames);

// Analytic scalar models. q0 is the lattice momentum at which the packet is
// centred and m0 its centre site; (q_h - q0) uses the nearest periodic image.
std::vector<double> scalar_prob(int n, double q0, double w,
                                const std::function<double(double)>& e, int t,
                                int m0 = 0);
std::vector<double> parabolic_prob(int n, double q0, double w, double beta,
                                   int t, int m0 = 0);

enum class FewWave { on_sample_3wave, between_samples_4wave };
// q0 is a sample (3 waves) or a midpoint between samples (4 waves).
std::vector<double> few_wave_prob(int n, FewWave regime, double q0, double w,
                                  const std::function<double(double)>& e,
                                  int t, int m0 = 0);

struct ThetaParams {
  double q0 = 0.0;
  double sigma_q = 1.0;
  double v = 0.0;
  double d = 0.0;   // E''(q0)
  double e0 = 0.0;
  int n = 1;
  int order = 0;    // theta truncation; 0 selects it adaptively
};

cplx free_gaussian_psi(double x, double t, const ThetaParams& p);
cplx image_sum_psi(double x, double t, const ThetaParams& p, int r_max);

struct ThetaValue {
  cplx value;
  int order = 0;
  bool truncation_ok = true;
};
ThetaValue jacobi_theta3(cplx z, cplx gamma, int order = 0);

// Normalized cyclic amplitudes on sites 0..N-1 via the three routes.
std::vector<cplx> theta_psi(double t, const ThetaParams& p);
// r_max <= 0 picks the image count from the packet spread at time t.
std::vector<cplx> image_sum_field(double t, const ThetaParams& p, int r_max = 0);
int image_count(double t, const ThetaParams& p);
std::vector<cplx> momentum_sum_field(double t, const ThetaParams& p);

// C_r(t) for r = -r_max..r_max (index r + r_max), weights normalized so that
// C_0 = 1/N.
std::vector<cplx> correlation_coeffs(const ThetaParams& p, int r_max, double t);
// sum_r C_r exp(2 pi i r x / N) on sites 0..N-1
std::vector<cplx> correlation_prob(const std::vector<cplx>& c, int n);

// Sites at maximal ring distance from m0 (two sites for odd N, one for even).
std::vector<int> antipodal_window(int n, int m0);
double window_occupancy(const Distribution& d, const std::vector<int>& sites);

// Dominant period of a mean-removed series from its discrete spectrum,
// refined by parabolic interpolation of the peak. 0 for a flat series.
double dominant_period(const std::vector<double>& series);
// Local maxima of the 3-step moving average (indices into the series).
std::vector<int> smoothed_local_maxima(const std::vector<double>& series);

}  // namespace qw
