#pragma once
#include <string>
#include <vector>

#include "qwalk/lattice.hpp"
#include "qwalk/spectrum.hpp"
#include "qwalk/types.hpp"

namespace qw {

// diag(exp(i delta), 1)
Mat2 slm_operator(double delta);
// circular-basis retarder cos(d/2) + i sin(d/2) (|R><L| + |L><R|)
Mat2 slm_circular(double delta);
// R(alpha) diag(exp(i r/2), exp(-i r/2)) R(-alpha)
Mat2 waveplate(double retardance, double alpha);
Mat2 hwp(double alpha);

// SLM3 . HWP(-22.5deg) . SLM2 . HWP(22.5deg) . SLM1, times exp(i d0 / 2)
Mat2 reconstruct(double d1, double d2, double d3, double d0 = 0.0);

double fidelity(const Mat2& a, const Mat2& b);

enum class MaskBranch { analytic, fallback };

struct MaskPoint {
  double d1 = 0, d2 = 0, d3 = 0;
  double d0 = 0;  // global phase so that reconstruct(...) equals the target
  double alpha = 0, beta = 0, gamma = 0;
  double h = 0;           // singularity parameter of the analytic branch
  double h_printed = 0;   // cos^2E - sin^2E sin^2(theta) cos^2(phi)
  double fidelity = 0;
  MaskBranch branch = MaskBranch::analytic;
};

// Throws if the fallback cannot reach fidelity 1 - 1e-6.
MaskPoint solve_masks(const Mat2& target);
MaskPoint solve_masks(const BlochDecomp& target);

struct RetarderStack {
  std::vector<int> shape;
  std::vector<MaskPoint> points;
};

RetarderStack solve_mask_grid(const std::vector<Mat2>& targets,
                              const std::vector<int>& shape,
                              Exec exec = Exec::parallel);
RetarderStack wrap_masks(const RetarderStack& s);
double wrap_phase(double d);  // into [0, 2pi)

// Gaussian beamlets g(q) = exp(-q^2 / (2 sigma^2)) centred on the samples of
// a 1D grid, evaluated at the points `q`.
std::vector<cplx> synth_input_array(const MomentumGrid& grid, double sigma,
                                    const std::vector<cplx>& coeffs,
                                    const std::vector<double>& q);

}  // namespace qw
