#include "qwalk/masks.hpp"

#include <cmath>
#include <stdexcept>

#include "qwalk/kernels.hpp"

namespace qw {

namespace {

constexpr double kSingular = 1e-12;

Mat2 rotation(double a) {
  Mat2 r;
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

// Phase-gauged residual of the stack against an SU(2)-normalized target.
Eigen::Matrix<double, 8, 1> residual(const Eigen::Vector3d& d, const Mat2& u) {
  Mat2 s = reconstruct(d(0), d(1), d(2));
  cplx ov = (s.adjoint() * u).trace();
  cplx ph = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx(1.0);
  Mat2 diff = ph * s - u;
  Eigen::Matrix<double, 8, 1> r;
  for (int k = 0; k < 4; ++k) {
    r(2 * k) = diff(k).real();
    r(2 * k + 1) = diff(k).imag();
  }
  return r;
}

// Damped Gauss-Newton (Levenberg-Marquardt) on the three retardances.
Eigen::Vector3d refine(Eigen::Vector3d d, const Mat2& u) {
  double lambda = 1e-3;
  auto r = residual(d, u);
  double cost = r.squaredNorm();
  for (int it = 0; it < 200 && cost > 1e-28; ++it) {
    Eigen::Matrix<double, 8, 3> j;
    const double h = 1e-7;
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3d dp = d, dm = d;
      dp(k) += h;
      dm(k) -= h;
      j.col(k) = (residual(dp, u) - residual(dm, u)) / (2 * h);
    }
    Eigen::Matrix3d a = j.transpose() * j;
    Eigen::Vector3d g = j.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 20; ++tries) {
      Eigen::Matrix3d damped = a;
      damped.diagonal() *= (1.0 + lambda);
      damped.diagonal().array() += 1e-15;
      Eigen::Vector3d step = damped.ldlt().solve(-g);
      auto rn = residual(d + step, u);
      if (rn.squaredNorm() < cost) {
        d += step;
        r = rn;
        cost = rn.squaredNorm();
        lambda = std::max(lambda / 10, 1e-12);
        improved = true;
        break;
      }
      lambda *= 10;
    }
    if (!improved) break;
  }
  return d;
}

void analytic_angles(const BlochDecomp& b, MaskPoint& m) {
  const double se = std::sin(b.energy), ce = std::cos(b.energy);
  const Vec3& n = b.axis;
  const double sh = std::sqrt(m.h), sc = std::sqrt(1 - m.h);
  m.alpha = std::atan2(sc, sh);
  m.beta = std::atan2(ce / sc, -se * n(2) / sc);
  m.gamma = std::atan2(se * n(0) / sh, -se * n(1) / sh);
}

void finish(MaskPoint& m, const Mat2& target) {
  Mat2 s = reconstruct(m.d1, m.d2, m.d3);
  m.d0 = 2 * std::arg((s.adjoint() * target).trace());
  m.fidelity = fidelity(reconstruct(m.d1, m.d2, m.d3, m.d0), target);
}

}  // namespace

Mat2 slm_operator(double delta) {
  Mat2 m;
  m << std::exp(I * delta), 0, 0, 1;
  return m;
}

Mat2 slm_circular(double delta) {
  // |R><L| + |L><R| equals s3 in the H/V basis
  return std::cos(delta / 2) * pauli::s0() + I * std::sin(delta / 2) * pauli::s3();
}

Mat2 waveplate(double retardance, double alpha) {
  Mat2 d;
  d << std::exp(I * (retardance / 2)), 0, 0, std::exp(-I * (retardance / 2));
  return rotation(alpha) * d * rotation(-alpha);
}

Mat2 hwp(double alpha) { return waveplate(pi, alpha); }

Mat2 reconstruct(double d1, double d2, double d3, double d0) {
  const double a = pi / 8;
  return std::exp(I * (d0 / 2)) * slm_operator(d3) * hwp(-a) *
         slm_operator(d2) * hwp(a) * slm_operator(d1);
}

double fidelity(const Mat2& a, const Mat2& b) {
  return std::abs((a.adjoint() * b).trace()) / 2;
}

MaskPoint solve_masks(const Mat2& target) {
  MaskPoint m;
  const BlochDecomp b = bloch_decompose(target);
  const double se = std::sin(b.energy), ce = std::cos(b.energy);
  const double th = b.polar(), ph = b.azimuth();
  m.h_printed = ce * ce - se * se * std::sin(th) * std::sin(th) *
                              std::cos(ph) * std::cos(ph);
  // The stack equals (-i s2) exp(-i D3/2 s3) exp(i D2/2 s1) exp(i D1/2 s3)
  // up to phase, so |<H|i s2 U|H>|^2 = sin^2E sin^2theta fixes D2.
  m.h = se * se * std::sin(th) * std::sin(th);
  if (m.h > kSingular && m.h < 1 - kSingular) {
    analytic_angles(b, m);
    m.branch = MaskBranch::analytic;
  } else {
    // seed from a nearby non-singular target, then refine on the real one
    const double eps = 1e-3;
    const Mat2 tilt = std::cos(eps) * pauli::s0() +
                      I * std::sin(eps) / std::sqrt(3.0) *
                          (pauli::s1() + pauli::s2() + pauli::s3());
    MaskPoint seed;
    BlochDecomp bs = bloch_decompose(target * tilt);
    seed.h = std::sin(bs.energy) * std::sin(bs.energy) *
             std::sin(bs.polar()) * std::sin(bs.polar());
    analytic_angles(bs, seed);
    Eigen::Vector3d d(seed.beta + seed.gamma, 2 * seed.alpha,
                      seed.beta - seed.gamma);
    Mat2 su = std::exp(-I * b.phase) * target;
    d = refine(d, su);
    m.d1 = d(0);
    m.d2 = d(1);
    m.d3 = d(2);
    m.alpha = m.d2 / 2;
    m.beta = (m.d1 + m.d3) / 2;
    m.gamma = (m.d1 - m.d3) / 2;
    m.branch = MaskBranch::fallback;
    finish(m, target);
    if (m.fidelity < 1 - 1e-6)
      throw std::runtime_error("mask fallback failed to converge");
    return m;
  }
  m.d2 = 2 * m.alpha;
  m.d1 = m.beta + m.gamma;
  m.d3 = m.beta - m.gamma;
  finish(m, target);
  return m;
}

MaskPoint solve_masks(const BlochDecomp& target) {
  return solve_masks(target.reconstruct());
}

RetarderStack solve_mask_grid(const std::vector<Mat2>& targets,
                              const std::vector<int>& shape, Exec exec) {
  size_t count = 1;
  for (int n : shape) count *= static_cast<size_t>(n);
  if (count != targets.size()) throw std::invalid_argument("mask grid shape does not match targets");
  RetarderStack s;
  s.shape = shape;
  s.points = exec == Exec::parallel ? kernels::solve_grid(targets)
                                    : serial::solve_grid(targets);
  return s;
}

double wrap_phase(double d) {
  double r = std::fmod(d, two_pi);
  if (r < 0) r += two_pi;
  if (r >= two_pi) r -= two_pi;
  return r;
}

RetarderStack wrap_masks(const RetarderStack& s) {
  RetarderStack out = s;
  for (auto& p : out.points) {
    p.d1 = wrap_phase(p.d1);
    p.d2 = wrap_phase(p.d2);
    p.d3 = wrap_phase(p.d3);
  }
  return out;
}

std::vector<cplx> synth_input_array(const MomentumGrid& grid, double sigma,
                                    const std::vector<cplx>& coeffs,
                                    const std::vector<double>& q) {
  if (grid.dim() != 1) throw std::invalid_argument("synth_input_array is 1D");
  if (static_cast<int>(coeffs.size()) != grid.total)
    throw std::invalid_argument("one coefficient per sample required");
  std::vector<cplx> a(q.size(), 0.0);
  for (size_t k = 0; k < q.size(); ++k) {
    for (int h = 0; h < grid.total; ++h) {
      // nearest periodic image of the beamlet centre
      const double dq = wrap_signed(q[k] - grid.q[0][h]);
      a[k] += coeffs[h] * std::exp(-dq * dq / (2 * sigma * sigma));
    }
  }
  return a;
}

}  // namespace qw
