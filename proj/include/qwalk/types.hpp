#pragma once
// Shared numeric types and conventions.
//
// Fourier convention: <m|q> = exp(i q m). The shift sum_m |m+1><m| therefore
// acts as exp(-i q) on momentum amplitudes. Transforms are unitary (1/sqrt(N)
// both ways). Polarization basis: |H> = (1,0), |V> = (0,1).

#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace qw {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;
using Vec3 = Eigen::Vector3d;
using MatX = Eigen::MatrixXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

namespace pauli {
inline Mat2 s0() { return Mat2::Identity(); }
inline Mat2 s1() { Mat2 m; m << 0, 1, 1, 0; return m; }
inline Mat2 s2() { Mat2 m; m << 0, -I, I, 0; return m; }
inline Mat2 s3() { Mat2 m; m << 1, 0, 0, -1; return m; }
// sigma_- = (s1 - i s2)/2 maps |H> to |V>.
inline Mat2 minus() { Mat2 m; m << 0, 0, 1, 0; return m; }
inline Mat2 plus() { Mat2 m; m << 0, 1, 0, 0; return m; }
}  // namespace pauli

inline Vec2 pol_h() { return Vec2(1.0, 0.0); }
inline Vec2 pol_v() { return Vec2(0.0, 1.0); }

// Wrap an angle into (0, 2pi].
double wrap_positive(double a);
// Wrap an angle into (-pi, pi].
double wrap_signed(double a);

// Execution policy for the data-parallel kernels.
enum class Exec { serial, parallel };

}  // namespace qw
