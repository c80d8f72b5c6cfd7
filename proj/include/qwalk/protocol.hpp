#pragma once
#include <span>
#include <string>
#include <vector>

#include "qwalk/lattice.hpp"
#include "qwalk/types.hpp"

namespace qw {

// Preset coin (s0 + i s1)/sqrt(2).
Mat2 coin_w();
// Alternative coin (s0 + i s2)/sqrt(2).
Mat2 coin_w_sigma2();
Mat2 coin_identity();
Mat2 coin_isigma1();

struct Primitive {
  enum class Kind { translation, coin };
  Kind kind = Kind::coin;
  int axis = 0;
  double delta = 0.0;
  Mat2 coin = Mat2::Identity();

  static Primitive translation(int axis, double delta);
  static Primitive make_coin(const Mat2& m);
};

struct Protocol {
  std::string name;
  // listed in application order: steps[0] acts first
  std::vector<Primitive> steps;
  // momentum shift from lattice coordinates to the analytic band formula
  std::vector<double> band_offset;

  int dim() const;
  void validate() const;
};

// Presets: u1d, u1d-sigma0, u1d-isigma1, u1d-w2, u2d.
Protocol preset(const std::string& name);
std::vector<std::string> preset_names();

// band-formula label -> lattice momentum for this protocol
double to_lattice_momentum(const Protocol& p, double q_label, int axis = 0);

Mat2 translation_momentum_rep(double delta, double q);
Mat2 compose_protocol(const Protocol& p, std::span<const double> q);
Mat2 mat_power(const Mat2& u, int t);
Mat2 step_power(const Protocol& p, std::span<const double> q, int t);

// Dense (2 N_T) x (2 N_T) operator on the explicit site basis.
// Basis index: 2 * site + polarization, sites row-major.
MatX position_space_unitary(const Protocol& p, const LatticeSpec& lattice);

}  // namespace qw
