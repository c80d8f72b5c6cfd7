#pragma once
#include <array>
#include <string>
#include <vector>

#include "qwalk/types.hpp"

namespace qw {

enum class Boundary { cyclic, emulated_infinite };

struct AxisSpec {
  int size = 1;
  Boundary boundary = Boundary::cyclic;
  int window = 0;  // ring size used for emulated_infinite axes

  // number of sites actually simulated along this axis
  int extent() const { return boundary == Boundary::cyclic ? size : window; }
};

struct LatticeSpec {
  std::vector<AxisSpec> axes;

  int dim() const { return static_cast<int>(axes.size()); }
  int total() const;
  std::vector<int> shape() const;
  void validate() const;

  static LatticeSpec ring(int n);
  static LatticeSpec torus(int nx, int ny);
  // x emulated as a ring of `window` sites, y cyclic of size ny
  static LatticeSpec cylinder(int ny, int window, int nx_region = 1);
};

struct MomentumGrid {
  std::vector<std::vector<double>> q;  // per axis, ascending h = 1..N
  std::vector<int> shape;
  int total = 0;

  int dim() const { return static_cast<int>(shape.size()); }
  // momentum vector of flat index k (row-major, axis 0 slowest)
  std::array<double, 2> point(int k) const;
  bool same_as(const MomentumGrid& o) const { return shape == o.shape; }
};

MomentumGrid build_momentum_grid(const LatticeSpec& spec);

int emulated_window(int t_max, int support);

// flat <-> multi index helpers for row-major 1D/2D fields
inline int flat_index(const std::vector<int>& shape, int i, int j = 0) {
  return shape.size() == 1 ? i : i * shape[1] + j;
}

// shortest distance between sites a and b on a ring of n sites
int ring_distance(int a, int b, int n);

}  // namespace qw
