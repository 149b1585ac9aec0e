#ifndef CENTEQ_NETTING_HPP
#define CENTEQ_NETTING_HPP

#include <map>
#include <vector>

#include "centeq/system.hpp"

namespace centeq::netting {

using dynsys::LinearCenterIsometry;

enum class NetKind { Separated, Spanning };

struct SeparatedNet {
  std::vector<TorusPoint> points;
  int n = 1;
  double eps = 0.0;
  NetKind kind = NetKind::Separated;
  bool maximal = false;

  std::size_t size() const { return points.size(); }
};

// Greedy maximal (n,eps)-separated net over a deterministic lexicographic
// grid scan. The result is also (n,eps)-spanning for the grid by maximality.
SeparatedNet greedy_separated(const LinearCenterIsometry& sys, int n,
                              double eps, int grid_resolution);

bool validate_separated(const LinearCenterIsometry& sys,
                        const SeparatedNet& net);

// Constructive (n,eps)-separated net: an eigenbasis lattice with spacing
// slightly above eps along stable/center directions and eps*lambda_s^{n-1}
// along unstable ones. Density factors are exactly n-independent, which
// keeps growth-rate fits unbiased; size is O(e^{n h}) and construction is
// linear in the size.
SeparatedNet structured_separated(const LinearCenterIsometry& sys, int n,
                                  double eps);

// Quasiperiodic point together with the lattice vector certifying it.
struct QuasiperiodicPoint {
  TorusPoint x;
  VecZ k;           // (M^n - I) x = k + t * v_c
  double center_residual = 0.0;  // |t|
};

// Exact lattice enumeration of the (n,delta)-quasiperiodic solution
// families, one representative per family with center offset zero.
// `lattice_bound` <= 0 means the exact bound derived from M^n - I.
std::vector<QuasiperiodicPoint> quasiperiodic_points(
    const LinearCenterIsometry& sys, int n, double delta,
    long long lattice_bound = 0);

struct QuasiperiodicFamily {
  std::map<int, std::vector<TorusPoint>> levels;  // n -> E_n
  double delta = 0.0;
};

QuasiperiodicFamily build_quasiperiodic_family(const LinearCenterIsometry& sys,
                                               const std::vector<int>& n_range,
                                               double delta);

bool validate_family(const LinearCenterIsometry& sys,
                     const QuasiperiodicFamily& family);

// primitive integer kernel vector of (M - I); throws unless the kernel is
// one-dimensional. Applied to the transpose this yields the integer linear
// functional w with w . T(x) = w . x mod 1.
VecZ primitive_center_vector(const MatZ& M);

}  // namespace centeq::netting

#endif
