#ifndef CENTEQ_SPECIFICATION_HPP
#define CENTEQ_SPECIFICATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "centeq/system.hpp"

namespace centeq::spec {

using dynsys::LinearCenterIsometry;

// Orbit segments to shadow: segment i prescribes the orbit of x_i on the
// integer interval [a_i, b_i]; consecutive intervals must be >= gap apart.
struct OrbitSegment {
  TorusPoint x;
  int a = 0;
  int b = 0;

  int length() const { return b - a; }
};

struct OrbitSpec {
  std::vector<OrbitSegment> segments;
  int gap = 0;  // required minimum distance between consecutive intervals

  void validate() const;  // throws on overlapping / under-gapped intervals
  static OrbitSpec from_file(const std::string& path, int dim);
};

struct ShadowResult {
  TorusPoint z;
  double achieved_eps = 0.0;  // max over segments i, j in [a_i,b_i] of
                              // dist(T^j z, T^{j-a_i} x_i)
  std::optional<std::pair<int, double>> quasiperiod;  // (n, center residual)
};

// Smallest d such that the forward image of an unstable segment of intrinsic
// half-length eps becomes eps-dense in the torus (grid-checked). This is the
// empirical gap requirement for shadowing at scale eps.
int gap_requirement(const LinearCenterIsometry& sys, double eps,
                    int max_d = 40);

// Membership in the union over cs-ball centers y of T^{-d} applied to the
// unstable eps-ball at T^d y: cs-offset within eps and unstable offset
// within eps after d forward expansions.
bool j_csu_set_contains(const LinearCenterIsometry& sys, const TorusPoint& x,
                        double eps, int d, const TorusPoint& y);

// Constructs a single orbit passing within 2*eps of every prescribed segment.
// Throws when a gap is below the measured requirement for eps.
ShadowResult shadow(const LinearCenterIsometry& sys, const OrbitSpec& spec,
                    double eps);

// Refines an eps-almost-returning point (dist(T^n z, z) <= eps) into a
// quasiperiodic point: stable then unstable affine corrections cancel the
// hyperbolic components of the return displacement exactly.
ShadowResult quasiperiodize(const LinearCenterIsometry& sys,
                            const TorusPoint& z, int n, double eps);

}  // namespace centeq::spec

#endif
