#ifndef CENTEQ_ROOTSYSTEM_HPP
#define CENTEQ_ROOTSYSTEM_HPP

#include <string>
#include <vector>

#include "centeq/torus.hpp"

namespace centeq::roots {

struct RootSystem {
  std::string name;
  int ambient = 0;  // dimension of the ambient Euclidean space
  std::vector<Vec> roots;

  static RootSystem a2();
  static RootSystem b2();
  static RootSystem g2();
  // {+-alpha} in R^2: valid reflection data but deficient kernel span,
  // used as a negative control
  static RootSystem single_pair();
  static RootSystem from_file(const std::string& json_path);
};

// reflection through the hyperplane orthogonal to alpha
Mat reflection(const Vec& alpha);

// closure under negation and permutation of the roots by every reflection
bool validate(const RootSystem& rs, double tol = 1e-9);

struct WeylKernelReport {
  int ambient = 0;
  int span_rank = 0;  // rank of span{a - s_alpha(a)}
  bool pass = false;  // span_rank == ambient: forces any invariant H to 0
};

// a linear functional vanishing on every a - s_alpha(a) factors through the
// quotient by their span; full rank certifies it must vanish identically
WeylKernelReport weyl_kernel_check(const RootSystem& rs);

}  // namespace centeq::roots

#endif
