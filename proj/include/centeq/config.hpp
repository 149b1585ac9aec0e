#ifndef CENTEQ_CONFIG_HPP
#define CENTEQ_CONFIG_HPP

#include <cstdint>

namespace centeq {

// Global numeric defaults. The paper-style constants (expansivity bound,
// separation multiples) are not pinned by theory, so they live here.
struct Config {
  std::uint64_t seed = 20240817ULL;
  double c_exp = 0.1;        // plaque expansivity candidate
  double eps0 = 0.05;        // Bowen property scale
  double delta0 = 0.1;       // max quasiperiodicity scale
  double point_tol = 1e-9;   // torus point equality
  double eig_tol = 1e-12;    // eigensplitting refinement
  int sep_mult = 3;          // center separation multiple (3*delta)
  int plaque_mult = 6;       // plaque measure radius multiple (6*delta)
};

inline const Config& default_config() {
  static Config cfg;
  return cfg;
}

}  // namespace centeq

#endif
