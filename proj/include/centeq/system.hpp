#ifndef CENTEQ_SYSTEM_HPP
#define CENTEQ_SYSTEM_HPP

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "centeq/config.hpp"
#include "centeq/torus.hpp"

namespace centeq::dynsys {

// Invariant splitting of R^d into stable/center/unstable eigendirections.
// Columns of `basis` are unit eigenvectors ordered stable, center, unstable.
struct Splitting {
  Mat basis;
  Mat inv_basis;
  Vec eigenvalues;  // real eigenvalue per basis column
  int n_stable = 0, n_center = 0, n_unstable = 0;
  double lambda = 0.0;  // max contraction rate: max(|l_s|, 1/|l_u|)

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  int stable_begin() const { return 0; }
  int center_begin() const { return n_stable; }
  int unstable_begin() const { return n_stable + n_center; }
};

// Eigencoordinates of a displacement vector, grouped by bundle.
struct EigenOffset {
  Vec coords;  // full coordinate vector in the eigenbasis
  double stable_len = 0, center_len = 0, unstable_len = 0;
};

// Toral automorphism induced by an integer unimodular matrix whose center
// eigenvalues all have modulus one.
class LinearCenterIsometry {
 public:
  static LinearCenterIsometry from_matrix(const MatZ& m, std::string name = "");
  static LinearCenterIsometry cat_map();   // [[2,1],[1,1]]
  static LinearCenterIsometry t3_map();    // [[0,0,1],[1,0,-4],[0,1,4]]
  static LinearCenterIsometry builtin(const std::string& tag);
  static LinearCenterIsometry from_file(const std::string& path);

  int dim() const { return d_; }
  const std::string& name() const { return name_; }
  const MatZ& matrix() const { return M_; }
  const MatZ& inverse_matrix() const { return Minv_; }
  const Splitting& splitting() const { return split_; }
  double lambda() const { return split_.lambda; }
  double log_expansion() const;  // sum of log-moduli of unstable eigenvalues

  TorusPoint apply(const TorusPoint& p, long long k = 1) const;

  // nearest-translate image of a displacement under M^k (k may be negative)
  Vec push_diff(Vec diff, long long k = 1) const;

  double dist_n(const TorusPoint& a, const TorusPoint& b, int n) const;
  double dist_pm(const TorusPoint& a, const TorusPoint& b, int n) const;

  bool bowen_contains(const TorusPoint& center, int n, double eps,
                      const TorusPoint& y) const;
  bool bowen_pm_contains(const TorusPoint& center, int n, double eps,
                         const TorusPoint& y) const;

  EigenOffset decompose(const Vec& diff) const;
  Vec compose(const Vec& eigen_coords) const;

  // center eigendirection (unit); valid when center dimension is one
  Vec center_direction() const;
  Vec unstable_direction() const;
  Vec stable_direction() const;

  // y within intrinsic center distance `radius` of x, other components
  // below tolerance; translate-robust
  bool in_center_plaque(const TorusPoint& x, double radius,
                        const TorusPoint& y, double su_tol = 1e-7) const;

  // signed center coordinate of y relative to x when y lies in x's center
  // plaque; nullopt otherwise
  std::optional<double> center_offset(const TorusPoint& x, const TorusPoint& y,
                                      double su_tol = 1e-7) const;

  TorusPoint random_point(std::mt19937_64& rng) const;

 private:
  int d_ = 0;
  MatZ M_, Minv_;
  Mat Md_, Minvd_;
  Splitting split_;
  std::string name_;
};

struct ExpansivityReport {
  bool pass = true;
  int surviving_pairs = 0;
  double max_center_dist = 0.0;
  std::optional<std::pair<TorusPoint, TorusPoint>> witness;
};

// Samples pairs surviving the two-sided closeness filter and checks that
// they land in the 3*delta center plaque of each other.
ExpansivityReport plaque_expansivity_probe(const LinearCenterIsometry& sys,
                                           double delta, int n_max,
                                           int sample_count,
                                           std::uint64_t seed);

}  // namespace centeq::dynsys

#endif
