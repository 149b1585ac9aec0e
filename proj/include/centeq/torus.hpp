#ifndef CENTEQ_TORUS_HPP
#define CENTEQ_TORUS_HPP

#include <Eigen/Dense>
#include <cmath>

namespace centeq {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using VecZ = Eigen::Matrix<long long, Eigen::Dynamic, 1>;
using MatZ = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// fractional part in [0,1)
inline double frac01(double t) {
  double f = t - std::floor(t);
  if (f >= 1.0) f = 0.0;  // guards against rounding of tiny negatives
  return f;
}

// representative in [-1/2, 1/2)
inline double wrap_half(double t) {
  double f = t - std::round(t);
  if (f >= 0.5) f -= 1.0;
  if (f < -0.5) f += 1.0;
  return f;
}

inline Vec reduce01(Vec v) {
  for (int i = 0; i < v.size(); ++i) v[i] = frac01(v[i]);
  return v;
}

inline Vec wrap_half(Vec v) {
  for (int i = 0; i < v.size(); ++i) v[i] = wrap_half(v[i]);
  return v;
}

// A point of T^d = R^d/Z^d; coordinates are kept reduced to [0,1).
struct TorusPoint {
  Vec x;

  TorusPoint() = default;
  explicit TorusPoint(Vec v) : x(reduce01(std::move(v))) {}

  int dim() const { return static_cast<int>(x.size()); }

  static TorusPoint of(std::initializer_list<double> coords) {
    Vec v(static_cast<int>(coords.size()));
    int i = 0;
    for (double c : coords) v[i++] = c;
    return TorusPoint(v);
  }
};

// quotient flat metric: each coordinate minimized over lattice translates
inline double toral_dist(const TorusPoint& a, const TorusPoint& b) {
  double s = 0.0;
  for (int i = 0; i < a.x.size(); ++i) {
    double d = wrap_half(a.x[i] - b.x[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

// difference vector b-a as the nearest-translate representative
inline Vec toral_diff(const TorusPoint& a, const TorusPoint& b) {
  Vec d = b.x - a.x;
  return wrap_half(std::move(d));
}

inline bool toral_eq(const TorusPoint& a, const TorusPoint& b, double tol) {
  return toral_dist(a, b) <= tol;
}

}  // namespace centeq

#endif
