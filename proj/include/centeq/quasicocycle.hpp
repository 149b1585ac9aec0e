#ifndef CENTEQ_QUASICOCYCLE_HPP
#define CENTEQ_QUASICOCYCLE_HPP

#include <functional>
#include <string>
#include <vector>

#include "centeq/system.hpp"

namespace centeq::qc {

using dynsys::LinearCenterIsometry;

// Trigonometric polynomial on the torus: sum of c*cos(2pi k.x) + s*sin(2pi k.x).
struct TrigTerm {
  VecZ freq;
  double c_cos = 0.0;
  double c_sin = 0.0;
};

class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  explicit TrigPolynomial(std::vector<TrigTerm> terms);

  static TrigPolynomial constant(int dim, double value);
  // file format, one term per line: k_1 ... k_d  c_cos  c_sin
  static TrigPolynomial from_file(const std::string& path, int dim);

  double operator()(const TorusPoint& p) const;
  double lipschitz() const;  // sup-norm bound on the gradient
  double sup_bound() const;  // sum of coefficient magnitudes
  const std::vector<TrigTerm>& terms() const { return terms_; }

 private:
  std::vector<TrigTerm> terms_;
};

// A sequence S_n with S_0 = 0 and a uniformly bounded additivity defect.
struct QuasiCocycle {
  std::function<double(const TorusPoint&, int)> eval;
  std::string provenance;

  double operator()(const TorusPoint& p, int n) const { return eval(p, n); }
};

// Birkhoff sums of a potential: exact cocycle, defect 0.
QuasiCocycle birkhoff(const LinearCenterIsometry& sys,
                      std::function<double(const TorusPoint&)> potential,
                      std::string name = "birkhoff");
QuasiCocycle birkhoff(const LinearCenterIsometry& sys, TrigPolynomial phi);

// Table-backed cocycle from CSV rows "x_1,...,x_d,n,value"; evaluation is
// nearest-neighbor in the stored points for the requested n (fixtures only).
QuasiCocycle from_table(const std::string& csv_path, int dim);

// Max over sampled (x, n, m), n+m <= n_max, of |S_{n+m}(x)-S_n(x)-S_m(T^n x)|.
// A lower bound for the true defect.
double defect_estimate(const QuasiCocycle& qc, const LinearCenterIsometry& sys,
                       int n_max, int samples, std::uint64_t seed);

// Max over sampled pairs y in B(x,n,eps) of |S_n(x)-S_n(y)|; lower bound for
// the n-th Bowen variation.
double bowen_variation(const QuasiCocycle& qc, const LinearCenterIsometry& sys,
                       int n, double eps, int samples, std::uint64_t seed);

enum class CohomologyVerdict { TrivialDifference, GrowingDifference, Inconclusive };

struct CohomologyReport {
  CohomologyVerdict verdict = CohomologyVerdict::Inconclusive;
  double slope = 0.0;      // fitted growth rate of sup_x |S_n - S'_n|
  double max_diff = 0.0;   // largest sampled difference
  double residual = 0.0;   // rms residual of the linear fit
};

// Fits sup_x |S_n(x) - S'_n(x)| against n over sampled points.
CohomologyReport is_cohomologous(const QuasiCocycle& a, const QuasiCocycle& b,
                                 const LinearCenterIsometry& sys, int n_max,
                                 int samples, std::uint64_t seed);

// Least-squares slope/intercept of y against x. Shared by several modules.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace centeq::qc

#endif
