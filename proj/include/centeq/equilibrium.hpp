#ifndef CENTEQ_EQUILIBRIUM_HPP
#define CENTEQ_EQUILIBRIUM_HPP

#include <complex>
#include <functional>
#include <tuple>
#include <vector>

#include "centeq/netting.hpp"
#include "centeq/pressure.hpp"
#include "centeq/quasicocycle.hpp"

namespace centeq::equilibrium {

using dynsys::LinearCenterIsometry;
using qc::QuasiCocycle;

// Lebesgue measure on a center segment of half-length `radius` around
// `base`, carrying `weight`. radius 0 degenerates to a point mass.
struct SegmentAtom {
  TorusPoint base;
  Vec dir;  // unit center direction; ignored when radius == 0
  double radius = 0.0;
  double weight = 0.0;
};

struct PlaqueMeasure {
  std::vector<SegmentAtom> atoms;
  double delta = 0.0;
  int quadrature = 64;  // base points per segment for numeric integration

  double total_weight() const;
  // quadrature integral of a real test function
  double integrate(const std::function<double(const TorusPoint&)>& f) const;
  // exact integral of e^{2 pi i <k, x>} (segments integrate to a sinc factor)
  std::complex<double> character(const VecZ& k) const;
};

// weighted plaque measure with atoms at the level-n family points,
// weight e^{S_n(x)} / Z_n computed in log space
PlaqueMeasure empirical_measure(const LinearCenterIsometry& sys,
                                const QuasiCocycle& qc,
                                const netting::QuasiperiodicFamily& family,
                                int n);

// (1/n) sum of pushforwards T^j of the empirical measure, j = 0..n-1;
// center segments map to center segments so atoms stay exact
PlaqueMeasure cesaro_measure(const LinearCenterIsometry& sys,
                             const QuasiCocycle& qc,
                             const netting::QuasiperiodicFamily& family, int n);

struct BallMass {
  double mass = 0.0;
  double quant_error = 0.0;  // worst-case mass quantization of the quadrature
  bool coarse = false;       // resolution too coarse for eps: treat with care
};

// measure of the Bowen ball B(center, n, eps); segment atoms are integrated
// by doubling the quadrature until the mass moves by less than 1%
BallMass ball_mass_detail(const PlaqueMeasure& mu,
                          const LinearCenterIsometry& sys,
                          const TorusPoint& center, int n, double eps);
double ball_mass(const PlaqueMeasure& mu, const LinearCenterIsometry& sys,
                 const TorusPoint& center, int n, double eps);

struct GibbsReport {
  bool pass = false;
  double ratio_min = 0.0, ratio_max = 0.0;  // of mass / e^{S_n - n P}
  double trend = 0.0;       // fitted slope of log ratio against n
  double p_est = 0.0;
  double p_residual = 0.0;  // fit residual of the pressure estimate
  bool delta_warning = false;  // 13 delta exceeds the expansivity margin
  std::vector<std::tuple<Vec, int, double>> samples;  // (x, n, ratio)
  std::string diagnostic;
};

// two-sided Gibbs check: ratios ball_mass / e^{S_n(x) - n P} over sampled
// points and n in range must stay in a band of bounded eccentricity with no
// trend in n
GibbsReport gibbs_report(const LinearCenterIsometry& sys, const QuasiCocycle& qc,
                         const netting::QuasiperiodicFamily& family, double eps,
                         double delta, const std::vector<int>& n_range,
                         int sample_points);

struct InvarianceReport {
  bool pass = false;
  bool vacuous = false;
  double max_diff = 0.0;  // over the character battery
};

// compares integrals of a character battery under the measure and under its
// translate by a center vector
InvarianceReport commuting_invariance_check(const LinearCenterIsometry& sys,
                                            const PlaqueMeasure& mu,
                                            const Vec& translation,
                                            int frequency_cutoff = 2);

struct HaarReport {
  bool pass = false;
  double max_coefficient = 0.0;
  VecZ worst_k;
  std::vector<std::pair<VecZ, double>> coefficients;
};

// all nonzero-frequency Fourier magnitudes up to the cutoff; small values
// mean the measure is close to Haar in the weak topology
HaarReport haar_comparison(const PlaqueMeasure& mu, int frequency_cutoff,
                           double threshold = 0.05);

}  // namespace centeq::equilibrium

#endif
