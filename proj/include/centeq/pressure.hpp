#ifndef CENTEQ_PRESSURE_HPP
#define CENTEQ_PRESSURE_HPP

#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "centeq/netting.hpp"
#include "centeq/quasicocycle.hpp"

namespace centeq::pressure {

using dynsys::LinearCenterIsometry;
using netting::SeparatedNet;
using qc::QuasiCocycle;

enum class SeriesSource { SeparatedNet, QuasiperiodicFamily };

struct PartitionEntry {
  int n = 0;
  double eps = 0.0;
  double log_z = 0.0;
};

struct PartitionSumSeries {
  std::vector<PartitionEntry> entries;
  SeriesSource source = SeriesSource::SeparatedNet;
};

struct PressureEstimate {
  double P = 0.0;
  int n_lo = 0, n_hi = 0;
  double residual = 0.0;  // rms residual of the slope fit
  double eps = 0.0;
  bool stable = true;  // false when residuals grow with n (nonlinearity)
};

// log of sum over the net of exp(S_n(x)), evaluated as log-sum-exp
double log_partition_sum(const LinearCenterIsometry& sys,
                         const QuasiCocycle& qc, const SeparatedNet& net);
double partition_sum(const LinearCenterIsometry& sys, const QuasiCocycle& qc,
                     const SeparatedNet& net);

// default fit windows per torus dimension
std::vector<int> default_n_range(const LinearCenterIsometry& sys);

PartitionSumSeries net_series(const LinearCenterIsometry& sys,
                              const QuasiCocycle& qc, double eps,
                              const std::vector<int>& n_range);

PartitionSumSeries family_series(const LinearCenterIsometry& sys,
                                 const QuasiCocycle& qc,
                                 const netting::QuasiperiodicFamily& family);

PressureEstimate pressure_estimate(const LinearCenterIsometry& sys,
                                   const QuasiCocycle& qc, double eps,
                                   const std::vector<int>& n_range);
PressureEstimate pressure_from_series(const PartitionSumSeries& series);

struct MultiplicativityReport {
  bool pass = false;
  double band_lo = 0.0, band_hi = 0.0;  // fitted band for log ratios
  std::vector<std::tuple<int, int, double>> ratios;  // (n, m, log ratio)
  double worst_violation = 0.0;  // held-out excursion beyond the band
};

// checks log Z_{n+m} - log Z_n - log Z_m stays in a band fitted on small
// pairs and re-verified on held-out larger pairs
MultiplicativityReport multiplicativity_check(const PartitionSumSeries& series);

struct ScaleRobustnessReport {
  bool pass = false;
  double p_fine = 0.0, p_coarse = 0.0;
  double ratio_trend = 0.0;  // slope of log Z(eps1) - log Z(eps2) in n
  double max_abs_ratio = 0.0;
};

ScaleRobustnessReport scale_robustness_check(const LinearCenterIsometry& sys,
                                             const QuasiCocycle& qc,
                                             double eps1, double eps2,
                                             const std::vector<int>& n_range);

// invariant measure reduced to the two numbers the variational principle
// uses: entropy and the asymptotic mean of the quasicocycle
struct MeasureModel {
  std::string name;
  double entropy = 0.0;
  std::function<double(const LinearCenterIsometry&, const QuasiCocycle&)> mean;
};

MeasureModel haar_model(const LinearCenterIsometry& sys);
MeasureModel point_mass_model(const TorusPoint& x, int period);

struct VariationalReport {
  bool pass = false;
  double h_mu = 0.0;
  double mu_s = 0.0;   // asymptotic mean of S_n under the measure
  double lhs = 0.0;    // h_mu + mu_s
  double p_est = 0.0;
  bool attains = false;  // equality within tolerance
};

VariationalReport variational_check(const LinearCenterIsometry& sys,
                                    const QuasiCocycle& qc,
                                    const MeasureModel& mu, double p_est,
                                    double tol = 0.1);

}  // namespace centeq::pressure

#endif
