#include "centeq/acceptance.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/LU>

#include "centeq/equilibrium.hpp"
#include "centeq/latticebridge.hpp"
#include "centeq/netting.hpp"
#include "centeq/pressure.hpp"
#include "centeq/rootsystem.hpp"
#include "centeq/specification.hpp"

namespace centeq::acceptance {

namespace {

using dynsys::LinearCenterIsometry;

const double kEntropy = std::log((3.0 + std::sqrt(5.0)) / 2.0);

qc::QuasiCocycle zero_qc(const LinearCenterIsometry& sys) {
  return qc::birkhoff(sys, [](const TorusPoint&) { return 0.0; }, "zero");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct Battery {
  LinearCenterIsometry cat = LinearCenterIsometry::cat_map();
  LinearCenterIsometry t3 = LinearCenterIsometry::t3_map();
  netting::QuasiperiodicFamily cat_family =
      netting::build_quasiperiodic_family(cat, {3, 4, 5, 6, 7, 8, 9, 10},
                                          0.1);
  netting::QuasiperiodicFamily t3_family =
      netting::build_quasiperiodic_family(t3, {4, 5, 6, 7, 8}, 0.05);
};

CriterionResult entropy_partition_sums(Battery& b) {
  // tolerance: 5% of log((3+sqrt5)/2). The 3-torus runs at eps=0.13 with
  // n in [5,8]; finer scales exceed the net budget and smaller n carry an
  // n-dependent pruning fraction that biases the slope.
  CriterionResult r{1, "entropy-partition-sums"};
  auto pc = pressure::pressure_estimate(b.cat, zero_qc(b.cat), 0.05,
                                        {4, 5, 6, 7, 8, 9});
  auto pt = pressure::pressure_estimate(b.t3, zero_qc(b.t3), 0.13,
                                        {5, 6, 7, 8});
  r.pass = std::abs(pc.P - kEntropy) <= 0.05 * kEntropy &&
           std::abs(pt.P - kEntropy) <= 0.05 * kEntropy;
  r.detail = "cat P=" + fmt(pc.P) + " t3 P=" + fmt(pt.P) + " target " +
             fmt(kEntropy) + " +-5%";
  return r;
}

CriterionResult constant_shift(Battery& b) {
  CriterionResult r{2, "constant-shift-exactness"};
  std::vector<int> ns = {4, 5, 6, 7, 8, 9, 10};
  auto p0 = pressure::pressure_estimate(b.cat, zero_qc(b.cat), 0.1, ns);
  r.pass = true;
  for (double c : {-0.5, 0.3}) {
    auto qc_c = qc::birkhoff(b.cat, qc::TrigPolynomial::constant(2, c));
    auto pc = pressure::pressure_estimate(b.cat, qc_c, 0.1, ns);
    double err = std::abs((pc.P - p0.P) - c);
    if (err > 1e-2) r.pass = false;
    r.detail += "c=" + fmt(c) + " err=" + fmt(err) + " ";
  }
  r.detail += "(tol 1e-2)";
  return r;
}

CriterionResult growth_laws(Battery& b) {
  CriterionResult r{3, "partition-growth-laws"};
  auto series = pressure::net_series(b.cat, zero_qc(b.cat), 0.05,
                                     {2, 3, 4, 5, 6, 7, 8, 9, 10});
  auto mult = pressure::multiplicativity_check(series);
  auto scale = pressure::scale_robustness_check(b.cat, zero_qc(b.cat), 0.03,
                                                0.06, {4, 5, 6, 7, 8, 9, 10});
  r.pass = mult.pass && !mult.ratios.empty() && scale.pass;
  r.detail = "mult band [" + fmt(mult.band_lo) + "," + fmt(mult.band_hi) +
             "] pairs=" + std::to_string(mult.ratios.size()) +
             " scale dP=" + fmt(std::abs(scale.p_fine - scale.p_coarse)) +
             " trend=" + fmt(scale.ratio_trend);
  return r;
}

CriterionResult gibbs_bounds(Battery& b) {
  // 7 levels x 29 points = 203 sampled (x,n); band eccentricity < 100 and
  // no trend in n (|slope of log ratio| <= 0.15)
  CriterionResult r{4, "gibbs-two-sided"};
  // the measure needs several e-foldings of margin above the largest n or
  // the single-atom floor of the discretization inflates the n=9 ratios;
  // the raw period-12 solution set is already invariant and dense enough
  netting::QuasiperiodicFamily dense;
  dense.delta = 0.1;
  for (const auto& qp : netting::quasiperiodic_points(b.cat, 12, 0.1))
    dense.levels[12].push_back(qp.x);
  auto rep = equilibrium::gibbs_report(b.cat, zero_qc(b.cat), dense, 0.08,
                                       0.1, {3, 4, 5, 6, 7, 8, 9}, 29);
  r.pass = rep.pass && rep.ratio_min > 0;
  r.detail = "C/c=" + fmt(rep.ratio_max / rep.ratio_min) +
             " trend=" + fmt(rep.trend) + " samples=" +
             std::to_string(rep.samples.size());
  if (!rep.diagnostic.empty()) r.detail += " " + rep.diagnostic;
  return r;
}

CriterionResult quasiperiodic_counting(Battery& b) {
  // raw solution counts; the orbit-quotiented family would sit below the
  // 10% band by the extra 1/n factor
  CriterionResult r{5, "quasiperiodic-counting"};
  r.pass = true;
  double worst = 0;
  for (int n = 3; n <= 8; ++n) {
    auto pts = netting::quasiperiodic_points(b.t3, n, 0.05);
    double rate = std::log(double(pts.size())) / n;
    worst = std::max(worst, std::abs(rate - kEntropy) / kEntropy);
    if (std::abs(rate - kEntropy) > 0.10 * kEntropy) r.pass = false;
  }
  r.detail = "worst relative deviation " + fmt(worst) + " (tol 0.10)";
  return r;
}

CriterionResult specification_shadowing(Battery& b) {
  // eps=0.15 keeps the quasiperiodic loop short enough that the stored
  // double point can meet the 1e-9 residual (the floor is lambda_u^l*ulp)
  CriterionResult r{6, "specification-shadowing"};
  r.pass = true;
  double eps = 0.15;
  for (int sysid = 0; sysid < 2; ++sysid) {
    const auto& sys = sysid ? b.t3 : b.cat;
    int m = spec::gap_requirement(sys, eps / 2);
    int l = 2 + 2 * m;
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_resid = 0, worst_d = 0, worst_cf = 0;
    int ok = 0;
    for (int t = 0; t < 50; ++t) {
      Vec x1(sys.dim()), x2(sys.dim());
      for (int i = 0; i < sys.dim(); ++i) {
        x1[i] = u(rng);
        x2[i] = u(rng);
      }
      if (sys.dim() == 3) {
        // both targets must sit on the same invariant level of the
        // coordinate-sum functional
        x2[2] = frac01(x1.sum() - x2[0] - x2[1]);
      }
      spec::OrbitSpec sp;
      sp.gap = m;
      sp.segments.push_back({TorusPoint(x1), 0, 1});
      sp.segments.push_back({TorusPoint(x2), 1 + m, 2 + m});
      sp.segments.push_back({TorusPoint(x1), l, l});
      auto res = spec::shadow(sys, sp, eps);
      auto q = spec::quasiperiodize(sys, res.z, l, 4 * eps);
      double resid = q.quasiperiod ? q.quasiperiod->second : 1e18;
      double wd = 0;
      for (const auto& seg : sp.segments)
        for (int j = 0; j <= seg.length(); ++j)
          wd = std::max(wd, toral_dist(sys.apply(q.z, seg.a + j),
                                       sys.apply(seg.x, j)));
      worst_resid = std::max(worst_resid, resid);
      worst_d = std::max(worst_d, wd);
      if (sys.dim() == 2) {
        // closed-form periodic solve from the lattice certificate
        MatZ mn = MatZ::Identity(2, 2);
        for (int i = 0; i < l; ++i) mn = sys.matrix() * mn;
        Mat a = (mn - MatZ::Identity(2, 2)).cast<double>();
        Vec k = a * q.z.x;
        for (int i = 0; i < 2; ++i) k[i] = std::round(k[i]);
        Vec zs = a.partialPivLu().solve(k);
        worst_cf = std::max(worst_cf, toral_dist(q.z, TorusPoint(zs)));
      }
      if (resid <= 1e-9 && wd <= 5 * eps) ++ok;
    }
    if (ok != 50 || worst_cf > 1e-9) r.pass = false;
    r.detail += std::string(sysid ? "t3" : "cat") + ": ok=" +
                std::to_string(ok) + "/50 resid<=" + fmt(worst_resid) +
                " d<=" + fmt(worst_d) +
                (sysid ? std::string(" ") : " cf<=" + fmt(worst_cf) + " ");
  }
  return r;
}

CriterionResult bridge_bound(Battery&) {
  CriterionResult r{7, "bridge-quasicocycle-bound"};
  auto sq = bridge::scalar_qm(
      [](long long n) { return std::floor(std::sqrt(2.0) * n); });
  auto rep = bridge::bridge_defect_check(sq, 100.0, 1000, 100000, 20240817);

  bridge::PiQuasimorphism rotq;
  rotq.d = 1;
  rotq.N = 2;
  Mat rot(2, 2);
  rot << std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0);
  rotq.generators = {rot};
  Vec w(2);
  w << 1.0, 0.5;
  Mat rminus = rot - Mat::Identity(2, 2);
  rotq.L = [rminus, w](const VecZ& a) {
    double th = double(a[0]);
    Mat rn(2, 2);
    rn << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    return Vec(rminus.partialPivLu().solve((rn - Mat::Identity(2, 2)) * w));
  };
  auto rep2 = bridge::bridge_defect_check(rotq, 100.0, 1000, 100000, 7);

  // L(n)=n: S(x,(g)) = floor(x+g) and H(g)=g differ by at most 1 exactly
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0.0, 1.0), ug(-1e6, 1e6);
  double sup = 0;
  for (int t = 0; t < 100000; ++t) {
    double g = ug(rng);
    sup = std::max(sup, std::abs(std::floor(ux(rng) + g) - g));
  }
  r.pass = rep.pass && rep2.pass && sup <= 1.0;
  r.detail = "sqrt2 defect=" + fmt(rep.measured) + "<=K=" +
             fmt(rep.assembled_k()) + " twisted defect=" + fmt(rep2.measured) +
             " floor sup|S-H|=" + fmt(sup);
  return r;
}

CriterionResult homogenization(Battery&) {
  CriterionResult r{8, "homogenization-haar-average"};
  auto floor_sqrt2 = [](long long n) { return std::floor(std::sqrt(2.0) * n); };
  double e1 = 0;
  for (long long g : {1, 3}) {
    auto h = bridge::homogenize_at(floor_sqrt2, g);
    e1 = std::max(e1, std::abs(h.value - g * std::sqrt(2.0)));
  }
  auto qm = bridge::scalar_qm([](long long n) { return double(n); });
  auto ha = bridge::haar_average_H(qm, Vec::Constant(1, 0.37));
  auto ha3 = bridge::haar_average_H(qm, Vec::Constant(1, 3 * 0.37));
  double e2 = std::abs(ha.H[0] - 0.37);
  double e3 = std::abs(ha3.H[0] - 3 * ha.H[0]);
  r.pass = e1 <= 1e-6 && e2 <= 1e-6 && e3 <= 1e-6;
  r.detail = "homog err=" + fmt(e1) + " H err=" + fmt(e2) +
             " additivity err=" + fmt(e3) + " (tol 1e-6)";
  return r;
}

CriterionResult weyl_kernel(Battery&) {
  CriterionResult r{9, "weyl-kernel-rank"};
  auto ra = roots::weyl_kernel_check(roots::RootSystem::a2());
  auto rb = roots::weyl_kernel_check(roots::RootSystem::b2());
  auto rg = roots::weyl_kernel_check(roots::RootSystem::g2());
  auto rneg = roots::weyl_kernel_check(roots::RootSystem::single_pair());
  r.pass = ra.pass && rb.pass && rg.pass && !rneg.pass &&
           rneg.span_rank == 1;
  r.detail = "A2/B2/G2 ranks " + std::to_string(ra.span_rank) + "/" +
             std::to_string(rb.span_rank) + "/" +
             std::to_string(rg.span_rank) + ", negative control rank " +
             std::to_string(rneg.span_rank);
  return r;
}

CriterionResult haar_convergence(Battery& b) {
  CriterionResult r{10, "haar-convergence"};
  auto nu9 = equilibrium::cesaro_measure(b.cat, zero_qc(b.cat), b.cat_family,
                                         9);
  auto hc = equilibrium::haar_comparison(nu9, 3);
  Vec t = 0.3 * b.t3.center_direction();
  auto r4 = equilibrium::commuting_invariance_check(
      b.t3, equilibrium::cesaro_measure(b.t3, zero_qc(b.t3), b.t3_family, 4),
      t);
  auto r8 = equilibrium::commuting_invariance_check(
      b.t3, equilibrium::cesaro_measure(b.t3, zero_qc(b.t3), b.t3_family, 8),
      t);
  r.pass = hc.pass && r8.pass && r8.max_diff <= r4.max_diff + 0.02;
  r.detail = "max |coef|=" + fmt(hc.max_coefficient) +
             " (tol 0.05), invariance defect " + fmt(r4.max_diff) + " -> " +
             fmt(r8.max_diff);
  return r;
}

CriterionResult cohomology_coherence(Battery& b) {
  CriterionResult r{11, "cohomology-coherence"};
  qc::TrigPolynomial u({{(VecZ(2) << 1, 0).finished(), 0.05, 0.02}});
  auto phi = [](const TorusPoint& x) {
    return 0.1 * std::cos(2 * M_PI * (x.x[0] + x.x[1]));
  };
  auto sys = b.cat;
  auto phi2 = [phi, u, sys](const TorusPoint& x) {
    return phi(x) + u(sys.apply(x, 1)) - u(x);
  };
  auto qa = qc::birkhoff(b.cat, phi);
  auto qb = qc::birkhoff(b.cat, phi2);

  auto verdict = qc::is_cohomologous(qa, qb, b.cat, 25, 40, 20240817);
  auto pa = pressure::pressure_estimate(b.cat, qa, 0.1,
                                        {4, 5, 6, 7, 8, 9, 10});
  auto pb = pressure::pressure_estimate(b.cat, qb, 0.1,
                                        {4, 5, 6, 7, 8, 9, 10});
  auto ga = equilibrium::gibbs_report(b.cat, qa, b.cat_family, 0.08, 0.1,
                                      {3, 4, 5, 6, 7, 8}, 10);
  auto gb = equilibrium::gibbs_report(b.cat, qb, b.cat_family, 0.08, 0.1,
                                      {3, 4, 5, 6, 7, 8}, 10);
  double worst_lr = 0;
  bool paired = ga.samples.size() == gb.samples.size();
  if (paired)
    for (std::size_t i = 0; i < ga.samples.size(); ++i)
      worst_lr = std::max(worst_lr,
                          std::abs(std::log(std::get<2>(ga.samples[i])) -
                                   std::log(std::get<2>(gb.samples[i]))));
  r.pass = verdict.verdict == qc::CohomologyVerdict::TrivialDifference &&
           std::abs(pa.P - pb.P) <= 0.05 && paired && worst_lr <= 1.0;
  r.detail = "diff slope=" + fmt(verdict.slope) + " dP=" +
             fmt(std::abs(pa.P - pb.P)) + " gibbs |dlog r|<=" + fmt(worst_lr);
  return r;
}

}  // namespace

std::vector<CriterionResult> run_all(std::ostream& log) {
  Battery b;
  std::vector<CriterionResult> out;
  auto run = [&](CriterionResult (*fn)(Battery&)) {
    auto res = fn(b);
    log << "criterion " << res.id << " [" << (res.pass ? "PASS" : "FAIL")
        << "] " << res.name << ": " << res.detail << "\n";
    log.flush();
    out.push_back(std::move(res));
  };
  run(entropy_partition_sums);
  run(constant_shift);
  run(growth_laws);
  run(gibbs_bounds);
  run(quasiperiodic_counting);
  run(specification_shadowing);
  run(bridge_bound);
  run(homogenization);
  run(weyl_kernel);
  run(haar_convergence);
  run(cohomology_coherence);
  return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return !results.empty();
}

}  // namespace centeq::acceptance
