#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "centeq/pressure.hpp"

using namespace centeq;
using namespace centeq::pressure;
using dynsys::LinearCenterIsometry;

namespace {

const double kEntropy = std::log((3.0 + std::sqrt(5.0)) / 2.0);  // ~0.96242

QuasiCocycle zero_qc(const LinearCenterIsometry& sys) {
  return qc::birkhoff(sys, [](const TorusPoint&) { return 0.0; }, "zero");
}

// the cat-map zero-potential series at eps=0.05 is reused by several cases;
// compute it once
const PartitionSumSeries& cat_series() {
  static PartitionSumSeries s = [] {
    auto sys = LinearCenterIsometry::cat_map();
    return net_series(sys, zero_qc(sys), 0.05, default_n_range(sys));
  }();
  return s;
}

}  // namespace

TEST_CASE("partition sum of the zero potential counts the net") {
  auto sys = LinearCenterIsometry::cat_map();
  auto net = netting::greedy_separated(sys, 1, 0.6, 40);
  REQUIRE(net.size() >= 2);
  CHECK(partition_sum(sys, zero_qc(sys), net) ==
        doctest::Approx(double(net.size())));
}

TEST_CASE("constant potential scales the partition sum by e^{nc}") {
  auto sys = LinearCenterIsometry::cat_map();
  auto net = netting::structured_separated(sys, 3, 0.2);
  double c = 0.37;
  auto qc_c = qc::birkhoff(sys, qc::TrigPolynomial::constant(2, c));
  CHECK(log_partition_sum(sys, qc_c, net) ==
        doctest::Approx(std::log(double(net.size())) + 3 * c).epsilon(1e-12));
}

TEST_CASE("series entry validation") {
  PartitionSumSeries s;
  s.entries = {{4, 0.1, 1.0}, {5, 0.1, 2.0}, {5, 0.1, 2.1}, {6, 0.1, 3.0}};
  CHECK_THROWS(pressure_from_series(s));  // duplicate n
  s.entries = {{4, 0.1, 1.0}, {5, 0.2, 2.0}, {6, 0.1, 3.0}, {7, 0.1, 4.0}};
  CHECK_THROWS(pressure_from_series(s));  // mismatched eps
  s.entries = {{4, 0.1, 1.0}, {5, 0.1, 2.0}, {6, 0.1, 3.0}};
  CHECK_THROWS(pressure_from_series(s));  // too few entries
}

TEST_CASE("pressure of the zero potential is the expansion entropy (d=2)") {
  auto p = pressure_from_series(cat_series());
  CHECK(std::abs(p.P - kEntropy) <= 0.05 * kEntropy);
  CHECK(p.residual <= 0.1);
  CHECK(p.stable);
}

TEST_CASE("pressure of the zero potential is the expansion entropy (d=3)") {
  auto sys = LinearCenterIsometry::t3_map();
  auto p = pressure_estimate(sys, zero_qc(sys), 0.13, default_n_range(sys));
  CHECK(std::abs(p.P - kEntropy) <= 0.05 * kEntropy);
  CHECK(p.stable);
}

TEST_CASE("constant shifts move the pressure by exactly the constant") {
  // log Z_n picks up n*c termwise, so the fitted slope shifts by exactly c
  double c = 0.25;
  auto shifted = cat_series();
  for (auto& e : shifted.entries) e.log_z += e.n * c;
  auto p0 = pressure_from_series(cat_series());
  auto p1 = pressure_from_series(shifted);
  CHECK(p1.P - p0.P == doctest::Approx(c).epsilon(1e-10));
}

TEST_CASE("coboundary perturbations leave the pressure unchanged") {
  auto sys = LinearCenterIsometry::cat_map();
  qc::TrigPolynomial u({{(VecZ(2) << 1, 0).finished(), 0.05, 0.02}});
  auto phi = [&sys, u](const TorusPoint& x) {
    return 0.1 * std::cos(2 * M_PI * (x.x[0] + x.x[1])) + u(sys.apply(x, 1)) -
           u(x);
  };
  auto psi = [](const TorusPoint& x) {
    return 0.1 * std::cos(2 * M_PI * (x.x[0] + x.x[1]));
  };
  auto range = default_n_range(sys);
  auto p1 = pressure_estimate(sys, qc::birkhoff(sys, phi), 0.1, range);
  auto p2 = pressure_estimate(sys, qc::birkhoff(sys, psi), 0.1, range);
  CHECK(std::abs(p1.P - p2.P) <= 0.05);
}

TEST_CASE("approximate multiplicativity of partition sums") {
  auto rep = multiplicativity_check(cat_series());
  CHECK_FALSE(rep.ratios.empty());
  CHECK(rep.pass);
  CHECK(rep.worst_violation == 0.0);
}

TEST_CASE("multiplicativity with no matching pairs passes vacuously") {
  PartitionSumSeries s;
  s.entries = {{4, 0.1, 4.0}, {5, 0.1, 5.0}, {6, 0.1, 6.0}, {7, 0.1, 7.0}};
  auto rep = multiplicativity_check(s);
  CHECK(rep.ratios.empty());
  CHECK(rep.pass);
}

TEST_CASE("multiplicativity rejects super-multiplicative growth") {
  PartitionSumSeries s;
  // log Z_n = n^2: Z_{n+m} / (Z_n Z_m) = e^{2nm}, blows up
  for (int n : {2, 3, 4, 5, 6, 8, 10, 12})
    s.entries.push_back({n, 0.1, double(n) * n});
  auto rep = multiplicativity_check(s);
  CHECK_FALSE(rep.pass);
  CHECK(rep.worst_violation > 1.0);
}

TEST_CASE("estimates agree across scales") {
  auto sys = LinearCenterIsometry::cat_map();
  auto rep =
      scale_robustness_check(sys, zero_qc(sys), 0.05, 0.1, default_n_range(sys));
  CHECK(rep.pass);
  CHECK(std::abs(rep.p_fine - rep.p_coarse) <= 0.05);
  CHECK(std::abs(rep.ratio_trend) <= 0.1);
}

TEST_CASE("growth of quasiperiodic families matches the net pressure") {
  auto sys = LinearCenterIsometry::cat_map();
  std::vector<int> ns = {4, 5, 6, 7, 8, 9, 10};

  SUBCASE("raw solution counts grow at exactly the expansion rate") {
    // the full solution set has |lambda^n - 1| |lambda^{-n} - 1| points
    netting::QuasiperiodicFamily raw;
    raw.delta = 0.1;
    for (int n : ns) {
      std::vector<TorusPoint> pts;
      for (const auto& qp : netting::quasiperiodic_points(sys, n, 0.1))
        pts.push_back(qp.x);
      raw.levels[n] = pts;
    }
    auto p = pressure_from_series(family_series(sys, zero_qc(sys), raw));
    CHECK(std::abs(p.P - kEntropy) <= 0.02);
  }

  SUBCASE("separated family keeps one point per orbit") {
    // |E_n| ~ e^{nh} / n, so the fitted slope sits below h by roughly the
    // local slope of log n over the window (~0.15 here)
    auto family = netting::build_quasiperiodic_family(sys, ns, 0.1);
    auto p = pressure_from_series(family_series(sys, zero_qc(sys), family));
    CHECK(p.P <= kEntropy + 0.02);
    CHECK(p.P >= kEntropy - 0.25);
  }
}

TEST_CASE("variational inequality and its attainment") {
  auto sys = LinearCenterIsometry::cat_map();
  auto p0 = pressure_from_series(cat_series());

  SUBCASE("uniform measure attains the zero-potential supremum") {
    auto rep = variational_check(sys, zero_qc(sys), haar_model(sys), p0.P);
    CHECK(rep.pass);
    CHECK(rep.attains);
    CHECK(rep.lhs == doctest::Approx(kEntropy).epsilon(1e-9));
  }

  SUBCASE("an atom at the fixed point stays strictly below") {
    auto rep = variational_check(
        sys, zero_qc(sys), point_mass_model(TorusPoint::of({0.0, 0.0}), 1),
        p0.P);
    CHECK(rep.pass);
    CHECK_FALSE(rep.attains);
    CHECK(rep.lhs == doctest::Approx(0.0));
  }

  SUBCASE("mean-zero potential keeps the uniform measure admissible") {
    qc::TrigPolynomial phi({{(VecZ(2) << 1, 1).finished(), 0.2, 0.0}});
    auto qphi = qc::birkhoff(sys, phi);
    auto p = pressure_estimate(sys, qphi, 0.1, default_n_range(sys));
    auto rep = variational_check(sys, qphi, haar_model(sys), p.P);
    CHECK(rep.pass);
    CHECK(std::abs(rep.mu_s) <= 0.02);
  }
}
