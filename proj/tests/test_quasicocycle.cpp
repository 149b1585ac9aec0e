#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "centeq/quasicocycle.hpp"

using namespace centeq;
using namespace centeq::qc;
using dynsys::LinearCenterIsometry;

namespace {
TrigPolynomial cos_x1(int dim) {
  TrigTerm t;
  t.freq = VecZ::Zero(dim);
  t.freq[0] = 1;
  t.c_cos = 1.0;
  return TrigPolynomial({t});
}
}  // namespace

TEST_CASE("birkhoff of a constant is nc") {
  auto sys = LinearCenterIsometry::cat_map();
  auto qc = birkhoff(sys, TrigPolynomial::constant(2, 0.7));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    auto x = sys.random_point(rng);
    for (int n : {0, 1, 5, 12})
      CHECK(qc(x, n) == doctest::Approx(0.7 * n).epsilon(1e-12));
  }
}

TEST_CASE("birkhoff at a fixed point sums the potential value") {
  auto sys = LinearCenterIsometry::cat_map();
  auto qc = birkhoff(sys, cos_x1(2));
  auto z = TorusPoint::of({0.0, 0.0});
  CHECK(qc(z, 3) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("birkhoff cocycles have zero defect") {
  auto sys = LinearCenterIsometry::t3_map();
  auto qc = birkhoff(sys, cos_x1(3));
  double d = defect_estimate(qc, sys, 24, 10000, 99);
  CHECK(d < 1e-9);
}

TEST_CASE("bounded perturbation of a linear cocycle has small defect") {
  auto sys = LinearCenterIsometry::cat_map();
  // S_n(x) = 0.3 n + b(x), |b| <= 0.1 -> defect <= 3 * 0.1
  QuasiCocycle qc;
  qc.eval = [](const TorusPoint& p, int n) {
    if (n == 0) return 0.0;
    return 0.3 * n + 0.1 * std::sin(2 * M_PI * p.x[0]);
  };
  double d = defect_estimate(qc, sys, 24, 10000, 7);
  CHECK(d <= 0.3 + 1e-12);
  CHECK(d > 0.0);
}

TEST_CASE("bowen variation: constants and Lipschitz bound") {
  auto sys = LinearCenterIsometry::cat_map();
  auto flat = birkhoff(sys, TrigPolynomial::constant(2, 2.0));
  CHECK(bowen_variation(flat, sys, 8, 0.05, 300, 1) == doctest::Approx(0.0));

  auto phi = cos_x1(2);
  auto qc = birkhoff(sys, phi);
  double eps = 0.05;
  double lam_s = sys.lambda();
  // orbit distances split into contracting passes fore and aft, so the sum
  // of d(T^k x, T^k y) over k < n is at most 2 eps / (1 - lam_s)
  double bound = phi.lipschitz() * 2.0 * eps / (1.0 - lam_s);
  for (int n : {5, 10, 20})
    CHECK(bowen_variation(qc, sys, n, eps, 500, 2) <= bound * 1.05);
}

TEST_CASE("bowen variation is n-independent for smooth potentials") {
  auto sys = LinearCenterIsometry::t3_map();
  auto qc = birkhoff(sys, cos_x1(3));
  double v5 = bowen_variation(qc, sys, 5, 0.05, 800, 3);
  double v10 = bowen_variation(qc, sys, 10, 0.05, 800, 3);
  double v20 = bowen_variation(qc, sys, 20, 0.05, 800, 3);
  CHECK(v5 > 0.0);
  CHECK(v10 < 2.0 * v5);
  CHECK(v20 < 2.0 * v5);
  CHECK(v5 < 2.0 * std::max(v10, v20));
}

TEST_CASE("cohomology verdicts") {
  auto sys = LinearCenterIsometry::cat_map();
  auto phi = cos_x1(2);
  auto qc1 = birkhoff(sys, phi);

  SUBCASE("bounded perturbation is trivial") {
    QuasiCocycle qc2;
    qc2.eval = [qc1](const TorusPoint& p, int n) {
      if (n == 0) return 0.0;
      return qc1(p, n) + 0.2 * std::cos(2 * M_PI * p.x[1]);
    };
    auto rep = is_cohomologous(qc1, qc2, sys, 20, 200, 11);
    CHECK(rep.verdict == CohomologyVerdict::TrivialDifference);
    CHECK(rep.max_diff <= 0.2 + 1e-12);
  }

  SUBCASE("constant shift grows linearly with the shift as slope") {
    auto qc2 = birkhoff(sys, [&phi](const TorusPoint& p) { return phi(p) + 0.1; },
                        "shifted");
    auto rep = is_cohomologous(qc1, qc2, sys, 20, 200, 12);
    CHECK(rep.verdict == CohomologyVerdict::GrowingDifference);
    CHECK(rep.slope == doctest::Approx(0.1).epsilon(1e-6));
  }

  SUBCASE("coboundary difference telescopes to a trivial one") {
    auto psi = [](const TorusPoint& p) { return 0.3 * std::sin(2 * M_PI * p.x[0]); };
    auto qc2 = birkhoff(
        sys,
        [&](const TorusPoint& p) {
          TorusPoint tp = sys.apply(p, 1);
          return std::cos(2 * M_PI * p.x[0]) + psi(tp) - psi(p);
        },
        "coboundary-shift");
    auto rep = is_cohomologous(qc1, qc2, sys, 20, 200, 13);
    CHECK(rep.verdict == CohomologyVerdict::TrivialDifference);
    // telescoped difference is psi(T^n x) - psi(x), bounded by 2||psi||
    CHECK(rep.max_diff <= 0.6 + 1e-9);
  }
}

TEST_CASE("linear growth bound from S_1 and defect") {
  auto sys = LinearCenterIsometry::t3_map();
  auto phi = cos_x1(3);
  auto qc = birkhoff(sys, phi);
  double s1 = 0.0;
  std::mt19937_64 rng(21);
  std::vector<TorusPoint> pts;
  for (int t = 0; t < 300; ++t) pts.push_back(sys.random_point(rng));
  for (auto& p : pts) s1 = std::max(s1, std::abs(qc(p, 1)));
  double cprime = s1 + defect_estimate(qc, sys, 12, 2000, 22);
  for (auto& p : pts)
    for (int n : {1, 4, 9, 16}) CHECK(std::abs(qc(p, n)) <= n * cprime + 1e-9);
}

TEST_CASE("fit_line recovers an exact line") {
  auto f = fit_line({1, 2, 3, 4}, {0.5, 1.0, 1.5, 2.0});
  CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.rms_residual < 1e-12);
}

TEST_CASE("potential file round trip") {
  std::string path = "/tmp/centeq_pot_test.txt";
  {
    std::ofstream out(path);
    out << "# freq cos sin\n1 0 0.5 0.0\n0 2 0.0 0.25\n";
  }
  auto phi = TrigPolynomial::from_file(path, 2);
  REQUIRE(phi.terms().size() == 2);
  auto p = TorusPoint::of({0.25, 0.125});
  double expect = 0.5 * std::cos(2 * M_PI * 0.25) + 0.25 * std::sin(2 * M_PI * 0.25);
  CHECK(phi(p) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(phi.sup_bound() == doctest::Approx(0.75));
}

TEST_CASE("table-backed cocycle nearest-neighbor lookup") {
  std::string path = "/tmp/centeq_table_test.csv";
  {
    std::ofstream out(path);
    out << "0.1,0.1,2,1.5\n0.8,0.8,2,-2.0\n0.5,0.5,3,7.0\n";
  }
  auto sys = LinearCenterIsometry::cat_map();
  auto qc = from_table(path, 2);
  CHECK(qc(TorusPoint::of({0.12, 0.09}), 2) == doctest::Approx(1.5));
  CHECK(qc(TorusPoint::of({0.79, 0.83}), 2) == doctest::Approx(-2.0));
  CHECK(qc(TorusPoint::of({0.4, 0.6}), 3) == doctest::Approx(7.0));
  CHECK(qc(TorusPoint::of({0.4, 0.6}), 0) == 0.0);
  CHECK_THROWS(qc(TorusPoint::of({0.4, 0.6}), 5));
}
