#include "centeq/latticebridge.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/QR>

namespace centeq::bridge {

namespace {

Mat orthogonal_power(const Mat& g, long long e) {
  Mat base = e >= 0 ? g : Mat(g.transpose());
  long long k = e >= 0 ? e : -e;
  Mat acc = Mat::Identity(g.rows(), g.cols());
  while (k > 0) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

VecZ random_lattice(std::mt19937_64& rng, int d, long long box) {
  std::uniform_int_distribution<long long> u(-box, box);
  VecZ g(d);
  for (int i = 0; i < d; ++i) g[i] = u(rng);
  return g;
}

Vec random_cube(std::mt19937_64& rng, int d, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec x(d);
  for (int i = 0; i < d; ++i) x[i] = u(rng);
  return x;
}

}  // namespace

VecZ integer_part(const Vec& g) {
  VecZ out(g.size());
  for (int i = 0; i < g.size(); ++i) out[i] = (long long)std::floor(g[i]);
  return out;
}

Vec star_action(const Vec& x, const Vec& g) {
  Vec out(x.size());
  for (int i = 0; i < x.size(); ++i) out[i] = frac01(x[i] + g[i]);
  return out;
}

Mat PiQuasimorphism::pi(const VecZ& gamma) const {
  if (generators.empty()) return Mat::Identity(N, N);
  Mat acc = Mat::Identity(N, N);
  for (std::size_t i = 0; i < generators.size(); ++i)
    acc = acc * orthogonal_power(generators[i], gamma[int(i)]);
  return acc;
}

void PiQuasimorphism::validate(double tol) const {
  if (!L) throw std::invalid_argument("quasimorphism has no map");
  if (int(generators.size()) != 0 && int(generators.size()) != d)
    throw std::invalid_argument("need one generator matrix per basis vector");
  for (const auto& g : generators) {
    if (g.rows() != N || g.cols() != N)
      throw std::invalid_argument("generator has wrong shape");
    if ((g.transpose() * g - Mat::Identity(N, N)).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("generator is not orthogonal");
  }
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j)
      if ((generators[i] * generators[j] - generators[j] * generators[i])
              .cwiseAbs()
              .maxCoeff() > tol)
        throw std::invalid_argument("generators do not commute");
  Vec v = L(VecZ::Zero(d));
  if (v.size() != N) throw std::invalid_argument("L has wrong value dimension");
}

Vec PiQuasimorphism::delta(const VecZ& a, const VecZ& b) const {
  return L(a + b) - pi(a) * L(b) - L(a);
}

Vec PiQuasimorphism::c_of(const VecZ& a) const {
  return pi(a) * L(-a) + L(a);
}

double PiQuasimorphism::defect_bound(long long box) const {
  double side = 2.0 * box + 1.0;
  double total = std::pow(side, 2.0 * d);
  double sup = 0.0;
  if (d == 1 && total <= 2e7) {
    for (long long a = -box; a <= box; ++a) {
      VecZ va = VecZ::Constant(1, a);
      Mat pa = pi(va);
      Vec la = L(va);
      for (long long b = -box; b <= box; ++b) {
        VecZ vb = VecZ::Constant(1, b);
        Vec dd = L(va + vb) - pa * L(vb) - la;
        sup = std::max(sup, dd.cwiseAbs().maxCoeff());
      }
    }
    return sup;
  }
  std::mt19937_64 rng(123);
  for (int s = 0; s < 100000; ++s) {
    Vec dd = delta(random_lattice(rng, d, box), random_lattice(rng, d, box));
    sup = std::max(sup, dd.cwiseAbs().maxCoeff());
  }
  return sup;
}

double PiQuasimorphism::c_bound(long long box) const {
  double sup = 0.0;
  if (d == 1) {
    for (long long a = -box; a <= box; ++a)
      sup = std::max(
          sup, c_of(VecZ::Constant(1, a)).cwiseAbs().maxCoeff());
    return sup;
  }
  std::mt19937_64 rng(321);
  for (int s = 0; s < 20000; ++s)
    sup = std::max(
        sup, c_of(random_lattice(rng, d, box)).cwiseAbs().maxCoeff());
  return sup;
}

Mat PiQuasimorphism::sample_closure(std::mt19937_64& rng) const {
  if (closure_sample) return closure_sample(rng);
  return pi(random_lattice(rng, d, 1000));
}

PiQuasimorphism scalar_qm(std::function<double(long long)> f) {
  PiQuasimorphism qm;
  qm.d = 1;
  qm.N = 1;
  qm.L = [f](const VecZ& a) { return Vec::Constant(1, f(a[0])); };
  return qm;
}

PiQuasimorphism scalar_qm_from_expr(const std::string& expr) {
  // sums of terms: c | c*n | c*floor(c2*n) | c*round(c2*n); whitespace free
  struct Term {
    double coef;
    double inner;
    int kind;  // 0 constant, 1 linear, 2 floor, 3 round
  };
  std::vector<Term> terms;
  std::size_t i = 0;
  std::string s;
  for (char ch : expr)
    if (!std::isspace((unsigned char)ch)) s += ch;
  auto parse_num = [&](double& out) {
    std::size_t used = 0;
    out = std::stod(s.substr(i), &used);
    if (used == 0) throw std::invalid_argument("bad expression: " + expr);
    i += used;
  };
  while (i < s.size()) {
    double sign = 1.0;
    if (s[i] == '+') ++i;
    else if (s[i] == '-' && !std::isdigit((unsigned char)s[i + 1]) &&
             s[i + 1] != '.') {
      sign = -1.0;
      ++i;
    }
    Term t{1.0, 1.0, 0};
    if (std::isdigit((unsigned char)s[i]) || s[i] == '-' || s[i] == '.') {
      parse_num(t.coef);
      if (i < s.size() && s[i] == '*') ++i;
      else {
        t.coef *= sign;
        terms.push_back(t);
        continue;
      }
    }
    if (s.compare(i, 1, "n") == 0) {
      t.kind = 1;
      ++i;
    } else if (s.compare(i, 6, "floor(") == 0 ||
               s.compare(i, 6, "round(") == 0) {
      t.kind = s[i] == 'f' ? 2 : 3;
      i += 6;
      parse_num(t.inner);
      if (s.compare(i, 2, "*n") != 0)
        throw std::invalid_argument("bad expression: " + expr);
      i += 2;
      if (i >= s.size() || s[i] != ')')
        throw std::invalid_argument("bad expression: " + expr);
      ++i;
    } else {
      throw std::invalid_argument("bad expression: " + expr);
    }
    t.coef *= sign;
    terms.push_back(t);
  }
  return scalar_qm([terms](long long n) {
    double acc = 0;
    for (const auto& t : terms) {
      double v = 1.0;
      if (t.kind == 1) v = double(n);
      else if (t.kind == 2) v = std::floor(t.inner * n);
      else if (t.kind == 3) v = std::round(t.inner * n);
      acc += t.coef * v;
    }
    return acc;
  });
}

Vec bridge_eval(const PiQuasimorphism& qm, const BridgeState& p,
                const BridgeElement& e) {
  return p.A.transpose() * qm.L(integer_part(p.x + e.g));
}

BridgeState bridge_act(const PiQuasimorphism& qm, const BridgeState& p,
                       const BridgeElement& e) {
  VecZ gamma = integer_part(p.x + e.g);
  return {star_action(p.x, e.g), qm.pi(gamma).transpose() * p.A * e.B};
}

Vec bridge_defect(const PiQuasimorphism& qm, const BridgeState& p,
                  const BridgeElement& e1, const BridgeElement& e2) {
  BridgeElement e12{e1.g + e2.g, e1.B * e2.B};
  return bridge_eval(qm, p, e12) -
         e1.B * bridge_eval(qm, bridge_act(qm, p, e1), e2) -
         bridge_eval(qm, p, e1);
}

BridgeDefectReport bridge_defect_check(const PiQuasimorphism& qm, double box,
                                       long long probe_box, int samples,
                                       std::uint64_t seed) {
  qm.validate();
  double small = qm.defect_bound(std::max<long long>(probe_box / 10, 10));
  double large = qm.defect_bound(probe_box);
  if (large > 2.0 * small + 1.0)
    throw std::runtime_error("defect grows with the box: not a quasimorphism");

  BridgeDefectReport rep;
  rep.k1_bound = large;
  rep.k2_bound = qm.c_bound(probe_box);
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    BridgeState p{random_cube(rng, qm.d, 0.0, 1.0), qm.sample_closure(rng)};
    BridgeElement e1{random_cube(rng, qm.d, -box, box), qm.sample_closure(rng)};
    BridgeElement e2{random_cube(rng, qm.d, -box, box), qm.sample_closure(rng)};
    rep.measured = std::max(
        rep.measured, bridge_defect(qm, p, e1, e2).cwiseAbs().maxCoeff());
  }
  rep.pass = rep.measured <= rep.assembled_k() + 1e-9;
  return rep;
}

double z_cocycle_defect(const PiQuasimorphism& qm, const Vec& a,
                        const Vec& ell, int n_max, int samples,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_n(1, n_max);
  auto s_of = [&](const Vec& x, int n) {
    return ell.dot(qm.L(integer_part(x + n * a)));
  };
  double sup = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x = random_cube(rng, qm.d, 0.0, 1.0);
    int n = pick_n(rng), m = pick_n(rng);
    double d = s_of(x, n + m) - s_of(x, n) -
               s_of(star_action(x, double(n) * a), m);
    sup = std::max(sup, std::abs(d));
  }
  return sup;
}

double z_twist_sup(const PiQuasimorphism& qm, double box, int samples,
                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double sup = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x = random_cube(rng, qm.d, 0.0, 1.0);
    Vec g = random_cube(rng, qm.d, -box, box);
    Mat z = qm.sample_closure(rng);
    Vec l = qm.L(integer_part(x + g));
    sup = std::max(
        sup, ((z.transpose() - Mat::Identity(qm.N, qm.N)) * l).norm());
  }
  return sup;
}

TupleFn coboundary(const TupleFn& f, const PiQuasimorphism& qm, int n) {
  if (n < 1) throw std::invalid_argument("coboundary needs n >= 1");
  return [f, qm, n](const std::vector<VecZ>& xs) {
    if (int(xs.size()) != n)
      throw std::invalid_argument("coboundary arity mismatch");
    std::vector<VecZ> head(xs.begin() + 1, xs.end());
    Vec acc = qm.pi(xs[0]) * f(head);
    double sign = -1.0;
    for (int k = 1; k <= n - 1; ++k) {
      std::vector<VecZ> merged;
      for (int i = 0; i < n; ++i) {
        if (i == k - 1) {
          merged.push_back(xs[k - 1] + xs[k]);
          ++i;
        } else {
          merged.push_back(xs[i]);
        }
      }
      acc += sign * f(merged);
      sign = -sign;
    }
    std::vector<VecZ> tail(xs.begin(), xs.end() - 1);
    acc += sign * f(tail);
    return acc;
  };
}

HomogenizeResult homogenize_at(const std::function<double(long long)>& L,
                               long long gamma, long long n_limit) {
  HomogenizeResult out;
  long long k = std::max<long long>(n_limit, 2);
  double v1 = L(k * gamma) / double(k);
  double v2 = L((k / 2) * gamma) / double(k / 2);
  out.value = v1;
  double dl = 0.0;
  for (long long a = -100; a <= 100; ++a)
    for (long long b = -100; b <= 100; ++b)
      dl = std::max(dl, std::abs(L(a + b) - L(a) - L(b)));
  out.converged = std::abs(v1 - v2) <= 4.0 * dl / double(k) + 1e-12;
  return out;
}

SplitFixedSpace split_fixed_space(const std::vector<Mat>& generators, int n) {
  SplitFixedSpace out;
  if (generators.empty()) {
    out.e_basis = Mat::Identity(n, n);
    out.f_basis = Mat(n, 0);
    return out;
  }
  Mat stacked(int(generators.size()) * n, n);
  for (std::size_t i = 0; i < generators.size(); ++i)
    stacked.middleRows(int(i) * n, n) = generators[i] - Mat::Identity(n, n);
  Eigen::FullPivLU<Mat> lu(stacked);
  lu.setThreshold(1e-9);
  Mat kernel = lu.kernel();
  if (lu.dimensionOfKernel() == 0) kernel = Mat(n, 0);
  // orthonormalize and take the complement from a full QR of the kernel
  Eigen::HouseholderQR<Mat> qr(kernel);
  Mat q = qr.householderQ();
  int e_dim = int(kernel.cols());
  out.e_basis = q.leftCols(e_dim);
  out.f_basis = q.rightCols(n - e_dim);
  if (out.f_basis.cols() > 0) {
    Eigen::FullPivLU<Mat> luf(stacked * out.f_basis);
    luf.setThreshold(1e-9);
    out.f_has_fixed_vector = luf.dimensionOfKernel() > 0;
  }
  return out;
}

HaarAverage haar_average_H(const PiQuasimorphism& qm, const Vec& a,
                           long long n_limit) {
  int per_axis = std::max(2, int(std::round(std::pow(1e4, 1.0 / qm.d))));
  auto estimate = [&](long long n) {
    Vec acc = Vec::Zero(qm.N);
    std::vector<int> idx(qm.d, 0);
    long long count = 0;
    while (true) {
      Vec x(qm.d);
      for (int i = 0; i < qm.d; ++i) x[i] = (idx[i] + 0.5) / per_axis;
      acc += qm.L(integer_part(x + double(n) * a));
      ++count;
      int i = 0;
      for (; i < qm.d; ++i) {
        if (++idx[i] < per_axis) break;
        idx[i] = 0;
      }
      if (i == qm.d) break;
    }
    return Vec((acc / double(count)) / double(n));
  };
  HaarAverage out;
  long long n = std::max<long long>(n_limit, 2);
  out.H = estimate(n);
  Vec half = estimate(n / 2);
  out.converged =
      (out.H - half).cwiseAbs().maxCoeff() <= 50.0 / double(n) + 1e-9;
  return out;
}

}  // namespace centeq::bridge
