#include "centeq/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "centeq/config.hpp"

namespace centeq::equilibrium {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// visit all integer vectors with |k_i| <= cutoff, excluding zero
void for_each_frequency(int dim, int cutoff,
                        const std::function<void(const VecZ&)>& fn) {
  VecZ k = VecZ::Constant(dim, -cutoff);
  while (true) {
    if (k.cwiseAbs().maxCoeff() != 0) fn(k);
    int i = 0;
    for (; i < dim; ++i) {
      if (++k[i] <= cutoff) break;
      k[i] = -cutoff;
    }
    if (i == dim) return;
  }
}

double segment_mass_in_ball(const SegmentAtom& atom,
                            const LinearCenterIsometry& sys,
                            const TorusPoint& center, int n, double eps,
                            int res) {
  int inside = 0;
  for (int i = 0; i < res; ++i) {
    double s = atom.radius * (2.0 * (i + 0.5) / res - 1.0);
    TorusPoint p(atom.base.x + s * atom.dir);
    if (sys.bowen_contains(center, n, eps, p)) ++inside;
  }
  return atom.weight * inside / double(res);
}

}  // namespace

double PlaqueMeasure::total_weight() const {
  double w = 0;
  for (const auto& a : atoms) w += a.weight;
  return w;
}

double PlaqueMeasure::integrate(
    const std::function<double(const TorusPoint&)>& f) const {
  double acc = 0;
  for (const auto& a : atoms) {
    if (a.radius <= 0) {
      acc += a.weight * f(a.base);
      continue;
    }
    double seg = 0;
    for (int i = 0; i < quadrature; ++i) {
      double s = a.radius * (2.0 * (i + 0.5) / quadrature - 1.0);
      seg += f(TorusPoint(a.base.x + s * a.dir));
    }
    acc += a.weight * seg / quadrature;
  }
  return acc;
}

std::complex<double> PlaqueMeasure::character(const VecZ& k) const {
  std::complex<double> acc = 0;
  for (const auto& a : atoms) {
    double phase = kTwoPi * k.cast<double>().dot(a.base.x);
    std::complex<double> val(std::cos(phase), std::sin(phase));
    if (a.radius > 0) {
      // (1/2r) int_{-r}^{r} e^{2 pi i (k.dir) s} ds
      double w = kTwoPi * k.cast<double>().dot(a.dir) * a.radius;
      if (std::abs(w) > 1e-12) val *= std::sin(w) / w;
    }
    acc += a.weight * val;
  }
  return acc;
}

PlaqueMeasure empirical_measure(const LinearCenterIsometry& sys,
                                const QuasiCocycle& qc,
                                const netting::QuasiperiodicFamily& family,
                                int n) {
  auto it = family.levels.find(n);
  if (it == family.levels.end())
    throw std::invalid_argument("family has no level n=" + std::to_string(n));
  const auto& pts = it->second;
  if (pts.empty()) throw std::invalid_argument("empty family level");

  PlaqueMeasure mu;
  mu.delta = family.delta;
  double radius = sys.splitting().n_center > 0
                      ? default_config().plaque_mult * family.delta
                      : 0.0;
  Vec dir = sys.splitting().n_center > 0 ? sys.center_direction()
                                         : Vec::Zero(sys.dim());

  std::vector<double> lw;
  lw.reserve(pts.size());
  for (const auto& x : pts) lw.push_back(qc(x, n));
  double mx = *std::max_element(lw.begin(), lw.end());
  double z = 0;
  for (double v : lw) z += std::exp(v - mx);
  double log_z = mx + std::log(z);

  for (std::size_t i = 0; i < pts.size(); ++i)
    mu.atoms.push_back({pts[i], dir, radius, std::exp(lw[i] - log_z)});
  return mu;
}

PlaqueMeasure cesaro_measure(const LinearCenterIsometry& sys,
                             const QuasiCocycle& qc,
                             const netting::QuasiperiodicFamily& family,
                             int n) {
  auto mu = empirical_measure(sys, qc, family, n);
  PlaqueMeasure nu;
  nu.delta = mu.delta;
  nu.quadrature = mu.quadrature;
  nu.atoms.reserve(mu.atoms.size() * n);
  for (const auto& a : mu.atoms) {
    TorusPoint base = a.base;
    for (int j = 0; j < n; ++j) {
      // T fixes the center direction, so the pushforward of a center
      // segment is the center segment at the image base
      nu.atoms.push_back({base, a.dir, a.radius, a.weight / n});
      base = sys.apply(base, 1);
    }
  }
  return nu;
}

BallMass ball_mass_detail(const PlaqueMeasure& mu,
                          const LinearCenterIsometry& sys,
                          const TorusPoint& center, int n, double eps) {
  BallMass out;
  double point_part = 0;
  std::vector<const SegmentAtom*> segs;
  for (const auto& a : mu.atoms) {
    if (a.radius <= 0) {
      if (sys.bowen_contains(center, n, eps, a.base)) point_part += a.weight;
    } else {
      segs.push_back(&a);
    }
  }
  out.mass = point_part;
  if (segs.empty()) return out;

  int res = std::max(1, mu.quadrature);
  double prev = -1, cur = 0;
  for (;; res *= 2) {
    cur = 0;
    for (const auto* a : segs)
      cur += segment_mass_in_ball(*a, sys, center, n, eps, res);
    if (prev >= 0 && std::abs(cur - prev) <= 0.01 * std::max(cur, 1e-12)) break;
    if (res >= 65536) break;
    prev = cur;
  }
  out.mass = point_part + cur;
  for (const auto* a : segs) {
    out.quant_error += a->weight / res;
    if (2 * a->radius / res > eps) out.coarse = true;
  }
  return out;
}

double ball_mass(const PlaqueMeasure& mu, const LinearCenterIsometry& sys,
                 const TorusPoint& center, int n, double eps) {
  return ball_mass_detail(mu, sys, center, n, eps).mass;
}

GibbsReport gibbs_report(const LinearCenterIsometry& sys, const QuasiCocycle& qc,
                         const netting::QuasiperiodicFamily& family, double eps,
                         double delta, const std::vector<int>& n_range,
                         int sample_points) {
  if (!(eps > 0 && eps < delta))
    throw std::invalid_argument("need 0 < eps < delta");
  if (family.levels.empty()) throw std::invalid_argument("empty family");

  GibbsReport rep;
  rep.delta_warning = 13.0 * delta > default_config().c_exp;

  auto p = pressure::pressure_estimate(
      sys, qc, eps, pressure::default_n_range(sys));
  rep.p_est = p.P;
  rep.p_residual = p.residual;

  int big_n = family.levels.rbegin()->first;
  auto nu = cesaro_measure(sys, qc, family, big_n);
  const auto& reps = family.levels.at(big_n);

  const auto& sp = sys.splitting();
  std::mt19937_64 rng(default_config().seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, reps.size() - 1);
  double lam = sys.lambda();

  std::vector<double> xs, ys;
  double log_lo = 1e18, log_hi = -1e18;
  for (int n : n_range) {
    for (int s = 0; s < sample_points; ++s) {
      // perturb a support point inside its own d_n ball of radius eps/4 so
      // the lower bound is probed at points with nearby mass
      TorusPoint base = reps[pick(rng)];
      Vec off = Vec::Zero(sys.dim());
      for (int j = 0; j < sys.dim(); ++j) {
        double scale = eps / (4.0 * std::sqrt(double(sys.dim())));
        if (j >= sp.unstable_begin()) scale *= std::pow(lam, n - 1);
        off += unif(rng) * scale * sp.basis.col(j);
      }
      TorusPoint x(base.x + off);
      double mass = ball_mass(nu, sys, x, n, eps);
      if (mass <= 0) {
        rep.pass = false;
        rep.diagnostic = "zero Bowen-ball mass at a sampled support point";
        rep.samples.emplace_back(x.x, n, 0.0);
        return rep;
      }
      double lr = std::log(mass) - (qc(x, n) - n * rep.p_est);
      rep.samples.emplace_back(x.x, n, std::exp(lr));
      xs.push_back(double(n));
      ys.push_back(lr);
      log_lo = std::min(log_lo, lr);
      log_hi = std::max(log_hi, lr);
    }
  }
  rep.ratio_min = std::exp(log_lo);
  rep.ratio_max = std::exp(log_hi);
  rep.trend = qc::fit_line(xs, ys).slope;
  rep.pass = rep.ratio_max / rep.ratio_min < 100.0 && std::abs(rep.trend) <= 0.15;
  if (!rep.pass)
    rep.diagnostic = "ratio band eccentricity " +
                     std::to_string(rep.ratio_max / rep.ratio_min) +
                     ", trend " + std::to_string(rep.trend) +
                     " (pressure fit residual " +
                     std::to_string(rep.p_residual) + ")";
  return rep;
}

InvarianceReport commuting_invariance_check(const LinearCenterIsometry& sys,
                                            const PlaqueMeasure& mu,
                                            const Vec& translation,
                                            int frequency_cutoff) {
  InvarianceReport rep;
  if (sys.splitting().n_center == 0) {
    rep.pass = true;
    rep.vacuous = true;
    return rep;
  }
  Vec vc = sys.center_direction();
  Vec resid = translation - translation.dot(vc) * vc;
  if (resid.norm() > 1e-9)
    throw std::invalid_argument("translation is not a center vector");

  // the translate of the measure has characters e^{2 pi i k.t} chi(k)
  for_each_frequency(sys.dim(), frequency_cutoff, [&](const VecZ& k) {
    double phase = kTwoPi * k.cast<double>().dot(translation);
    std::complex<double> rot(std::cos(phase), std::sin(phase));
    auto chi = mu.character(k);
    rep.max_diff = std::max(rep.max_diff, std::abs(rot * chi - chi));
  });
  rep.pass = rep.max_diff <= 0.1;
  return rep;
}

HaarReport haar_comparison(const PlaqueMeasure& mu, int frequency_cutoff,
                           double threshold) {
  HaarReport rep;
  if (mu.atoms.empty()) throw std::invalid_argument("empty measure");
  int dim = int(mu.atoms.front().base.x.size());
  for_each_frequency(dim, frequency_cutoff, [&](const VecZ& k) {
    double mag = std::abs(mu.character(k));
    rep.coefficients.emplace_back(k, mag);
    if (mag > rep.max_coefficient) {
      rep.max_coefficient = mag;
      rep.worst_k = k;
    }
  });
  rep.pass = rep.max_coefficient < threshold;
  return rep;
}

}  // namespace centeq::equilibrium
