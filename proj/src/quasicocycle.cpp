#include "centeq/quasicocycle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

namespace centeq::qc {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TrigPolynomial::TrigPolynomial(std::vector<TrigTerm> terms)
    : terms_(std::move(terms)) {}

TrigPolynomial TrigPolynomial::constant(int dim, double value) {
  TrigTerm t;
  t.freq = VecZ::Zero(dim);
  t.c_cos = value;
  return TrigPolynomial({t});
}

TrigPolynomial TrigPolynomial::from_file(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open potential file: " + path);
  std::vector<TrigTerm> terms;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    TrigTerm t;
    t.freq = VecZ::Zero(dim);
    for (int i = 0; i < dim; ++i)
      if (!(ss >> t.freq[i]))
        throw std::runtime_error("bad potential line: " + line);
    if (!(ss >> t.c_cos >> t.c_sin))
      throw std::runtime_error("bad potential line: " + line);
    terms.push_back(t);
  }
  return TrigPolynomial(std::move(terms));
}

double TrigPolynomial::operator()(const TorusPoint& p) const {
  double v = 0.0;
  for (const auto& t : terms_) {
    double phase = 0.0;
    for (int i = 0; i < t.freq.size(); ++i) phase += double(t.freq[i]) * p.x[i];
    phase *= kTwoPi;
    v += t.c_cos * std::cos(phase) + t.c_sin * std::sin(phase);
  }
  return v;
}

double TrigPolynomial::lipschitz() const {
  double lip = 0.0;
  for (const auto& t : terms_) {
    double knorm = 0.0;
    for (int i = 0; i < t.freq.size(); ++i)
      knorm += double(t.freq[i]) * double(t.freq[i]);
    knorm = std::sqrt(knorm);
    lip += kTwoPi * knorm * std::hypot(t.c_cos, t.c_sin);
  }
  return lip;
}

double TrigPolynomial::sup_bound() const {
  double b = 0.0;
  for (const auto& t : terms_) b += std::hypot(t.c_cos, t.c_sin);
  return b;
}

QuasiCocycle birkhoff(const LinearCenterIsometry& sys,
                      std::function<double(const TorusPoint&)> potential,
                      std::string name) {
  QuasiCocycle qc;
  qc.provenance = std::move(name);
  qc.eval = [sys, potential = std::move(potential)](const TorusPoint& p,
                                                    int n) {
    double s = 0.0;
    TorusPoint cur = p;
    for (int k = 0; k < n; ++k) {
      s += potential(cur);
      cur = sys.apply(cur, 1);
    }
    return s;
  };
  return qc;
}

QuasiCocycle birkhoff(const LinearCenterIsometry& sys, TrigPolynomial phi) {
  return birkhoff(
      sys, [phi = std::move(phi)](const TorusPoint& p) { return phi(p); },
      "birkhoff-trig");
}

QuasiCocycle from_table(const std::string& csv_path, int dim) {
  struct Row {
    Vec x;
    double value;
  };
  auto table = std::make_shared<std::map<int, std::vector<Row>>>();
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open table: " + csv_path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    Row r;
    r.x = Vec(dim);
    std::string cell;
    for (int i = 0; i < dim; ++i) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("bad row: " + line);
      r.x[i] = std::stod(cell);
    }
    if (!std::getline(ss, cell, ',')) throw std::runtime_error("bad row: " + line);
    int n = std::stoi(cell);
    if (!std::getline(ss, cell, ',')) throw std::runtime_error("bad row: " + line);
    r.value = std::stod(cell);
    (*table)[n].push_back(r);
  }
  QuasiCocycle qc;
  qc.provenance = "table:" + csv_path;
  qc.eval = [table](const TorusPoint& p, int n) {
    if (n == 0) return 0.0;
    auto it = table->find(n);
    if (it == table->end() || it->second.empty())
      throw std::runtime_error("table has no rows for requested n");
    double best = std::numeric_limits<double>::infinity();
    double val = 0.0;
    for (const auto& r : it->second) {
      double d = toral_dist(TorusPoint{r.x}, p);
      if (d < best) {
        best = d;
        val = r.value;
      }
    }
    return val;
  };
  return qc;
}

double defect_estimate(const QuasiCocycle& qc, const LinearCenterIsometry& sys,
                       int n_max, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_n(1, std::max(1, n_max - 1));
  double worst = 0.0;
  for (int t = 0; t < samples; ++t) {
    TorusPoint x = sys.random_point(rng);
    int n = pick_n(rng);
    std::uniform_int_distribution<int> pick_m(1, std::max(1, n_max - n));
    int m = pick_m(rng);
    double d = std::abs(qc(x, n + m) - qc(x, n) - qc(sys.apply(x, n), m));
    worst = std::max(worst, d);
  }
  return worst;
}

double bowen_variation(const QuasiCocycle& qc, const LinearCenterIsometry& sys,
                       int n, double eps, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto& sp = sys.splitting();
  int d = sys.dim();
  double scale = eps / (2.0 * std::sqrt(double(d)));
  double worst = 0.0;
  double lam = sys.lambda();  // contraction rate in (0,1)
  for (int t = 0; t < samples; ++t) {
    TorusPoint x = sys.random_point(rng);
    Vec offset = Vec::Zero(d);
    int col = 0;
    for (int j = 0; j < sp.n_stable; ++j, ++col)
      offset += scale * u(rng) * sp.basis.col(col);
    for (int j = 0; j < sp.n_center; ++j, ++col)
      offset += scale * u(rng) * sp.basis.col(col);
    // unstable offsets shrink by lambda^{n-1} so the final iterate fits
    for (int j = 0; j < sp.n_unstable; ++j, ++col)
      offset += scale * std::pow(lam, n - 1) * u(rng) * sp.basis.col(col);
    TorusPoint y(x.x + offset);
    if (!sys.bowen_contains(x, n, eps, y)) continue;
    worst = std::max(worst, std::abs(qc(x, n) - qc(y, n)));
  }
  return worst;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line needs >= 2 matched points");
  double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-14) throw std::invalid_argument("degenerate fit");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (f.slope * x[i] + f.intercept);
    ss += r * r;
  }
  f.rms_residual = std::sqrt(ss / n);
  return f;
}

CohomologyReport is_cohomologous(const QuasiCocycle& a, const QuasiCocycle& b,
                                 const LinearCenterIsometry& sys, int n_max,
                                 int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TorusPoint> pts;
  pts.reserve(samples);
  for (int t = 0; t < samples; ++t) pts.push_back(sys.random_point(rng));

  std::vector<double> ns, sups;
  double max_diff = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    double sup = 0.0;
    for (const auto& p : pts) sup = std::max(sup, std::abs(a(p, n) - b(p, n)));
    ns.push_back(double(n));
    sups.push_back(sup);
    max_diff = std::max(max_diff, sup);
  }
  LineFit fit = fit_line(ns, sups);
  CohomologyReport rep;
  rep.slope = fit.slope;
  rep.max_diff = max_diff;
  rep.residual = fit.rms_residual;
  // pinned thresholds: slope band for triviality, residual for a clean fit
  const double slope_tol = 0.02;
  const double residual_tol = 0.5 * (1.0 + max_diff);
  if (fit.rms_residual > residual_tol)
    rep.verdict = CohomologyVerdict::Inconclusive;
  else if (std::abs(fit.slope) <= slope_tol)
    rep.verdict = CohomologyVerdict::TrivialDifference;
  else
    rep.verdict = CohomologyVerdict::GrowingDifference;
  return rep;
}

}  // namespace centeq::qc
