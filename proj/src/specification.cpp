#include "centeq/specification.hpp"

#include "centeq/netting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace centeq::spec {

namespace {

double expansion_factor(const LinearCenterIsometry& sys) {
  return std::exp(sys.log_expansion());
}

double cs_len(const dynsys::EigenOffset& off) {
  return std::hypot(off.stable_len, off.center_len);
}

// Integer functional w with w . T(x) = w . x mod 1 (left eigenvector of the
// matrix for eigenvalue 1). When it exists, the unstable leaf is confined to
// the level sets of w, and density must be measured inside a leaf.
std::optional<VecZ> invariant_functional(const LinearCenterIsometry& sys) {
  if (sys.splitting().n_center != 1) return std::nullopt;
  try {
    MatZ Mt = sys.matrix().transpose();
    return netting::primitive_center_vector(Mt);
  } catch (...) {
    return std::nullopt;
  }
}

// n-step return displacement measured with an extended-precision orbit so
// the unstable roundoff amplification stays below the correction size; the
// double-rounded result is accurate to ~lambda_u^n * 1e-19
Vec return_displacement_ld(const LinearCenterIsometry& sys, const Vec& z,
                           int n) {
  const int d = sys.dim();
  const MatZ& M = sys.matrix();
  std::vector<long double> x(d), y(d);
  for (int i = 0; i < d; ++i) x[i] = (long double)z[i];
  for (int s = 0; s < n; ++s) {
    for (int i = 0; i < d; ++i) {
      long double acc = 0;
      for (int j = 0; j < d; ++j) acc += (long double)M(i, j) * x[j];
      y[i] = acc - floorl(acc);
    }
    x = y;
  }
  Vec diff(d);
  for (int i = 0; i < d; ++i) {
    long double r = x[i] - (long double)z[i];
    diff[i] = (double)(r - roundl(r));
  }
  return diff;
}

}  // namespace

void OrbitSpec::validate() const {
  if (segments.empty()) throw std::invalid_argument("empty orbit spec");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].b < segments[i].a)
      throw std::invalid_argument("segment interval reversed");
    if (i > 0) {
      int g = segments[i].a - segments[i - 1].b;
      if (g < std::max(1, gap))
        throw std::invalid_argument("segments closer than the required gap");
    }
  }
}

OrbitSpec OrbitSpec::from_file(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file: " + path);
  OrbitSpec spec;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "gap") {
      if (!(ss >> spec.gap)) throw std::runtime_error("bad gap line: " + line);
    } else if (key == "segment") {
      OrbitSegment seg;
      Vec v(dim);
      if (!(ss >> seg.a >> seg.b))
        throw std::runtime_error("bad segment line: " + line);
      for (int i = 0; i < dim; ++i)
        if (!(ss >> v[i])) throw std::runtime_error("bad segment line: " + line);
      seg.x = TorusPoint(v);
      spec.segments.push_back(seg);
    } else {
      throw std::runtime_error("unknown spec key: " + key);
    }
  }
  spec.validate();
  return spec;
}

int gap_requirement(const LinearCenterIsometry& sys, double eps, int max_d) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  int d = sys.dim();
  double lam_u = expansion_factor(sys);
  Vec vu = sys.unstable_direction();
  TorusPoint base = TorusPoint::of({});
  base.x = Vec::Constant(d, 0.37);  // generic anchor, deterministic

  // When an integer invariant functional exists the unstable leaf stays on
  // its level set; drop one coordinate (determined mod 1 by the level) and
  // measure density there with the Lipschitz factor of the embedding.
  auto w = invariant_functional(sys);
  int drop = -1;
  double lip = 1.0;
  if (w) {
    for (int i = 0; i < d; ++i)
      if (std::llabs((*w)[i]) == 1) drop = i;
    if (drop < 0)
      throw std::runtime_error("invariant functional has no unit coordinate");
    double other = 0.0;
    for (int i = 0; i < d; ++i)
      if (i != drop) other += std::llabs((*w)[i]);
    lip = std::sqrt(1.0 + other * other);
  }
  int dim_eff = w ? d - 1 : d;

  // occupancy grid with (leaf-metric) cell diagonal <= eps so full occupancy
  // implies eps-density
  int res = std::max(2, int(std::ceil(lip * std::sqrt(double(dim_eff)) / eps)));
  long long cells = 1;
  for (int i = 0; i < dim_eff; ++i) cells *= res;
  if (cells > 80'000'000) throw std::invalid_argument("eps too small for probe");

  for (int step = 1; step <= max_d; ++step) {
    double half = eps * std::pow(lam_u, step);
    // sample the image segment finely enough to hit every crossed cell
    double ds_img = 0.5 / (res * lip);
    long long nsamp = 2 * (long long)std::ceil(half / ds_img) + 1;
    if (nsamp > 40'000'000)
      throw std::runtime_error("density probe budget exceeded");
    if (nsamp < cells) continue;  // cannot possibly cover yet

    std::vector<char> occupied(cells, 0);
    TorusPoint anchor = sys.apply(base, step);
    long long filled = 0;
    for (long long i = -nsamp / 2; i <= nsamp / 2 && filled < cells; ++i) {
      Vec p = anchor.x + (double(i) * ds_img) * vu;
      long long idx = 0;
      for (int c = 0; c < d; ++c) {
        if (c == drop) continue;
        idx = idx * res + (long long)(frac01(p[c]) * res);
      }
      if (!occupied[idx]) {
        occupied[idx] = 1;
        ++filled;
      }
    }
    if (filled == cells) return step;
  }
  throw std::runtime_error("unstable segment never became dense");
}

bool j_csu_set_contains(const LinearCenterIsometry& sys, const TorusPoint& x,
                        double eps, int d, const TorusPoint& y) {
  Vec diff = toral_diff(x, y);
  auto off = sys.decompose(diff);
  double lam_u = expansion_factor(sys);
  const double tol = 1e-9;
  return cs_len(off) <= eps + tol &&
         off.unstable_len * std::pow(lam_u, d) <= eps + tol;
}

ShadowResult shadow(const LinearCenterIsometry& sys, const OrbitSpec& spec,
                    double eps) {
  spec.validate();
  const auto& sp = sys.splitting();
  if (sp.n_unstable != 1)
    throw std::invalid_argument("shadowing requires one unstable direction");

  double lam_u = expansion_factor(sys);
  Vec vu = sys.unstable_direction();
  int t0 = spec.segments.front().a;

  // targets must share the invariant level up to the center allowance, else
  // no orbit can connect them
  if (auto w = invariant_functional(sys)) {
    Vec wd = w->cast<double>();
    double allowance =
        std::abs(wd.dot(sys.center_direction())) * eps + 1e-9;
    double l0 = wd.dot(spec.segments.front().x.x);
    for (const auto& seg : spec.segments)
      if (std::abs(wrap_half(wd.dot(seg.x.x) - l0)) > allowance)
        throw std::runtime_error(
            "targets lie on different invariant leaves; unreachable");
  }

  TorusPoint z = spec.segments.front().x;
  for (std::size_t i = 0; i + 1 < spec.segments.size(); ++i) {
    int bi = spec.segments[i].b - t0;
    int g = spec.segments[i + 1].a - spec.segments[i].b;
    const TorusPoint& target = spec.segments[i + 1].x;

    TorusPoint p = sys.apply(z, bi);
    double growth = std::pow(lam_u, g);
    // scan the unstable disk of half-width eps/2 so earlier segments keep
    // their shadowing margin; sample so the image advances by ~eps/12
    long long nsamp =
        std::min<long long>(6'000'000,
                            (long long)std::ceil(6.0 * growth) * 2 + 1);
    double ds = eps / double(nsamp / 2);
    double best_cs = 1e18, best_s = 0.0;
    for (long long k = -nsamp / 2; k <= nsamp / 2; ++k) {
      double s = double(k) * ds * 0.5;
      TorusPoint q(p.x + s * vu);
      q = sys.apply(q, g);
      auto off = sys.decompose(toral_diff(target, q));
      double c = cs_len(off);
      if (c < best_cs) {
        best_cs = c;
        best_s = s;
      }
    }
    if (best_cs > eps)
      throw std::runtime_error(
          "gap too small: unstable image cannot reach the next cs-ball");

    // cancel the unstable residual exactly at the chosen translate
    TorusPoint q(p.x + best_s * vu);
    q = sys.apply(q, g);
    auto off = sys.decompose(toral_diff(target, q));
    double s = best_s - off.coords[sp.unstable_begin()] / growth;
    // fold the correction back into z at time 0
    z = TorusPoint(z.x + s * std::pow(lam_u, -double(bi)) * vu);
  }

  ShadowResult res;
  res.z = z;
  double worst = 0.0;
  for (const auto& seg : spec.segments)
    for (int j = 0; j <= seg.length(); ++j)
      worst = std::max(worst, toral_dist(sys.apply(z, seg.a - t0 + j),
                                         sys.apply(seg.x, j)));
  res.achieved_eps = worst;
  return res;
}

ShadowResult quasiperiodize(const LinearCenterIsometry& sys,
                            const TorusPoint& z, int n, double eps) {
  if (n <= 0) throw std::invalid_argument("period must be positive");
  if (toral_dist(sys.apply(z, n), z) > eps)
    throw std::invalid_argument("point does not eps-return after n steps");

  const auto& sp = sys.splitting();

  // correcting along eigendirection v_j changes the return displacement by
  // (lambda_j^n - 1) in that coordinate; the map is linear, so refinement
  // converges to the rounding floor of the stored point in a few passes
  Vec w = z.x;
  double resid = std::numeric_limits<double>::infinity();
  Vec best = w;
  for (int pass = 0; pass < 4; ++pass) {
    auto off = sys.decompose(return_displacement_ld(sys, w, n));
    double r = std::hypot(off.stable_len, off.unstable_len);
    if (r < resid) {
      resid = r;
      best = w;
    } else {
      break;
    }
    Vec next = w;
    for (int j = 0; j < sp.dim(); ++j) {
      if (j >= sp.center_begin() && j < sp.unstable_begin()) continue;
      double lam_n = std::pow(sp.eigenvalues[j], double(n));
      next += (-off.coords[j] / (lam_n - 1.0)) * sp.basis.col(j);
    }
    w = next;
  }
  TorusPoint wp(best);

  ShadowResult res;
  res.z = wp;
  double worst = 0.0;
  for (int j = 0; j <= n; ++j)
    worst = std::max(worst, toral_dist(sys.apply(wp, j), sys.apply(z, j)));
  res.achieved_eps = worst;

  auto roff = sys.decompose(return_displacement_ld(sys, wp.x, n));
  res.quasiperiod = {n, std::hypot(roff.stable_len, roff.unstable_len)};
  return res;
}

}  // namespace centeq::spec
