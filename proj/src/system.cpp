#include "centeq/system.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace centeq::dynsys {

namespace {

MatZ round_to_int(const Mat& m) {
  MatZ r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      r(i, j) = static_cast<long long>(std::llround(m(i, j)));
  return r;
}

// one step of inverse iteration against (M - lambda I), with a small shift
Vec refine_eigenvector(const Mat& M, double lambda, Vec v) {
  const int d = static_cast<int>(v.size());
  Mat A = M - (lambda + 1e-10) * Mat::Identity(d, d);
  Eigen::FullPivLU<Mat> lu(A);
  if (lu.isInvertible()) {
    Vec w = lu.solve(v);
    if (w.norm() > 0) v = w / w.norm();
  }
  if (v.norm() > 0) v.normalize();
  // deterministic sign: largest-magnitude entry positive
  int imax = 0;
  for (int i = 1; i < d; ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v[imax] < 0) v = -v;
  return v;
}

}  // namespace

LinearCenterIsometry LinearCenterIsometry::from_matrix(const MatZ& m,
                                                       std::string name) {
  LinearCenterIsometry sys;
  sys.d_ = static_cast<int>(m.rows());
  if (m.cols() != sys.d_) throw std::invalid_argument("matrix must be square");
  sys.M_ = m;
  sys.Md_ = m.cast<double>();
  sys.name_ = std::move(name);

  double det = sys.Md_.determinant();
  if (std::abs(std::abs(det) - 1.0) > 1e-6)
    throw std::invalid_argument("matrix must be unimodular (|det| = 1)");
  sys.Minvd_ = sys.Md_.inverse();
  sys.Minv_ = round_to_int(sys.Minvd_);
  if (((sys.M_ * sys.Minv_).cast<double>() -
       Mat::Identity(sys.d_, sys.d_))
          .norm() > 1e-9)
    throw std::runtime_error("integer inverse validation failed");

  Eigen::EigenSolver<Mat> es(sys.Md_);
  const double tol = 1e-7;
  struct Pair {
    double lam;
    Vec v;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < sys.d_; ++i) {
    std::complex<double> lam = es.eigenvalues()[i];
    if (std::abs(lam.imag()) > tol)
      throw std::runtime_error(
          "complex eigenvalues are not supported; shipped systems have a "
          "real eigensplitting");
    Vec v(sys.d_);
    for (int j = 0; j < sys.d_; ++j) v[j] = es.eigenvectors()(j, i).real();
    v = refine_eigenvector(sys.Md_, lam.real(), v);
    pairs.push_back({lam.real(), v});
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& a, const Pair& b) {
              return std::abs(a.lam) < std::abs(b.lam);
            });

  Splitting sp;
  sp.basis = Mat(sys.d_, sys.d_);
  sp.eigenvalues = Vec(sys.d_);
  double lambda = 0.0;
  for (int i = 0; i < sys.d_; ++i) {
    double mod = std::abs(pairs[i].lam);
    sp.basis.col(i) = pairs[i].v;
    sp.eigenvalues[i] = pairs[i].lam;
    if (mod < 1.0 - tol) {
      ++sp.n_stable;
      lambda = std::max(lambda, mod);
    } else if (mod > 1.0 + tol) {
      ++sp.n_unstable;
      lambda = std::max(lambda, 1.0 / mod);
    } else {
      ++sp.n_center;
      if (std::abs(mod - 1.0) > default_config().eig_tol * 1e3)
        throw std::runtime_error("center eigenvalue modulus not equal to 1");
    }
  }
  // ordering puts any center block between stable and unstable
  sp.inv_basis = sp.basis.inverse();
  sp.lambda = lambda;
  if (sp.n_stable + sp.n_center + sp.n_unstable != sys.d_)
    throw std::runtime_error("splitting does not span");
  sys.split_ = sp;
  return sys;
}

LinearCenterIsometry LinearCenterIsometry::cat_map() {
  MatZ m(2, 2);
  m << 2, 1, 1, 1;
  return from_matrix(m, "cat");
}

LinearCenterIsometry LinearCenterIsometry::t3_map() {
  MatZ m(3, 3);
  m << 0, 0, 1, 1, 0, -4, 0, 1, 4;
  return from_matrix(m, "t3");
}

LinearCenterIsometry LinearCenterIsometry::builtin(const std::string& tag) {
  if (tag == "cat") return cat_map();
  if (tag == "t3") return t3_map();
  throw std::invalid_argument("unknown builtin system: " + tag);
}

LinearCenterIsometry LinearCenterIsometry::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open system file: " + path);
  std::string name = path;
  std::vector<std::vector<long long>> rows;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "name") {
      ls >> name;
    } else if (key == "row") {
      std::vector<long long> row;
      long long v;
      while (ls >> v) row.push_back(v);
      rows.push_back(row);
    } else {
      throw std::runtime_error("unknown key in system file: " + key);
    }
  }
  if (rows.empty()) throw std::runtime_error("system file has no rows");
  const int d = static_cast<int>(rows.size());
  MatZ m(d, d);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(rows[i].size()) != d)
      throw std::runtime_error("system matrix is not square");
    for (int j = 0; j < d; ++j) m(i, j) = rows[i][j];
  }
  return from_matrix(m, name);
}

double LinearCenterIsometry::log_expansion() const {
  double h = 0.0;
  for (int i = split_.unstable_begin(); i < d_; ++i)
    h += std::log(std::abs(split_.eigenvalues[i]));
  return h;
}

TorusPoint LinearCenterIsometry::apply(const TorusPoint& p,
                                       long long k) const {
  // iterated modular application; raw powers of M would overflow
  Vec x = p.x;
  const Mat& step = (k >= 0) ? Md_ : Minvd_;
  for (long long i = 0; i < std::llabs(k); ++i) {
    x = step * x;
    x = reduce01(std::move(x));
  }
  return TorusPoint(std::move(x));
}

Vec LinearCenterIsometry::push_diff(Vec diff, long long k) const {
  const Mat& step = (k >= 0) ? Md_ : Minvd_;
  for (long long i = 0; i < std::llabs(k); ++i) {
    diff = step * diff;
    diff = wrap_half(std::move(diff));
  }
  return diff;
}

double LinearCenterIsometry::dist_n(const TorusPoint& a, const TorusPoint& b,
                                    int n) const {
  Vec r = toral_diff(a, b);
  double best = r.norm();
  for (int i = 1; i < n; ++i) {
    r = wrap_half(Md_ * r);
    best = std::max(best, r.norm());
  }
  return best;
}

double LinearCenterIsometry::dist_pm(const TorusPoint& a, const TorusPoint& b,
                                     int n) const {
  Vec r = toral_diff(a, b);
  double best = r.norm();
  Vec f = r;
  for (int i = 1; i <= n; ++i) {
    f = wrap_half(Md_ * f);
    best = std::max(best, f.norm());
  }
  Vec g = r;
  for (int i = 1; i <= n; ++i) {
    g = wrap_half(Minvd_ * g);
    best = std::max(best, g.norm());
  }
  return best;
}

bool LinearCenterIsometry::bowen_contains(const TorusPoint& center, int n,
                                          double eps,
                                          const TorusPoint& y) const {
  Vec r = toral_diff(center, y);
  if (r.norm() > eps) return false;
  for (int i = 1; i < n; ++i) {
    r = wrap_half(Md_ * r);
    if (r.norm() > eps) return false;
  }
  return true;
}

bool LinearCenterIsometry::bowen_pm_contains(const TorusPoint& center, int n,
                                             double eps,
                                             const TorusPoint& y) const {
  return dist_pm(center, y, n) <= eps;
}

EigenOffset LinearCenterIsometry::decompose(const Vec& diff) const {
  EigenOffset off;
  off.coords = split_.inv_basis * diff;
  auto norm_range = [&](int lo, int hi) {
    double s = 0;
    for (int i = lo; i < hi; ++i) s += off.coords[i] * off.coords[i];
    return std::sqrt(s);
  };
  off.stable_len = norm_range(0, split_.n_stable);
  off.center_len =
      norm_range(split_.center_begin(), split_.center_begin() + split_.n_center);
  off.unstable_len = norm_range(split_.unstable_begin(), d_);
  return off;
}

Vec LinearCenterIsometry::compose(const Vec& eigen_coords) const {
  return split_.basis * eigen_coords;
}

Vec LinearCenterIsometry::center_direction() const {
  if (split_.n_center < 1)
    throw std::logic_error("system has no center direction");
  return split_.basis.col(split_.center_begin());
}

Vec LinearCenterIsometry::unstable_direction() const {
  if (split_.n_unstable < 1)
    throw std::logic_error("system has no unstable direction");
  return split_.basis.col(split_.unstable_begin());
}

Vec LinearCenterIsometry::stable_direction() const {
  if (split_.n_stable < 1)
    throw std::logic_error("system has no stable direction");
  return split_.basis.col(0);
}

bool LinearCenterIsometry::in_center_plaque(const TorusPoint& x, double radius,
                                            const TorusPoint& y,
                                            double su_tol) const {
  auto c = center_offset(x, y, su_tol);
  return c.has_value() && std::abs(*c) <= radius;
}

std::optional<double> LinearCenterIsometry::center_offset(
    const TorusPoint& x, const TorusPoint& y, double su_tol) const {
  // scan the nearby translates: the eigendecomposition depends on the lift
  Vec w = wrap_half(y.x - x.x);
  if (split_.n_center == 0) {
    // degenerate plaque: membership means coincidence
    if (w.norm() <= su_tol) return 0.0;
    return std::nullopt;
  }
  std::vector<int> shift(d_, -1);
  std::optional<double> best;
  while (true) {
    Vec cand = w;
    for (int i = 0; i < d_; ++i) cand[i] += shift[i];
    EigenOffset off = decompose(cand);
    if (off.stable_len <= su_tol && off.unstable_len <= su_tol) {
      double c = (split_.n_center == 1)
                     ? off.coords[split_.center_begin()]
                     : off.center_len;
      if (!best || std::abs(c) < std::abs(*best)) best = c;
    }
    int i = 0;
    for (; i < d_; ++i) {
      if (++shift[i] <= 1) break;
      shift[i] = -1;
    }
    if (i == d_) break;
  }
  return best;
}

TorusPoint LinearCenterIsometry::random_point(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec x(d_);
  for (int i = 0; i < d_; ++i) x[i] = u(rng);
  return TorusPoint(std::move(x));
}

ExpansivityReport plaque_expansivity_probe(const LinearCenterIsometry& sys,
                                           double delta, int n_max,
                                           int sample_count,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-delta, delta);
  ExpansivityReport rep;
  for (int s = 0; s < sample_count; ++s) {
    TorusPoint x = sys.random_point(rng);
    Vec off(sys.dim());
    for (int i = 0; i < sys.dim(); ++i) off[i] = u(rng);
    TorusPoint y(x.x + off);
    if (sys.dist_pm(x, y, n_max) > delta) continue;
    ++rep.surviving_pairs;
    auto c = sys.center_offset(x, y, delta * sys.lambda() * 2 + 1e-7);
    double cd = c ? std::abs(*c) : std::numeric_limits<double>::infinity();
    rep.max_center_dist = std::max(rep.max_center_dist,
                                   std::isfinite(cd) ? cd : 0.0);
    if (!c || std::abs(*c) > 3 * delta) {
      rep.pass = false;
      if (!rep.witness) rep.witness = std::make_pair(x, y);
    }
  }
  return rep;
}

}  // namespace centeq::dynsys
