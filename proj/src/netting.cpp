#include "centeq/netting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace centeq::netting {

namespace {

// integer matrix power with overflow guard
MatZ int_pow(const MatZ& m, int n) {
  const int d = static_cast<int>(m.rows());
  MatZ r = MatZ::Identity(d, d);
  for (int s = 0; s < n; ++s) {
    MatZ next(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        long long acc = 0;
        for (int k = 0; k < d; ++k) {
          acc += r(i, k) * m(k, j);
          if (std::llabs(acc) > (1LL << 55))
            throw std::overflow_error("matrix power exceeds integer range");
        }
        next(i, j) = acc;
      }
    r = next;
  }
  return r;
}

struct BucketGrid {
  int d, cells;
  std::vector<std::vector<int>> buckets;

  BucketGrid(int dim, double eps) : d(dim) {
    cells = std::max(1, static_cast<int>(std::floor(1.0 / eps)));
    int total = 1;
    for (int i = 0; i < d; ++i) total *= cells;
    buckets.resize(total);
  }

  int cell_of(const Vec& x) const {
    int idx = 0;
    for (int i = 0; i < d; ++i) {
      int c = static_cast<int>(std::floor(x[i] * cells));
      c = std::clamp(c, 0, cells - 1);
      idx = idx * cells + c;
    }
    return idx;
  }

  void insert(const Vec& x, int id) { buckets[cell_of(x)].push_back(id); }

  template <typename F>
  void for_neighbors(const Vec& x, F&& fn) const {
    std::vector<int> base(d), off(d, -1);
    for (int i = 0; i < d; ++i) {
      int c = static_cast<int>(std::floor(x[i] * cells));
      base[i] = std::clamp(c, 0, cells - 1);
    }
    while (true) {
      int idx = 0;
      for (int i = 0; i < d; ++i) {
        int c = (base[i] + off[i] + cells) % cells;
        idx = idx * cells + c;
      }
      for (int id : buckets[idx]) fn(id);
      int i = 0;
      for (; i < d; ++i) {
        if (++off[i] <= 1) break;
        off[i] = -1;
      }
      if (i == d) break;
    }
  }
};

}  // namespace

SeparatedNet greedy_separated(const LinearCenterIsometry& sys, int n,
                              double eps, int grid_resolution) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  if (1.0 / grid_resolution >= eps / 4.0)
    throw std::invalid_argument(
        "grid too coarse: spacing must be below eps/4");

  const int d = sys.dim();
  const Mat& M = sys.matrix().cast<double>();
  SeparatedNet net;
  net.n = n;
  net.eps = eps;
  net.maximal = true;

  BucketGrid grid(d, std::min(eps, 0.5));
  const double eps2 = eps * eps;

  // exact toral d_n check via the reduced difference orbit
  auto blocks = [&](const Vec& accepted, const Vec& cand) {
    Vec r(d);
    for (int i = 0; i < d; ++i) r[i] = wrap_half(cand[i] - accepted[i]);
    if (r.squaredNorm() > eps2) return false;
    for (int i = 1; i < n; ++i) {
      r = wrap_half(M * r);
      if (r.squaredNorm() > eps2) return false;
    }
    return true;
  };

  std::vector<Vec> accepted;
  std::vector<int> counter(d, 0);
  const double step = 1.0 / grid_resolution;
  Vec x(d);
  while (true) {
    for (int i = 0; i < d; ++i) x[i] = counter[i] * step;
    bool blocked = false;
    grid.for_neighbors(x, [&](int id) {
      if (!blocked && blocks(accepted[id], x)) blocked = true;
    });
    if (!blocked) {
      grid.insert(x, static_cast<int>(accepted.size()));
      accepted.push_back(x);
    }
    int i = d - 1;  // lexicographic scan order
    for (; i >= 0; --i) {
      if (++counter[i] < grid_resolution) break;
      counter[i] = 0;
    }
    if (i < 0) break;
  }

  net.points.reserve(accepted.size());
  for (auto& p : accepted) net.points.emplace_back(p);
  return net;
}

bool validate_separated(const LinearCenterIsometry& sys,
                        const SeparatedNet& net) {
  for (std::size_t i = 0; i < net.points.size(); ++i)
    for (std::size_t j = i + 1; j < net.points.size(); ++j)
      if (sys.dist_n(net.points[i], net.points[j], net.n) <= net.eps)
        return false;
  return true;
}

namespace {

// Solve A y = k for k over the integer box, narrowing the last coordinate
// analytically; accepts y in [0,1)^m (m = A's columns), and requires the
// residual rows (if any) to land on integers.
void enumerate_solutions(const Mat& square_inv, const MatZ& square_rows,
                         const Mat& residual_rows,
                         const std::function<void(const Vec&)>& emit) {
  const int m = static_cast<int>(square_rows.cols());
  const double tol = 1e-9;
  // per-row k ranges from the image of the unit cube
  std::vector<long long> klo(m), khi(m);
  for (int i = 0; i < m; ++i) {
    long long lo = 0, hi = 0;
    for (int j = 0; j < m; ++j) {
      if (square_rows(i, j) > 0)
        hi += square_rows(i, j);
      else
        lo += square_rows(i, j);
    }
    klo[i] = lo - 1;
    khi[i] = hi + 1;
  }
  const Vec last_col = square_inv.col(m - 1);
  // leaf: k[0..m-2] fixed, narrow the admissible k_last interval
  auto leaf = [&](const Vec& partial) {
    double lo = -1e18, hi = 1e18;
    for (int i = 0; i < m; ++i) {
      double c = last_col[i];
      double s = partial[i];
      if (std::abs(c) < 1e-14) {
        if (s < -tol || s >= 1.0 - tol) return;
        continue;
      }
      double a = (0.0 - tol - s) / c, b = (1.0 - tol - s) / c;
      if (a > b) std::swap(a, b);
      lo = std::max(lo, a);
      hi = std::min(hi, b);
    }
    for (long long kl = static_cast<long long>(std::ceil(lo - 0.5));
         kl <= static_cast<long long>(std::floor(hi + 0.5)); ++kl) {
      Vec y = partial + static_cast<double>(kl) * last_col;
      bool ok = true;
      for (int i = 0; i < m && ok; ++i)
        if (y[i] < -tol || y[i] >= 1.0 - tol) ok = false;
      if (!ok) continue;
      if (residual_rows.rows() > 0) {
        Vec r = residual_rows * y;
        for (int i = 0; i < r.size() && ok; ++i)
          if (std::abs(r[i] - std::round(r[i])) > 1e-6) ok = false;
        if (!ok) continue;
      }
      emit(y);
    }
  };
  std::function<void(int, const Vec&)> rec = [&](int depth, const Vec& partial) {
    if (depth == m - 1) {
      leaf(partial);
      return;
    }
    for (long long v = klo[depth]; v <= khi[depth]; ++v)
      rec(depth + 1, partial + static_cast<double>(v) * square_inv.col(depth));
  };
  rec(0, Vec::Zero(m));
}

}  // namespace

// primitive integer kernel vector of (M - I); exists for shipped systems
VecZ primitive_center_vector(const MatZ& M) {
  const int d = static_cast<int>(M.rows());
  Mat A = (M - MatZ::Identity(d, d)).cast<double>();
  Eigen::FullPivLU<Mat> lu(A);
  lu.setThreshold(1e-8);
  if (lu.dimensionOfKernel() != 1)
    throw std::runtime_error("center kernel must be one-dimensional");
  Vec v = lu.kernel().col(0);
  // rationalize: smallest nonzero component to 1, then clear denominators
  double mn = 1e18;
  for (int i = 0; i < d; ++i)
    if (std::abs(v[i]) > 1e-9) mn = std::min(mn, std::abs(v[i]));
  v /= mn;
  for (int scale = 1; scale <= 64; ++scale) {
    Vec w = v * scale;
    bool ints = true;
    for (int i = 0; i < d; ++i)
      if (std::abs(w[i] - std::round(w[i])) > 1e-6) ints = false;
    if (!ints) continue;
    VecZ z(d);
    for (int i = 0; i < d; ++i) z[i] = std::llround(w[i]);
    long long g = 0;
    for (int i = 0; i < d; ++i) g = std::gcd(g, std::llabs(z[i]));
    if (g > 1)
      for (int i = 0; i < d; ++i) z[i] /= g;
    if (((M * z - z).cwiseAbs().maxCoeff()) == 0) return z;
  }
  throw std::runtime_error("could not rationalize center eigenvector");
}

namespace {

// unimodular matrix whose last column is the primitive vector v
MatZ unimodular_completion(const VecZ& v) {
  const int d = static_cast<int>(v.size());
  // reduce v to +/- e_0 by integer row operations, tracked in V
  MatZ V = MatZ::Identity(d, d);
  VecZ u = v;
  for (int i = 1; i < d; ++i) {
    long long a = u[0], b = u[i];
    if (b == 0) continue;
    // extended gcd
    long long s = 1, t = 0, s1 = 0, t1 = 1, x = a, y = b;
    while (y != 0) {
      long long q = x / y;
      std::swap(x -= q * y, y);
      std::swap(s -= q * s1, s1);
      std::swap(t -= q * t1, t1);
    }
    long long g = x;  // s*a + t*b = g
    MatZ R = MatZ::Identity(d, d);
    R(0, 0) = s;
    R(0, i) = t;
    R(i, 0) = -b / g;
    R(i, i) = a / g;
    V = R * V;
    u = R * u;
  }
  if (u[0] < 0) {
    V.row(0) = -V.row(0);
    u[0] = -u[0];
  }
  if (u[0] != 1)
    throw std::runtime_error("center vector is not primitive");
  // V * v = e_0, so V^{-1} has first column v; rotate it to the last column
  Mat Vinv_d = V.cast<double>().inverse();
  MatZ Vinv(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      Vinv(i, j) = std::llround(Vinv_d(i, j));
  MatZ U(d, d);
  for (int j = 0; j < d - 1; ++j) U.col(j) = Vinv.col(j + 1);
  U.col(d - 1) = Vinv.col(0);
  return U;
}

}  // namespace

std::vector<QuasiperiodicPoint> quasiperiodic_points(
    const LinearCenterIsometry& sys, int n, double delta,
    long long lattice_bound) {
  const int d = sys.dim();
  const int c = sys.splitting().n_center;
  if (c > 1)
    throw std::runtime_error(
        "quasiperiodic enumeration supports center dimension 0 or 1");

  std::vector<QuasiperiodicPoint> out;
  auto record = [&](const Vec& x_raw) {
    TorusPoint x{x_raw};
    QuasiperiodicPoint qp;
    qp.x = x;
    // certificate: k = round((M^n - I) lift)
    Vec ax = int_pow(sys.matrix(), n).cast<double>() * x.x - x.x;
    VecZ k(d);
    double resid = 0;
    if (c == 0) {
      for (int i = 0; i < d; ++i) k[i] = std::llround(ax[i]);
    } else {
      // subtract the center multiple before rounding
      auto off = sys.center_offset(x, sys.apply(x, n), 1e-6);
      resid = off ? std::abs(*off) : std::numeric_limits<double>::infinity();
      Vec vc = sys.center_direction();
      Vec adj = ax - (off ? *off : 0.0) * vc;
      for (int i = 0; i < d; ++i) k[i] = std::llround(adj[i]);
    }
    qp.k = k;
    qp.center_residual = resid;
    out.push_back(qp);
  };

  if (c == 0) {
    MatZ A = int_pow(sys.matrix(), n) - MatZ::Identity(d, d);
    Mat Ainv = A.cast<double>().inverse();
    enumerate_solutions(Ainv, A, Mat(0, d),
                        [&](const Vec& x) { record(x); });
  } else {
    VecZ vc = primitive_center_vector(sys.matrix());
    MatZ U = unimodular_completion(vc);
    Mat Uinv_d = U.cast<double>().inverse();
    MatZ Uinv(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) Uinv(i, j) = std::llround(Uinv_d(i, j));
    MatZ My = Uinv * sys.matrix() * U;
    MatZ Ay = int_pow(My, n) - MatZ::Identity(d, d);
    // last column vanishes: the center coordinate is free
    if (Ay.col(d - 1).cwiseAbs().maxCoeff() != 0)
      throw std::runtime_error("center column of M^n - I did not vanish");
    MatZ B = Ay.leftCols(d - 1);
    // pick d-1 rows with the largest determinant as the square system
    int skip = -1;
    double best = -1;
    for (int s = 0; s < d; ++s) {
      MatZ R(d - 1, d - 1);
      int r = 0;
      for (int i = 0; i < d; ++i) {
        if (i == s) continue;
        R.row(r++) = B.row(i);
      }
      double det = std::abs(R.cast<double>().determinant());
      if (det > best) {
        best = det;
        skip = s;
      }
    }
    if (best < 0.5)
      throw std::runtime_error(
          "(M^n - I) restricted to s+u is numerically singular");
    MatZ R(d - 1, d - 1);
    Mat resid(1, d - 1);
    int r = 0;
    for (int i = 0; i < d; ++i) {
      if (i == skip) continue;
      R.row(r++) = B.row(i);
    }
    resid.row(0) = B.row(skip).cast<double>();
    Mat Rinv = R.cast<double>().inverse();
    enumerate_solutions(Rinv, R, resid, [&](const Vec& yprime) {
      Vec y = Vec::Zero(d);
      y.head(d - 1) = yprime;
      record(reduce01(U.cast<double>() * y));
    });
    // families at nonzero center offset would be missed: check the spacing
    // of attainable offsets over small lattice vectors
    Vec probe = sys.splitting().inv_basis.row(sys.splitting().center_begin());
    double minoff = 1e18;
    std::vector<int> sh(d, -1);
    while (true) {
      double v = 0;
      bool zero = true;
      for (int i = 0; i < d; ++i) {
        v += probe[i] * sh[i];
        if (sh[i] != 0) zero = false;
      }
      if (!zero && std::abs(v) > 1e-9) minoff = std::min(minoff, std::abs(v));
      int i = 0;
      for (; i < d; ++i) {
        if (++sh[i] <= 1) break;
        sh[i] = -1;
      }
      if (i == d) break;
    }
    if (minoff <= delta)
      throw std::runtime_error(
          "delta too large: center-shifted solution families exist");
  }
  if (lattice_bound > 0) {
    std::erase_if(out, [&](const QuasiperiodicPoint& q) {
      return q.k.cwiseAbs().maxCoeff() > lattice_bound;
    });
  }
  // deterministic order
  std::sort(out.begin(), out.end(),
            [](const QuasiperiodicPoint& a, const QuasiperiodicPoint& b) {
              for (int i = 0; i < a.x.x.size(); ++i)
                if (std::abs(a.x.x[i] - b.x.x[i]) > 1e-12)
                  return a.x.x[i] < b.x.x[i];
              return false;
            });
  return out;
}

QuasiperiodicFamily build_quasiperiodic_family(const LinearCenterIsometry& sys,
                                               const std::vector<int>& n_range,
                                               double delta) {
  if (delta > default_config().delta0 + 1e-12)
    throw std::invalid_argument("delta exceeds delta0");
  QuasiperiodicFamily fam;
  fam.delta = delta;
  const double sep = default_config().sep_mult * delta;
  for (int n : n_range) {
    auto cands = quasiperiodic_points(sys, n, delta);
    if (cands.empty())
      throw std::runtime_error("no quasiperiodic points found at n=" +
                               std::to_string(n));
    std::vector<TorusPoint> kept;
    std::vector<std::vector<TorusPoint>> kept_orbits;
    for (const auto& qp : cands) {
      // orbit of the candidate
      std::vector<TorusPoint> orbit(n);
      orbit[0] = qp.x;
      for (int k = 1; k < n; ++k) orbit[k] = sys.apply(orbit[k - 1], 1);
      bool ok = true;
      for (std::size_t j = 0; j < kept.size() && ok; ++j) {
        for (int k = 0; k < n && ok; ++k) {
          // quick reject on plain norm before the plaque test
          if (toral_dist(orbit[k], kept[j]) <= sep + 1e-7 &&
              sys.in_center_plaque(kept[j], sep, orbit[k]))
            ok = false;
          if (ok && toral_dist(kept_orbits[j][k], qp.x) <= sep + 1e-7 &&
              sys.in_center_plaque(qp.x, sep, kept_orbits[j][k]))
            ok = false;
        }
      }
      if (ok) {
        kept.push_back(qp.x);
        kept_orbits.push_back(std::move(orbit));
      }
    }
    fam.levels[n] = std::move(kept);
  }
  return fam;
}

SeparatedNet structured_separated(const LinearCenterIsometry& sys, int n,
                                  double eps) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (eps <= 0 || eps >= 0.5)
    throw std::invalid_argument("eps must lie in (0, 0.5)");
  const auto& sp = sys.splitting();
  const int d = sys.dim();

  // lattice basis: eigenvectors scaled to just above the separation
  // threshold; unstable spacings shrink so the final iterate separates
  Mat A(d, d);
  for (int j = 0; j < d; ++j) {
    double lam = std::abs(sp.eigenvalues[j]);
    double spacing = 1.05 * eps;
    if (lam > 1.0) spacing *= std::pow(lam, -double(n - 1));
    A.col(j) = spacing * sp.basis.col(j);
  }
  double count_est = std::abs(1.0 / A.determinant());
  if (count_est > 6e6)
    throw std::invalid_argument("structured net budget exceeded: ~" +
                                std::to_string((long long)count_est) +
                                " points");
  Mat Ainv = A.inverse();

  // Reduction mod 1 can fold distant lattice classes onto close pairs (a
  // spacing multiple nearly hitting an integer vector). All pair differences
  // are lattice classes plus integer wraps, so the finitely many violating
  // classes can be enumerated up front and greedily pruned in index space.
  std::vector<VecZ> bad;
  {
    Vec zero = Vec::Zero(d);
    VecZ c(d);
    for (int mask = 0; mask < (1 << d); ++mask)
      for (int sgn = 0; sgn < (1 << d); ++sgn) {
        Vec k(d);
        for (int i = 0; i < d; ++i)
          k[i] = ((mask >> i) & 1) * (((sgn >> i) & 1) ? -1.0 : 1.0);
        Vec anchor = -(Ainv * k);
        std::function<void(int)> scan = [&](int depth) {
          if (depth == d) {
            if (c.cwiseAbs().maxCoeff() == 0 && k.cwiseAbs().maxCoeff() == 0)
              return;
            Vec g(d);
            for (int i = 0; i < d; ++i) g[i] = double(c[i]);
            TorusPoint pa{zero}, pb{A * g};
            if (sys.dist_n(pa, pb, n) <= eps) {
              bool dup = false;
              for (const auto& b : bad)
                if ((b - c).cwiseAbs().maxCoeff() == 0) dup = true;
              if (!dup) {
                bad.push_back(c);
                bad.push_back(-c);
              }
            }
            return;
          }
          long long base = std::llround(anchor[depth]);
          for (long long v = base - 4; v <= base + 4; ++v) {
            c[depth] = v;
            scan(depth + 1);
          }
        };
        scan(0);
      }
  }

  Vec lo = Vec::Constant(d, 1e18), hi = Vec::Constant(d, -1e18);
  for (int mask = 0; mask < (1 << d); ++mask) {
    Vec c(d);
    for (int i = 0; i < d; ++i) c[i] = (mask >> i) & 1;
    Vec ic = Ainv * c;
    lo = lo.cwiseMin(ic);
    hi = hi.cwiseMax(ic);
  }

  SeparatedNet net;
  net.n = n;
  net.eps = eps;
  net.kind = NetKind::Separated;
  net.maximal = false;
  net.points.reserve(std::size_t(count_est * 1.05) + 8);

  // index tuples packed into one 64-bit key for the pruning hash set
  constexpr long long kOff = 1ll << 20;
  auto pack = [d](const VecZ& idx) {
    unsigned long long key = 0;
    for (int j = 0; j < d; ++j)
      key = (key << 21) | (unsigned long long)(idx[j] + kOff);
    return key;
  };
  std::unordered_set<unsigned long long> kept;
  if (!bad.empty()) kept.reserve(std::size_t(count_est) * 2 + 16);

  // the widest-ranging (unstable) axis is last, so the leaf level solves an
  // exact interval instead of scanning a bounding box
  VecZ cur_idx = VecZ::Zero(d);
  VecZ probe(d);
  const Vec a_last = A.col(d - 1);
  std::function<void(int, const Vec&)> rec = [&](int depth,
                                                 const Vec& partial) {
    if (depth == d - 1) {
      double tlo = lo[d - 1] - 1.0, thi = hi[d - 1] + 1.0;
      for (int i = 0; i < d; ++i) {
        double ai = a_last[i];
        if (std::abs(ai) < 1e-15) {
          if (partial[i] < 0.0 || partial[i] >= 1.0) return;
          continue;
        }
        double t0 = (0.0 - partial[i]) / ai;
        double t1 = (1.0 - 1e-12 - partial[i]) / ai;
        if (t0 > t1) std::swap(t0, t1);
        tlo = std::max(tlo, t0);
        thi = std::min(thi, t1);
      }
      for (long long t = (long long)std::ceil(tlo);
           t <= (long long)std::floor(thi); ++t) {
        cur_idx[d - 1] = t;
        if (!bad.empty()) {
          bool blocked = false;
          for (const auto& b : bad) {
            for (int j = 0; j < d; ++j) probe[j] = cur_idx[j] - b[j];
            if (kept.count(pack(probe))) {
              blocked = true;
              break;
            }
          }
          if (blocked) continue;
          kept.insert(pack(cur_idx));
        }
        net.points.emplace_back(partial + double(t) * a_last);
      }
      return;
    }
    for (long long i = (long long)std::floor(lo[depth]) - 1;
         i <= (long long)std::ceil(hi[depth]) + 1; ++i) {
      cur_idx[depth] = i;
      rec(depth + 1, partial + double(i) * A.col(depth));
    }
  };
  rec(0, Vec::Zero(d));
  if (net.points.empty())
    throw std::runtime_error("structured net construction produced no points");
  return net;
}

bool validate_family(const LinearCenterIsometry& sys,
                     const QuasiperiodicFamily& family) {
  const double sep = default_config().sep_mult * family.delta;
  for (const auto& [n, pts] : family.levels) {
    for (const auto& x : pts) {
      TorusPoint tx = sys.apply(x, n);
      if (!sys.in_center_plaque(x, family.delta + 1e-9, tx, 1e-6))
        return false;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      TorusPoint orbit = pts[i];
      for (int k = 0; k < n; ++k) {
        if (k > 0) orbit = sys.apply(orbit, 1);
        for (std::size_t j = 0; j < pts.size(); ++j) {
          if (i == j) continue;
          if (sys.in_center_plaque(pts[j], sep, orbit)) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace centeq::netting
