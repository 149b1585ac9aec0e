#include "centeq/rootsystem.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <Eigen/LU>
#include <nlohmann/json.hpp>

namespace centeq::roots {

namespace {

RootSystem with_negatives(std::string name, int ambient,
                          std::vector<Vec> half) {
  RootSystem rs;
  rs.name = std::move(name);
  rs.ambient = ambient;
  for (const auto& r : half) {
    rs.roots.push_back(r);
    rs.roots.push_back(-r);
  }
  return rs;
}

}  // namespace

RootSystem RootSystem::a2() {
  double h = std::sqrt(3.0) / 2.0;
  return with_negatives("A2", 2,
                        {Vec{{1.0, 0.0}}, Vec{{0.5, h}}, Vec{{-0.5, h}}});
}

RootSystem RootSystem::b2() {
  return with_negatives("B2", 2,
                        {Vec{{1.0, 0.0}}, Vec{{0.0, 1.0}}, Vec{{1.0, 1.0}},
                         Vec{{1.0, -1.0}}});
}

RootSystem RootSystem::g2() {
  double s = std::sqrt(3.0);
  return with_negatives(
      "G2", 2,
      {Vec{{1.0, 0.0}}, Vec{{0.5, s / 2}}, Vec{{-0.5, s / 2}},
       Vec{{0.0, s}}, Vec{{1.5, s / 2}}, Vec{{-1.5, s / 2}}});
}

RootSystem RootSystem::single_pair() {
  return with_negatives("single-pair", 2, {Vec{{1.0, 0.0}}});
}

RootSystem RootSystem::from_file(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw std::runtime_error("cannot open " + json_path);
  nlohmann::json j;
  in >> j;
  RootSystem rs;
  rs.name = j.value("name", "custom");
  for (const auto& row : j.at("roots")) {
    Vec v(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) v[int(i)] = row[i];
    rs.roots.push_back(v);
  }
  if (rs.roots.empty()) throw std::runtime_error("empty root list");
  rs.ambient = int(rs.roots.front().size());
  for (const auto& r : rs.roots)
    if (int(r.size()) != rs.ambient)
      throw std::runtime_error("inconsistent root dimensions");
  return rs;
}

Mat reflection(const Vec& alpha) {
  double n2 = alpha.squaredNorm();
  if (n2 <= 0) throw std::invalid_argument("zero root");
  int d = int(alpha.size());
  return Mat::Identity(d, d) - (2.0 / n2) * (alpha * alpha.transpose());
}

bool validate(const RootSystem& rs, double tol) {
  auto contains = [&](const Vec& v) {
    for (const auto& r : rs.roots)
      if ((r - v).cwiseAbs().maxCoeff() <= tol) return true;
    return false;
  };
  for (const auto& r : rs.roots)
    if (!contains(-r)) return false;
  for (const auto& alpha : rs.roots) {
    Mat s = reflection(alpha);
    for (const auto& r : rs.roots)
      if (!contains(s * r)) return false;
  }
  return true;
}

WeylKernelReport weyl_kernel_check(const RootSystem& rs) {
  WeylKernelReport rep;
  rep.ambient = rs.ambient;
  // a - s_alpha(a) = 2 (alpha.a / |alpha|^2) alpha over basis vectors a
  Mat diffs(rs.ambient, int(rs.roots.size()) * rs.ambient);
  int col = 0;
  for (const auto& alpha : rs.roots) {
    Mat s = reflection(alpha);
    for (int i = 0; i < rs.ambient; ++i) {
      Vec a = Vec::Unit(rs.ambient, i);
      diffs.col(col++) = a - s * a;
    }
  }
  Eigen::FullPivLU<Mat> lu(diffs);
  lu.setThreshold(1e-9);
  rep.span_rank = int(lu.rank());
  rep.pass = rep.span_rank == rs.ambient;
  return rep;
}

}  // namespace centeq::roots
