#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include "centeq/rootsystem.hpp"

using namespace centeq;
using namespace centeq::roots;

TEST_CASE("reflection matrices") {
  Vec alpha{{1.0, 1.0}};
  Mat s = reflection(alpha);
  // involution, orthogonal, negates alpha, fixes the orthogonal line
  CHECK((s * s - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((s.transpose() * s - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((s * alpha + alpha).cwiseAbs().maxCoeff() < 1e-12);
  Vec perp{{1.0, -1.0}};
  CHECK((s * perp - perp).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS(reflection(Vec::Zero(2)));
}

TEST_CASE("builtin systems validate") {
  for (auto rs : {RootSystem::a2(), RootSystem::b2(), RootSystem::g2(),
                  RootSystem::single_pair()}) {
    INFO(rs.name);
    CHECK(validate(rs));
  }
  CHECK(RootSystem::a2().roots.size() == 6);
  CHECK(RootSystem::b2().roots.size() == 8);
  CHECK(RootSystem::g2().roots.size() == 12);
}

TEST_CASE("validation catches broken root lists") {
  RootSystem bad;
  bad.name = "missing-negative";
  bad.ambient = 2;
  bad.roots = {Vec{{1.0, 0.0}}, Vec{{-1.0, 0.0}}, Vec{{0.0, 1.0}}};
  CHECK_FALSE(validate(bad));
}

TEST_CASE("reflection differences span the full space for rank-2 systems") {
  for (auto rs : {RootSystem::a2(), RootSystem::b2(), RootSystem::g2()}) {
    auto rep = weyl_kernel_check(rs);
    INFO(rs.name);
    CHECK(rep.span_rank == 2);
    CHECK(rep.pass);
  }
}

TEST_CASE("single root pair leaves an invariant line (negative control)") {
  auto rep = weyl_kernel_check(RootSystem::single_pair());
  CHECK(rep.span_rank == 1);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("json root lists") {
  std::string path = "/tmp/centeq_roots_test.json";
  {
    std::ofstream out(path);
    out << R"({"name":"b2","roots":[[1,0],[-1,0],[0,1],[0,-1],)"
        << R"([1,1],[-1,-1],[1,-1],[-1,1]]})";
  }
  auto rs = RootSystem::from_file(path);
  CHECK(rs.ambient == 2);
  CHECK(rs.roots.size() == 8);
  CHECK(validate(rs));
  CHECK(weyl_kernel_check(rs).pass);
}
