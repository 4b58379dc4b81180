#include "oracles.hpp"

#include "slicekit/mesh.hpp"
#include "slicekit/shapes.hpp"

#include <doctest.h>

#include <Eigen/Geometry>

#include <numbers>
#include <random>
#include <set>

using namespace slicekit;

TEST_CASE("mesh rejects out-of-range and repeated indices") {
  Vertices V(3, 3);
  V << 0, 0, 0, 1, 0, 0, 0, 1, 0;
  Faces bad(1, 3);
  bad << 0, 1, 3;
  CHECK_THROWS_AS(Mesh(V, bad), MeshError);
  bad << 0, 1, 1;
  CHECK_THROWS_AS(Mesh(V, bad), MeshError);
}

TEST_CASE("edge table has one entry per undirected edge and three per face") {
  const Mesh cube = shapes::box();
  CHECK(cube.edge_count() == 18);
  size_t incidences = 0;
  for (const auto& e : cube.edges()) {
    CHECK(e.v0 < e.v1);
    CHECK(e.faces.size() == 2);
    incidences += e.faces.size();
  }
  CHECK(incidences == 3u * cube.face_count());
  for (int f = 0; f < cube.face_count(); ++f)
    for (int k = 0; k < 3; ++k) {
      const Edge& e = cube.edges()[cube.face_edges(f)[k]];
      const auto t = cube.face(f);
      CHECK(std::min(t[k], t[(k + 1) % 3]) == e.v0);
      CHECK(std::max(t[k], t[(k + 1) % 3]) == e.v1);
    }
  CHECK(cube.find_edge(0, 3) >= 0);
  CHECK(cube.find_edge(0, 7) == -1);
}

TEST_CASE("procedural solids are outward wound") {
  CHECK(oracle::signed_volume(shapes::box()) == doctest::Approx(1.0));
  CHECK(oracle::signed_volume(shapes::icosphere(1.0, 3)) > 4.0);
  CHECK(oracle::signed_volume(shapes::cylinder(1.0, 2.0, 64, 4, true)) == doctest::Approx(2.0 * std::numbers::pi).epsilon(0.01));
  CHECK(oracle::signed_volume(shapes::torus(3.0, 1.0, 64, 32)) > 0.0);
}

TEST_CASE("topology summary") {
  SUBCASE("closed cube") {
    const auto s = topology_summary(shapes::box());
    CHECK(s.vertex_count == 8);
    CHECK(s.edge_count == 18);
    CHECK(s.face_count == 12);
    CHECK(s.euler_characteristic == 2);
    CHECK(s.is_watertight);
    CHECK(s.boundary_edge_count == 0);
    CHECK(s.connected_component_count == 1);
  }
  SUBCASE("single triangle") {
    const auto s = topology_summary(shapes::triangle({0, 0, 0}, {1, 0, 0}, {0, 1, 0}));
    CHECK(s.euler_characteristic == 1);
    CHECK(s.boundary_edge_count == 3);
    CHECK_FALSE(s.is_watertight);
  }
  SUBCASE("two disjoint triangles") {
    const Mesh a = shapes::triangle({0, 0, 0}, {1, 0, 0}, {0, 1, 0});
    const Mesh b = shapes::triangle({5, 0, 0}, {6, 0, 0}, {5, 1, 0});
    CHECK(topology_summary(shapes::merge(a, b)).connected_component_count == 2);
  }
  SUBCASE("torus and icosphere") {
    CHECK(topology_summary(shapes::torus(3, 1, 24, 12)).euler_characteristic == 0);
    CHECK(topology_summary(shapes::icosphere(1, 2)).euler_characteristic == 2);
    CHECK(topology_summary(shapes::cylinder(1, 1, 16, 3, true)).euler_characteristic == 2);
    CHECK(topology_summary(shapes::cylinder(1, 1, 16, 3, false)).euler_characteristic == 0);
  }
}

TEST_CASE("watertight meshes have exactly two faces per edge") {
  for (const Mesh& m : {shapes::box(), shapes::icosphere(1, 2), shapes::torus(2, 0.5, 20, 10)}) {
    REQUIRE(topology_summary(m).is_watertight);
    for (const auto& e : m.edges()) CHECK(e.faces.size() == 2);
  }
}

TEST_CASE("transform_mesh") {
  const Mesh cube = shapes::box(Eigen::Vector3d::Constant(-1), Eigen::Vector3d::Constant(1));

  SUBCASE("identity is bitwise") {
    const Mesh same = transform_mesh(cube, Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero());
    CHECK(same.vertices() == cube.vertices());
    CHECK(same.faces() == cube.faces());
  }
  SUBCASE("quarter turn about z maps the cube onto itself") {
    const Mesh r = transform_mesh(cube, rotation_from_euler_degrees(0, 0, 90));
    auto key = [](const Eigen::Vector3d& p) {
      return std::array<long, 3>{std::lround(p.x()), std::lround(p.y()), std::lround(p.z())};
    };
    std::set<std::array<long, 3>> a, b;
    for (int v = 0; v < 8; ++v) {
      a.insert(key(cube.vertex(v)));
      b.insert(key(r.vertex(v)));
      CHECK((r.vertex(v) - r.vertex(v).array().round().matrix()).norm() < 1e-12);
    }
    CHECK(a == b);
  }
  SUBCASE("rotate then inverse") {
    std::mt19937_64 rng(3);
    const Mesh s = oracle::jittered_sphere(rng, 2, 0.1);
    const Eigen::Matrix3d R = Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
    const Mesh back = transform_mesh(transform_mesh(s, R, Eigen::Vector3d(1, -2, 3)), R.transpose(),
                                     -R.transpose() * Eigen::Vector3d(1, -2, 3));
    CHECK((back.vertices() - s.vertices()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("non-orthonormal rotation is rejected") {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m(0, 0) = 1.0 + 1e-6;
    CHECK_THROWS_AS(transform_mesh(cube, m), MeshError);
  }
}

TEST_CASE("transform_mesh is an isometry") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Mesh m = oracle::random_soup(rng, 60);
    const Eigen::Matrix3d R = Eigen::AngleAxisd(u(rng), Eigen::Vector3d(u(rng), u(rng), u(rng)).normalized()).toRotationMatrix();
    const Mesh t = transform_mesh(m, R, Eigen::Vector3d(u(rng), u(rng), u(rng)));
    for (const auto& e : m.edges()) {
      const double before = (m.vertex(e.v0) - m.vertex(e.v1)).norm();
      const double after = (t.vertex(e.v0) - t.vertex(e.v1)).norm();
      CHECK(std::abs(after - before) <= 1e-9 * before);
    }
  }
}

TEST_CASE("rotation_between maps the source direction onto the target") {
  const Eigen::Vector3d from = Eigen::Vector3d(1, 2, -0.5).normalized();
  const Eigen::Matrix3d R = rotation_between(from, Eigen::Vector3d::UnitY());
  CHECK(is_orthonormal(R));
  CHECK((R * from - Eigen::Vector3d::UnitY()).norm() < 1e-12);
}
