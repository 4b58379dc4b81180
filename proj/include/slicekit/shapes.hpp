#pragma once

#include "slicekit/mesh.hpp"

namespace slicekit::shapes {

/// Axis-aligned box [lo, hi], 8 vertices and 12 outward-wound triangles.
Mesh box(const Eigen::Vector3d& lo = Eigen::Vector3d::Zero(), const Eigen::Vector3d& hi = Eigen::Vector3d::Ones());

/// Subdivided icosahedron projected onto a sphere: 10*4^n + 2 vertices.
Mesh icosphere(double radius = 1.0, int subdivisions = 4, const Eigen::Vector3d& center = Eigen::Vector3d::Zero());

/// Cylinder along +Z from z = 0 to z = height. Capped variants close each end
/// with a centre-fan, giving a genus-0 surface.
Mesh cylinder(double radius, double height, int segments, int rings, bool capped);

/// Torus about +Z: major radius R, minor radius r, nu x nv grid.
Mesh torus(double major_radius, double minor_radius, int nu, int nv);

/// Flat nx x ny quad grid of size sx x sy in z = 0, each quad split into two triangles.
Mesh grid(int nx, int ny, double sx = 1.0, double sy = 1.0);

/// Single triangle.
Mesh triangle(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c);

/// Concatenate meshes without welding.
Mesh merge(const Mesh& a, const Mesh& b);

}  // namespace slicekit::shapes
