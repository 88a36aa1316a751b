#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "magiso/geometry.hpp"
#include "magiso/parallel.hpp"

namespace magiso {

// Conforming triangulation with boundary-node flags; carrier for P1 fields.
struct TriMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<std::uint8_t> boundary_flags;   // 1 exactly on boundary nodes
  double h = 0.0;                             // nominal element size

  std::size_t n_nodes() const { return nodes.size(); }
  std::size_t n_triangles() const { return triangles.size(); }
  double triangle_area(std::size_t t) const;
  double total_area(Exec exec = Exec::Serial) const;
  int boundary_node_count() const;
  // Throws std::invalid_argument naming the first offending triangle if any
  // signed area is non-positive or the mesh is not conforming.
  void validate() const;
};

// Structured polar mesh of a star-shaped domain: concentric rings following
// the boundary radius, a fan around the center, and an inner first ring at
// half spacing so no element degenerates. Boundary nodes land exactly on the
// domain polygon. Throws if target_h leaves fewer than 3 rings.
TriMesh mesh_star_domain(const PlanarDomain& domain, double target_h);

// Uniform 4-way refinement; boundary-edge midpoints are projected back onto
// the domain polygon (by angle about the star center) and flagged.
TriMesh refine(const TriMesh& mesh, const PlanarDomain& domain);

// Exact superlevel geometry of the P1 interpolant at threshold z.
struct LevelSetSlice {
  double threshold = 0.0;
  double superlevel_area = 0.0;
  double contour_length = 0.0;
  double gradient_line_integral = 0.0;  // ∫_{f=z} |∇f|
  double inv_gradient_line_integral = 0.0;  // ∫_{f=z} |∇f|^{-1}
  std::vector<Loop> contour_polygons;  // CCW around the superlevel region
};

// Superlevel area only (no contours); cheap kernel used for distribution-
// function inversion.
double superlevel_area(const TriMesh& mesh, const std::vector<double>& nodal_values,
                       double z, Exec exec = Exec::Parallel);

// Full slice with assembled closed contour polygons. Thresholds colliding
// with a nodal value are nudged by +1e-14*(max-min).
LevelSetSlice superlevel_geometry(const TriMesh& mesh,
                                  const std::vector<double>& nodal_values, double z,
                                  Exec exec = Exec::Parallel);

// ∫ f^2 dx of the P1 interpolant (consistent mass quadrature).
double integrate_p1_squared(const TriMesh& mesh, const std::vector<double>& nodal_values);

}  // namespace magiso
