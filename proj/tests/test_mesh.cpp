#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "magiso/mesh.hpp"
#include "magiso/shapes.hpp"

using namespace magiso;

namespace {
constexpr double kPi = std::numbers::pi;

TriMesh single_reference_triangle() {
  TriMesh m;
  m.nodes = {{0, 0}, {1, 0}, {0, 1}};
  m.triangles = {{0, 1, 2}};
  m.boundary_flags = {1, 1, 1};
  m.h = 1.0;
  return m;
}

std::vector<double> radial_bump(const TriMesh& mesh, Vec2 center, double R) {
  std::vector<double> f(mesh.n_nodes());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = norm(mesh.nodes[i] - center);
    f[i] = std::max(0.0, 1.0 - (r * r) / (R * R));
  }
  for (std::size_t i = 0; i < f.size(); ++i)
    if (mesh.boundary_flags[i]) f[i] = 0.0;
  return f;
}
}  // namespace

TEST_CASE("polar disk mesh area converges at second order") {
  const auto disk = make_disk(1.0, {0, 0}, 2048);
  const auto coarse = mesh_star_domain(disk, 0.1);
  const auto fine = mesh_star_domain(disk, 0.05);
  const double e_coarse = std::abs(coarse.total_area() - kPi);
  const double e_fine = std::abs(fine.total_area() - kPi);
  CHECK(e_coarse / kPi < 0.01);
  CHECK(e_fine / kPi < 0.01);
  const double ratio = e_coarse / e_fine;
  CHECK(ratio > 2.5);
  CHECK(ratio < 6.5);
}

TEST_CASE("polar ellipse mesh area") {
  const auto ell = make_ellipse(2.0, 0.5, 2048);
  const auto mesh = mesh_star_domain(ell, 0.05);
  CHECK(std::abs(mesh.total_area() - kPi) / kPi < 0.01);
  mesh.validate();
}

TEST_CASE("too-coarse target spacing is rejected") {
  const auto disk = make_disk(1.0, {0, 0}, 256);
  CHECK_THROWS_AS(mesh_star_domain(disk, 0.9), std::invalid_argument);
}

TEST_CASE("refinement multiplies triangles by four and doubles boundary nodes") {
  const auto disk = make_disk(1.0, {0, 0}, 1024);
  const auto mesh = mesh_star_domain(disk, 0.2);
  const auto fine = refine(mesh, disk);
  CHECK(fine.n_triangles() == 4 * mesh.n_triangles());
  CHECK(fine.boundary_node_count() == 2 * mesh.boundary_node_count());
  fine.validate();

  // area grows monotonically toward the disk area under refinement
  const auto finer = refine(fine, disk);
  const double a0 = mesh.total_area(), a1 = fine.total_area(), a2 = finer.total_area();
  CHECK(a1 > a0);
  CHECK(a2 > a1);
  CHECK(a2 < kPi);
}

TEST_CASE("superlevel geometry on one triangle matches the hand computation") {
  const auto mesh = single_reference_triangle();
  const std::vector<double> f{0.0, 0.0, 1.0};
  const auto slice = superlevel_geometry(mesh, f, 0.5, Exec::Serial);
  // {y > 1/2} within the triangle x,y >= 0, x + y <= 1
  CHECK(slice.superlevel_area == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(slice.contour_length == doctest::Approx(0.5).epsilon(1e-12));
  // |grad f| = 1 on the triangle
  CHECK(slice.gradient_line_integral == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(slice.inv_gradient_line_integral == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("superlevel edge cases") {
  const auto disk = make_disk(1.0, {0, 0}, 1024);
  const auto mesh = mesh_star_domain(disk, 0.1);
  const auto f = radial_bump(mesh, {0, 0}, 1.0);

  const auto full = superlevel_geometry(mesh, f, -1.0, Exec::Serial);
  CHECK(full.superlevel_area == doctest::Approx(mesh.total_area()).epsilon(1e-12));
  REQUIRE(full.contour_polygons.size() == 1);
  CHECK(loop_signed_area(full.contour_polygons[0]) ==
        doctest::Approx(mesh.total_area()).epsilon(1e-12));

  const auto zero = superlevel_geometry(mesh, f, 0.0, Exec::Serial);
  CHECK(zero.superlevel_area == doctest::Approx(mesh.total_area()).epsilon(1e-6));

  const auto empty = superlevel_geometry(mesh, f, 2.0, Exec::Serial);
  CHECK(empty.superlevel_area == 0.0);
  CHECK(empty.contour_polygons.empty());
}

TEST_CASE("radial bump contour is nearly a circle") {
  const auto disk = make_disk(1.0, {0, 0}, 1024);
  auto mesh = mesh_star_domain(disk, 0.05);
  const auto f = radial_bump(mesh, {0, 0}, 1.0);
  const auto slice = superlevel_geometry(mesh, f, 0.5, Exec::Serial);
  REQUIRE(slice.contour_polygons.size() == 1);
  const Loop& c = slice.contour_polygons[0];
  const double a = loop_signed_area(c);
  const double p = loop_perimeter(c);
  CHECK(a > 0.0);  // oriented with the superlevel region on the left
  CHECK(p * p / (4.0 * kPi * a) == doctest::Approx(1.0).epsilon(0.01));
  // contour at f = 1/2 is r = R/sqrt(2)
  CHECK(a == doctest::Approx(kPi / 2.0).epsilon(0.01));
}

TEST_CASE("contour polygons account for the superlevel area exactly") {
  const auto dom = make_perturbed_disk(1.0, 0.1, 3, 1024);
  auto mesh = mesh_star_domain(dom, 0.08);
  std::vector<double> f(mesh.n_nodes());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec2 v = mesh.nodes[i];
    f[i] = mesh.boundary_flags[i] ? 0.0
                                  : (1.2 + v.x) * (1.0 - 0.8 * (v.x * v.x + v.y * v.y));
  }
  for (double z : {0.05, 0.2, 0.5, 0.9}) {
    const auto slice = superlevel_geometry(mesh, f, z, Exec::Serial);
    double loop_area = 0.0;
    for (const Loop& l : slice.contour_polygons) loop_area += loop_signed_area(l);
    CHECK(std::abs(loop_area - slice.superlevel_area) < 1e-10);
  }
}

TEST_CASE("area is non-increasing and right-continuous in the threshold") {
  const auto disk = make_disk(1.0, {0, 0}, 512);
  const auto mesh = mesh_star_domain(disk, 0.1);
  const auto f = radial_bump(mesh, {0.2, 0.1}, 1.0);
  double prev = mesh.total_area() + 1.0;
  for (int k = 0; k <= 60; ++k) {
    const double z = -0.01 + 1.02 * k / 60.0;
    const double a = superlevel_area(mesh, f, z, Exec::Serial);
    CHECK(a <= prev + 1e-12);
    prev = a;
  }
  // total variation equals the mesh area
  CHECK(superlevel_area(mesh, f, -1e-9, Exec::Serial) ==
        doctest::Approx(mesh.total_area()).epsilon(1e-12));
  CHECK(superlevel_area(mesh, f, 1.1, Exec::Serial) == 0.0);
}

TEST_CASE("coarea consistency of the distribution function") {
  const auto disk = make_disk(1.0, {0, 0}, 1024);
  auto mesh = mesh_star_domain(disk, 0.04);
  const auto f = radial_bump(mesh, {0, 0}, 1.0);
  for (double z : {0.2, 0.5, 0.7}) {
    const double dz = 1e-4;
    const double dfdz = (superlevel_area(mesh, f, z + dz, Exec::Serial) -
                         superlevel_area(mesh, f, z - dz, Exec::Serial)) /
                        (2.0 * dz);
    const auto slice = superlevel_geometry(mesh, f, z, Exec::Serial);
    CHECK(-dfdz == doctest::Approx(slice.inv_gradient_line_integral).epsilon(0.02));
  }
}

TEST_CASE("parallel kernels match the serial reference") {
  const auto dom = make_ellipse(1.5, 1.0 / 1.5, 512);
  auto mesh = mesh_star_domain(dom, 0.05);
  const auto f = radial_bump(mesh, {0, 0}, 1.2);
  CHECK(mesh.total_area(Exec::Parallel) == mesh.total_area(Exec::Serial));
  for (double z : {0.1, 0.4, 0.8}) {
    CHECK(superlevel_area(mesh, f, z, Exec::Parallel) ==
          superlevel_area(mesh, f, z, Exec::Serial));
    const auto sp = superlevel_geometry(mesh, f, z, Exec::Parallel);
    const auto ss = superlevel_geometry(mesh, f, z, Exec::Serial);
    CHECK(sp.superlevel_area == ss.superlevel_area);
    CHECK(sp.gradient_line_integral == ss.gradient_line_integral);
    CHECK(sp.contour_polygons.size() == ss.contour_polygons.size());
  }
}
