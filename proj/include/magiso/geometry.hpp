#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace magiso {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double t, Vec2 a) { return {t * a.x, t * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

using Loop = std::vector<Vec2>;  // closed polyline, implicit last->first edge

// Loop-level primitives. Signed quantities follow orientation: CCW outer
// loops are positive, CW holes negative.
double loop_signed_area(const Loop& loop);
double loop_perimeter(const Loop& loop);
Vec2 loop_centroid(const Loop& loop);
bool loop_contains(const Loop& loop, Vec2 p);
double loop_boundary_distance(const Loop& loop, Vec2 p);

// Exact area of (loop interior) ∩ (disk of given center/radius), by per-edge
// decomposition into triangle and circular-sector contributions. Signed with
// the loop orientation, so summing over outer loops and holes gives the area
// of the region intersected with the disk.
double disk_loop_intersection_area(const Loop& loop, Vec2 center, double radius);

struct InscribedDisk {
  Vec2 center;
  double radius = 0.0;
};

// Largest disk inside a simple loop: seeded grid search refined by simplex
// descent on the exact point-to-boundary distance.
InscribedDisk largest_inscribed_disk(const Loop& loop);

// Derivative-free 2D minimizer (Nelder-Mead). Returns argmin; iterations
// and convergence exposed for callers that report optimizer state.
struct SimplexResult {
  Vec2 argmin;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};
SimplexResult simplex_minimize(const std::function<double(Vec2)>& f, Vec2 start,
                               double scale, double xtol, int max_iter);

struct StarDescriptor {
  Vec2 center;
  std::vector<double> thetas;  // strictly ascending, within one period
  std::vector<double> radii;   // all positive, same length as thetas
};

// Simple closed CCW polygon, optionally star-shaped about a center with a
// sampled boundary radius. Construction validates the invariants and throws
// std::invalid_argument with a diagnostic on violation.
class PlanarDomain {
 public:
  static PlanarDomain from_vertices(Loop vertices, std::string label);
  static PlanarDomain star_shaped(Vec2 center, std::vector<double> thetas,
                                  std::vector<double> radii, std::string label);

  const Loop& vertices() const { return vertices_; }
  const std::optional<StarDescriptor>& star() const { return star_; }
  const std::string& label() const { return label_; }

  double area() const { return area_; }
  double perimeter() const { return perimeter_; }
  double equivalent_radius() const;  // R with |Omega| = pi R^2
  Vec2 centroid() const { return centroid_; }

  bool contains(Vec2 p) const { return loop_contains(vertices_, p); }
  // Positive inside, negative outside.
  double signed_boundary_distance(Vec2 p) const;
  // Star domains only: exact distance from the star center to the polygon
  // boundary along direction theta.
  double boundary_radius(double theta) const;

  PlanarDomain scaled(double t) const;
  PlanarDomain translated(Vec2 shift) const;

 private:
  PlanarDomain() = default;
  void finalize();

  Loop vertices_;
  std::optional<StarDescriptor> star_;
  std::string label_;
  double area_ = 0.0;
  double perimeter_ = 0.0;
  Vec2 centroid_;
};

enum class AsymmetryKind { Interior, Fraenkel };

struct AsymmetryReport {
  double interior = 0.0;          // clamped to [0,1)
  double interior_raw = 0.0;      // before clamping
  double inscribed_radius = 0.0;  // rho_-
  Vec2 inscribed_center;
  double fraenkel = 0.0;      // clamped to [0,1)
  double fraenkel_raw = 0.0;  // before clamping
  Vec2 best_fraenkel_center;
  bool fraenkel_converged = true;
};

// Interior deficiency (R - rho_-)/R of a simply connected domain.
AsymmetryReport interior_asymmetry(const PlanarDomain& domain);
// Fraenkel asymmetry: min over centers of |Omega Δ (x0 + D_R)| / (2|Omega|).
AsymmetryReport fraenkel_asymmetry(const PlanarDomain& domain);
// Both at once.
AsymmetryReport asymmetry_report(const PlanarDomain& domain);

double asymmetry(const PlanarDomain& domain, AsymmetryKind kind);

// Multi-loop variants used on extracted level sets. Loops are outer (CCW)
// and hole (CW) components of one region; orientation carries the sign.
// Interior asymmetry fills each component's holes and takes the largest
// inscribed disk over components; Fraenkel compares the union against a
// single disk of matching total area.
struct LevelSetAsymmetry {
  double value = 0.0;
  int n_components = 0;
  bool has_holes = false;
};
LevelSetAsymmetry level_set_asymmetry(const std::vector<Loop>& loops,
                                      AsymmetryKind kind);

struct QuantIsoResult {
  double perimeter = 0.0;
  double iso_floor = 0.0;  // 2 sqrt(pi) |U|^{1/2}
  double deficit = 0.0;    // perimeter / iso_floor - 1
  double asymmetry = 0.0;
  std::optional<double> c_empirical;  // deficit / A^2 when A above floor
};

// Checks P(U) >= 2 sqrt(pi) |U|^{1/2} and reports the empirical constant of
// the quantitative strengthening. asymmetry_floor guards the division for
// domains that are disks up to sampling noise.
QuantIsoResult quant_iso_check(const PlanarDomain& domain, AsymmetryKind kind,
                               double asymmetry_floor = 1e-4);

struct SubsetAsymmetryResult {
  bool applicable = false;  // area precondition |U| >= |Omega|(1 - A/2)
  bool holds = false;
  double lhs = 0.0;  // r * A(U)
  double rhs = 0.0;  // (1/2) R * A(Omega)
  double area_ratio = 0.0;
  bool contained = true;  // sampled containment U ⊆ Omega
};

// Large-subset asymmetry comparison: r A(U) >= (1/2) R A(Omega).
SubsetAsymmetryResult subset_asymmetry_check(const PlanarDomain& subset,
                                             const PlanarDomain& domain,
                                             AsymmetryKind kind);

}  // namespace magiso
