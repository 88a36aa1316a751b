#include "magiso/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace magiso {

namespace {
constexpr double kPi = std::numbers::pi;

std::int64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::int64_t>(a) << 32) | static_cast<std::int64_t>(b);
}
}  // namespace

double TriMesh::triangle_area(std::size_t t) const {
  const auto& tr = triangles[t];
  return 0.5 * cross(nodes[tr[1]] - nodes[tr[0]], nodes[tr[2]] - nodes[tr[0]]);
}

double TriMesh::total_area(Exec exec) const {
  return deterministic_sum(exec, triangles.size(),
                           [this](std::size_t t) { return triangle_area(t); });
}

int TriMesh::boundary_node_count() const {
  int c = 0;
  for (std::uint8_t f : boundary_flags) c += f != 0;
  return c;
}

void TriMesh::validate() const {
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (int v : triangles[t])
      if (v < 0 || v >= static_cast<int>(nodes.size()))
        throw std::invalid_argument("mesh: triangle " + std::to_string(t) +
                                    " references missing node");
    if (!(triangle_area(t) > 0.0))
      throw std::invalid_argument("mesh: triangle " + std::to_string(t) +
                                  " has non-positive area");
  }
  // conforming: every edge shared by at most two triangles
  std::unordered_map<std::int64_t, int> uses;
  uses.reserve(triangles.size() * 3);
  for (const auto& tr : triangles)
    for (int e = 0; e < 3; ++e)
      if (++uses[edge_key(tr[e], tr[(e + 1) % 3])] > 2)
        throw std::invalid_argument("mesh: edge shared by more than two triangles");
}

TriMesh mesh_star_domain(const PlanarDomain& domain, double target_h) {
  if (!domain.star())
    throw std::invalid_argument("mesh_star_domain: domain has no star descriptor");
  if (!(target_h > 0.0))
    throw std::invalid_argument("mesh_star_domain: target_h must be positive");

  const auto& star = *domain.star();
  double r_max = 0.0, r_sum = 0.0;
  for (double r : star.radii) {
    r_max = std::max(r_max, r);
    r_sum += r;
  }
  const double r_mean = r_sum / static_cast<double>(star.radii.size());

  const int n_rings = static_cast<int>(std::lround(r_max / target_h));
  if (n_rings < 3)
    throw std::invalid_argument("mesh_star_domain: target_h too coarse (" +
                                std::to_string(n_rings) + " rings, need >= 3)");
  const int n_theta =
      std::max(8, static_cast<int>(std::lround(2.0 * kPi * r_mean / target_h)));

  TriMesh mesh;
  mesh.h = target_h;
  mesh.nodes.reserve(1 + static_cast<std::size_t>(n_rings) * n_theta);
  mesh.nodes.push_back(star.center);

  // Ring fractions (j - 1/2)/(n - 1/2): the innermost ring sits at roughly
  // half the spacing so the center fan has no degenerate elements, and the
  // outermost ring lands exactly on the polygon boundary.
  for (int j = 1; j <= n_rings; ++j) {
    const double frac = (j - 0.5) / (n_rings - 0.5);
    for (int k = 0; k < n_theta; ++k) {
      const double th = 2.0 * kPi * k / n_theta;
      const double r = frac * domain.boundary_radius(th);
      mesh.nodes.push_back(star.center + r * Vec2{std::cos(th), std::sin(th)});
    }
  }
  mesh.boundary_flags.assign(mesh.nodes.size(), 0);
  for (int k = 0; k < n_theta; ++k)
    mesh.boundary_flags[1 + static_cast<std::size_t>(n_rings - 1) * n_theta + k] = 1;

  const auto node_id = [n_theta](int ring, int k) {
    return 1 + (ring - 1) * n_theta + (k % n_theta);
  };
  for (int k = 0; k < n_theta; ++k)
    mesh.triangles.push_back({0, node_id(1, k), node_id(1, k + 1)});
  for (int j = 1; j < n_rings; ++j) {
    for (int k = 0; k < n_theta; ++k) {
      mesh.triangles.push_back({node_id(j, k), node_id(j + 1, k), node_id(j + 1, k + 1)});
      mesh.triangles.push_back({node_id(j, k), node_id(j + 1, k + 1), node_id(j, k + 1)});
    }
  }
  mesh.validate();
  return mesh;
}

TriMesh refine(const TriMesh& mesh, const PlanarDomain& domain) {
  TriMesh out;
  out.h = mesh.h * 0.5;
  out.nodes = mesh.nodes;
  out.boundary_flags = mesh.boundary_flags;

  // count edge incidences to recognize boundary edges
  std::unordered_map<std::int64_t, int> uses;
  uses.reserve(mesh.triangles.size() * 3);
  for (const auto& tr : mesh.triangles)
    for (int e = 0; e < 3; ++e) ++uses[edge_key(tr[e], tr[(e + 1) % 3])];

  std::unordered_map<std::int64_t, int> midpoint;
  midpoint.reserve(mesh.triangles.size() * 2);
  const auto mid_node = [&](int a, int b) {
    const std::int64_t key = edge_key(a, b);
    const auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec2 p = 0.5 * (mesh.nodes[a] + mesh.nodes[b]);
    std::uint8_t flag = 0;
    if (uses.at(key) == 1 && mesh.boundary_flags[a] && mesh.boundary_flags[b]) {
      flag = 1;
      if (domain.star()) {  // project back onto the polygon boundary
        const Vec2 c = domain.star()->center;
        const double th = std::atan2(p.y - c.y, p.x - c.x);
        p = c + domain.boundary_radius(th) * Vec2{std::cos(th), std::sin(th)};
      }
    }
    const int id = static_cast<int>(out.nodes.size());
    out.nodes.push_back(p);
    out.boundary_flags.push_back(flag);
    midpoint.emplace(key, id);
    return id;
  };

  out.triangles.reserve(mesh.triangles.size() * 4);
  for (const auto& tr : mesh.triangles) {
    const int m01 = mid_node(tr[0], tr[1]);
    const int m12 = mid_node(tr[1], tr[2]);
    const int m20 = mid_node(tr[2], tr[0]);
    out.triangles.push_back({tr[0], m01, m20});
    out.triangles.push_back({tr[1], m12, m01});
    out.triangles.push_back({tr[2], m20, m12});
    out.triangles.push_back({m01, m12, m20});
  }
  out.validate();
  return out;
}

namespace {

double nudge_threshold(const std::vector<double>& values, double z) {
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  bool collides = false;
  for (double v : values) {
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
    if (v == z) collides = true;
  }
  if (!collides) return z;
  const double span = vmax > vmin ? vmax - vmin : 1.0;
  return z + 1e-14 * span;
}

// Superlevel polygon of a linear function on one triangle. Returns the area
// and, when the level line crosses, the two crossing points computed
// canonically per edge (so neighboring triangles agree bitwise).
struct TriSlice {
  double area = 0.0;
  bool crossed = false;
  Vec2 a, b;                     // segment endpoints, unordered
  std::int64_t edge_a = 0, edge_b = 0;  // edges carrying the endpoints
};

Vec2 edge_crossing(const TriMesh& mesh, const std::vector<double>& f, int lo_node,
                   int hi_node, double z) {
  if (lo_node > hi_node) std::swap(lo_node, hi_node);
  const double t = (z - f[lo_node]) / (f[hi_node] - f[lo_node]);
  return mesh.nodes[lo_node] + t * (mesh.nodes[hi_node] - mesh.nodes[lo_node]);
}

TriSlice slice_triangle(const TriMesh& mesh, const std::vector<double>& f,
                        std::size_t t, double z) {
  const auto& tr = mesh.triangles[t];
  TriSlice out;
  int above[3], n_above = 0, below[3], n_below = 0;
  for (int v : tr) (f[v] > z ? above[n_above++] : below[n_below++]) = v;

  if (n_above == 0) return out;
  if (n_above == 3) {
    out.area = mesh.triangle_area(t);
    return out;
  }
  out.crossed = true;
  if (n_above == 1) {
    const int p = above[0];
    const Vec2 x1 = edge_crossing(mesh, f, p, below[0], z);
    const Vec2 x2 = edge_crossing(mesh, f, p, below[1], z);
    out.area = std::abs(0.5 * cross(x1 - mesh.nodes[p], x2 - mesh.nodes[p]));
    out.a = x1;
    out.b = x2;
    out.edge_a = edge_key(p, below[0]);
    out.edge_b = edge_key(p, below[1]);
  } else {  // two vertices above: quad = triangle minus corner
    const int r = below[0];
    const Vec2 x1 = edge_crossing(mesh, f, above[0], r, z);
    const Vec2 x2 = edge_crossing(mesh, f, above[1], r, z);
    const double corner = std::abs(0.5 * cross(x1 - mesh.nodes[r], x2 - mesh.nodes[r]));
    out.area = mesh.triangle_area(t) - corner;
    out.a = x1;
    out.b = x2;
    out.edge_a = edge_key(above[0], r);
    out.edge_b = edge_key(above[1], r);
  }
  return out;
}

Vec2 p1_gradient(const TriMesh& mesh, const std::vector<double>& f, std::size_t t) {
  const auto& tr = mesh.triangles[t];
  const double twoT = 2.0 * mesh.triangle_area(t);
  Vec2 g{0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    const Vec2 e = mesh.nodes[tr[(i + 2) % 3]] - mesh.nodes[tr[(i + 1) % 3]];
    g = g + (f[tr[i]] / twoT) * Vec2{-e.y, e.x};
  }
  return g;
}

std::vector<Loop> boundary_loops(const TriMesh& mesh) {
  std::unordered_map<std::int64_t, int> uses;
  for (const auto& tr : mesh.triangles)
    for (int e = 0; e < 3; ++e) ++uses[edge_key(tr[e], tr[(e + 1) % 3])];
  std::unordered_map<int, int> next;  // directed boundary edge start -> end
  for (const auto& tr : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      const int a = tr[e], b = tr[(e + 1) % 3];
      if (uses.at(edge_key(a, b)) == 1) next[a] = b;
    }
  std::vector<Loop> loops;
  std::unordered_map<int, bool> used;
  for (const auto& [start, _] : next) {
    if (used[start]) continue;
    Loop loop;
    int v = start;
    do {
      loop.push_back(mesh.nodes[v]);
      used[v] = true;
      v = next.at(v);
    } while (v != start && loop.size() <= next.size());
    loops.push_back(std::move(loop));
  }
  return loops;
}

}  // namespace

double superlevel_area(const TriMesh& mesh, const std::vector<double>& nodal_values,
                       double z, Exec exec) {
  const double zz = nudge_threshold(nodal_values, z);
  return deterministic_sum(exec, mesh.n_triangles(), [&](std::size_t t) {
    return slice_triangle(mesh, nodal_values, t, zz).area;
  });
}

LevelSetSlice superlevel_geometry(const TriMesh& mesh,
                                  const std::vector<double>& nodal_values, double z,
                                  Exec exec) {
  if (nodal_values.size() != mesh.n_nodes())
    throw std::invalid_argument("superlevel_geometry: values/nodes size mismatch");

  LevelSetSlice slice;
  slice.threshold = z;

  double vmax = -std::numeric_limits<double>::infinity();
  for (double v : nodal_values) vmax = std::max(vmax, v);
  if (z < 0.0) {  // full domain: the contour is the mesh boundary
    slice.superlevel_area = mesh.total_area();
    slice.contour_polygons = boundary_loops(mesh);
    for (const Loop& l : slice.contour_polygons) slice.contour_length += loop_perimeter(l);
    return slice;
  }
  if (z >= vmax) return slice;  // empty slice

  const double zz = nudge_threshold(nodal_values, z);
  const std::size_t nt = mesh.n_triangles();
  std::vector<TriSlice> slices(nt);
  std::vector<Vec2> grads(nt);
  parallel_for_each(exec, nt, [&](std::size_t t) {
    slices[t] = slice_triangle(mesh, nodal_values, t, zz);
    if (slices[t].crossed) grads[t] = p1_gradient(mesh, nodal_values, t);
  });

  // Directed segments with the superlevel region on the left, keyed by the
  // edge they leave through; crossing points are canonical per edge, so the
  // chain closes exactly.
  struct Segment {
    Vec2 from, to;
    std::int64_t from_edge, to_edge;
  };
  std::vector<Segment> segments;
  std::unordered_map<std::int64_t, int> by_from_edge;
  for (std::size_t t = 0; t < nt; ++t) {
    const TriSlice& s = slices[t];
    slice.superlevel_area += s.area;
    if (!s.crossed) continue;
    const Vec2 g = grads[t];
    const double gmag = norm(g);
    const double len = norm(s.b - s.a);
    slice.contour_length += len;
    slice.gradient_line_integral += gmag * len;
    if (gmag > 0.0) slice.inv_gradient_line_integral += len / gmag;
    Segment seg;
    const Vec2 dir{g.y, -g.x};  // region {f > z} on the left
    if (dot(s.b - s.a, dir) >= 0.0) {
      seg = {s.a, s.b, s.edge_a, s.edge_b};
    } else {
      seg = {s.b, s.a, s.edge_b, s.edge_a};
    }
    by_from_edge[seg.from_edge] = static_cast<int>(segments.size());
    segments.push_back(seg);
  }

  // chain segments into closed polygons
  std::vector<bool> used(segments.size(), false);
  for (std::size_t s0 = 0; s0 < segments.size(); ++s0) {
    if (used[s0]) continue;
    Loop loop;
    std::size_t s = s0;
    while (!used[s]) {
      used[s] = true;
      loop.push_back(segments[s].from);
      const auto it = by_from_edge.find(segments[s].to_edge);
      if (it == by_from_edge.end()) {  // open polyline ending on the boundary
        loop.push_back(segments[s].to);
        break;
      }
      s = static_cast<std::size_t>(it->second);
    }
    slice.contour_polygons.push_back(std::move(loop));
  }
  return slice;
}

double integrate_p1_squared(const TriMesh& mesh, const std::vector<double>& nodal_values) {
  return deterministic_sum(Exec::Serial, mesh.n_triangles(), [&](std::size_t t) {
    const auto& tr = mesh.triangles[t];
    const double a = nodal_values[tr[0]], b = nodal_values[tr[1]], c = nodal_values[tr[2]];
    return mesh.triangle_area(t) / 6.0 * (a * a + b * b + c * c + a * b + b * c + c * a);
  });
}

}  // namespace magiso
