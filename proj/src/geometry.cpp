#include "magiso/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace magiso {

namespace {

constexpr double kPi = std::numbers::pi;

double seg_dist_sq(Vec2 p, Vec2 a, Vec2 b) {
  double x = a.x, y = a.y;
  const double dx0 = b.x - x, dy0 = b.y - y;
  if (dx0 != 0.0 || dy0 != 0.0) {
    const double t = ((p.x - x) * dx0 + (p.y - y) * dy0) / (dx0 * dx0 + dy0 * dy0);
    if (t > 1.0) {
      x = b.x;
      y = b.y;
    } else if (t > 0.0) {
      x += dx0 * t;
      y += dy0 * t;
    }
  }
  const double dx = p.x - x, dy = p.y - y;
  return dx * dx + dy * dy;
}

}  // namespace

double loop_signed_area(const Loop& loop) {
  const std::size_t n = loop.size();
  double s = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) s += cross(loop[j], loop[i]);
  return 0.5 * s;
}

double loop_perimeter(const Loop& loop) {
  const std::size_t n = loop.size();
  double s = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) s += norm(loop[i] - loop[j]);
  return s;
}

Vec2 loop_centroid(const Loop& loop) {
  const std::size_t n = loop.size();
  double a = 0.0;
  Vec2 c{0.0, 0.0};
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const double w = cross(loop[j], loop[i]);
    a += w;
    c.x += (loop[j].x + loop[i].x) * w;
    c.y += (loop[j].y + loop[i].y) * w;
  }
  if (a == 0.0) {
    Vec2 m{0.0, 0.0};
    for (const Vec2& v : loop) m = m + v;
    return (1.0 / static_cast<double>(n)) * m;
  }
  return (1.0 / (3.0 * a)) * c;
}

bool loop_contains(const Loop& loop, Vec2 p) {
  const std::size_t n = loop.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = loop[i], b = loop[j];
    if ((a.y > p.y) != (b.y > p.y) &&
        p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x)
      inside = !inside;
  }
  return inside;
}

double loop_boundary_distance(const Loop& loop, Vec2 p) {
  const std::size_t n = loop.size();
  double d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    d2 = std::min(d2, seg_dist_sq(p, loop[j], loop[i]));
  return std::sqrt(d2);
}

namespace {

// Contribution of one directed edge p->q to the area of (loop ∩ disk),
// with coordinates already shifted so the disk is centered at the origin.
// Pieces of the edge inside the disk contribute the radial triangle
// cross(a,b)/2; pieces outside contribute the circular sector subtended
// at the origin (always < pi for a chord-free piece).
double edge_disk_term(Vec2 p, Vec2 q, double r) {
  const auto tri = [](Vec2 a, Vec2 b) { return 0.5 * cross(a, b); };
  const auto sector = [r](Vec2 a, Vec2 b) {
    return 0.5 * r * r * std::atan2(cross(a, b), dot(a, b));
  };
  const double r2 = r * r;
  const bool p_in = dot(p, p) <= r2;
  const bool q_in = dot(q, q) <= r2;
  if (p_in && q_in) return tri(p, q);

  const Vec2 d = q - p;
  const double dd = dot(d, d);
  if (dd == 0.0) return 0.0;
  const double pd = dot(p, d);
  const double disc = pd * pd - dd * (dot(p, p) - r2);
  if (disc <= 0.0) return sector(p, q);
  const double sq = std::sqrt(disc);
  const double t_enter = (-pd - sq) / dd;
  const double t_exit = (-pd + sq) / dd;

  if (p_in) {  // leaves through t_exit
    const Vec2 e = p + t_exit * d;
    return tri(p, e) + sector(e, q);
  }
  if (q_in) {  // enters through t_enter
    const Vec2 s = p + t_enter * d;
    return sector(p, s) + tri(s, q);
  }
  if (t_enter > 0.0 && t_exit < 1.0 && t_enter < t_exit) {
    const Vec2 s = p + t_enter * d;
    const Vec2 e = p + t_exit * d;
    return sector(p, s) + tri(s, e) + sector(e, q);
  }
  return sector(p, q);
}

}  // namespace

double disk_loop_intersection_area(const Loop& loop, Vec2 center, double radius) {
  const std::size_t n = loop.size();
  double s = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    s += edge_disk_term(loop[j] - center, loop[i] - center, radius);
  return s;
}

SimplexResult simplex_minimize(const std::function<double(Vec2)>& f, Vec2 start,
                               double scale, double xtol, int max_iter) {
  struct Node {
    Vec2 x;
    double v;
  };
  std::array<Node, 3> s{Node{start, f(start)},
                        Node{start + Vec2{scale, 0.0}, 0.0},
                        Node{start + Vec2{0.0, scale}, 0.0}};
  s[1].v = f(s[1].x);
  s[2].v = f(s[2].x);

  SimplexResult out;
  int it = 0;
  for (; it < max_iter; ++it) {
    std::sort(s.begin(), s.end(), [](const Node& a, const Node& b) { return a.v < b.v; });
    const double diam = std::max(norm(s[1].x - s[0].x), norm(s[2].x - s[0].x));
    if (diam < xtol) {
      out.converged = true;
      break;
    }
    const Vec2 mid = 0.5 * (s[0].x + s[1].x);
    const Vec2 refl = mid + (mid - s[2].x);
    const double fr = f(refl);
    if (fr < s[0].v) {
      const Vec2 exp = mid + 2.0 * (mid - s[2].x);
      const double fe = f(exp);
      s[2] = fe < fr ? Node{exp, fe} : Node{refl, fr};
    } else if (fr < s[1].v) {
      s[2] = {refl, fr};
    } else {
      const Vec2 con = mid + 0.5 * (s[2].x - mid);
      const double fc = f(con);
      if (fc < s[2].v) {
        s[2] = {con, fc};
      } else {  // shrink toward the best vertex
        s[1].x = 0.5 * (s[0].x + s[1].x);
        s[1].v = f(s[1].x);
        s[2].x = 0.5 * (s[0].x + s[2].x);
        s[2].v = f(s[2].x);
      }
    }
  }
  std::sort(s.begin(), s.end(), [](const Node& a, const Node& b) { return a.v < b.v; });
  out.argmin = s[0].x;
  out.value = s[0].v;
  out.iterations = it;
  return out;
}

namespace {

double signed_loop_distance(const Loop& loop, Vec2 p) {
  const double d = loop_boundary_distance(loop, p);
  return loop_contains(loop, p) ? d : -d;
}

InscribedDisk inscribed_with_seeds(const Loop& loop, const std::vector<Vec2>& extra_seeds) {
  InscribedDisk best{loop_centroid(loop), 0.0};
  if (loop.size() < 3) return best;

  double xmin = loop[0].x, xmax = loop[0].x, ymin = loop[0].y, ymax = loop[0].y;
  for (const Vec2& v : loop) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  const double diag = std::hypot(xmax - xmin, ymax - ymin);
  if (diag == 0.0) return best;

  std::vector<Vec2> seeds = extra_seeds;
  seeds.push_back(loop_centroid(loop));
  const int g = 24;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j)
      seeds.push_back({xmin + (i + 0.5) * (xmax - xmin) / g,
                       ymin + (j + 0.5) * (ymax - ymin) / g});

  struct Scored {
    Vec2 p;
    double d;
  };
  std::vector<Scored> scored;
  scored.reserve(seeds.size());
  for (const Vec2& p : seeds) scored.push_back({p, signed_loop_distance(loop, p)});
  std::sort(scored.begin(), scored.end(),
            [](const Scored& a, const Scored& b) { return a.d > b.d; });

  const auto objective = [&](Vec2 p) { return -signed_loop_distance(loop, p); };
  const std::size_t tries = std::min<std::size_t>(6, scored.size());
  for (std::size_t k = 0; k < tries; ++k) {
    if (scored[k].d <= 0.0 && k > 0) break;
    const double scale = std::max(scored[k].d, diag / 64.0);
    const SimplexResult r =
        simplex_minimize(objective, scored[k].p, scale, 1e-9 * diag, 500);
    if (-r.value > best.radius) {
      best.radius = -r.value;
      best.center = r.argmin;
    }
  }
  if (best.radius < 0.0) best.radius = 0.0;
  return best;
}

}  // namespace

InscribedDisk largest_inscribed_disk(const Loop& loop) {
  return inscribed_with_seeds(loop, {});
}

// ---------------------------------------------------------------------------
// PlanarDomain

namespace {

struct EdgeBox {
  double xmin, xmax, ymin, ymax;
};

bool boxes_overlap(const EdgeBox& a, const EdgeBox& b) {
  return a.xmin <= b.xmax && b.xmin <= a.xmax && a.ymin <= b.ymax && b.ymin <= a.ymax;
}

// Any contact between two non-adjacent edges makes the polygon non-simple.
bool segments_touch(Vec2 p1, Vec2 p2, Vec2 p3, Vec2 p4) {
  const auto on_segment = [](Vec2 a, Vec2 b, Vec2 c) {
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
  };
  const double d1 = cross(p4 - p3, p1 - p3);
  const double d2 = cross(p4 - p3, p2 - p3);
  const double d3 = cross(p2 - p1, p3 - p1);
  const double d4 = cross(p2 - p1, p4 - p1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(p3, p4, p1)) return true;
  if (d2 == 0 && on_segment(p3, p4, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, p3)) return true;
  if (d4 == 0 && on_segment(p1, p2, p4)) return true;
  return false;
}

void validate_simple_ccw(const Loop& v, const std::string& label) {
  const std::size_t n = v.size();
  if (n < 3)
    throw std::invalid_argument("domain '" + label + "': needs at least 3 vertices");
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    if (v[i].x == v[j].x && v[i].y == v[j].y)
      throw std::invalid_argument("domain '" + label + "': repeated vertex at index " +
                                  std::to_string(i));
  if (loop_signed_area(v) <= 0.0)
    throw std::invalid_argument("domain '" + label +
                                "': vertices must be counterclockwise (signed area > 0)");
  // Spikes: consecutive edges folding back onto each other.
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = v[i], b = v[(i + 1) % n], c = v[(i + 2) % n];
    if (cross(b - a, c - b) == 0.0 && dot(b - a, c - b) < 0.0)
      throw std::invalid_argument("domain '" + label + "': edge " + std::to_string(i) +
                                  " folds back on its neighbor");
  }
  std::vector<EdgeBox> boxes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = v[i], b = v[(i + 1) % n];
    boxes[i] = {std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y),
                std::max(a.y, b.y)};
  }
  for (std::size_t i = 0; i + 2 < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent around the wrap
      if (!boxes_overlap(boxes[i], boxes[j])) continue;
      if (segments_touch(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
        throw std::invalid_argument("domain '" + label + "': edges " + std::to_string(i) +
                                    " and " + std::to_string(j) + " intersect");
    }
  }
}

}  // namespace

void PlanarDomain::finalize() {
  validate_simple_ccw(vertices_, label_);
  area_ = loop_signed_area(vertices_);
  perimeter_ = loop_perimeter(vertices_);
  centroid_ = loop_centroid(vertices_);
}

PlanarDomain PlanarDomain::from_vertices(Loop vertices, std::string label) {
  PlanarDomain d;
  d.vertices_ = std::move(vertices);
  d.label_ = std::move(label);
  d.finalize();
  return d;
}

PlanarDomain PlanarDomain::star_shaped(Vec2 center, std::vector<double> thetas,
                                       std::vector<double> radii, std::string label) {
  if (thetas.size() != radii.size() || thetas.size() < 3)
    throw std::invalid_argument("domain '" + label +
                                "': star descriptor needs >= 3 matched samples");
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (!(radii[i] > 0.0))
      throw std::invalid_argument("domain '" + label + "': star radius " +
                                  std::to_string(i) + " not positive");
    if (i > 0 && !(thetas[i] > thetas[i - 1]))
      throw std::invalid_argument("domain '" + label + "': star angles not ascending");
  }
  if (!(thetas.back() - thetas.front() < 2.0 * kPi))
    throw std::invalid_argument("domain '" + label + "': star angles span >= 2*pi");

  PlanarDomain d;
  d.vertices_.reserve(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i)
    d.vertices_.push_back(center + radii[i] * Vec2{std::cos(thetas[i]), std::sin(thetas[i])});
  d.star_ = StarDescriptor{center, std::move(thetas), std::move(radii)};
  d.label_ = std::move(label);
  d.finalize();
  return d;
}

double PlanarDomain::equivalent_radius() const { return std::sqrt(area_ / kPi); }

double PlanarDomain::signed_boundary_distance(Vec2 p) const {
  const double d = loop_boundary_distance(vertices_, p);
  return contains(p) ? d : -d;
}

double PlanarDomain::boundary_radius(double theta) const {
  if (!star_) throw std::logic_error("boundary_radius: domain has no star descriptor");
  const auto& s = *star_;
  const std::size_t n = s.thetas.size();
  const double t0 = s.thetas.front();
  double t = theta - 2.0 * kPi * std::floor((theta - t0) / (2.0 * kPi));
  // bracket t between consecutive samples (wrapping on the last edge)
  const auto it = std::upper_bound(s.thetas.begin(), s.thetas.end(), t);
  std::size_t i = (it == s.thetas.begin()) ? n - 1 : (it - s.thetas.begin()) - 1;
  const std::size_t j = (i + 1) % n;
  const Vec2 vi = vertices_[i], vj = vertices_[j];
  const Vec2 d = vj - vi;
  const Vec2 e{std::cos(t), std::sin(t)};
  const double denom = cross(e, d);
  if (std::abs(denom) < 1e-300) {
    // ray parallel to the edge; fall back to the sampled radius
    return s.radii[i];
  }
  return cross(vi - s.center, d) / denom;
}

PlanarDomain PlanarDomain::scaled(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("scaled: factor must be positive");
  PlanarDomain d;
  const Vec2 c = star_ ? star_->center : centroid_;
  d.vertices_.reserve(vertices_.size());
  for (const Vec2& v : vertices_) d.vertices_.push_back(c + t * (v - c));
  if (star_) {
    StarDescriptor s = *star_;
    for (double& r : s.radii) r *= t;
    d.star_ = std::move(s);
  }
  d.label_ = label_;
  d.finalize();
  return d;
}

PlanarDomain PlanarDomain::translated(Vec2 shift) const {
  PlanarDomain d;
  d.vertices_.reserve(vertices_.size());
  for (const Vec2& v : vertices_) d.vertices_.push_back(v + shift);
  if (star_) {
    StarDescriptor s = *star_;
    s.center = s.center + shift;
    d.star_ = std::move(s);
  }
  d.label_ = label_;
  d.finalize();
  return d;
}

// ---------------------------------------------------------------------------
// Asymmetries

namespace {

double clamp_asym(double raw) {
  return std::clamp(raw, 0.0, std::nextafter(1.0, 0.0));
}

void fill_interior(const PlanarDomain& domain, AsymmetryReport& rep) {
  std::vector<Vec2> seeds;
  if (domain.star()) {
    const auto& s = *domain.star();
    for (double frac : {0.0, 0.2, 0.4, 0.6, 0.8}) {
      for (int k = 0; k < 16; ++k) {
        const double th = 2.0 * kPi * k / 16.0;
        seeds.push_back(s.center +
                        (frac * domain.boundary_radius(th)) * Vec2{std::cos(th), std::sin(th)});
        if (frac == 0.0) break;
      }
    }
  }
  const InscribedDisk disk = inscribed_with_seeds(domain.vertices(), seeds);
  const double R = domain.equivalent_radius();
  rep.inscribed_radius = disk.radius;
  rep.inscribed_center = disk.center;
  rep.interior_raw = (R - disk.radius) / R;
  rep.interior = clamp_asym(rep.interior_raw);
}

void fill_fraenkel(const PlanarDomain& domain, AsymmetryReport& rep) {
  const double area = domain.area();
  const double R = domain.equivalent_radius();
  const Loop& v = domain.vertices();
  const auto objective = [&](Vec2 c) {
    return 1.0 - disk_loop_intersection_area(v, c, R) / area;
  };

  // coarse 9x9 grid over a box of half-width R about the centroid
  const Vec2 c0 = domain.centroid();
  Vec2 best = c0;
  double best_v = objective(c0);
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      const Vec2 c{c0.x + R * (i - 4) / 4.0, c0.y + R * (j - 4) / 4.0};
      const double val = objective(c);
      if (val < best_v - 1e-15 ||
          (std::abs(val - best_v) <= 1e-15 &&
           (c.x < best.x || (c.x == best.x && c.y < best.y)))) {
        best_v = val;
        best = c;
      }
    }
  }
  const SimplexResult r = simplex_minimize(objective, best, 0.25 * R, 1e-6 * R, 600);
  rep.best_fraenkel_center = r.argmin;
  rep.fraenkel_raw = r.value;
  rep.fraenkel = clamp_asym(r.value);
  rep.fraenkel_converged = r.converged;
}

}  // namespace

AsymmetryReport interior_asymmetry(const PlanarDomain& domain) {
  AsymmetryReport rep;
  fill_interior(domain, rep);
  return rep;
}

AsymmetryReport fraenkel_asymmetry(const PlanarDomain& domain) {
  AsymmetryReport rep;
  fill_fraenkel(domain, rep);
  return rep;
}

AsymmetryReport asymmetry_report(const PlanarDomain& domain) {
  AsymmetryReport rep;
  fill_interior(domain, rep);
  fill_fraenkel(domain, rep);
  return rep;
}

double asymmetry(const PlanarDomain& domain, AsymmetryKind kind) {
  return kind == AsymmetryKind::Interior ? interior_asymmetry(domain).interior
                                         : fraenkel_asymmetry(domain).fraenkel;
}

LevelSetAsymmetry level_set_asymmetry(const std::vector<Loop>& loops,
                                      AsymmetryKind kind) {
  LevelSetAsymmetry out;
  std::vector<const Loop*> outers;
  double total_area = 0.0;
  double filled_area = 0.0;
  for (const Loop& l : loops) {
    if (l.size() < 3) continue;
    const double a = loop_signed_area(l);
    total_area += a;
    if (a > 0.0) {
      outers.push_back(&l);
      filled_area += a;
    } else {
      out.has_holes = true;
    }
  }
  out.n_components = static_cast<int>(outers.size());
  if (outers.empty() || total_area <= 0.0) return out;

  if (kind == AsymmetryKind::Interior) {
    const double R = std::sqrt(filled_area / kPi);
    double rho = 0.0;
    for (const Loop* l : outers) rho = std::max(rho, largest_inscribed_disk(*l).radius);
    out.value = clamp_asym((R - rho) / R);
    return out;
  }

  const double R = std::sqrt(total_area / kPi);
  const auto intersect = [&](Vec2 c) {
    double s = 0.0;
    for (const Loop& l : loops)
      if (l.size() >= 3) s += disk_loop_intersection_area(l, c, R);
    return s;
  };
  const auto objective = [&](Vec2 c) { return 1.0 - intersect(c) / total_area; };

  Vec2 c0{0.0, 0.0};
  for (const Loop* l : outers) {
    const double a = loop_signed_area(*l);
    c0 = c0 + (a / filled_area) * loop_centroid(*l);
  }
  Vec2 best = c0;
  double best_v = objective(c0);
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      const Vec2 c{c0.x + R * (i - 4) / 4.0, c0.y + R * (j - 4) / 4.0};
      const double val = objective(c);
      if (val < best_v) {
        best_v = val;
        best = c;
      }
    }
  }
  const SimplexResult r = simplex_minimize(objective, best, 0.25 * R, 1e-6 * R, 600);
  out.value = clamp_asym(r.value);
  return out;
}

QuantIsoResult quant_iso_check(const PlanarDomain& domain, AsymmetryKind kind,
                               double asymmetry_floor) {
  QuantIsoResult res;
  res.perimeter = domain.perimeter();
  res.iso_floor = 2.0 * std::sqrt(kPi) * std::sqrt(domain.area());
  res.deficit = res.perimeter / res.iso_floor - 1.0;
  res.asymmetry = asymmetry(domain, kind);
  if (res.asymmetry > asymmetry_floor)
    res.c_empirical = res.deficit / (res.asymmetry * res.asymmetry);
  return res;
}

SubsetAsymmetryResult subset_asymmetry_check(const PlanarDomain& subset,
                                             const PlanarDomain& domain,
                                             AsymmetryKind kind) {
  SubsetAsymmetryResult res;
  const double tol = 1e-9 * domain.equivalent_radius();
  for (std::size_t i = 0; i < subset.vertices().size(); ++i) {
    const Vec2 a = subset.vertices()[i];
    const Vec2 b = subset.vertices()[(i + 1) % subset.vertices().size()];
    if (domain.signed_boundary_distance(a) < -tol ||
        domain.signed_boundary_distance(0.5 * (a + b)) < -tol) {
      res.contained = false;
      break;
    }
  }
  const double a_omega = asymmetry(domain, kind);
  res.area_ratio = subset.area() / domain.area();
  res.applicable = res.contained && res.area_ratio >= 1.0 - 0.5 * a_omega - 1e-12;

  // both sides are reported even for skipped pairs
  const double r = subset.equivalent_radius();
  const double R = domain.equivalent_radius();
  res.lhs = r * asymmetry(subset, kind);
  res.rhs = 0.5 * R * a_omega;
  res.holds = res.applicable && res.lhs >= res.rhs - 1e-12 * (1.0 + R);
  return res;
}

}  // namespace magiso
