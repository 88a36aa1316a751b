#include "magiso/shapes.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace magiso {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* pattern, double a, double b = 0.0, int k = 0) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, a, b, k);
  return buf;
}

PlanarDomain sample_star(Vec2 center, int n, const std::string& label,
                         const std::function<double(double)>& radius) {
  if (n < 8) throw std::invalid_argument("sample_star: need at least 8 samples");
  std::vector<double> thetas(n), radii(n);
  for (int i = 0; i < n; ++i) {
    thetas[i] = 2.0 * kPi * i / n;
    radii[i] = radius(thetas[i]);
  }
  return PlanarDomain::star_shaped(center, std::move(thetas), std::move(radii), label);
}

}  // namespace

PlanarDomain make_disk(double radius, Vec2 center, int n_samples) {
  if (!(radius > 0.0)) throw std::invalid_argument("make_disk: radius must be positive");
  return sample_star(center, n_samples, fmt("disk_R%.4g", radius),
                     [radius](double) { return radius; });
}

PlanarDomain make_perturbed_disk(double base_radius, double eps, int k, int n_samples) {
  if (!(base_radius > 0.0))
    throw std::invalid_argument("make_perturbed_disk: radius must be positive");
  if (k < 1) throw std::invalid_argument("make_perturbed_disk: k must be >= 1");
  if (!(eps >= 0.0 && eps < 1.0 / (static_cast<double>(k) * k)))
    throw std::invalid_argument("make_perturbed_disk: need 0 <= eps < 1/k^2");
  return sample_star({0.0, 0.0}, n_samples, fmt("pert_e%.4g_R%.4g_k%d", eps, base_radius, k),
                     [=](double th) { return base_radius * (1.0 + eps * std::cos(k * th)); });
}

PlanarDomain make_ellipse(double semi_axis_x, double semi_axis_y, int n_samples) {
  if (!(semi_axis_x > 0.0 && semi_axis_y > 0.0))
    throw std::invalid_argument("make_ellipse: semi-axes must be positive");
  const double a = semi_axis_x, b = semi_axis_y;
  return sample_star({0.0, 0.0}, n_samples, fmt("ellipse_%.4gx%.4g", a, b), [=](double th) {
    const double cx = b * std::cos(th), sy = a * std::sin(th);
    return a * b / std::sqrt(cx * cx + sy * sy);
  });
}

PlanarDomain make_square(double side, int n_samples) {
  if (!(side > 0.0)) throw std::invalid_argument("make_square: side must be positive");
  if (n_samples % 8 != 0)
    throw std::invalid_argument("make_square: n_samples must be a multiple of 8");
  return sample_star({0.0, 0.0}, n_samples, fmt("square_s%.4g", side), [=](double th) {
    return 0.5 * side / std::max(std::abs(std::cos(th)), std::abs(std::sin(th)));
  });
}

PlanarDomain make_stadium(double half_length, double cap_radius, int n_samples) {
  if (!(half_length > 0.0 && cap_radius > 0.0))
    throw std::invalid_argument("make_stadium: dimensions must be positive");
  const double l = half_length, rho = cap_radius;
  return sample_star({0.0, 0.0}, n_samples, fmt("stadium_l%.4g_r%.4g", l, rho),
                     [=](double th) {
                       const double s = std::abs(std::sin(th));
                       const double c = std::abs(std::cos(th));
                       // flat side when the ray exits through |y| = rho with |x| <= l
                       if (s > 0.0 && rho * c / s <= l) return rho / s;
                       return l * c + std::sqrt(rho * rho - l * l * s * s);
                     });
}

}  // namespace magiso
