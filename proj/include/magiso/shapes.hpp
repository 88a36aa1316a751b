#pragma once

#include "magiso/geometry.hpp"

namespace magiso {

// Star-shaped sample families used across the test corpus. All are sampled
// on uniform angles about their natural center, so every domain carries a
// star descriptor and can be meshed.

PlanarDomain make_disk(double radius, Vec2 center = {0.0, 0.0}, int n_samples = 512);

// r(theta) = R0 (1 + eps cos(k theta)); requires eps < 1/k^2 (star margin).
PlanarDomain make_perturbed_disk(double base_radius, double eps, int k,
                                 int n_samples = 512);

PlanarDomain make_ellipse(double semi_axis_x, double semi_axis_y, int n_samples = 512);

// Exact square (uniform angular samples land on the edges; n_samples must be
// a multiple of 8 so the corners are sample points).
PlanarDomain make_square(double side, int n_samples = 512);

// Rectangle of half-length `half_length` capped by semicircles of radius
// `cap_radius`.
PlanarDomain make_stadium(double half_length, double cap_radius, int n_samples = 512);

}  // namespace magiso
