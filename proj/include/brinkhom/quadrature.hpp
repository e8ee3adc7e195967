#pragma once

#include <vector>

#include "brinkhom/vec3.hpp"

namespace brinkhom {

struct QuadRule1d {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

/// Gauss-Legendre rule with n points, computed by Newton iteration on P_n.
QuadRule1d gauss_legendre(int n);

struct SurfacePoint {
    Vec3 point;
    Vec3 normal;  // unit, pointing away from the surface's enclosed region
    double weight;
};

/// Quadrature on the sphere |x - center| = radius. Gauss-Legendre in the polar
/// cosine, equispaced in azimuth. Weights sum to the sphere area; normals point
/// radially outward.
std::vector<SurfacePoint> sphere_quadrature(const Vec3& center, double radius, int order);

/// Quadrature on the boundary of the cube B_inf(center, half_width), tensor
/// Gauss-Legendre per face. Normals point out of the cube.
std::vector<SurfacePoint> cube_surface_quadrature(const Vec3& center, double half_width,
                                                  int points_per_axis);

/// Pairwise (tree) summation; bounds round-off and keeps reductions
/// deterministic independent of chunking.
double pairwise_sum(const std::vector<double>& values);

}  // namespace brinkhom
