#include "brinkhom/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace brinkhom {

QuadRule1d gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    QuadRule1d rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

std::vector<SurfacePoint> sphere_quadrature(const Vec3& center, double radius, int order) {
    if (radius <= 0.0) throw std::invalid_argument("sphere_quadrature: radius must be positive");
    if (order < 2) throw std::invalid_argument("sphere_quadrature: order must be >= 2");
    const QuadRule1d polar = gauss_legendre(order);
    const int n_phi = 2 * order;
    const double dphi = 2.0 * std::numbers::pi / n_phi;

    std::vector<SurfacePoint> pts;
    pts.reserve(static_cast<std::size_t>(order) * n_phi);
    for (int i = 0; i < order; ++i) {
        const double ct = polar.nodes[i];  // cos(theta)
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int j = 0; j < n_phi; ++j) {
            const double phi = (j + 0.5) * dphi;
            Vec3 n{st * std::cos(phi), st * std::sin(phi), ct};
            pts.push_back({center + radius * n, n, radius * radius * polar.weights[i] * dphi});
        }
    }
    return pts;
}

std::vector<SurfacePoint> cube_surface_quadrature(const Vec3& center, double half_width,
                                                  int points_per_axis) {
    if (half_width <= 0.0)
        throw std::invalid_argument("cube_surface_quadrature: half_width must be positive");
    if (points_per_axis < 1)
        throw std::invalid_argument("cube_surface_quadrature: points_per_axis must be >= 1");
    const QuadRule1d gl = gauss_legendre(points_per_axis);

    std::vector<SurfacePoint> pts;
    pts.reserve(6u * points_per_axis * points_per_axis);
    for (int axis = 0; axis < 3; ++axis) {
        for (int side = -1; side <= 1; side += 2) {
            const int a1 = (axis + 1) % 3;
            const int a2 = (axis + 2) % 3;
            Vec3 normal{};
            normal[axis] = static_cast<double>(side);
            for (int i = 0; i < points_per_axis; ++i) {
                for (int j = 0; j < points_per_axis; ++j) {
                    Vec3 p = center;
                    p[axis] += side * half_width;
                    p[a1] += half_width * gl.nodes[i];
                    p[a2] += half_width * gl.nodes[j];
                    const double w =
                        half_width * half_width * gl.weights[i] * gl.weights[j];
                    pts.push_back({p, normal, w});
                }
            }
        }
    }
    return pts;
}

double pairwise_sum(const std::vector<double>& values) {
    struct Rec {
        static double sum(const double* v, std::size_t n) {
            if (n <= 8) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += v[i];
                return s;
            }
            const std::size_t h = n / 2;
            return sum(v, h) + sum(v + h, n - h);
        }
    };
    return values.empty() ? 0.0 : Rec::sum(values.data(), values.size());
}

}  // namespace brinkhom
