#include "brinkhom/stokeslet.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "brinkhom/quadrature.hpp"

namespace brinkhom {

namespace {

struct RadialCoeffs {
    double A, B, dA, dB;  // u = A v + B (v.x) x, primes w.r.t. r = |x|
};

RadialCoeffs radial_coeffs(double a, double r) {
    const double inv_r = 1.0 / r;
    const double inv_r3 = inv_r * inv_r * inv_r;
    const double inv_a2 = 1.0 / (a * a);
    RadialCoeffs c;
    c.A = (3.0 * inv_r + inv_a2 * inv_r3) / (4.0 * a);
    c.B = 3.0 * (inv_r3 - inv_a2 * inv_r3 * inv_r * inv_r) / (4.0 * a);
    c.dA = (-3.0 * inv_r * inv_r - 3.0 * inv_a2 * inv_r3 * inv_r) / (4.0 * a);
    c.dB = 3.0 * (-3.0 * inv_r3 * inv_r + 5.0 * inv_a2 * inv_r3 * inv_r3) / (4.0 * a);
    return c;
}

void check_a(double a) {
    if (a <= 0.0) throw std::invalid_argument("stokeslet: a must be positive");
}

// Points a rounding error below the surface radius (e.g. quadrature nodes on
// |x| = 1/a) are treated as surface points; the exterior formulas are
// continuous there.
bool strictly_interior(double a, double r) { return r * a < 1.0 - 1e-12; }

}  // namespace

Vec3 u_single(double a, const Vec3& v, const Vec3& x) {
    check_a(a);
    const double r = norm(x);
    if (r == 0.0) throw std::invalid_argument("singular point");
    if (r < 1.0 / a) return v;  // interior extension
    const RadialCoeffs c = radial_coeffs(a, r);
    return c.A * v + (c.B * dot(v, x)) * x;
}

double p_single(double a, const Vec3& v, const Vec3& x) {
    check_a(a);
    const double r = norm(x);
    if (strictly_interior(a, r)) throw std::invalid_argument("p_single: interior point");
    return 3.0 * dot(v, x) / (2.0 * a * r * r * r);
}

Mat3 grad_u_single(double a, const Vec3& v, const Vec3& x) {
    check_a(a);
    const double r = norm(x);
    if (strictly_interior(a, r)) throw std::invalid_argument("grad_u_single: interior point");
    const RadialCoeffs c = radial_coeffs(a, r);
    const double vx = dot(v, x);
    Mat3 g;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double val = c.dA * (x[j] / r) * v[i];
            val += c.dB * (x[j] / r) * vx * x[i];
            val += c.B * (v[j] * x[i] + (i == j ? vx : 0.0));
            g[i][j] = val;
        }
    }
    return g;
}

Vec3 traction_single(double a, const Vec3& v, const Vec3& x, const Vec3& n) {
    const Mat3 g = grad_u_single(a, v, x);
    const double p = p_single(a, v, x);
    return g * n - p * n;
}

Vec3 drag_sphere(double a, const Vec3& v, int quad_order) {
    check_a(a);
    const double radius = 1.0 / a;
    Vec3 force{};
    for (const SurfacePoint& q : sphere_quadrature({0.0, 0.0, 0.0}, radius, quad_order)) {
        // q.normal points out of the ball; the fluid-side outward normal is
        // its negative.
        force += q.weight * traction_single(a, v, q.point, -q.normal);
    }
    return force;
}

Vec3 flux_through_cube(double a, const Vec3& v, const Vec3& center_offset, double half_width,
                       int quad_per_face) {
    check_a(a);
    // Strict containment: the ball around the origin must avoid every face.
    if (half_width - norm_inf(center_offset) <= 1.0 / a)
        throw std::invalid_argument("flux_through_cube: ball not strictly inside the cube");
    Vec3 force{};
    for (const SurfacePoint& q :
         cube_surface_quadrature(center_offset, half_width, quad_per_face)) {
        force += q.weight * traction_single(a, v, q.point, q.normal);
    }
    return force;
}

FieldSample eval_sum(const StokesletSum& sum, const Vec3& x) {
    FieldSample out;
    for (const StokesletSource& s : sum.sources) {
        const Vec3 y = x - s.center;
        const double r = norm(y);
        if (r == 0.0) throw std::invalid_argument("singular point");
        if (r < 1.0 / sum.a) {
            out.inside_ball = true;
            out.value += s.strength;
        } else {
            out.value += u_single(sum.a, s.strength, y);
        }
    }
    return out;
}

Mat3 eval_sum_grad(const StokesletSum& sum, const Vec3& x) {
    Mat3 g{};
    for (const StokesletSource& s : sum.sources) {
        const Vec3 y = x - s.center;
        // constant interior extension: zero gradient, even at the center
        if (norm(y) * sum.a < 1.0) continue;
        g += grad_u_single(sum.a, s.strength, y);
    }
    return g;
}

double eval_sum_pressure(const StokesletSum& sum, const Vec3& x) {
    double p = 0.0;
    for (const StokesletSource& s : sum.sources) {
        const Vec3 y = x - s.center;
        if (norm(y) * sum.a < 1.0) continue;
        p += p_single(sum.a, s.strength, y);
    }
    return p;
}

PdeResidual pde_residual(double a, const Vec3& v, const Vec3& x, double fd_step) {
    check_a(a);
    const double h = fd_step;
    PdeResidual res;
    Vec3 lap{};
    Vec3 grad_p{};
    const Vec3 u0 = u_single(a, v, x);
    for (int axis = 0; axis < 3; ++axis) {
        Vec3 e{};
        e[axis] = h;
        const Vec3 up = u_single(a, v, x + e);
        const Vec3 um = u_single(a, v, x - e);
        lap += (up - 2.0 * u0 + um) / (h * h);
        grad_p[axis] = (p_single(a, v, x + e) - p_single(a, v, x - e)) / (2.0 * h);
        res.div += (up[axis] - um[axis]) / (2.0 * h);
    }
    res.momentum = -1.0 * lap + grad_p;
    return res;
}

}  // namespace brinkhom
