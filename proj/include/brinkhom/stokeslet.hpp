#pragma once

#include <vector>

#include "brinkhom/vec3.hpp"

namespace brinkhom {

/// Exterior Stokes flow around the ball of radius 1/a translating at constant
/// velocity v, evaluated at x relative to the ball center:
///
///   u(x) = (1/4a)(3/|x| + 1/(a^2 |x|^3)) v
///        + (3/4a)(1/|x| - 1/(a^2 |x|^3)) (v.x) x / |x|^2 ,
///   p(x) = (3/2a) (v.x) / |x|^3 .
///
/// Inside the ball the velocity is extended by the constant v.
Vec3 u_single(double a, const Vec3& v, const Vec3& x);

/// Pressure of the single-sphere solution; defined for |x| >= 1/a only.
double p_single(double a, const Vec3& v, const Vec3& x);

/// Analytic velocity gradient, defined on |x| >= 1/a (exterior-side limit on
/// the surface).
Mat3 grad_u_single(double a, const Vec3& v, const Vec3& x);

/// Normal stress (grad u) n - p n at x for the given unit normal.
Vec3 traction_single(double a, const Vec3& v, const Vec3& x, const Vec3& n);

/// Surface integral of the normal stress over |x| = 1/a, with the normal of
/// the fluid domain (pointing toward the ball center). Converges to (6 pi / a) v.
Vec3 drag_sphere(double a, const Vec3& v, int quad_order);

/// Surface integral of the normal stress over the boundary of the cube
/// B_inf(center_offset, half_width) with outward normals. The cube must
/// strictly contain the ball; by conservation of normal stress the result is
/// -(6 pi / a) v up to quadrature error.
Vec3 flux_through_cube(double a, const Vec3& v, const Vec3& center_offset, double half_width,
                       int quad_per_face);

struct StokesletSource {
    Vec3 center;
    Vec3 strength;
};

/// Superposition of stokeslets with common inverse radius a.
struct StokesletSum {
    double a = 1.0;
    std::vector<StokesletSource> sources;
};

struct FieldSample {
    Vec3 value;
    bool inside_ball = false;  // x fell inside some source ball
};

/// Velocity of the superposition; each source uses its interior extension
/// inside its own ball. Throws on exact coincidence with a source center.
FieldSample eval_sum(const StokesletSum& sum, const Vec3& x);

/// Gradient of the superposition; a source contributes zero gradient inside
/// its own ball (constant interior extension).
Mat3 eval_sum_grad(const StokesletSum& sum, const Vec3& x);

/// Pressure of the superposition; sources whose ball contains x contribute 0.
double eval_sum_pressure(const StokesletSum& sum, const Vec3& x);

struct PdeResidual {
    Vec3 momentum;   // finite-difference estimate of -Delta u + grad p
    double div = 0;  // finite-difference estimate of div u
};

/// Central finite differences of the single-stokeslet momentum and divergence
/// residuals at x (which should satisfy |x| > 2/a so the stencil stays well
/// inside the exterior domain).
PdeResidual pde_residual(double a, const Vec3& v, const Vec3& x, double fd_step);

}  // namespace brinkhom
