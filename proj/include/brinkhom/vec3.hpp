#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace brinkhom {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](std::size_t i) { return (&x)[i]; }
    double operator[](std::size_t i) const { return (&x)[i]; }

    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double norm_inf(const Vec3& a) {
    return std::max({std::abs(a.x), std::abs(a.y), std::abs(a.z)});
}

/// 3x3 matrix, row-major. m[i][j] = d u_i / d x_j when used as a velocity gradient.
struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    std::array<double, 3>& operator[](std::size_t i) { return m[i]; }
    const std::array<double, 3>& operator[](std::size_t i) const { return m[i]; }

    Mat3& operator+=(const Mat3& o) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] += o.m[i][j];
        return *this;
    }
};

inline Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }

/// Matrix-vector product (gradient applied to a direction).
inline Vec3 operator*(const Mat3& g, const Vec3& n) {
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = g[i][0] * n.x + g[i][1] * n.y + g[i][2] * n.z;
    return r;
}

/// Frobenius inner product A : B.
inline double ddot(const Mat3& a, const Mat3& b) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += a[i][j] * b[i][j];
    return s;
}

inline double frobenius_norm(const Mat3& a) { return std::sqrt(ddot(a, a)); }

inline double trace(const Mat3& a) { return a[0][0] + a[1][1] + a[2][2]; }

/// Axis-aligned box.
struct Box {
    Vec3 lo, hi;

    Vec3 extent() const { return hi - lo; }
    Vec3 center() const { return 0.5 * (lo + hi); }
    double volume() const {
        Vec3 e = extent();
        return e.x * e.y * e.z;
    }
    bool contains(const Vec3& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z &&
               p.z <= hi.z;
    }
    /// Minimum coordinate gap from an interior point to any face.
    double boundary_distance(const Vec3& p) const {
        double d = p.x - lo.x;
        d = std::min(d, hi.x - p.x);
        d = std::min(d, p.y - lo.y);
        d = std::min(d, hi.y - p.y);
        d = std::min(d, p.z - lo.z);
        d = std::min(d, hi.z - p.z);
        return d;
    }
};

inline Box unit_box() { return {{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}}; }

}  // namespace brinkhom
