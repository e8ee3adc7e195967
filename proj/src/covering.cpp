#include "brinkhom/covering.hpp"

#include <cmath>
#include <stdexcept>

namespace brinkhom {

namespace {

double face_distance(const Vec3& x, const Vec3& anchor, double lambda) {
    // l-infinity distance to the union of cell faces: the nearest point of the
    // face union differs from x in a single coordinate, so this is the minimum
    // over axes of the distance to the nearest lattice plane.
    double best = lambda;
    for (int axis = 0; axis < 3; ++axis) {
        const double t = (x[axis] - anchor[axis]) / lambda;
        const double frac = t - std::floor(t);
        best = std::min(best, lambda * std::min(frac, 1.0 - frac));
    }
    return best;
}

Vec3 anchor_for_offset(double lambda, int d, int offset) {
    const double shift = static_cast<double>(offset) * lambda / static_cast<double>(d);
    return {shift, shift, shift};
}

}  // namespace

double corridor_mass_for_offset(const WeightedPoints& pts, double lambda, int d, int offset) {
    const Vec3 anchor = anchor_for_offset(lambda, d, offset);
    const double width = lambda / (d + 1);
    double mass = 0.0;
    for (std::size_t i = 0; i < pts.points.size(); ++i) {
        if (face_distance(pts.points[i], anchor, lambda) < width) mass += pts.weights[i];
    }
    return mass;
}

CellKey CubeCovering::cell_of(const Vec3& x) const {
    CellKey key;
    for (int axis = 0; axis < 3; ++axis) {
        key[axis] = static_cast<long>(std::floor((x[axis] - anchor[axis]) / lambda));
    }
    return key;
}

Vec3 CubeCovering::cell_center(const CellKey& key) const {
    return {anchor.x + (key[0] + 0.5) * lambda, anchor.y + (key[1] + 0.5) * lambda,
            anchor.z + (key[2] + 0.5) * lambda};
}

Box CubeCovering::cell_bounds(const CellKey& key) const {
    const Vec3 lo{anchor.x + key[0] * lambda, anchor.y + key[1] * lambda,
                  anchor.z + key[2] * lambda};
    return {lo, lo + Vec3{lambda, lambda, lambda}};
}

bool CubeCovering::corridor_membership(const Vec3& x) const {
    return face_distance(x, anchor, lambda) < corridor_width();
}

CubeCovering build_covering(const WeightedPoints& pts, double lambda, int d) {
    if (lambda <= 0.0) throw std::invalid_argument("build_covering: lambda must be positive");
    if (d < 2) throw std::invalid_argument("build_covering: d must be >= 2");
    if (pts.points.size() != pts.weights.size())
        throw std::invalid_argument("build_covering: points/weights length mismatch");
    for (double w : pts.weights) {
        if (w < 0.0) throw std::invalid_argument("build_covering: weights must be nonnegative");
    }

    CubeCovering cov;
    cov.lambda = lambda;
    cov.d = d;
    for (double w : pts.weights) cov.total_mass += w;

    double best_mass = 0.0;
    int best_offset = 0;
    for (int offset = 0; offset < d; ++offset) {
        const double mass = corridor_mass_for_offset(pts, lambda, d, offset);
        if (offset == 0 || mass < best_mass) {
            best_mass = mass;
            best_offset = offset;
        }
    }
    cov.offset_index = best_offset;
    cov.anchor = anchor_for_offset(lambda, d, best_offset);
    cov.corridor_mass = best_mass;

    // The averaging argument over the d shifts bounds the minimum by 6/d of
    // the total mass; assert it on every construction.
    if (cov.corridor_mass > 6.0 / d * cov.total_mass)
        throw std::logic_error("build_covering: corridor bound violated");

    for (std::size_t i = 0; i < pts.points.size(); ++i) {
        const CellKey key = cov.cell_of(pts.points[i]);
        auto [it, inserted] = cov.cells.try_emplace(key);
        if (inserted) it->second.center = cov.cell_center(key);
        it->second.indices.push_back(i);
        if (cov.corridor_membership(pts.points[i])) cov.corridor_indices.push_back(i);
    }
    // Indices were visited in increasing order; corridor_indices is sorted.
    return cov;
}

}  // namespace brinkhom
