#pragma once

#include <array>
#include <map>
#include <vector>

#include "brinkhom/vec3.hpp"

namespace brinkhom {

struct WeightedPoints {
    std::vector<Vec3> points;
    std::vector<double> weights;  // nonnegative
};

using CellKey = std::array<long, 3>;

struct CoveringCell {
    Vec3 center;
    std::vector<std::size_t> indices;  // point indices whose point lies in the cell
};

/// Shifted partition of R^3 into width-lambda cubes. Among the d diagonal
/// shifts of the cube lattice, the one whose corridor (the lambda/(d+1)
/// neighborhood of the cell faces, distances in l-infinity) carries the least
/// weighted mass is retained; that mass is guaranteed to be at most 6/d of
/// the total. Cells are stored sparsely: only cells containing points.
struct CubeCovering {
    double lambda = 0.0;
    int d = 2;
    int offset_index = 0;  // selected diagonal shift, in {0, ..., d-1}
    Vec3 anchor;           // cube corners lie on anchor + lambda * Z^3
    std::map<CellKey, CoveringCell> cells;
    std::vector<std::size_t> corridor_indices;  // sorted
    double corridor_mass = 0.0;
    double total_mass = 0.0;

    double corridor_width() const { return lambda / (d + 1); }

    CellKey cell_of(const Vec3& x) const;
    Vec3 cell_center(const CellKey& key) const;
    Box cell_bounds(const CellKey& key) const;

    /// True iff the l-infinity distance from x to the union of cell faces is
    /// strictly less than lambda/(d+1).
    bool corridor_membership(const Vec3& x) const;
};

CubeCovering build_covering(const WeightedPoints& pts, double lambda, int d);

/// Corridor mass of a given diagonal shift, evaluated directly; exposed so the
/// minimizer property can be checked exhaustively.
double corridor_mass_for_offset(const WeightedPoints& pts, double lambda, int d, int offset);

}  // namespace brinkhom
