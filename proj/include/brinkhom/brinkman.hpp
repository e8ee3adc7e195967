#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "brinkhom/cloud.hpp"
#include "brinkhom/vec3.hpp"

namespace brinkhom {

struct Grid {
    int nx = 0, ny = 0, nz = 0;
    Box box;

    double hx() const { return (box.hi.x - box.lo.x) / nx; }
    double hy() const { return (box.hi.y - box.lo.y) / ny; }
    double hz() const { return (box.hi.z - box.lo.z) / nz; }
    double cell_volume() const { return hx() * hy() * hz(); }
    std::size_t num_cells() const {
        return static_cast<std::size_t>(nx) * ny * nz;
    }
    std::size_t cell_index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * ny + j) * nx + i;
    }
    Vec3 cell_center(int i, int j, int k) const {
        return {box.lo.x + (i + 0.5) * hx(), box.lo.y + (j + 0.5) * hy(),
                box.lo.z + (k + 0.5) * hz()};
    }
};

/// Cell-centered number density and momentum density binned from the
/// empirical measure; rho integrates to 1 over the box.
struct DensityFluxFields {
    Grid grid;
    std::vector<double> rho;
    std::vector<Vec3> j;
};

enum class Deposition { NearestCell, Trilinear };

DensityFluxFields bin_empirical(const ParticleCloud& cloud, const Grid& grid,
                                Deposition deposition = Deposition::NearestCell);

/// Staggered (MAC) velocity/pressure pair: velocity components on faces,
/// pressure at cell centers with zero mean, homogeneous Dirichlet walls.
struct MacField {
    Grid grid;
    // Face arrays including boundary faces (held at zero):
    // ux: (nx+1) x ny x nz ; uy: nx x (ny+1) x nz ; uz: nx x ny x (nz+1).
    std::vector<double> ux, uy, uz;
    std::vector<double> p;  // nx*ny*nz, zero mean
    double momentum_residual = 0.0;
    double divergence_residual = 0.0;

    std::size_t ux_index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * grid.ny + j) * (grid.nx + 1) + i;
    }
    std::size_t uy_index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * (grid.ny + 1) + j) * grid.nx + i;
    }
    std::size_t uz_index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * grid.ny + j) * grid.nx + i;
    }
};

struct BrinkmanSolveOptions {
    double tol = 1e-8;       // momentum and divergence residual target (absolute)
    int max_outer = 500;     // pressure-Schur CG iterations
    int max_inner = 5000;    // inner CG iterations per operator solve
    double inner_tol = 1e-12;
};

struct NonConvergence : std::runtime_error {
    std::vector<double> residual_history;
    explicit NonConvergence(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), residual_history(std::move(history)) {}
};

/// Solves  -Delta u + 6 pi rho u + grad p = 6 pi j,  div u = 0,  u = 0 on the
/// walls, on the MAC grid. rho on faces is the arithmetic mean of the two
/// adjacent cells. Uzawa/pressure-Schur iteration with inner CG solves.
MacField solve_brinkman(const DensityFluxFields& fields, const BrinkmanSolveOptions& opts = {});

/// Component-wise linear interpolation from the staggered faces; walls
/// contribute their zero values.
Vec3 eval_field(const MacField& fld, const Vec3& x);

/// Discrete energy identity terms for a converged solution:
/// grad_energy = sum |grad u|^2, damping = 6 pi sum rho |u|^2,
/// work = 6 pi sum j . u (all times cell volume).
struct EnergyIdentity {
    double grad_energy = 0.0;
    double damping = 0.0;
    double work = 0.0;
};

EnergyIdentity energy_identity(const MacField& fld, const DensityFluxFields& fields);

}  // namespace brinkhom
