#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "brinkhom/vec3.hpp"

namespace brinkhom {

/// N spherical holes of common radius 1/N inside an axis-aligned box, each
/// carrying a prescribed velocity.
struct ParticleCloud {
    std::size_t n = 0;
    double radius = 0.0;  // always 1/n
    Box domain;
    std::vector<Vec3> centers;
    std::vector<Vec3> velocities;
};

ParticleCloud make_cloud(Box domain, std::vector<Vec3> centers, std::vector<Vec3> velocities);

enum class Verdict { BrinkmanCompatible, A4Violated, A5Violated, A0Violated };

std::string to_string(Verdict v);

/// Finite-N cutoffs for the asymptotic dilution assumptions. The limits give
/// no canonical values, so these are plain configuration.
struct VerdictThresholds {
    double a4_lower_min = 3.0;  // require d_min / lambda^3 >= this
    double a5_max = 10.0;       // require m_sup / (N lambda^3) <= this
};

struct DilutionReport {
    std::size_t n = 0;
    double d_min = 0.0;
    double lambda = 0.0;
    std::size_t m_sup = 0;
    std::size_t m_sup_upper = 0;  // counting upper bound, see m_sup_bounds
    double energy = 0.0;          // sqrt((1/N) sum |v_i|^2)
    double ratio_a4_lower = 0.0;  // d_min / lambda^3
    double ratio_a4_upper = 0.0;  // N^{2/3} lambda^5 / d_min
    double ratio_a5 = 0.0;        // m_sup / (N lambda^3)
    double n_dmin = 0.0;          // N * d_min
    Verdict verdict = Verdict::BrinkmanCompatible;
};

struct A0Violation {
    // pair violation: both indices set; boundary violation: j == npos.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t i = 0;
    std::size_t j = npos;
    double distance = 0.0;

    bool is_boundary() const { return j == npos; }
};

/// Checks that every closed ball B(h_i, 1/n) is strictly inside the box and
/// that the closed balls are pairwise disjoint. Violations are returned as
/// data, never thrown.
std::vector<A0Violation> validate_a0(const ParticleCloud& cloud);

/// min over i of min( dist(h_i, boundary), min_{j != i} |h_i - h_j| ).
double d_min(const ParticleCloud& cloud);

struct MSupBounds {
    std::size_t lower = 0;   // certified: attained by an explicit ball center
    std::size_t upper = 0;   // max over i of #{j : |h_i - h_j| <= 2 lambda}
    bool grid_refined = false;
};

/// Certified bounds on sup_x #{i : h_i in closed B(x, lambda)}. The lower
/// bound maximizes over candidate centers {h_i} plus midpoints of close
/// pairs, optionally refined on a uniform grid; the exact supremum lies in
/// [lower, upper].
MSupBounds m_sup_bounds(const ParticleCloud& cloud, double lambda, int grid_refine = 0);

/// Certified lower bound on the ball-count supremum (see m_sup_bounds).
std::size_t m_sup(const ParticleCloud& cloud, double lambda);

/// The admissible scale (d_min / N^{2/3})^{1/5}.
double lambda_select(const ParticleCloud& cloud);

double cloud_energy(const ParticleCloud& cloud);

/// Full diagnostic pass; lambda <= 0 means "use lambda_select".
DilutionReport dilution_report(const ParticleCloud& cloud, double lambda = 0.0,
                               const VerdictThresholds& thresholds = {});

using VelocityField = std::function<Vec3(const Vec3&)>;

/// Regular offset lattice: n_per_axis^3 centers with spacing L/n_per_axis.
ParticleCloud gen_periodic(int n_per_axis, const VelocityField& velocity_field,
                           Box box = unit_box());

struct RandomDiluteConfig {
    std::uint64_t seed = 0;
    std::size_t max_attempts_per_particle = 10000;
    double packing_threshold = 0.25;  // feasibility heuristic: n d^3 <= thr * |box|
};

/// Rejection-sampled centers with pairwise and boundary clearance d_target.
ParticleCloud gen_random_dilute(std::size_t n, double d_target, Box box,
                                const RandomDiluteConfig& cfg,
                                const VelocityField& velocity_field);

struct PairsConfig {
    std::uint64_t seed = 0;
    bool fixed_axis = false;  // true: all pairs along +x, reproducing the figure
};

/// First counter-example family: n/2 cells of width (2/n)^{1/3}; each cell
/// holds two centers diametrically opposite on the sphere of radius (1+h)/n
/// about the cell center.
ParticleCloud gen_counterexample_pairs(std::size_t n, double h, const PairsConfig& cfg = {});

/// Second counter-example family: clusters of p centers on an orthogonal grid
/// of step 2*d_m, one cluster per cell of width (p/n)^{1/3}.
ParticleCloud gen_counterexample_clusters(std::size_t n, std::size_t p, double d_m);

}  // namespace brinkhom
