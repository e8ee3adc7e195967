#include "brinkhom/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

#include "brinkhom/rng.hpp"

namespace brinkhom {

namespace {

/// Uniform-grid spatial hash for fixed-radius neighbor queries.
class CellList {
  public:
    CellList(const std::vector<Vec3>& points, double cell_size)
        : points_(points), cs_(cell_size) {
        cells_.reserve(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            cells_[key_of(points[i])].push_back(i);
        }
    }

    template <typename Fn>
    void for_each_in_ball(const Vec3& x, double r, Fn&& fn) const {
        const long lo[3] = {coord(x.x - r), coord(x.y - r), coord(x.z - r)};
        const long hi[3] = {coord(x.x + r), coord(x.y + r), coord(x.z + r)};
        const double r2 = r * r;
        for (long cx = lo[0]; cx <= hi[0]; ++cx)
            for (long cy = lo[1]; cy <= hi[1]; ++cy)
                for (long cz = lo[2]; cz <= hi[2]; ++cz) {
                    auto it = cells_.find(pack(cx, cy, cz));
                    if (it == cells_.end()) continue;
                    for (std::size_t i : it->second) {
                        if (norm2(points_[i] - x) <= r2) fn(i);
                    }
                }
    }

    std::size_t count_in_ball(const Vec3& x, double r) const {
        std::size_t c = 0;
        for_each_in_ball(x, r, [&](std::size_t) { ++c; });
        return c;
    }

  private:
    long coord(double v) const { return static_cast<long>(std::floor(v / cs_)); }
    std::uint64_t key_of(const Vec3& p) const {
        return pack(coord(p.x), coord(p.y), coord(p.z));
    }
    static std::uint64_t pack(long x, long y, long z) {
        auto u = [](long v) { return static_cast<std::uint64_t>(v + (1L << 20)) & 0x1fffffULL; };
        return (u(x) << 42) | (u(y) << 21) | u(z);
    }

    const std::vector<Vec3>& points_;
    double cs_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

// Slack for closed-ball membership so that algebraically exact ties (e.g. a
// pair midpoint at distance exactly lambda) are not lost to round-off.
constexpr double kBallSlack = 1.0 + 1e-12;

}  // namespace

ParticleCloud make_cloud(Box domain, std::vector<Vec3> centers, std::vector<Vec3> velocities) {
    if (centers.empty()) throw std::invalid_argument("empty configuration");
    if (centers.size() != velocities.size())
        throw std::invalid_argument("centers/velocities length mismatch");
    ParticleCloud cloud;
    cloud.n = centers.size();
    cloud.radius = 1.0 / static_cast<double>(cloud.n);
    cloud.domain = domain;
    cloud.centers = std::move(centers);
    cloud.velocities = std::move(velocities);
    return cloud;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::BrinkmanCompatible: return "Brinkman-compatible";
        case Verdict::A4Violated: return "A4-violated";
        case Verdict::A5Violated: return "A5-violated";
        case Verdict::A0Violated: return "A0-violated";
    }
    return "unknown";
}

std::vector<A0Violation> validate_a0(const ParticleCloud& cloud) {
    std::vector<A0Violation> out;
    const double r = cloud.radius;
    for (std::size_t i = 0; i < cloud.n; ++i) {
        const double bd = cloud.domain.boundary_distance(cloud.centers[i]);
        if (!(bd > r)) out.push_back({i, A0Violation::npos, bd});
    }
    for (std::size_t i = 0; i < cloud.n; ++i) {
        for (std::size_t j = i + 1; j < cloud.n; ++j) {
            const double d = norm(cloud.centers[i] - cloud.centers[j]);
            if (!(d > 2.0 * r)) out.push_back({i, j, d});
        }
    }
    return out;
}

double d_min(const ParticleCloud& cloud) {
    if (cloud.n == 0) throw std::invalid_argument("empty configuration");
    double best = cloud.domain.boundary_distance(cloud.centers[0]);
    for (std::size_t i = 0; i < cloud.n; ++i) {
        best = std::min(best, cloud.domain.boundary_distance(cloud.centers[i]));
        for (std::size_t j = i + 1; j < cloud.n; ++j) {
            best = std::min(best, norm(cloud.centers[i] - cloud.centers[j]));
        }
    }
    return best;
}

MSupBounds m_sup_bounds(const ParticleCloud& cloud, double lambda, int grid_refine) {
    if (lambda <= 0.0) throw std::invalid_argument("m_sup: lambda must be positive");
    MSupBounds b;
    const double r_in = lambda * kBallSlack;
    const CellList list(cloud.centers, lambda);

    // Candidate centers: the particle centers themselves.
    for (const Vec3& c : cloud.centers) {
        b.lower = std::max(b.lower, list.count_in_ball(c, r_in));
    }
    // Counting upper bound, and pair midpoints as further candidates.
    for (std::size_t i = 0; i < cloud.n; ++i) {
        std::size_t within = 0;
        list.for_each_in_ball(cloud.centers[i], 2.0 * lambda * kBallSlack, [&](std::size_t j) {
            ++within;
            if (j > i) {
                const Vec3 mid = 0.5 * (cloud.centers[i] + cloud.centers[j]);
                b.lower = std::max(b.lower, list.count_in_ball(mid, r_in));
            }
        });
        b.upper = std::max(b.upper, within);
    }
    if (grid_refine > 1) {
        b.grid_refined = true;
        const Box& box = cloud.domain;
        const Vec3 e = box.extent();
        for (int ix = 0; ix < grid_refine; ++ix)
            for (int iy = 0; iy < grid_refine; ++iy)
                for (int iz = 0; iz < grid_refine; ++iz) {
                    Vec3 x{box.lo.x + (ix + 0.5) * e.x / grid_refine,
                           box.lo.y + (iy + 0.5) * e.y / grid_refine,
                           box.lo.z + (iz + 0.5) * e.z / grid_refine};
                    b.lower = std::max(b.lower, list.count_in_ball(x, r_in));
                }
    }
    return b;
}

std::size_t m_sup(const ParticleCloud& cloud, double lambda) {
    return m_sup_bounds(cloud, lambda).lower;
}

double lambda_select(const ParticleCloud& cloud) {
    const double dm = d_min(cloud);
    if (dm <= 0.0) throw std::invalid_argument("degenerate configuration");
    const double n23 = std::pow(static_cast<double>(cloud.n), 2.0 / 3.0);
    return std::pow(dm / n23, 0.2);
}

double cloud_energy(const ParticleCloud& cloud) {
    double s = 0.0;
    for (const Vec3& v : cloud.velocities) s += norm2(v);
    return std::sqrt(s / static_cast<double>(cloud.n));
}

DilutionReport dilution_report(const ParticleCloud& cloud, double lambda,
                               const VerdictThresholds& thresholds) {
    DilutionReport rep;
    rep.n = cloud.n;
    rep.d_min = d_min(cloud);
    rep.lambda = lambda > 0.0 ? lambda : lambda_select(cloud);
    const MSupBounds mb = m_sup_bounds(cloud, rep.lambda);
    rep.m_sup = mb.lower;
    rep.m_sup_upper = mb.upper;
    rep.energy = cloud_energy(cloud);

    const double n = static_cast<double>(cloud.n);
    const double l3 = rep.lambda * rep.lambda * rep.lambda;
    rep.ratio_a4_lower = rep.d_min / l3;
    rep.ratio_a4_upper = std::pow(n, 2.0 / 3.0) * l3 * rep.lambda * rep.lambda / rep.d_min;
    rep.ratio_a5 = static_cast<double>(rep.m_sup) / (n * l3);
    rep.n_dmin = n * rep.d_min;

    if (!validate_a0(cloud).empty()) {
        rep.verdict = Verdict::A0Violated;
    } else if (rep.ratio_a4_lower < thresholds.a4_lower_min) {
        rep.verdict = Verdict::A4Violated;
    } else if (rep.ratio_a5 > thresholds.a5_max) {
        rep.verdict = Verdict::A5Violated;
    } else {
        rep.verdict = Verdict::BrinkmanCompatible;
    }
    return rep;
}

ParticleCloud gen_periodic(int n_per_axis, const VelocityField& velocity_field, Box box) {
    if (n_per_axis < 1) throw std::invalid_argument("gen_periodic: n_per_axis must be >= 1");
    const Vec3 e = box.extent();
    std::vector<Vec3> centers, velocities;
    centers.reserve(static_cast<std::size_t>(n_per_axis) * n_per_axis * n_per_axis);
    for (int ix = 0; ix < n_per_axis; ++ix)
        for (int iy = 0; iy < n_per_axis; ++iy)
            for (int iz = 0; iz < n_per_axis; ++iz) {
                Vec3 c{box.lo.x + (ix + 0.5) * e.x / n_per_axis,
                       box.lo.y + (iy + 0.5) * e.y / n_per_axis,
                       box.lo.z + (iz + 0.5) * e.z / n_per_axis};
                centers.push_back(c);
                velocities.push_back(velocity_field(c));
            }
    return make_cloud(box, std::move(centers), std::move(velocities));
}

ParticleCloud gen_random_dilute(std::size_t n, double d_target, Box box,
                                const RandomDiluteConfig& cfg,
                                const VelocityField& velocity_field) {
    if (n == 0) throw std::invalid_argument("empty configuration");
    if (d_target <= 0.0) throw std::invalid_argument("d_target must be positive");
    if (static_cast<double>(n) * d_target * d_target * d_target >
        cfg.packing_threshold * box.volume())
        throw std::runtime_error("packing infeasible");
    const Box inner{box.lo + Vec3{d_target, d_target, d_target},
                    box.hi - Vec3{d_target, d_target, d_target}};
    if (inner.hi.x <= inner.lo.x || inner.hi.y <= inner.lo.y || inner.hi.z <= inner.lo.z)
        throw std::runtime_error("packing infeasible");

    CounterRng rng(cfg.seed);
    std::vector<Vec3> centers;
    centers.reserve(n);
    const double d2 = d_target * d_target;
    for (std::size_t i = 0; i < n; ++i) {
        bool placed = false;
        for (std::size_t attempt = 0; attempt < cfg.max_attempts_per_particle; ++attempt) {
            const Vec3 c = rng.uniform_in_box(inner);
            bool ok = true;
            for (const Vec3& other : centers) {
                if (norm2(c - other) < d2) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                centers.push_back(c);
                placed = true;
                break;
            }
        }
        if (!placed) throw std::runtime_error("packing infeasible");
    }
    std::vector<Vec3> velocities;
    velocities.reserve(n);
    for (const Vec3& c : centers) velocities.push_back(velocity_field(c));
    return make_cloud(box, std::move(centers), std::move(velocities));
}

ParticleCloud gen_counterexample_pairs(std::size_t n, double h, const PairsConfig& cfg) {
    if (n == 0 || n % 2 != 0)
        throw std::invalid_argument("gen_counterexample_pairs: n must be even and positive");
    if (h < 0.0) throw std::invalid_argument("gen_counterexample_pairs: h must be >= 0");
    const std::size_t n_cells = n / 2;
    const double width = std::cbrt(2.0 / static_cast<double>(n));
    // Cells per axis; when n/2 is a perfect cube the cells tile [0,1]^3
    // exactly, otherwise the box is padded to the next cube arrangement.
    std::size_t c = static_cast<std::size_t>(std::llround(std::cbrt(static_cast<double>(n_cells))));
    while (c * c * c < n_cells) ++c;
    const Box box{{0.0, 0.0, 0.0},
                  {static_cast<double>(c) * width, static_cast<double>(c) * width,
                   static_cast<double>(c) * width}};

    const double r_pair = (1.0 + h) / static_cast<double>(n);
    std::vector<Vec3> centers, velocities;
    centers.reserve(n);
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        const std::size_t ix = cell / (c * c);
        const std::size_t iy = (cell / c) % c;
        const std::size_t iz = cell % c;
        const Vec3 cc{(ix + 0.5) * width, (iy + 0.5) * width, (iz + 0.5) * width};
        Vec3 axis{1.0, 0.0, 0.0};
        if (!cfg.fixed_axis) {
            CounterRng cell_rng(cfg.seed, cell + 1);
            axis = cell_rng.unit_vector();
        }
        // the partner is placed relative to the first center so the pair
        // separation is the rounding of 2(1+h)/n itself, not two roundings
        const Vec3 first = cc + r_pair * axis;
        centers.push_back(first);
        centers.push_back(first - (2.0 * r_pair) * axis);
        velocities.push_back({1.0, 0.0, 0.0});
        velocities.push_back({1.0, 0.0, 0.0});
    }
    return make_cloud(box, std::move(centers), std::move(velocities));
}

ParticleCloud gen_counterexample_clusters(std::size_t n, std::size_t p, double d_m) {
    if (n == 0 || p == 0 || p > n)
        throw std::invalid_argument("gen_counterexample_clusters: need 1 <= p <= n");
    if (d_m <= 0.0) throw std::invalid_argument("gen_counterexample_clusters: d_m must be > 0");
    const double s = std::cbrt(static_cast<double>(p) / static_cast<double>(n));
    const std::size_t g =
        static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(p)) - 1e-12));
    const double extent = 2.0 * d_m * static_cast<double>(g - 1);
    const double margin = 2.0 / static_cast<double>(n);
    if (extent + margin >= s)
        throw std::runtime_error(
            "gen_counterexample_clusters: infeasible, sub-grid extent 2*d_m*(ceil(p^{1/3})-1) + "
            "2/n >= cell width (p/n)^{1/3}");

    // Cluster site offsets: the p grid sites closest to the grid center.
    std::vector<Vec3> offsets;
    offsets.reserve(g * g * g);
    const double mid = 0.5 * static_cast<double>(g - 1);
    for (std::size_t ix = 0; ix < g; ++ix)
        for (std::size_t iy = 0; iy < g; ++iy)
            for (std::size_t iz = 0; iz < g; ++iz)
                offsets.push_back({2.0 * d_m * (ix - mid), 2.0 * d_m * (iy - mid),
                                   2.0 * d_m * (iz - mid)});
    std::stable_sort(offsets.begin(), offsets.end(), [](const Vec3& a, const Vec3& b) {
        return norm2(a) < norm2(b);
    });
    offsets.resize(std::min<std::size_t>(p, offsets.size()));

    const std::size_t full_cells = n / p;
    const std::size_t remainder = n - full_cells * p;
    const std::size_t n_cells = full_cells + (remainder > 0 ? 1 : 0);
    std::size_t c = static_cast<std::size_t>(std::llround(std::cbrt(static_cast<double>(n_cells))));
    while (c * c * c < n_cells) ++c;
    const Box box{{0.0, 0.0, 0.0},
                  {static_cast<double>(c) * s, static_cast<double>(c) * s,
                   static_cast<double>(c) * s}};

    std::vector<Vec3> centers, velocities;
    centers.reserve(n);
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        const std::size_t ix = cell / (c * c);
        const std::size_t iy = (cell / c) % c;
        const std::size_t iz = cell % c;
        const Vec3 cc{(ix + 0.5) * s, (iy + 0.5) * s, (iz + 0.5) * s};
        const std::size_t count = (cell < full_cells) ? p : remainder;
        for (std::size_t k = 0; k < count; ++k) {
            centers.push_back(cc + offsets[k]);
            velocities.push_back({1.0, 0.0, 0.0});
        }
    }
    return make_cloud(box, std::move(centers), std::move(velocities));
}

}  // namespace brinkhom
