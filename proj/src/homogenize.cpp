#include "brinkhom/homogenize.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace brinkhom {

namespace {

constexpr double kSixPi = 6.0 * std::numbers::pi;

// Radial profile of the bump phi(r) = exp(1 - 1/(1 - r^2)) in terms of
// u = r^2, packaged as the two ratios that stay finite at r = 0:
//   h1(u) = phi'(r)/r,  h2(u) = (phi''(r) - phi'(r)/r)/r^2.
struct BumpProfile {
    double h1 = 0.0, h2 = 0.0;
};

BumpProfile bump_profile(double u) {
    BumpProfile b;
    if (u >= 1.0) return b;
    const double s = 1.0 - u;
    const double phi = std::exp(1.0 - 1.0 / s);
    const double inv2 = 1.0 / (s * s);
    b.h1 = -2.0 * inv2 * phi;
    b.h2 = (4.0 * inv2 * inv2 - 8.0 * inv2 / s) * phi;
    return b;
}

}  // namespace

TestField::TestField(const Vec3& center, double scale, const Vec3& amplitude)
    : center_(center), scale_(scale), amplitude_(amplitude) {
    if (scale <= 0.0) throw std::invalid_argument("TestField: scale must be positive");
    // Sampled sup-norm bounds; |y x A| <= r |A| and |E|_F = sqrt(2) |A| for the
    // constant cross-product matrix.
    const double amp = norm(amplitude_);
    const int samples = 20000;
    for (int i = 0; i <= samples; ++i) {
        const double r = static_cast<double>(i) / samples;
        const BumpProfile b = bump_profile(r * r);
        w_inf_ = std::max(w_inf_, std::abs(b.h1) * r * amp / scale_);
        grad_w_inf_ = std::max(grad_w_inf_, (std::abs(b.h2) * r * r +
                                             std::numbers::sqrt2 * std::abs(b.h1)) *
                                                amp / (scale_ * scale_));
    }
}

Vec3 TestField::value(const Vec3& x) const {
    const Vec3 y = (x - center_) / scale_;
    const BumpProfile b = bump_profile(norm2(y));
    if (b.h1 == 0.0) return {};
    return (b.h1 / scale_) * cross(y, amplitude_);
}

Mat3 TestField::gradient(const Vec3& x) const {
    const Vec3 y = (x - center_) / scale_;
    const double u = norm2(y);
    Mat3 g{};
    if (u >= 1.0) return g;
    const BumpProfile b = bump_profile(u);
    const Vec3 c = cross(y, amplitude_);
    const Vec3& a = amplitude_;
    const double eps[3][3] = {{0.0, a.z, -a.y}, {-a.z, 0.0, a.x}, {a.y, -a.x, 0.0}};
    const double inv_s2 = 1.0 / (scale_ * scale_);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            g[i][j] = inv_s2 * (b.h2 * y[j] * c[i] + b.h1 * eps[i][j]);
    return g;
}

Box TestField::support() const {
    const Vec3 r{scale_, scale_, scale_};
    return {center_ - r, center_ + r};
}

Vec3 cell_average(const CubeCovering& cov, const CellKey& kappa, int delta,
                  const std::function<Vec3(const Vec3&)>& u_eval, int samples_per_axis) {
    if (delta < 2) throw std::invalid_argument("cell_average: delta must be >= 2");
    const int m = samples_per_axis > 0 ? samples_per_axis : 2 * delta;
    const Box bounds = cov.cell_bounds(kappa);
    const Vec3 center = cov.cell_center(kappa);
    const double half = 0.5 * cov.lambda;
    const double inner = (1.0 - 1.0 / delta) * half;
    const double step = cov.lambda / m;

    Vec3 sum{};
    std::size_t count = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const Vec3 x{bounds.lo.x + (i + 0.5) * step, bounds.lo.y + (j + 0.5) * step,
                             bounds.lo.z + (k + 0.5) * step};
                if (norm_inf(x - center) < inner) continue;
                sum += u_eval(x);
                ++count;
            }
    if (count == 0) throw std::invalid_argument("cell_average: degenerate annulus");
    return sum / static_cast<double>(count);
}

double interior_drag_sum(const ParticleCloud& cloud, const CubeCovering& cov,
                         const TestField& w) {
    std::vector<bool> in_corridor(cloud.n, false);
    for (std::size_t idx : cov.corridor_indices) in_corridor[idx] = true;
    double s = 0.0;
    for (std::size_t i = 0; i < cloud.n; ++i) {
        if (in_corridor[i]) continue;
        s += dot(w.value(cloud.centers[i]), cloud.velocities[i]);
    }
    return kSixPi / static_cast<double>(cloud.n) * s;
}

double annulus_volume(double lambda, int delta) {
    const double t = 1.0 - 1.0 / delta;
    return lambda * lambda * lambda * (1.0 - t * t * t);
}

std::map<CellKey, Vec3> sigma_field(const ParticleCloud& cloud, const CubeCovering& cov,
                                    const TestField& w, int delta) {
    std::vector<bool> in_corridor(cloud.n, false);
    for (std::size_t idx : cov.corridor_indices) in_corridor[idx] = true;
    const double t = 1.0 - 1.0 / delta;
    const double prefactor = 1.0 / ((1.0 - t * t * t) * static_cast<double>(cloud.n) *
                                    cov.lambda * cov.lambda * cov.lambda);
    std::map<CellKey, Vec3> out;
    for (const auto& [key, cell] : cov.cells) {
        Vec3 s{};
        for (std::size_t i : cell.indices) {
            if (in_corridor[i]) continue;
            s += w.value(cloud.centers[i]);
        }
        out[key] = prefactor * s;
    }
    return out;
}

double budget_p21(std::size_t m, std::size_t n, double d_m, double w_norm) {
    if (m == 0) return 0.0;
    const double mn = static_cast<double>(m) / static_cast<double>(n);
    return w_norm * std::sqrt(mn) * (1.0 / static_cast<double>(n) + std::sqrt(mn / d_m));
}

double budget_p41(std::size_t n, double lambda, double d_min, int delta, std::size_t m_inf,
                  double energy, double w_norm) {
    if (delta < 4) throw std::invalid_argument("budget_p41: delta must be >= 4");
    const double nd = static_cast<double>(n);
    const double dd = static_cast<double>(delta);
    const double n23 = std::pow(nd, 2.0 / 3.0);
    const double l2 = lambda * lambda;
    const double l3 = l2 * lambda;
    const double bracket = 1.0 / dd + dd * l2 + std::cbrt(dd) * n23 * l2 * l2 +
                           n23 * l3 * l2 / (std::pow(dd, 2.0 / 3.0) * d_min) + l3 / d_min;
    return (1.0 + energy * energy) * static_cast<double>(m_inf) * std::sqrt(bracket) * w_norm;
}

WeakFormReport weak_form_experiment(const ParticleCloud& cloud, const TestField& w,
                                    const WeakFormConfig& cfg) {
    if (cfg.delta < 4) throw std::invalid_argument("weak_form_experiment: delta must be >= 4");
    const auto t_start = std::chrono::steady_clock::now();

    WeakFormReport rep;
    rep.n = cloud.n;
    rep.delta = cfg.delta;

    const DilutionReport diag = dilution_report(cloud, 0.0, cfg.thresholds);
    rep.lambda = diag.lambda;
    rep.d_min = diag.d_min;
    rep.m_sup = diag.m_sup;
    rep.energy = diag.energy;
    rep.small_n_regime = rep.lambda / cfg.delta < 4.0 / static_cast<double>(cloud.n);

    const double n_real = static_cast<double>(cloud.n);
    int m = cfg.grid_per_axis;
    if (m <= 0) m = std::max(2, static_cast<int>(std::lround(std::cbrt(n_real))));

    // Stokeslet superposition surrogate for the perforated-domain solution.
    StokesletSum sum;
    sum.a = n_real;
    sum.sources.reserve(cloud.n);
    for (std::size_t i = 0; i < cloud.n; ++i)
        sum.sources.push_back({cloud.centers[i], cloud.velocities[i]});

    // Left side: midpoint tensor quadrature of grad u_s : grad w over the box.
    // The point count is an odd multiple of the binning grid so that the grid
    // is symmetric about lattice-aligned particles; the leading quadrature
    // error near each ball is odd under reflection and cancels.
    int q_pts = cfg.lhs_points_per_axis;
    if (q_pts <= 0) q_pts = cfg.lhs_quad_factor * m;
    {
        const Vec3 lo = cloud.domain.lo;
        const Vec3 ext = cloud.domain.extent();
        const double dx = ext.x / q_pts, dy = ext.y / q_pts, dz = ext.z / q_pts;
        const double vol = dx * dy * dz;
        const double supp_r2 = w.scale() * w.scale();
        double acc = 0.0;
        for (int i = 0; i < q_pts; ++i)
            for (int j = 0; j < q_pts; ++j)
                for (int k = 0; k < q_pts; ++k) {
                    const Vec3 x{lo.x + (i + 0.5) * dx, lo.y + (j + 0.5) * dy,
                                 lo.z + (k + 0.5) * dz};
                    if (norm2(x - w.center()) >= supp_r2) continue;
                    acc += ddot(eval_sum_grad(sum, x), w.gradient(x));
                }
        rep.lhs = acc * vol;
    }

    // Covering decomposition: weights (1 + |v_i|^2)/N, corridor parameter
    // d = delta - 1 so the corridor width is lambda/delta.
    WeightedPoints pts;
    pts.points = cloud.centers;
    pts.weights.reserve(cloud.n);
    for (const Vec3& v : cloud.velocities) pts.weights.push_back((1.0 + norm2(v)) / n_real);
    const CubeCovering cov = build_covering(pts, rep.lambda, cfg.delta - 1);

    rep.interior_sum = interior_drag_sum(cloud, cov, w);

    const auto sigma = sigma_field(cloud, cov, w, cfg.delta);
    const double ann_vol = annulus_volume(rep.lambda, cfg.delta);
    auto u_s_eval = [&sum](const Vec3& x) { return eval_sum(sum, x).value; };
    double cell_sum = 0.0;
    for (const auto& [key, sig] : sigma) {
        if (norm2(sig) == 0.0) continue;
        const Vec3 ubar =
            cell_average(cov, key, cfg.delta, u_s_eval, cfg.cell_avg_samples);
        cell_sum += dot(sig, ubar);
    }
    rep.cell_avg_sum = kSixPi * cell_sum * ann_vol;

    // Right side: bin the empirical measure, solve the limiting system, and
    // pair (j - rho u) against w cell by cell.
    Grid grid{m, m, m, cloud.domain};
    const DensityFluxFields fields = bin_empirical(cloud, grid);
    const MacField mac = solve_brinkman(fields, cfg.solver);
    {
        const int sub = std::max(1, cfg.rhs_subsamples);
        const double sx = grid.hx() / sub, sy = grid.hy() / sub, sz = grid.hz() / sub;
        const double vol = sx * sy * sz;
        double acc = 0.0;
        for (int k = 0; k < grid.nz; ++k)
            for (int j = 0; j < grid.ny; ++j)
                for (int i = 0; i < grid.nx; ++i) {
                    const std::size_t cell = grid.cell_index(i, j, k);
                    const double rho_c = fields.rho[cell];
                    const Vec3 j_c = fields.j[cell];
                    if (rho_c == 0.0 && norm2(j_c) == 0.0) continue;
                    const Vec3 cell_lo{grid.box.lo.x + i * grid.hx(),
                                       grid.box.lo.y + j * grid.hy(),
                                       grid.box.lo.z + k * grid.hz()};
                    for (int a = 0; a < sub; ++a)
                        for (int b = 0; b < sub; ++b)
                            for (int c = 0; c < sub; ++c) {
                                const Vec3 x{cell_lo.x + (a + 0.5) * sx,
                                             cell_lo.y + (b + 0.5) * sy,
                                             cell_lo.z + (c + 0.5) * sz};
                                const Vec3 wx = w.value(x);
                                if (norm2(wx) == 0.0) continue;
                                acc += dot(j_c - rho_c * eval_field(mac, x), wx) * vol;
                            }
                }
        rep.rhs = kSixPi * acc;
    }

    rep.residual = std::abs(rep.lhs - rep.rhs);

    const double w_norm = w.w1inf_norm();
    for (const auto& [key, cell] : cov.cells) {
        rep.budget_p21_max = std::max(
            rep.budget_p21_max, budget_p21(cell.indices.size(), cloud.n, rep.d_min, w_norm));
    }
    rep.budget_p41 =
        budget_p41(cloud.n, rep.lambda, rep.d_min, cfg.delta, rep.m_sup, rep.energy, w_norm);

    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

}  // namespace brinkhom
