#include "brinkhom/brinkman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace brinkhom {

namespace {

constexpr double kSixPi = 6.0 * std::numbers::pi;

int clamp_cell(int i, int n) { return std::min(std::max(i, 0), n - 1); }

// Flat storage for the three staggered velocity components; boundary faces are
// present in the arrays but kept at zero throughout.
struct FaceVec {
    std::vector<double> x, y, z;

    static FaceVec zeros(const Grid& g) {
        FaceVec v;
        v.x.assign(static_cast<std::size_t>(g.nx + 1) * g.ny * g.nz, 0.0);
        v.y.assign(static_cast<std::size_t>(g.nx) * (g.ny + 1) * g.nz, 0.0);
        v.z.assign(static_cast<std::size_t>(g.nx) * g.ny * (g.nz + 1), 0.0);
        return v;
    }
};

double dot(const FaceVec& a, const FaceVec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i) s += a.x[i] * b.x[i];
    for (std::size_t i = 0; i < a.y.size(); ++i) s += a.y[i] * b.y[i];
    for (std::size_t i = 0; i < a.z.size(); ++i) s += a.z[i] * b.z[i];
    return s;
}

void axpy(double alpha, const FaceVec& x, FaceVec& y) {
    for (std::size_t i = 0; i < x.x.size(); ++i) y.x[i] += alpha * x.x[i];
    for (std::size_t i = 0; i < x.y.size(); ++i) y.y[i] += alpha * x.y[i];
    for (std::size_t i = 0; i < x.z.size(); ++i) y.z[i] += alpha * x.z[i];
}

void scale_add(double beta, FaceVec& p, const FaceVec& r) {
    // p <- r + beta p
    for (std::size_t i = 0; i < p.x.size(); ++i) p.x[i] = r.x[i] + beta * p.x[i];
    for (std::size_t i = 0; i < p.y.size(); ++i) p.y[i] = r.y[i] + beta * p.y[i];
    for (std::size_t i = 0; i < p.z.size(); ++i) p.z[i] = r.z[i] + beta * p.z[i];
}

double max_abs(const FaceVec& a) {
    double m = 0.0;
    for (double v : a.x) m = std::max(m, std::abs(v));
    for (double v : a.y) m = std::max(m, std::abs(v));
    for (double v : a.z) m = std::max(m, std::abs(v));
    return m;
}

// Shared indexing/stencil machinery for the velocity operator
//   A u = -Lap u + 6 pi rho_face u
// with homogeneous Dirichlet walls: normal faces on the wall are zero array
// entries, tangential no-slip enters through ghost reflection (ghost = -u),
// which turns the usual -2 center weight into -3 next to a wall.
struct Solver {
    Grid g;
    double hx, hy, hz;
    FaceVec rho_face;  // cell-mean density seen by each interior face

    explicit Solver(const DensityFluxFields& fields) : g(fields.grid) {
        hx = g.hx();
        hy = g.hy();
        hz = g.hz();
        rho_face = FaceVec::zeros(g);
        const auto& rho = fields.rho;
        for (int k = 0; k < g.nz; ++k)
            for (int j = 0; j < g.ny; ++j)
                for (int i = 1; i < g.nx; ++i)
                    rho_face.x[xi(i, j, k)] =
                        0.5 * (rho[g.cell_index(i - 1, j, k)] + rho[g.cell_index(i, j, k)]);
        for (int k = 0; k < g.nz; ++k)
            for (int j = 1; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    rho_face.y[yi(i, j, k)] =
                        0.5 * (rho[g.cell_index(i, j - 1, k)] + rho[g.cell_index(i, j, k)]);
        for (int k = 1; k < g.nz; ++k)
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    rho_face.z[zi(i, j, k)] =
                        0.5 * (rho[g.cell_index(i, j, k - 1)] + rho[g.cell_index(i, j, k)]);
    }

    std::size_t xi(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * g.ny + j) * (g.nx + 1) + i;
    }
    std::size_t yi(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * (g.ny + 1) + j) * g.nx + i;
    }
    std::size_t zi(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * g.ny + j) * g.nx + i;
    }

    // One component's 7-point stencil. `along` marks the staggering axis where
    // wall values sit in the array; the other two axes use ghost reflection.
    double lap_entry(const std::vector<double>& u, int i, int j, int k, int axis) const {
        auto at = [&](int ii, int jj, int kk) {
            switch (axis) {
                case 0: return u[xi(ii, jj, kk)];
                case 1: return u[yi(ii, jj, kk)];
                default: return u[zi(ii, jj, kk)];
            }
        };
        const double c = at(i, j, k);
        double s = 0.0;
        // x-direction
        {
            const int lim = (axis == 0) ? g.nx : g.nx - 1;
            double lo = (i > 0) ? at(i - 1, j, k) : (axis == 0 ? 0.0 : -c);
            double hi2 = (i < lim) ? at(i + 1, j, k) : (axis == 0 ? 0.0 : -c);
            s += (lo - 2.0 * c + hi2) / (hx * hx);
        }
        // y-direction
        {
            const int lim = (axis == 1) ? g.ny : g.ny - 1;
            double lo = (j > 0) ? at(i, j - 1, k) : (axis == 1 ? 0.0 : -c);
            double hi2 = (j < lim) ? at(i, j + 1, k) : (axis == 1 ? 0.0 : -c);
            s += (lo - 2.0 * c + hi2) / (hy * hy);
        }
        // z-direction
        {
            const int lim = (axis == 2) ? g.nz : g.nz - 1;
            double lo = (k > 0) ? at(i, j, k - 1) : (axis == 2 ? 0.0 : -c);
            double hi2 = (k < lim) ? at(i, j, k + 1) : (axis == 2 ? 0.0 : -c);
            s += (lo - 2.0 * c + hi2) / (hz * hz);
        }
        return s;
    }

    void apply_A(const FaceVec& u, FaceVec& out) const {
        for (int k = 0; k < g.nz; ++k)
            for (int j = 0; j < g.ny; ++j)
                for (int i = 1; i < g.nx; ++i) {
                    const std::size_t f = xi(i, j, k);
                    out.x[f] = -lap_entry(u.x, i, j, k, 0) + kSixPi * rho_face.x[f] * u.x[f];
                }
        for (int k = 0; k < g.nz; ++k)
            for (int j = 1; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const std::size_t f = yi(i, j, k);
                    out.y[f] = -lap_entry(u.y, i, j, k, 1) + kSixPi * rho_face.y[f] * u.y[f];
                }
        for (int k = 1; k < g.nz; ++k)
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const std::size_t f = zi(i, j, k);
                    out.z[f] = -lap_entry(u.z, i, j, k, 2) + kSixPi * rho_face.z[f] * u.z[f];
                }
    }

    void divergence(const FaceVec& u, std::vector<double>& out) const {
        out.assign(g.num_cells(), 0.0);
        for (int k = 0; k < g.nz; ++k)
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    out[g.cell_index(i, j, k)] =
                        (u.x[xi(i + 1, j, k)] - u.x[xi(i, j, k)]) / hx +
                        (u.y[yi(i, j + 1, k)] - u.y[yi(i, j, k)]) / hy +
                        (u.z[zi(i, j, k + 1)] - u.z[zi(i, j, k)]) / hz;
                }
    }

    void gradient(const std::vector<double>& p, FaceVec& out) const {
        out = FaceVec::zeros(g);
        for (int k = 0; k < g.nz; ++k)
            for (int j = 0; j < g.ny; ++j)
                for (int i = 1; i < g.nx; ++i)
                    out.x[xi(i, j, k)] =
                        (p[g.cell_index(i, j, k)] - p[g.cell_index(i - 1, j, k)]) / hx;
        for (int k = 0; k < g.nz; ++k)
            for (int j = 1; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    out.y[yi(i, j, k)] =
                        (p[g.cell_index(i, j, k)] - p[g.cell_index(i, j - 1, k)]) / hy;
        for (int k = 1; k < g.nz; ++k)
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    out.z[zi(i, j, k)] =
                        (p[g.cell_index(i, j, k)] - p[g.cell_index(i, j, k - 1)]) / hz;
    }

    // CG for A u = f, warm-started from u.
    int solve_A(const FaceVec& f, FaceVec& u, double tol, int max_iter) const {
        FaceVec r = FaceVec::zeros(g);
        apply_A(u, r);
        for (std::size_t i = 0; i < r.x.size(); ++i) r.x[i] = f.x[i] - r.x[i];
        for (std::size_t i = 0; i < r.y.size(); ++i) r.y[i] = f.y[i] - r.y[i];
        for (std::size_t i = 0; i < r.z.size(); ++i) r.z[i] = f.z[i] - r.z[i];
        double rr = dot(r, r);
        const double fnorm = std::sqrt(dot(f, f));
        const double target = std::max(tol * fnorm, 1e-300);
        FaceVec p = r;
        FaceVec ap = FaceVec::zeros(g);
        int it = 0;
        while (std::sqrt(rr) > target && it < max_iter) {
            apply_A(p, ap);
            const double alpha = rr / dot(p, ap);
            axpy(alpha, p, u);
            axpy(-alpha, ap, r);
            const double rr_new = dot(r, r);
            scale_add(rr_new / rr, p, r);
            rr = rr_new;
            ++it;
        }
        return it;
    }
};

void subtract_mean(std::vector<double>& p) {
    double mean = 0.0;
    for (double v : p) mean += v;
    mean /= static_cast<double>(p.size());
    for (double& v : p) v -= mean;
}

}  // namespace

DensityFluxFields bin_empirical(const ParticleCloud& cloud, const Grid& grid,
                                Deposition deposition) {
    DensityFluxFields out;
    out.grid = grid;
    out.rho.assign(grid.num_cells(), 0.0);
    out.j.assign(grid.num_cells(), Vec3{});
    if (cloud.n == 0) throw std::invalid_argument("empty configuration");
    const double w = 1.0 / (static_cast<double>(cloud.n) * grid.cell_volume());
    const Vec3 lo = grid.box.lo;
    const double hx = grid.hx(), hy = grid.hy(), hz = grid.hz();
    for (std::size_t idx = 0; idx < cloud.n; ++idx) {
        const Vec3& c = cloud.centers[idx];
        if (!grid.box.contains(c)) throw std::invalid_argument("particle outside grid");
        if (deposition == Deposition::NearestCell) {
            int i = clamp_cell(static_cast<int>(std::floor((c.x - lo.x) / hx)), grid.nx);
            int j = clamp_cell(static_cast<int>(std::floor((c.y - lo.y) / hy)), grid.ny);
            int k = clamp_cell(static_cast<int>(std::floor((c.z - lo.z) / hz)), grid.nz);
            const std::size_t cell = grid.cell_index(i, j, k);
            out.rho[cell] += w;
            out.j[cell] += w * cloud.velocities[idx];
        } else {
            // cloud-in-cell relative to cell centers; weight that would fall
            // past the wall is folded onto the clamped cell
            const double gx = (c.x - lo.x) / hx - 0.5;
            const double gy = (c.y - lo.y) / hy - 0.5;
            const double gz = (c.z - lo.z) / hz - 0.5;
            const int i0 = static_cast<int>(std::floor(gx));
            const int j0 = static_cast<int>(std::floor(gy));
            const int k0 = static_cast<int>(std::floor(gz));
            const double fx = gx - i0, fy = gy - j0, fz = gz - k0;
            const double wx[2] = {1.0 - fx, fx};
            const double wy[2] = {1.0 - fy, fy};
            const double wz[2] = {1.0 - fz, fz};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int d = 0; d < 2; ++d) {
                        const double ww = w * wx[a] * wy[b] * wz[d];
                        if (ww == 0.0) continue;
                        const std::size_t cell =
                            grid.cell_index(clamp_cell(i0 + a, grid.nx),
                                            clamp_cell(j0 + b, grid.ny),
                                            clamp_cell(k0 + d, grid.nz));
                        out.rho[cell] += ww;
                        out.j[cell] += ww * cloud.velocities[idx];
                    }
        }
    }
    return out;
}

MacField solve_brinkman(const DensityFluxFields& fields, const BrinkmanSolveOptions& opts) {
    const Grid& g = fields.grid;
    if (g.nx < 2 || g.ny < 2 || g.nz < 2)
        throw std::invalid_argument("solve_brinkman: grid must be at least 2 cells per axis");
    for (double r : fields.rho)
        if (r < 0.0) throw std::invalid_argument("solve_brinkman: rho must be nonnegative");

    Solver s(fields);

    // Forcing 6 pi j, averaged from cells to interior faces.
    FaceVec f = FaceVec::zeros(g);
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i)
                f.x[s.xi(i, j, k)] = kSixPi * 0.5 *
                                     (fields.j[g.cell_index(i - 1, j, k)].x +
                                      fields.j[g.cell_index(i, j, k)].x);
    for (int k = 0; k < g.nz; ++k)
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                f.y[s.yi(i, j, k)] = kSixPi * 0.5 *
                                     (fields.j[g.cell_index(i, j - 1, k)].y +
                                      fields.j[g.cell_index(i, j, k)].y);
    for (int k = 1; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                f.z[s.zi(i, j, k)] = kSixPi * 0.5 *
                                     (fields.j[g.cell_index(i, j, k - 1)].z +
                                      fields.j[g.cell_index(i, j, k)].z);

    // u(p) = A^{-1}(f - G p); outer CG on the negated pressure Schur
    // complement S = -div A^{-1} grad (SPD on zero-mean pressures), solving
    // S p = -div A^{-1} f. The CG residual r = -div u(p) is then exactly the
    // negated divergence of the reconstructed velocity.
    FaceVec u = FaceVec::zeros(g);
    s.solve_A(f, u, opts.inner_tol, opts.max_inner);

    std::vector<double> b;
    s.divergence(u, b);
    subtract_mean(b);
    for (double& v : b) v = -v;

    const std::size_t nc = g.num_cells();
    std::vector<double> p(nc, 0.0), r = b, q(nc, 0.0), sp;
    FaceVec gq = FaceVec::zeros(g), aq = FaceVec::zeros(g);
    double rr = 0.0;
    for (double v : r) rr += v * v;
    const double b_norm = std::sqrt(rr);
    std::vector<double> dir = r;
    std::vector<double> history;

    // Stop on the actual divergence of the reconstructed velocity, which is
    // exactly the outer residual.
    double div_res = 0.0;
    for (double v : r) div_res = std::max(div_res, std::abs(v));
    history.push_back(div_res);

    int outer = 0;
    while (div_res > opts.tol && outer < opts.max_outer && b_norm > 0.0) {
        s.gradient(dir, gq);
        aq = FaceVec::zeros(g);
        s.solve_A(gq, aq, opts.inner_tol, opts.max_inner);
        s.divergence(aq, q);
        subtract_mean(q);
        for (double& v : q) v = -v;  // q = S dir
        double dq = 0.0;
        for (std::size_t i = 0; i < nc; ++i) dq += dir[i] * q[i];
        if (dq <= 0.0) break;  // stagnation; final residual check decides
        const double alpha = rr / dq;
        for (std::size_t i = 0; i < nc; ++i) p[i] += alpha * dir[i];
        axpy(-alpha, aq, u);  // u accumulates A^{-1}(f - G p)
        for (std::size_t i = 0; i < nc; ++i) r[i] -= alpha * q[i];
        double rr_new = 0.0;
        for (double v : r) rr_new += v * v;
        const double beta = rr_new / rr;
        for (std::size_t i = 0; i < nc; ++i) dir[i] = r[i] + beta * dir[i];
        rr = rr_new;

        div_res = 0.0;
        for (double v : r) div_res = std::max(div_res, std::abs(v));
        history.push_back(div_res);
        ++outer;
    }

    subtract_mean(p);

    // Recompute u and both residuals from the final pressure.
    FaceVec gp = FaceVec::zeros(g);
    s.gradient(p, gp);
    FaceVec rhs = f;
    axpy(-1.0, gp, rhs);
    s.solve_A(rhs, u, opts.inner_tol, opts.max_inner);

    FaceVec au = FaceVec::zeros(g);
    s.apply_A(u, au);
    axpy(-1.0, rhs, au);  // au = A u - (f - G p)
    const double mom_res = max_abs(au);
    std::vector<double> divu;
    s.divergence(u, divu);
    double final_div = 0.0;
    for (double v : divu) final_div = std::max(final_div, std::abs(v));

    if (final_div > opts.tol || mom_res > opts.tol) {
        history.push_back(final_div);
        throw NonConvergence("solve_brinkman: residual target not reached", history);
    }

    MacField out;
    out.grid = g;
    out.ux = std::move(u.x);
    out.uy = std::move(u.y);
    out.uz = std::move(u.z);
    out.p = std::move(p);
    out.momentum_residual = mom_res;
    out.divergence_residual = final_div;
    return out;
}

Vec3 eval_field(const MacField& fld, const Vec3& x) {
    const Grid& g = fld.grid;
    if (!g.box.contains(x)) throw std::invalid_argument("eval_field: point outside the box");
    const double hx = g.hx(), hy = g.hy(), hz = g.hz();
    const Vec3 rel = x - g.box.lo;

    // Per component: linear along the staggered axis between face planes,
    // linear across face-center lines transversally with the walls (value 0)
    // closing the outer half cells. Each axis contributes two nodes; a node
    // index of -1 marks a wall.
    struct AxisNodes {
        int idx[2];
        double w[2];
    };
    auto along = [](double c, int n) {
        AxisNodes a;
        int i0 = std::min(std::max(static_cast<int>(std::floor(c)), 0), n - 1);
        const double t = c - i0;
        a.idx[0] = i0;
        a.idx[1] = i0 + 1;
        a.w[0] = 1.0 - t;
        a.w[1] = t;
        return a;
    };
    auto transverse = [](double c, int n) {
        AxisNodes a;
        if (c <= 0.5) {
            const double t = std::max(c, 0.0) * 2.0;  // wall at 0, first line at 0.5
            a.idx[0] = -1;
            a.idx[1] = 0;
            a.w[0] = 1.0 - t;
            a.w[1] = t;
        } else if (c >= n - 0.5) {
            const double t = std::min((c - (n - 0.5)) * 2.0, 1.0);
            a.idx[0] = n - 1;
            a.idx[1] = -1;
            a.w[0] = 1.0 - t;
            a.w[1] = t;
        } else {
            const double s = c - 0.5;
            const int i0 = static_cast<int>(std::floor(s));
            const double t = s - i0;
            a.idx[0] = i0;
            a.idx[1] = i0 + 1;
            a.w[0] = 1.0 - t;
            a.w[1] = t;
        }
        return a;
    };

    const double cx = rel.x / hx, cy = rel.y / hy, cz = rel.z / hz;
    auto interp = [&](const std::vector<double>& arr, int axis) {
        const AxisNodes ax = (axis == 0) ? along(cx, g.nx) : transverse(cx, g.nx);
        const AxisNodes ay = (axis == 1) ? along(cy, g.ny) : transverse(cy, g.ny);
        const AxisNodes az = (axis == 2) ? along(cz, g.nz) : transverse(cz, g.nz);
        double result = 0.0;
        for (int di = 0; di < 2; ++di)
            for (int dj = 0; dj < 2; ++dj)
                for (int dk = 0; dk < 2; ++dk) {
                    const double w = ax.w[di] * ay.w[dj] * az.w[dk];
                    const int i = ax.idx[di], j = ay.idx[dj], k = az.idx[dk];
                    if (w == 0.0 || i < 0 || j < 0 || k < 0) continue;
                    double v;
                    if (axis == 0)
                        v = arr[(static_cast<std::size_t>(k) * g.ny + j) * (g.nx + 1) + i];
                    else if (axis == 1)
                        v = arr[(static_cast<std::size_t>(k) * (g.ny + 1) + j) * g.nx + i];
                    else
                        v = arr[(static_cast<std::size_t>(k) * g.ny + j) * g.nx + i];
                    result += w * v;
                }
        return result;
    };

    return {interp(fld.ux, 0), interp(fld.uy, 1), interp(fld.uz, 2)};
}

EnergyIdentity energy_identity(const MacField& fld, const DensityFluxFields& fields) {
    Solver s(fields);
    const Grid& g = fields.grid;
    FaceVec u;
    u.x = fld.ux;
    u.y = fld.uy;
    u.z = fld.uz;
    FaceVec au = FaceVec::zeros(g);
    s.apply_A(u, au);
    const double vol = g.cell_volume();

    EnergyIdentity e;
    double damping = 0.0;
    for (std::size_t i = 0; i < u.x.size(); ++i)
        damping += s.rho_face.x[i] * u.x[i] * u.x[i];
    for (std::size_t i = 0; i < u.y.size(); ++i)
        damping += s.rho_face.y[i] * u.y[i] * u.y[i];
    for (std::size_t i = 0; i < u.z.size(); ++i)
        damping += s.rho_face.z[i] * u.z[i] * u.z[i];
    e.damping = kSixPi * damping * vol;
    e.grad_energy = dot(u, au) * vol - e.damping;

    double work = 0.0;
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i)
                work += 0.5 *
                        (fields.j[g.cell_index(i - 1, j, k)].x +
                         fields.j[g.cell_index(i, j, k)].x) *
                        u.x[s.xi(i, j, k)];
    for (int k = 0; k < g.nz; ++k)
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                work += 0.5 *
                        (fields.j[g.cell_index(i, j - 1, k)].y +
                         fields.j[g.cell_index(i, j, k)].y) *
                        u.y[s.yi(i, j, k)];
    for (int k = 1; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                work += 0.5 *
                        (fields.j[g.cell_index(i, j, k - 1)].z +
                         fields.j[g.cell_index(i, j, k)].z) *
                        u.z[s.zi(i, j, k)];
    e.work = kSixPi * work * vol;
    return e;
}

}  // namespace brinkhom
