#pragma once

#include <map>

#include "brinkhom/brinkman.hpp"
#include "brinkhom/cloud.hpp"
#include "brinkhom/covering.hpp"
#include "brinkhom/stokeslet.hpp"

namespace brinkhom {

/// Divergence-free smooth test field w = curl(phi((x - c)/s) A) = grad phi x A,
/// where phi(r) = exp(1 - 1/(1 - r^2)) is the standard bump (peak value 1)
/// supported in the unit ball. Support of w is the ball B(c, s).
class TestField {
  public:
    TestField(const Vec3& center, double scale, const Vec3& amplitude);

    Vec3 value(const Vec3& x) const;
    Mat3 gradient(const Vec3& x) const;

    const Vec3& center() const { return center_; }
    double scale() const { return scale_; }
    const Vec3& amplitude() const { return amplitude_; }

    /// Sup-norm bounds obtained by dense radial sampling of the profile.
    double w_inf() const { return w_inf_; }
    double grad_w_inf() const { return grad_w_inf_; }
    double w1inf_norm() const { return std::max(w_inf_, grad_w_inf_); }

    /// Bounding box of the support ball.
    Box support() const;

  private:
    Vec3 center_;
    double scale_;
    Vec3 amplitude_;
    double w_inf_ = 0.0, grad_w_inf_ = 0.0;
};

/// Average of u_eval over the l-infinity annulus A(x_kappa, (1-1/delta)*lambda/2,
/// lambda/2) just inside the cell boundary, by midpoint sampling of the cell
/// with samples_per_axis points per axis (0 means 2*delta, which places exactly
/// the outermost midpoint shell in the annulus).
Vec3 cell_average(const CubeCovering& cov, const CellKey& kappa, int delta,
                  const std::function<Vec3(const Vec3&)>& u_eval, int samples_per_axis = 0);

/// (6 pi / N) sum over non-corridor particles of w(h_i) . v_i.
double interior_drag_sum(const ParticleCloud& cloud, const CubeCovering& cov,
                         const TestField& w);

/// Per-cell binned test-field weights: sigma_kappa = (1 - (1-1/delta)^3)^{-1}
/// (N lambda^3)^{-1} sum over the cell's non-corridor particles of w(h_i).
/// As a piecewise-constant field on the annuli this has L^1 mass at most
/// sup|w|.
std::map<CellKey, Vec3> sigma_field(const ParticleCloud& cloud, const CubeCovering& cov,
                                    const TestField& w, int delta);

/// Volume of one l-infinity annulus: lambda^3 (1 - (1-1/delta)^3).
double annulus_volume(double lambda, int delta);

/// Truncation-error budget sqrt(M/N) (1/N + sqrt(M/(N d_m))) * w_norm, unit
/// leading constant.
double budget_p21(std::size_t m, std::size_t n, double d_m, double w_norm);

/// Decomposition-error budget (1+E^2) M (1/delta + delta lambda^2
/// + delta^{1/3} N^{2/3} lambda^4 + N^{2/3} lambda^5 / (delta^{2/3} d_min)
/// + lambda^3 / d_min)^{1/2} * w_norm, unit leading constant.
double budget_p41(std::size_t n, double lambda, double d_min, int delta, std::size_t m_inf,
                  double energy, double w_norm);

struct WeakFormConfig {
    int delta = 4;
    int grid_per_axis = 0;      // Brinkman grid cells per axis; 0: round(N^{1/3})
    int lhs_quad_factor = 11;   // odd; lhs quadrature uses factor*grid points per axis
    int lhs_points_per_axis = 0;  // override; 0: lhs_quad_factor * grid_per_axis
    int rhs_subsamples = 1;     // per-axis quadrature points per cell for the rhs
    int cell_avg_samples = 0;   // 0: 2*delta
    VerdictThresholds thresholds;
    BrinkmanSolveOptions solver;
};

struct WeakFormReport {
    std::size_t n = 0;
    double lambda = 0.0;
    double d_min = 0.0;
    std::size_t m_sup = 0;
    double energy = 0.0;
    int delta = 0;
    double lhs = 0.0;           // quadrature of grad u_s : grad w
    double rhs = 0.0;           // 6 pi integral of (j - rho u) . w via the solver
    double interior_sum = 0.0;  // (6 pi / N) sum_{i not in corridor} w(h_i) . v_i
    double cell_avg_sum = 0.0;  // 6 pi sum_kappa sigma_kappa . u_bar_kappa * annulus vol
    double residual = 0.0;      // |lhs - rhs|
    double budget_p21_max = 0.0;
    double budget_p41 = 0.0;
    double wall_time_s = 0.0;
    bool small_n_regime = false;  // lambda/delta < 4/N: below the theorem's scale
};

/// Runs the full chain on one cloud: stokeslet-superposition left side,
/// covering decomposition diagnostics, Brinkman-solver right side, and both
/// error budgets.
WeakFormReport weak_form_experiment(const ParticleCloud& cloud, const TestField& w,
                                    const WeakFormConfig& cfg = {});

}  // namespace brinkhom
