#include "wakescan/solver.hpp"

#include "wakescan/transform.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wakescan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Zero the residual at masked pixels so the data term only sees pixels that
// were actually observed.
Eigen::ArrayXXd masked_residual(const Eigen::ArrayXXd& reconstruction, const Image& y) {
    Eigen::ArrayXXd resid = reconstruction - y.pixels();
    if (y.has_mask()) resid = y.mask().select(resid, 0.0);
    return resid;
}

Image with_mask_of(Eigen::ArrayXXd values, const Image& y) {
    Image img(std::move(values));
    if (y.has_mask()) img.set_mask(y.mask());
    return img;
}

double penalty_value(const Eigen::ArrayXXd& x, const PriorSpec& prior) {
    switch (prior.kind) {
        case PriorKind::L1: return x.abs().sum();
        case PriorKind::Lp: return x.abs().pow(prior.p).sum();
        case PriorKind::TV: return tv_norm(x);
        case PriorKind::Nuclear: return nuclear_norm(x);
        case PriorKind::GMC:
            throw std::invalid_argument("map_cost: GMC cost is gmc_cost(X, v, ...)");
    }
    throw std::invalid_argument("unknown prior kind");
}

// Trips on sustained geometric cost growth: 20 consecutive iterations that
// each grow the cost by at least 10% while above 10x the initial value, a
// non-finite cost, or an astronomic blow-up. The GMC saddle cost rises to its
// saddle value through a bounded transient, so a level check alone would
// misfire on healthy runs.
class DivergenceGuard {
public:
    void observe(double cost) {
        if (!std::isfinite(cost)) fail();
        const double a = std::abs(cost);
        if (!armed_) {
            base_ = std::max(a, 1e-12);
            previous_ = a;
            armed_ = true;
            return;
        }
        if (a > 1e12 * std::max(base_, 1.0)) fail();
        streak_ = (a > 10.0 * base_ && a > 1.1 * previous_) ? streak_ + 1 : 0;
        previous_ = a;
        if (streak_ >= 20) fail();
    }

private:
    [[noreturn]] static void fail() {
        throw std::runtime_error(
            "solver diverged: cost grew past 10x its initial value for 20 "
            "consecutive iterations; mu is too large for the discretized "
            "operator norm");
    }

    bool armed_ = false;
    double base_ = 0.0;
    double previous_ = 0.0;
    int streak_ = 0;
};

double update_rel_change(const Eigen::ArrayXXd& next, const Eigen::ArrayXXd& cur) {
    const double dn = (next - cur).matrix().norm();
    if (dn == 0.0) return 0.0;  // exactly unchanged iterate counts as converged
    const double cn = cur.matrix().norm();
    return cn == 0.0 ? kInf : dn / cn;
}

}  // namespace

void SolverConfig::validate() const {
    if (!(mu > 0.0 && mu < 1.9))
        throw std::invalid_argument("SolverConfig: mu must be in (0, 1.9)");
    if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
    if (max_iter <= 0) throw std::invalid_argument("SolverConfig: max_iter must be positive");
    prior.validate();
    grid.validate();
}

double relative_change(const Sinogram& current, const Sinogram& previous) {
    if (current.values.rows() != previous.values.rows() ||
        current.values.cols() != previous.values.cols())
        throw std::invalid_argument("relative_change: shape mismatch");
    const double pn = previous.values.matrix().norm();
    if (pn == 0.0) return kInf;
    return (current.values - previous.values).matrix().norm() / pn;
}

Image standardize(const Image& y) {
    y.validate();
    const double mean = y.unmasked_mean();
    double var = 0.0;
    long n = 0;
    for (long j = 0; j < y.pixels().cols(); ++j)
        for (long i = 0; i < y.pixels().rows(); ++i)
            if (y.is_unmasked(static_cast<int>(i), static_cast<int>(j))) {
                const double d = y.pixels()(i, j) - mean;
                var += d * d;
                ++n;
            }
    const double sd = std::sqrt(var / static_cast<double>(n));
    const double scale = sd > 0.0 ? sd : 1.0;

    Image out(Eigen::ArrayXXd::Zero(y.size(), y.size()));
    for (long j = 0; j < y.pixels().cols(); ++j)
        for (long i = 0; i < y.pixels().rows(); ++i)
            if (y.is_unmasked(static_cast<int>(i), static_cast<int>(j)))
                out.pixels()(i, j) = (y.pixels()(i, j) - mean) / scale;
    if (y.has_mask()) out.set_mask(y.mask());
    return out;
}

double gmc_cost(const Sinogram& x, const Sinogram& v, const Image& y, double lambda,
                double gamma) {
    if (!(lambda > 0.0)) throw std::invalid_argument("gmc_cost: lambda must be positive");
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("gmc_cost: gamma must be in [0, 1]");
    if (x.values.rows() != v.values.rows() || x.values.cols() != v.values.cols())
        throw std::invalid_argument("gmc_cost: X and v shapes differ");
    y.validate();

    const Image cx = inverse_radon(x, y.size());
    const double fidelity = masked_residual(cx.pixels(), y).matrix().squaredNorm();
    const Sinogram diff{x.grid, x.values - v.values};
    const Image cdiff = inverse_radon(diff, y.size());
    return fidelity + lambda * x.values.abs().sum() - lambda * v.values.abs().sum() -
           gamma * cdiff.pixels().matrix().squaredNorm();
}

double map_cost(const Sinogram& x, const Image& y, const PriorSpec& prior) {
    prior.validate();
    const Image cx = inverse_radon(x, y.size());
    const double fidelity = masked_residual(cx.pixels(), y).matrix().squaredNorm();
    return fidelity + prior.lambda * penalty_value(x.values, prior);
}

SolverResult solve_fb_gmc(const Image& y, const SolverConfig& config) {
    config.validate();
    y.validate();
    if (config.prior.kind != PriorKind::GMC)
        throw std::invalid_argument("solve_fb_gmc: prior must be GMC");

    const int m = y.size();
    const AngleGrid grid = config.grid;
    const int r_count = Sinogram::offsets_for(m);
    const double lambda = config.prior.lambda;
    const double gamma = config.prior.gamma;
    const double mu = config.mu;

    Eigen::ArrayXXd x = Eigen::ArrayXXd::Zero(r_count, grid.count);
    Eigen::ArrayXXd v = x;

    SolverResult result;
    DivergenceGuard guard;

    auto iterate_cost = [&](const Image& cx, const Image& cvx) {
        return masked_residual(cx.pixels(), y).matrix().squaredNorm() +
               lambda * (x.abs().sum() - v.abs().sum()) -
               gamma * cvx.pixels().matrix().squaredNorm();
    };

    while (result.iterations < config.max_iter) {
        // C(X + gamma (v - X)) = CX + gamma C(v - X); both pieces feed the
        // cost, the w step and the u step.
        const Image cvx = inverse_radon(Sinogram{grid, v - x}, m);
        const Image cx = inverse_radon(Sinogram{grid, x}, m);

        const double cost = iterate_cost(cx, cvx);
        result.cost_trace.push_back(cost);
        guard.observe(cost);

        Eigen::ArrayXXd resid = cx.pixels() + gamma * cvx.pixels() - y.pixels();
        if (y.has_mask()) resid = y.mask().select(resid, 0.0);
        const Sinogram grad_w = radon(with_mask_of(std::move(resid), y), grid);
        const Sinogram grad_u = radon(Image(cvx.pixels()), grid);

        Eigen::ArrayXXd x_next = soft_threshold((x - mu * grad_w.values).eval(), mu * lambda);
        Eigen::ArrayXXd v_next = soft_threshold((v - mu * gamma * grad_u.values).eval(), mu * lambda);

        const double rel = update_rel_change(x_next, x);
        result.rel_trace.push_back(rel);
        result.final_rel_change = rel;
        x = std::move(x_next);
        v = std::move(v_next);
        ++result.iterations;
        if (rel <= config.tol) {
            result.converged = true;
            break;
        }
    }

    result.estimate = Sinogram{grid, x};
    const Image cx = inverse_radon(result.estimate, m);
    const Image cvx = inverse_radon(Sinogram{grid, v - x}, m);
    result.cost_trace.push_back(iterate_cost(cx, cvx));
    return result;
}

SolverResult solve_twist(const Image& y, const SolverConfig& config) {
    config.validate();
    y.validate();
    if (config.prior.kind == PriorKind::GMC)
        throw std::invalid_argument("solve_twist: GMC uses solve_fb_gmc");

    const int m = y.size();
    const AngleGrid grid = config.grid;
    const int r_count = Sinogram::offsets_for(m);
    const double alpha = config.alpha;
    const double lambda = config.prior.lambda;

    const auto cost_of = [&](const Eigen::ArrayXXd& iterate, const Image& reconstruction) {
        return masked_residual(reconstruction.pixels(), y).matrix().squaredNorm() +
               lambda * penalty_value(iterate, config.prior);
    };

    Eigen::ArrayXXd x_prev = Eigen::ArrayXXd::Zero(r_count, grid.count);
    Eigen::ArrayXXd x = twist_gamma(x_prev, config.prior);
    Image cx = inverse_radon(Sinogram{grid, x}, m);
    double cost = cost_of(x, cx);

    SolverResult result;
    DivergenceGuard guard;
    result.cost_trace.push_back(cost);
    guard.observe(cost);

    while (result.iterations < config.max_iter) {
        Eigen::ArrayXXd resid = y.pixels() - cx.pixels();
        if (y.has_mask()) resid = y.mask().select(resid, 0.0);
        const Sinogram grad = radon(with_mask_of(std::move(resid), y), grid);
        const Eigen::ArrayXXd w = x + grad.values;
        Eigen::ArrayXXd shrunk = twist_gamma(w, config.prior);

        // Two-step candidate. The discrete pair (radon, FBP) is not an exact
        // transpose, so the over-relaxed step can raise the cost; fall back
        // to the plain shrinkage iterate whenever it does.
        Eigen::ArrayXXd candidate = (1.0 - alpha) * x_prev - alpha * x + 2.0 * alpha * shrunk;
        Image c_candidate = inverse_radon(Sinogram{grid, candidate}, m);
        double cost_candidate = cost_of(candidate, c_candidate);
        if (cost_candidate > cost) {
            Image c_shrunk = inverse_radon(Sinogram{grid, shrunk}, m);
            const double cost_shrunk = cost_of(shrunk, c_shrunk);
            if (cost_shrunk <= cost_candidate) {
                candidate = std::move(shrunk);
                c_candidate = std::move(c_shrunk);
                cost_candidate = cost_shrunk;
            }
        }

        const double rel = update_rel_change(candidate, x);
        result.rel_trace.push_back(rel);
        result.final_rel_change = rel;
        x_prev = std::move(x);
        x = std::move(candidate);
        cx = std::move(c_candidate);
        cost = cost_candidate;
        result.cost_trace.push_back(cost);
        guard.observe(cost);
        ++result.iterations;
        if (rel <= config.tol) {
            result.converged = true;
            break;
        }
    }

    result.estimate = Sinogram{grid, x};
    return result;
}

}  // namespace wakescan
