#include "wakescan/prox.hpp"

#include "wakescan/transform.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace wakescan {

const char* prior_kind_name(PriorKind kind) {
    switch (kind) {
        case PriorKind::GMC: return "gmc";
        case PriorKind::L1: return "l1";
        case PriorKind::Lp: return "lp";
        case PriorKind::TV: return "tv";
        case PriorKind::Nuclear: return "nuclear";
    }
    return "unknown";
}

PriorKind prior_kind_from_name(const std::string& name) {
    if (name == "gmc") return PriorKind::GMC;
    if (name == "l1") return PriorKind::L1;
    if (name == "lp") return PriorKind::Lp;
    if (name == "tv") return PriorKind::TV;
    if (name == "nuclear") return PriorKind::Nuclear;
    throw std::invalid_argument("unknown prior kind: " + name);
}

void PriorSpec::validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("PriorSpec: lambda must be positive");
    if (kind == PriorKind::Lp && !(p > 0.0 && p < 1.0))
        throw std::invalid_argument("PriorSpec: p must be in (0, 1)");
    // The nominal GMC range is [0.5, 0.9]; anything in [0, 1] keeps the cost
    // convex and gamma = 0 is the L1 limit, so accept the full interval.
    if (kind == PriorKind::GMC && !(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("PriorSpec: gamma must be in [0, 1]");
    if (inner_iters <= 0) throw std::invalid_argument("PriorSpec: inner_iters must be positive");
}

double soft_threshold(double u, double t) {
    if (t < 0.0) throw std::invalid_argument("soft_threshold: negative threshold");
    const double a = std::abs(u) - t;
    return a > 0.0 ? (u > 0.0 ? a : -a) : 0.0;
}

Eigen::ArrayXXd soft_threshold(const Eigen::ArrayXXd& u, double t) {
    if (t < 0.0) throw std::invalid_argument("soft_threshold: negative threshold");
    return u.sign() * (u.abs() - t).max(0.0);
}

double mc_penalty(double t) {
    const double a = std::abs(t);
    return a <= 1.0 ? a - 0.5 * t * t : 0.5;
}

GeneralizedHuberResult generalized_huber(const Sinogram& t, const ScalingMatrixSpec& scale,
                                         int image_size, int inner_iters) {
    scale.validate();
    t.validate();
    if (inner_iters <= 0)
        throw std::invalid_argument("generalized_huber: inner_iters must be positive");

    const double c = scale.gamma / scale.lambda1;
    if (c == 0.0) return {0.0, true};  // quadratic vanishes, v = t attains 0

    const auto quad = [&](const Sinogram& diff) {
        Image img = inverse_radon(diff, image_size);
        return 0.5 * c * img.pixels().matrix().squaredNorm();
    };
    const auto objective = [&](const Eigen::ArrayXXd& v) {
        Sinogram diff{t.grid, t.values - v};
        return v.abs().sum() + quad(diff);
    };

    Eigen::ArrayXXd v = Eigen::ArrayXXd::Zero(t.values.rows(), t.values.cols());
    double value = objective(v);
    double best = std::min({value, t.values.abs().sum(), value});
    const double step = 0.5 / c;  // c * ||C^T C|| is close to c for this pair

    bool converged = false;
    for (int it = 0; it < inner_iters; ++it) {
        Sinogram diff{t.grid, t.values - v};
        Image img = inverse_radon(diff, image_size);
        Sinogram grad = radon(img, t.grid);
        v = soft_threshold((v + step * c * grad.values).eval(), step);
        const double next = objective(v);
        best = std::min(best, next);
        if (value > 0.0 && std::abs(value - next) < 1e-6 * std::abs(value)) {
            value = next;
            converged = true;
            break;
        }
        value = next;
    }
    return {std::min(best, t.values.abs().sum()), converged};
}

double gst_threshold(double lambda, double p) {
    const double base = std::pow(2.0 * lambda * (1.0 - p), 1.0 / (2.0 - p));
    return base + lambda * p * std::pow(2.0 * lambda * (1.0 - p), (p - 1.0) / (2.0 - p));
}

double gst_prox_lp(double u, double lambda, double p) {
    if (!(lambda > 0.0)) throw std::invalid_argument("gst_prox_lp: lambda must be positive");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("gst_prox_lp: p must be in (0, 1)");
    const double au = std::abs(u);
    if (au <= gst_threshold(lambda, p)) return 0.0;
    double x = au;
    for (int it = 0; it < 50; ++it) {
        const double next = au - lambda * p * std::pow(x, p - 1.0);
        if (next <= 0.0) return 0.0;
        if (std::abs(next - x) < 1e-8) { x = next; break; }
        x = next;
    }
    return u > 0.0 ? x : -x;
}

Eigen::ArrayXXd gst_prox_lp(const Eigen::ArrayXXd& u, double lambda, double p) {
    Eigen::ArrayXXd out(u.rows(), u.cols());
    for (long j = 0; j < u.cols(); ++j)
        for (long i = 0; i < u.rows(); ++i) out(i, j) = gst_prox_lp(u(i, j), lambda, p);
    return out;
}

double tv_norm(const Eigen::ArrayXXd& grid) {
    double total = 0.0;
    const long rows = grid.rows(), cols = grid.cols();
    for (long j = 0; j < cols; ++j)
        for (long i = 0; i < rows; ++i) {
            if (i + 1 < rows) total += std::abs(grid(i + 1, j) - grid(i, j));
            if (j + 1 < cols) total += std::abs(grid(i, j + 1) - grid(i, j));
        }
    return total;
}

Eigen::ArrayXXd tv_prox(const Eigen::ArrayXXd& u, double lambda, int inner_iters) {
    if (lambda < 0.0) throw std::invalid_argument("tv_prox: lambda must be nonnegative");
    if (inner_iters <= 0) throw std::invalid_argument("tv_prox: inner_iters must be positive");
    if (lambda == 0.0) return u;

    const long rows = u.rows(), cols = u.cols();
    Eigen::ArrayXXd p1 = Eigen::ArrayXXd::Zero(rows, cols);  // y-direction dual
    Eigen::ArrayXXd p2 = Eigen::ArrayXXd::Zero(rows, cols);  // x-direction dual
    Eigen::ArrayXXd div(rows, cols), work(rows, cols);
    const double tau = 0.125;

    for (int it = 0; it < inner_iters; ++it) {
        for (long j = 0; j < cols; ++j)
            for (long i = 0; i < rows; ++i) {
                double d = p1(i, j) + p2(i, j);
                if (i > 0) d -= p1(i - 1, j);
                if (j > 0) d -= p2(i, j - 1);
                div(i, j) = d;
            }
        work = div - u / lambda;
        double change = 0.0;
        for (long j = 0; j < cols; ++j)
            for (long i = 0; i < rows; ++i) {
                const double g1 = (i + 1 < rows) ? work(i + 1, j) - work(i, j) : 0.0;
                const double g2 = (j + 1 < cols) ? work(i, j + 1) - work(i, j) : 0.0;
                const double n1 = (p1(i, j) + tau * g1) / (1.0 + tau * std::abs(g1));
                const double n2 = (p2(i, j) + tau * g2) / (1.0 + tau * std::abs(g2));
                change = std::max({change, std::abs(n1 - p1(i, j)), std::abs(n2 - p2(i, j))});
                p1(i, j) = n1;
                p2(i, j) = n2;
            }
        if (change < 1e-5) break;
    }

    for (long j = 0; j < cols; ++j)
        for (long i = 0; i < rows; ++i) {
            double d = p1(i, j) + p2(i, j);
            if (i > 0) d -= p1(i - 1, j);
            if (j > 0) d -= p2(i, j - 1);
            div(i, j) = d;
        }
    return u - lambda * div;
}

Image tv_prox(const Image& image, double lambda, int inner_iters) {
    Image out(tv_prox(image.pixels(), lambda, inner_iters));
    if (image.has_mask()) out.set_mask(image.mask());
    return out;
}

double nuclear_norm(const Eigen::ArrayXXd& grid) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(grid.matrix());
    return svd.singularValues().sum();
}

Eigen::ArrayXXd nuclear_prox(const Eigen::ArrayXXd& grid, double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("nuclear_prox: lambda must be nonnegative");
    if (!grid.isFinite().all())
        throw std::invalid_argument("nuclear_prox: non-finite input");
    if (lambda == 0.0) return grid;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(grid.matrix(),
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw std::runtime_error("nuclear_prox: SVD failed on degenerate input");
    Eigen::VectorXd sv = svd.singularValues();
    for (long i = 0; i < sv.size(); ++i) sv(i) = std::max(sv(i) - lambda, 0.0);
    return (svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose()).array();
}

Eigen::ArrayXXd twist_gamma(const Eigen::ArrayXXd& u, const PriorSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case PriorKind::GMC:
            throw std::invalid_argument("twist_gamma: GMC uses the forward-backward solver");
        case PriorKind::L1: {
            Eigen::ArrayXXd prox = soft_threshold(u, spec.lambda);
            return prox.abs() / (prox.abs() + spec.lambda) * u;
        }
        case PriorKind::Lp: {
            Eigen::ArrayXXd prox = gst_prox_lp(u, spec.lambda, spec.p);
            return prox.abs() / (prox.abs() + spec.lambda) * u;
        }
        case PriorKind::TV:
            return tv_prox(u, spec.lambda, spec.inner_iters);
        case PriorKind::Nuclear:
            return nuclear_prox(u, spec.lambda);
    }
    throw std::invalid_argument("twist_gamma: unknown prior kind");
}

}  // namespace wakescan
