#ifndef WAKESCAN_PROX_HPP
#define WAKESCAN_PROX_HPP

#include "wakescan/grid.hpp"

namespace wakescan {

enum class PriorKind { GMC, L1, Lp, TV, Nuclear };

const char* prior_kind_name(PriorKind kind);
PriorKind prior_kind_from_name(const std::string& name);

/// Regularizer choice: scale lambda plus the prior-specific parameters.
struct PriorSpec {
    PriorKind kind = PriorKind::GMC;
    double lambda = 1.0;
    double p = 0.5;        // Lp only, (0, 1)
    double gamma = 0.8;    // GMC only; [0, 1] keeps the cost convex
    int inner_iters = 40;  // TV / generalized-Huber inner loops

    void validate() const;
};

/// B = sqrt(gamma/lambda1) * C, kept implicit as the scaled FBP operator.
struct ScalingMatrixSpec {
    double gamma = 0.8;
    double lambda1 = 1.0;

    void validate() const {
        if (!(gamma >= 0.0 && gamma <= 1.0))
            throw std::invalid_argument("ScalingMatrixSpec: gamma must be in [0, 1]");
        if (!(lambda1 > 0.0))
            throw std::invalid_argument("ScalingMatrixSpec: lambda1 must be positive");
    }
};

/// sign(u) * max(|u| - t, 0)
double soft_threshold(double u, double t);
Eigen::ArrayXXd soft_threshold(const Eigen::ArrayXXd& u, double t);

/// Minimax concave penalty, univariate: |t| - t^2/2 for |t| <= 1, else 1/2.
double mc_penalty(double t);

struct GeneralizedHuberResult {
    double value = 0.0;
    bool converged = false;
};

/// S_B(t) = inf_v { ||v||_1 + 1/2 ||B(t - v)||^2 }, evaluated numerically by
/// proximal gradient on v. Diagnostic only; never called inside the solvers.
GeneralizedHuberResult generalized_huber(const Sinogram& t, const ScalingMatrixSpec& scale,
                                         int image_size, int inner_iters);

/// Threshold below which the Lp proximal point is exactly zero.
double gst_threshold(double lambda, double p);

/// Generalized soft thresholding: fixed-point iterate for
/// argmin_x 1/2 (x - u)^2 + lambda |x|^p, 0 < p < 1.
double gst_prox_lp(double u, double lambda, double p);
Eigen::ArrayXXd gst_prox_lp(const Eigen::ArrayXXd& u, double lambda, double p);

/// Anisotropic total variation: ||grad Z||_1 with forward differences.
double tv_norm(const Eigen::ArrayXXd& grid);

/// Chambolle dual-projection solve of min_Z 1/2 ||Z - u||^2 + lambda TV(Z),
/// step 1/8, stopping at dual change < 1e-5 or inner_iters.
Eigen::ArrayXXd tv_prox(const Eigen::ArrayXXd& u, double lambda, int inner_iters = 40);
Image tv_prox(const Image& image, double lambda, int inner_iters = 40);

double nuclear_norm(const Eigen::ArrayXXd& grid);

/// Singular value soft thresholding.
Eigen::ArrayXXd nuclear_prox(const Eigen::ArrayXXd& grid, double lambda);

/// TwIST shrink/denoise operator for the non-GMC priors: the rescaled
/// shrinkage for L1/Lp, the denoising prox itself for TV/nuclear.
Eigen::ArrayXXd twist_gamma(const Eigen::ArrayXXd& u, const PriorSpec& spec);

}  // namespace wakescan

#endif
