#ifndef WAKESCAN_SOLVER_HPP
#define WAKESCAN_SOLVER_HPP

#include "wakescan/grid.hpp"
#include "wakescan/prox.hpp"

#include <vector>

namespace wakescan {

struct SolverConfig {
    double mu = 0.5;      // forward-backward step, (0, 1.9)
    double alpha = 1.96;  // TwIST two-step parameter
    double tol = 1e-3;
    int max_iter = 1000;
    PriorSpec prior;
    AngleGrid grid{180};

    void validate() const;
};

struct SolverResult {
    Sinogram estimate;
    int iterations = 0;
    double final_rel_change = 0.0;
    std::vector<double> cost_trace;  // cost of iterates 0..final
    std::vector<double> rel_trace;   // relative change per update
    bool converged = false;
};

/// ||current - previous||_F / ||previous||_F, +inf when previous is the zero
/// grid and the iterates differ (not yet converged).
double relative_change(const Sinogram& current, const Sinogram& previous);

/// Standardize to zero mean, unit variance over the unmasked pixels; masked
/// pixels are set to zero. A constant image maps to all zeros.
Image standardize(const Image& y);

/// Saddle objective F(X, v) = ||Y - CX||^2 + lambda ||X||_1 - lambda ||v||_1
///                            - gamma ||C(X - v)||^2,
/// with the data term restricted to unmasked pixels.
double gmc_cost(const Sinogram& x, const Sinogram& v, const Image& y, double lambda,
                double gamma);

/// ||Y - CX||^2 + lambda * psi(X) for the separable/denoising priors.
double map_cost(const Sinogram& x, const Image& y, const PriorSpec& prior);

/// Forward-backward iteration for the GMC minimax objective. C is the ramp
/// filtered back-projection, C^T the Radon transform.
SolverResult solve_fb_gmc(const Image& y, const SolverConfig& config);

/// Two-step iterative shrinkage/thresholding for the L1/Lp/TV/nuclear priors.
SolverResult solve_twist(const Image& y, const SolverConfig& config);

}  // namespace wakescan

#endif
