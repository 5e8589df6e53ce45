#pragma once

#include <functional>
#include <vector>

#include "snnrx/rng.hpp"

namespace snnrx::pgu {

struct PguConfig {
    double sigma2_pi = 0.1;   // base policy variance
    double nu = 0.5;          // learning rate
    std::size_t batch = 40;   // sampled variations per step
    double alpha_damp = 1e-4; // damping of worsening variations
    std::size_t pol_batch = 1;// samples per performance evaluation (caller-side)

    void validate() const;
};

// Black-box performance measure; must return a finite value >= 0. All
// evaluations within one step must use the same data samples.
using Evaluator = std::function<double(const std::vector<double>&)>;

// Variations drawn from the coupled-variance Gaussian policy:
// sigma2_c = sigma2_pi * min(ell_theta, 1), theta~ = theta + N(0, sigma2_c I).
// The clamp caps the variance for large losses and shrinks the search radius
// as the optimization approaches a minimum.
std::vector<std::vector<double>> sample_policy(const std::vector<double>& theta,
                                               double ell_theta, const PguConfig& cfg,
                                               RandomStream& rng);

// Asymmetric damping: improvements pass at full strength, deteriorations are
// scaled by alpha_damp. Never changes the sign of the difference.
double damped_diff(double ell_tilde, double ell, double alpha_damp);

struct PguTrace {
    double ell = 0.0;       // performance of theta at the start of the step
    double sigma2_c = 0.0;  // coupled variance used
    double update_norm = 0.0;
};

// One update: theta <- theta - nu * sum_b (damped_diff / ell) * (theta~ - theta),
// with the normalization guarded below 1e-12. Non-finite evaluator output
// aborts the step.
std::vector<double> pgu_step(const std::vector<double>& theta, const Evaluator& evaluator,
                             const PguConfig& cfg, RandomStream& rng,
                             PguTrace* trace = nullptr);

inline double rosenbrock(double t1, double t2) {
    return 100.0 * (t2 - t1 * t1) * (t2 - t1 * t1) + (1.0 - t1) * (1.0 - t1);
}

}  // namespace snnrx::pgu
