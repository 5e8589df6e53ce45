#include "snnrx/pgu.hpp"

#include <cmath>
#include <stdexcept>

namespace snnrx::pgu {

void PguConfig::validate() const {
    if (!(sigma2_pi > 0.0)) throw std::invalid_argument("PguConfig: sigma2_pi > 0");
    if (batch < 1) throw std::invalid_argument("PguConfig: batch >= 1");
    if (alpha_damp < 0.0 || alpha_damp > 1.0)
        throw std::invalid_argument("PguConfig: alpha_damp in [0,1]");
}

namespace {

double checked_eval(const Evaluator& evaluator, const std::vector<double>& theta) {
    const double v = evaluator(theta);
    if (!std::isfinite(v)) throw std::runtime_error("pgu: non-finite performance value");
    if (v < 0.0) throw std::domain_error("pgu: performance measure must be >= 0");
    return v;
}

}  // namespace

std::vector<std::vector<double>> sample_policy(const std::vector<double>& theta,
                                               double ell_theta, const PguConfig& cfg,
                                               RandomStream& rng) {
    cfg.validate();
    if (ell_theta < 0.0) throw std::domain_error("sample_policy: ell_theta >= 0");
    // coupled variance: shrink the search radius with the performance value,
    // capped at sigma2_pi so a large loss cannot explode the policy
    const double sigma = std::sqrt(cfg.sigma2_pi * std::min(ell_theta, 1.0));
    std::vector<std::vector<double>> out(cfg.batch);
    for (auto& v : out) {
        v = theta;
        for (double& x : v) x += sigma * rng.normal();
    }
    return out;
}

double damped_diff(double ell_tilde, double ell, double alpha_damp) {
    const double d = ell_tilde - ell;
    return d < 0.0 ? d : d * alpha_damp;
}

std::vector<double> pgu_step(const std::vector<double>& theta, const Evaluator& evaluator,
                             const PguConfig& cfg, RandomStream& rng, PguTrace* trace) {
    cfg.validate();
    const double ell = checked_eval(evaluator, theta);
    const auto variations = sample_policy(theta, ell, cfg, rng);

    const double denom = std::max(ell, 1e-12);
    std::vector<double> update(theta.size(), 0.0);
    for (const auto& var : variations) {
        const double d = damped_diff(checked_eval(evaluator, var), ell, cfg.alpha_damp);
        if (d == 0.0) continue;
        const double c = d / denom;
        for (std::size_t i = 0; i < theta.size(); ++i) update[i] += c * (var[i] - theta[i]);
    }

    std::vector<double> next(theta.size());
    double norm2 = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double step = cfg.nu * update[i];
        next[i] = theta[i] - step;
        norm2 += step * step;
    }
    if (trace) {
        trace->ell = ell;
        trace->sigma2_c = cfg.sigma2_pi * std::min(ell, 1.0);
        trace->update_norm = std::sqrt(norm2);
    }
    return next;
}

}  // namespace snnrx::pgu
