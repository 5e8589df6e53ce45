#pragma once

#include <cmath>

namespace snnrx::train {

// Fast sigmoid surrogate of the Heaviside activation. eta controls the
// steepness; the derivative peaks at the threshold with value eta/2.
struct SurrogateConfig {
    double eta = 100.0;
};

// sigma_eta(v - v_th) evaluated at x = v - v_th
inline double surrogate(double x, const SurrogateConfig& cfg) {
    const double e = cfg.eta * x;
    return 0.5 * e / (1.0 + std::abs(e)) + 0.5;
}

// d/dv sigma_eta(v - v_th)
inline double surrogate_grad(double x, const SurrogateConfig& cfg) {
    const double d = 1.0 + std::abs(cfg.eta * x);
    return 0.5 * cfg.eta / (d * d);
}

}  // namespace snnrx::train
