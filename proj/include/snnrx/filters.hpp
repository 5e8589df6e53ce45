#pragma once

#include <vector>

namespace snnrx::snn {

enum class FilterKind {
    exponential,          // alpha[l] = e^{-l*dt/tau_m}, l = 0..l_max
    delayed_raised_cosine,// alpha[l] = (cos(pi*(2*(l-l_off)/l_max - 1)) + 1)/2 on its support
    delay,                // alpha[l] = delta[l - l_off]
    feedback_exponential, // beta[l] = -e^{-l*dt/tau_rec}, l = 0..l_max
};

struct FilterParams {
    double tau = 1.0;   // tau_m for exponential, tau_rec for feedback
    double dt = 1.0;
    int l_max = 0;      // inclusive support bound (width l_max+1 for raised cosine)
    int l_off = 0;      // delay in samples
};

// Pointwise evaluation of the impulse responses used by the spike response
// model. The returned vector covers l = 0 .. support_end.
std::vector<double> make_filter(FilterKind kind, const FilterParams& p);

}  // namespace snnrx::snn
