#include "snnrx/rrc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace snnrx::chan {

std::vector<double> rrc_taps(double beta, int span_symbols, int sps) {
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("rrc_taps: roll-off in [0,1]");
    if (span_symbols <= 0 || span_symbols % 2 != 0)
        throw std::invalid_argument("rrc_taps: span must be positive and even");
    if (sps < 1) throw std::invalid_argument("rrc_taps: sps >= 1");

    constexpr double pi = std::numbers::pi;
    const int n_taps = span_symbols * sps + 1;
    const int mid = span_symbols * sps / 2;
    std::vector<double> h(n_taps);

    for (int n = 0; n < n_taps; ++n) {
        const double t = static_cast<double>(n - mid) / sps;  // in symbol durations
        double v;
        if (std::abs(t) < 1e-12) {
            v = 1.0 - beta + 4.0 * beta / pi;
        } else if (beta > 0.0 && std::abs(std::abs(t) - 1.0 / (4.0 * beta)) < 1e-9) {
            v = beta / std::sqrt(2.0) *
                ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * beta)) +
                 (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * beta)));
        } else {
            const double num = std::sin(pi * t * (1.0 - beta)) +
                               4.0 * beta * t * std::cos(pi * t * (1.0 + beta));
            const double den = pi * t * (1.0 - 16.0 * beta * beta * t * t);
            v = num / den;
        }
        h[n] = v;
    }

    double e = 0.0;
    for (double v : h) e += v * v;
    const double s = 1.0 / std::sqrt(e);
    for (double& v : h) v *= s;
    return h;
}

std::vector<double> filter_same(const std::vector<double>& h, const std::vector<double>& in) {
    std::vector<double> out(in.size(), 0.0);
    const std::ptrdiff_t nh = static_cast<std::ptrdiff_t>(h.size());
    const std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(in.size());
    for (std::ptrdiff_t n = 0; n < ni; ++n) {
        double s = 0.0;
        const std::ptrdiff_t m0 = std::max<std::ptrdiff_t>(0, n - ni + 1);
        const std::ptrdiff_t m1 = std::min<std::ptrdiff_t>(nh - 1, n);
        for (std::ptrdiff_t m = m0; m <= m1; ++m) s += h[m] * in[n - m];
        out[n] = s;
    }
    return out;
}

}  // namespace snnrx::chan
