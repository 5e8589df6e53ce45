#include "snnrx/filters.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace snnrx::snn {

std::vector<double> make_filter(FilterKind kind, const FilterParams& p) {
    if (p.l_max < 0 || p.l_off < 0)
        throw std::invalid_argument("make_filter: negative support parameter");

    switch (kind) {
        case FilterKind::exponential: {
            if (!(p.tau > 0.0)) throw std::invalid_argument("make_filter: tau > 0 required");
            std::vector<double> h(p.l_max + 1);
            for (int l = 0; l <= p.l_max; ++l) h[l] = std::exp(-l * p.dt / p.tau);
            return h;
        }
        case FilterKind::feedback_exponential: {
            if (!(p.tau > 0.0)) throw std::invalid_argument("make_filter: tau > 0 required");
            std::vector<double> h(p.l_max + 1);
            for (int l = 0; l <= p.l_max; ++l) h[l] = -std::exp(-l * p.dt / p.tau);
            return h;
        }
        case FilterKind::delayed_raised_cosine: {
            if (p.l_max < 1)
                throw std::invalid_argument("make_filter: raised cosine needs l_max >= 1");
            std::vector<double> h(p.l_off + p.l_max + 1, 0.0);
            for (int l = p.l_off; l <= p.l_off + p.l_max; ++l) {
                const double arg =
                    std::numbers::pi * (2.0 * (l - p.l_off) / static_cast<double>(p.l_max) - 1.0);
                h[l] = (std::cos(arg) + 1.0) / 2.0;
            }
            return h;
        }
        case FilterKind::delay: {
            std::vector<double> h(p.l_off + 1, 0.0);
            h[p.l_off] = 1.0;
            return h;
        }
    }
    throw std::logic_error("make_filter: unknown kind");
}

}  // namespace snnrx::snn
