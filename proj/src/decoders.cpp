#include "snnrx/decoders.hpp"

#include <limits>
#include <stdexcept>

namespace snnrx::codec {

namespace {

// argmax with lowest-index tie break (strict > keeps the earlier winner)
template <typename F>
int argmax_over(std::size_t n, F&& score) {
    if (n == 0) throw std::invalid_argument("decode: empty output layer");
    std::size_t best = 0;
    double best_v = score(0);
    for (std::size_t j = 1; j < n; ++j) {
        const double v = score(j);
        if (v > best_v) {
            best_v = v;
            best = j;
        }
    }
    return static_cast<int>(best) + 1;
}

}  // namespace

int decode(const SpikeRaster& out_spikes, const Mat& out_potentials, const DecoderSpec& spec) {
    switch (spec.variant) {
        case DecoderKind::spike_rate:
            return argmax_over(out_spikes.rows, [&](std::size_t j) {
                double s = 0.0;
                for (std::size_t k = 0; k < out_spikes.cols; ++k) s += out_spikes.at(j, k);
                return s;
            });
        case DecoderKind::ttfs:
            // earlier first spike wins; a silent neuron counts as firing at K
            return argmax_over(out_spikes.rows, [&](std::size_t j) {
                for (std::size_t k = 0; k < out_spikes.cols; ++k)
                    if (out_spikes.at(j, k)) return -static_cast<double>(k);
                return -static_cast<double>(out_spikes.cols);
            });
        case DecoderKind::eotm:
            return argmax_over(out_potentials.rows, [&](std::size_t j) {
                return out_potentials(j, out_potentials.cols - 1);
            });
        case DecoderKind::motm:
            return argmax_over(out_potentials.rows, [&](std::size_t j) {
                double m = -std::numeric_limits<double>::infinity();
                for (std::size_t k = 0; k < out_potentials.cols; ++k)
                    m = std::max(m, out_potentials(j, k));
                return m;
            });
    }
    throw std::logic_error("decode: unknown variant");
}

}  // namespace snnrx::codec
