#pragma once

#include <cstdint>
#include <vector>

#include "snnrx/constellation.hpp"

namespace snnrx::eq {

// Linear MSE equalizer: affine feed-forward filter over a window of received
// values, optionally extended by feedback taps over already decided symbol
// values. Detection is minimum distance to the constellation.
struct FirEqualizer {
    bool dfe = false;
    std::vector<double> ff;  // taps over the window, ff[0] applies to the newest sample
    std::vector<double> fb;  // taps over past decisions, fb[0] = most recent
    double bias = 0.0;
    double residual_mse = 0.0;  // on the pilot block

    double filter_ff(const std::vector<double>& window) const;
};

// Least-squares tap fit on a pilot block of aligned (y, symbol index) pairs.
// The feedback regressors use true past symbols; ridge 1e-8 guards singular
// normal equations. delta is the label offset: the window
// y[k-n_ff+1 .. k] estimates the symbol at k - delta.
FirEqualizer fir_equalize(bool dfe, const std::vector<double>& y,
                          const std::vector<std::size_t>& index, const chan::Constellation& c,
                          std::size_t n_ff, std::size_t n_fb, std::size_t delta);

// Run the fitted equalizer over a block; DFE uses self-decisions. Returns the
// 0-based detected constellation index for every target position.
std::vector<std::size_t> fir_detect(const FirEqualizer& f, const std::vector<double>& y,
                                    const chan::Constellation& c, std::size_t n_ff,
                                    std::size_t delta);

}  // namespace snnrx::eq
