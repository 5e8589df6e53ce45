#pragma once

#include <vector>

namespace snnrx::chan {

// Unit-energy root-raised-cosine impulse response with span_symbols * sps + 1
// taps, symmetric around the center tap. The singular points t = 0 and
// t = +/- T/(4 beta) are evaluated through their analytic limits.
std::vector<double> rrc_taps(double beta, int span_symbols, int sps);

// Same-length convolution with zero padding: out[n] = sum_m h[m] in[n-m].
// The content is delayed by the filter group delay (taps-1)/2 samples.
std::vector<double> filter_same(const std::vector<double>& h, const std::vector<double>& in);

}  // namespace snnrx::chan
