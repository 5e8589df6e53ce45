#pragma once

#include <vector>

#include "snnrx/raster.hpp"
#include "snnrx/rng.hpp"

namespace snnrx::snn {

// Filter bank of a single SRM neuron: per (input signal, filter index) one
// feed-forward impulse response with its weight, plus one feedback impulse
// response applied to the neuron's own past output.
struct FilterBank {
    // feedforward[j][m]: m-th impulse response attached to input signal j
    std::vector<std::vector<std::vector<double>>> feedforward;
    // weights[j][m]: theta^(f,m)_j
    std::vector<std::vector<double>> weights;
    std::vector<double> feedback;  // beta[l]
    double theta_rec = 0.0;        // theta^(r)

    std::size_t n_inputs() const { return feedforward.size(); }
};

// Membrane potential of the SRM at time step kappa:
//   v[k] = sum_j sum_m theta^(f,m)_j (z_in_j * alpha_j^m)[k]
//        + theta^(r) (z_out * beta)[k-1]
// Histories before t=0 are zero. inputs holds the input spike history
// (rows = signals, cols over time up to and including kappa); past_output is
// the neuron's own spike history (index k covers 0..kappa-1 entries used).
double srm_membrane(const SpikeRaster& inputs, const FilterBank& bank,
                    const std::vector<uint8_t>& past_output, std::size_t kappa);

// Bernoulli firing: p = sigmoid(v - v_th), spike drawn from the supplied
// stream. Returns (spike, p).
struct SrmSample {
    uint8_t spike;
    double p;
};
SrmSample srm_sample(double v, double v_th, RandomStream& rng);

// Numerically stable logistic sigmoid.
inline double sigmoid(double x) {
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace snnrx::snn
