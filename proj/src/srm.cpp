#include "snnrx/srm.hpp"

#include <cmath>
#include <stdexcept>

namespace snnrx::snn {

double srm_membrane(const SpikeRaster& inputs, const FilterBank& bank,
                    const std::vector<uint8_t>& past_output, std::size_t kappa) {
    if (bank.n_inputs() != inputs.rows)
        throw std::invalid_argument("srm_membrane: bank/input dimension mismatch");
    if (bank.weights.size() != bank.feedforward.size())
        throw std::invalid_argument("srm_membrane: weights/filters mismatch");

    double v = 0.0;
    for (std::size_t j = 0; j < inputs.rows; ++j) {
        if (bank.weights[j].size() != bank.feedforward[j].size())
            throw std::invalid_argument("srm_membrane: weights/filters mismatch");
        const int8_t* z = inputs.row(j);
        for (std::size_t m = 0; m < bank.feedforward[j].size(); ++m) {
            const auto& alpha = bank.feedforward[j][m];
            double conv = 0.0;
            for (std::size_t l = 0; l < alpha.size() && l <= kappa; ++l) {
                const std::size_t t = kappa - l;
                if (t < inputs.cols && z[t] != 0) conv += alpha[l] * z[t];
            }
            v += bank.weights[j][m] * conv;
        }
    }

    if (bank.theta_rec != 0.0 && kappa >= 1 && !bank.feedback.empty()) {
        double conv = 0.0;
        const std::size_t k1 = kappa - 1;
        for (std::size_t l = 0; l < bank.feedback.size() && l <= k1; ++l) {
            const std::size_t t = k1 - l;
            if (t < past_output.size() && past_output[t]) conv += bank.feedback[l];
        }
        v += bank.theta_rec * conv;
    }
    return v;
}

SrmSample srm_sample(double v, double v_th, RandomStream& rng) {
    const double p = sigmoid(v - v_th);
    return {static_cast<uint8_t>(rng.bernoulli(p) ? 1 : 0), p};
}

}  // namespace snnrx::snn
