#pragma once

#include <vector>

#include "snnrx/filters.hpp"
#include "snnrx/linalg.hpp"
#include "snnrx/raster.hpp"
#include "snnrx/rng.hpp"

namespace snnrx::train {

enum class TargetMode { last_step, all_steps };

struct ProbTrainConfig {
    double gamma = 300.0;  // output-spike amplification, >= 1
    double nu_z = 3.0;     // learning rate, observable parameters
    double nu_h = 3.0;     // learning rate, hidden parameters
    TargetMode target_mode = TargetMode::last_step;

    void validate() const;
};

// Shared filter layout of the SRM network: delay and raised-cosine banks use
// one filter per time shift 0..l_off_max, the exponential variant a single
// filter truncated at l_max.
struct SrmFilterSpec {
    snn::FilterKind kind = snn::FilterKind::delay;
    int l_off_max = 10;
    int l_max = 10;       // raised-cosine width / exponential support
    double tau_m = 3.0;   // exponential feed-forward time constant
    double tau_rec = 0.5; // feedback filter time constant
    double dt = 1.0;

    std::size_t n_filters() const {
        return kind == snn::FilterKind::exponential ? 1 : static_cast<std::size_t>(l_off_max) + 1;
    }
    std::vector<std::vector<double>> build() const;
};

// Probabilistic SRM network with one (optional) hidden layer. n_hid == 0
// gives the fully observed input->output network.
struct SrmNetSpec {
    std::size_t n_in = 0;
    std::size_t n_hid = 0;
    std::size_t n_out = 0;
    std::size_t K = 1;
    SrmFilterSpec filter;
    double v_th_hidden = 1.0;
    double v_th_out = 1.0;
    bool feedback = true;  // self-feedback theta^(r) present

    std::size_t front_width() const { return n_hid > 0 ? n_hid : n_in; }
};

struct SrmWeights {
    Mat theta_h;                     // n_hid x (n_in * F)
    std::vector<double> theta_h_rec; // n_hid
    Mat theta_o;                     // n_out x (front * F)
    std::vector<double> theta_o_rec; // n_out

    static SrmWeights init(const SrmNetSpec& spec, RandomStream& rng);
};

struct ProbSample {
    SpikeRaster input;
    int label = 1;
};

// Desired output spike pattern: one spike at (label, K-1) or the whole label
// row, depending on the mode.
SpikeRaster target_pattern(int label, std::size_t n_out, std::size_t K, TargetMode mode);

// Gradient of ln p(z|v) for one weight: filtered_input * (z_target - p).
inline double prob_grad_observed(double filtered_input, int z_target, double p) {
    return filtered_input * (static_cast<double>(z_target) - p);
}

// Amplified log-likelihood of the realized observable pattern. p values are
// clamped away from {0,1} before the logarithm.
double prob_learning_signal(const SpikeRaster& targets, const Mat& probs, double gamma);

struct ProbStepStats {
    double mean_learning_signal = 0.0;
};

// One batch update: observable parameters by the batch-mean likelihood
// gradient, hidden parameters by the same gradients scaled per sample with
// the learning signal. Hidden spikes are sampled from the network's own
// dynamics using the supplied stream.
ProbStepStats prob_train_step(const SrmNetSpec& spec, SrmWeights& w,
                              const std::vector<ProbSample>& batch, const ProbTrainConfig& cfg,
                              RandomStream& rng);

// Average firing probability on spike steps and non-spike steps, averaged
// over a calibration batch, per hidden neuron; the deterministic threshold is
// their midpoint in the probability domain. Neurons that never spiked get a
// threshold above 1 (silent), neurons that always spiked get 0.
std::vector<double> prob_to_deterministic(const SrmNetSpec& spec, const SrmWeights& w,
                                          const std::vector<ProbSample>& batch,
                                          RandomStream& rng);

// Deterministic converted network: hidden neuron j fires iff
// sigmoid(v - v_th) > threshold[j]; output potentials are read out without
// spiking. Returns the end-of-time argmax label (1-based) and the potentials.
struct SrmInferResult {
    int label = 1;
    std::vector<double> final_potentials;
};
SrmInferResult srm_infer_deterministic(const SrmNetSpec& spec, const SrmWeights& w,
                                       const std::vector<double>& thresholds,
                                       const SpikeRaster& input);

}  // namespace snnrx::train
