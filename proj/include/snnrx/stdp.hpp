#pragma once

#include "snnrx/network.hpp"
#include "snnrx/raster.hpp"

namespace snnrx::train {

// STDP scaling factors and time constants (ms). a_plus > 0 strengthens
// causal pairs, a_minus < 0 weakens anti-causal pairs.
struct StdpConfig {
    double a_plus = 1e-3;
    double a_minus = -5e-4;
    double tau_plus = 20.0;
    double tau_minus = 20.0;
    double dt = 1.0;     // ms per time step
    double w_min = 0.0;  // adapted weights are clipped to [w_min, w_max];
    double w_max = 4.0;  // unbounded clamped STDP saturates the spike counts

    void validate() const;
};

// Weight change for one (pre, post) spike pair with relative firing time
// dt_f = t_post - t_pre (ms). Both branches decay toward zero away from
// coincidence; dt_f = 0 contributes nothing.
double stdp_delta(double dt_f, const StdpConfig& cfg);

// One clamped training sample: the hidden layer runs normally on the input
// raster, the output layer is clamped to all-ones in the row of the true
// label (no thresholding, no reset). Every (pre, post) spike pair within the
// K-step window contributes stdp_delta to the connecting synapse, all-to-all.
// theta_out always adapts; theta_in only when freeze_input is false.
snn::WeightSet stdp_train_step(const snn::WeightSet& weights, const SpikeRaster& input,
                               int true_label, bool freeze_input, const StdpConfig& cfg,
                               const snn::NeuronConfig& hidden_cfg);

}  // namespace snnrx::train
