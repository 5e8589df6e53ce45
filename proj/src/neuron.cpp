#include "snnrx/neuron.hpp"

#include <cmath>
#include <stdexcept>

namespace snnrx::snn {

void NeuronConfig::validate() const {
    if (!(tau_m > 0.0)) throw std::invalid_argument("NeuronConfig: tau_m > 0 required");
    if (!(tau_s >= 0.0)) throw std::invalid_argument("NeuronConfig: tau_s >= 0 required");
    if (!(dt > 0.0)) throw std::invalid_argument("NeuronConfig: dt > 0 required");
    if (!std::isfinite(v_th) || !std::isfinite(v_rest))
        throw std::invalid_argument("NeuronConfig: non-finite threshold/rest");
}

LifCoeffs LifCoeffs::from(const NeuronConfig& cfg) {
    cfg.validate();
    LifCoeffs k;
    k.dm = std::exp(-cfg.dt / cfg.tau_m);
    k.ds = cfg.tau_s > 0.0 ? std::exp(-cfg.dt / cfg.tau_s) : 0.0;
    return k;
}

std::vector<uint8_t> lif_step(LayerState& state, std::span<const double> weighted_input,
                              const NeuronConfig& cfg) {
    const std::size_t n = state.size();
    if (weighted_input.size() != n || state.i.size() != n)
        throw std::invalid_argument("lif_step: width mismatch");
    for (double x : weighted_input)
        if (!std::isfinite(x)) throw std::invalid_argument("lif_step: non-finite input");

    const LifCoeffs k = LifCoeffs::from(cfg);
    std::vector<uint8_t> spikes(n, 0);
    lif_step_fast(state.v.data(), state.i.data(), weighted_input.data(), spikes.data(), n, k,
                  cfg.v_th, cfg.v_rest, cfg.spiking);
    return spikes;
}

}  // namespace snnrx::snn
