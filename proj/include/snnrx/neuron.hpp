#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace snnrx::snn {

// Discrete-time LIF/LI neuron parameters. Time constants and the sampling
// time are in ms; potentials are dimensionless. spiking=false turns the
// model into a non-spiking leaky integrator (LI).
struct NeuronConfig {
    double tau_m = 10.0;
    double tau_s = 5.0;
    double dt = 1.0;
    double v_th = 1.0;
    double v_rest = 0.0;
    bool spiking = true;

    void validate() const;
};

// Decay factors e^{-dt/tau}, precomputed once per config. tau_s == 0 is
// allowed as the memoryless limit (decay 0).
struct LifCoeffs {
    double dm = 0.0;
    double ds = 0.0;

    static LifCoeffs from(const NeuronConfig& cfg);
};

// Per-neuron state of one layer: membrane potentials and synaptic currents.
struct LayerState {
    std::vector<double> v;
    std::vector<double> i;

    explicit LayerState(std::size_t n = 0, double v0 = 0.0) : v(n, v0), i(n, 0.0) {}
    std::size_t size() const { return v.size(); }
};

// One simulation step of a layer of LIF (or LI) neurons:
//   i' = i * e^{-dt/tau_s} + weighted_input
//   v' = v * e^{-dt/tau_m} + i * e^{-dt/tau_m}      (old current!)
// then, for spiking neurons, threshold the updated potential with strict
// v' > v_th and reset spiking entries to v_rest. weighted_input must already
// be the summed synaptic drive of the layer. Rejects non-finite inputs.
std::vector<uint8_t> lif_step(LayerState& state, std::span<const double> weighted_input,
                              const NeuronConfig& cfg);

// Fast in-place variant used by the simulation loops: no validation, no
// allocation. spikes must have the layer width. Same arithmetic as lif_step.
inline void lif_step_fast(double* v, double* i, const double* drive, uint8_t* spikes,
                          std::size_t n, const LifCoeffs& k, double v_th, double v_rest,
                          bool spiking) {
    for (std::size_t j = 0; j < n; ++j) {
        const double vn = v[j] * k.dm + i[j] * k.dm;
        i[j] = i[j] * k.ds + drive[j];
        if (spiking && vn > v_th) {
            spikes[j] = 1;
            v[j] = v_rest;
        } else {
            spikes[j] = 0;
            v[j] = vn;
        }
    }
}

}  // namespace snnrx::snn
