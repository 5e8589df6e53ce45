#pragma once

#include <optional>

#include "snnrx/linalg.hpp"
#include "snnrx/neuron.hpp"
#include "snnrx/raster.hpp"

namespace snnrx::snn {

// Weights of a single-hidden-layer SNN. theta_rec is present iff the hidden
// layer has recurrent (lateral + self) connections.
struct WeightSet {
    Mat theta_in;                  // N_hid x N_in
    std::optional<Mat> theta_rec;  // N_hid x N_hid
    Mat theta_out;                 // N_out x N_hid

    std::size_t n_in() const { return theta_in.cols; }
    std::size_t n_hid() const { return theta_in.rows; }
    std::size_t n_out() const { return theta_out.rows; }
    bool recurrent() const { return theta_rec.has_value(); }

    void validate() const;
};

struct SnnSpec {
    std::size_t n_in = 0;
    std::size_t n_hid = 0;
    std::size_t n_out = 0;
    bool recurrent = false;
    NeuronConfig hidden;  // spiking LIF
    NeuronConfig output;  // LI for membrane decoding, LIF for spike decoding
};

struct NetworkRun {
    SpikeRaster hidden;      // N_hid x K
    Mat out_potentials;      // N_out x K, potential after each step
    SpikeRaster out_spikes;  // N_out x K (all-zero for LI output)
};

// Reference simulation of the two-layer network over K steps. Per step kappa:
// hidden drive = theta_in * input[:,kappa] (+ theta_rec * hidden spikes of the
// previous step when recurrent), hidden layer advances via lif_step, output
// drive = theta_out * hidden spikes of this step, output layer advances with
// its own config. All states start at (v_rest, 0); fresh call = fresh symbol.
// Bipolar input rasters contribute +/-theta to the drive.
NetworkRun run_network(const WeightSet& w, const SpikeRaster& input, const SnnSpec& spec,
                       std::size_t K);

}  // namespace snnrx::snn
