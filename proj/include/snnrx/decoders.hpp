#pragma once

#include "snnrx/linalg.hpp"
#include "snnrx/raster.hpp"

namespace snnrx::codec {

enum class DecoderKind {
    spike_rate,  // argmax of output spike counts
    ttfs,        // argmin of first output spike time, silent neurons last
    eotm,        // argmax of membrane potential at the final step
    motm,        // argmax of the per-neuron maximum potential over time
};

struct DecoderSpec {
    DecoderKind variant = DecoderKind::eotm;
};

// Class label in 1..N_out. Ties resolve to the lowest index. EOTM/MOTM read
// out_potentials (N_out x K); the spike-based variants read out_spikes.
int decode(const SpikeRaster& out_spikes, const Mat& out_potentials, const DecoderSpec& spec);

}  // namespace snnrx::codec
