#pragma once

#include <span>
#include <vector>

#include "snnrx/bptt.hpp"
#include "snnrx/decoders.hpp"
#include "snnrx/encoders.hpp"
#include "snnrx/imdd.hpp"
#include "snnrx/metrics.hpp"
#include "snnrx/pgu.hpp"

namespace snnrx::eq {

// Full receiver description: structure, neural codec, window sizes, SNN
// topology and the per-channel preprocessing (input scale, DC offset and the
// padding mean are resolved once per channel preset and frozen).
struct EqualizerSpec {
    Structure structure = Structure::nfe_snn;
    codec::EncoderSpec encoder;
    codec::DecoderSpec decoder;
    std::size_t n_tap = 7;
    std::size_t n_ff = 4;
    std::size_t n_fb = 3;
    std::size_t n_hid = 40;
    std::size_t n_out = 4;  // |X|
    bool recurrent = true;
    train::RegConfig reg;
    train::SurrogateConfig surrogate;
    snn::NeuronConfig hidden_cfg;
    snn::NeuronConfig output_cfg;
    double input_scale = 1.0;
    double dc_offset = 0.0;   // subtracted before TE/QE encoding
    double pad_value = 0.0;   // channel-mean padding at sequence edges (pre-scaling)

    bool is_snn() const { return structure == Structure::nfe_snn || structure == Structure::dfe_snn; }
    bool has_feedback() const {
        return structure == Structure::dfe_snn || structure == Structure::dfe_fir;
    }

    // Input-layer width: n_tap*N_enc without feedback, n_ff*N_enc + |X|*n_fb
    // with feedback (non-coherent link, one encoder).
    std::size_t n_in() const;

    // Label offset delta: the window ending at sample k estimates the symbol
    // at k - delta (window-centered targets).
    std::size_t label_offset() const;

    std::size_t window_len() const { return has_feedback() ? n_ff : n_tap; }

    train::BpttModel bptt_model() const;
    ComplexityCounts complexity() const;

    // Derive n_ff = ceil(n_tap/2), n_fb = n_tap - n_ff from n_tap.
    void split_taps();
};

// Encode one received value (scale, DC block for TE/QE, then the encoder).
SpikeRaster encode_sample(double y, const EqualizerSpec& spec);

// Stack the encoded window (newest first) into the SNN input; for feedback
// structures the one-hot rasters of the decision history (newest first,
// 1-based labels) follow below the encoded rows.
SpikeRaster assemble_input(std::span<const double> window, std::span<const int> decisions,
                           const EqualizerSpec& spec);

// Single-shot inference ops (reference path via run_network).
int nfe_infer(std::span<const double> window, const snn::WeightSet& w,
              const EqualizerSpec& spec);
int dfe_infer(std::span<const double> window, std::span<const int> decisions,
              const snn::WeightSet& w, const EqualizerSpec& spec);

struct TrainConfig {
    std::size_t epochs = 200;
    std::size_t batch = 20000;
    double sigma2_db = -20.0;
    train::OptimConfig optim;
    double lr_drop_at = 0.7;      // fraction of epochs after which lr drops
    double lr_drop_factor = 0.2;  // 1.0 disables the schedule
    double loss_print_every = 0;  // 0 = silent
};

struct TrainReport {
    std::vector<double> loss;  // per epoch (CE + reg)
    double final_loss = 0.0;
};

// BPTT-SG training on freshly generated channel data per epoch; feedback
// structures are teacher-forced (true labels in the feedback path).
TrainReport train_equalizer(const EqualizerSpec& spec, const chan::ImddConfig& channel,
                            const TrainConfig& cfg, snn::WeightSet& w, RandomStream& rng);

// Monte-Carlo evaluation at one noise power; DFE runs with self-decisions
// unless genie_feedback feeds the true labels into the feedback path.
RunArtifacts evaluate_equalizer(const EqualizerSpec& spec, const snn::WeightSet& w,
                                const chan::ImddConfig& channel, double sigma2_db,
                                std::size_t n_symbols, RandomStream& rng,
                                bool keep_decisions = false, bool genie_feedback = false);

// FIR baselines on the same alignment: fit on a pilot block, then evaluate.
RunArtifacts evaluate_fir(const EqualizerSpec& spec, const chan::ImddConfig& channel,
                          double sigma2_db, std::size_t pilot_symbols, std::size_t n_symbols,
                          RandomStream& rng);

// Resolve input_scale / dc_offset / pad_value of a spec from a noiseless
// calibration run over the given channel.
void resolve_preprocessing(EqualizerSpec& spec, const chan::ImddConfig& channel);

// ---- alternating encoder optimization (PGU + BPTT) -------------------------

struct AlternateSchedule {
    std::size_t total_epochs = 800;
    std::size_t pgu_epochs = 400;  // first half: one PGU step then one BPTT step
};

struct AlternateResult {
    std::vector<double> theta_enc;  // (mu_1..mu_N, width_1..width_N)
    TrainReport train;
};

// Alternately update the receptive-field encoder parameters with PGU (CE of
// the full pipeline on a fresh evaluation batch per epoch) and the SNN
// weights with BPTT; the encoder is frozen for the remaining epochs.
AlternateResult alternate_optimize(EqualizerSpec& spec, const chan::ImddConfig& channel,
                                   const AlternateSchedule& schedule,
                                   const pgu::PguConfig& pgu_cfg, const TrainConfig& train_cfg,
                                   snn::WeightSet& w, RandomStream& rng);

}  // namespace snnrx::eq
