#pragma once

#include "snnrx/bptt.hpp"
#include "snnrx/constellation.hpp"
#include "snnrx/decoders.hpp"
#include "snnrx/encoders.hpp"
#include "snnrx/prob.hpp"
#include "snnrx/stdp.hpp"

namespace snnrx::detector {

// noise power for unit average symbol energy: sigma2 = 1 / (log2|X| * Eb/N0)
double ebn0_to_sigma2(double ebn0_db, std::size_t bits_per_symbol);

// Encode inphase and quadrature independently with identical encoders and
// stack the rasters (N_in = 2 * N_enc).
SpikeRaster encode_iq(chan::cplx y, const codec::EncoderSpec& enc, RandomStream* rng = nullptr);

// ---- STDP detector (noiseless BPSK, dual Bernoulli encoder) ----------------

struct StdpExperimentConfig {
    std::size_t n_hid = 8;
    std::size_t K = 50;
    std::size_t train_symbols = 100;
    std::size_t eval_symbols = 10000;
    bool freeze_input = true;
    train::StdpConfig stdp;
    // thresholds keep both layers in the graded-rate regime; saturated
    // layers tie the output spike counts and break spike-rate decoding
    snn::NeuronConfig hidden{10.0, 5.0, 1.0, 10.0, 0.0, true};
    snn::NeuronConfig output{10.0, 5.0, 1.0, 60.0, 0.0, true};
};

// Train one randomly initialized SNN with clamped STDP and return the
// held-out classification accuracy.
double stdp_bpsk_accuracy(const StdpExperimentConfig& cfg, RandomStream& rng);

// ---- BPTT-SG detector -------------------------------------------------------

struct BpttDetectorConfig {
    codec::EncoderSpec encoder;  // per component
    std::size_t n_hid = 16;
    double ebn0_train_db = 10.0;
    std::size_t epochs = 1500;
    std::size_t batch = 10000;
    train::OptimConfig optim;
    train::SurrogateConfig surrogate;
    snn::NeuronConfig hidden;
    snn::NeuronConfig output;  // LI
    codec::DecoderSpec decoder;

    static BpttDetectorConfig qe16_default();
};

struct TrainedDetector {
    codec::EncoderSpec encoder;
    train::BpttModel model;
    snn::WeightSet w;
    std::vector<double> loss_trace;  // per training epoch
};

TrainedDetector train_bptt_detector(const BpttDetectorConfig& cfg, const chan::Constellation& c,
                                    RandomStream& rng);

struct DetectorEval {
    std::size_t n_syms = 0, n_bits = 0;
    std::size_t sym_err_snn = 0, sym_err_ml = 0;
    std::size_t bit_err_snn = 0, bit_err_ml = 0;
    double sdr = 0.0;  // SNN vs ML decisions

    double ber_snn() const { return n_bits ? double(bit_err_snn) / n_bits : 0.0; }
    double ber_ml() const { return n_bits ? double(bit_err_ml) / n_bits : 0.0; }
    double ser_snn() const { return n_syms ? double(sym_err_snn) / n_syms : 0.0; }
    double ser_ml() const { return n_syms ? double(sym_err_ml) / n_syms : 0.0; }
};

DetectorEval eval_bptt_detector(const TrainedDetector& d, const chan::Constellation& c,
                                double ebn0_db, std::size_t n_symbols, RandomStream& rng);

// ---- probabilistic-SNN detector ---------------------------------------------

struct ProbDetectorConfig {
    codec::EncoderSpec rfe;       // per component, K = 9
    std::size_t pad_steps = 2;    // empty steps appended (total K = 11)
    std::size_t n_hid = 40;
    train::SrmFilterSpec filter;  // delay bank 0..10
    train::ProbTrainConfig prob;  // gamma = 300, target at last step
    std::size_t epochs = 2000;
    std::size_t batch = 100;
    std::size_t calib_samples = 2000;
    double ebn0_train_db = 10.0;

    static ProbDetectorConfig rfe16_default();
};

struct TrainedProbDetector {
    codec::EncoderSpec rfe;
    std::size_t pad_steps = 2;
    train::SrmNetSpec spec;
    train::SrmWeights w;
    std::vector<double> thresholds;  // deterministic conversion
};

TrainedProbDetector train_prob_detector(const ProbDetectorConfig& cfg,
                                        const chan::Constellation& c, RandomStream& rng);

// Deterministic converted network, EOTM readout.
DetectorEval eval_prob_detector(const TrainedProbDetector& d, const chan::Constellation& c,
                                double ebn0_db, std::size_t n_symbols, RandomStream& rng);

}  // namespace snnrx::detector
