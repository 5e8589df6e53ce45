#include "snnrx/detector.hpp"

#include <cmath>
#include <stdexcept>

namespace snnrx::detector {

double ebn0_to_sigma2(double ebn0_db, std::size_t bits_per_symbol) {
    const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
    return 1.0 / (static_cast<double>(bits_per_symbol) * ebn0);
}

SpikeRaster encode_iq(chan::cplx y, const codec::EncoderSpec& enc, RandomStream* rng) {
    SpikeRaster r = codec::encode(y.real(), enc, rng);
    r.append_rows(codec::encode(y.imag(), enc, rng));
    return r;
}

// ---- STDP -------------------------------------------------------------------

namespace {

// dual Bernoulli encoding of a real BPSK observation: the first signal
// encodes max(0, x), the second max(0, -x)
SpikeRaster encode_dual_be(double x, std::size_t K, RandomStream& rng) {
    codec::EncoderSpec be;
    be.variant = codec::EncoderKind::bernoulli;
    be.K = K;
    be.x_min = 0.0;
    be.x_max = 1.0;
    SpikeRaster r = codec::encode_bernoulli(std::min(1.0, std::max(0.0, x)), be, rng);
    r.append_rows(codec::encode_bernoulli(std::min(1.0, std::max(0.0, -x)), be, rng));
    return r;
}

}  // namespace

double stdp_bpsk_accuracy(const StdpExperimentConfig& cfg, RandomStream& rng) {
    const auto bpsk = chan::Constellation::bpsk();

    snn::WeightSet w;
    w.theta_in = Mat(cfg.n_hid, 2);
    w.theta_out = Mat(2, cfg.n_hid);
    const double sd = std::sqrt(2.0);
    for (double& v : w.theta_in.a) v = rng.normal(0.5, sd);
    for (double& v : w.theta_out.a) v = rng.normal(0.5, sd);

    for (std::size_t n = 0; n < cfg.train_symbols; ++n) {
        const int label = rng.bernoulli(0.5) ? 2 : 1;  // label 1 <-> +1, 2 <-> -1
        const double x = bpsk.points[label - 1].real();
        const SpikeRaster input = encode_dual_be(x, cfg.K, rng);
        w = train::stdp_train_step(w, input, label, cfg.freeze_input, cfg.stdp, cfg.hidden);
    }

    snn::SnnSpec spec;
    spec.n_in = 2;
    spec.n_hid = cfg.n_hid;
    spec.n_out = 2;
    spec.hidden = cfg.hidden;
    spec.output = cfg.output;
    const codec::DecoderSpec srd{codec::DecoderKind::spike_rate};

    std::size_t correct = 0;
    for (std::size_t n = 0; n < cfg.eval_symbols; ++n) {
        const int label = rng.bernoulli(0.5) ? 2 : 1;
        const double x = bpsk.points[label - 1].real();
        const SpikeRaster input = encode_dual_be(x, cfg.K, rng);
        const auto run = snn::run_network(w, input, spec, cfg.K);
        correct += codec::decode(run.out_spikes, run.out_potentials, srd) == label;
    }
    return static_cast<double>(correct) / static_cast<double>(cfg.eval_symbols);
}

// ---- BPTT detector ------------------------------------------------------------

BpttDetectorConfig BpttDetectorConfig::qe16_default() {
    BpttDetectorConfig cfg;
    const double c0 = std::sqrt(10.0) / 10.0;
    cfg.encoder.variant = codec::EncoderKind::quantization;
    cfg.encoder.n_enc = 2;
    cfg.encoder.K = 5;
    cfg.encoder.x_max = 4.0 * c0;
    cfg.encoder.x_min = -cfg.encoder.x_max;
    cfg.hidden = {.tau_m = 10.0, .tau_s = 5.0, .dt = 1.0, .v_th = 1.0, .v_rest = 0.0,
                  .spiking = true};
    cfg.output = {.tau_m = 1000.0, .tau_s = 5.0, .dt = 1.0, .v_th = 1.0, .v_rest = 0.0,
                  .spiking = false};
    cfg.decoder.variant = codec::DecoderKind::eotm;
    cfg.optim.lr = 1e-3;
    return cfg;
}

TrainedDetector train_bptt_detector(const BpttDetectorConfig& cfg, const chan::Constellation& c,
                                    RandomStream& rng) {
    TrainedDetector d;
    d.encoder = cfg.encoder;
    d.model.snn.n_in = 2 * cfg.encoder.output_rows();
    d.model.snn.n_hid = cfg.n_hid;
    d.model.snn.n_out = c.size();
    d.model.snn.recurrent = false;
    d.model.snn.hidden = cfg.hidden;
    d.model.snn.output = cfg.output;
    d.model.readout = cfg.decoder.variant == codec::DecoderKind::motm ? train::Readout::motm
                                                                      : train::Readout::eotm;
    d.model.surrogate = cfg.surrogate;
    d.w = train::init_weights(d.model.snn.n_in, cfg.n_hid, c.size(), false, rng);

    const double sigma2 = ebn0_to_sigma2(cfg.ebn0_train_db, c.bits_per_symbol());
    train::Optimizer opt(cfg.optim, d.w);
    std::vector<train::Sample> batch(cfg.batch);

    for (std::size_t e = 0; e < cfg.epochs; ++e) {
        std::vector<chan::cplx> x(cfg.batch);
        for (std::size_t m = 0; m < cfg.batch; ++m) {
            const auto idx = rng.integer(c.size());
            batch[m].label = static_cast<int>(idx) + 1;
            x[m] = c.points[idx];
        }
        const auto y = chan::awgn_transmit(x, sigma2, rng);
        for (std::size_t m = 0; m < cfg.batch; ++m)
            batch[m].input = encode_iq(y[m], cfg.encoder);
        const auto res = train::bptt_sg_grad(d.model, d.w, batch, {});
        opt.step(d.w, res.grads);
        d.loss_trace.push_back(res.loss_ce);
    }
    return d;
}

DetectorEval eval_bptt_detector(const TrainedDetector& d, const chan::Constellation& c,
                                double ebn0_db, std::size_t n_symbols, RandomStream& rng) {
    const double sigma2 = ebn0_to_sigma2(ebn0_db, c.bits_per_symbol());
    const train::SnnRunner runner(d.model, d.w);
    DetectorEval ev;
    const std::size_t bps = c.bits_per_symbol();
    std::size_t disagree = 0;

    const std::size_t chunk = 20000;
    std::size_t remaining = n_symbols;
    while (remaining > 0) {
        const std::size_t n = std::min(chunk, remaining);
        remaining -= n;
        std::vector<chan::cplx> x(n);
        std::vector<std::size_t> truth(n);
        for (std::size_t m = 0; m < n; ++m) {
            truth[m] = rng.integer(c.size());
            x[m] = c.points[truth[m]];
        }
        const auto y = chan::awgn_transmit(x, sigma2, rng);
        for (std::size_t m = 0; m < n; ++m) {
            const auto snn_idx =
                static_cast<std::size_t>(runner.infer(encode_iq(y[m], d.encoder)).label - 1);
            const auto ml_idx = chan::ml_detect(y[m], c);
            disagree += snn_idx != ml_idx;
            ev.sym_err_snn += snn_idx != truth[m];
            ev.sym_err_ml += ml_idx != truth[m];
            for (std::size_t i = 0; i < bps; ++i) {
                ev.bit_err_snn += c.bit_map[snn_idx][i] != c.bit_map[truth[m]][i];
                ev.bit_err_ml += c.bit_map[ml_idx][i] != c.bit_map[truth[m]][i];
            }
            ++ev.n_syms;
            ev.n_bits += bps;
        }
    }
    ev.sdr = ev.n_syms ? static_cast<double>(disagree) / ev.n_syms : 0.0;
    return ev;
}

// ---- probabilistic detector ---------------------------------------------------

ProbDetectorConfig ProbDetectorConfig::rfe16_default() {
    ProbDetectorConfig cfg;
    const double c0 = std::sqrt(10.0) / 10.0;
    cfg.rfe.variant = codec::EncoderKind::rfe_linear;
    cfg.rfe.n_enc = 2;
    cfg.rfe.K = 9;
    cfg.rfe.mu = {-c0, c0};
    cfg.rfe.width = {18.0 * c0, 18.0 * c0};
    cfg.filter.kind = snn::FilterKind::delay;
    cfg.filter.l_off_max = 10;
    cfg.filter.tau_rec = 0.5;
    cfg.prob.gamma = 300.0;
    cfg.prob.nu_z = 3.0;
    cfg.prob.nu_h = 3.0;
    cfg.prob.target_mode = train::TargetMode::last_step;
    return cfg;
}

namespace {

SpikeRaster encode_iq_padded(chan::cplx y, const codec::EncoderSpec& enc,
                             std::size_t pad_steps) {
    const SpikeRaster base = encode_iq(y, enc);
    SpikeRaster out(base.rows, base.cols + pad_steps);
    for (std::size_t r = 0; r < base.rows; ++r)
        for (std::size_t k = 0; k < base.cols; ++k) out.at(r, k) = base.at(r, k);
    return out;
}

}  // namespace

TrainedProbDetector train_prob_detector(const ProbDetectorConfig& cfg,
                                        const chan::Constellation& c, RandomStream& rng) {
    TrainedProbDetector d;
    d.rfe = cfg.rfe;
    d.pad_steps = cfg.pad_steps;
    d.spec.n_in = 2 * cfg.rfe.output_rows();
    d.spec.n_hid = cfg.n_hid;
    d.spec.n_out = c.size();
    d.spec.K = cfg.rfe.K + cfg.pad_steps;
    d.spec.filter = cfg.filter;
    d.w = train::SrmWeights::init(d.spec, rng);

    const double sigma2 = ebn0_to_sigma2(cfg.ebn0_train_db, c.bits_per_symbol());
    std::vector<train::ProbSample> batch(cfg.batch);

    for (std::size_t e = 0; e < cfg.epochs; ++e) {
        std::vector<chan::cplx> x(cfg.batch);
        for (std::size_t m = 0; m < cfg.batch; ++m) {
            const auto idx = rng.integer(c.size());
            batch[m].label = static_cast<int>(idx) + 1;
            x[m] = c.points[idx];
        }
        const auto y = chan::awgn_transmit(x, sigma2, rng);
        for (std::size_t m = 0; m < cfg.batch; ++m)
            batch[m].input = encode_iq_padded(y[m], cfg.rfe, cfg.pad_steps);
        train::prob_train_step(d.spec, d.w, batch, cfg.prob, rng);
    }

    // deterministic conversion on a calibration batch at the training SNR
    std::vector<train::ProbSample> calib(cfg.calib_samples);
    std::vector<chan::cplx> x(cfg.calib_samples);
    for (std::size_t m = 0; m < cfg.calib_samples; ++m) {
        const auto idx = rng.integer(c.size());
        calib[m].label = static_cast<int>(idx) + 1;
        x[m] = c.points[idx];
    }
    const auto y = chan::awgn_transmit(x, sigma2, rng);
    for (std::size_t m = 0; m < cfg.calib_samples; ++m)
        calib[m].input = encode_iq_padded(y[m], cfg.rfe, cfg.pad_steps);
    d.thresholds = train::prob_to_deterministic(d.spec, d.w, calib, rng);
    return d;
}

DetectorEval eval_prob_detector(const TrainedProbDetector& d, const chan::Constellation& c,
                                double ebn0_db, std::size_t n_symbols, RandomStream& rng) {
    const double sigma2 = ebn0_to_sigma2(ebn0_db, c.bits_per_symbol());
    DetectorEval ev;
    const std::size_t bps = c.bits_per_symbol();
    std::size_t disagree = 0;

    const std::size_t chunk = 20000;
    std::size_t remaining = n_symbols;
    while (remaining > 0) {
        const std::size_t n = std::min(chunk, remaining);
        remaining -= n;
        std::vector<chan::cplx> x(n);
        std::vector<std::size_t> truth(n);
        for (std::size_t m = 0; m < n; ++m) {
            truth[m] = rng.integer(c.size());
            x[m] = c.points[truth[m]];
        }
        const auto y = chan::awgn_transmit(x, sigma2, rng);
        for (std::size_t m = 0; m < n; ++m) {
            const auto input = encode_iq_padded(y[m], d.rfe, d.pad_steps);
            const auto res = train::srm_infer_deterministic(d.spec, d.w, d.thresholds, input);
            const auto snn_idx = static_cast<std::size_t>(res.label - 1);
            const auto ml_idx = chan::ml_detect(y[m], c);
            disagree += snn_idx != ml_idx;
            ev.sym_err_snn += snn_idx != truth[m];
            ev.sym_err_ml += ml_idx != truth[m];
            for (std::size_t i = 0; i < bps; ++i) {
                ev.bit_err_snn += c.bit_map[snn_idx][i] != c.bit_map[truth[m]][i];
                ev.bit_err_ml += c.bit_map[ml_idx][i] != c.bit_map[truth[m]][i];
            }
            ++ev.n_syms;
            ev.n_bits += bps;
        }
    }
    ev.sdr = ev.n_syms ? static_cast<double>(disagree) / ev.n_syms : 0.0;
    return ev;
}

}  // namespace snnrx::detector
