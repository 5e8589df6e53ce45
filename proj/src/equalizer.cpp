#include "snnrx/equalizer.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "snnrx/fir.hpp"

namespace snnrx::eq {

std::size_t EqualizerSpec::n_in() const {
    if (has_feedback()) return n_ff * encoder.output_rows() + n_out * n_fb;
    return n_tap * encoder.output_rows();
}

std::size_t EqualizerSpec::label_offset() const {
    // window-centered targets; for feedback structures the oldest
    // feed-forward sample is the target (n_ff = ceil(n_tap/2) makes both
    // offsets coincide for odd n_tap)
    return has_feedback() ? n_ff - 1 : n_tap / 2;
}

void EqualizerSpec::split_taps() {
    n_ff = (n_tap + 1) / 2;
    n_fb = n_tap - n_ff;
}

train::BpttModel EqualizerSpec::bptt_model() const {
    train::BpttModel m;
    m.snn.n_in = n_in();
    m.snn.n_hid = n_hid;
    m.snn.n_out = n_out;
    m.snn.recurrent = recurrent;
    m.snn.hidden = hidden_cfg;
    m.snn.output = output_cfg;
    m.readout = decoder.variant == codec::DecoderKind::motm ? train::Readout::motm
                                                            : train::Readout::eotm;
    m.surrogate = surrogate;
    return m;
}

ComplexityCounts EqualizerSpec::complexity() const {
    ComplexityCounts c;
    c.structure = structure;
    c.n_hid = n_hid;
    c.n_out = n_out;
    c.n_enc = encoder.output_rows();
    c.n_tap = n_tap;
    c.n_ff = n_ff;
    c.n_fb = n_fb;
    c.x_size = n_out;
    c.recurrent = recurrent;
    c.K = encoder.K;
    return c;
}

SpikeRaster encode_sample(double y, const EqualizerSpec& spec) {
    double v = y * spec.input_scale;
    if (spec.encoder.variant == codec::EncoderKind::ternary ||
        spec.encoder.variant == codec::EncoderKind::quantization)
        v -= spec.dc_offset;
    return codec::encode(v, spec.encoder);
}

namespace {

struct Stream {
    std::vector<double> y;
    std::vector<std::size_t> index;  // 0-based constellation index
};

Stream gen_stream(const chan::ImddConfig& channel, double sigma2_db, std::size_t n_symbols,
                  RandomStream& rng) {
    const std::size_t bps = channel.constellation.bits_per_symbol();
    std::vector<uint8_t> bits(n_symbols * bps);
    for (auto& b : bits) b = rng.bernoulli(0.5) ? 1 : 0;
    chan::NoiseSpec noise{sigma2_db};
    auto res = chan::imdd_transmit(bits, channel, noise, rng);
    return {std::move(res.y), std::move(res.index)};
}

struct EncCache {
    std::vector<SpikeRaster> enc;
    SpikeRaster pad;
};

EncCache build_cache(const Stream& s, const EqualizerSpec& spec) {
    EncCache c;
    c.enc.reserve(s.y.size());
    for (double v : s.y) c.enc.push_back(encode_sample(v, spec));
    c.pad = encode_sample(spec.pad_value, spec);
    return c;
}

// input raster for target t: window newest-first from cached symbol rasters
// (channel-mean padding beyond the stream), then one-hot decision blocks
void assemble_cached(const EncCache& cache, std::ptrdiff_t k_newest,
                     std::span<const int> decisions, const EqualizerSpec& spec,
                     SpikeRaster& out) {
    const std::size_t n_enc = spec.encoder.output_rows();
    const std::size_t K = spec.encoder.K;
    const std::size_t w = spec.window_len();
    const std::size_t rows = spec.n_in();
    const auto n = static_cast<std::ptrdiff_t>(cache.enc.size());

    if (out.rows != rows || out.cols != K) {
        out = SpikeRaster(rows, K, cache.pad.polarity);
    }
    for (std::size_t t = 0; t < w; ++t) {
        const std::ptrdiff_t k = k_newest - static_cast<std::ptrdiff_t>(t);
        const SpikeRaster& src = (k < 0 || k >= n) ? cache.pad : cache.enc[k];
        std::memcpy(out.data.data() + t * n_enc * K, src.data.data(), n_enc * K);
    }
    if (spec.has_feedback()) {
        int8_t* fb = out.data.data() + w * n_enc * K;
        std::memset(fb, 0, spec.n_out * spec.n_fb * K);
        for (std::size_t u = 0; u < spec.n_fb; ++u) {
            const int lab = decisions[u];
            fb[(u * spec.n_out + static_cast<std::size_t>(lab - 1)) * K] = 1;
        }
    }
}

}  // namespace

SpikeRaster assemble_input(std::span<const double> window, std::span<const int> decisions,
                           const EqualizerSpec& spec) {
    if (window.size() != spec.window_len())
        throw std::invalid_argument("assemble_input: window length mismatch");
    SpikeRaster out;
    for (double v : window) out.append_rows(encode_sample(v, spec));
    if (spec.has_feedback()) {
        if (decisions.size() != spec.n_fb)
            throw std::invalid_argument("assemble_input: decision history mismatch");
        for (int lab : decisions)
            out.append_rows(codec::encode_one_hot(lab, spec.n_out, spec.encoder.K));
    }
    return out;
}

int nfe_infer(std::span<const double> window, const snn::WeightSet& w,
              const EqualizerSpec& spec) {
    const SpikeRaster input = assemble_input(window, {}, spec);
    const auto model = spec.bptt_model();
    const auto run = snn::run_network(w, input, model.snn, spec.encoder.K);
    return codec::decode(run.out_spikes, run.out_potentials, spec.decoder);
}

int dfe_infer(std::span<const double> window, std::span<const int> decisions,
              const snn::WeightSet& w, const EqualizerSpec& spec) {
    const SpikeRaster input = assemble_input(window, decisions, spec);
    const auto model = spec.bptt_model();
    const auto run = snn::run_network(w, input, model.snn, spec.encoder.K);
    return codec::decode(run.out_spikes, run.out_potentials, spec.decoder);
}

void resolve_preprocessing(EqualizerSpec& spec, const chan::ImddConfig& channel) {
    RandomStream rng(0x9a7eu, "equalizer-preproc");
    const auto s = gen_stream(channel, -300.0, 4096, rng);
    double mean = 0.0;
    double top = 0.0;
    std::vector<double> cluster_sum(channel.constellation.size(), 0.0);
    std::vector<std::size_t> cluster_n(channel.constellation.size(), 0);
    for (std::size_t k = 0; k < s.y.size(); ++k) {
        mean += s.y[k];
        cluster_sum[s.index[k]] += s.y[k];
        ++cluster_n[s.index[k]];
    }
    mean /= static_cast<double>(s.y.size());
    for (std::size_t i = 0; i < cluster_sum.size(); ++i)
        if (cluster_n[i]) top = std::max(top, cluster_sum[i] / cluster_n[i]);
    if (top <= 0.0) throw std::runtime_error("resolve_preprocessing: degenerate channel");

    // scale the strongest noiseless cluster to 7 so the table encoder ranges
    // (RFE fields up to 7, TE/QE range 3.5 after the DC block) apply as-is
    spec.input_scale = 7.0 / top;
    spec.pad_value = mean;
    spec.dc_offset = mean * spec.input_scale;
}

namespace {

struct BatchBuf {
    std::vector<train::Sample> samples;
};

void build_training_batch(const Stream& s, const EncCache& cache, const EqualizerSpec& spec,
                          std::size_t batch, std::size_t margin, BatchBuf& buf) {
    const std::size_t delta = spec.label_offset();
    buf.samples.resize(batch);
    std::vector<int> teacher(spec.n_fb, 1);
    for (std::size_t b = 0; b < batch; ++b) {
        const std::size_t t = margin + b;
        const std::size_t k = t + delta;
        if (spec.has_feedback())
            for (std::size_t u = 0; u < spec.n_fb; ++u)
                teacher[u] = static_cast<int>(s.index[t - 1 - u]) + 1;
        assemble_cached(cache, static_cast<std::ptrdiff_t>(k), teacher, spec,
                        buf.samples[b].input);
        buf.samples[b].label = static_cast<int>(s.index[t]) + 1;
    }
}

}  // namespace

TrainReport train_equalizer(const EqualizerSpec& spec, const chan::ImddConfig& channel,
                            const TrainConfig& cfg, snn::WeightSet& w, RandomStream& rng) {
    if (!spec.is_snn()) throw std::invalid_argument("train_equalizer: SNN structures only");
    const auto model = spec.bptt_model();
    if (w.n_in() != model.snn.n_in)
        throw std::invalid_argument("train_equalizer: weight/spec mismatch");

    train::Optimizer opt(cfg.optim, w);
    const std::size_t margin = spec.window_len() + spec.n_fb + spec.label_offset() + 2;
    const auto drop_epoch = static_cast<std::size_t>(cfg.lr_drop_at * cfg.epochs);
    TrainReport rep;
    rep.loss.reserve(cfg.epochs);
    BatchBuf buf;

    for (std::size_t e = 0; e < cfg.epochs; ++e) {
        if (cfg.lr_drop_factor != 1.0 && e == drop_epoch && e > 0)
            opt.set_lr(cfg.optim.lr * cfg.lr_drop_factor);
        const Stream s = gen_stream(channel, cfg.sigma2_db, cfg.batch + 2 * margin, rng);
        const EncCache cache = build_cache(s, spec);
        build_training_batch(s, cache, spec, cfg.batch, margin, buf);
        const auto res = train::bptt_sg_grad(model, w, buf.samples, spec.reg);
        opt.step(w, res.grads);
        rep.loss.push_back(res.loss_ce + res.loss_reg);
        if (cfg.loss_print_every > 0 && (e % static_cast<std::size_t>(cfg.loss_print_every) == 0))
            std::fprintf(stderr, "epoch %zu loss %.6f z_avg %.1f\n", e, rep.loss.back(),
                         res.z_avg);
    }
    rep.final_loss = rep.loss.empty() ? 0.0 : rep.loss.back();
    return rep;
}

RunArtifacts evaluate_equalizer(const EqualizerSpec& spec, const snn::WeightSet& w,
                                const chan::ImddConfig& channel, double sigma2_db,
                                std::size_t n_symbols, RandomStream& rng,
                                bool keep_decisions, bool genie_feedback) {
    const auto model = spec.bptt_model();
    const train::SnnRunner runner(model, w);
    const auto& cst = channel.constellation;
    const std::size_t bps = cst.bits_per_symbol();
    const std::size_t delta = spec.label_offset();

    RunArtifacts run;
    if (keep_decisions) {
        run.decisions.emplace();
        run.decisions->reserve(n_symbols);
        run.reference_decisions.emplace();
        run.reference_decisions->reserve(n_symbols);
    }

    const std::size_t chunk_size = 200000;
    SpikeRaster input;
    std::vector<int> history(spec.n_fb, 1);

    std::size_t remaining = n_symbols;
    while (remaining > 0) {
        const std::size_t n = std::min(chunk_size, remaining);
        remaining -= n;
        const Stream s = gen_stream(channel, sigma2_db, n, rng);
        const EncCache cache = build_cache(s, spec);
        std::fill(history.begin(), history.end(), 1);  // fresh stream

        for (std::size_t t = 0; t < n; ++t) {
            const auto k = static_cast<std::ptrdiff_t>(t + delta);
            assemble_cached(cache, k, history, spec, input);
            const auto res = runner.infer(input);
            run.hidden_spikes += static_cast<double>(res.hidden_spikes);
            ++run.n_inferences;

            if (spec.has_feedback() && spec.n_fb > 0) {
                for (std::size_t u = spec.n_fb; u-- > 1;) history[u] = history[u - 1];
                history[0] = genie_feedback ? static_cast<int>(s.index[t]) + 1 : res.label;
            }

            const std::size_t truth = s.index[t];
            const auto dec = static_cast<std::size_t>(res.label - 1);
            run.sym_errors += dec != truth;
            ++run.n_syms;
            const auto& bt = cst.bit_map[truth];
            const auto& bd = cst.bit_map[dec];
            for (std::size_t i = 0; i < bps; ++i) run.bit_errors += bt[i] != bd[i];
            run.n_bits += bps;
            if (keep_decisions) {
                run.decisions->push_back(dec);
                run.reference_decisions->push_back(truth);
            }
        }
    }
    return run;
}

RunArtifacts evaluate_fir(const EqualizerSpec& spec, const chan::ImddConfig& channel,
                          double sigma2_db, std::size_t pilot_symbols, std::size_t n_symbols,
                          RandomStream& rng) {
    const auto& cst = channel.constellation;
    const std::size_t bps = cst.bits_per_symbol();
    const bool dfe = spec.structure == Structure::dfe_fir;
    const std::size_t n_ff = dfe ? spec.n_ff : spec.n_tap;
    const std::size_t n_fb = dfe ? spec.n_fb : 0;
    const std::size_t delta = spec.label_offset();

    const Stream pilot = gen_stream(channel, sigma2_db, pilot_symbols, rng);
    const FirEqualizer f = fir_equalize(dfe, pilot.y, pilot.index, cst, n_ff, n_fb, delta);

    RunArtifacts run;
    const std::size_t chunk_size = 200000;
    std::size_t remaining = n_symbols;
    while (remaining > 0) {
        const std::size_t n = std::min(chunk_size, remaining);
        remaining -= n;
        const Stream s = gen_stream(channel, sigma2_db, n, rng);
        const auto dec = fir_detect(f, s.y, cst, n_ff, delta);
        for (std::size_t t = 0; t < n; ++t) {
            run.sym_errors += dec[t] != s.index[t];
            ++run.n_syms;
            const auto& bt = cst.bit_map[s.index[t]];
            const auto& bd = cst.bit_map[dec[t]];
            for (std::size_t i = 0; i < bps; ++i) run.bit_errors += bt[i] != bd[i];
            run.n_bits += bps;
        }
        run.n_inferences += n;
    }
    return run;
}

AlternateResult alternate_optimize(EqualizerSpec& spec, const chan::ImddConfig& channel,
                                   const AlternateSchedule& schedule,
                                   const pgu::PguConfig& pgu_cfg, const TrainConfig& train_cfg,
                                   snn::WeightSet& w, RandomStream& rng) {
    if (spec.encoder.variant != codec::EncoderKind::rfe_linear &&
        spec.encoder.variant != codec::EncoderKind::rfe_gaussian)
        throw std::invalid_argument("alternate_optimize: receptive-field encoder required");
    const std::size_t n_enc = spec.encoder.n_enc;
    const auto model = spec.bptt_model();
    train::Optimizer opt(train_cfg.optim, w);

    std::vector<double> theta(2 * n_enc);
    for (std::size_t j = 0; j < n_enc; ++j) {
        theta[j] = spec.encoder.mu[j];
        theta[n_enc + j] = spec.encoder.width[j];
    }

    const auto apply_theta = [&](EqualizerSpec& sp, const std::vector<double>& th) {
        for (std::size_t j = 0; j < n_enc; ++j) {
            sp.encoder.mu[j] = th[j];
            sp.encoder.width[j] = std::max(std::abs(th[n_enc + j]), 1e-3);
        }
    };

    const std::size_t margin = spec.window_len() + spec.n_fb + spec.label_offset() + 2;
    const auto drop_epoch =
        static_cast<std::size_t>(train_cfg.lr_drop_at * schedule.total_epochs);
    AlternateResult out;
    out.train.loss.reserve(schedule.total_epochs);
    BatchBuf buf;

    for (std::size_t e = 0; e < schedule.total_epochs; ++e) {
        if (train_cfg.lr_drop_factor != 1.0 && e == drop_epoch && e > 0)
            opt.set_lr(train_cfg.optim.lr * train_cfg.lr_drop_factor);
        if (e < schedule.pgu_epochs) {
            // fresh evaluation stream, shared by every variation of this step
            const Stream pol =
                gen_stream(channel, train_cfg.sigma2_db, pgu_cfg.pol_batch + 2 * margin, rng);
            const train::SnnRunner runner(model, w);
            const auto evaluator = [&](const std::vector<double>& th) {
                EqualizerSpec sp = spec;
                apply_theta(sp, th);
                const EncCache cache = build_cache(pol, sp);
                const std::size_t delta = sp.label_offset();
                SpikeRaster input;
                std::vector<int> teacher(sp.n_fb, 1);
                double ce = 0.0;
                for (std::size_t b = 0; b < pgu_cfg.pol_batch; ++b) {
                    const std::size_t t = margin + b;
                    if (sp.has_feedback())
                        for (std::size_t u = 0; u < sp.n_fb; ++u)
                            teacher[u] = static_cast<int>(pol.index[t - 1 - u]) + 1;
                    assemble_cached(cache, static_cast<std::ptrdiff_t>(t + delta), teacher, sp,
                                    input);
                    const auto res = runner.infer(input);
                    double mx = res.logits[0];
                    for (double v : res.logits) mx = std::max(mx, v);
                    double z = 0.0;
                    for (double v : res.logits) z += std::exp(v - mx);
                    ce -= res.logits[pol.index[t]] - mx - std::log(z);
                }
                return ce / static_cast<double>(pgu_cfg.pol_batch);
            };
            theta = pgu::pgu_step(theta, evaluator, pgu_cfg, rng);
            apply_theta(spec, theta);
        }

        const Stream s =
            gen_stream(channel, train_cfg.sigma2_db, train_cfg.batch + 2 * margin, rng);
        const EncCache cache = build_cache(s, spec);
        build_training_batch(s, cache, spec, train_cfg.batch, margin, buf);
        const auto res = train::bptt_sg_grad(model, w, buf.samples, spec.reg);
        opt.step(w, res.grads);
        out.train.loss.push_back(res.loss_ce + res.loss_reg);
    }
    out.train.final_loss = out.train.loss.empty() ? 0.0 : out.train.loss.back();
    out.theta_enc = theta;
    return out;
}

}  // namespace snnrx::eq
