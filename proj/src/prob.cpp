#include "snnrx/prob.hpp"

#include <cmath>
#include <stdexcept>

#include "snnrx/srm.hpp"

namespace snnrx::train {

namespace {
constexpr double kProbClamp = 1e-12;

double ln_p(double p, int z) {
    const double q = z ? p : 1.0 - p;
    return std::log(std::min(1.0 - kProbClamp, std::max(kProbClamp, q)));
}
}  // namespace

void ProbTrainConfig::validate() const {
    if (gamma < 1.0) throw std::invalid_argument("ProbTrainConfig: gamma >= 1");
    if (!(nu_z > 0.0) || !(nu_h > 0.0))
        throw std::invalid_argument("ProbTrainConfig: positive learning rates");
}

std::vector<std::vector<double>> SrmFilterSpec::build() const {
    std::vector<std::vector<double>> bank;
    switch (kind) {
        case snn::FilterKind::exponential:
            bank.push_back(snn::make_filter(kind, {.tau = tau_m, .dt = dt, .l_max = l_max}));
            break;
        case snn::FilterKind::delay:
            for (int off = 0; off <= l_off_max; ++off)
                bank.push_back(snn::make_filter(kind, {.dt = dt, .l_off = off}));
            break;
        case snn::FilterKind::delayed_raised_cosine:
            for (int off = 0; off <= l_off_max; ++off)
                bank.push_back(
                    snn::make_filter(kind, {.dt = dt, .l_max = l_max, .l_off = off}));
            break;
        default:
            throw std::invalid_argument("SrmFilterSpec: unsupported feed-forward filter");
    }
    return bank;
}

SrmWeights SrmWeights::init(const SrmNetSpec& spec, RandomStream& rng) {
    const std::size_t F = spec.filter.n_filters();
    SrmWeights w;
    if (spec.n_hid > 0) {
        w.theta_h = Mat(spec.n_hid, spec.n_in * F);
        const double s = 1.0 / std::sqrt(static_cast<double>(spec.n_in * F));
        for (double& v : w.theta_h.a) v = s * rng.normal();
        w.theta_h_rec.assign(spec.n_hid, 1.0);
    }
    w.theta_o = Mat(spec.n_out, spec.front_width() * F);
    const double s = 1.0 / std::sqrt(static_cast<double>(spec.front_width() * F));
    for (double& v : w.theta_o.a) v = s * rng.normal();
    w.theta_o_rec.assign(spec.n_out, 1.0);
    return w;
}

SpikeRaster target_pattern(int label, std::size_t n_out, std::size_t K, TargetMode mode) {
    if (label < 1 || static_cast<std::size_t>(label) > n_out)
        throw std::invalid_argument("target_pattern: label out of range");
    SpikeRaster r(n_out, K);
    const std::size_t row = static_cast<std::size_t>(label - 1);
    if (mode == TargetMode::last_step)
        r.at(row, K - 1) = 1;
    else
        for (std::size_t k = 0; k < K; ++k) r.at(row, k) = 1;
    return r;
}

double prob_learning_signal(const SpikeRaster& targets, const Mat& probs, double gamma) {
    if (targets.rows != probs.rows || targets.cols != probs.cols)
        throw std::invalid_argument("prob_learning_signal: shape mismatch");
    double ell = 0.0;
    for (std::size_t j = 0; j < targets.rows; ++j)
        for (std::size_t k = 0; k < targets.cols; ++k) {
            const int z = targets.at(j, k);
            ell += (z ? gamma : 1.0) * ln_p(probs(j, k), z);
        }
    return ell;
}

namespace {

// (z * alpha^m)[kappa] for all filters of the bank, all signals, all steps.
// out(row = signal * F + m, col = kappa)
void filtered_signals(const SpikeRaster& z, const std::vector<std::vector<double>>& bank,
                      Mat& out) {
    const std::size_t F = bank.size();
    const std::size_t K = z.cols;
    out = Mat(z.rows * F, K);
    for (std::size_t j = 0; j < z.rows; ++j) {
        const int8_t* row = z.row(j);
        for (std::size_t k = 0; k < K; ++k) {
            if (row[k] == 0) continue;
            const double v = row[k];
            for (std::size_t m = 0; m < F; ++m) {
                const auto& alpha = bank[m];
                double* o = out.row(j * F + m);
                for (std::size_t l = 0; l < alpha.size() && k + l < K; ++l)
                    o[k + l] += v * alpha[l];
            }
        }
    }
}

struct LayerSim {
    Mat v;        // width x K membrane potentials
    Mat p;        // width x K firing probabilities
    SpikeRaster z;  // realized spikes
    Mat fb;       // width x K, (z * beta)[kappa-1] values used at each step
};

// Simulate one SRM layer: membrane from filtered presynaptic signals plus
// self-feedback of realized spikes. If forced_output is non-null the realized
// spikes are taken from it (observable neurons); otherwise they are sampled
// (rng) or thresholded in the probability domain (thresholds).
void simulate_layer(const Mat& pre_filtered, const Mat& theta, const std::vector<double>& th_rec,
                    double v_th, double decay_rec, std::size_t K, const SpikeRaster* forced,
                    RandomStream* rng, const std::vector<double>* thresholds, LayerSim& sim) {
    const std::size_t width = theta.rows;
    sim.v = Mat(width, K);
    sim.p = Mat(width, K);
    sim.z = SpikeRaster(width, K);
    sim.fb = Mat(width, K);
    std::vector<double> r(width, 0.0);  // running (z * beta)[kappa]

    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t j = 0; j < width; ++j) {
            double v = 0.0;
            const double* w = theta.row(j);
            for (std::size_t c = 0; c < theta.cols; ++c) v += w[c] * pre_filtered(c, k);
            const double fb = k >= 1 ? r[j] : 0.0;
            sim.fb(j, k) = fb;
            v += th_rec[j] * fb;
            sim.v(j, k) = v;
            const double p = snn::sigmoid(v - v_th);
            sim.p(j, k) = p;

            uint8_t spike;
            if (forced)
                spike = forced->at(j, k) ? 1 : 0;
            else if (thresholds)
                spike = p > (*thresholds)[j] ? 1 : 0;
            else
                spike = rng->bernoulli(p) ? 1 : 0;
            sim.z.at(j, k) = spike;
            r[j] = decay_rec * r[j] - static_cast<double>(spike);  // beta[0] = -1
        }
    }
}

}  // namespace

ProbStepStats prob_train_step(const SrmNetSpec& spec, SrmWeights& w,
                              const std::vector<ProbSample>& batch, const ProbTrainConfig& cfg,
                              RandomStream& rng) {
    cfg.validate();
    if (batch.empty()) throw std::invalid_argument("prob_train_step: empty batch");
    const auto bank = spec.filter.build();
    const std::size_t F = bank.size();
    const double decay_rec = std::exp(-spec.filter.dt / spec.filter.tau_rec);
    const double inv_b = 1.0 / static_cast<double>(batch.size());

    Mat g_h(w.theta_h.rows, w.theta_h.cols);
    std::vector<double> g_h_rec(w.theta_h_rec.size(), 0.0);
    Mat g_o(w.theta_o.rows, w.theta_o.cols);
    std::vector<double> g_o_rec(w.theta_o_rec.size(), 0.0);

    double ell_sum = 0.0;
    Mat in_f, front_f;
    LayerSim hid, out;

    for (const auto& sample : batch) {
        if (sample.input.rows != spec.n_in || sample.input.cols != spec.K)
            throw std::invalid_argument("prob_train_step: raster mismatch");
        const SpikeRaster tgt = target_pattern(sample.label, spec.n_out, spec.K, cfg.target_mode);

        filtered_signals(sample.input, bank, in_f);
        const Mat* front = &in_f;
        if (spec.n_hid > 0) {
            simulate_layer(in_f, w.theta_h, w.theta_h_rec, spec.v_th_hidden, decay_rec, spec.K,
                           nullptr, &rng, nullptr, hid);
            filtered_signals(hid.z, bank, front_f);
            front = &front_f;
        }
        simulate_layer(*front, w.theta_o, w.theta_o_rec, spec.v_th_out, decay_rec, spec.K, &tgt,
                       nullptr, nullptr, out);

        // observable gradients (the realized output pattern is the target)
        for (std::size_t o = 0; o < spec.n_out; ++o) {
            for (std::size_t k = 0; k < spec.K; ++k) {
                const double err = static_cast<double>(tgt.at(o, k)) - out.p(o, k);
                double* go = g_o.row(o);
                for (std::size_t c = 0; c < g_o.cols; ++c) go[c] += (*front)(c, k) * err;
                g_o_rec[o] += out.fb(o, k) * err;
            }
        }

        if (spec.n_hid > 0) {
            const double ell = prob_learning_signal(tgt, out.p, cfg.gamma);
            ell_sum += ell;
            if (ell != 0.0) {
                for (std::size_t h = 0; h < spec.n_hid; ++h) {
                    for (std::size_t k = 0; k < spec.K; ++k) {
                        const double err =
                            static_cast<double>(hid.z.at(h, k)) - hid.p(h, k);
                        double* gh = g_h.row(h);
                        const double e = ell * err;
                        for (std::size_t c = 0; c < g_h.cols; ++c) gh[c] += in_f(c, k) * e;
                        g_h_rec[h] += hid.fb(h, k) * e;
                    }
                }
            }
        }
        (void)F;
    }

    // gradient ascent on the log-likelihood
    for (std::size_t i = 0; i < w.theta_o.size(); ++i)
        w.theta_o.a[i] += cfg.nu_z * inv_b * g_o.a[i];
    for (std::size_t i = 0; i < w.theta_o_rec.size(); ++i)
        w.theta_o_rec[i] += cfg.nu_z * inv_b * g_o_rec[i];
    if (spec.n_hid > 0) {
        for (std::size_t i = 0; i < w.theta_h.size(); ++i)
            w.theta_h.a[i] += cfg.nu_h * inv_b * g_h.a[i];
        for (std::size_t i = 0; i < w.theta_h_rec.size(); ++i)
            w.theta_h_rec[i] += cfg.nu_h * inv_b * g_h_rec[i];
    }

    return {spec.n_hid > 0 ? ell_sum * inv_b : 0.0};
}

std::vector<double> prob_to_deterministic(const SrmNetSpec& spec, const SrmWeights& w,
                                          const std::vector<ProbSample>& batch,
                                          RandomStream& rng) {
    if (spec.n_hid == 0) return {};
    const auto bank = spec.filter.build();
    const double decay_rec = std::exp(-spec.filter.dt / spec.filter.tau_rec);

    std::vector<double> sum_s(spec.n_hid, 0.0), sum_ns(spec.n_hid, 0.0);
    std::vector<std::size_t> n_s(spec.n_hid, 0);
    std::size_t total_steps = 0;

    Mat in_f;
    LayerSim hid;
    for (const auto& sample : batch) {
        filtered_signals(sample.input, bank, in_f);
        simulate_layer(in_f, w.theta_h, w.theta_h_rec, spec.v_th_hidden, decay_rec, spec.K,
                       nullptr, &rng, nullptr, hid);
        total_steps += spec.K;
        for (std::size_t h = 0; h < spec.n_hid; ++h)
            for (std::size_t k = 0; k < spec.K; ++k) {
                if (hid.z.at(h, k)) {
                    sum_s[h] += hid.p(h, k);
                    ++n_s[h];
                } else {
                    sum_ns[h] += hid.p(h, k);
                }
            }
    }

    std::vector<double> th(spec.n_hid);
    for (std::size_t h = 0; h < spec.n_hid; ++h) {
        if (n_s[h] == 0) {
            th[h] = 2.0;  // never fires
        } else if (n_s[h] == total_steps) {
            th[h] = 0.0;  // always fires
        } else {
            const double mu_s = sum_s[h] / static_cast<double>(n_s[h]);
            const double mu_ns = sum_ns[h] / static_cast<double>(total_steps - n_s[h]);
            th[h] = 0.5 * (mu_s + mu_ns);
        }
    }
    return th;
}

SrmInferResult srm_infer_deterministic(const SrmNetSpec& spec, const SrmWeights& w,
                                       const std::vector<double>& thresholds,
                                       const SpikeRaster& input) {
    const auto bank = spec.filter.build();
    const double decay_rec = std::exp(-spec.filter.dt / spec.filter.tau_rec);

    Mat in_f, front_f;
    filtered_signals(input, bank, in_f);
    const Mat* front = &in_f;
    LayerSim hid;
    if (spec.n_hid > 0) {
        if (thresholds.size() != spec.n_hid)
            throw std::invalid_argument("srm_infer_deterministic: threshold width");
        simulate_layer(in_f, w.theta_h, w.theta_h_rec, spec.v_th_hidden, decay_rec, spec.K,
                       nullptr, nullptr, &thresholds, hid);
        filtered_signals(hid.z, bank, front_f);
        front = &front_f;
    }

    // non-spiking output readout: membrane only, no feedback spikes
    SrmInferResult res;
    res.final_potentials.assign(spec.n_out, 0.0);
    for (std::size_t o = 0; o < spec.n_out; ++o) {
        double v = 0.0;
        const double* wo = w.theta_o.row(o);
        for (std::size_t c = 0; c < w.theta_o.cols; ++c) v += wo[c] * (*front)(c, spec.K - 1);
        res.final_potentials[o] = v;
    }
    int best = 0;
    for (std::size_t o = 1; o < spec.n_out; ++o)
        if (res.final_potentials[o] > res.final_potentials[best]) best = static_cast<int>(o);
    res.label = best + 1;
    return res;
}

}  // namespace snnrx::train
