#include "snnrx/stdp.hpp"

#include <cmath>
#include <stdexcept>

namespace snnrx::train {

void StdpConfig::validate() const {
    if (!(a_plus > 0.0) || !(a_minus < 0.0))
        throw std::invalid_argument("StdpConfig: need a_plus > 0 and a_minus < 0");
    if (!(tau_plus > 0.0) || !(tau_minus > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("StdpConfig: time constants > 0");
    if (!(w_min < w_max)) throw std::invalid_argument("StdpConfig: w_min < w_max");
}

double stdp_delta(double dt_f, const StdpConfig& cfg) {
    if (dt_f > 0.0) return cfg.a_plus * std::exp(-dt_f / cfg.tau_plus);
    if (dt_f < 0.0) return cfg.a_minus * std::exp(dt_f / cfg.tau_minus);
    return 0.0;
}

namespace {

// All-to-all pairing between one pre and one post spike train; spike times
// are step indices. Uses lag tables exp(-l*dt/tau) precomputed by caller.
double pair_sum(const std::vector<std::size_t>& pre, const std::vector<std::size_t>& post,
                const std::vector<double>& pot_table, const std::vector<double>& dep_table,
                double a_plus, double a_minus) {
    double acc = 0.0;
    for (std::size_t tp : pre) {
        for (std::size_t to : post) {
            if (to > tp)
                acc += a_plus * pot_table[to - tp];
            else if (to < tp)
                acc += a_minus * dep_table[tp - to];
        }
    }
    return acc;
}

std::vector<double> lag_table(std::size_t K, double dt, double tau) {
    std::vector<double> t(K + 1);
    for (std::size_t l = 0; l <= K; ++l) t[l] = std::exp(-static_cast<double>(l) * dt / tau);
    return t;
}

}  // namespace

snn::WeightSet stdp_train_step(const snn::WeightSet& weights, const SpikeRaster& input,
                               int true_label, bool freeze_input, const StdpConfig& cfg,
                               const snn::NeuronConfig& hidden_cfg) {
    cfg.validate();
    weights.validate();
    const std::size_t n_in = weights.n_in();
    const std::size_t n_hid = weights.n_hid();
    const std::size_t K = input.cols;
    if (input.rows != n_in) throw std::invalid_argument("stdp_train_step: raster mismatch");
    if (true_label < 1 || static_cast<std::size_t>(true_label) > weights.n_out())
        throw std::invalid_argument("stdp_train_step: label out of range");

    // hidden-layer simulation (drive from input raster only; the output layer
    // is clamped and feeds nothing back)
    const snn::LifCoeffs kh = snn::LifCoeffs::from(hidden_cfg);
    std::vector<double> v(n_hid, hidden_cfg.v_rest), i(n_hid, 0.0), drive(n_hid);
    std::vector<uint8_t> s(n_hid);
    std::vector<std::vector<std::size_t>> hid_spikes(n_hid);
    std::vector<std::vector<std::size_t>> in_spikes(n_in);

    for (std::size_t k = 0; k < K; ++k) {
        std::fill(drive.begin(), drive.end(), 0.0);
        for (std::size_t j = 0; j < n_in; ++j) {
            const int8_t z = input.at(j, k);
            if (z == 0) continue;
            in_spikes[j].push_back(k);
            const double zz = z;
            for (std::size_t h = 0; h < n_hid; ++h) drive[h] += weights.theta_in(h, j) * zz;
        }
        snn::lif_step_fast(v.data(), i.data(), drive.data(), s.data(), n_hid, kh,
                           hidden_cfg.v_th, hidden_cfg.v_rest, true);
        for (std::size_t h = 0; h < n_hid; ++h)
            if (s[h]) hid_spikes[h].push_back(k);
    }

    // clamp: the true-label output row spikes at every step (Eq-style forced
    // supervision); all other output rows stay silent and receive no pairs
    std::vector<std::size_t> clamp(K);
    for (std::size_t k = 0; k < K; ++k) clamp[k] = k;

    const auto pot = lag_table(K, cfg.dt, cfg.tau_plus);
    const auto dep = lag_table(K, cfg.dt, cfg.tau_minus);

    const auto clip = [&](double w) {
        return std::min(cfg.w_max, std::max(cfg.w_min, w));
    };

    snn::WeightSet out = weights;
    // adapted matrices live inside the bounds from the first step on
    for (auto& v : out.theta_out.a) v = clip(v);
    if (!freeze_input)
        for (auto& v : out.theta_in.a) v = clip(v);
    const std::size_t row = static_cast<std::size_t>(true_label - 1);
    for (std::size_t h = 0; h < n_hid; ++h) {
        if (hid_spikes[h].empty()) continue;
        out.theta_out(row, h) = clip(
            out.theta_out(row, h) +
            pair_sum(hid_spikes[h], clamp, pot, dep, cfg.a_plus, cfg.a_minus));
    }

    if (!freeze_input) {
        for (std::size_t h = 0; h < n_hid; ++h) {
            if (hid_spikes[h].empty()) continue;
            for (std::size_t j = 0; j < n_in; ++j) {
                if (in_spikes[j].empty()) continue;
                out.theta_in(h, j) = clip(
                    out.theta_in(h, j) +
                    pair_sum(in_spikes[j], hid_spikes[h], pot, dep, cfg.a_plus, cfg.a_minus));
            }
        }
    }
    return out;
}

}  // namespace snnrx::train
