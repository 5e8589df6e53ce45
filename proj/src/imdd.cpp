#include "snnrx/imdd.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "snnrx/csv.hpp"
#include "snnrx/rrc.hpp"

namespace snnrx::chan {

double NoiseSpec::sigma2() const { return std::pow(10.0, sigma2_db / 10.0); }

void ImddConfig::validate() const {
    constellation.validate();
    if (beta_up < 1) throw std::invalid_argument("ImddConfig: beta_up >= 1");
    if (beta_rrc < 0.0 || beta_rrc > 1.0) throw std::invalid_argument("ImddConfig: roll-off");
    if (fiber_length < 0.0) throw std::invalid_argument("ImddConfig: L >= 0");
    if (r_sym <= 0.0 || lambda <= 0.0) throw std::invalid_argument("ImddConfig: rates");
}

double ImddConfig::beta2() const {
    constexpr double c_light = 299792458.0;
    return -lambda * lambda * dispersion / (2.0 * std::numbers::pi * c_light);
}

namespace {

// FFTW plans keyed by record length; FFTW planning is not thread safe.
std::mutex fft_mutex;

void fft_inplace(std::vector<std::complex<double>>& x, int sign) {
    const std::lock_guard<std::mutex> lock(fft_mutex);
    static std::map<std::pair<std::size_t, int>, fftw_plan> plans;
    static std::vector<std::complex<double>> buf;
    if (buf.size() < x.size()) buf.resize(x.size());
    auto key = std::make_pair(x.size(), sign);
    auto it = plans.find(key);
    if (it == plans.end()) {
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(x.size()),
                                       reinterpret_cast<fftw_complex*>(buf.data()),
                                       reinterpret_cast<fftw_complex*>(buf.data()), sign,
                                       FFTW_ESTIMATE);
        it = plans.emplace(key, p).first;
    }
    std::copy(x.begin(), x.end(), buf.begin());
    fftw_execute_dft(it->second, reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(buf.data()));
    std::copy(buf.begin(), buf.begin() + x.size(), x.begin());
}

}  // namespace

std::vector<std::complex<double>> cd_apply(const std::vector<std::complex<double>>& signal,
                                           const ImddConfig& cfg) {
    cfg.validate();
    const std::size_t n = signal.size();
    if (n < 2 * static_cast<std::size_t>(cfg.beta_up))
        throw std::invalid_argument("cd_apply: record shorter than two symbols");
    if (cfg.fiber_length == 0.0) return signal;

    std::vector<std::complex<double>> x = signal;
    fft_inplace(x, FFTW_FORWARD);

    const double fs = cfg.beta_up * cfg.r_sym;
    const double b2l = cfg.beta2() * cfg.fiber_length;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t k = 0; k < n; ++k) {
        // frequency bin wrapped to [-fs/2, fs/2)
        double f = static_cast<double>(k) / static_cast<double>(n);
        if (f >= 0.5) f -= 1.0;
        f *= fs;
        const double w = two_pi * f;
        const double phase = 0.5 * b2l * w * w;
        x[k] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }

    fft_inplace(x, FFTW_BACKWARD);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& v : x) v *= inv_n;
    return x;
}

namespace {

std::vector<double> pipeline_to_pd(const std::vector<std::size_t>& idx, const ImddConfig& cfg,
                                   const std::vector<double>& h) {
    const std::size_t n_up = idx.size() * cfg.beta_up;
    std::vector<double> up(n_up, 0.0);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        double a = cfg.constellation.points[idx[k]].real();
        if (cfg.sqrt_predistortion) a = std::sqrt(std::max(0.0, a));
        up[k * cfg.beta_up] = a;
    }
    std::vector<double> shaped = filter_same(h, up);
    for (double& v : shaped) v += cfg.bias;

    std::vector<std::complex<double>> field(shaped.begin(), shaped.end());
    if (cfg.fiber_length > 0.0) field = cd_apply(field, cfg);

    std::vector<double> pd(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) pd[i] = std::norm(field[i]) * cfg.pd_scale;
    return pd;
}

}  // namespace

void ImddConfig::calibrate() {
    pd_scale = 1.0;
    validate();
    // fixed pilot: every symbol cycled plus a deterministic pseudo-random tail
    std::vector<std::size_t> idx;
    RandomStream pilot(0x5eedc0deu, "imdd-calibration");
    const std::size_t n = 4096;
    for (std::size_t k = 0; k < n; ++k)
        idx.push_back(k < 64 ? k % constellation.size() : pilot.integer(constellation.size()));
    const auto h = rrc_taps(beta_rrc, rrc_span, beta_up);
    const auto pd = pipeline_to_pd(idx, *this, h);
    const std::size_t edge = static_cast<std::size_t>(rrc_span) * beta_up;
    double p = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = edge; i + edge < pd.size(); ++i, ++cnt) p += pd[i] * pd[i];
    if (cnt == 0 || p <= 0.0) throw std::runtime_error("imdd calibrate: degenerate pilot");
    pd_scale = 1.0 / std::sqrt(p / static_cast<double>(cnt));
}

ImddConfig ImddConfig::preset(const std::string& name) {
    ImddConfig cfg;
    if (name == "lcd") {
        cfg.constellation = Constellation::pam4({-3.0, -1.0, 1.0, 3.0});
        cfg.r_sym = 112e9;
        cfg.lambda = 1270e-9;
        cfg.dispersion = -5e-6;  // -5 ps/nm/km
        cfg.fiber_length = 4e3;
        cfg.bias = 2.25;
        cfg.sqrt_predistortion = false;
    } else if (name == "ssmf") {
        cfg.constellation =
            Constellation::pam4({0.0, 1.0, std::sqrt(2.0), std::sqrt(3.0)});
        cfg.r_sym = 50e9;
        cfg.lambda = 1550e-9;
        cfg.dispersion = -17e-6;  // -17 ps/nm/km
        cfg.fiber_length = 5e3;
        cfg.bias = 0.25;
        cfg.sqrt_predistortion = true;
    } else {
        throw std::invalid_argument("ImddConfig: unknown preset " + name);
    }
    cfg.beta_up = 3;
    cfg.beta_rrc = 0.2;
    cfg.calibrate();
    return cfg;
}

ImddResult imdd_transmit(const std::vector<uint8_t>& bits, const ImddConfig& cfg,
                         const NoiseSpec& noise, RandomStream& rng) {
    cfg.validate();
    const std::size_t bps = cfg.constellation.bits_per_symbol();
    if (bits.size() % bps != 0)
        throw std::invalid_argument("imdd_transmit: bit count not divisible by bits/symbol");
    const std::size_t n_sym = bits.size() / bps;
    const std::size_t span = static_cast<std::size_t>(cfg.rrc_span);
    if (n_sym == 0) throw std::invalid_argument("imdd_transmit: empty input");

    ImddResult res;
    res.bits = bits;
    res.index.resize(n_sym);
    std::vector<uint8_t> b(bps);
    for (std::size_t k = 0; k < n_sym; ++k) {
        for (std::size_t j = 0; j < bps; ++j) b[j] = bits[k * bps + j];
        res.index[k] = map_bits_index(b, cfg.constellation);
    }

    // pad both ends with random symbols; they absorb filter transients and
    // the circular wrap of the CD block and are discarded below
    std::vector<std::size_t> idx;
    idx.reserve(n_sym + 2 * span);
    for (std::size_t k = 0; k < span; ++k) idx.push_back(rng.integer(cfg.constellation.size()));
    idx.insert(idx.end(), res.index.begin(), res.index.end());
    for (std::size_t k = 0; k < span; ++k) idx.push_back(rng.integer(cfg.constellation.size()));

    const auto h = rrc_taps(cfg.beta_rrc, cfg.rrc_span, cfg.beta_up);
    std::vector<double> pd = pipeline_to_pd(idx, cfg, h);

    const double sigma = std::sqrt(noise.sigma2());
    if (sigma > 0.0)
        for (double& v : pd) v += sigma * rng.normal();

    const std::vector<double> mf = filter_same(h, pd);

    // total group delay: two RRC filters of (span*sps)/2 samples each
    const std::size_t delay = span * static_cast<std::size_t>(cfg.beta_up);
    res.n_off = static_cast<int>(span);
    res.y.resize(n_sym);
    for (std::size_t k = 0; k < n_sym; ++k) {
        const std::size_t pos = (k + span) * cfg.beta_up + delay;
        res.y[k] = pos < mf.size() ? mf[pos] : 0.0;
    }
    return res;
}

void export_dataset_csv(const std::string& path, const ImddResult& data) {
    CsvWriter csv(path, {"index", "bit0", "bit1", "y"});
    for (std::size_t k = 0; k < data.y.size(); ++k)
        csv.row() << k << int(data.bits[2 * k]) << int(data.bits[2 * k + 1]) << data.y[k];
}

}  // namespace snnrx::chan
