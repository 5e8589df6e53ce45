#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "snnrx/constellation.hpp"
#include "snnrx/rng.hpp"

namespace snnrx::chan {

// Noise description: sigma2_db is the linear variance 10^{dB/10} of the real
// (IM/DD) or circularly-symmetric complex (AWGN) Gaussian samples.
struct NoiseSpec {
    double sigma2_db = -20.0;
    double sigma2() const;
};

// Discrete-time IM/DD PAM4 link parameters. Dispersion is stored in SI units
// (s/m^2); presets convert from ps nm^-1 km^-1.
struct ImddConfig {
    Constellation constellation;  // PAM4 alphabet
    int beta_up = 3;              // samples per symbol
    double r_sym = 112e9;         // baudrate (Bd)
    double lambda = 1270e-9;      // laser wavelength (m)
    double dispersion = -5e-6;    // D (s/m^2); -5 ps/nm/km = -5e-6 s/m^2
    double fiber_length = 4e3;    // L (m)
    double beta_rrc = 0.2;        // RRC roll-off
    double bias = 2.25;
    bool sqrt_predistortion = false;
    int rrc_span = 20;            // RRC span in symbols
    // Scale applied to the post-photodiode samples so their mean power is 1
    // before noise injection; fixed per preset by calibrate().
    double pd_scale = 1.0;

    void validate() const;

    // Quadratic-phase coefficient beta2 = -lambda^2 D / (2 pi c) in s^2/m.
    double beta2() const;

    // Table presets "lcd" and "ssmf" (calibrated).
    static ImddConfig preset(const std::string& name);

    // Determine pd_scale from a deterministic noiseless pilot run.
    void calibrate();
};

// Chromatic dispersion as a single whole-record frequency-domain
// multiplication by H_CD(f) = exp(j/2 beta2 (2 pi f)^2 L); |H_CD| = 1.
// The record must cover at least two symbols.
std::vector<std::complex<double>> cd_apply(const std::vector<std::complex<double>>& signal,
                                           const ImddConfig& cfg);

// One received sample per transmit symbol, aligned with the symbol stream
// (group delay compensated, span-length edges discarded internally).
struct ImddResult {
    std::vector<double> y;           // received samples, y[k] <-> symbol k
    std::vector<uint8_t> bits;       // transmitted bits (2 per symbol)
    std::vector<std::size_t> index;  // 0-based constellation index per symbol
    int n_off = 0;                   // pipeline group delay in symbols
};

// Full pipeline: Gray map -> (optional sqrt) -> upsample -> RRC -> bias ->
// CD -> photodiode |.|^2 -> unit-power scaling -> AWGN -> matched RRC ->
// downsample with delay compensation. bits.size() must be even.
ImddResult imdd_transmit(const std::vector<uint8_t>& bits, const ImddConfig& cfg,
                         const NoiseSpec& noise, RandomStream& rng);

// Aligned (bits, y) dataset as CSV with columns (index, bit0, bit1, y).
void export_dataset_csv(const std::string& path, const ImddResult& data);

}  // namespace snnrx::chan
