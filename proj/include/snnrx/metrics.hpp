#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace snnrx::eq {

enum class Structure { nfe_snn, dfe_snn, nfe_fir, dfe_fir };

struct MetricsReport {
    double ber = 0.0;
    double ser = 0.0;
    double z_avg = 0.0;       // mean hidden spikes per inference
    std::size_t n_theta = 0;  // learnable parameters
    std::size_t mac = 0;      // N_theta * K
    double sdr = 0.0;         // vs the reference detector, when present
    std::size_t bit_errors = 0, n_bits = 0;
    std::size_t sym_errors = 0, n_syms = 0;
};

// Raw counters from an evaluation run.
struct RunArtifacts {
    std::size_t bit_errors = 0, n_bits = 0;
    std::size_t sym_errors = 0, n_syms = 0;
    double hidden_spikes = 0.0;
    std::size_t n_inferences = 0;
    // optional paired decisions for the symbol disagreement rate
    std::optional<std::vector<std::size_t>> decisions;
    std::optional<std::vector<std::size_t>> reference_decisions;
};

struct ComplexityCounts {
    Structure structure = Structure::nfe_snn;
    std::size_t n_hid = 0, n_out = 0, n_enc = 0;
    std::size_t n_tap = 0;         // NFE
    std::size_t n_ff = 0, n_fb = 0;  // DFE
    std::size_t x_size = 0;        // |X|
    bool recurrent = false;
    std::size_t K = 1;
};

// Learnable-parameter count of the four architectures.
std::size_t parameter_count(const ComplexityCounts& c);

// Fraction of disagreeing symbol decisions between two detectors.
double symbol_disagreement_rate(const std::vector<std::size_t>& a,
                                const std::vector<std::size_t>& b);

MetricsReport compute_metrics(const RunArtifacts& run, const ComplexityCounts& c);

// Normal-approximation 95% confidence half-width of an error-rate estimate.
double rate_ci95(double rate, std::size_t n);

}  // namespace snnrx::eq
