#include "snnrx/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace snnrx::eq {

std::size_t parameter_count(const ComplexityCounts& c) {
    const std::size_t rec = c.recurrent ? c.n_hid : 0;
    switch (c.structure) {
        case Structure::nfe_snn:
            return c.n_hid * (c.n_tap * c.n_enc + rec + c.n_out);
        case Structure::dfe_snn:
            return c.n_hid * (c.n_ff * c.n_enc + c.n_fb * c.x_size + rec + c.n_out);
        case Structure::nfe_fir:
            return c.n_tap;
        case Structure::dfe_fir:
            return c.n_ff + c.n_fb;
    }
    throw std::logic_error("parameter_count: unknown structure");
}

double symbol_disagreement_rate(const std::vector<std::size_t>& a,
                                const std::vector<std::size_t>& b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("symbol_disagreement_rate: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return static_cast<double>(d) / static_cast<double>(a.size());
}

MetricsReport compute_metrics(const RunArtifacts& run, const ComplexityCounts& c) {
    MetricsReport m;
    m.bit_errors = run.bit_errors;
    m.n_bits = run.n_bits;
    m.sym_errors = run.sym_errors;
    m.n_syms = run.n_syms;
    m.ber = run.n_bits ? static_cast<double>(run.bit_errors) / run.n_bits : 0.0;
    m.ser = run.n_syms ? static_cast<double>(run.sym_errors) / run.n_syms : 0.0;
    m.z_avg = run.n_inferences ? run.hidden_spikes / run.n_inferences : 0.0;
    m.n_theta = parameter_count(c);
    m.mac = m.n_theta * c.K;
    if (run.decisions && run.reference_decisions)
        m.sdr = symbol_disagreement_rate(*run.decisions, *run.reference_decisions);
    return m;
}

double rate_ci95(double rate, std::size_t n) {
    if (n == 0) return 1.0;
    return 1.96 * std::sqrt(std::max(0.0, rate * (1.0 - rate)) / static_cast<double>(n));
}

}  // namespace snnrx::eq
