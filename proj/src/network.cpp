#include "snnrx/network.hpp"

#include <stdexcept>

namespace snnrx::snn {

void WeightSet::validate() const {
    if (theta_out.cols != theta_in.rows)
        throw std::invalid_argument("WeightSet: theta_out/theta_in width mismatch");
    if (theta_rec && (theta_rec->rows != n_hid() || theta_rec->cols != n_hid()))
        throw std::invalid_argument("WeightSet: theta_rec must be N_hid x N_hid");
    if (!theta_in.all_finite() || !theta_out.all_finite() ||
        (theta_rec && !theta_rec->all_finite()))
        throw std::invalid_argument("WeightSet: non-finite weights");
}

NetworkRun run_network(const WeightSet& w, const SpikeRaster& input, const SnnSpec& spec,
                       std::size_t K) {
    w.validate();
    if (input.rows != w.n_in() || spec.n_in != w.n_in() || spec.n_hid != w.n_hid() ||
        spec.n_out != w.n_out() || input.cols != K)
        throw std::invalid_argument("run_network: topology/raster mismatch");
    if (spec.recurrent != w.recurrent())
        throw std::invalid_argument("run_network: recurrence flag/theta_rec mismatch");

    const std::size_t n_hid = w.n_hid();
    const std::size_t n_out = w.n_out();

    NetworkRun run;
    run.hidden = SpikeRaster(n_hid, K);
    run.out_potentials = Mat(n_out, K);
    run.out_spikes = SpikeRaster(n_out, K);

    LayerState hid(n_hid, spec.hidden.v_rest);
    LayerState out(n_out, spec.output.v_rest);
    std::vector<double> drive_h(n_hid), drive_o(n_out), x(w.n_in());
    std::vector<uint8_t> s_prev(n_hid, 0);

    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t j = 0; j < w.n_in(); ++j) x[j] = static_cast<double>(input.at(j, k));

        std::fill(drive_h.begin(), drive_h.end(), 0.0);
        matvec_acc(w.theta_in, x.data(), drive_h.data());
        if (w.theta_rec) {
            std::vector<double> sp(n_hid);
            for (std::size_t j = 0; j < n_hid; ++j) sp[j] = s_prev[j];
            matvec_acc(*w.theta_rec, sp.data(), drive_h.data());
        }

        auto s_h = lif_step(hid, drive_h, spec.hidden);
        for (std::size_t j = 0; j < n_hid; ++j) run.hidden.at(j, k) = s_h[j];

        std::vector<double> sh(n_hid);
        for (std::size_t j = 0; j < n_hid; ++j) sh[j] = s_h[j];
        std::fill(drive_o.begin(), drive_o.end(), 0.0);
        matvec_acc(w.theta_out, sh.data(), drive_o.data());

        auto s_o = lif_step(out, drive_o, spec.output);
        for (std::size_t j = 0; j < n_out; ++j) {
            run.out_potentials(j, k) = out.v[j];
            run.out_spikes.at(j, k) = s_o[j];
        }
        s_prev = std::move(s_h);
    }
    return run;
}

}  // namespace snnrx::snn
