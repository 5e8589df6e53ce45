#include "snnrx/bptt.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace snnrx::train {

namespace {

struct FwdWeights {
    Mat win_t;   // N_in x N_hid
    Mat wrec_t;  // N_hid x N_hid (transpose of theta_rec)
    Mat wout_t;  // N_hid x N_out
    bool recurrent = false;

    static FwdWeights from(const snn::WeightSet& w) {
        FwdWeights f;
        f.recurrent = w.recurrent();
        f.win_t = Mat(w.n_in(), w.n_hid());
        for (std::size_t r = 0; r < w.n_hid(); ++r)
            for (std::size_t c = 0; c < w.n_in(); ++c) f.win_t(c, r) = w.theta_in(r, c);
        f.wout_t = Mat(w.n_hid(), w.n_out());
        for (std::size_t r = 0; r < w.n_out(); ++r)
            for (std::size_t c = 0; c < w.n_hid(); ++c) f.wout_t(c, r) = w.theta_out(r, c);
        if (f.recurrent) {
            f.wrec_t = Mat(w.n_hid(), w.n_hid());
            for (std::size_t r = 0; r < w.n_hid(); ++r)
                for (std::size_t c = 0; c < w.n_hid(); ++c) f.wrec_t(c, r) = (*w.theta_rec)(r, c);
        }
        return f;
    }
};

// per-step input spike lists: (row, value)
using StepSpikes = std::vector<std::vector<std::pair<uint32_t, int8_t>>>;

StepSpikes bucket_spikes(const SpikeRaster& r) {
    StepSpikes by_step(r.cols);
    for (std::size_t j = 0; j < r.rows; ++j) {
        const int8_t* row = r.row(j);
        for (std::size_t k = 0; k < r.cols; ++k)
            if (row[k] != 0) by_step[k].emplace_back(static_cast<uint32_t>(j), row[k]);
    }
    return by_step;
}

// recorded trajectories of one sample (enough state for the reverse pass)
struct Trace {
    std::size_t K = 0, n_hid = 0, n_out = 0;
    std::vector<double> vh;                // K x n_hid, pre-reset potential
    std::vector<double> sh;                // K x n_hid, spikes (0/1 or soft)
    std::vector<double> logits;            // n_out
    std::vector<std::size_t> argmax_k;     // n_out, step of the max (motm)
    double hard_spike_count = 0.0;
    double soft_spike_count = 0.0;

    void reset(std::size_t K_, std::size_t nh, std::size_t no) {
        K = K_;
        n_hid = nh;
        n_out = no;
        vh.assign(K * nh, 0.0);
        sh.assign(K * nh, 0.0);
        logits.assign(no, 0.0);
        argmax_k.assign(no, 0);
        hard_spike_count = 0.0;
        soft_spike_count = 0.0;
    }
};

void forward_sample(const BpttModel& model, const FwdWeights& fw, const StepSpikes& input,
                    GradMode mode, Trace& tr) {
    const std::size_t n_hid = model.snn.n_hid;
    const std::size_t n_out = model.snn.n_out;
    const std::size_t K = input.size();
    tr.reset(K, n_hid, n_out);

    const snn::LifCoeffs kh = snn::LifCoeffs::from(model.snn.hidden);
    const snn::LifCoeffs ko = snn::LifCoeffs::from(model.snn.output);
    const double vth = model.snn.hidden.v_th;
    const double vrest = model.snn.hidden.v_rest;

    std::vector<double> ih(n_hid, 0.0), vpost(n_hid, vrest);
    std::vector<double> io(n_out, 0.0), vo(n_out, model.snn.output.v_rest);
    std::vector<double> drive_h(n_hid), drive_o(n_out);
    std::vector<double> sh_prev(n_hid, 0.0);

    for (std::size_t j = 0; j < n_out; ++j) {
        tr.logits[j] = -std::numeric_limits<double>::infinity();
        tr.argmax_k[j] = 0;
    }

    for (std::size_t k = 0; k < K; ++k) {
        std::fill(drive_h.begin(), drive_h.end(), 0.0);
        for (const auto& [j, val] : input[k]) {
            const double* col = fw.win_t.row(j);
            const double v = static_cast<double>(val);
            for (std::size_t h = 0; h < n_hid; ++h) drive_h[h] += v * col[h];
        }
        if (fw.recurrent) {
            if (mode == GradMode::hard) {
                for (std::size_t hp = 0; hp < n_hid; ++hp) {
                    if (sh_prev[hp] == 0.0) continue;
                    const double* col = fw.wrec_t.row(hp);
                    for (std::size_t h = 0; h < n_hid; ++h) drive_h[h] += col[h];
                }
            } else {
                for (std::size_t hp = 0; hp < n_hid; ++hp) {
                    const double s = sh_prev[hp];
                    if (s == 0.0) continue;
                    const double* col = fw.wrec_t.row(hp);
                    for (std::size_t h = 0; h < n_hid; ++h) drive_h[h] += s * col[h];
                }
            }
        }

        double* vh_k = tr.vh.data() + k * n_hid;
        double* sh_k = tr.sh.data() + k * n_hid;
        for (std::size_t h = 0; h < n_hid; ++h) {
            const double vn = vpost[h] * kh.dm + ih[h] * kh.dm;
            ih[h] = ih[h] * kh.ds + drive_h[h];
            vh_k[h] = vn;
            if (mode == GradMode::hard) {
                const bool s = vn > vth;
                sh_k[h] = s ? 1.0 : 0.0;
                vpost[h] = s ? vrest : vn;
                tr.hard_spike_count += s;
            } else {
                const double s = surrogate(vn - vth, model.surrogate);
                sh_k[h] = s;
                vpost[h] = vn + (vrest - vn) * s;
                tr.soft_spike_count += s;
                tr.hard_spike_count += (vn > vth);
            }
        }

        std::fill(drive_o.begin(), drive_o.end(), 0.0);
        for (std::size_t h = 0; h < n_hid; ++h) {
            const double s = sh_k[h];
            if (s == 0.0) continue;
            const double* col = fw.wout_t.row(h);
            for (std::size_t j = 0; j < n_out; ++j) drive_o[j] += s * col[j];
        }
        for (std::size_t j = 0; j < n_out; ++j) {
            const double vn = vo[j] * ko.dm + io[j] * ko.dm;
            io[j] = io[j] * ko.ds + drive_o[j];
            vo[j] = vn;
            if (model.readout == Readout::motm) {
                if (vn > tr.logits[j]) {
                    tr.logits[j] = vn;
                    tr.argmax_k[j] = k;
                }
            }
        }
        sh_prev.assign(sh_k, sh_k + n_hid);
    }

    if (model.readout == Readout::eotm)
        for (std::size_t j = 0; j < n_out; ++j) {
            tr.logits[j] = vo[j];
            tr.argmax_k[j] = K - 1;
        }
}

// dL/dlogits for loss_scale * CE; returns the CE value
double ce_grad(const std::vector<double>& logits, int label, double loss_scale,
               std::vector<double>& g) {
    const std::size_t n = logits.size();
    g.assign(n, 0.0);
    double mx = logits[0];
    for (double v : logits) mx = std::max(mx, v);
    double z = 0.0;
    for (double v : logits) z += std::exp(v - mx);
    const std::size_t lab = static_cast<std::size_t>(label - 1);
    const double ce = -(logits[lab] - mx - std::log(z));
    for (std::size_t j = 0; j < n; ++j) {
        const double p = std::exp(logits[j] - mx) / z;
        g[j] = loss_scale * (p - (j == lab ? 1.0 : 0.0));
    }
    return ce;
}

void backward_sample(const BpttModel& model, const FwdWeights& fw, const StepSpikes& input,
                     const Trace& tr, const std::vector<double>& glogits,
                     const std::vector<double>& greg_per_step, GradMode mode, WeightGrads& g) {
    const std::size_t n_hid = model.snn.n_hid;
    const std::size_t n_out = model.snn.n_out;
    const std::size_t K = tr.K;

    const snn::LifCoeffs kh = snn::LifCoeffs::from(model.snn.hidden);
    const snn::LifCoeffs ko = snn::LifCoeffs::from(model.snn.output);
    const double vth = model.snn.hidden.v_th;
    const double vrest = model.snn.hidden.v_rest;

    std::vector<double> gvo_next(n_out, 0.0), gio_next(n_out, 0.0);
    std::vector<double> gvh_next(n_hid, 0.0), gih_next(n_hid, 0.0);
    std::vector<double> gvo(n_out), gio(n_out), gsh(n_hid), gvh(n_hid), gih(n_hid);

    for (std::size_t k = K; k-- > 0;) {
        const double* vh_k = tr.vh.data() + k * n_hid;
        const double* sh_k = tr.sh.data() + k * n_hid;

        for (std::size_t j = 0; j < n_out; ++j) {
            gio[j] = ko.ds * gio_next[j] + ko.dm * gvo_next[j];
            gvo[j] = ko.dm * gvo_next[j];
            if (model.readout == Readout::eotm) {
                if (k == K - 1) gvo[j] += glogits[j];
            } else if (tr.argmax_k[j] == k) {
                gvo[j] += glogits[j];
            }
        }

        for (std::size_t h = 0; h < n_hid; ++h) {
            double s = 0.0;
            const double* wo = fw.wout_t.row(h);
            for (std::size_t j = 0; j < n_out; ++j) s += wo[j] * gio[j];
            if (fw.recurrent) {
                const double* wr = fw.wrec_t.row(h);
                for (std::size_t hp = 0; hp < n_hid; ++hp) s += wr[hp] * gih_next[hp];
            }
            gsh[h] = s + greg_per_step[h];
        }

        for (std::size_t h = 0; h < n_hid; ++h) {
            const double gvpost = kh.dm * gvh_next[h];
            const double sg = surrogate_grad(vh_k[h] - vth, model.surrogate);
            if (mode == GradMode::hard) {
                gvh[h] = gvpost + gsh[h] * sg;
            } else {
                gvh[h] =
                    gvpost * (1.0 - sh_k[h]) + (gsh[h] + gvpost * (vrest - vh_k[h])) * sg;
            }
            gih[h] = kh.ds * gih_next[h] + kh.dm * gvh_next[h];
        }

        // weight gradients (drive adjoints are gio / gih at this step)
        for (std::size_t h = 0; h < n_hid; ++h) {
            const double s = sh_k[h];
            if (s == 0.0) continue;
            for (std::size_t j = 0; j < n_out; ++j) g.g_out(j, h) += gio[j] * s;
        }
        for (const auto& [j, val] : input[k]) {
            const double v = static_cast<double>(val);
            for (std::size_t h = 0; h < n_hid; ++h) g.g_in(h, j) += gih[h] * v;
        }
        if (fw.recurrent && k > 0) {
            const double* sh_p = tr.sh.data() + (k - 1) * n_hid;
            for (std::size_t hp = 0; hp < n_hid; ++hp) {
                const double s = sh_p[hp];
                if (s == 0.0) continue;
                for (std::size_t h = 0; h < n_hid; ++h) g.g_rec.value()(h, hp) += gih[h] * s;
            }
        }

        std::swap(gvo_next, gvo);
        std::swap(gio_next, gio);
        std::swap(gvh_next, gvh);
        std::swap(gih_next, gih);
    }
}

void check_model(const BpttModel& model, const snn::WeightSet& w) {
    w.validate();
    if (model.snn.n_in != w.n_in() || model.snn.n_hid != w.n_hid() ||
        model.snn.n_out != w.n_out() || model.snn.recurrent != w.recurrent())
        throw std::invalid_argument("bptt: model/weights mismatch");
    if (!model.snn.hidden.spiking)
        throw std::invalid_argument("bptt: hidden layer must spike");
    if (model.snn.output.spiking)
        throw std::invalid_argument("bptt: membrane readout needs a non-spiking output layer");
}

}  // namespace

BpttResult bptt_sg_grad(const BpttModel& model, const snn::WeightSet& w,
                        std::span<const Sample> batch, const RegConfig& reg, GradMode mode,
                        double loss_scale) {
    check_model(model, w);
    if (batch.empty()) throw std::invalid_argument("bptt_sg_grad: empty batch");

    const std::size_t n_hid = model.snn.n_hid;
    const FwdWeights fw = FwdWeights::from(w);
    const double inv_b = 1.0 / static_cast<double>(batch.size());

    BpttResult res;
    res.grads.g_in = Mat(w.n_hid(), w.n_in());
    res.grads.g_out = Mat(w.n_out(), w.n_hid());
    if (w.recurrent()) res.grads.g_rec = Mat(n_hid, n_hid);

    std::vector<StepSpikes> inputs;
    inputs.reserve(batch.size());
    for (const auto& s : batch) {
        if (s.input.rows != model.snn.n_in)
            throw std::invalid_argument("bptt_sg_grad: raster width mismatch");
        inputs.push_back(bucket_spikes(s.input));
    }

    // batch-mean spike count per hidden neuron, needed by the third
    // regularization term before any backward pass can run
    std::vector<double> mean_count(n_hid, 0.0);
    std::vector<double> greg_per_step(n_hid, 0.0);
    Trace tr;
    if (reg.alpha_r3 != 0.0) {
        std::vector<double> counts(n_hid, 0.0);
        for (std::size_t m = 0; m < batch.size(); ++m) {
            forward_sample(model, fw, inputs[m], mode, tr);
            for (std::size_t k = 0; k < tr.K; ++k)
                for (std::size_t h = 0; h < n_hid; ++h) counts[h] += tr.sh[k * n_hid + h];
        }
        for (std::size_t h = 0; h < n_hid; ++h) {
            mean_count[h] = counts[h] * inv_b;
            greg_per_step[h] = -2.0 * reg.alpha_r3 / static_cast<double>(n_hid) * inv_b *
                               (reg.alpha_r4 - mean_count[h]);
        }
    }

    std::vector<double> glogits;
    double ce_sum = 0.0;
    double spikes = 0.0;
    for (std::size_t m = 0; m < batch.size(); ++m) {
        forward_sample(model, fw, inputs[m], mode, tr);
        spikes += mode == GradMode::hard ? tr.hard_spike_count : tr.soft_spike_count;
        const double ce = ce_grad(tr.logits, batch[m].label, loss_scale * inv_b, glogits);
        ce_sum += ce;
        int best = 0;
        for (std::size_t j = 1; j < tr.logits.size(); ++j)
            if (tr.logits[j] > tr.logits[best]) best = static_cast<int>(j);
        if (best + 1 == batch[m].label) ++res.correct;
        backward_sample(model, fw, inputs[m], tr, glogits, greg_per_step, mode, res.grads);
    }

    // weight-decay terms of the regularization loss
    double reg_loss = 0.0;
    if (reg.alpha_r1 != 0.0) {
        reg_loss += reg.alpha_r1 * mean_sq(w.theta_in);
        const double c = 2.0 * reg.alpha_r1 / static_cast<double>(w.theta_in.size());
        for (std::size_t i = 0; i < w.theta_in.size(); ++i)
            res.grads.g_in.a[i] += c * w.theta_in.a[i];
    }
    if (reg.alpha_r2 != 0.0) {
        reg_loss += reg.alpha_r2 * mean_sq(w.theta_out);
        const double c = 2.0 * reg.alpha_r2 / static_cast<double>(w.theta_out.size());
        for (std::size_t i = 0; i < w.theta_out.size(); ++i)
            res.grads.g_out.a[i] += c * w.theta_out.a[i];
    }
    if (reg.alpha_r3 != 0.0) {
        double dev = 0.0;
        for (std::size_t h = 0; h < n_hid; ++h) {
            const double d = reg.alpha_r4 - mean_count[h];
            dev += d * d;
        }
        reg_loss += reg.alpha_r3 * dev / static_cast<double>(n_hid);
    }

    res.loss_ce = ce_sum * inv_b;
    res.loss_reg = reg_loss;
    res.z_avg = spikes * inv_b;
    if (!std::isfinite(res.loss_ce) || !std::isfinite(res.loss_reg))
        throw std::runtime_error("bptt_sg_grad: non-finite loss");
    return res;
}

double regularization_loss(const snn::WeightSet& w, std::span<const SpikeRaster> hidden,
                           const RegConfig& reg) {
    if (hidden.empty()) throw std::invalid_argument("regularization_loss: empty batch");
    const std::size_t n_hid = w.n_hid();
    double loss = reg.alpha_r1 * mean_sq(w.theta_in) + reg.alpha_r2 * mean_sq(w.theta_out);
    std::vector<double> counts(n_hid, 0.0);
    for (const auto& r : hidden) {
        if (r.rows != n_hid) throw std::invalid_argument("regularization_loss: raster mismatch");
        for (std::size_t h = 0; h < n_hid; ++h)
            for (std::size_t k = 0; k < r.cols; ++k) counts[h] += r.at(h, k);
    }
    double dev = 0.0;
    for (std::size_t h = 0; h < n_hid; ++h) {
        const double d = reg.alpha_r4 - counts[h] / static_cast<double>(hidden.size());
        dev += d * d;
    }
    loss += reg.alpha_r3 * dev / static_cast<double>(n_hid);
    return loss;
}

struct SnnRunner::Impl {
    BpttModel model;
    FwdWeights fw;
    mutable Trace tr;
};

SnnRunner::SnnRunner(const BpttModel& model, const snn::WeightSet& w)
    : impl_(std::make_unique<Impl>()) {
    check_model(model, w);
    impl_->model = model;
    impl_->fw = FwdWeights::from(w);
}

SnnRunner::~SnnRunner() = default;
SnnRunner::SnnRunner(SnnRunner&&) noexcept = default;
SnnRunner& SnnRunner::operator=(SnnRunner&&) noexcept = default;

InferResult SnnRunner::infer(const SpikeRaster& input) const {
    if (input.rows != impl_->model.snn.n_in)
        throw std::invalid_argument("SnnRunner: raster width mismatch");
    const StepSpikes in = bucket_spikes(input);
    forward_sample(impl_->model, impl_->fw, in, GradMode::hard, impl_->tr);
    InferResult r;
    r.logits = impl_->tr.logits;
    r.hidden_spikes = static_cast<std::size_t>(impl_->tr.hard_spike_count);
    int best = 0;
    for (std::size_t j = 1; j < r.logits.size(); ++j)
        if (r.logits[j] > r.logits[best]) best = static_cast<int>(j);
    r.label = best + 1;
    return r;
}

InferResult infer(const BpttModel& model, const snn::WeightSet& w, const SpikeRaster& input) {
    return SnnRunner(model, w).infer(input);
}

Optimizer::Optimizer(const OptimConfig& cfg, const snn::WeightSet& shape) : cfg_(cfg) {
    m_in_ = Mat(shape.theta_in.rows, shape.theta_in.cols);
    v_in_ = m_in_;
    m_out_ = Mat(shape.theta_out.rows, shape.theta_out.cols);
    v_out_ = m_out_;
    if (shape.recurrent()) {
        m_rec_ = Mat(shape.n_hid(), shape.n_hid());
        v_rec_ = m_rec_;
    }
}

namespace {

void adam_update(Mat& w, const Mat& g, Mat& m, Mat& v, long t, const OptimConfig& c) {
    const double b1t = 1.0 - std::pow(c.beta1, static_cast<double>(t));
    const double b2t = 1.0 - std::pow(c.beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < w.size(); ++i) {
        m.a[i] = c.beta1 * m.a[i] + (1.0 - c.beta1) * g.a[i];
        v.a[i] = c.beta2 * v.a[i] + (1.0 - c.beta2) * g.a[i] * g.a[i];
        const double mh = m.a[i] / b1t;
        const double vh = v.a[i] / b2t;
        w.a[i] -= c.lr * mh / (std::sqrt(vh) + c.eps);
    }
}

void sgd_update(Mat& w, const Mat& g, double lr) {
    for (std::size_t i = 0; i < w.size(); ++i) w.a[i] -= lr * g.a[i];
}

}  // namespace

void Optimizer::step(snn::WeightSet& w, const WeightGrads& g) {
    if (cfg_.clip_norm > 0.0) {
        double n2 = 0.0;
        for (double v : g.g_in.a) n2 += v * v;
        for (double v : g.g_out.a) n2 += v * v;
        if (g.g_rec)
            for (double v : g.g_rec->a) n2 += v * v;
        const double n = std::sqrt(n2);
        if (n > cfg_.clip_norm) {
            const double s = cfg_.clip_norm / n;
            WeightGrads clipped = g;
            for (double& v : clipped.g_in.a) v *= s;
            for (double& v : clipped.g_out.a) v *= s;
            if (clipped.g_rec)
                for (double& v : clipped.g_rec->a) v *= s;
            step_unclipped(w, clipped);
            return;
        }
    }
    step_unclipped(w, g);
}

void Optimizer::step_unclipped(snn::WeightSet& w, const WeightGrads& g) {
    if (cfg_.kind == OptimConfig::Kind::sgd) {
        sgd_update(w.theta_in, g.g_in, cfg_.lr);
        sgd_update(w.theta_out, g.g_out, cfg_.lr);
        if (w.theta_rec) sgd_update(*w.theta_rec, *g.g_rec, cfg_.lr);
        return;
    }
    ++t_;
    adam_update(w.theta_in, g.g_in, m_in_, v_in_, t_, cfg_);
    adam_update(w.theta_out, g.g_out, m_out_, v_out_, t_, cfg_);
    if (w.theta_rec) adam_update(*w.theta_rec, *g.g_rec, *m_rec_, *v_rec_, t_, cfg_);
}

snn::WeightSet init_weights(std::size_t n_in, std::size_t n_hid, std::size_t n_out,
                            bool recurrent, RandomStream& rng) {
    snn::WeightSet w;
    w.theta_in = Mat(n_hid, n_in);
    const double s_in = 1.0 / std::sqrt(static_cast<double>(n_in));
    for (double& v : w.theta_in.a) v = s_in * rng.normal();
    if (recurrent) {
        w.theta_rec = Mat(n_hid, n_hid);
        // damped: a full-scale random recurrent matrix self-sustains firing
        // from the first step and stalls training in a saturated regime
        const double s_rec = 0.1 / std::sqrt(static_cast<double>(n_hid));
        for (double& v : w.theta_rec->a) v = s_rec * rng.normal();
    }
    w.theta_out = Mat(n_out, n_hid);
    const double s_out = 1.0 / std::sqrt(static_cast<double>(n_hid));
    for (double& v : w.theta_out.a) v = s_out * rng.normal();
    return w;
}

}  // namespace snnrx::train
