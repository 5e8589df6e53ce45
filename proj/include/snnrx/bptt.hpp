#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "snnrx/network.hpp"
#include "snnrx/raster.hpp"
#include "snnrx/rng.hpp"
#include "snnrx/surrogate.hpp"

namespace snnrx::train {

// Weights of the regularization loss: alpha_r1/alpha_r2 scale the mean
// squared input/output weights, alpha_r3 the deviation of every hidden
// neuron's batch-mean spike count from the target alpha_r4.
struct RegConfig {
    double alpha_r1 = 0.0;
    double alpha_r2 = 0.0;
    double alpha_r3 = 0.0;
    double alpha_r4 = 0.0;
};

enum class Readout {
    eotm,  // logits = output potentials at the final step
    motm,  // logits = per-neuron maximum potential over time
};

struct BpttModel {
    snn::SnnSpec snn;
    Readout readout = Readout::eotm;
    SurrogateConfig surrogate;
};

struct Sample {
    SpikeRaster input;
    int label = 1;  // 1-based class label
};

struct WeightGrads {
    Mat g_in;
    std::optional<Mat> g_rec;
    Mat g_out;
};

enum class GradMode {
    // Heaviside spikes in the forward pass; the reverse pass substitutes the
    // fast-sigmoid derivative for the Heaviside derivative and treats the
    // post-spike reset as a stop-gradient on the potential path.
    hard,
    // sigma_eta replaces the Heaviside everywhere in the forward pass and the
    // reverse pass is its exact reverse-mode differentiation. Used by the
    // finite-difference correctness checks.
    relaxed,
};

struct BpttResult {
    WeightGrads grads;
    double loss_ce = 0.0;   // batch-mean cross entropy (unscaled)
    double loss_reg = 0.0;  // regularization loss of the batch
    double z_avg = 0.0;     // mean hidden spikes per sample
    std::size_t correct = 0;
};

// Gradient of loss_scale * CE + regularization with respect to every weight
// matrix, reverse-mode through the unrolled LIF recursions (explicit
// recurrence included when present). Throws on non-finite loss.
BpttResult bptt_sg_grad(const BpttModel& model, const snn::WeightSet& w,
                        std::span<const Sample> batch, const RegConfig& reg,
                        GradMode mode = GradMode::hard, double loss_scale = 1.0);

// Regularization loss from hidden rasters of a processed batch (Eq-style
// three-term form). Always >= 0.
double regularization_loss(const snn::WeightSet& w, std::span<const SpikeRaster> hidden,
                           const RegConfig& reg);

// Forward-only inference on the fast (spike-list) path; bitwise identical to
// run_network followed by the matching readout.
struct InferResult {
    int label = 1;  // argmax of logits, lowest index on ties
    std::vector<double> logits;
    std::size_t hidden_spikes = 0;
};
InferResult infer(const BpttModel& model, const snn::WeightSet& w, const SpikeRaster& input);

// Reusable inference context: weights are validated and laid out once, then
// many rasters can be pushed through without per-call setup cost.
class SnnRunner {
  public:
    SnnRunner(const BpttModel& model, const snn::WeightSet& w);
    ~SnnRunner();
    SnnRunner(SnnRunner&&) noexcept;
    SnnRunner& operator=(SnnRunner&&) noexcept;

    InferResult infer(const SpikeRaster& input) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// ---- optimizers ------------------------------------------------------------

struct OptimConfig {
    enum class Kind { sgd, adam } kind = Kind::adam;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double clip_norm = 0.0;  // global gradient-norm clip; 0 disables
};

class Optimizer {
  public:
    Optimizer(const OptimConfig& cfg, const snn::WeightSet& shape);
    void step(snn::WeightSet& w, const WeightGrads& g);
    void step_unclipped(snn::WeightSet& w, const WeightGrads& g);
    void set_lr(double lr) { cfg_.lr = lr; }
    double lr() const { return cfg_.lr; }

  private:
    OptimConfig cfg_;
    long t_ = 0;
    Mat m_in_, v_in_, m_out_, v_out_;
    std::optional<Mat> m_rec_, v_rec_;
};

// N(0, 1/fan_in) initialization for gradient-trained networks.
snn::WeightSet init_weights(std::size_t n_in, std::size_t n_hid, std::size_t n_out,
                            bool recurrent, RandomStream& rng);

}  // namespace snnrx::train
