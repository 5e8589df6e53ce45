#pragma once

#include <vector>

#include "snnrx/raster.hpp"
#include "snnrx/rng.hpp"

namespace snnrx::codec {

enum class EncoderKind {
    bernoulli,
    ttfs,
    rfe_gaussian,
    rfe_linear,
    ternary,
    quantization,
    one_hot,
};

// Configuration of one neural encoder. Which fields apply depends on the
// variant: Bernoulli/TTFS use the range only; receptive fields use mu/width;
// ternary and quantization encodings use x_max (symmetric range) and N_enc
// quantizer bits; one_hot uses n_classes.
struct EncoderSpec {
    EncoderKind variant = EncoderKind::ttfs;
    std::size_t K = 1;       // time steps
    std::size_t n_enc = 1;   // output spike signals
    double x_min = 0.0;
    double x_max = 1.0;
    std::vector<double> mu;     // field centers (RFE)
    std::vector<double> width;  // sigma_j (Gaussian) or Delta_j (linear)
    std::size_t n_classes = 0;  // one_hot

    void validate() const;
    std::size_t output_rows() const;
};

SpikeRaster encode_bernoulli(double x, const EncoderSpec& spec, RandomStream& rng);
SpikeRaster encode_ttfs(double x, const EncoderSpec& spec);
SpikeRaster encode_rfe_gaussian(double x, const EncoderSpec& spec);
SpikeRaster encode_rfe_linear(double x, const EncoderSpec& spec);
SpikeRaster encode_ternary(double x, const EncoderSpec& spec);
SpikeRaster encode_quantization(double x, const EncoderSpec& spec);
SpikeRaster encode_one_hot(int label, std::size_t n_classes, std::size_t K);

// Dispatch on spec.variant. rng is only consumed by the Bernoulli encoder.
SpikeRaster encode(double x, const EncoderSpec& spec, RandomStream* rng = nullptr);

// Gray code helpers shared by TE/QE and the constellation mapping.
inline unsigned gray_encode(unsigned q) { return q ^ (q >> 1); }
inline unsigned gray_decode(unsigned g) {
    unsigned q = 0;
    for (; g; g >>= 1) q ^= g;
    return q;
}

}  // namespace snnrx::codec
