#include "snnrx/encoders.hpp"

#include <cmath>
#include <stdexcept>

namespace snnrx::codec {

void EncoderSpec::validate() const {
    if (K < 1) throw std::invalid_argument("EncoderSpec: K >= 1 required");
    switch (variant) {
        case EncoderKind::bernoulli:
        case EncoderKind::ttfs:
            if (!(x_min < x_max)) throw std::invalid_argument("EncoderSpec: x_min < x_max");
            break;
        case EncoderKind::rfe_gaussian:
        case EncoderKind::rfe_linear:
            if (mu.size() != n_enc || width.size() != n_enc)
                throw std::invalid_argument("EncoderSpec: RFE needs N_enc centers and widths");
            for (double w : width)
                if (!(w > 0.0)) throw std::invalid_argument("EncoderSpec: field width > 0");
            break;
        case EncoderKind::ternary:
        case EncoderKind::quantization:
            if (!(x_max > 0.0) || x_min != -x_max)
                throw std::invalid_argument("EncoderSpec: TE/QE need symmetric range");
            if (n_enc < 1 || n_enc > 30)
                throw std::invalid_argument("EncoderSpec: N_enc out of range");
            break;
        case EncoderKind::one_hot:
            if (n_classes < 1) throw std::invalid_argument("EncoderSpec: n_classes >= 1");
            break;
    }
}

std::size_t EncoderSpec::output_rows() const {
    switch (variant) {
        case EncoderKind::bernoulli:
        case EncoderKind::ttfs:
            return 1;
        case EncoderKind::one_hot:
            return n_classes;
        default:
            return n_enc;
    }
}

SpikeRaster encode_bernoulli(double x, const EncoderSpec& spec, RandomStream& rng) {
    spec.validate();
    if (x < 0.0) throw std::invalid_argument("encode_bernoulli: x >= 0 required");
    const double p = std::min(1.0, x / spec.x_max);
    SpikeRaster r(1, spec.K);
    for (std::size_t k = 0; k < spec.K; ++k) r.at(0, k) = rng.bernoulli(p) ? 1 : 0;
    return r;
}

SpikeRaster encode_ttfs(double x, const EncoderSpec& spec) {
    spec.validate();
    if (x < spec.x_min || x > spec.x_max)
        throw std::invalid_argument("encode_ttfs: x out of range");
    const double frac = (x - spec.x_min) / (spec.x_max - spec.x_min);
    const auto kappa = static_cast<std::size_t>(std::floor(frac * (spec.K - 1)));
    SpikeRaster r(1, spec.K);
    r.at(0, std::min(kappa, spec.K - 1)) = 1;
    return r;
}

SpikeRaster encode_rfe_gaussian(double x, const EncoderSpec& spec) {
    spec.validate();
    SpikeRaster r(spec.n_enc, spec.K);
    for (std::size_t j = 0; j < spec.n_enc; ++j) {
        const double d = x - spec.mu[j];
        const double resp = std::exp(-d * d / (2.0 * spec.width[j] * spec.width[j]));
        const double t = std::ceil((spec.K - 1) * (1.0 - resp));
        r.at(j, std::min<std::size_t>(static_cast<std::size_t>(t), spec.K - 1)) = 1;
    }
    return r;
}

SpikeRaster encode_rfe_linear(double x, const EncoderSpec& spec) {
    spec.validate();
    SpikeRaster r(spec.n_enc, spec.K);
    for (std::size_t j = 0; j < spec.n_enc; ++j) {
        const double dist = std::abs(x - spec.mu[j]);
        std::size_t kappa;
        if (dist <= spec.width[j] / 2.0) {
            kappa = static_cast<std::size_t>(std::floor(2.0 / spec.width[j] * dist * (spec.K - 1)));
            kappa = std::min(kappa, spec.K - 1);
        } else {
            kappa = spec.K - 1;
        }
        r.at(j, kappa) = 1;
    }
    return r;
}

namespace {

// Midtread quantizer of the ternary encoder: level index of |x|, saturating
// at the top level. Matches the midtread characteristic of the TE rather
// than a ceil that would map 0 to a nonzero level.
unsigned te_level(double ax, double delta_q, unsigned max_level) {
    const auto q = static_cast<long long>(std::llround(ax / delta_q));
    return static_cast<unsigned>(std::min<long long>(q, max_level));
}

void gray_bits_to_rows(unsigned level, int sign, std::size_t n_enc, SpikeRaster& r) {
    const unsigned g = gray_encode(level);
    for (std::size_t j = 0; j < n_enc; ++j) {
        // MSB first: row 0 carries the highest bit.
        const unsigned bit = (g >> (n_enc - 1 - j)) & 1u;
        if (bit) r.at(j, 0) = static_cast<int8_t>(sign);
    }
}

}  // namespace

SpikeRaster encode_ternary(double x, const EncoderSpec& spec) {
    spec.validate();
    const double delta_q = spec.x_max / static_cast<double>(1u << spec.n_enc);
    const unsigned max_level = (1u << spec.n_enc) - 1u;
    const unsigned q = te_level(std::abs(x), delta_q, max_level);
    SpikeRaster r(spec.n_enc, spec.K, Polarity::bipolar);
    gray_bits_to_rows(q, x < 0.0 ? -1 : 1, spec.n_enc, r);
    return r;
}

SpikeRaster encode_quantization(double x, const EncoderSpec& spec) {
    spec.validate();
    const double delta_q = spec.x_max / static_cast<double>(1u << (spec.n_enc - 1));
    const long long half = 1ll << (spec.n_enc - 1);
    long long q = static_cast<long long>(std::floor(x / delta_q)) + half;
    q = std::max<long long>(0, std::min<long long>(q, (1ll << spec.n_enc) - 1));
    SpikeRaster r(spec.n_enc, spec.K);
    gray_bits_to_rows(static_cast<unsigned>(q), 1, spec.n_enc, r);
    return r;
}

SpikeRaster encode_one_hot(int label, std::size_t n_classes, std::size_t K) {
    if (label < 1 || static_cast<std::size_t>(label) > n_classes)
        throw std::invalid_argument("encode_one_hot: label out of range");
    SpikeRaster r(n_classes, K);
    r.at(static_cast<std::size_t>(label - 1), 0) = 1;
    return r;
}

SpikeRaster encode(double x, const EncoderSpec& spec, RandomStream* rng) {
    switch (spec.variant) {
        case EncoderKind::bernoulli:
            if (!rng) throw std::invalid_argument("encode: Bernoulli needs a random stream");
            return encode_bernoulli(x, spec, *rng);
        case EncoderKind::ttfs:
            return encode_ttfs(x, spec);
        case EncoderKind::rfe_gaussian:
            return encode_rfe_gaussian(x, spec);
        case EncoderKind::rfe_linear:
            return encode_rfe_linear(x, spec);
        case EncoderKind::ternary:
            return encode_ternary(x, spec);
        case EncoderKind::quantization:
            return encode_quantization(x, spec);
        case EncoderKind::one_hot:
            return encode_one_hot(static_cast<int>(x), spec.n_classes, spec.K);
    }
    throw std::logic_error("encode: unknown variant");
}

}  // namespace snnrx::codec
