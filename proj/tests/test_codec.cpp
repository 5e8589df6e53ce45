#include <doctest.h>

#include <cmath>

#include "snnrx/decoders.hpp"
#include "snnrx/encoders.hpp"

using namespace snnrx;
using namespace snnrx::codec;

namespace {

std::size_t single_spike_time(const SpikeRaster& r, std::size_t row) {
    std::size_t t = r.cols, n = 0;
    for (std::size_t k = 0; k < r.cols; ++k)
        if (r.at(row, k)) {
            t = k;
            ++n;
        }
    REQUIRE(n == 1);
    return t;
}

EncoderSpec make_spec(EncoderKind kind, std::size_t n_enc, std::size_t K, double x_max) {
    EncoderSpec s;
    s.variant = kind;
    s.n_enc = n_enc;
    s.K = K;
    s.x_max = x_max;
    s.x_min = (kind == EncoderKind::ternary || kind == EncoderKind::quantization) ? -x_max : 0.0;
    return s;
}

}  // namespace

TEST_CASE("bernoulli encoder") {
    auto spec = make_spec(EncoderKind::bernoulli, 1, 10, 1.0);
    RandomStream rng(31, "be");
    CHECK(encode_bernoulli(0.0, spec, rng).count_nonzero() == 0);
    CHECK(encode_bernoulli(1.0, spec, rng).count_nonzero() == 10);
    CHECK_THROWS(encode_bernoulli(-0.1, spec, rng));

    spec.K = 10000;
    const auto r = encode_bernoulli(0.5, spec, rng);
    const auto n = static_cast<double>(r.count_nonzero());
    CHECK(std::abs(n - 5000.0) < 3.0 * 50.0);  // binomial 3 sigma
}

TEST_CASE("ttfs encoder") {
    auto spec = make_spec(EncoderKind::ttfs, 1, 10, 1.0);
    CHECK(single_spike_time(encode_ttfs(0.0, spec), 0) == 0);
    CHECK(single_spike_time(encode_ttfs(1.0, spec), 0) == 9);
    CHECK(single_spike_time(encode_ttfs(0.5, spec), 0) == 4);  // floor(4.5)
    CHECK_THROWS(encode_ttfs(1.5, spec));

    // monotone in x
    std::size_t prev = 0;
    for (double x = 0.0; x <= 1.0; x += 0.01) {
        const auto t = single_spike_time(encode_ttfs(x, spec), 0);
        CHECK(t >= prev);
        prev = t;
    }
}

TEST_CASE("gaussian receptive fields") {
    EncoderSpec spec;
    spec.variant = EncoderKind::rfe_gaussian;
    spec.n_enc = 3;
    spec.K = 10;
    spec.mu = {0.25, 0.5, 0.75};
    spec.width = {0.1, 0.1, 0.1};

    const auto r = encode_rfe_gaussian(0.1, spec);
    CHECK(single_spike_time(r, 0) == 7);  // reported in the source text
    CHECK(single_spike_time(r, 1) == 9);  // literal ceil evaluation
    CHECK(single_spike_time(r, 2) == 9);
    CHECK(single_spike_time(encode_rfe_gaussian(0.5, spec), 1) == 0);  // field center

    // spike time non-decreasing in |x - mu|
    std::size_t prev = 0;
    for (double d = 0.0; d < 0.5; d += 0.005) {
        const auto t = single_spike_time(encode_rfe_gaussian(0.5 + d, spec), 1);
        CHECK(t >= prev);
        prev = t;
    }

    spec.width[1] = 0.0;
    CHECK_THROWS(encode_rfe_gaussian(0.5, spec));
}

TEST_CASE("linear receptive fields") {
    EncoderSpec spec;
    spec.variant = EncoderKind::rfe_linear;
    spec.n_enc = 1;
    spec.K = 10;
    spec.mu = {0.25};
    spec.width = {0.5};

    CHECK(single_spike_time(encode_rfe_linear(0.25, spec), 0) == 0);
    CHECK(single_spike_time(encode_rfe_linear(5.0, spec), 0) == 9);   // outside
    CHECK(single_spike_time(encode_rfe_linear(0.35, spec), 0) == 3);  // floor(0.4*9)
}

TEST_CASE("ternary encoder") {
    auto spec = make_spec(EncoderKind::ternary, 4, 5, 1.0);

    CHECK(encode_ternary(0.0, spec).count_nonzero() == 0);  // midtread zero level

    const auto r = encode_ternary(0.1, spec);  // q = round(1.6) = 2 -> Gray 0011
    CHECK(r.polarity == Polarity::bipolar);
    CHECK(r.at(0, 0) == 0);
    CHECK(r.at(1, 0) == 0);
    CHECK(r.at(2, 0) == 1);
    CHECK(r.at(3, 0) == 1);
    for (std::size_t k = 1; k < 5; ++k)
        for (std::size_t j = 0; j < 4; ++j) CHECK(r.at(j, k) == 0);

    const auto rn = encode_ternary(-0.1, spec);  // same rows, inverted sign
    CHECK(rn.at(2, 0) == -1);
    CHECK(rn.at(3, 0) == -1);
    CHECK(rn.at(0, 0) == 0);
}

TEST_CASE("quantization encoder") {
    auto spec = make_spec(EncoderKind::quantization, 2, 5, 1.0);

    const auto r0 = encode_quantization(0.0, spec);  // q=2, Gray 11
    CHECK(r0.at(0, 0) == 1);
    CHECK(r0.at(1, 0) == 1);
    CHECK(encode_quantization(-0.75, spec).count_nonzero() == 0);  // q=0

    const auto rs = encode_quantization(10.0, spec);  // saturates at q=3, Gray 10
    CHECK(rs.at(0, 0) == 1);
    CHECK(rs.at(1, 0) == 0);
}

TEST_CASE("TE/QE level round-trip against a brute-force level table") {
    // reconstructing the level from the emitted Gray bits must equal the
    // quantizer level from an independent search over the level table
    for (std::size_t n_enc : {2u, 3u, 4u}) {
        auto te = make_spec(EncoderKind::ternary, n_enc, 3, 1.0);
        auto qe = make_spec(EncoderKind::quantization, n_enc, 3, 1.0);
        const auto levels = 1u << n_enc;
        const double dq_te = 1.0 / levels;
        const double dq_qe = 1.0 / (1u << (n_enc - 1));

        for (int i = 0; i < 2000; ++i) {
            const double x = -1.3 + 2.6 * (i + 0.217) / 2000.0;

            unsigned got_te = 0, got_qe = 0;
            const auto rt = encode_ternary(x, te);
            const auto rq = encode_quantization(x, qe);
            for (std::size_t j = 0; j < n_enc; ++j) {
                got_te = (got_te << 1) | static_cast<unsigned>(rt.at(j, 0) != 0);
                got_qe = (got_qe << 1) | static_cast<unsigned>(rq.at(j, 0) != 0);
            }

            // midtread: nearest multiple of dq, saturating at the top level
            unsigned expect_te = 0;
            double best = 1e300;
            for (unsigned q = 0; q < levels; ++q) {
                const double d = std::abs(std::abs(x) - q * dq_te);
                if (d < best - 1e-15) {
                    best = d;
                    expect_te = q;
                }
            }
            // midrise: interval membership, clamped
            const double shifted = x / dq_qe + (1u << (n_enc - 1));
            long qcell = static_cast<long>(std::floor(shifted));
            qcell = std::max(0l, std::min<long>(qcell, levels - 1));

            CHECK(gray_decode(got_te) == expect_te);
            CHECK(gray_decode(got_qe) == static_cast<unsigned>(qcell));
        }
    }
}

TEST_CASE("encoders are pure and spike-count structured") {
    RandomStream rng(32, "pure");
    auto gspec = make_spec(EncoderKind::rfe_gaussian, 4, 12, 1.0);
    gspec.mu = {0.2, 0.4, 0.6, 0.8};
    gspec.width = {0.1, 0.2, 0.1, 0.2};
    for (int i = 0; i < 50; ++i) {
        const double x = rng.normal(0.5, 0.5);
        const auto a = encode_rfe_gaussian(x, gspec);
        const auto b = encode_rfe_gaussian(x, gspec);
        CHECK(a.data == b.data);
        for (std::size_t j = 0; j < 4; ++j) single_spike_time(a, j);  // exactly one per row
    }
    auto tspec = make_spec(EncoderKind::ternary, 3, 6, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double x = rng.normal(0.0, 0.7);
        const auto r = encode_ternary(x, tspec);
        for (std::size_t k = 1; k < r.cols; ++k)
            for (std::size_t j = 0; j < r.rows; ++j) CHECK(r.at(j, k) == 0);
    }
}

TEST_CASE("one-hot encoder") {
    const auto a = encode_one_hot(1, 4, 5);
    CHECK(a.count_nonzero() == 1);
    CHECK(a.at(0, 0) == 1);
    const auto b = encode_one_hot(4, 4, 5);
    CHECK(b.count_nonzero() == 1);
    CHECK(b.at(3, 0) == 1);
    CHECK_THROWS(encode_one_hot(0, 4, 5));
    CHECK_THROWS(encode_one_hot(5, 4, 5));
}

TEST_CASE("decoders") {
    SUBCASE("single output neuron wins under every variant") {
        SpikeRaster spikes(1, 4);
        spikes.at(0, 2) = 1;
        Mat pot(1, 4);
        for (auto v : {DecoderKind::spike_rate, DecoderKind::ttfs, DecoderKind::eotm,
                       DecoderKind::motm})
            CHECK(decode(spikes, pot, {v}) == 1);
    }
    SUBCASE("spike rate argmax") {
        SpikeRaster spikes(3, 6);
        for (int k = 0; k < 3; ++k) spikes.at(0, k) = 1;
        for (int k = 0; k < 5; ++k) spikes.at(1, k) = 1;
        spikes.at(2, 0) = 1;
        CHECK(decode(spikes, Mat(3, 6), {DecoderKind::spike_rate}) == 2);
    }
    SUBCASE("ttfs: first spike wins, silent neurons rank last") {
        SpikeRaster spikes(3, 6);
        spikes.at(1, 2) = 1;
        spikes.at(2, 4) = 1;
        CHECK(decode(spikes, Mat(3, 6), {DecoderKind::ttfs}) == 2);
    }
    SUBCASE("eotm ties resolve to the lowest index") {
        Mat pot(3, 2);
        pot(0, 1) = 0.2;
        pot(1, 1) = 0.9;
        pot(2, 1) = 0.9;
        CHECK(decode(SpikeRaster(3, 2), pot, {DecoderKind::eotm}) == 2);
    }
    SUBCASE("motm reads the maximum over time") {
        Mat pot(2, 4);
        pot(0, 3) = 0.5;  // higher at the end
        pot(1, 1) = 0.9;  // higher overall
        CHECK(decode(SpikeRaster(2, 4), pot, {DecoderKind::eotm}) == 1);
        CHECK(decode(SpikeRaster(2, 4), pot, {DecoderKind::motm}) == 2);
    }
    SUBCASE("eotm/motm invariant under strictly increasing transforms") {
        RandomStream rng(33, "argmax");
        for (int i = 0; i < 30; ++i) {
            Mat pot(4, 5);
            for (auto& v : pot.a) v = rng.normal(0.0, 2.0);
            Mat warped = pot;
            for (auto& v : warped.a) v = std::tanh(v) * 3.0 + 1.0;
            for (auto kind : {DecoderKind::eotm, DecoderKind::motm})
                CHECK(decode(SpikeRaster(4, 5), pot, {kind}) ==
                      decode(SpikeRaster(4, 5), warped, {kind}));
        }
    }
}
