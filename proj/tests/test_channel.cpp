#include <doctest.h>

#include <cmath>
#include <numbers>

#include "snnrx/imdd.hpp"
#include "snnrx/rrc.hpp"

using namespace snnrx;
using namespace snnrx::chan;

TEST_CASE("constellations and bit mapping") {
    SUBCASE("bpsk: x = (-1)^b") {
        const auto c = Constellation::bpsk();
        c.validate();
        CHECK(map_bits({0}, c) == cplx(1.0, 0.0));
        CHECK(map_bits({1}, c) == cplx(-1.0, 0.0));
    }
    SUBCASE("16qam: bijection, unit energy, Gray neighbors") {
        const auto c = Constellation::qam16();
        c.validate();
        CHECK(c.size() == 16);
        double e = 0.0;
        for (const auto& p : c.points) e += std::norm(p);
        CHECK(e / 16.0 == doctest::Approx(1.0).epsilon(1e-12));

        for (std::size_t i = 0; i < 16; ++i)
            CHECK(map_bits_index(demap(i, c), c) == i);  // round trip

        // adjacent grid points differ in exactly one bit
        const double c0 = std::sqrt(10.0) / 10.0;
        for (std::size_t i = 0; i < 16; ++i)
            for (std::size_t j = 0; j < 16; ++j) {
                const auto d = c.points[i] - c.points[j];
                if (std::abs(std::abs(d.real()) - 2 * c0) < 1e-9 && std::abs(d.imag()) < 1e-9) {
                    int diff = 0;
                    for (std::size_t b = 0; b < 4; ++b) diff += c.bit_map[i][b] != c.bit_map[j][b];
                    CHECK(diff == 1);
                }
            }
        CHECK_THROWS(map_bits({0, 1}, c));
    }
}

TEST_CASE("awgn statistics") {
    RandomStream rng(41, "awgn");
    std::vector<cplx> x(1000, cplx(0.3, -0.7));

    SUBCASE("zero noise is exact") {
        const auto y = awgn_transmit(x, 0.0, rng);
        CHECK(y == x);
    }
    SUBCASE("variance and component correlation") {
        const double sigma2 = 0.37;
        std::vector<cplx> big(1000000, cplx(0.0, 0.0));
        const auto y = awgn_transmit(big, sigma2, rng);
        double var = 0.0, corr = 0.0;
        for (const auto& v : y) {
            var += std::norm(v);
            corr += v.real() * v.imag();
        }
        var /= static_cast<double>(y.size());
        corr /= static_cast<double>(y.size()) * (sigma2 / 2.0);
        CHECK(std::abs(var - sigma2) / sigma2 < 0.01);
        CHECK(std::abs(corr) < 0.01);
    }
}

TEST_CASE("ml detection") {
    const auto c = Constellation::qam16();
    const double c0 = std::sqrt(10.0) / 10.0;
    for (std::size_t i = 0; i < 16; ++i) CHECK(ml_detect(c.points[i], c) == i);
    const auto idx = ml_detect(cplx(0.1, 0.1), c);
    CHECK(c.points[idx] == cplx(c0, c0));

    // noiseless loop-back over every bit pattern
    for (unsigned b = 0; b < 16; ++b) {
        const std::vector<uint8_t> bits{static_cast<uint8_t>((b >> 3) & 1),
                                        static_cast<uint8_t>((b >> 2) & 1),
                                        static_cast<uint8_t>((b >> 1) & 1),
                                        static_cast<uint8_t>(b & 1)};
        CHECK(demap(ml_detect(map_bits(bits, c), c), c) == bits);
    }
}

TEST_CASE("rrc taps") {
    CHECK(rrc_taps(0.2, 16, 3).size() == 49);  // span*sps + 1

    // pipeline span: unit energy, symmetric, Nyquist after matched filtering
    const auto h = rrc_taps(0.2, 20, 3);
    CHECK(h.size() == 61);
    double e = 0.0;
    for (double v : h) e += v * v;
    CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < h.size(); ++i) CHECK(h[i] == h[h.size() - 1 - i]);

    std::vector<double> g(h.size() * 2 - 1, 0.0);
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j) g[i + j] += h[i] * h[j];
    const std::size_t mid = h.size() - 1;
    for (int m = 1; m <= 19; ++m) {
        CHECK(std::abs(g[mid + 3 * m]) < 1e-3 * g[mid]);
        CHECK(std::abs(g[mid - 3 * m]) < 1e-3 * g[mid]);
    }
    CHECK_THROWS(rrc_taps(1.5, 16, 3));
    CHECK_THROWS(rrc_taps(0.2, 15, 3));
}

TEST_CASE("chromatic dispersion block") {
    auto cfg = ImddConfig::preset("ssmf");

    SUBCASE("beta2 unit conversion") {
        // |beta2| of (1550 nm, -17 ps/nm/km) is about 21.7 ps^2/km
        const double ps2_per_km = std::abs(cfg.beta2()) / 1e-27;
        CHECK(ps2_per_km == doctest::Approx(21.7).epsilon(0.01));
    }
    SUBCASE("L = 0 is the identity") {
        auto c0 = cfg;
        c0.fiber_length = 0.0;
        std::vector<std::complex<double>> x(64);
        RandomStream rng(42, "cd");
        for (auto& v : x) v = {rng.normal(), rng.normal()};
        CHECK(cd_apply(x, c0) == x);
    }
    SUBCASE("unit-modulus transfer preserves energy") {
        std::vector<std::complex<double>> x(300);
        RandomStream rng(43, "cd-e");
        for (auto& v : x) v = {rng.normal(), rng.normal()};
        const auto y = cd_apply(x, cfg);
        double ex = 0.0, ey = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            ex += std::norm(x[i]);
            ey += std::norm(y[i]);
        }
        CHECK(std::abs(ex - ey) / ex < 1e-9);
    }
    SUBCASE("commutes with circular time shift") {
        std::vector<std::complex<double>> x(128);
        RandomStream rng(44, "cd-s");
        for (auto& v : x) v = {rng.normal(), rng.normal()};
        const std::size_t s = 17;
        std::vector<std::complex<double>> xs(128);
        for (std::size_t i = 0; i < 128; ++i) xs[(i + s) % 128] = x[i];
        const auto a = cd_apply(xs, cfg);
        const auto y = cd_apply(x, cfg);
        for (std::size_t i = 0; i < 128; ++i)
            CHECK(std::abs(a[(i + s) % 128] - y[i]) < 1e-9);
    }
    SUBCASE("record too short") {
        std::vector<std::complex<double>> x(4);
        CHECK_THROWS(cd_apply(x, cfg));
    }
}

TEST_CASE("imdd pipeline") {
    SUBCASE("constant symbol stream settles to the squared biased level") {
        ImddConfig cfg;
        cfg.constellation = Constellation::pam4({-3.0, -1.0, 1.0, 3.0});
        cfg.bias = 2.25;
        cfg.fiber_length = 0.0;  // no dispersion
        cfg.r_sym = 112e9;
        // constant stream of the level 3 symbol (index 3 -> bits 10)
        std::vector<uint8_t> bits;
        for (int k = 0; k < 200; ++k) {
            bits.push_back(1);
            bits.push_back(0);
        }
        RandomStream rng(45, "imdd-c");
        const auto res = imdd_transmit(bits, cfg, {-300.0}, rng);
        CHECK(res.y.size() == 200);

        const auto h = rrc_taps(cfg.beta_rrc, cfg.rrc_span, cfg.beta_up);
        double sum_h = 0.0;
        for (double v : h) sum_h += v;
        const double g = sum_h / cfg.beta_up;           // pulse-shaping DC gain
        const double steady = (3.0 * g + cfg.bias) * (3.0 * g + cfg.bias) * sum_h;
        for (std::size_t k = 60; k < 140; ++k)
            CHECK(res.y[k] == doctest::Approx(steady).epsilon(0.01));
    }

    SUBCASE("noiseless output clusters into |X| separated lobes") {
        auto cfg = ImddConfig::preset("lcd");
        cfg.fiber_length = 0.0;
        RandomStream rng(46, "imdd-l");
        std::vector<uint8_t> bits(2 * 4000);
        for (auto& b : bits) b = rng.bernoulli(0.5) ? 1 : 0;
        const auto res = imdd_transmit(bits, cfg, {-300.0}, rng);

        std::vector<double> mean(4, 0.0), m2(4, 0.0);
        std::vector<std::size_t> n(4, 0);
        for (std::size_t k = 0; k < res.y.size(); ++k) {
            const auto i = res.index[k];
            mean[i] += res.y[k];
            m2[i] += res.y[k] * res.y[k];
            ++n[i];
        }
        for (int i = 0; i < 4; ++i) {
            mean[i] /= n[i];
            m2[i] = std::sqrt(std::max(0.0, m2[i] / n[i] - mean[i] * mean[i]));
        }
        for (int i = 0; i < 3; ++i) {
            const double gap = mean[i + 1] - mean[i];
            CHECK(gap > 0.0);
            CHECK(gap > 3.0 * std::max(m2[i], m2[i + 1]));  // lobes separated vs ISI spread
        }
    }

    SUBCASE("transmit is deterministic given the stream state") {
        const auto cfg = ImddConfig::preset("lcd");
        std::vector<uint8_t> bits(2 * 500);
        RandomStream bitrng(47, "bits");
        for (auto& b : bits) b = bitrng.bernoulli(0.5) ? 1 : 0;
        RandomStream r1(48, "imdd"), r2(48, "imdd");
        const auto a = imdd_transmit(bits, cfg, {-18.0}, r1);
        const auto b = imdd_transmit(bits, cfg, {-18.0}, r2);
        CHECK(a.y == b.y);
    }

    SUBCASE("noise injection variance survives the unit-energy matched filter") {
        for (const char* name : {"lcd", "ssmf"}) {
            const auto cfg = ImddConfig::preset(name);
            RandomStream bitrng(49, "imdd-p");
            std::vector<uint8_t> bits(2 * 50000);
            for (auto& b : bits) b = bitrng.bernoulli(0.5) ? 1 : 0;
            RandomStream r1(50, "imdd"), r2(50, "imdd");
            const auto noisy = imdd_transmit(bits, cfg, {-20.0}, r1);
            const auto clean = imdd_transmit(bits, cfg, {-300.0}, r2);
            double var = 0.0;
            for (std::size_t k = 0; k < noisy.y.size(); ++k) {
                const double d = noisy.y[k] - clean.y[k];
                var += d * d;
            }
            var /= static_cast<double>(noisy.y.size());
            CHECK(var == doctest::Approx(0.01).epsilon(0.05));
        }
    }

    SUBCASE("odd bit count rejected") {
        const auto cfg = ImddConfig::preset("lcd");
        RandomStream rng(50, "imdd-odd");
        CHECK_THROWS(imdd_transmit(std::vector<uint8_t>{1, 0, 1}, cfg, {-20.0}, rng));
    }
}
