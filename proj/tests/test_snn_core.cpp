#include <doctest.h>

#include <cmath>

#include "snnrx/filters.hpp"
#include "snnrx/network.hpp"
#include "snnrx/rng.hpp"
#include "snnrx/srm.hpp"

using namespace snnrx;
using namespace snnrx::snn;

namespace {

NeuronConfig default_lif() { return {10.0, 5.0, 1.0, 1.0, 0.0, true}; }

SpikeRaster random_raster(std::size_t rows, std::size_t K, double density, RandomStream& rng) {
    SpikeRaster r(rows, K);
    for (auto& v : r.data) v = rng.bernoulli(density) ? 1 : 0;
    return r;
}

}  // namespace

TEST_CASE("lif_step closed forms") {
    const auto cfg = default_lif();

    LayerState s(1);
    auto sp = lif_step(s, std::vector<double>{0.0}, cfg);
    CHECK(s.v[0] == 0.0);  // zero fixed point
    CHECK(s.i[0] == 0.0);
    CHECK(sp[0] == 0);

    s = LayerState(1);
    s.i[0] = 1.0;
    sp = lif_step(s, std::vector<double>{0.0}, cfg);
    CHECK(s.v[0] == doctest::Approx(0.904837).epsilon(1e-6));  // e^{-0.1}
    CHECK(s.i[0] == doctest::Approx(0.818731).epsilon(1e-6));  // e^{-0.2}
    CHECK(sp[0] == 0);

    // pre-reset 1.5 e^{-0.1} = 1.357256 > v_th -> spike, reset to v_rest
    s = LayerState(1);
    s.v[0] = 0.5;
    s.i[0] = 1.0;
    sp = lif_step(s, std::vector<double>{0.0}, cfg);
    CHECK(sp[0] == 1);
    CHECK(s.v[0] == 0.0);

    // LI neuron: same dynamics, no spike, no reset
    auto li = cfg;
    li.spiking = false;
    s = LayerState(1);
    s.v[0] = 0.5;
    s.i[0] = 1.0;
    sp = lif_step(s, std::vector<double>{0.0}, li);
    CHECK(sp[0] == 0);
    CHECK(s.v[0] == doctest::Approx(1.5 * std::exp(-0.1)));

    s = LayerState(1);
    CHECK_THROWS(lif_step(s, std::vector<double>{std::nan("")}, cfg));
}

TEST_CASE("lif post-reset contract: state potential never exceeds v_th") {
    RandomStream rng(21, "post-reset");
    const auto cfg = default_lif();
    LayerState s(6);
    std::vector<double> drive(6);
    for (int k = 0; k < 200; ++k) {
        for (auto& d : drive) d = rng.normal(0.4, 1.0);
        lif_step(s, drive, cfg);
        for (double v : s.v) CHECK(v <= cfg.v_th);
    }
}

TEST_CASE("LI neuron with huge tau_m approximates a running-sum integrator") {
    RandomStream rng(22, "li-sum");
    NeuronConfig cfg{1e6, 5.0, 1.0, 1.0, 0.0, false};
    LayerState s(1);
    double i_sum = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double d = rng.uniform();
        const double i_before = s.i[0];
        lif_step(s, std::vector<double>{d}, cfg);
        i_sum += i_before;  // v accumulates the pre-step current
    }
    CHECK(s.v[0] == doctest::Approx(i_sum).epsilon(1e-3));  // within 0.1%
}

TEST_CASE("make_filter closed forms") {
    SUBCASE("delayed raised cosine") {
        const auto h = make_filter(FilterKind::delayed_raised_cosine,
                                   {.dt = 1.0, .l_max = 8, .l_off = 2});
        CHECK(h.size() == 11);
        CHECK(h[2] == doctest::Approx(0.0).epsilon(1e-12));   // cos(-pi)+1 = 0
        CHECK(h[2 + 4] == doctest::Approx(1.0));              // cos(0)+1 over 2
        CHECK(h[0] == 0.0);
        CHECK(h[1] == 0.0);
    }
    SUBCASE("delay filter is a Kronecker delta") {
        const auto h = make_filter(FilterKind::delay, {.l_off = 3});
        CHECK(h.size() == 4);
        CHECK(h[3] == 1.0);
        CHECK(h[0] + h[1] + h[2] == 0.0);
    }
    SUBCASE("exponential and feedback filters") {
        const auto a = make_filter(FilterKind::exponential, {.tau = 3.0, .dt = 1.0, .l_max = 5});
        CHECK(a[0] == 1.0);
        CHECK(a[2] == doctest::Approx(std::exp(-2.0 / 3.0)));
        const auto b = make_filter(FilterKind::feedback_exponential,
                                   {.tau = 0.5, .dt = 1.0, .l_max = 5});
        CHECK(b[0] == -1.0);
        CHECK(b[1] == doctest::Approx(-std::exp(-2.0)));
    }
    SUBCASE("negative support rejected") {
        CHECK_THROWS(make_filter(FilterKind::delay, {.l_off = -1}));
        CHECK_THROWS(make_filter(FilterKind::exponential, {.tau = 3.0, .l_max = -2}));
    }
}

TEST_CASE("srm_membrane closed forms") {
    SUBCASE("all-zero histories") {
        SpikeRaster in(2, 6);
        FilterBank bank;
        bank.feedforward = {{make_filter(FilterKind::exponential, {.tau = 3.0, .l_max = 5})},
                            {make_filter(FilterKind::exponential, {.tau = 3.0, .l_max = 5})}};
        bank.weights = {{1.0}, {1.0}};
        CHECK(srm_membrane(in, bank, {}, 4) == 0.0);
    }
    SUBCASE("single spike through an exponential filter") {
        SpikeRaster in(1, 6);
        in.at(0, 0) = 1;
        FilterBank bank;
        bank.feedforward = {{make_filter(FilterKind::exponential, {.tau = 3.0, .l_max = 5})}};
        bank.weights = {{1.0}};
        CHECK(srm_membrane(in, bank, {}, 2) == doctest::Approx(0.513417).epsilon(1e-6));
    }
    SUBCASE("feedback contribution at lag zero is -1") {
        SpikeRaster in(1, 6);
        FilterBank bank;
        bank.feedforward = {{make_filter(FilterKind::exponential, {.tau = 3.0, .l_max = 5})}};
        bank.weights = {{1.0}};
        bank.feedback = make_filter(FilterKind::feedback_exponential,
                                    {.tau = 0.5, .dt = 1.0, .l_max = 5});
        bank.theta_rec = 1.0;
        std::vector<uint8_t> past(6, 0);
        past[0] = 1;  // output spike at kappa-1 = 0
        CHECK(srm_membrane(in, bank, past, 1) == doctest::Approx(-1.0));
    }
    SUBCASE("dimension mismatch rejected") {
        SpikeRaster in(2, 6);
        FilterBank bank;
        bank.feedforward = {{make_filter(FilterKind::exponential, {.tau = 3.0, .l_max = 5})}};
        bank.weights = {{1.0}};
        CHECK_THROWS(srm_membrane(in, bank, {}, 2));
    }
}

TEST_CASE("srm_sample firing probabilities") {
    RandomStream rng(23, "srm-sample");
    CHECK(srm_sample(1.0, 1.0, rng).p == doctest::Approx(0.5));
    CHECK(srm_sample(1.0 + std::log(3.0), 1.0, rng).p == doctest::Approx(0.75));
    CHECK(srm_sample(-1e9, 1.0, rng).p == doctest::Approx(0.0));
    // Bernoulli statistics against the supplied stream
    int fires = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) fires += srm_sample(1.0, 1.0, rng).spike;
    CHECK(std::abs(fires / double(n) - 0.5) < 3.0 * 0.5 / std::sqrt(double(n)));
}

TEST_CASE("run_network basics") {
    RandomStream rng(24, "run-net");
    SnnSpec spec;
    spec.n_in = 3;
    spec.n_hid = 4;
    spec.n_out = 2;
    spec.hidden = default_lif();
    spec.output = default_lif();
    spec.output.spiking = false;

    WeightSet w;
    w.theta_in = Mat(4, 3);
    w.theta_out = Mat(2, 4);

    SUBCASE("all-zero weights: silent hidden layer, resting output") {
        const auto input = random_raster(3, 10, 0.5, rng);
        const auto run = run_network(w, input, spec, 10);
        CHECK(run.hidden.count_nonzero() == 0);
        for (double v : run.out_potentials.a) CHECK(v == spec.output.v_rest);
    }

    SUBCASE("single strong path: hand-traced spike timing") {
        SnnSpec one;
        one.n_in = 1;
        one.n_hid = 1;
        one.n_out = 1;
        one.hidden = default_lif();
        one.output = default_lif();
        one.output.spiking = false;
        WeightSet w1;
        w1.theta_in = Mat(1, 1);
        w1.theta_in(0, 0) = 3.0;
        w1.theta_out = Mat(1, 1);
        w1.theta_out(0, 0) = 1.0;
        SpikeRaster input(1, 6);
        input.at(0, 2) = 1;  // single input spike at kappa=2

        const auto run = run_network(w1, input, one, 6);
        // hand trace: i[2]=3, v[3]=3 e^{-0.1}=2.71>1 -> first hidden spike at 3
        CHECK(run.hidden.at(0, 0) == 0);
        CHECK(run.hidden.at(0, 1) == 0);
        CHECK(run.hidden.at(0, 2) == 0);
        CHECK(run.hidden.at(0, 3) == 1);
        // brute-force replica of the recursions, including the reset
        double v = 0, i = 0;
        const double dm = std::exp(-0.1), ds = std::exp(-0.2);
        for (std::size_t k = 0; k < 6; ++k) {
            const double vn = v * dm + i * dm;
            i = i * ds + 3.0 * input.at(0, k);
            const bool spike = vn > 1.0;
            v = spike ? 0.0 : vn;
            CHECK(run.hidden.at(0, k) == (spike ? 1 : 0));
        }
    }

    SUBCASE("bipolar inputs contribute signed drive") {
        SnnSpec one;
        one.n_in = 1;
        one.n_hid = 1;
        one.n_out = 1;
        one.hidden = default_lif();
        one.output = default_lif();
        one.output.spiking = false;
        WeightSet w1;
        w1.theta_in = Mat(1, 1);
        w1.theta_in(0, 0) = 3.0;
        w1.theta_out = Mat(1, 1);
        SpikeRaster input(1, 4, Polarity::bipolar);
        input.at(0, 0) = -1;
        const auto run = run_network(w1, input, one, 4);
        CHECK(run.hidden.count_nonzero() == 0);  // negative drive never crosses threshold
    }

    SUBCASE("determinism: identical runs are identical") {
        const auto input = random_raster(3, 12, 0.4, rng);
        WeightSet wr;
        wr.theta_in = Mat(4, 3);
        wr.theta_out = Mat(2, 4);
        for (auto& v : wr.theta_in.a) v = rng.normal(0.5, 1.0);
        for (auto& v : wr.theta_out.a) v = rng.normal(0.5, 1.0);
        const auto a = run_network(wr, input, spec, 12);
        const auto b = run_network(wr, input, spec, 12);
        CHECK(a.hidden.data == b.hidden.data);
        CHECK(a.out_potentials.a == b.out_potentials.a);
    }

    SUBCASE("recurrence disabled equals theta_rec = 0") {
        SnnSpec rec = spec;
        rec.recurrent = true;
        WeightSet wr;
        wr.theta_in = Mat(4, 3);
        wr.theta_out = Mat(2, 4);
        for (auto& v : wr.theta_in.a) v = rng.normal(1.0, 1.0);
        for (auto& v : wr.theta_out.a) v = rng.normal(1.0, 1.0);
        WeightSet wz = wr;
        wz.theta_rec = Mat(4, 4);  // all zero
        const auto input = random_raster(3, 10, 0.5, rng);
        const auto a = run_network(wr, input, spec, 10);
        const auto b = run_network(wz, input, rec, 10);
        CHECK(a.hidden.data == b.hidden.data);
        CHECK(a.out_potentials.a == b.out_potentials.a);
    }

    SUBCASE("topology mismatch rejected") {
        const auto input = random_raster(2, 10, 0.5, rng);
        CHECK_THROWS(run_network(w, input, spec, 10));
    }
}

TEST_CASE("SRM with exponential filter reproduces tau_s=0 leaky integration") {
    // subthreshold correspondence: the exponential-filter SRM membrane equals
    // the tau_s=0 LI potential one step later, for any raster and weights
    RandomStream rng(25, "srm-li");
    const std::size_t J = 3, K = 12;
    const double tau_m = 7.0;

    for (int inst = 0; inst < 5; ++inst) {
        const auto input = random_raster(J, K, 0.4, rng);
        std::vector<double> theta(J);
        for (auto& t : theta) t = rng.normal(0.0, 0.3);

        FilterBank bank;
        for (std::size_t j = 0; j < J; ++j) {
            bank.feedforward.push_back(
                {make_filter(FilterKind::exponential,
                             {.tau = tau_m, .dt = 1.0, .l_max = int(K)})});
            bank.weights.push_back({theta[j]});
        }

        NeuronConfig li{tau_m, 0.0, 1.0, 1e9, 0.0, false};
        LayerState s(1);
        for (std::size_t k = 0; k < K; ++k) {
            double drive = 0.0;
            for (std::size_t j = 0; j < J; ++j) drive += theta[j] * input.at(j, k);
            // LI potential after step k+1 equals the SRM membrane at k scaled
            // by one decay (Eq-style double decay of the discrete LIF)
            const double v_srm = srm_membrane(input, bank, {}, k);
            lif_step(s, std::vector<double>{drive}, li);
            // advance one more step with zero input to read the comparison
            LayerState probe = s;
            lif_step(probe, std::vector<double>{0.0}, li);
            CHECK(probe.v[0] == doctest::Approx(v_srm * std::exp(-1.0 / tau_m)).epsilon(1e-9));
        }
    }
}

TEST_CASE("SRM hard threshold with reset-emulating feedback matches soft-reset LIF trains") {
    // exact spiking correspondence: theta' = dm*theta, theta_r = v_th*dm,
    // tau_rec = tau_m gives s_srm[k] == s_lif[k+1] for the tau_s=0 LIF whose
    // reset subtracts v_th (test-side oracle)
    RandomStream rng(26, "srm-lif-hard");
    const std::size_t K = 20;
    const double tau_m = 5.0, v_th = 1.0;
    const double dm = std::exp(-1.0 / tau_m);

    for (int inst = 0; inst < 8; ++inst) {
        const auto input = random_raster(2, K, 0.5, rng);
        std::vector<double> theta{rng.normal(0.8, 0.4), rng.normal(0.8, 0.4)};

        FilterBank bank;
        for (std::size_t j = 0; j < 2; ++j) {
            bank.feedforward.push_back(
                {make_filter(FilterKind::exponential,
                             {.tau = tau_m, .dt = 1.0, .l_max = int(K)})});
            bank.weights.push_back({dm * theta[j]});
        }
        bank.feedback =
            make_filter(FilterKind::feedback_exponential, {.tau = tau_m, .dt = 1.0,
                                                           .l_max = int(K)});
        bank.theta_rec = v_th * dm;

        // SRM with a hard threshold
        std::vector<uint8_t> s_srm(K, 0);
        for (std::size_t k = 0; k < K; ++k) {
            const double v = srm_membrane(input, bank, s_srm, k);
            s_srm[k] = v > v_th ? 1 : 0;
        }

        // oracle: tau_s = 0 LIF with subtractive reset
        std::vector<uint8_t> s_lif(K + 1, 0);
        double v = 0.0, i = 0.0;
        for (std::size_t k = 0; k <= K; ++k) {
            const double vn = (v + i) * dm;
            double drive = 0.0;
            if (k < K)
                for (std::size_t j = 0; j < 2; ++j) drive += theta[j] * input.at(j, k);
            i = drive;
            s_lif[k] = vn > v_th ? 1 : 0;
            v = vn - (s_lif[k] ? v_th : 0.0);
        }
        for (std::size_t k = 0; k < K; ++k) CHECK(s_srm[k] == s_lif[k + 1]);
    }
}
