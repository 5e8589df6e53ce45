#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "snnrx/experiment.hpp"
#include "snnrx/imdd.hpp"

using namespace snnrx;
using namespace snnrx::exp;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("config round-trip is the identity") {
    for (const auto& name : preset_names()) {
        const json a = preset(name);
        const json b = json::parse(a.dump());
        CHECK(a == b);
        CHECK(config_hash(a) == config_hash(b));
    }
}

TEST_CASE("weight checkpoints round-trip") {
    RandomStream rng(91, "ckpt");
    auto w = train::init_weights(5, 7, 3, true, rng);
    const auto j = weights_to_json(w);
    const auto w2 = weights_from_json(j);
    CHECK(w2.theta_in.a == w.theta_in.a);
    CHECK(w2.theta_out.a == w.theta_out.a);
    CHECK(w2.theta_rec->a == w.theta_rec->a);

    auto wn = train::init_weights(4, 3, 2, false, rng);
    const auto w3 = weights_from_json(weights_to_json(wn));
    CHECK_FALSE(w3.theta_rec.has_value());
}

TEST_CASE("seed is mandatory") {
    json cfg = preset("fig6_3");
    cfg.erase("seed");
    RunOptions opt;
    opt.out_dir = "/tmp/snnrx-test-noseed";
    CHECK_THROWS(run(cfg, opt));
}

TEST_CASE("same config and seed reproduce results byte for byte") {
    json cfg = preset("fig6_3");
    cfg["epochs"] = 50;
    cfg["n_seeds"] = 2;

    RunOptions opt;
    opt.out_dir = "/tmp/snnrx-test-det1";
    const auto p1 = run(cfg, opt);
    opt.out_dir = "/tmp/snnrx-test-det2";
    const auto p2 = run(cfg, opt);
    CHECK(slurp(p1) == slurp(p2));
    CHECK(slurp("/tmp/snnrx-test-det1/trace.csv") == slurp("/tmp/snnrx-test-det2/trace.csv"));

    // a different seed changes the draw
    opt.out_dir = "/tmp/snnrx-test-det3";
    opt.seed_override = 99;
    const auto p3 = run(cfg, opt);
    CHECK(slurp(p1) != slurp(p3));
}

TEST_CASE("equalizer run emits one row per sweep point with seed and hash") {
    json cfg;
    cfg["task"] = "equalizer_imdd";
    cfg["seed"] = 5;
    cfg["channel"] = {{"preset", "lcd"}};
    cfg["equalizer"] = {{"structure", "nfe_fir"}};
    cfg["training"] = {{"epochs", 0}, {"batch", 4000}};
    cfg["sweep"] = {{"sigma2_db", {-16, -18, -20}}};
    cfg["samples"] = {{"eval", 4000}};

    RunOptions opt;
    opt.out_dir = "/tmp/snnrx-test-eq";
    const auto path = run(cfg, opt);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "sigma2_db,ber,ser,z_avg,n_theta,mac,seed,spec_id,config");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(line.find(",5,") != std::string::npos);  // seed column
    }
    CHECK(rows == 3);
    CHECK(std::filesystem::exists("/tmp/snnrx-test-eq/metadata.json"));
}

TEST_CASE("dataset export columns") {
    const auto cfg = chan::ImddConfig::preset("lcd");
    RandomStream rng(92, "ds");
    std::vector<uint8_t> bits(2 * 50);
    for (auto& b : bits) b = rng.bernoulli(0.5) ? 1 : 0;
    const auto res = chan::imdd_transmit(bits, cfg, {-20.0}, rng);
    chan::export_dataset_csv("/tmp/snnrx-test-ds.csv", res);
    std::ifstream in("/tmp/snnrx-test-ds.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "index,bit0,bit1,y");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 50);
}

TEST_CASE("bench emits one row per benchmarked structure") {
    json cfg;
    cfg["seed"] = 1;
    cfg["channel"] = {{"preset", "lcd"}};
    RunOptions opt;
    opt.out_dir = "/tmp/snnrx-test-bench";
    opt.threads = 1;
    const auto path = bench(cfg, opt);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "structure,phase,threads,symbols_per_s");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows >= 4);
}

TEST_CASE("make_equalizer_spec applies the channel table defaults") {
    json cfg;
    cfg["task"] = "equalizer_imdd";
    cfg["seed"] = 1;
    cfg["channel"] = {{"preset", "ssmf"}};
    cfg["equalizer"] = {{"structure", "dfe_snn"}, {"encoder", "quantization"},
                        {"regularization", true}};
    const auto channel = make_channel(cfg);
    const auto spec = make_equalizer_spec(cfg, channel);
    CHECK(spec.n_tap == 21);
    CHECK(spec.n_ff == 11);
    CHECK(spec.n_fb == 10);
    CHECK(spec.n_hid == 60);
    CHECK(spec.n_in() == 128);
    CHECK(spec.encoder.K == 5);
    CHECK(spec.reg.alpha_r3 == doctest::Approx(5e-4));
    CHECK(spec.output_cfg.tau_m == doctest::Approx(1000.0));
}
