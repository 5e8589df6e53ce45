#include "snnrx/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include "snnrx/csv.hpp"
#include "snnrx/detector.hpp"
#include "snnrx/version.hpp"

namespace snnrx::exp {

uint64_t config_hash(const json& cfg) { return fnv1a(cfg.dump()); }

namespace {

std::string hash_hex(const json& cfg) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    return buf;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump(2) << "\n";
}

json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows; ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols; ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat mat_from_json(const json& j) {
    Mat m(j.size(), j.empty() ? 0 : j[0].size());
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) m(r, c) = j[r][c].get<double>();
    return m;
}

}  // namespace

json weights_to_json(const snn::WeightSet& w) {
    json j;
    j["theta_in"] = mat_to_json(w.theta_in);
    j["theta_out"] = mat_to_json(w.theta_out);
    j["theta_rec"] = w.theta_rec ? mat_to_json(*w.theta_rec) : json(nullptr);
    return j;
}

snn::WeightSet weights_from_json(const json& j) {
    snn::WeightSet w;
    w.theta_in = mat_from_json(j.at("theta_in"));
    w.theta_out = mat_from_json(j.at("theta_out"));
    if (!j.at("theta_rec").is_null()) w.theta_rec = mat_from_json(j.at("theta_rec"));
    return w;
}

chan::ImddConfig make_channel(const json& cfg) {
    const auto& ch = cfg.at("channel");
    auto c = chan::ImddConfig::preset(ch.at("preset").get<std::string>());
    if (ch.contains("fiber_length")) {
        c.fiber_length = ch["fiber_length"].get<double>();
        c.calibrate();
    }
    return c;
}

namespace {

eq::Structure parse_structure(const std::string& s) {
    if (s == "nfe_snn") return eq::Structure::nfe_snn;
    if (s == "dfe_snn") return eq::Structure::dfe_snn;
    if (s == "nfe_fir") return eq::Structure::nfe_fir;
    if (s == "dfe_fir") return eq::Structure::dfe_fir;
    throw std::invalid_argument("unknown structure: " + s);
}

codec::EncoderKind parse_encoder(const std::string& s) {
    if (s == "rfe_linear") return codec::EncoderKind::rfe_linear;
    if (s == "rfe_gaussian") return codec::EncoderKind::rfe_gaussian;
    if (s == "ternary") return codec::EncoderKind::ternary;
    if (s == "quantization") return codec::EncoderKind::quantization;
    throw std::invalid_argument("unknown encoder: " + s);
}

std::string spec_id(const eq::EqualizerSpec& spec, const std::string& channel) {
    std::string s;
    switch (spec.structure) {
        case eq::Structure::nfe_snn: s = "NFE-SNN"; break;
        case eq::Structure::dfe_snn: s = "DFE-SNN"; break;
        case eq::Structure::nfe_fir: return "NFE-FIR@" + channel;
        case eq::Structure::dfe_fir: return "DFE-FIR@" + channel;
    }
    switch (spec.encoder.variant) {
        case codec::EncoderKind::rfe_linear:
        case codec::EncoderKind::rfe_gaussian: s += "_RFE"; break;
        case codec::EncoderKind::ternary: s += "_TE"; break;
        case codec::EncoderKind::quantization: s += "_QE"; break;
        default: break;
    }
    s += spec.decoder.variant == codec::DecoderKind::motm ? ",M" : ",E";
    if (spec.reg.alpha_r3 > 0.0 || spec.reg.alpha_r1 > 0.0) s += ",R";
    if (spec.recurrent) s += ",rec";
    return s + "@" + channel;
}

}  // namespace

eq::EqualizerSpec make_equalizer_spec(const json& cfg, const chan::ImddConfig& channel) {
    const auto& e = cfg.at("equalizer");
    const std::string channel_name = cfg.at("channel").at("preset").get<std::string>();
    const bool ssmf = channel_name == "ssmf";

    eq::EqualizerSpec spec;
    spec.structure = parse_structure(e.at("structure").get<std::string>());
    spec.n_tap = e.value("n_tap", ssmf ? 21u : 7u);
    spec.split_taps();
    spec.n_hid = e.value("n_hid", ssmf ? 60u : 40u);
    spec.n_out = channel.constellation.size();
    spec.recurrent = e.value("recurrent", true);

    const std::string enc_name = e.value("encoder", "rfe_linear");
    spec.encoder.variant = parse_encoder(enc_name);
    if (spec.encoder.variant == codec::EncoderKind::rfe_linear ||
        spec.encoder.variant == codec::EncoderKind::rfe_gaussian) {
        spec.encoder.n_enc = e.value("n_enc", 10u);
        spec.encoder.K = e.value("K", 60u);
        const double y_max = e.value("y_max", 7.0);
        const double width = e.value("width", 2.0);
        spec.encoder.mu.resize(spec.encoder.n_enc);
        spec.encoder.width.assign(spec.encoder.n_enc, width);
        for (std::size_t j = 0; j < spec.encoder.n_enc; ++j)
            spec.encoder.mu[j] = static_cast<double>(j + 1) * y_max /
                                 static_cast<double>(spec.encoder.n_enc);
    } else {
        spec.encoder.n_enc = e.value("n_enc", 8u);
        spec.encoder.K = e.value("K", 5u);
        spec.encoder.x_max = e.value("y_max", 3.5);
        spec.encoder.x_min = -spec.encoder.x_max;
    }

    spec.decoder.variant =
        e.value("decoder", "eotm") == std::string("motm") ? codec::DecoderKind::motm
                                                          : codec::DecoderKind::eotm;
    spec.hidden_cfg = {.tau_m = 10.0, .tau_s = 5.0, .dt = 1.0, .v_th = 1.0, .v_rest = 0.0,
                       .spiking = true};
    const double out_tau_m = spec.decoder.variant == codec::DecoderKind::eotm ? 1000.0 : 10.0;
    spec.output_cfg = {.tau_m = out_tau_m, .tau_s = 5.0, .dt = 1.0, .v_th = 1.0,
                       .v_rest = 0.0, .spiking = false};

    if (e.value("regularization", false)) spec.reg = {1e-4, 1e-4, 5e-4, 0.5};
    spec.surrogate.eta = e.value("surrogate_eta", 25.0);

    eq::resolve_preprocessing(spec, channel);
    return spec;
}

namespace {

eq::TrainConfig make_train_config(const json& cfg) {
    eq::TrainConfig t;
    if (cfg.contains("training")) {
        const auto& tr = cfg["training"];
        t.epochs = tr.value("epochs", 150u);
        t.batch = tr.value("batch", 20000u);
        t.sigma2_db = tr.value("sigma2_db", -20.0);
        t.optim.lr = tr.value("lr", 1e-2);
        t.optim.kind = tr.value("optimizer", "adam") == std::string("sgd")
                           ? train::OptimConfig::Kind::sgd
                           : train::OptimConfig::Kind::adam;
    }
    return t;
}

std::vector<double> sweep_axis(const json& cfg, const char* key, std::vector<double> fallback) {
    if (cfg.contains("sweep") && cfg["sweep"].contains(key))
        return cfg["sweep"][key].get<std::vector<double>>();
    return fallback;
}

std::string run_equalizer(const json& cfg, const RunOptions& opt, uint64_t seed) {
    const auto channel = make_channel(cfg);
    auto spec = make_equalizer_spec(cfg, channel);
    const std::string channel_name = cfg.at("channel").at("preset").get<std::string>();
    const auto id = spec_id(spec, channel_name);
    const auto hash = hash_hex(cfg);

    const auto train_cfg = make_train_config(cfg);
    std::size_t eval_samples = cfg.value("samples", json::object()).value("eval", 1000000u);
    if (opt.samples_override) eval_samples = opt.samples_override;

    snn::WeightSet w;
    if (spec.is_snn()) {
        RandomStream init_rng(seed, "init");
        w = train::init_weights(spec.n_in(), spec.n_hid, spec.n_out, spec.recurrent, init_rng);
        RandomStream train_rng(seed, "train");
        const auto rep = eq::train_equalizer(spec, channel, train_cfg, w, train_rng);
        CsvWriter trace(opt.out_dir + "/trace.csv", {"epoch", "loss"});
        for (std::size_t e = 0; e < rep.loss.size(); ++e)
            trace.row() << e << rep.loss[e];

        json ckpt;
        ckpt["version"] = kVersion;
        ckpt["config"] = cfg;
        ckpt["config_hash"] = hash;
        ckpt["weights"] = weights_to_json(w);
        ckpt["rng_state"] = train_rng.state_string();
        write_json(opt.out_dir + "/checkpoint.json", ckpt);
    }

    const std::string path = opt.out_dir + "/results.csv";
    CsvWriter csv(path,
                  {"sigma2_db", "ber", "ser", "z_avg", "n_theta", "mac", "seed", "spec_id",
                   "config"});
    const auto sweep = sweep_axis(cfg, "sigma2_db", {-14, -16, -18, -20, -22});
    for (double s2 : sweep) {
        RandomStream eval_rng(seed, "eval", static_cast<uint64_t>(std::llround(s2 * 100)));
        eq::RunArtifacts run;
        if (spec.is_snn()) {
            run = eq::evaluate_equalizer(spec, w, channel, s2, eval_samples, eval_rng);
        } else {
            run = eq::evaluate_fir(spec, channel, s2, train_cfg.batch, eval_samples, eval_rng);
        }
        const auto m = eq::compute_metrics(run, spec.complexity());
        csv.row() << s2 << m.ber << m.ser << m.z_avg << m.n_theta << m.mac
                  << std::to_string(seed) << id << hash;
    }
    return path;
}

std::string run_detector(const json& cfg, const RunOptions& opt, uint64_t seed) {
    const auto method = cfg.at("detector").at("method").get<std::string>();
    const auto hash = hash_hex(cfg);
    const std::string path = opt.out_dir + "/results.csv";
    std::size_t eval_samples = cfg.value("samples", json::object()).value("eval", 100000u);
    if (opt.samples_override) eval_samples = opt.samples_override;

    if (method == "stdp") {
        std::vector<double> hids = sweep_axis(cfg, "n_hid", {1, 2, 4, 6, 8, 10, 12, 14});
        const auto runs = cfg.at("detector").value("runs", 20u);
        CsvWriter csv(path, {"n_hid", "run", "accuracy", "seed", "config"});
        for (double nh : hids) {
            for (std::size_t r = 0; r < runs; ++r) {
                detector::StdpExperimentConfig sc;
                sc.n_hid = static_cast<std::size_t>(nh);
                sc.eval_symbols = eval_samples;
                RandomStream rng(seed, "stdp", static_cast<uint64_t>(nh) * 1000 + r);
                const double acc = detector::stdp_bpsk_accuracy(sc, rng);
                csv.row() << static_cast<std::size_t>(nh) << r << acc << std::to_string(seed)
                          << hash;
            }
        }
        return path;
    }

    const auto qam = chan::Constellation::qam16();
    const auto sweep = sweep_axis(cfg, "ebn0_db", {6, 8, 10, 12});
    CsvWriter csv(path, {"ebn0_db", "ber", "ser", "ber_ml", "ser_ml", "sdr", "seed", "config"});

    if (method == "bptt") {
        auto dc = detector::BpttDetectorConfig::qe16_default();
        const auto& d = cfg["detector"];
        dc.epochs = d.value("epochs", 1500u);
        dc.batch = d.value("batch", 10000u);
        dc.n_hid = d.value("n_hid", 16u);
        dc.ebn0_train_db = d.value("ebn0_train_db", 10.0);
        RandomStream train_rng(seed, "train");
        const auto det = detector::train_bptt_detector(dc, qam, train_rng);
        CsvWriter trace(opt.out_dir + "/trace.csv", {"epoch", "loss"});
        for (std::size_t e = 0; e < det.loss_trace.size(); ++e)
            trace.row() << e << det.loss_trace[e];

        json ckpt;
        ckpt["version"] = kVersion;
        ckpt["config"] = cfg;
        ckpt["config_hash"] = hash;
        ckpt["weights"] = weights_to_json(det.w);
        ckpt["rng_state"] = train_rng.state_string();
        write_json(opt.out_dir + "/checkpoint.json", ckpt);

        for (double ebn0 : sweep) {
            RandomStream rng(seed, "eval", static_cast<uint64_t>(std::llround(ebn0 * 100)));
            const auto ev = detector::eval_bptt_detector(det, qam, ebn0, eval_samples, rng);
            csv.row() << ebn0 << ev.ber_snn() << ev.ser_snn() << ev.ber_ml() << ev.ser_ml()
                      << ev.sdr << std::to_string(seed) << hash;
        }
        return path;
    }

    if (method == "prob") {
        auto pc = detector::ProbDetectorConfig::rfe16_default();
        const auto& d = cfg["detector"];
        pc.epochs = d.value("epochs", 2000u);
        pc.batch = d.value("batch", 100u);
        pc.n_hid = d.value("n_hid", 40u);
        pc.ebn0_train_db = d.value("ebn0_train_db", 10.0);
        RandomStream train_rng(seed, "train");
        const auto det = detector::train_prob_detector(pc, qam, train_rng);
        for (double ebn0 : sweep) {
            RandomStream rng(seed, "eval", static_cast<uint64_t>(std::llround(ebn0 * 100)));
            const auto ev = detector::eval_prob_detector(det, qam, ebn0, eval_samples, rng);
            csv.row() << ebn0 << ev.ber_snn() << ev.ser_snn() << ev.ber_ml() << ev.ser_ml()
                      << ev.sdr << std::to_string(seed) << hash;
        }
        return path;
    }
    throw std::invalid_argument("unknown detector method: " + method);
}

std::string run_rosenbrock(const json& cfg, const RunOptions& opt, uint64_t seed) {
    pgu::PguConfig pc;
    const auto& p = cfg.value("pgu", json::object());
    pc.batch = p.value("batch", 40u);
    pc.nu = p.value("nu", 0.5);
    pc.sigma2_pi = p.value("sigma2_pi", 0.1);
    pc.alpha_damp = p.value("alpha_damp", 1e-4);
    const auto epochs = cfg.value("epochs", 2000u);
    const auto n_seeds = cfg.value("n_seeds", 10u);
    std::vector<double> start = cfg.value("start", std::vector<double>{1.8, 1.9});
    const auto hash = hash_hex(cfg);

    const auto evaluator = [](const std::vector<double>& t) {
        return pgu::rosenbrock(t[0], t[1]);
    };

    CsvWriter trace(opt.out_dir + "/trace.csv", {"epoch", "ell", "sigma2_c", "update_norm"});
    const std::string path = opt.out_dir + "/results.csv";
    CsvWriter csv(path, {"seed_index", "final_value", "epochs", "seed", "config"});
    for (std::size_t s = 0; s < n_seeds; ++s) {
        RandomStream rng(seed, "pgu", s);
        auto theta = start;
        pgu::PguTrace tr;
        for (std::size_t e = 0; e < epochs; ++e) {
            theta = pgu::pgu_step(theta, evaluator, pc, rng, &tr);
            if (s == 0) trace.row() << static_cast<std::size_t>(e) << tr.ell << tr.sigma2_c
                                    << tr.update_norm;
        }
        csv.row() << s << evaluator(theta) << static_cast<std::size_t>(epochs)
                  << std::to_string(seed) << hash;
    }
    return path;
}

std::string run_pgu_encoder(const json& cfg, const RunOptions& opt, uint64_t seed) {
    const auto channel = make_channel(cfg);
    auto spec = make_equalizer_spec(cfg, channel);
    const std::string channel_name = cfg.at("channel").at("preset").get<std::string>();
    const auto hash = hash_hex(cfg);
    const auto mode = cfg.value("mode", "pgu");
    const auto train_cfg = make_train_config(cfg);
    std::size_t eval_samples = cfg.value("samples", json::object()).value("eval", 1000000u);
    if (opt.samples_override) eval_samples = opt.samples_override;

    RandomStream init_rng(seed, "init");
    auto w = train::init_weights(spec.n_in(), spec.n_hid, spec.n_out, spec.recurrent, init_rng);
    RandomStream train_rng(seed, "train");

    eq::AlternateSchedule sched;
    sched.total_epochs = cfg.value("schedule", json::object()).value("total_epochs", 600u);
    sched.pgu_epochs = cfg.value("schedule", json::object()).value("pgu_epochs", 300u);

    if (mode == "pgu") {
        pgu::PguConfig pc;
        const auto& p = cfg.value("pgu", json::object());
        pc.batch = p.value("batch", 20u);
        pc.nu = p.value("nu", 1e-3);
        pc.sigma2_pi = p.value("sigma2_pi", 1e-4);
        pc.alpha_damp = p.value("alpha_damp", 1e-1);
        pc.pol_batch = p.value("pol_batch", 2000u);
        eq::alternate_optimize(spec, channel, sched, pc, train_cfg, w, train_rng);
    } else {
        eq::TrainConfig t = train_cfg;
        t.epochs = sched.total_epochs;
        eq::train_equalizer(spec, channel, t, w, train_rng);
    }

    json ckpt;
    ckpt["version"] = kVersion;
    ckpt["config"] = cfg;
    ckpt["config_hash"] = hash;
    ckpt["weights"] = weights_to_json(w);
    ckpt["encoder_mu"] = spec.encoder.mu;
    ckpt["encoder_width"] = spec.encoder.width;
    ckpt["rng_state"] = train_rng.state_string();
    write_json(opt.out_dir + "/checkpoint.json", ckpt);

    const std::string path = opt.out_dir + "/results.csv";
    CsvWriter csv(path, {"sigma2_db", "ber", "ser", "z_avg", "mode", "seed", "spec_id",
                         "config"});
    for (double s2 : sweep_axis(cfg, "sigma2_db", {-20})) {
        RandomStream eval_rng(seed, "eval", static_cast<uint64_t>(std::llround(s2 * 100)));
        const auto run = eq::evaluate_equalizer(spec, w, channel, s2, eval_samples, eval_rng);
        const auto m = eq::compute_metrics(run, spec.complexity());
        csv.row() << s2 << m.ber << m.ser << m.z_avg << mode << std::to_string(seed)
                  << spec_id(spec, channel_name) << hash;
    }
    return path;
}

}  // namespace

std::string run(const json& cfg, const RunOptions& opt) {
    if (!cfg.contains("seed")) throw std::invalid_argument("config: seed is mandatory");
    std::filesystem::create_directories(opt.out_dir);
    uint64_t seed = cfg.at("seed").get<uint64_t>();
    if (opt.seed_override) seed = opt.seed_override;

    json meta;
    meta["version"] = kVersion;
    meta["config"] = cfg;
    meta["config_hash"] = hash_hex(cfg);
    meta["seed"] = seed;
    write_json(opt.out_dir + "/metadata.json", meta);

    const auto task = cfg.at("task").get<std::string>();
    if (task == "equalizer_imdd") return run_equalizer(cfg, opt, seed);
    if (task == "detector_awgn") return run_detector(cfg, opt, seed);
    if (task == "pgu_rosenbrock") return run_rosenbrock(cfg, opt, seed);
    if (task == "pgu_encoder") return run_pgu_encoder(cfg, opt, seed);
    throw std::invalid_argument("unknown task: " + task);
}

std::string bench(const json& cfg, const RunOptions& opt) {
    std::filesystem::create_directories(opt.out_dir);
    const uint64_t seed = cfg.value("seed", 1u);
    const auto channel = make_channel(cfg);
    const std::string channel_name = cfg.at("channel").at("preset").get<std::string>();
    const std::string path = opt.out_dir + "/bench.csv";
    CsvWriter csv(path, {"structure", "phase", "threads", "symbols_per_s"});

    const auto time_eval = [&](const json& eq_cfg, int threads) {
        json c = cfg;
        c["equalizer"] = eq_cfg;
        auto spec = make_equalizer_spec(c, channel);
        RandomStream rng(seed, "bench-init");
        auto w = train::init_weights(spec.n_in(), spec.n_hid, spec.n_out, spec.recurrent, rng);
        const std::size_t n = 20000;
        const auto t0 = std::chrono::steady_clock::now();
        if (threads <= 1 || spec.has_feedback()) {
            RandomStream er(seed, "bench-eval");
            eq::evaluate_equalizer(spec, w, channel, -20.0, n, er);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t)
                pool.emplace_back([&, t] {
                    RandomStream er(seed, "bench-eval", static_cast<uint64_t>(t));
                    eq::evaluate_equalizer(spec, w, channel, -20.0, n / threads, er);
                });
            for (auto& th : pool) th.join();
        }
        const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
        const double total = spec.has_feedback() || threads <= 1
                                 ? static_cast<double>(n)
                                 : static_cast<double>(n / threads * threads);
        return total / dt.count();
    };

    const json nfe = {{"structure", "nfe_snn"}, {"encoder", "rfe_linear"}};
    const json dfe = {{"structure", "dfe_snn"}, {"encoder", "quantization"}};
    for (int t : {1, opt.threads}) {
        csv.row() << std::string("nfe_snn_rfe@") + channel_name << std::string("inference") << t
                  << time_eval(nfe, t);
        if (t == 1)
            csv.row() << std::string("dfe_snn_qe@") + channel_name << std::string("inference")
                      << t << time_eval(dfe, t);
    }

    // one training step per structure
    for (const auto& e : {nfe, dfe}) {
        json c = cfg;
        c["equalizer"] = e;
        auto spec = make_equalizer_spec(c, channel);
        RandomStream rng(seed, "bench-train");
        auto w = train::init_weights(spec.n_in(), spec.n_hid, spec.n_out, spec.recurrent, rng);
        eq::TrainConfig t;
        t.epochs = 1;
        t.batch = 2000;
        const auto t0 = std::chrono::steady_clock::now();
        eq::train_equalizer(spec, channel, t, w, rng);
        const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
        csv.row() << (e.at("structure").get<std::string>() + "@" + channel_name)
                  << std::string("train_step") << 1 << (t.batch / dt.count());
    }
    return path;
}

std::vector<std::string> preset_names() {
    return {"fig3_4b",          "fig3_13",          "fig3_14",         "fig6_3",
            "fig4_12_nfe_snn",  "fig4_12_dfe_snn",  "fig4_12_nfe_fir", "fig4_12_dfe_fir",
            "fig4_8_eotm",      "fig4_8_motm",      "fig4_16_nfe_snn", "fig4_16_dfe_snn",
            "fig4_16_nfe_fir",  "fig4_16_dfe_fir",  "fig6_7_pgu",      "fig6_7_frozen"};
}

json preset(const std::string& name) {
    json cfg;
    cfg["seed"] = 1;
    if (name == "fig3_4b") {
        cfg["task"] = "detector_awgn";
        cfg["detector"] = {{"method", "stdp"}, {"runs", 20}};
        cfg["sweep"] = {{"n_hid", {1, 2, 4, 6, 8, 10, 12, 14}}};
        cfg["samples"] = {{"eval", 10000}};
    } else if (name == "fig3_13") {
        cfg["task"] = "detector_awgn";
        cfg["detector"] = {{"method", "bptt"}, {"epochs", 1500}, {"batch", 10000}};
        cfg["sweep"] = {{"ebn0_db", {0, 2, 4, 6, 8, 10, 12}}};
        cfg["samples"] = {{"eval", 100000}};
    } else if (name == "fig3_14") {
        cfg["task"] = "detector_awgn";
        cfg["detector"] = {{"method", "prob"}, {"epochs", 2000}, {"batch", 100}};
        cfg["sweep"] = {{"ebn0_db", {0, 2, 4, 6, 8, 10}}};
        cfg["samples"] = {{"eval", 100000}};
    } else if (name == "fig6_3") {
        cfg["task"] = "pgu_rosenbrock";
        cfg["pgu"] = {{"batch", 40}, {"nu", 0.5}, {"sigma2_pi", 0.1}, {"alpha_damp", 1e-4}};
        cfg["epochs"] = 2000;
        cfg["n_seeds"] = 10;
        cfg["start"] = {1.8, 1.9};
    } else if (name.rfind("fig4_12", 0) == 0 || name.rfind("fig4_16", 0) == 0 ||
               name.rfind("fig4_8", 0) == 0) {
        const bool ssmf = name.rfind("fig4_16", 0) == 0;
        cfg["task"] = "equalizer_imdd";
        cfg["channel"] = {{"preset", ssmf ? "ssmf" : "lcd"}};
        json e;
        if (name == "fig4_8_eotm" || name == "fig4_8_motm") {
            e = {{"structure", "nfe_snn"}, {"encoder", "rfe_linear"}, {"recurrent", false},
                 {"regularization", false},
                 {"decoder", name == "fig4_8_motm" ? "motm" : "eotm"}};
        } else if (name.find("nfe_snn") != std::string::npos) {
            e = {{"structure", "nfe_snn"},
                 {"encoder", ssmf ? "quantization" : "rfe_linear"},
                 {"recurrent", true},
                 {"regularization", true}};
        } else if (name.find("dfe_snn") != std::string::npos) {
            e = {{"structure", "dfe_snn"}, {"encoder", "quantization"}, {"recurrent", true},
                 {"regularization", true}};
        } else if (name.find("nfe_fir") != std::string::npos) {
            e = {{"structure", "nfe_fir"}};
        } else {
            e = {{"structure", "dfe_fir"}};
        }
        cfg["equalizer"] = e;
        cfg["training"] = {{"epochs", 300}, {"batch", 20000},
                           {"sigma2_db", -20.0}, {"lr", 1e-2}};
        cfg["sweep"] = {{"sigma2_db", {-14, -16, -18, -20, -22}}};
        cfg["samples"] = {{"eval", 1000000}};
    } else if (name == "fig6_7_pgu" || name == "fig6_7_frozen") {
        cfg["task"] = "pgu_encoder";
        cfg["channel"] = {{"preset", "lcd"}};
        cfg["equalizer"] = {{"structure", "nfe_snn"}, {"encoder", "rfe_linear"},
                            {"n_enc", 8}, {"K", 6}, {"recurrent", false},
                            {"regularization", true}};
        cfg["mode"] = name == "fig6_7_pgu" ? "pgu" : "frozen";
        cfg["pgu"] = {{"batch", 20}, {"nu", 1e-3}, {"sigma2_pi", 1e-4},
                      {"alpha_damp", 1e-1}, {"pol_batch", 2000}};
        cfg["schedule"] = {{"total_epochs", 600}, {"pgu_epochs", 300}};
        cfg["training"] = {{"batch", 20000}, {"sigma2_db", -20.0}, {"lr", 1e-2}};
        cfg["sweep"] = {{"sigma2_db", {-20}}};
        cfg["samples"] = {{"eval", 1000000}};
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return cfg;
}

}  // namespace snnrx::exp
