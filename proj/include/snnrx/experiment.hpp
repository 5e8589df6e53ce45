#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "snnrx/equalizer.hpp"

namespace snnrx::exp {

using json = nlohmann::json;

// Canonical serialization hash of a config document.
uint64_t config_hash(const json& cfg);

// Named experiment configurations reproducing thesis figures at desk scale,
// plus the two channel presets referenced by name.
std::vector<std::string> preset_names();
json preset(const std::string& name);

// Build a receiver spec with the table defaults for a channel preset; fields
// present in the json override the defaults.
eq::EqualizerSpec make_equalizer_spec(const json& cfg, const chan::ImddConfig& channel);
chan::ImddConfig make_channel(const json& cfg);

// Weight checkpoints (weights + resolved config + RNG state).
json weights_to_json(const snn::WeightSet& w);
snn::WeightSet weights_from_json(const json& j);

struct RunOptions {
    std::string out_dir = ".";
    int threads = 1;
    uint64_t seed_override = 0;     // 0 = use config seed
    std::size_t samples_override = 0;  // 0 = use config sample counts
};

// Execute a config: train as needed, run the sweep, and write results.csv,
// metadata.json and (for trained models) checkpoint.json into out_dir.
// Returns the path of the results file.
std::string run(const json& cfg, const RunOptions& opt);

// Timing report (symbols/second for inference and training steps).
std::string bench(const json& cfg, const RunOptions& opt);

}  // namespace snnrx::exp
