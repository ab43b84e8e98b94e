#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wulffmc/search.hpp"

namespace wulffmc {

// malformed experiment config; messages are line-anchored where a line exists
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct EmitFlags {
    bool csv = true;
    bool json = true;
    bool svg = false;
    bool snapshots = false;
};

// One experiment description: sectioned key = value text, every field echoed
// back by serialize_config with defaults resolved. A config parsed without a
// seed gets one drawn from entropy immediately, so persisted configs always
// carry their seeds.
struct ExperimentConfig {
    int dimension = 2;
    std::vector<std::uint64_t> particles{64};
    double beta = 1.0;
    std::vector<double> pressures{1.0};
    std::vector<ShapeDescriptor> shapes;
    bool ideal_gas = false;
    double volume_cap = 0.0;

    RunSchedule schedule;

    std::size_t replicas = 4;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> replica_seeds;  // optional explicit per-replica list
    std::string output = "out";
    std::size_t jobs = 1;
    double volume_factor = 4.0;
    EmitFlags emit;

    SearchConfig search;  // base_seed and volume_factor track the run section

    double verdict_z = 3.0;
    double consistency_z = 5.0;
};

ExperimentConfig parse_config(const std::string& text);

// "section.key=value", the CLI flag form; validates the whole config again
void apply_override(ExperimentConfig& config, const std::string& assignment);

// canonical text: fixed key order, resolved defaults; parse(serialize(c))
// reproduces c exactly
std::string serialize_config(const ExperimentConfig& config);

// FNV-1a over the canonical text; the provenance header's config identity
std::uint64_t config_hash(const ExperimentConfig& config);
std::string config_hash_hex(const ExperimentConfig& config);

// descriptors resolved to shapes ("file:<path>" reads a shape record)
std::vector<Shape> resolve_shapes(const ExperimentConfig& config);

EnsembleParams make_params(const ExperimentConfig& config, std::size_t particle_index,
                           std::size_t pressure_index);
EstimateOptions make_estimate_options(const ExperimentConfig& config);
CompareOptions make_compare_options(const ExperimentConfig& config);

}  // namespace wulffmc
