#pragma once

#include "edgereconf/assignment.hpp"
#include "edgereconf/topology.hpp"
#include "edgereconf/workload.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace edgereconf {

inline constexpr int kScenarioSchemaVersion = 1;

struct RequestPlan {
    std::size_t initial = 400;    // placed before the first reconfiguration
    std::size_t wave_size = 100;  // placements between reconfigurations
    std::size_t total = 500;      // last wave may be shorter
    MixMode mix = MixMode::Quota;
};

struct ReconfigSettings {
    std::size_t targets = 100;    // 0 disables reconfiguration
    double epsilon = 0.01;
    std::string target_policy = "recency";
    std::uint64_t max_nodes = 10'000'000;
    double time_limit_s = 60.0;
    bool oracle = false;          // cross-check small rounds by brute force
    std::uint64_t oracle_cap = 1'000'000;

    SolveBudget budget() const;
};

struct ScenarioConfig {
    int schema_version = kScenarioSchemaVersion;
    std::string rng{Xoshiro256::identifier};
    std::uint64_t seed = 1;
    TopologyShape shape;
    HardwareCatalog hardware;
    AppCatalog apps;
    RequestPlan requests;
    ReconfigSettings reconfiguration;

    /// Throws ConfigError naming the first inconsistency.
    void validate() const;
};

/// Five clouds, 20 carrier edges, 60 user edges and 300 input nodes; cloud
/// prices 50k/100k/120k yen for a full CPU/GPU/FPGA server, carrier and user
/// edges 1.25x and 1.5x per unit of capacity; 400 initial requests and one
/// wave of 100.
ScenarioConfig reference_scenario();

std::string to_json_text(const ScenarioConfig& config);
ScenarioConfig parse_scenario(std::string_view json_text);

ScenarioConfig load_scenario(const std::filesystem::path& path);
void save_scenario(const ScenarioConfig& config, const std::filesystem::path& path);

} // namespace edgereconf
