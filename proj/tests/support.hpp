#pragma once

#include "edgereconf/assignment.hpp"
#include "edgereconf/placement.hpp"
#include "edgereconf/rng.hpp"
#include "edgereconf/scenario.hpp"
#include "edgereconf/topology.hpp"
#include "edgereconf/workload.hpp"

#include <memory>

namespace edgereconf::fixtures {

inline std::shared_ptr<const Topology> reference_topology() {
    const ScenarioConfig c = reference_scenario();
    return std::make_shared<const Topology>(build_topology(c.shape, c.hardware));
}

inline SiteId input_node(const Topology& topo, std::size_t ordinal) {
    return topo.sites_of_kind(SiteKind::InputNode)[ordinal];
}

inline SiteId site_of(const Topology& topo, SiteKind kind, std::size_t ordinal) {
    return topo.sites_of_kind(kind)[ordinal];
}

inline ConstraintMenu menu(std::optional<double> time_upper, std::optional<double> price_upper,
                           Objective objective = Objective::MinimizePrice, std::string label = "m") {
    ConstraintMenu m;
    m.label = std::move(label);
    m.time_upper_s = time_upper;
    m.price_upper = price_upper;
    m.objective = objective;
    return m;
}

inline PlacementRequest request(std::size_t id, SiteId input, const AppEntry& app, std::size_t app_index,
                                ConstraintMenu m) {
    PlacementRequest r;
    r.id = RequestId(id);
    r.input_node = input;
    r.app = app_index;
    r.profile = app.profile;
    r.menu = std::move(m);
    return r;
}

// Costs on a 1/1024 grid keep every sum exact, so solver and enumeration
// objectives can be compared with ==.
inline double grid_cost(Xoshiro256& rng) { return 1.5 + static_cast<double>(rng.below(1025)) / 1024.0; }

struct ModelShape {
    std::size_t max_apps = 12;
    std::size_t max_candidates = 3;
    std::size_t max_resources = 4;
};

/// Random assignment model whose all-stay choice is feasible. Usages are
/// small integers; residuals range from barely the stay usage to slack.
inline AssignmentModel random_model(Xoshiro256& rng, const ModelShape& shape = {}) {
    AssignmentModel m;
    const std::size_t resources = 1 + rng.below(shape.max_resources);
    const std::size_t apps = rng.below(shape.max_apps + 1);
    std::vector<double> stay_usage(resources, 0.0);
    for (std::size_t k = 0; k < apps; ++k) {
        const std::size_t cands = 1 + rng.below(shape.max_candidates);
        const std::size_t current = rng.below(cands);
        std::vector<ModelCandidate> list;
        for (std::size_t s = 0; s < cands; ++s) {
            ModelCandidate c;
            c.is_current = s == current;
            c.cost = c.is_current ? 2.0 : grid_cost(rng);
            for (std::size_t r = 0; r < resources; ++r) {
                if (rng.below(2) == 0) {
                    c.usage.push_back({r, static_cast<double>(1 + rng.below(3))});
                }
            }
            if (c.is_current) {
                for (const ResourceUse& u : c.usage) {
                    stay_usage[u.resource] += u.amount;
                }
            }
            list.push_back(std::move(c));
        }
        m.apps.push_back(std::move(list));
    }
    for (std::size_t r = 0; r < resources; ++r) {
        m.residual.push_back(stay_usage[r] + static_cast<double>(rng.below(4)));
    }
    return m;
}

/// Small hardware catalog with few devices so that capacity binds quickly.
inline HardwareCatalog tight_hardware(Xoshiro256& rng) {
    auto pick = [&](double lo, double hi) { return lo + static_cast<double>(rng.below(4)) * (hi - lo) / 3.0; };
    HardwareCatalog h;
    h.cloud.devices = {{DeviceKind::GPU, 1 + rng.below(2), pick(2, 8), 100000},
                       {DeviceKind::FPGA, 1, pick(20, 100), 120000}};
    h.carrier_edge.devices = {{DeviceKind::GPU, 1, pick(1, 4), 62500}, {DeviceKind::FPGA, 1, pick(10, 40), 150000}};
    h.carrier_edge.uplink = LinkSpec{pick(4, 20), 8000};
    h.user_edge.devices = {{DeviceKind::GPU, 1, pick(1, 2), 37500}};
    h.user_edge.uplink = LinkSpec{pick(2, 10), 3000};
    return h;
}

} // namespace edgereconf::fixtures
