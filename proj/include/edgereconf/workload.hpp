#pragma once

#include "edgereconf/ids.hpp"
#include "edgereconf/rng.hpp"
#include "edgereconf/topology.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edgereconf {

struct AppProfile {
    std::string name;
    DeviceKind device_kind = DeviceKind::GPU;
    double demand = 0.0;             // same unit as the target device's capacity
    double bandwidth_mbps = 0.0;
    double data_mb = 0.0;            // transferred once per traversed link
    double processing_time_s = 0.0;

    void validate() const;
};

enum class Objective { MinimizePrice, MinimizeResponseTime };

std::string_view to_string(Objective objective);
Objective parse_objective(std::string_view text);

/// Upper bounds a user attached to a request. The metric without a bound is
/// the one minimized; with both bounds the objective is chosen explicitly.
struct ConstraintMenu {
    std::string label;
    std::optional<double> time_upper_s;
    std::optional<double> price_upper;
    Objective objective = Objective::MinimizePrice;

    bool admits(double response_time_s, double price) const;
    void validate() const;
};

/// One entry of an application's menu. `objective` is only meaningful when
/// both bounds are present; absent means "drawn at generation time".
struct MenuOption {
    std::string label;
    std::optional<double> time_upper_s;
    std::optional<double> price_upper;
    std::optional<Objective> objective;

    ConstraintMenu realize(Xoshiro256& rng) const;
};

struct AppEntry {
    AppProfile profile;
    std::vector<MenuOption> options;   // equiprobable
    unsigned mix_weight = 1;           // relative share in the request mix
};

using AppCatalog = std::vector<AppEntry>;

struct PlacementRequest {
    RequestId id;
    SiteId input_node;
    std::size_t app = 0;               // index into the catalog
    AppProfile profile;
    ConstraintMenu menu;
};

/// Quota: every batch holds exactly weight_k / sum(weights) of each app,
/// shuffled. Probability: each request draws its app independently.
enum class MixMode { Quota, Probability };

std::string_view to_string(MixMode mode);
MixMode parse_mix_mode(std::string_view text);

/// NAS.FT on GPU and MRI-Q on FPGA with their measured offload profiles and
/// the menus users pick from.
AppCatalog reference_catalog();

const AppEntry& find_app(const AppCatalog& catalog, std::string_view name);

/// Menu options of an application in the catalog. Throws LookupError for
/// unknown names.
std::span<const MenuOption> constraint_options(const AppCatalog& catalog, std::string_view name);

/// Generates `count` requests with ids starting at `first_id`. Input nodes are
/// uniform over `input_nodes`. Draw order per request: input node, menu
/// option, objective (only when both bounds are set and no objective is fixed).
std::vector<PlacementRequest> generate_requests(const AppCatalog& catalog, std::span<const SiteId> input_nodes,
                                                std::size_t count, MixMode mode, Xoshiro256& rng,
                                                std::size_t first_id = 0);

} // namespace edgereconf
