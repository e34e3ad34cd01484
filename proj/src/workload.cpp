#include "edgereconf/workload.hpp"

#include "edgereconf/error.hpp"

#include <algorithm>
#include <numeric>

namespace edgereconf {

namespace {

// Bounds are compared against exactly computed model values; the slack only
// absorbs binary rounding of decimal inputs such as 0.2 MB.
constexpr double kBoundSlack = 1e-9;

MenuOption option(std::string label, std::optional<double> price, std::optional<double> time) {
    return MenuOption{std::move(label), time, price, std::nullopt};
}

} // namespace

void AppProfile::validate() const {
    if (!(demand > 0.0 && bandwidth_mbps > 0.0 && data_mb >= 0.0 && processing_time_s > 0.0)) {
        throw ConfigError("app '" + name + "': demand, bandwidth and processing time must be positive");
    }
}

std::string_view to_string(Objective objective) {
    return objective == Objective::MinimizePrice ? "price" : "response_time";
}

Objective parse_objective(std::string_view text) {
    if (text == "price") return Objective::MinimizePrice;
    if (text == "response_time") return Objective::MinimizeResponseTime;
    throw ConfigError("unknown objective '" + std::string(text) + "'");
}

std::string_view to_string(MixMode mode) { return mode == MixMode::Quota ? "quota" : "probability"; }

MixMode parse_mix_mode(std::string_view text) {
    if (text == "quota") return MixMode::Quota;
    if (text == "probability") return MixMode::Probability;
    throw ConfigError("unknown mix mode '" + std::string(text) + "'");
}

bool ConstraintMenu::admits(double response_time_s, double price) const {
    if (time_upper_s && response_time_s > *time_upper_s + kBoundSlack) {
        return false;
    }
    if (price_upper && price > *price_upper + kBoundSlack * std::max(1.0, *price_upper)) {
        return false;
    }
    return true;
}

void ConstraintMenu::validate() const {
    if (!time_upper_s && !price_upper) {
        throw ConfigError("menu '" + label + "' sets no bound");
    }
    if (time_upper_s && !price_upper && objective != Objective::MinimizePrice) {
        throw ConfigError("menu '" + label + "' bounds time only, so it must minimize price");
    }
    if (price_upper && !time_upper_s && objective != Objective::MinimizeResponseTime) {
        throw ConfigError("menu '" + label + "' bounds price only, so it must minimize response time");
    }
}

ConstraintMenu MenuOption::realize(Xoshiro256& rng) const {
    ConstraintMenu menu{label, time_upper_s, price_upper, Objective::MinimizePrice};
    if (time_upper_s && price_upper) {
        menu.objective = objective ? *objective
                                   : (rng.below(2) == 0 ? Objective::MinimizePrice : Objective::MinimizeResponseTime);
    } else if (price_upper) {
        menu.objective = Objective::MinimizeResponseTime;
    }
    menu.validate();
    return menu;
}

AppCatalog reference_catalog() {
    AppEntry nas{AppProfile{"NAS.FT", DeviceKind::GPU, 1.0, 2.0, 0.2, 5.8}, {}, 3};
    // price a/b/c = 7500/8500/10000 yen, time A/B/C = 6/7/10 s
    nas.options = {option("a", 7500, {}),    option("b", 8500, {}),    option("c", 10000, {}),
                   option("A", {}, 6),       option("B", {}, 7),       option("C", {}, 10),
                   option("aC", 7500, 10),   option("bB", 8500, 7),    option("bC", 8500, 10),
                   option("cA", 10000, 6),   option("cB", 10000, 7),   option("cC", 10000, 10)};

    AppEntry mri{AppProfile{"MRI-Q", DeviceKind::FPGA, 10.0, 1.0, 0.15, 2.0}, {}, 1};
    // price x/y = 12500/20000 yen, time X/Y = 4/8 s
    mri.options = {option("x", 12500, {}),  option("y", 20000, {}),  option("X", {}, 4), option("Y", {}, 8),
                   option("xY", 12500, 8),  option("yX", 20000, 4),  option("yY", 20000, 8)};
    return {nas, mri};
}

const AppEntry& find_app(const AppCatalog& catalog, std::string_view name) {
    for (const AppEntry& entry : catalog) {
        if (entry.profile.name == name) {
            return entry;
        }
    }
    throw LookupError("unknown application '" + std::string(name) + "'");
}

std::span<const MenuOption> constraint_options(const AppCatalog& catalog, std::string_view name) {
    return find_app(catalog, name).options;
}

std::vector<PlacementRequest> generate_requests(const AppCatalog& catalog, std::span<const SiteId> input_nodes,
                                                std::size_t count, MixMode mode, Xoshiro256& rng,
                                                std::size_t first_id) {
    if (catalog.empty()) {
        throw ConfigError("application catalog is empty");
    }
    if (input_nodes.empty()) {
        throw ConfigError("no input nodes to issue requests from");
    }
    const unsigned total_weight = std::accumulate(catalog.begin(), catalog.end(), 0u,
                                                  [](unsigned acc, const AppEntry& e) { return acc + e.mix_weight; });
    if (total_weight == 0) {
        throw ConfigError("application mix weights sum to zero");
    }

    std::vector<std::size_t> apps;
    apps.reserve(count);
    if (mode == MixMode::Quota) {
        if (count % total_weight != 0) {
            throw ConfigError("request batch of " + std::to_string(count) +
                              " cannot honour the application mix exactly (weights sum to " +
                              std::to_string(total_weight) + ")");
        }
        const std::size_t unit = count / total_weight;
        for (std::size_t k = 0; k < catalog.size(); ++k) {
            apps.insert(apps.end(), unit * catalog[k].mix_weight, k);
        }
        rng.shuffle(std::span<std::size_t>(apps));
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            std::uint64_t r = rng.below(total_weight);
            std::size_t k = 0;
            while (r >= catalog[k].mix_weight) {
                r -= catalog[k].mix_weight;
                ++k;
            }
            apps.push_back(k);
        }
    }

    std::vector<PlacementRequest> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const AppEntry& entry = catalog[apps[i]];
        if (entry.options.empty()) {
            throw ConfigError("app '" + entry.profile.name + "' has an empty menu");
        }
        PlacementRequest req;
        req.id = RequestId(first_id + i);
        req.input_node = input_nodes[rng.below(input_nodes.size())];
        req.app = apps[i];
        req.profile = entry.profile;
        req.menu = entry.options[rng.below(entry.options.size())].realize(rng);
        out.push_back(std::move(req));
    }
    return out;
}

} // namespace edgereconf
