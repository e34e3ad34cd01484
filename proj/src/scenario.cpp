#include "edgereconf/scenario.hpp"

#include "edgereconf/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace edgereconf {

using nlohmann::json;
using nlohmann::ordered_json;

SolveBudget ReconfigSettings::budget() const {
    SolveBudget b;
    b.max_nodes = max_nodes;
    b.time_limit = std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(time_limit_s * 1000.0)));
    return b;
}

void ScenarioConfig::validate() const {
    if (schema_version != kScenarioSchemaVersion) {
        throw ConfigError("unsupported scenario schema_version " + std::to_string(schema_version));
    }
    if (rng != Xoshiro256::identifier) {
        throw ConfigError("unsupported rng '" + rng + "' (expected " + std::string(Xoshiro256::identifier) + ")");
    }
    // Builds and discards the tree: checks layer divisibility and catalog.
    build_topology(shape, hardware);
    if (apps.empty()) {
        throw ConfigError("apps: at least one application is required");
    }
    for (const AppEntry& e : apps) {
        e.profile.validate();
        if (e.options.empty()) {
            throw ConfigError("app '" + e.profile.name + "': menu is empty");
        }
        for (const MenuOption& o : e.options) {
            if (!o.time_upper_s && !o.price_upper) {
                throw ConfigError("app '" + e.profile.name + "': menu option '" + o.label + "' sets no bound");
            }
        }
    }
    if (requests.total == 0 || requests.initial > requests.total) {
        throw ConfigError("requests: need 0 < total and initial <= total");
    }
    if (requests.wave_size == 0) {
        throw ConfigError("requests: wave_size must be positive");
    }
    if (!(reconfiguration.epsilon >= 0.0) || !std::isfinite(reconfiguration.epsilon)) {
        throw ConfigError("reconfiguration: epsilon must be a finite non-negative number");
    }
    if (reconfiguration.target_policy != "recency") {
        throw ConfigError("reconfiguration: unknown target_policy '" + reconfiguration.target_policy + "'");
    }
    if (reconfiguration.max_nodes == 0 || !(reconfiguration.time_limit_s > 0.0)) {
        throw ConfigError("reconfiguration: solver budget must be positive");
    }
}

namespace {

TierSpec tier(std::vector<DeviceSpec> devices, std::optional<LinkSpec> uplink) {
    return TierSpec{std::move(devices), uplink};
}

} // namespace

ScenarioConfig reference_scenario() {
    ScenarioConfig c;
    c.shape = TopologyShape{5, 20, 60, 300, Attachment::Block};
    // Per-unit rates: CPU 500/unit, GPU 6250/GB, FPGA 1200/% in the cloud;
    // x1.25 at carrier edges and x1.5 at user edges, times each server's size.
    c.hardware.cloud = tier({{DeviceKind::CPU, 8, 100, 50000},
                             {DeviceKind::GPU, 4, 16, 100000},
                             {DeviceKind::FPGA, 2, 100, 120000}},
                            std::nullopt);
    c.hardware.carrier_edge = tier({{DeviceKind::CPU, 4, 100, 62500},
                                    {DeviceKind::GPU, 2, 8, 62500},
                                    {DeviceKind::FPGA, 1, 100, 150000}},
                                   LinkSpec{100, 8000});
    c.hardware.user_edge = tier({{DeviceKind::CPU, 2, 100, 75000}, {DeviceKind::GPU, 1, 4, 37500}},
                                LinkSpec{10, 3000});
    c.apps = reference_catalog();
    return c;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) {
        throw ConfigError(where + ": missing field '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": field '" + key + "' has the wrong type");
    }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback, const std::string& where) {
    return j.contains(key) ? field<T>(j, key, where) : fallback;
}

std::optional<double> optional_number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return field<double>(j, key, where);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed) {
            known = known || key == a;
        }
        if (!known) {
            throw ConfigError(where + ": unknown field '" + key + "'");
        }
    }
}

ordered_json tier_json(const TierSpec& t) {
    ordered_json j;
    j["devices"] = ordered_json::array();
    for (const DeviceSpec& d : t.devices) {
        j["devices"].push_back({{"kind", std::string(to_string(d.kind))},
                                {"count", d.count},
                                {"capacity", d.capacity},
                                {"full_month_cost", d.full_month_cost}});
    }
    if (t.uplink) {
        j["uplink"] = {{"bandwidth_mbps", t.uplink->bandwidth_mbps}, {"month_cost", t.uplink->month_cost}};
    }
    return j;
}

TierSpec tier_from(const json& j, const std::string& where) {
    check_keys(j, {"devices", "uplink"}, where);
    TierSpec t;
    for (const json& d : field<json>(j, "devices", where)) {
        const std::string w = where + ".devices";
        check_keys(d, {"kind", "count", "capacity", "full_month_cost"}, w);
        t.devices.push_back(DeviceSpec{parse_device_kind(field<std::string>(d, "kind", w)),
                                       field<std::size_t>(d, "count", w), field<double>(d, "capacity", w),
                                       field<double>(d, "full_month_cost", w)});
    }
    if (j.contains("uplink")) {
        const json& u = j.at("uplink");
        const std::string w = where + ".uplink";
        check_keys(u, {"bandwidth_mbps", "month_cost"}, w);
        t.uplink = LinkSpec{field<double>(u, "bandwidth_mbps", w), field<double>(u, "month_cost", w)};
    }
    return t;
}

} // namespace

std::string to_json_text(const ScenarioConfig& c) {
    ordered_json j;
    j["schema_version"] = c.schema_version;
    j["rng"] = c.rng;
    j["seed"] = c.seed;
    j["topology"] = {{"clouds", c.shape.clouds},
                     {"carrier_edges", c.shape.carrier_edges},
                     {"user_edges", c.shape.user_edges},
                     {"input_nodes", c.shape.input_nodes},
                     {"attachment", std::string(to_string(c.shape.attachment))}};
    j["hardware"] = {{"cloud", tier_json(c.hardware.cloud)},
                     {"carrier_edge", tier_json(c.hardware.carrier_edge)},
                     {"user_edge", tier_json(c.hardware.user_edge)}};
    j["apps"] = ordered_json::array();
    for (const AppEntry& e : c.apps) {
        ordered_json app = {{"name", e.profile.name},
                            {"device_kind", std::string(to_string(e.profile.device_kind))},
                            {"demand", e.profile.demand},
                            {"bandwidth_mbps", e.profile.bandwidth_mbps},
                            {"data_mb", e.profile.data_mb},
                            {"processing_time_s", e.profile.processing_time_s},
                            {"mix_weight", e.mix_weight}};
        app["menu"] = ordered_json::array();
        for (const MenuOption& o : e.options) {
            ordered_json opt = {{"label", o.label}};
            if (o.price_upper) opt["price_upper"] = *o.price_upper;
            if (o.time_upper_s) opt["time_upper_s"] = *o.time_upper_s;
            if (o.objective) opt["objective"] = std::string(to_string(*o.objective));
            app["menu"].push_back(opt);
        }
        j["apps"].push_back(app);
    }
    j["requests"] = {{"initial", c.requests.initial},
                     {"wave_size", c.requests.wave_size},
                     {"total", c.requests.total},
                     {"mix", std::string(to_string(c.requests.mix))}};
    j["reconfiguration"] = {{"targets", c.reconfiguration.targets},
                            {"epsilon", c.reconfiguration.epsilon},
                            {"target_policy", c.reconfiguration.target_policy},
                            {"max_nodes", c.reconfiguration.max_nodes},
                            {"time_limit_s", c.reconfiguration.time_limit_s},
                            {"oracle", c.reconfiguration.oracle},
                            {"oracle_cap", c.reconfiguration.oracle_cap}};
    return j.dump(2) + "\n";
}

ScenarioConfig parse_scenario(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    check_keys(j, {"schema_version", "rng", "seed", "topology", "hardware", "apps", "requests", "reconfiguration"},
               "scenario");
    ScenarioConfig c;
    c.apps.clear();
    c.schema_version = field<int>(j, "schema_version", "scenario");
    if (c.schema_version != kScenarioSchemaVersion) {
        throw ConfigError("unsupported scenario schema_version " + std::to_string(c.schema_version));
    }
    c.rng = field_or<std::string>(j, "rng", c.rng, "scenario");
    c.seed = field_or<std::uint64_t>(j, "seed", c.seed, "scenario");

    const json& t = field<json>(j, "topology", "scenario");
    check_keys(t, {"clouds", "carrier_edges", "user_edges", "input_nodes", "attachment"}, "topology");
    c.shape.clouds = field<std::size_t>(t, "clouds", "topology");
    c.shape.carrier_edges = field<std::size_t>(t, "carrier_edges", "topology");
    c.shape.user_edges = field<std::size_t>(t, "user_edges", "topology");
    c.shape.input_nodes = field<std::size_t>(t, "input_nodes", "topology");
    c.shape.attachment = parse_attachment(field_or<std::string>(t, "attachment", "block", "topology"));

    const json& h = field<json>(j, "hardware", "scenario");
    check_keys(h, {"cloud", "carrier_edge", "user_edge"}, "hardware");
    c.hardware.cloud = tier_from(field<json>(h, "cloud", "hardware"), "hardware.cloud");
    c.hardware.carrier_edge = tier_from(field<json>(h, "carrier_edge", "hardware"), "hardware.carrier_edge");
    c.hardware.user_edge = tier_from(field<json>(h, "user_edge", "hardware"), "hardware.user_edge");

    for (const json& a : field<json>(j, "apps", "scenario")) {
        const std::string w = "apps";
        check_keys(a, {"name", "device_kind", "demand", "bandwidth_mbps", "data_mb", "processing_time_s", "mix_weight",
                       "menu"},
                   w);
        AppEntry e;
        e.profile.name = field<std::string>(a, "name", w);
        const std::string wa = "app '" + e.profile.name + "'";
        e.profile.device_kind = parse_device_kind(field<std::string>(a, "device_kind", wa));
        e.profile.demand = field<double>(a, "demand", wa);
        e.profile.bandwidth_mbps = field<double>(a, "bandwidth_mbps", wa);
        e.profile.data_mb = field<double>(a, "data_mb", wa);
        e.profile.processing_time_s = field<double>(a, "processing_time_s", wa);
        e.mix_weight = field_or<unsigned>(a, "mix_weight", 1u, wa);
        for (const json& o : field<json>(a, "menu", wa)) {
            check_keys(o, {"label", "price_upper", "time_upper_s", "objective"}, wa + ".menu");
            MenuOption opt;
            opt.label = field<std::string>(o, "label", wa + ".menu");
            opt.price_upper = optional_number(o, "price_upper", wa + ".menu");
            opt.time_upper_s = optional_number(o, "time_upper_s", wa + ".menu");
            if (o.contains("objective")) {
                opt.objective = parse_objective(field<std::string>(o, "objective", wa + ".menu"));
            }
            e.options.push_back(std::move(opt));
        }
        c.apps.push_back(std::move(e));
    }

    const json& r = field<json>(j, "requests", "scenario");
    check_keys(r, {"initial", "wave_size", "total", "mix"}, "requests");
    c.requests.initial = field<std::size_t>(r, "initial", "requests");
    c.requests.wave_size = field<std::size_t>(r, "wave_size", "requests");
    c.requests.total = field<std::size_t>(r, "total", "requests");
    c.requests.mix = parse_mix_mode(field_or<std::string>(r, "mix", "quota", "requests"));

    const json& g = field<json>(j, "reconfiguration", "scenario");
    check_keys(g, {"targets", "epsilon", "target_policy", "max_nodes", "time_limit_s", "oracle", "oracle_cap"},
               "reconfiguration");
    auto& rc = c.reconfiguration;
    rc.targets = field<std::size_t>(g, "targets", "reconfiguration");
    rc.epsilon = field<double>(g, "epsilon", "reconfiguration");
    rc.target_policy = field_or<std::string>(g, "target_policy", rc.target_policy, "reconfiguration");
    rc.max_nodes = field_or<std::uint64_t>(g, "max_nodes", rc.max_nodes, "reconfiguration");
    rc.time_limit_s = field_or<double>(g, "time_limit_s", rc.time_limit_s, "reconfiguration");
    rc.oracle = field_or<bool>(g, "oracle", rc.oracle, "reconfiguration");
    rc.oracle_cap = field_or<std::uint64_t>(g, "oracle_cap", rc.oracle_cap, "reconfiguration");

    c.validate();
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario file " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_scenario(text.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void save_scenario(const ScenarioConfig& config, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << to_json_text(config);
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

} // namespace edgereconf
