#include "edgereconf/topology.hpp"

#include "edgereconf/error.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace edgereconf {

std::string_view to_string(SiteKind kind) {
    switch (kind) {
    case SiteKind::Cloud: return "cloud";
    case SiteKind::CarrierEdge: return "carrier_edge";
    case SiteKind::UserEdge: return "user_edge";
    case SiteKind::InputNode: return "input_node";
    }
    return "?";
}

std::string_view to_string(DeviceKind kind) {
    switch (kind) {
    case DeviceKind::CPU: return "CPU";
    case DeviceKind::GPU: return "GPU";
    case DeviceKind::FPGA: return "FPGA";
    }
    return "?";
}

DeviceKind parse_device_kind(std::string_view text) {
    if (text == "CPU") return DeviceKind::CPU;
    if (text == "GPU") return DeviceKind::GPU;
    if (text == "FPGA") return DeviceKind::FPGA;
    throw ConfigError("unknown device kind '" + std::string(text) + "'");
}

std::string_view to_string(Attachment attachment) {
    return attachment == Attachment::Block ? "block" : "round_robin";
}

Attachment parse_attachment(std::string_view text) {
    if (text == "block") return Attachment::Block;
    if (text == "round_robin") return Attachment::RoundRobin;
    throw ConfigError("unknown attachment '" + std::string(text) + "'");
}

const TierSpec& HardwareCatalog::tier(SiteKind kind) const {
    switch (kind) {
    case SiteKind::Cloud: return cloud;
    case SiteKind::CarrierEdge: return carrier_edge;
    case SiteKind::UserEdge: return user_edge;
    case SiteKind::InputNode: break;
    }
    throw LookupError("input nodes carry no hardware");
}

std::size_t TopologyShape::count(SiteKind kind) const {
    switch (kind) {
    case SiteKind::Cloud: return clouds;
    case SiteKind::CarrierEdge: return carrier_edges;
    case SiteKind::UserEdge: return user_edges;
    case SiteKind::InputNode: return input_nodes;
    }
    return 0;
}

const Site& Topology::site(SiteId id) const {
    if (id.index() >= sites_.size()) {
        throw LookupError("unknown site " + std::to_string(id.value));
    }
    return sites_[id.index()];
}

const Device& Topology::device(DeviceId id) const {
    if (id.index() >= devices_.size()) {
        throw LookupError("unknown device " + std::to_string(id.value));
    }
    return devices_[id.index()];
}

const Link& Topology::link(LinkId id) const {
    if (id.index() >= links_.size()) {
        throw LookupError("unknown link " + std::to_string(id.value));
    }
    return links_[id.index()];
}

std::span<const SiteId> Topology::sites_of_kind(SiteKind kind) const {
    return by_kind_[static_cast<std::size_t>(kind)];
}

const Site& Topology::checked_input(SiteId id) const {
    const Site& s = site(id);
    if (s.kind != SiteKind::InputNode) {
        throw LookupError("site " + std::to_string(id.value) + " is not an input node");
    }
    return s;
}

std::array<SiteId, 3> Topology::ancestor_sites(SiteId input_node) const {
    const Site& input = checked_input(input_node);
    const SiteId user = *input.parent;
    const SiteId carrier = *sites_[user.index()].parent;
    const SiteId cloud = *sites_[carrier.index()].parent;
    return {user, carrier, cloud};
}

std::vector<LinkId> Topology::path_links(SiteId input_node, SiteId target) const {
    const auto chain = ancestor_sites(input_node);
    std::vector<LinkId> path;
    for (SiteId hop : chain) {
        if (hop == target) {
            return path;
        }
        path.push_back(*sites_[hop.index()].uplink);
    }
    throw LookupError("site " + std::to_string(target.value) + " is not an ancestor of input node " +
                      std::to_string(input_node.value));
}

std::vector<DeviceId> Topology::devices_at(SiteId id, DeviceKind kind) const {
    std::vector<DeviceId> out;
    for (DeviceId d : site(id).devices) {
        if (devices_[d.index()].kind == kind) {
            out.push_back(d);
        }
    }
    return out;
}

namespace {

void check_tier(const TierSpec& tier, SiteKind kind, bool needs_uplink) {
    const std::string name(to_string(kind));
    std::set<DeviceKind> seen;
    for (const DeviceSpec& spec : tier.devices) {
        if (!seen.insert(spec.kind).second) {
            throw ConfigError(name + ": device kind " + std::string(to_string(spec.kind)) + " listed twice");
        }
        if (spec.count > 0 && !(spec.capacity > 0.0 && spec.full_month_cost > 0.0)) {
            throw ConfigError(name + ": " + std::string(to_string(spec.kind)) +
                              " needs positive capacity and full_month_cost");
        }
    }
    if (needs_uplink) {
        if (!tier.uplink) {
            throw ConfigError(name + ": missing uplink specification");
        }
        if (!(tier.uplink->bandwidth_mbps > 0.0) || tier.uplink->month_cost < 0.0) {
            throw ConfigError(name + ": uplink needs bandwidth > 0 and month_cost >= 0");
        }
    }
}

std::size_t fanout(std::size_t children, std::size_t parents, std::string_view layer) {
    if (parents == 0 || children == 0) {
        throw ConfigError(std::string(layer) + " layer: counts must be positive");
    }
    if (children % parents != 0) {
        std::ostringstream msg;
        msg << layer << " layer: " << children << " sites do not divide evenly over " << parents << " parents";
        throw ConfigError(msg.str());
    }
    return children / parents;
}

} // namespace

Topology build_topology(const TopologyShape& shape, const HardwareCatalog& catalog) {
    if (shape.clouds == 0) {
        throw ConfigError("cloud layer: counts must be positive");
    }
    const std::size_t carrier_fan = fanout(shape.carrier_edges, shape.clouds, "carrier_edge");
    const std::size_t user_fan = fanout(shape.user_edges, shape.carrier_edges, "user_edge");
    const std::size_t input_fan = fanout(shape.input_nodes, shape.user_edges, "input_node");
    check_tier(catalog.cloud, SiteKind::Cloud, false);
    check_tier(catalog.carrier_edge, SiteKind::CarrierEdge, true);
    check_tier(catalog.user_edge, SiteKind::UserEdge, true);

    Topology topo;
    topo.shape_ = shape;

    const std::array<SiteKind, 4> layers{SiteKind::Cloud, SiteKind::CarrierEdge, SiteKind::UserEdge,
                                         SiteKind::InputNode};
    const std::array<std::size_t, 4> fans{0, carrier_fan, user_fan, input_fan};
    for (std::size_t layer = 0; layer < layers.size(); ++layer) {
        const SiteKind kind = layers[layer];
        const std::size_t n = shape.count(kind);
        for (std::size_t ordinal = 0; ordinal < n; ++ordinal) {
            Site s;
            s.id = SiteId(topo.sites_.size());
            s.kind = kind;
            s.ordinal = ordinal;
            if (layer > 0) {
                const auto& parents = topo.by_kind_[layer - 1];
                const std::size_t parent = shape.attachment == Attachment::Block ? ordinal / fans[layer]
                                                                                 : ordinal % parents.size();
                s.parent = parents[parent];
            }
            topo.by_kind_[layer].push_back(s.id);
            topo.sites_.push_back(std::move(s));
        }
    }

    for (Site& s : topo.sites_) {
        if (s.kind == SiteKind::InputNode) {
            continue;
        }
        const TierSpec& tier = catalog.tier(s.kind);
        for (const DeviceSpec& spec : tier.devices) {
            for (std::size_t i = 0; i < spec.count; ++i) {
                Device d{DeviceId(topo.devices_.size()), s.id, spec.kind, spec.capacity, spec.full_month_cost};
                s.devices.push_back(d.id);
                topo.devices_.push_back(d);
            }
        }
        if (s.parent) {
            Link l{LinkId(topo.links_.size()), s.id, *s.parent, tier.uplink->bandwidth_mbps, tier.uplink->month_cost};
            s.uplink = l.id;
            topo.links_.push_back(l);
        }
    }
    return topo;
}

} // namespace edgereconf
