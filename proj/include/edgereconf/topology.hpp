#pragma once

#include "edgereconf/ids.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edgereconf {

enum class SiteKind { Cloud, CarrierEdge, UserEdge, InputNode };
enum class DeviceKind { CPU, GPU, FPGA };

std::string_view to_string(SiteKind kind);
std::string_view to_string(DeviceKind kind);
DeviceKind parse_device_kind(std::string_view text);

struct Site {
    SiteId id;
    SiteKind kind = SiteKind::Cloud;
    std::size_t ordinal = 0;        // position among sites of the same kind
    std::optional<SiteId> parent;
    std::optional<LinkId> uplink;   // absent for clouds and input nodes
    std::vector<DeviceId> devices;  // ascending id
};

struct Device {
    DeviceId id;
    SiteId site;
    DeviceKind kind = DeviceKind::CPU;
    double capacity = 0.0;          // GB for GPU, percent for FPGA, abstract units for CPU
    double full_month_cost = 0.0;   // yen/month at 100% of capacity
};

struct Link {
    LinkId id;
    SiteId child;
    SiteId parent;
    double bandwidth_mbps = 0.0;
    double month_cost = 0.0;        // yen/month at 100% of bandwidth
};

struct DeviceSpec {
    DeviceKind kind = DeviceKind::CPU;
    std::size_t count = 0;
    double capacity = 0.0;
    double full_month_cost = 0.0;
};

struct LinkSpec {
    double bandwidth_mbps = 0.0;
    double month_cost = 0.0;
};

struct TierSpec {
    std::vector<DeviceSpec> devices;
    std::optional<LinkSpec> uplink;  // link towards the parent tier
};

struct HardwareCatalog {
    TierSpec cloud;
    TierSpec carrier_edge;
    TierSpec user_edge;

    const TierSpec& tier(SiteKind kind) const;
};

/// How children are attached to parents when counts divide evenly.
/// Block: child i -> parent i / fanout. RoundRobin: child i -> parent i % parents.
enum class Attachment { Block, RoundRobin };

std::string_view to_string(Attachment attachment);
Attachment parse_attachment(std::string_view text);

struct TopologyShape {
    std::size_t clouds = 1;
    std::size_t carrier_edges = 1;
    std::size_t user_edges = 1;
    std::size_t input_nodes = 1;
    Attachment attachment = Attachment::Block;

    std::size_t count(SiteKind kind) const;
};

/// Layered tree of clouds, carrier edges, user edges and input nodes.
/// Immutable once built.
class Topology {
public:
    const Site& site(SiteId id) const;
    const Device& device(DeviceId id) const;
    const Link& link(LinkId id) const;

    std::span<const Site> sites() const { return sites_; }
    std::span<const Device> devices() const { return devices_; }
    std::span<const Link> links() const { return links_; }
    std::span<const SiteId> sites_of_kind(SiteKind kind) const;
    const TopologyShape& shape() const { return shape_; }

    /// (user edge, carrier edge, cloud) above an input node.
    std::array<SiteId, 3> ancestor_sites(SiteId input_node) const;

    /// Links traversed from the input node's user edge up to `site`,
    /// bottom-up. Throws LookupError if `site` is not an ancestor.
    std::vector<LinkId> path_links(SiteId input_node, SiteId site) const;

    /// Devices of `kind` at `site`, ascending id (possibly empty).
    std::vector<DeviceId> devices_at(SiteId site, DeviceKind kind) const;

    friend Topology build_topology(const TopologyShape& shape, const HardwareCatalog& catalog);

private:
    Topology() = default;

    const Site& checked_input(SiteId id) const;

    TopologyShape shape_;
    std::vector<Site> sites_;
    std::vector<Device> devices_;
    std::vector<Link> links_;
    std::array<std::vector<SiteId>, 4> by_kind_;
};

/// Builds the tree. Site ids are assigned clouds first, then carrier edges,
/// user edges and input nodes; within a layer by ordinal. Throws ConfigError
/// when a layer count is not a multiple of its parent layer count or when the
/// catalog is incomplete.
Topology build_topology(const TopologyShape& shape, const HardwareCatalog& catalog);

} // namespace edgereconf
