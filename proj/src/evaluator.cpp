#include "edgereconf/evaluator.hpp"

#include "edgereconf/error.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace edgereconf {

namespace {

const Device& device_for(const AppProfile& profile, SiteId site, const Topology& topology) {
    for (DeviceId id : topology.site(site).devices) {
        const Device& d = topology.device(id);
        if (d.kind == profile.device_kind) {
            return d;
        }
    }
    throw LookupError("site " + std::to_string(site.value) + " has no " +
                      std::string(to_string(profile.device_kind)) + " for " + profile.name);
}

} // namespace

double response_time(const AppProfile& profile, SiteId input_node, SiteId site, const Topology& topology) {
    device_for(profile, site, topology);
    const auto path = topology.path_links(input_node, site);
    const double per_hop = profile.data_mb * kBitsPerByte / profile.bandwidth_mbps;
    double total = profile.processing_time_s;
    for (std::size_t i = 0; i < path.size(); ++i) {
        total += per_hop;
    }
    return total;
}

double price(const AppProfile& profile, SiteId site, std::span<const LinkId> path, const Topology& topology) {
    const Device& d = device_for(profile, site, topology);
    // Multiply before dividing: exact for the integral rates and demands used
    // by the catalog.
    double total = d.full_month_cost * profile.demand / d.capacity;
    for (LinkId id : path) {
        const Link& l = topology.link(id);
        total += l.month_cost * profile.bandwidth_mbps / l.bandwidth_mbps;
    }
    return total;
}

Outcome evaluate(const AppProfile& profile, SiteId input_node, SiteId site, const Topology& topology) {
    const auto path = topology.path_links(input_node, site);
    return Outcome{response_time(profile, input_node, site, topology), price(profile, site, path, topology)};
}

double satisfaction_term(const Outcome& before, const Outcome& after) {
    if (!(before.response_time_s > 0.0) || !(before.price > 0.0)) {
        throw std::invalid_argument("satisfaction term needs positive baseline response time and price");
    }
    return after.response_time_s / before.response_time_s + after.price / before.price;
}

UsageLedger::Units UsageLedger::to_units(double amount) {
    return static_cast<Units>(std::llround(amount * kUnitsPerWhole));
}

UsageLedger::UsageLedger(const Topology& topology)
    : device_used_(topology.devices().size(), 0), link_used_(topology.links().size(), 0) {
    for (const Device& d : topology.devices()) {
        device_cap_.push_back(to_units(d.capacity));
    }
    for (const Link& l : topology.links()) {
        link_cap_.push_back(to_units(l.bandwidth_mbps));
    }
}

double UsageLedger::device_free(DeviceId id) const {
    return from_units(device_cap_.at(id.index()) - device_used_.at(id.index()));
}

double UsageLedger::link_free(LinkId id) const {
    return from_units(link_cap_.at(id.index()) - link_used_.at(id.index()));
}

bool UsageLedger::fits(DeviceId device, std::span<const LinkId> path, double demand, double bandwidth_mbps) const {
    const Units d = to_units(demand);
    const Units b = to_units(bandwidth_mbps);
    if (device_used_.at(device.index()) + d > device_cap_[device.index()]) {
        return false;
    }
    for (LinkId l : path) {
        if (link_used_.at(l.index()) + b > link_cap_[l.index()]) {
            return false;
        }
    }
    return true;
}

void UsageLedger::commit(DeviceId device, std::span<const LinkId> path, double demand, double bandwidth_mbps) {
    const Units d = to_units(demand);
    const Units b = to_units(bandwidth_mbps);
    if (device_used_.at(device.index()) + d > device_cap_[device.index()]) {
        throw CapacityError("device " + std::to_string(device.value) + " saturated");
    }
    for (LinkId l : path) {
        if (link_used_.at(l.index()) + b > link_cap_[l.index()]) {
            throw CapacityError("link " + std::to_string(l.value) + " saturated");
        }
    }
    device_used_[device.index()] += d;
    for (LinkId l : path) {
        link_used_[l.index()] += b;
    }
}

void UsageLedger::release(DeviceId device, std::span<const LinkId> path, double demand, double bandwidth_mbps) {
    const Units d = to_units(demand);
    const Units b = to_units(bandwidth_mbps);
    if (device_used_.at(device.index()) < d) {
        throw std::logic_error("releasing more than committed on device " + std::to_string(device.value));
    }
    for (LinkId l : path) {
        if (link_used_.at(l.index()) < b) {
            throw std::logic_error("releasing more than committed on link " + std::to_string(l.value));
        }
    }
    device_used_[device.index()] -= d;
    for (LinkId l : path) {
        link_used_[l.index()] -= b;
    }
}

} // namespace edgereconf
