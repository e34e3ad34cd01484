#include "edgereconf/placement.hpp"

#include "edgereconf/error.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <tuple>

namespace edgereconf {

std::string_view to_string(RejectReason reason) {
    return reason == RejectReason::Capacity ? "capacity" : "constraint";
}

SystemState::SystemState(std::shared_ptr<const Topology> topology)
    : topology_(std::move(topology)), ledger_(*topology_) {}

const Placement& SystemState::placement(RequestId id) const {
    const auto it = placements_.find(id);
    if (it == placements_.end()) {
        throw LookupError("request " + std::to_string(id.value) + " is not placed");
    }
    return it->second;
}

void SystemState::admit(Placement placement) {
    const RequestId id = placement.request;
    if (placements_.contains(id)) {
        throw std::logic_error("request " + std::to_string(id.value) + " already placed");
    }
    placements_.emplace(id, std::move(placement));
    arrival_order_.push_back(id);
    ++version_;
}

void SystemState::relocate(RequestId id, const SiteCandidate& target) {
    auto it = placements_.find(id);
    if (it == placements_.end()) {
        throw LookupError("request " + std::to_string(id.value) + " is not placed");
    }
    it->second.site = target.site;
    it->second.device = target.device;
    it->second.path = target.path;
    it->second.outcome = target.outcome;
    ++version_;
}

namespace {

class Fnv1a {
public:
    template <typename T>
    void add(const T& value) {
        unsigned char bytes[sizeof(T)];
        std::memcpy(bytes, &value, sizeof(T));
        for (unsigned char b : bytes) {
            hash_ = (hash_ ^ b) * 0x100000001b3ULL;
        }
    }
    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

double objective_value(const ConstraintMenu& menu, const Outcome& o) {
    return menu.objective == Objective::MinimizePrice ? o.price : o.response_time_s;
}

double other_value(const ConstraintMenu& menu, const Outcome& o) {
    return menu.objective == Objective::MinimizePrice ? o.response_time_s : o.price;
}

} // namespace

std::uint64_t SystemState::digest() const {
    Fnv1a h;
    for (const auto& [id, p] : placements_) {
        h.add(id.value);
        h.add(p.site.value);
        h.add(p.device.value);
        for (LinkId l : p.path) {
            h.add(l.value);
        }
        h.add(p.outcome.response_time_s);
        h.add(p.outcome.price);
    }
    for (auto u : ledger_.device_units()) {
        h.add(u);
    }
    for (auto u : ledger_.link_units()) {
        h.add(u);
    }
    h.add(arrival_order_.size());
    return h.value();
}

std::vector<SiteCandidate> candidate_sites(const PlacementRequest& request, const SystemState& state) {
    const Topology& topo = state.topology();
    std::vector<SiteCandidate> out;
    for (SiteId site : topo.ancestor_sites(request.input_node)) {
        const auto devices = topo.devices_at(site, request.profile.device_kind);
        if (devices.empty()) {
            continue;
        }
        auto path = topo.path_links(request.input_node, site);
        const Outcome outcome = evaluate(request.profile, request.input_node, site, topo);
        if (!request.menu.admits(outcome.response_time_s, outcome.price)) {
            continue;
        }
        for (DeviceId d : devices) {
            if (state.ledger().fits(d, path, request.profile.demand, request.profile.bandwidth_mbps)) {
                out.push_back(SiteCandidate{site, d, std::move(path), outcome});
                break;
            }
        }
    }
    return out;
}

PlaceResult place(const PlacementRequest& request, SystemState& state) {
    if (state.is_placed(request.id)) {
        throw std::logic_error("request " + std::to_string(request.id.value) + " already placed");
    }
    const auto candidates = candidate_sites(request, state);
    if (candidates.empty()) {
        const Topology& topo = state.topology();
        RejectReason reason = RejectReason::Constraint;
        for (SiteId site : topo.ancestor_sites(request.input_node)) {
            if (topo.devices_at(site, request.profile.device_kind).empty()) {
                continue;
            }
            const Outcome o = evaluate(request.profile, request.input_node, site, topo);
            if (request.menu.admits(o.response_time_s, o.price)) {
                reason = RejectReason::Capacity;
                break;
            }
        }
        return Rejection{request.id, reason};
    }

    const auto key = [&](const SiteCandidate& c) {
        return std::make_tuple(objective_value(request.menu, c.outcome), other_value(request.menu, c.outcome),
                               c.path.size(), c.site, c.device);
    };
    const SiteCandidate* best = &candidates.front();
    for (const SiteCandidate& c : candidates) {
        if (key(c) < key(*best)) {
            best = &c;
        }
    }

    state.mutable_ledger().commit(best->device, best->path, request.profile.demand, request.profile.bandwidth_mbps);
    Placement p{request.id, request.input_node, request.app, request.profile, request.menu,
                best->site, best->device, best->path, best->outcome};
    state.admit(p);
    return p;
}

AuditReport audit(const SystemState& state) {
    AuditReport report;
    const Topology& topo = state.topology();
    UsageLedger replay(topo);
    for (const auto& [id, p] : state.placements()) {
        std::ostringstream where;
        where << "request " << id.value << ": ";
        const Device& dev = topo.device(p.device);
        if (dev.site != p.site || dev.kind != p.profile.device_kind) {
            report.violations.push_back(where.str() + "device does not match site or kind");
            continue;
        }
        std::vector<LinkId> expected;
        try {
            expected = topo.path_links(p.input_node, p.site);
        } catch (const LookupError&) {
            report.violations.push_back(where.str() + "site is off the input node's chain");
            continue;
        }
        if (expected != p.path) {
            report.violations.push_back(where.str() + "stored path differs from the tree path");
        }
        const Outcome o = evaluate(p.profile, p.input_node, p.site, topo);
        if (std::abs(o.response_time_s - p.outcome.response_time_s) > 1e-9 ||
            std::abs(o.price - p.outcome.price) > 1e-9 * std::max(1.0, o.price)) {
            report.violations.push_back(where.str() + "stored outcome differs from re-evaluation");
        }
        if (!p.menu.admits(o.response_time_s, o.price)) {
            report.violations.push_back(where.str() + "menu '" + p.menu.label + "' violated");
        }
        try {
            replay.commit(p.device, p.path, p.profile.demand, p.profile.bandwidth_mbps);
        } catch (const CapacityError& e) {
            report.violations.push_back(where.str() + e.what());
        }
    }
    if (!(replay == state.ledger())) {
        report.violations.push_back("ledger differs from the sum of stored placements");
    }
    const auto& ledger = state.ledger();
    for (std::size_t i = 0; i < ledger.device_units().size(); ++i) {
        if (ledger.device_units()[i] > ledger.device_capacity_units()[i]) {
            report.violations.push_back("device " + std::to_string(i) + " over capacity");
        }
    }
    for (std::size_t i = 0; i < ledger.link_units().size(); ++i) {
        if (ledger.link_units()[i] > ledger.link_capacity_units()[i]) {
            report.violations.push_back("link " + std::to_string(i) + " over capacity");
        }
    }
    return report;
}

} // namespace edgereconf
