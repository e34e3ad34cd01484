#pragma once

#include "edgereconf/evaluator.hpp"
#include "edgereconf/ids.hpp"
#include "edgereconf/topology.hpp"
#include "edgereconf/workload.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace edgereconf {

/// A committed assignment of one request.
struct Placement {
    RequestId request;
    SiteId input_node;
    std::size_t app = 0;
    AppProfile profile;
    ConstraintMenu menu;
    SiteId site;
    DeviceId device;
    std::vector<LinkId> path;
    Outcome outcome;
};

enum class RejectReason {
    Capacity,    // some site meets the bounds but lacks headroom
    Constraint,  // no site on the chain can meet the bounds at all
};

std::string_view to_string(RejectReason reason);

struct Rejection {
    RequestId request;
    RejectReason reason = RejectReason::Constraint;
};

struct SiteCandidate {
    SiteId site;
    DeviceId device;
    std::vector<LinkId> path;
    Outcome outcome;
};

/// Topology, usage ledger and the current placements. Mutated only through
/// place() and reconfiguration; every mutation bumps the version stamp.
class SystemState {
public:
    explicit SystemState(std::shared_ptr<const Topology> topology);

    const Topology& topology() const { return *topology_; }
    std::shared_ptr<const Topology> topology_ptr() const { return topology_; }
    const UsageLedger& ledger() const { return ledger_; }
    std::uint64_t version() const { return version_; }

    const std::map<RequestId, Placement>& placements() const { return placements_; }
    const Placement& placement(RequestId id) const;
    bool is_placed(RequestId id) const { return placements_.contains(id); }

    /// Placed requests in the order they were admitted.
    const std::vector<RequestId>& arrival_order() const { return arrival_order_; }

    void admit(Placement placement);

    /// Replaces the device/site/path/outcome of an existing placement. The
    /// caller must have released the old resources first.
    void relocate(RequestId id, const SiteCandidate& target);

    UsageLedger& mutable_ledger() { return ledger_; }
    void bump_version() { ++version_; }

    /// 64-bit FNV-1a digest over placements and ledger contents.
    std::uint64_t digest() const;

private:
    std::shared_ptr<const Topology> topology_;
    UsageLedger ledger_;
    std::map<RequestId, Placement> placements_;
    std::vector<RequestId> arrival_order_;
    std::uint64_t version_ = 0;
};

/// Sites on the request's chain that hold the required device kind, still
/// have device and path headroom, and meet every bound of the menu.
/// The lowest-id device with headroom represents each site.
std::vector<SiteCandidate> candidate_sites(const PlacementRequest& request, const SystemState& state);

using PlaceResult = std::variant<Placement, Rejection>;

/// First-come placement: minimizes the menu objective over candidate_sites().
/// Ties: other metric, fewer hops, lower site id, lower device id.
PlaceResult place(const PlacementRequest& request, SystemState& state);

struct AuditReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Recomputes the ledger from placements and checks capacities, stored
/// outcomes, paths and menu bounds.
AuditReport audit(const SystemState& state);

} // namespace edgereconf
