#pragma once

#include "edgereconf/ids.hpp"
#include "edgereconf/topology.hpp"
#include "edgereconf/workload.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace edgereconf {

inline constexpr double kBitsPerByte = 8.0;

struct Outcome {
    double response_time_s = 0.0;
    double price = 0.0;  // yen/month

    bool operator==(const Outcome&) const = default;
};

/// Processing time plus one transfer of the app's data per traversed link at
/// the app's own bandwidth. Throws LookupError if `site` is not on the input
/// node's chain or lacks the required device kind.
double response_time(const AppProfile& profile, SiteId input_node, SiteId site, const Topology& topology);

/// Pro-rata device charge plus pro-rata charge of every traversed link.
/// `path` must be the links from the input node's user edge up to `site`.
double price(const AppProfile& profile, SiteId site, std::span<const LinkId> path, const Topology& topology);

Outcome evaluate(const AppProfile& profile, SiteId input_node, SiteId site, const Topology& topology);

/// R_after / R_before + P_after / P_before. Throws std::invalid_argument on
/// non-positive `before` values.
double satisfaction_term(const Outcome& before, const Outcome& after);

/// Committed device demand and link bandwidth. Amounts are kept as integers
/// in micro-units so that commit followed by release is exact.
class UsageLedger {
public:
    using Units = std::int64_t;
    static constexpr double kUnitsPerWhole = 1e6;

    static Units to_units(double amount);
    static double from_units(Units units) { return static_cast<double>(units) / kUnitsPerWhole; }

    explicit UsageLedger(const Topology& topology);

    double device_used(DeviceId id) const { return from_units(device_used_.at(id.index())); }
    double link_used(LinkId id) const { return from_units(link_used_.at(id.index())); }
    double device_free(DeviceId id) const;
    double link_free(LinkId id) const;

    /// True if `demand` fits on the device and `bandwidth` on every link.
    bool fits(DeviceId device, std::span<const LinkId> path, double demand, double bandwidth_mbps) const;

    /// Throws CapacityError naming the first saturated resource; the ledger is
    /// unchanged on failure.
    void commit(DeviceId device, std::span<const LinkId> path, double demand, double bandwidth_mbps);
    void release(DeviceId device, std::span<const LinkId> path, double demand, double bandwidth_mbps);

    bool operator==(const UsageLedger&) const = default;

    std::span<const Units> device_units() const { return device_used_; }
    std::span<const Units> link_units() const { return link_used_; }
    std::span<const Units> device_capacity_units() const { return device_cap_; }
    std::span<const Units> link_capacity_units() const { return link_cap_; }

private:
    std::vector<Units> device_used_;
    std::vector<Units> link_used_;
    std::vector<Units> device_cap_;
    std::vector<Units> link_cap_;
};

} // namespace edgereconf
