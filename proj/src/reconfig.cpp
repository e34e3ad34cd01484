#include "edgereconf/reconfig.hpp"

#include "edgereconf/error.hpp"

#include <map>

namespace edgereconf {

std::size_t ReconfigPlan::moved_count() const {
    std::size_t n = 0;
    for (const AppChange& a : apps) {
        n += a.moved ? 1 : 0;
    }
    return n;
}

std::vector<RequestId> select_targets(const SystemState& state, std::size_t n, TargetPolicy) {
    const auto& order = state.arrival_order();
    const std::size_t take = std::min(n, order.size());
    return {order.end() - static_cast<std::ptrdiff_t>(take), order.end()};
}

ReconfigModel build_model(const SystemState& state, std::span<const RequestId> targets) {
    const Topology& topo = state.topology();
    const UsageLedger& ledger = state.ledger();
    ReconfigModel rm;
    rm.targets.assign(targets.begin(), targets.end());

    std::map<DeviceId, std::size_t> device_slot;
    std::map<LinkId, std::size_t> link_slot;
    std::vector<std::vector<std::vector<std::pair<bool, std::size_t>>>> raw_usage;  // (is_link, slot)

    for (RequestId id : rm.targets) {
        const Placement& p = state.placement(id);
        rm.before.push_back(p.outcome);
        std::vector<SiteCandidate> choices;
        for (SiteId site : topo.ancestor_sites(p.input_node)) {
            const auto devices = topo.devices_at(site, p.profile.device_kind);
            if (devices.empty()) {
                continue;
            }
            const Outcome o = evaluate(p.profile, p.input_node, site, topo);
            if (!p.menu.admits(o.response_time_s, o.price) && site != p.site) {
                continue;
            }
            const auto path = topo.path_links(p.input_node, site);
            for (DeviceId d : devices) {
                // The current device keeps its stored outcome so its term is exactly 2.
                choices.push_back(SiteCandidate{site, d, path, d == p.device ? p.outcome : o});
            }
        }
        std::vector<ModelCandidate> cands;
        for (const SiteCandidate& c : choices) {
            ModelCandidate mc;
            mc.cost = satisfaction_term(p.outcome, c.outcome);
            mc.is_current = c.device == p.device;
            device_slot.try_emplace(c.device, device_slot.size());
            mc.usage.push_back({device_slot[c.device], p.profile.demand});
            for (LinkId l : c.path) {
                link_slot.try_emplace(l, link_slot.size());
                // Link slots are offset once all devices are known.
                mc.usage.push_back({link_slot[l] + (std::size_t{1} << 40), p.profile.bandwidth_mbps});
            }
            cands.push_back(std::move(mc));
        }
        rm.model.apps.push_back(std::move(cands));
        rm.choices.push_back(std::move(choices));
    }

    const std::size_t devices = device_slot.size();
    rm.device_rows.resize(devices);
    rm.link_rows.resize(link_slot.size());
    for (const auto& [d, slot] : device_slot) {
        rm.device_rows[slot] = d;
    }
    for (const auto& [l, slot] : link_slot) {
        rm.link_rows[slot] = l;
    }
    for (auto& cands : rm.model.apps) {
        for (auto& c : cands) {
            for (auto& u : c.usage) {
                if (u.resource >= (std::size_t{1} << 40)) {
                    u.resource = u.resource - (std::size_t{1} << 40) + devices;
                }
            }
        }
    }

    // Residual capacity with every target virtually released.
    std::vector<UsageLedger::Units> free_units;
    for (DeviceId d : rm.device_rows) {
        free_units.push_back(ledger.device_capacity_units()[d.index()] - ledger.device_units()[d.index()]);
    }
    for (LinkId l : rm.link_rows) {
        free_units.push_back(ledger.link_capacity_units()[l.index()] - ledger.link_units()[l.index()]);
    }
    for (RequestId id : rm.targets) {
        const Placement& p = state.placement(id);
        if (auto it = device_slot.find(p.device); it != device_slot.end()) {
            free_units[it->second] += UsageLedger::to_units(p.profile.demand);
        }
        for (LinkId l : p.path) {
            if (auto it = link_slot.find(l); it != link_slot.end()) {
                free_units[devices + it->second] += UsageLedger::to_units(p.profile.bandwidth_mbps);
            }
        }
    }
    for (auto u : free_units) {
        rm.model.residual.push_back(UsageLedger::from_units(u));
    }
    return rm;
}

ReconfigPlan trial_reconfigure(const SystemState& state, std::span<const RequestId> targets,
                               const SolveBudget& budget) {
    const ReconfigModel rm = build_model(state, targets);
    const OptimalAssignment solved = solve_exact(rm.model, budget);

    ReconfigPlan plan;
    plan.state_version = state.version();
    plan.targets = rm.targets;
    plan.optimal = solved.optimal;
    plan.stats = solved.stats;
    plan.s_after = solved.objective;
    const Choice stays = stay_choice(rm.model);
    plan.s_before = objective(rm.model, stays);
    for (std::size_t k = 0; k < rm.targets.size(); ++k) {
        AppChange change;
        change.request = rm.targets[k];
        change.from = rm.choices[k][stays[k]];
        change.to = rm.choices[k][solved.choice[k]];
        change.term = rm.model.apps[k][solved.choice[k]].cost;
        change.moved = change.to.device != change.from.device;
        plan.apps.push_back(std::move(change));
    }
    return plan;
}

ReconfigReport apply_if_beneficial(SystemState& state, const ReconfigPlan& plan, double epsilon) {
    if (plan.state_version != state.version()) {
        throw StalePlanError("reconfiguration plan was computed on state version " +
                             std::to_string(plan.state_version) + ", state is now at " +
                             std::to_string(state.version()));
    }
    ReconfigReport report;
    report.targets = plan.targets.size();
    report.s_before = plan.s_before;
    report.s_after = plan.s_after;
    report.optimal = plan.optimal;
    report.stats = plan.stats;
    if (!(plan.s_before - plan.s_after >= epsilon)) {
        return report;
    }

    UsageLedger& ledger = state.mutable_ledger();
    for (const AppChange& a : plan.apps) {
        if (a.moved) {
            const Placement& p = state.placement(a.request);
            ledger.release(p.device, p.path, p.profile.demand, p.profile.bandwidth_mbps);
        }
    }
    double term_sum = 0.0;
    for (const AppChange& a : plan.apps) {
        if (!a.moved) {
            continue;
        }
        const Placement& p = state.placement(a.request);
        ledger.commit(a.to.device, a.to.path, p.profile.demand, p.profile.bandwidth_mbps);
        state.relocate(a.request, a.to);
        term_sum += a.term;
        report.moves.push_back(a);
    }
    report.applied = true;
    report.moved = report.moves.size();
    if (report.moved > 0) {
        report.mean_moved_term = term_sum / static_cast<double>(report.moved);
    }
    state.bump_version();

    const AuditReport check = audit(state);
    if (!check.ok()) {
        throw std::logic_error("post-reconfiguration audit failed: " + check.violations.front());
    }
    return report;
}

} // namespace edgereconf
