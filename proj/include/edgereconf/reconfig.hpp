#pragma once

#include "edgereconf/assignment.hpp"
#include "edgereconf/placement.hpp"

#include <optional>
#include <span>
#include <vector>

namespace edgereconf {

/// Assignment model for a set of placed targets plus the placement each
/// model candidate stands for.
struct ReconfigModel {
    AssignmentModel model;
    std::vector<RequestId> targets;
    std::vector<Outcome> before;                        // per target
    std::vector<std::vector<SiteCandidate>> choices;    // parallel to model.apps
    std::vector<DeviceId> device_rows;                  // resource r < device_rows.size()
    std::vector<LinkId> link_rows;                      // resource device_rows.size() + j
};

/// Candidates per target: every (site, device) on its chain that holds the
/// required kind and meets the target's original bounds. Costs are
/// satisfaction terms against the current outcome; residuals are the
/// capacities left once all targets are virtually released.
ReconfigModel build_model(const SystemState& state, std::span<const RequestId> targets);

struct AppChange {
    RequestId request;
    SiteCandidate from;
    SiteCandidate to;
    double term = 2.0;
    bool moved = false;
};

struct ReconfigPlan {
    std::uint64_t state_version = 0;
    std::vector<RequestId> targets;
    double s_before = 0.0;
    double s_after = 0.0;
    std::vector<AppChange> apps;   // one per target, target order
    bool optimal = false;
    SolveStats stats;

    std::size_t moved_count() const;
};

struct ReconfigReport {
    bool applied = false;
    std::size_t targets = 0;
    std::size_t moved = 0;
    std::optional<double> mean_moved_term;  // over moved apps; absent when none moved
    double s_before = 0.0;
    double s_after = 0.0;
    bool optimal = false;
    SolveStats stats;
    std::vector<AppChange> moves;           // moved apps of the plan
};

enum class TargetPolicy { Recency };

/// The min(n, placed) most recently placed requests, in arrival order.
std::vector<RequestId> select_targets(const SystemState& state, std::size_t n,
                                      TargetPolicy policy = TargetPolicy::Recency);

/// Builds the model and solves it exactly. Never mutates `state`.
ReconfigPlan trial_reconfigure(const SystemState& state, std::span<const RequestId> targets,
                               const SolveBudget& budget = {});

/// Applies the plan when S_before - S_after >= epsilon. Throws StalePlanError
/// if the state changed since the trial.
ReconfigReport apply_if_beneficial(SystemState& state, const ReconfigPlan& plan, double epsilon);

} // namespace edgereconf
