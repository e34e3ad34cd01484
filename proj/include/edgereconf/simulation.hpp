#pragma once

#include "edgereconf/placement.hpp"
#include "edgereconf/reconfig.hpp"
#include "edgereconf/scenario.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace edgereconf {

struct PlacementEvent {
    Placement placement;
};

struct RejectionEvent {
    RequestId request;
    SiteId input_node;
    std::string app;
    std::string menu;
    RejectReason reason = RejectReason::Constraint;
};

struct ReconfigEvent {
    std::size_t wave = 0;
    ReconfigReport report;
};

using TraceEvent = std::variant<PlacementEvent, RejectionEvent, ReconfigEvent>;

/// State of the run at the end of one wave (wave 0 is the initial batch).
struct WaveRecord {
    std::size_t wave = 0;
    std::size_t requested = 0;   // cumulative
    std::size_t placed = 0;      // cumulative, currently placed
    std::size_t rejected = 0;    // cumulative
    std::optional<ReconfigReport> reconfig;
};

struct SimulationTrace {
    ScenarioConfig config;
    std::vector<TraceEvent> events;
    std::vector<WaveRecord> waves;
    std::optional<SystemState> final_state;
    std::vector<std::string> audit_failures;

    bool audits_passed() const { return audit_failures.empty(); }
};

/// Raised from run_simulation; carries everything recorded before the error.
class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, SimulationTrace partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const SimulationTrace& partial() const { return partial_; }

private:
    SimulationTrace partial_;
};

/// Initial batch, then waves; after each wave the most recent n placements
/// are trial-reconfigured and the plan applied if it clears epsilon. Audits
/// run after every wave and trial purity is checked by state digest.
SimulationTrace run_simulation(const ScenarioConfig& config);

/// Rebuilds the final state from the trace events alone.
SystemState replay(const SimulationTrace& trace);

/// Compact per-run view used for aggregation; also recoverable from a
/// trace JSON file.
struct RoundDigest {
    std::size_t targets = 0;
    std::size_t moved = 0;
    double moved_term_sum = 0.0;
    bool applied = false;
    bool optimal = false;
    std::uint64_t nodes = 0;
    double seconds = 0.0;
};

struct RunDigest {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::size_t placed = 0;
    std::size_t rejected = 0;
    std::vector<RoundDigest> rounds;
};

RunDigest digest_run(const SimulationTrace& trace);

struct MetricsRow {
    std::size_t n = 0;
    std::size_t runs = 0;
    std::size_t rounds = 0;
    double mean_moved = 0.0;            // per round
    double moved_fraction = 0.0;        // moved / targets, pooled over rounds
    std::optional<double> mean_moved_term;  // pooled over moved apps
    double mean_rejected = 0.0;         // per run
    bool all_optimal = true;
    double mean_nodes = 0.0;
    double mean_solve_s = 0.0;
    double max_solve_s = 0.0;
};

/// One row per distinct n, ascending. Throws std::invalid_argument on empty input.
std::vector<MetricsRow> summarize(std::span<const RunDigest> runs);

// Exports. Trace and wave exports are byte-identical for identical
// configurations; wall-clock times appear only in the metrics table.
std::string waves_csv(const SimulationTrace& trace);
std::string trace_json(const SimulationTrace& trace);
std::string metrics_csv(std::span<const MetricsRow> rows);
RunDigest run_digest_from_json(std::string_view trace_json_text);

} // namespace edgereconf
