#include "edgereconf/simulation.hpp"

#include "edgereconf/error.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <map>
#include <sstream>

namespace edgereconf {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string display(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::vector<std::size_t> batch_sizes(const RequestPlan& plan) {
    std::vector<std::size_t> sizes{plan.initial};
    for (std::size_t done = plan.initial; done < plan.total;) {
        const std::size_t n = std::min(plan.wave_size, plan.total - done);
        sizes.push_back(n);
        done += n;
    }
    return sizes;
}

} // namespace

SimulationTrace run_simulation(const ScenarioConfig& config) {
    config.validate();
    SimulationTrace trace;
    trace.config = config;
    auto topology = std::make_shared<const Topology>(build_topology(config.shape, config.hardware));
    SystemState state(topology);
    Xoshiro256 rng(config.seed);
    const auto inputs = topology->sites_of_kind(SiteKind::InputNode);
    const auto& rc = config.reconfiguration;

    std::size_t next_id = 0;
    std::size_t rejected = 0;
    const auto sizes = batch_sizes(config.requests);
    try {
        for (std::size_t wave = 0; wave < sizes.size(); ++wave) {
            const auto requests =
                generate_requests(config.apps, inputs, sizes[wave], config.requests.mix, rng, next_id);
            next_id += sizes[wave];
            for (const PlacementRequest& req : requests) {
                PlaceResult result = place(req, state);
                if (auto* p = std::get_if<Placement>(&result)) {
                    trace.events.emplace_back(PlacementEvent{std::move(*p)});
                } else {
                    const auto& r = std::get<Rejection>(result);
                    trace.events.emplace_back(
                        RejectionEvent{r.request, req.input_node, req.profile.name, req.menu.label, r.reason});
                    ++rejected;
                }
            }

            WaveRecord record{wave, next_id, state.placements().size(), rejected, std::nullopt};
            const std::string tag = "wave " + std::to_string(wave) + ": ";
            if (wave > 0 && rc.targets > 0 && !state.placements().empty()) {
                const auto targets = select_targets(state, rc.targets);
                const std::uint64_t before = state.digest();
                const ReconfigPlan plan = trial_reconfigure(state, targets, rc.budget());
                if (state.digest() != before) {
                    trace.audit_failures.push_back(tag + "trial reconfiguration mutated the state");
                }
                if (rc.oracle) {
                    const ReconfigModel rm = build_model(state, targets);
                    try {
                        const OptimalAssignment oracle = brute_force(rm.model, rc.oracle_cap);
                        if (plan.optimal && std::abs(oracle.objective - plan.s_after) > 1e-9) {
                            trace.audit_failures.push_back(tag + "solver objective " + full(plan.s_after) +
                                                           " differs from brute force " + full(oracle.objective));
                        }
                    } catch (const ModelError&) {
                        // Over the oracle cap: nothing to compare.
                    }
                }
                ReconfigReport report = apply_if_beneficial(state, plan, rc.epsilon);
                if (report.applied && !(report.s_before - report.s_after >= rc.epsilon)) {
                    trace.audit_failures.push_back(tag + "applied plan does not clear epsilon");
                }
                record.reconfig = report;
                trace.events.emplace_back(ReconfigEvent{wave, std::move(report)});
            }
            for (const std::string& v : audit(state).violations) {
                trace.audit_failures.push_back(tag + v);
            }
            trace.waves.push_back(std::move(record));
        }
    } catch (const std::exception& e) {
        trace.final_state = state;
        throw SimulationError(e.what(), std::move(trace));
    }
    trace.final_state = state;
    if (replay(trace).digest() != state.digest()) {
        trace.audit_failures.push_back("replaying the trace does not reproduce the final state");
    }
    return trace;
}

SystemState replay(const SimulationTrace& trace) {
    auto topology = std::make_shared<const Topology>(build_topology(trace.config.shape, trace.config.hardware));
    SystemState state(topology);
    for (const TraceEvent& event : trace.events) {
        if (const auto* p = std::get_if<PlacementEvent>(&event)) {
            const Placement& pl = p->placement;
            state.mutable_ledger().commit(pl.device, pl.path, pl.profile.demand, pl.profile.bandwidth_mbps);
            state.admit(pl);
        } else if (const auto* r = std::get_if<ReconfigEvent>(&event)) {
            if (!r->report.applied) {
                continue;
            }
            for (const AppChange& m : r->report.moves) {
                const Placement& pl = state.placement(m.request);
                state.mutable_ledger().release(pl.device, pl.path, pl.profile.demand, pl.profile.bandwidth_mbps);
            }
            for (const AppChange& m : r->report.moves) {
                const Placement& pl = state.placement(m.request);
                state.mutable_ledger().commit(m.to.device, m.to.path, pl.profile.demand, pl.profile.bandwidth_mbps);
                state.relocate(m.request, m.to);
            }
            state.bump_version();
        }
    }
    return state;
}

RunDigest digest_run(const SimulationTrace& trace) {
    RunDigest d;
    d.n = trace.config.reconfiguration.targets;
    d.seed = trace.config.seed;
    d.placed = trace.final_state ? trace.final_state->placements().size() : 0;
    for (const TraceEvent& event : trace.events) {
        if (std::holds_alternative<RejectionEvent>(event)) {
            ++d.rejected;
        } else if (const auto* r = std::get_if<ReconfigEvent>(&event)) {
            RoundDigest round;
            round.targets = r->report.targets;
            round.moved = r->report.moved;
            for (const AppChange& m : r->report.moves) {
                round.moved_term_sum += m.term;
            }
            round.applied = r->report.applied;
            round.optimal = r->report.optimal;
            round.nodes = r->report.stats.nodes;
            round.seconds = r->report.stats.seconds;
            d.rounds.push_back(round);
        }
    }
    return d;
}

std::vector<MetricsRow> summarize(std::span<const RunDigest> runs) {
    if (runs.empty()) {
        throw std::invalid_argument("summarize: no runs given");
    }
    struct Acc {
        MetricsRow row;
        std::size_t moved = 0;
        std::size_t targets = 0;
        double term_sum = 0.0;
        double rejected = 0.0;
        double nodes = 0.0;
        double seconds = 0.0;
    };
    std::map<std::size_t, Acc> by_n;
    for (const RunDigest& run : runs) {
        Acc& a = by_n[run.n];
        a.row.n = run.n;
        ++a.row.runs;
        a.rejected += static_cast<double>(run.rejected);
        for (const RoundDigest& r : run.rounds) {
            ++a.row.rounds;
            a.moved += r.moved;
            a.targets += r.targets;
            a.term_sum += r.moved_term_sum;
            a.row.all_optimal = a.row.all_optimal && r.optimal;
            a.nodes += static_cast<double>(r.nodes);
            a.seconds += r.seconds;
            a.row.max_solve_s = std::max(a.row.max_solve_s, r.seconds);
        }
    }
    std::vector<MetricsRow> rows;
    for (auto& [n, a] : by_n) {
        MetricsRow row = a.row;
        const double rounds = static_cast<double>(row.rounds);
        if (row.rounds > 0) {
            row.mean_moved = static_cast<double>(a.moved) / rounds;
            row.mean_nodes = a.nodes / rounds;
            row.mean_solve_s = a.seconds / rounds;
        }
        if (a.targets > 0) {
            row.moved_fraction = static_cast<double>(a.moved) / static_cast<double>(a.targets);
        }
        if (a.moved > 0) {
            row.mean_moved_term = a.term_sum / static_cast<double>(a.moved);
        }
        row.mean_rejected = a.rejected / static_cast<double>(row.runs);
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Exports

std::string waves_csv(const SimulationTrace& trace) {
    std::ostringstream out;
    out << "wave,requested,placed,rejected,targets,s_before,s_after,improvement,improvement_display,applied,moved,"
           "moved_fraction,moved_fraction_display,mean_moved_term,mean_moved_term_display,optimal,nodes\n";
    for (const WaveRecord& w : trace.waves) {
        out << w.wave << ',' << w.requested << ',' << w.placed << ',' << w.rejected << ',';
        if (!w.reconfig) {
            out << ",,,,,,,,,,,,\n";
            continue;
        }
        const ReconfigReport& r = *w.reconfig;
        const double improvement = r.s_before - r.s_after;
        const double fraction =
            r.targets ? static_cast<double>(r.moved) / static_cast<double>(r.targets) : 0.0;
        out << r.targets << ',' << full(r.s_before) << ',' << full(r.s_after) << ',' << full(improvement) << ','
            << display(improvement) << ',' << (r.applied ? 1 : 0) << ',' << r.moved << ',' << full(fraction) << ','
            << display(fraction) << ',';
        if (r.mean_moved_term) {
            out << full(*r.mean_moved_term) << ',' << display(*r.mean_moved_term);
        } else {
            out << ',';
        }
        out << ',' << (r.optimal ? 1 : 0) << ',' << r.stats.nodes << '\n';
    }
    return out.str();
}

namespace {

ordered_json candidate_json(const SiteCandidate& c) {
    ordered_json links = ordered_json::array();
    for (LinkId l : c.path) {
        links.push_back(l.value);
    }
    return {{"site", c.site.value},
            {"device", c.device.value},
            {"links", links},
            {"response_time_s", c.outcome.response_time_s},
            {"price", c.outcome.price}};
}

ordered_json placement_json(const Placement& p, const Topology& topo) {
    ordered_json j = {{"request", p.request.value},
                      {"input_node", p.input_node.value},
                      {"app", p.profile.name},
                      {"menu", p.menu.label},
                      {"objective", std::string(to_string(p.menu.objective))},
                      {"site_kind", std::string(to_string(topo.site(p.site).kind))}};
    j.update(candidate_json(SiteCandidate{p.site, p.device, p.path, p.outcome}));
    return j;
}

} // namespace

std::string trace_json(const SimulationTrace& trace) {
    const Topology topo = build_topology(trace.config.shape, trace.config.hardware);
    ordered_json j;
    j["format"] = "edgereconf-trace";
    j["version"] = 1;
    j["config"] = ordered_json::parse(to_json_text(trace.config));
    ordered_json events = ordered_json::array();
    for (const TraceEvent& event : trace.events) {
        if (const auto* p = std::get_if<PlacementEvent>(&event)) {
            ordered_json e = {{"type", "placement"}};
            e.update(placement_json(p->placement, topo));
            events.push_back(e);
        } else if (const auto* r = std::get_if<RejectionEvent>(&event)) {
            events.push_back({{"type", "rejection"},
                              {"request", r->request.value},
                              {"input_node", r->input_node.value},
                              {"app", r->app},
                              {"menu", r->menu},
                              {"reason", std::string(to_string(r->reason))}});
        } else {
            const auto& c = std::get<ReconfigEvent>(event);
            const ReconfigReport& rep = c.report;
            ordered_json moves = ordered_json::array();
            for (const AppChange& m : rep.moves) {
                moves.push_back({{"request", m.request.value},
                                 {"from", candidate_json(m.from)},
                                 {"to", candidate_json(m.to)},
                                 {"term", m.term}});
            }
            events.push_back({{"type", "reconfiguration"},
                              {"wave", c.wave},
                              {"targets", rep.targets},
                              {"s_before", rep.s_before},
                              {"s_after", rep.s_after},
                              {"applied", rep.applied},
                              {"optimal", rep.optimal},
                              {"nodes", rep.stats.nodes},
                              {"lp_solves", rep.stats.lp_solves},
                              {"components", rep.stats.components},
                              {"root_bound", rep.stats.root_bound},
                              {"moved_count", rep.moved},
                              {"mean_moved_term", rep.mean_moved_term ? ordered_json(*rep.mean_moved_term)
                                                                       : ordered_json(nullptr)},
                              {"moves", moves}});
        }
    }
    j["events"] = std::move(events);

    ordered_json placements = ordered_json::array();
    if (trace.final_state) {
        for (const auto& [id, p] : trace.final_state->placements()) {
            placements.push_back(placement_json(p, topo));
        }
    }
    char digest[24];
    std::snprintf(digest, sizeof digest, "%016" PRIx64, trace.final_state ? trace.final_state->digest() : 0);
    j["final_state"] = {{"placements", placements}, {"digest", digest}};
    j["audits"] = {{"passed", trace.audits_passed()}, {"failures", trace.audit_failures}};
    return j.dump(1) + "\n";
}

std::string metrics_csv(std::span<const MetricsRow> rows) {
    std::ostringstream out;
    out << "n,runs,rounds,mean_moved,moved_fraction,moved_fraction_display,mean_moved_term,"
           "mean_moved_term_display,mean_rejected,all_optimal,mean_nodes,mean_solve_s,max_solve_s\n";
    for (const MetricsRow& r : rows) {
        out << r.n << ',' << r.runs << ',' << r.rounds << ',' << full(r.mean_moved) << ',' << full(r.moved_fraction)
            << ',' << display(r.moved_fraction) << ',';
        if (r.mean_moved_term) {
            out << full(*r.mean_moved_term) << ',' << display(*r.mean_moved_term);
        } else {
            out << ',';
        }
        out << ',' << full(r.mean_rejected) << ',' << (r.all_optimal ? 1 : 0) << ',' << full(r.mean_nodes) << ','
            << full(r.mean_solve_s) << ',' << full(r.max_solve_s) << '\n';
    }
    return out.str();
}

RunDigest run_digest_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("trace is not valid JSON: ") + e.what());
    }
    if (j.value("format", "") != "edgereconf-trace") {
        throw ConfigError("not an edgereconf trace file");
    }
    try {
        RunDigest d;
        d.n = j.at("config").at("reconfiguration").at("targets").get<std::size_t>();
        d.seed = j.at("config").at("seed").get<std::uint64_t>();
        d.placed = j.at("final_state").at("placements").size();
        for (const json& e : j.at("events")) {
            const std::string type = e.at("type").get<std::string>();
            if (type == "rejection") {
                ++d.rejected;
            } else if (type == "reconfiguration") {
                RoundDigest r;
                r.targets = e.at("targets").get<std::size_t>();
                r.moved = e.at("moved_count").get<std::size_t>();
                for (const json& m : e.at("moves")) {
                    r.moved_term_sum += m.at("term").get<double>();
                }
                r.applied = e.at("applied").get<bool>();
                r.optimal = e.at("optimal").get<bool>();
                r.nodes = e.at("nodes").get<std::uint64_t>();
                d.rounds.push_back(r);
            }
        }
        return d;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed trace: ") + e.what());
    }
}

} // namespace edgereconf
