#include "edgereconf/cli.hpp"

#include "edgereconf/assignment.hpp"
#include "edgereconf/error.hpp"
#include "edgereconf/scenario.hpp"
#include "edgereconf/simulation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace edgereconf {

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAudit = 1;
constexpr int kExitUsage = 2;

struct Overrides {
    std::string config;
    std::vector<std::uint64_t> seeds;
    std::vector<std::size_t> targets;
    std::optional<double> epsilon;
    std::string out_dir;
    std::string format = "all";
    bool oracle = false;
};

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    f << text;
    if (!f) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

ScenarioConfig effective_config(const Overrides& o) {
    ScenarioConfig c = o.config.empty() ? reference_scenario() : load_scenario(o.config);
    if (!o.seeds.empty()) {
        c.seed = o.seeds.front();
    }
    if (!o.targets.empty()) {
        c.reconfiguration.targets = o.targets.front();
    }
    if (o.epsilon) {
        c.reconfiguration.epsilon = *o.epsilon;
    }
    c.reconfiguration.oracle = c.reconfiguration.oracle || o.oracle;
    c.validate();
    return c;
}

void write_outputs(const SimulationTrace& trace, const fs::path& dir, const std::string& format) {
    fs::create_directories(dir);
    if (format == "csv" || format == "all") {
        write_file(dir / "waves.csv", waves_csv(trace));
    }
    if (format == "json" || format == "all") {
        write_file(dir / "trace.json", trace_json(trace));
    }
}

void print_run(const SimulationTrace& trace, std::ostream& out) {
    const RunDigest d = digest_run(trace);
    out << "seed " << d.seed << ", n " << d.n << ": placed " << d.placed << ", rejected " << d.rejected << "\n";
    for (const WaveRecord& w : trace.waves) {
        if (!w.reconfig) {
            continue;
        }
        const ReconfigReport& r = *w.reconfig;
        out << "  wave " << w.wave << ": targets " << r.targets << ", S " << std::fixed << std::setprecision(4)
            << r.s_before << " -> " << r.s_after << ", moved " << r.moved << ", mean moved term "
            << (r.mean_moved_term ? std::to_string(*r.mean_moved_term) : std::string("-")) << ", "
            << (r.applied ? "applied" : "not applied") << ", " << (r.optimal ? "certified optimal" : "NOT certified")
            << ", " << r.stats.nodes << " nodes, " << std::setprecision(3) << r.stats.seconds << " s\n";
        out.unsetf(std::ios::floatfield);
    }
    for (const std::string& f : trace.audit_failures) {
        out << "  AUDIT FAILURE: " << f << "\n";
    }
}

void print_metrics(std::span<const MetricsRow> rows, std::ostream& out) {
    out << std::left << std::setw(6) << "n" << std::setw(6) << "runs" << std::setw(12) << "mean_moved"
        << std::setw(10) << "fraction" << std::setw(12) << "mean_term" << std::setw(10) << "optimal"
        << "mean_solve_s\n";
    for (const MetricsRow& r : rows) {
        std::ostringstream term;
        if (r.mean_moved_term) {
            term << std::fixed << std::setprecision(4) << *r.mean_moved_term;
        } else {
            term << "-";
        }
        out << std::left << std::setw(6) << r.n << std::setw(6) << r.runs << std::setw(12) << std::fixed
            << std::setprecision(2) << r.mean_moved << std::setw(10) << std::setprecision(4) << r.moved_fraction
            << std::setw(12) << term.str() << std::setw(10) << (r.all_optimal ? "yes" : "no")
            << std::setprecision(3) << r.mean_solve_s << "\n";
        out.unsetf(std::ios::floatfield);
    }
}

int cmd_scenario(const std::string& path, bool force, std::ostream& out) {
    if (fs::exists(path) && !force) {
        throw std::runtime_error(path + " exists; pass --force to overwrite");
    }
    save_scenario(reference_scenario(), path);
    out << "wrote " << path << "\n";
    return kExitOk;
}

int cmd_run(const Overrides& o, std::ostream& out) {
    const ScenarioConfig config = effective_config(o);
    out << "# effective configuration\n" << to_json_text(config);
    SimulationTrace trace;
    try {
        trace = run_simulation(config);
    } catch (const SimulationError& e) {
        if (!o.out_dir.empty()) {
            write_outputs(e.partial(), o.out_dir, o.format);
        }
        throw;
    }
    if (!o.out_dir.empty()) {
        write_outputs(trace, o.out_dir, o.format);
    }
    print_run(trace, out);
    return trace.audits_passed() ? kExitOk : kExitAudit;
}

int cmd_sweep(Overrides o, std::size_t jobs, std::ostream& out) {
    if (o.targets.empty()) {
        o.targets = {100, 200, 400};
    }
    if (o.seeds.empty()) {
        for (std::uint64_t s = 1; s <= 10; ++s) {
            o.seeds.push_back(s);
        }
    }
    Overrides base = o;
    base.seeds.clear();
    base.targets.clear();
    const ScenarioConfig config = effective_config(base);
    out << "# effective configuration (targets and seed vary per cell)\n" << to_json_text(config);

    struct Cell {
        std::size_t n;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (std::size_t n : o.targets) {
        for (std::uint64_t s : o.seeds) {
            cells.push_back({n, s});
        }
    }
    std::vector<SimulationTrace> traces(cells.size());
    jobs = std::max<std::size_t>(1, jobs);
    for (std::size_t begin = 0; begin < cells.size(); begin += jobs) {
        std::vector<std::future<SimulationTrace>> running;
        for (std::size_t i = begin; i < std::min(cells.size(), begin + jobs); ++i) {
            ScenarioConfig c = config;
            c.reconfiguration.targets = cells[i].n;
            c.seed = cells[i].seed;
            running.push_back(std::async(std::launch::async, [c] { return run_simulation(c); }));
        }
        for (std::size_t i = 0; i < running.size(); ++i) {
            traces[begin + i] = running[i].get();
        }
    }

    bool ok = true;
    std::vector<RunDigest> digests;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        digests.push_back(digest_run(traces[i]));
        ok = ok && traces[i].audits_passed();
        for (const std::string& f : traces[i].audit_failures) {
            out << "AUDIT FAILURE (n " << cells[i].n << ", seed " << cells[i].seed << "): " << f << "\n";
        }
        if (!o.out_dir.empty()) {
            write_outputs(traces[i],
                          fs::path(o.out_dir) / ("n" + std::to_string(cells[i].n) + "_seed" +
                                                 std::to_string(cells[i].seed)),
                          o.format);
        }
    }
    const auto rows = summarize(digests);
    if (!o.out_dir.empty()) {
        write_file(fs::path(o.out_dir) / "metrics.csv", metrics_csv(rows));
    }
    print_metrics(rows, out);
    return ok ? kExitOk : kExitAudit;
}

int cmd_solve(const std::string& path, bool brute, bool oracle, std::uint64_t cap, std::uint64_t max_nodes,
              double time_limit_s, std::ostream& out) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open instance " + path);
    }
    const AssignmentModel model = read_instance(in);
    SolveBudget budget;
    budget.max_nodes = max_nodes;
    budget.time_limit = std::chrono::milliseconds(static_cast<std::int64_t>(time_limit_s * 1000.0));
    const OptimalAssignment result = brute ? brute_force(model, cap) : solve_exact(model, budget);

    out << std::setprecision(17);
    out << "objective " << result.objective << "\n";
    out << "stay_objective " << objective(model, stay_choice(model)) << "\n";
    out << "moved " << result.moved << "\n";
    out << "optimal " << (result.optimal ? "yes" : "no") << "\n";
    out << "method " << (brute ? "brute_force" : "branch_and_bound") << "\n";
    out << "nodes " << result.stats.nodes << "\n";
    out << "root_bound " << result.stats.root_bound << "\n";
    out << "assignment";
    for (std::size_t s : result.choice) {
        out << ' ' << s;
    }
    out << "\n";
    if (!is_feasible(model, result.choice)) {
        out << "FEASIBILITY CHECK FAILED\n";
        return kExitAudit;
    }
    if (oracle && !brute) {
        const OptimalAssignment check = brute_force(model, cap);
        out << "oracle_objective " << check.objective << "\n";
        if (check.objective != result.objective) {
            out << "ORACLE MISMATCH\n";
            return kExitAudit;
        }
    }
    return kExitOk;
}

int cmd_report(const std::vector<std::string>& paths, const std::string& out_path, std::ostream& out) {
    std::vector<RunDigest> digests;
    for (const std::string& p : paths) {
        digests.push_back(run_digest_from_json(read_file(p)));
    }
    const auto rows = summarize(digests);
    if (!out_path.empty()) {
        write_file(out_path, metrics_csv(rows));
    }
    print_metrics(rows, out);
    return kExitOk;
}

void add_run_options(CLI::App& cmd, Overrides& o, bool lists) {
    cmd.add_option("--config", o.config, "Scenario JSON file (default: built-in reference scenario)")
        ->check(CLI::ExistingFile);
    if (lists) {
        cmd.add_option("--seed", o.seeds, "Seeds, comma separated (default 1..10)")->delimiter(',');
        cmd.add_option("--n", o.targets, "Reconfiguration target counts (default 100,200,400)")->delimiter(',');
    } else {
        cmd.add_option("--seed", o.seeds, "Seed overriding the scenario file")->expected(1);
        cmd.add_option("--n", o.targets, "Reconfiguration target count (0 disables)")->expected(1);
    }
    cmd.add_option("--epsilon", o.epsilon, "Minimum S improvement for applying a plan")->check(CLI::NonNegativeNumber);
    cmd.add_option("--out", o.out_dir, "Output directory");
    cmd.add_option("--format", o.format, "Export format")->check(CLI::IsMember({"csv", "json", "all"}));
    cmd.add_flag("--oracle", o.oracle, "Cross-check small rounds by brute force");
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tiered edge/cloud placement and reconfiguration simulator", "edgereconf"};
    app.require_subcommand(1);

    auto* scenario = app.add_subcommand("scenario", "Write the built-in reference scenario as JSON");
    std::string scenario_out;
    bool force = false;
    scenario->add_option("--out", scenario_out, "Destination file")->required();
    scenario->add_flag("--force", force, "Overwrite an existing file");

    auto* run = app.add_subcommand("run", "Run one simulation");
    Overrides run_opts;
    add_run_options(*run, run_opts, false);

    auto* sweep = app.add_subcommand("sweep", "Run a grid of target counts and seeds");
    Overrides sweep_opts;
    std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
    add_run_options(*sweep, sweep_opts, true);
    sweep->add_option("--jobs", jobs, "Cells run in parallel")->check(CLI::PositiveNumber);

    auto* solve = app.add_subcommand("solve", "Solve an assignment instance file");
    std::string instance;
    bool brute = false;
    bool oracle = false;
    std::uint64_t cap = 1'000'000;
    std::uint64_t max_nodes = 10'000'000;
    double time_limit = 60.0;
    solve->add_option("instance", instance, "Instance file")->required()->check(CLI::ExistingFile);
    solve->add_flag("--brute-force", brute, "Enumerate instead of branch and bound");
    solve->add_flag("--oracle", oracle, "Cross-check the optimum by brute force");
    solve->add_option("--cap", cap, "Largest assignment space brute force will enumerate");
    solve->add_option("--max-nodes", max_nodes, "Branch-and-bound node budget")->check(CLI::PositiveNumber);
    solve->add_option("--time-limit", time_limit, "Branch-and-bound time budget in seconds")
        ->check(CLI::PositiveNumber);

    auto* report = app.add_subcommand("report", "Summarize trace JSON files");
    std::vector<std::string> traces;
    std::string report_out;
    report->add_option("traces", traces, "trace.json files")->required()->check(CLI::ExistingFile);
    report->add_option("--out", report_out, "Write the metrics CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*scenario) return cmd_scenario(scenario_out, force, out);
        if (*run) return cmd_run(run_opts, out);
        if (*sweep) {
            if (sweep->count("--n") && sweep_opts.targets.empty()) {
                throw ConfigError("--n list is empty");
            }
            return cmd_sweep(sweep_opts, jobs, out);
        }
        if (*solve) return cmd_solve(instance, brute, oracle, cap, max_nodes, time_limit, out);
        if (*report) return cmd_report(traces, report_out, out);
    } catch (const SimulationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("edgereconf");
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace edgereconf
