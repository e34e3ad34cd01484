#include "edgereconf/assignment.hpp"

#include "edgereconf/error.hpp"
#include "edgereconf/lp.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace edgereconf {

namespace {

// Per-move perturbation of the search objective. It orders equal-cost optima
// by moved count; it is far above LP round-off and far below cost gaps.
constexpr double kMovePenalty = 1e-7;
constexpr double kPruneTol = 1e-9;
constexpr double kIntegralTol = 1e-6;
// Ties in the exhaustive search are resolved at this tolerance on S.
constexpr double kTieTol = 1e-9;

double capacity_slack(double residual) { return 1e-9 * std::max(1.0, std::abs(residual)); }

double search_cost(const ModelCandidate& c) { return c.cost + (c.is_current ? 0.0 : kMovePenalty); }

std::string app_label(std::size_t k) { return "app " + std::to_string(k); }

} // namespace

void validate(const AssignmentModel& model) {
    for (std::size_t r = 0; r < model.residual.size(); ++r) {
        if (!std::isfinite(model.residual[r]) || model.residual[r] < -capacity_slack(model.residual[r])) {
            throw ModelError("resource " + std::to_string(r) + " has a negative or non-finite residual");
        }
    }
    for (std::size_t k = 0; k < model.apps.size(); ++k) {
        const auto& cands = model.apps[k];
        if (cands.empty()) {
            throw ModelError(app_label(k) + " has no candidates");
        }
        std::size_t current = 0;
        for (const ModelCandidate& c : cands) {
            if (!std::isfinite(c.cost) || !(c.cost > 0.0)) {
                throw ModelError(app_label(k) + " has a non-positive or non-finite cost");
            }
            current += c.is_current ? 1 : 0;
            for (const ResourceUse& u : c.usage) {
                if (u.resource >= model.residual.size()) {
                    throw ModelError(app_label(k) + " uses unknown resource " + std::to_string(u.resource));
                }
                if (!std::isfinite(u.amount) || u.amount < 0.0) {
                    throw ModelError(app_label(k) + " has a negative or non-finite usage");
                }
            }
        }
        if (current != 1) {
            throw ModelError(app_label(k) + " must have exactly one current candidate");
        }
    }
    if (!is_feasible(model, stay_choice(model))) {
        throw ModelError("keeping every app in place violates a capacity row");
    }
}

double objective(const AssignmentModel& model, std::span<const std::size_t> choice) {
    double s = 0.0;
    for (std::size_t k = 0; k < model.apps.size(); ++k) {
        s += model.apps[k].at(choice[k]).cost;
    }
    return s;
}

bool is_feasible(const AssignmentModel& model, std::span<const std::size_t> choice) {
    if (choice.size() != model.apps.size()) {
        return false;
    }
    std::vector<double> load(model.residual.size(), 0.0);
    for (std::size_t k = 0; k < model.apps.size(); ++k) {
        if (choice[k] >= model.apps[k].size()) {
            return false;
        }
        for (const ResourceUse& u : model.apps[k][choice[k]].usage) {
            load[u.resource] += u.amount;
        }
    }
    for (std::size_t r = 0; r < load.size(); ++r) {
        if (load[r] > model.residual[r] + capacity_slack(model.residual[r])) {
            return false;
        }
    }
    return true;
}

std::size_t moved_count(const AssignmentModel& model, std::span<const std::size_t> choice) {
    std::size_t moved = 0;
    for (std::size_t k = 0; k < model.apps.size(); ++k) {
        moved += model.apps[k].at(choice[k]).is_current ? 0 : 1;
    }
    return moved;
}

Choice stay_choice(const AssignmentModel& model) {
    Choice choice(model.apps.size(), 0);
    for (std::size_t k = 0; k < model.apps.size(); ++k) {
        for (std::size_t s = 0; s < model.apps[k].size(); ++s) {
            if (model.apps[k][s].is_current) {
                choice[k] = s;
                break;
            }
        }
    }
    return choice;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

OptimalAssignment brute_force(const AssignmentModel& model, std::uint64_t cap) {
    validate(model);
    std::uint64_t product = 1;
    for (const auto& cands : model.apps) {
        if (product > cap / cands.size()) {
            throw ModelError("brute force refused: assignment space exceeds cap of " + std::to_string(cap));
        }
        product *= cands.size();
    }
    if (product > cap) {
        throw ModelError("brute force refused: assignment space exceeds cap of " + std::to_string(cap));
    }

    const std::size_t n = model.apps.size();
    OptimalAssignment best;
    best.choice = stay_choice(model);
    best.objective = objective(model, best.choice);
    best.moved = 0;
    bool have = false;

    Choice current(n, 0);
    std::vector<double> load(model.residual.size(), 0.0);
    std::uint64_t visited = 0;

    // Depth-first in lexicographic order; a later assignment only replaces
    // the best when strictly better, so ties keep the lexicographic minimum.
    auto recurse = [&](auto&& self, std::size_t k, double partial, std::size_t moved) -> void {
        if (k == n) {
            ++visited;
            const bool better = !have || partial < best.objective - kTieTol ||
                                (partial <= best.objective + kTieTol && moved < best.moved);
            if (better) {
                have = true;
                best.choice = current;
                best.objective = partial;
                best.moved = moved;
            }
            return;
        }
        for (std::size_t s = 0; s < model.apps[k].size(); ++s) {
            const ModelCandidate& c = model.apps[k][s];
            bool fits = true;
            for (const ResourceUse& u : c.usage) {
                if (load[u.resource] + u.amount > model.residual[u.resource] + capacity_slack(model.residual[u.resource])) {
                    fits = false;
                    break;
                }
            }
            if (!fits) {
                continue;
            }
            for (const ResourceUse& u : c.usage) {
                load[u.resource] += u.amount;
            }
            current[k] = s;
            self(self, k + 1, partial + c.cost, moved + (c.is_current ? 0 : 1));
            for (const ResourceUse& u : c.usage) {
                load[u.resource] -= u.amount;
            }
        }
    };
    recurse(recurse, 0, 0.0, 0);

    best.objective = objective(model, best.choice);
    best.optimal = true;
    best.stats.nodes = visited;
    best.stats.root_bound = best.objective;
    return best;
}

// ---------------------------------------------------------------------------
// Branch and bound

namespace {

using Clock = std::chrono::steady_clock;

struct Component {
    std::vector<std::size_t> apps;  // global app indices, ascending
    std::vector<std::size_t> rows;  // binding resource indices, ascending
};

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[std::max(a, b)] = std::min(a, b);
        }
    }

private:
    std::vector<std::size_t> parent_;
};

class ComponentSearch {
public:
    ComponentSearch(const AssignmentModel& model, const Component& comp, const SolveBudget& budget,
                    Clock::time_point start, SolveStats& stats)
        : model_(model), comp_(comp), budget_(budget), start_(start), stats_(stats) {
        for (std::size_t i = 0; i < comp_.rows.size(); ++i) {
            row_slot_[comp_.rows[i]] = i;
        }
    }

    /// Returns false if the budget ran out before the search finished.
    bool run(Choice& global_choice, double& root_bound) {
        const std::size_t m = comp_.apps.size();
        incumbent_.assign(m, 0);
        incumbent_f_ = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& cands = model_.apps[comp_.apps[i]];
            for (std::size_t s = 0; s < cands.size(); ++s) {
                if (cands[s].is_current) {
                    incumbent_[i] = s;
                    incumbent_f_ += search_cost(cands[s]);
                }
            }
        }

        std::vector<std::vector<int>> stack;
        stack.emplace_back(m, -1);
        bool first = true;
        bool complete = true;
        while (!stack.empty()) {
            if (stats_.nodes >= budget_.max_nodes || Clock::now() - start_ > budget_.time_limit) {
                complete = false;
                break;
            }
            std::vector<int> fixed = std::move(stack.back());
            stack.pop_back();
            ++stats_.nodes;
            double bound = 0.0;
            expand(fixed, stack, bound);
            if (first) {
                root_bound = std::min(bound, incumbent_f_);
                first = false;
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            global_choice[comp_.apps[i]] = incumbent_[i];
        }
        return complete;
    }

private:
    // Processes one node; pushes children (if any) and reports its bound.
    void expand(const std::vector<int>& fixed, std::vector<std::vector<int>>& stack, double& bound_out) {
        const std::size_t m = comp_.apps.size();
        bound_out = std::numeric_limits<double>::infinity();

        std::vector<double> residual(comp_.rows.size());
        for (std::size_t i = 0; i < comp_.rows.size(); ++i) {
            residual[i] = model_.residual[comp_.rows[i]];
        }
        double fixed_f = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (fixed[i] < 0) {
                continue;
            }
            const ModelCandidate& c = model_.apps[comp_.apps[i]][static_cast<std::size_t>(fixed[i])];
            fixed_f += search_cost(c);
            for (const ResourceUse& u : c.usage) {
                if (auto it = row_slot_.find(u.resource); it != row_slot_.end()) {
                    residual[it->second] -= u.amount;
                }
            }
        }
        for (std::size_t i = 0; i < residual.size(); ++i) {
            if (residual[i] < -capacity_slack(model_.residual[comp_.rows[i]])) {
                return;
            }
        }

        // Candidates that cannot fit on their own are dropped.
        std::vector<std::vector<std::size_t>> viable(m);
        double relaxed = fixed_f;
        for (std::size_t i = 0; i < m; ++i) {
            if (fixed[i] >= 0) {
                continue;
            }
            const auto& cands = model_.apps[comp_.apps[i]];
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t s = 0; s < cands.size(); ++s) {
                if (fits_alone(cands[s], residual)) {
                    viable[i].push_back(s);
                    best = std::min(best, search_cost(cands[s]));
                }
            }
            if (viable[i].empty()) {
                return;
            }
            relaxed += best;
        }
        bound_out = relaxed;
        if (relaxed >= incumbent_f_ - kPruneTol) {
            return;
        }

        // Linear relaxation over the free apps.
        lp::Problem problem;
        std::vector<std::pair<std::size_t, std::size_t>> column_of;  // (local app, candidate)
        std::vector<lp::Row> rows(comp_.rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            rows[i].sense = lp::RowSense::LessEqual;
            rows[i].rhs = std::max(0.0, residual[i]);
        }
        std::vector<lp::Row> assign_rows;
        for (std::size_t i = 0; i < m; ++i) {
            if (fixed[i] >= 0) {
                continue;
            }
            lp::Row row;
            row.sense = lp::RowSense::Equal;
            row.rhs = 1.0;
            for (std::size_t s : viable[i]) {
                const ModelCandidate& c = model_.apps[comp_.apps[i]][s];
                const std::size_t col = problem.add_column(search_cost(c), 0.0, 1.0);
                column_of.emplace_back(i, s);
                row.coefficients.emplace_back(col, 1.0);
                for (const ResourceUse& u : c.usage) {
                    if (auto it = row_slot_.find(u.resource); it != row_slot_.end() && u.amount != 0.0) {
                        rows[it->second].coefficients.emplace_back(col, u.amount);
                    }
                }
            }
            assign_rows.push_back(std::move(row));
        }
        for (auto& r : assign_rows) {
            problem.rows.push_back(std::move(r));
        }
        for (auto& r : rows) {
            if (!r.coefficients.empty()) {
                problem.rows.push_back(std::move(r));
            }
        }

        std::vector<int> fixed_child = fixed;
        const lp::Solution sol = lp::solve(problem);
        ++stats_.lp_solves;
        stats_.lp_iterations += sol.iterations;
        if (sol.status == lp::Status::Infeasible) {
            bound_out = std::numeric_limits<double>::infinity();
            return;
        }

        std::vector<double> value_of(column_of.size(), 0.0);
        std::size_t branch = m;
        if (sol.status == lp::Status::Optimal) {
            const double lb = fixed_f + sol.objective;
            bound_out = std::max(relaxed, lb);
            if (bound_out >= incumbent_f_ - kPruneTol) {
                return;
            }
            value_of = sol.x;
            // Integral relaxation: a complete assignment.
            std::vector<int> rounded = fixed;
            std::vector<bool> integral(m, true);
            bool all_integral = true;
            for (std::size_t i = 0; i < m; ++i) {
                if (fixed[i] < 0) {
                    integral[i] = false;
                }
            }
            for (std::size_t col = 0; col < column_of.size(); ++col) {
                if (value_of[col] >= 1.0 - kIntegralTol) {
                    rounded[column_of[col].first] = static_cast<int>(column_of[col].second);
                    integral[column_of[col].first] = true;
                }
            }
            for (std::size_t i = 0; i < m; ++i) {
                all_integral = all_integral && integral[i];
            }
            if (all_integral && consider(rounded)) {
                return;
            }
            // Fractional app with the largest cost spread.
            double widest = -1.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (fixed[i] >= 0 || (integral[i] && !all_integral)) {
                    continue;
                }
                const double s = spread(i, viable[i]);
                if (s > widest) {
                    widest = s;
                    branch = i;
                }
            }
        }
        if (branch == m) {
            // No usable relaxation: branch on the widest free app.
            double widest = -1.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (fixed[i] < 0 && spread(i, viable[i]) > widest) {
                    widest = spread(i, viable[i]);
                    branch = i;
                }
            }
        }
        if (branch == m) {
            return;
        }

        // Children in order of relaxation weight, then cost, then index.
        std::vector<std::pair<double, std::size_t>> order;
        for (std::size_t s : viable[branch]) {
            double w = 0.0;
            for (std::size_t col = 0; col < column_of.size(); ++col) {
                if (column_of[col].first == branch && column_of[col].second == s) {
                    w = value_of[col];
                }
            }
            order.emplace_back(w, s);
        }
        const auto& cands = model_.apps[comp_.apps[branch]];
        std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            const double ca = search_cost(cands[a.second]);
            const double cb = search_cost(cands[b.second]);
            if (ca != cb) return ca < cb;
            return a.second < b.second;
        });
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            fixed_child[branch] = static_cast<int>(it->second);
            stack.push_back(fixed_child);
        }
    }

    bool fits_alone(const ModelCandidate& c, const std::vector<double>& residual) const {
        for (const ResourceUse& u : c.usage) {
            if (auto it = row_slot_.find(u.resource); it != row_slot_.end()) {
                if (u.amount > residual[it->second] + capacity_slack(model_.residual[u.resource])) {
                    return false;
                }
            }
        }
        return true;
    }

    double spread(std::size_t i, const std::vector<std::size_t>& viable) const {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t s : viable) {
            const double c = search_cost(model_.apps[comp_.apps[i]][s]);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        return hi - lo;
    }

    // Accepts a complete assignment if it is feasible and improves the
    // incumbent. Returns false if it was rejected as infeasible.
    bool consider(const std::vector<int>& assignment) {
        std::vector<double> load(comp_.rows.size(), 0.0);
        double f = 0.0;
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            const ModelCandidate& c = model_.apps[comp_.apps[i]][static_cast<std::size_t>(assignment[i])];
            f += search_cost(c);
            for (const ResourceUse& u : c.usage) {
                if (auto it = row_slot_.find(u.resource); it != row_slot_.end()) {
                    load[it->second] += u.amount;
                }
            }
        }
        for (std::size_t r = 0; r < load.size(); ++r) {
            const double cap = model_.residual[comp_.rows[r]];
            if (load[r] > cap + capacity_slack(cap)) {
                return false;
            }
        }
        if (f < incumbent_f_ - kPruneTol) {
            incumbent_f_ = f;
            for (std::size_t i = 0; i < assignment.size(); ++i) {
                incumbent_[i] = static_cast<std::size_t>(assignment[i]);
            }
        }
        return true;
    }

    const AssignmentModel& model_;
    const Component& comp_;
    const SolveBudget& budget_;
    Clock::time_point start_;
    SolveStats& stats_;
    std::map<std::size_t, std::size_t> row_slot_;
    Choice incumbent_;
    double incumbent_f_ = 0.0;
};

// Moves each app to a lower-indexed candidate with identical cost and moved
// status whenever capacities allow.
// Moves equal-cost optima towards the lexicographically smallest choice:
// an app takes a lower-index candidate of identical cost, or trades places
// with a later app when the two costs are swapped exactly and the move count
// is unchanged.
void prefer_lower_indices(const AssignmentModel& model, Choice& choice) {
    const std::size_t n = model.apps.size();
    std::vector<double> load(model.residual.size(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        for (const ResourceUse& u : model.apps[k][choice[k]].usage) {
            load[u.resource] += u.amount;
        }
    }
    auto try_change = [&](std::initializer_list<std::pair<std::size_t, std::size_t>> changes) {
        std::vector<double> trial = load;
        for (auto [k, s] : changes) {
            for (const ResourceUse& u : model.apps[k][choice[k]].usage) {
                trial[u.resource] -= u.amount;
            }
            for (const ResourceUse& u : model.apps[k][s].usage) {
                trial[u.resource] += u.amount;
            }
        }
        for (auto [k, s] : changes) {
            for (const ResourceUse& u : model.apps[k][s].usage) {
                if (trial[u.resource] > model.residual[u.resource] + capacity_slack(model.residual[u.resource])) {
                    return false;
                }
            }
        }
        load = std::move(trial);
        for (auto [k, s] : changes) {
            choice[k] = s;
        }
        return true;
    };

    for (std::size_t k = 0; k < n; ++k) {
        bool improved = true;
        while (improved) {
            improved = false;
            const ModelCandidate& now = model.apps[k][choice[k]];
            for (std::size_t s = 0; s < choice[k] && !improved; ++s) {
                const ModelCandidate& alt = model.apps[k][s];
                if (alt.cost == now.cost && alt.is_current == now.is_current) {
                    improved = try_change({{k, s}});
                    continue;
                }
                for (std::size_t j = k + 1; j < n && !improved; ++j) {
                    const ModelCandidate& other = model.apps[j][choice[j]];
                    if (other.cost != alt.cost || other.is_current != alt.is_current) {
                        continue;
                    }
                    for (std::size_t t = 0; t < model.apps[j].size() && !improved; ++t) {
                        const ModelCandidate& swap = model.apps[j][t];
                        if (t != choice[j] && swap.cost == now.cost && swap.is_current == now.is_current) {
                            improved = try_change({{k, s}, {j, t}});
                        }
                    }
                }
            }
        }
    }
}

} // namespace

OptimalAssignment solve_exact(const AssignmentModel& model, const SolveBudget& budget) {
    validate(model);
    const auto start = Clock::now();
    const std::size_t n = model.apps.size();
    const std::size_t rcount = model.residual.size();

    OptimalAssignment result;
    result.choice = stay_choice(model);
    result.optimal = true;

    // Rows that no combination of choices can overload are dropped.
    std::vector<double> worst(rcount, 0.0);
    for (const auto& cands : model.apps) {
        std::map<std::size_t, double> peak;
        for (const ModelCandidate& c : cands) {
            for (const ResourceUse& u : c.usage) {
                peak[u.resource] = std::max(peak[u.resource], u.amount);
            }
        }
        for (const auto& [r, a] : peak) {
            worst[r] += a;
        }
    }
    std::vector<bool> binding(rcount, false);
    for (std::size_t r = 0; r < rcount; ++r) {
        binding[r] = worst[r] > model.residual[r] + capacity_slack(model.residual[r]);
        result.stats.binding_rows += binding[r] ? 1 : 0;
    }

    DisjointSets sets(n);
    std::vector<std::size_t> first_user(rcount, n);
    std::vector<bool> coupled(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        for (const ModelCandidate& c : model.apps[k]) {
            for (const ResourceUse& u : c.usage) {
                if (!binding[u.resource]) {
                    continue;
                }
                coupled[k] = true;
                if (first_user[u.resource] == n) {
                    first_user[u.resource] = k;
                } else {
                    sets.unite(first_user[u.resource], k);
                }
            }
        }
    }

    double root_bound = 0.0;
    std::map<std::size_t, Component> components;
    for (std::size_t k = 0; k < n; ++k) {
        if (!coupled[k]) {
            const auto& cands = model.apps[k];
            std::size_t best = 0;
            for (std::size_t s = 1; s < cands.size(); ++s) {
                if (search_cost(cands[s]) < search_cost(cands[best])) {
                    best = s;
                }
            }
            result.choice[k] = best;
            double cheapest = cands[0].cost;
            for (const ModelCandidate& c : cands) {
                cheapest = std::min(cheapest, c.cost);
            }
            root_bound += cheapest;
            continue;
        }
        components[sets.find(k)].apps.push_back(k);
    }
    for (std::size_t r = 0; r < rcount; ++r) {
        if (binding[r] && first_user[r] != n) {
            components[sets.find(first_user[r])].rows.push_back(r);
        }
    }
    result.stats.components = components.size();

    for (const auto& [root, comp] : components) {
        double comp_bound = 0.0;
        ComponentSearch search(model, comp, budget, start, result.stats);
        if (!search.run(result.choice, comp_bound)) {
            result.optimal = false;
        }
        root_bound += comp_bound - kMovePenalty * static_cast<double>(comp.apps.size());
    }

    prefer_lower_indices(model, result.choice);
    result.objective = objective(model, result.choice);
    result.moved = moved_count(model, result.choice);
    result.stats.root_bound = root_bound;
    result.stats.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
}

// ---------------------------------------------------------------------------
// Instance files

void write_instance(std::ostream& out, const AssignmentModel& model) {
    std::ostringstream s;
    s.precision(17);
    s << "assignment-instance 1\n";
    s << "resources " << model.residual.size() << "\n";
    for (std::size_t r = 0; r < model.residual.size(); ++r) {
        s << (r ? " " : "") << model.residual[r];
    }
    s << "\napps " << model.apps.size() << "\n";
    for (const auto& cands : model.apps) {
        s << "app " << cands.size() << "\n";
        for (const ModelCandidate& c : cands) {
            s << "cand " << c.cost << ' ' << (c.is_current ? 1 : 0) << ' ' << c.usage.size();
            for (const ResourceUse& u : c.usage) {
                s << ' ' << u.resource << ':' << u.amount;
            }
            s << "\n";
        }
    }
    out << s.str();
}

namespace {

class InstanceReader {
public:
    explicit InstanceReader(std::istream& in) {
        std::string line;
        while (std::getline(in, line)) {
            if (const auto hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            std::istringstream ls(line);
            std::string tok;
            while (ls >> tok) {
                tokens_.push_back(tok);
            }
        }
    }

    std::string word() {
        if (pos_ >= tokens_.size()) {
            throw ModelError("instance: unexpected end of input");
        }
        return tokens_[pos_++];
    }

    void expect(const std::string& keyword) {
        const std::string got = word();
        if (got != keyword) {
            throw ModelError("instance: expected '" + keyword + "', found '" + got + "'");
        }
    }

    double number() {
        const std::string tok = word();
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) {
                throw std::invalid_argument(tok);
            }
            return v;
        } catch (const std::exception&) {
            throw ModelError("instance: '" + tok + "' is not a number");
        }
    }

    std::size_t count() {
        const double v = number();
        if (v < 0 || v != std::floor(v)) {
            throw ModelError("instance: expected a non-negative integer");
        }
        return static_cast<std::size_t>(v);
    }

    bool done() const { return pos_ >= tokens_.size(); }

private:
    std::vector<std::string> tokens_;
    std::size_t pos_ = 0;
};

} // namespace

AssignmentModel read_instance(std::istream& in) {
    InstanceReader r(in);
    r.expect("assignment-instance");
    if (r.count() != 1) {
        throw ModelError("instance: unsupported format version");
    }
    AssignmentModel model;
    r.expect("resources");
    model.residual.resize(r.count());
    for (double& v : model.residual) {
        v = r.number();
    }
    r.expect("apps");
    model.apps.resize(r.count());
    for (auto& cands : model.apps) {
        r.expect("app");
        cands.resize(r.count());
        for (ModelCandidate& c : cands) {
            r.expect("cand");
            c.cost = r.number();
            c.is_current = r.count() != 0;
            c.usage.resize(r.count());
            for (ResourceUse& u : c.usage) {
                const std::string tok = r.word();
                const auto colon = tok.find(':');
                if (colon == std::string::npos) {
                    throw ModelError("instance: usage entry '" + tok + "' is not resource:amount");
                }
                try {
                    u.resource = static_cast<std::size_t>(std::stoul(tok.substr(0, colon)));
                    u.amount = std::stod(tok.substr(colon + 1));
                } catch (const std::exception&) {
                    throw ModelError("instance: malformed usage entry '" + tok + "'");
                }
            }
        }
    }
    if (!r.done()) {
        throw ModelError("instance: trailing tokens after the last app");
    }
    validate(model);
    return model;
}

} // namespace edgereconf
