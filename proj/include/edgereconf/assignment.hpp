#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace edgereconf {

struct ResourceUse {
    std::size_t resource = 0;
    double amount = 0.0;
};

struct ModelCandidate {
    double cost = 0.0;
    bool is_current = false;
    std::vector<ResourceUse> usage;
};

/// Multi-resource generalized assignment: every app picks exactly one
/// candidate, the summed usage of each resource stays within its residual
/// capacity, and the summed cost is minimized. Exactly one candidate per app
/// is its current placement; the all-current assignment must be feasible.
struct AssignmentModel {
    std::vector<double> residual;
    std::vector<std::vector<ModelCandidate>> apps;
};

using Choice = std::vector<std::size_t>;

/// Throws ModelError when the invariants above do not hold.
void validate(const AssignmentModel& model);

/// Sum of chosen costs, accumulated in app order.
double objective(const AssignmentModel& model, std::span<const std::size_t> choice);
bool is_feasible(const AssignmentModel& model, std::span<const std::size_t> choice);
std::size_t moved_count(const AssignmentModel& model, std::span<const std::size_t> choice);
Choice stay_choice(const AssignmentModel& model);

struct SolveBudget {
    std::uint64_t max_nodes = 10'000'000;
    std::chrono::milliseconds time_limit{60'000};
};

struct SolveStats {
    std::uint64_t nodes = 0;
    std::uint64_t lp_solves = 0;
    std::uint64_t lp_iterations = 0;
    std::size_t components = 0;
    std::size_t binding_rows = 0;
    double root_bound = 0.0;   // lower bound on the objective
    double seconds = 0.0;      // wall clock, not deterministic
};

struct OptimalAssignment {
    Choice choice;
    double objective = 0.0;
    std::size_t moved = 0;
    bool optimal = false;
    SolveStats stats;
};

/// Branch-and-bound over the linear relaxation. Among equal-cost optima the
/// one with fewer moved apps is preferred, then lower candidate indices.
/// When the budget runs out the best incumbent is returned with
/// `optimal == false`.
OptimalAssignment solve_exact(const AssignmentModel& model, const SolveBudget& budget = {});

/// Exhaustive enumeration. Throws ModelError when the product of candidate
/// counts exceeds `cap`.
OptimalAssignment brute_force(const AssignmentModel& model, std::uint64_t cap = 1'000'000);

/// Plain-text instance format:
///
///     assignment-instance 1
///     resources <R>
///     <residual_0> ... <residual_{R-1}>
///     apps <K>
///     app <candidate count>
///     cand <cost> <current 0|1> <nnz> <resource>:<amount> ...
///
/// Lines starting with '#' are comments. Numbers use round-trip precision.
void write_instance(std::ostream& out, const AssignmentModel& model);
AssignmentModel read_instance(std::istream& in);

} // namespace edgereconf
