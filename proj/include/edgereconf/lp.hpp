#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace edgereconf::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { LessEqual, Equal };

struct Row {
    std::vector<std::pair<std::size_t, double>> coefficients;  // (column, value)
    RowSense sense = RowSense::LessEqual;
    double rhs = 0.0;
};

/// minimize cost.x  subject to rows, lower <= x <= upper (lower finite).
struct Problem {
    std::vector<double> cost;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<Row> rows;

    std::size_t add_column(double c, double lo, double hi) {
        cost.push_back(c);
        lower.push_back(lo);
        upper.push_back(hi);
        return cost.size() - 1;
    }
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Solution {
    Status status = Status::IterationLimit;
    double objective = 0.0;
    std::vector<double> x;
    std::size_t iterations = 0;
};

/// Dense two-phase bounded-variable primal simplex. Dantzig pricing with a
/// switch to Bland's rule while pivots stay degenerate.
Solution solve(const Problem& problem, std::size_t max_iterations = 200000);

} // namespace edgereconf::lp
