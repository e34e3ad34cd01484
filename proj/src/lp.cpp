#include "edgereconf/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace edgereconf::lp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kFeasTol = 1e-9;
constexpr std::size_t kDegenerateBeforeBland = 50;

class Tableau {
public:
    Tableau(const Problem& p) : m_(p.rows.size()) {
        const std::size_t n = p.cost.size();
        if (p.lower.size() != n || p.upper.size() != n) {
            throw std::invalid_argument("lp: bound vectors do not match cost vector");
        }
        lower_ = p.lower;
        upper_ = p.upper;
        cost2_ = p.cost;
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(lower_[j]) || upper_[j] < lower_[j]) {
                throw std::invalid_argument("lp: column bounds must be finite below and ordered");
            }
        }
        structural_ = n;
        cols_ = n;

        // Slack columns for inequality rows.
        std::vector<std::size_t> slack_of(m_, npos);
        for (std::size_t i = 0; i < m_; ++i) {
            if (p.rows[i].sense == RowSense::LessEqual) {
                slack_of[i] = add_col(0.0, 0.0, kInfinity);
            }
        }
        first_artificial_ = cols_;
        for (std::size_t i = 0; i < m_; ++i) {
            add_col(0.0, 0.0, kInfinity);
        }

        a_.assign(m_ * cols_, 0.0);
        value_.assign(cols_, 0.0);
        at_upper_.assign(cols_, false);
        for (std::size_t j = 0; j < cols_; ++j) {
            value_[j] = lower_[j];
        }
        beta_.assign(m_, 0.0);
        basis_.assign(m_, 0);
        for (std::size_t i = 0; i < m_; ++i) {
            double residual = p.rows[i].rhs;
            for (const auto& [j, v] : p.rows[i].coefficients) {
                if (j >= n) {
                    throw std::invalid_argument("lp: coefficient column out of range");
                }
                at(i, j) += v;
                residual -= v * lower_[j];
            }
            if (slack_of[i] != npos) {
                at(i, slack_of[i]) = 1.0;
            }
            // Artificial carries the row residual with a sign that makes it >= 0.
            const double sign = residual >= 0.0 ? 1.0 : -1.0;
            const std::size_t art = first_artificial_ + i;
            if (sign < 0.0) {
                for (std::size_t j = 0; j < cols_; ++j) {
                    at(i, j) = -at(i, j);
                }
            }
            at(i, art) = 1.0;
            basis_[i] = art;
            beta_[i] = std::abs(residual);
        }
        basic_.assign(cols_, false);
        for (std::size_t i = 0; i < m_; ++i) {
            basic_[basis_[i]] = true;
        }
    }

    Status run_phase(const std::vector<double>& cost, std::size_t& iterations, std::size_t max_iterations) {
        compute_reduced_costs(cost);
        std::size_t degenerate = 0;
        while (true) {
            if (iterations >= max_iterations) {
                return Status::IterationLimit;
            }
            const bool bland = degenerate >= kDegenerateBeforeBland;
            const std::size_t q = choose_entering(bland);
            if (q == npos) {
                return Status::Optimal;
            }
            ++iterations;
            const double dir = at_upper_[q] ? -1.0 : 1.0;

            // Ratio test. Basic i moves by -dir * alpha_i * theta.
            double theta = upper_[q] - lower_[q];
            std::size_t leave = npos;
            bool leave_to_upper = false;
            double best_alpha = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double alpha = at(i, q);
                if (std::abs(alpha) < kPivotTol) {
                    continue;
                }
                const double delta = -dir * alpha;
                const std::size_t b = basis_[i];
                double limit;
                bool to_upper;
                if (delta < 0.0) {
                    limit = (beta_[i] - lower_[b]) / -delta;
                    to_upper = false;
                } else {
                    if (!std::isfinite(upper_[b])) {
                        continue;
                    }
                    limit = (upper_[b] - beta_[i]) / delta;
                    to_upper = true;
                }
                limit = std::max(limit, 0.0);
                bool take;
                if (leave == npos) {
                    take = limit <= theta + kFeasTol;
                } else if (limit < theta - kFeasTol) {
                    take = true;
                } else if (limit <= theta + kFeasTol) {
                    take = bland ? b < basis_[leave] : std::abs(alpha) > best_alpha;
                } else {
                    take = false;
                }
                if (take) {
                    theta = std::min(theta, limit);
                    leave = i;
                    leave_to_upper = to_upper;
                    best_alpha = std::abs(alpha);
                }
            }
            if (!std::isfinite(theta)) {
                return Status::Unbounded;
            }
            degenerate = theta <= kFeasTol ? degenerate + 1 : 0;

            for (std::size_t i = 0; i < m_; ++i) {
                beta_[i] -= dir * at(i, q) * theta;
            }
            if (leave == npos) {
                at_upper_[q] = !at_upper_[q];
                value_[q] = at_upper_[q] ? upper_[q] : lower_[q];
                continue;
            }
            const std::size_t out = basis_[leave];
            const double entering_value = value_[q] + dir * theta;
            pivot(leave, q);
            basic_[out] = false;
            basic_[q] = true;
            basis_[leave] = q;
            beta_[leave] = entering_value;
            at_upper_[out] = leave_to_upper;
            value_[out] = leave_to_upper ? upper_[out] : lower_[out];
        }
    }

    Solution solve(std::size_t max_iterations) {
        Solution sol;
        std::vector<double> phase1(cols_, 0.0);
        for (std::size_t j = first_artificial_; j < cols_; ++j) {
            phase1[j] = 1.0;
        }
        Status st = run_phase(phase1, sol.iterations, max_iterations);
        if (st == Status::IterationLimit) {
            sol.status = st;
            return sol;
        }
        double infeasibility = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] >= first_artificial_) {
                infeasibility += beta_[i];
            }
        }
        if (infeasibility > 1e-7) {
            sol.status = Status::Infeasible;
            return sol;
        }
        // Artificials are pinned to zero for phase 2.
        for (std::size_t j = first_artificial_; j < cols_; ++j) {
            upper_[j] = 0.0;
            if (!basic_[j]) {
                at_upper_[j] = false;
                value_[j] = 0.0;
            }
        }
        std::vector<double> phase2(cols_, 0.0);
        std::copy(cost2_.begin(), cost2_.end(), phase2.begin());
        st = run_phase(phase2, sol.iterations, max_iterations);
        sol.status = st;
        if (st != Status::Optimal) {
            return sol;
        }
        std::vector<double> x(value_);
        for (std::size_t i = 0; i < m_; ++i) {
            x[basis_[i]] = beta_[i];
        }
        x.resize(structural_);
        double obj = 0.0;
        for (std::size_t j = 0; j < structural_; ++j) {
            obj += cost2_[j] * x[j];
        }
        sol.x = std::move(x);
        sol.objective = obj;
        return sol;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t add_col(double c, double lo, double hi) {
        cost2_.push_back(c);
        lower_.push_back(lo);
        upper_.push_back(hi);
        return cols_++;
    }

    double& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    void compute_reduced_costs(const std::vector<double>& cost) {
        d_ = cost;
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = cost[basis_[i]];
            if (cb == 0.0) {
                continue;
            }
            const double* row = &a_[i * cols_];
            for (std::size_t j = 0; j < cols_; ++j) {
                d_[j] -= cb * row[j];
            }
        }
    }

    std::size_t choose_entering(bool bland) const {
        std::size_t best = npos;
        double best_score = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (basic_[j] || upper_[j] - lower_[j] <= 0.0) {
                continue;
            }
            const double dj = d_[j];
            const bool eligible = at_upper_[j] ? dj > kCostTol : dj < -kCostTol;
            if (!eligible) {
                continue;
            }
            if (bland) {
                return j;
            }
            if (std::abs(dj) > best_score) {
                best_score = std::abs(dj);
                best = j;
            }
        }
        return best;
    }

    void pivot(std::size_t r, std::size_t q) {
        double* prow = &a_[r * cols_];
        const double inv = 1.0 / prow[q];
        for (std::size_t j = 0; j < cols_; ++j) {
            prow[j] *= inv;
        }
        prow[q] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) {
                continue;
            }
            double* row = &a_[i * cols_];
            const double f = row[q];
            if (f == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < cols_; ++j) {
                row[j] -= f * prow[j];
            }
            row[q] = 0.0;
        }
        const double fd = d_[q];
        if (fd != 0.0) {
            for (std::size_t j = 0; j < cols_; ++j) {
                d_[j] -= fd * prow[j];
            }
            d_[q] = 0.0;
        }
    }

    std::size_t m_;
    std::size_t cols_ = 0;
    std::size_t structural_ = 0;
    std::size_t first_artificial_ = 0;
    std::vector<double> cost2_, lower_, upper_;
    std::vector<double> a_;
    std::vector<double> d_;
    std::vector<double> value_;
    std::vector<bool> at_upper_;
    std::vector<bool> basic_;
    std::vector<double> beta_;
    std::vector<std::size_t> basis_;
};

} // namespace

Solution solve(const Problem& problem, std::size_t max_iterations) {
    Tableau t(problem);
    return t.solve(max_iterations);
}

} // namespace edgereconf::lp
