#pragma once

#include <functional>
#include <span>
#include <vector>

namespace hitfit {

/// Closed interval [lo, hi] used as a per-coordinate box bound.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct SimplexOptions {
    int max_iterations = 500;
    /// Relative spread of simplex values at which the search stops.
    double tolerance = 1e-10;
    /// Initial vertex offset as a fraction of each bound width.
    double initial_step_fraction = 0.05;
};

struct SimplexResult {
    std::vector<double> point;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/// Derivative-free Nelder-Mead minimization constrained to a box by
/// projection: every candidate vertex is clamped into the bounds before
/// evaluation, so the objective only ever sees feasible points. The objective
/// may return +infinity (e.g. the divergence sentinel); such regions are
/// treated as uniformly worst. Never returns a point worse than the start.
SimplexResult minimize_simplex(const std::function<double(std::span<const double>)>& objective,
                               std::span<const double> start, std::span<const Interval> bounds,
                               const SimplexOptions& options = {});

} // namespace hitfit
