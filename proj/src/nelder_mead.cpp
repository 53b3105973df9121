#include "hitfit/nelder_mead.hpp"

#include "hitfit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace hitfit {

namespace {

void project(std::vector<double>& x, std::span<const Interval> bounds) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::clamp(x[i], bounds[i].lo, bounds[i].hi);
    }
}

} // namespace

SimplexResult minimize_simplex(const std::function<double(std::span<const double>)>& objective,
                               std::span<const double> start, std::span<const Interval> bounds,
                               const SimplexOptions& options) {
    const std::size_t n = start.size();
    if (n == 0) {
        throw InvalidArgument("simplex search needs at least one dimension");
    }
    if (bounds.size() != n) {
        throw DimensionMismatch("got " + std::to_string(bounds.size()) + " bounds for " + std::to_string(n) +
                                " dimensions");
    }
    for (const Interval& b : bounds) {
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi) {
            throw InvalidArgument("simplex bounds must be finite with lo <= hi");
        }
    }

    SimplexResult result;
    auto evaluate = [&](const std::vector<double>& x) {
        ++result.evaluations;
        return objective(x);
    };

    // n+1 vertices: the start plus one offset per coordinate.
    std::vector<std::vector<double>> xs(n + 1, std::vector<double>(start.begin(), start.end()));
    std::vector<double> fs(n + 1);
    project(xs[0], bounds);
    fs[0] = evaluate(xs[0]);
    for (std::size_t i = 1; i <= n; ++i) {
        xs[i] = xs[0];
        const Interval& b = bounds[i - 1];
        const double step = options.initial_step_fraction * (b.hi - b.lo);
        if (step > 0.0) {
            if (xs[i][i - 1] + step <= b.hi) {
                xs[i][i - 1] += step;
            } else {
                xs[i][i - 1] -= step;
            }
            project(xs[i], bounds);
        }
        fs[i] = evaluate(xs[i]);
    }

    std::vector<std::size_t> order(n + 1);
    auto sort_vertices = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    };

    std::vector<double> centroid(n), candidate(n);
    for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
        sort_vertices();
        const std::size_t best = order[0];
        const std::size_t worst = order[n];
        const std::size_t second_worst = order[n - 1];

        if (!std::isfinite(fs[best])) {
            break; // every vertex diverges; nothing to steer by
        }
        const double spread = fs[worst] - fs[best];
        if (std::isfinite(spread) &&
            2.0 * spread <= options.tolerance * (std::fabs(fs[best]) + std::fabs(fs[worst]) + 1e-300)) {
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) {
                continue;
            }
            for (std::size_t d = 0; d < n; ++d) {
                centroid[d] += xs[i][d];
            }
        }
        for (double& c : centroid) {
            c /= static_cast<double>(n);
        }

        auto blend = [&](double coeff) {
            for (std::size_t d = 0; d < n; ++d) {
                candidate[d] = centroid[d] + coeff * (centroid[d] - xs[worst][d]);
            }
            project(candidate, bounds);
        };

        blend(1.0); // reflection
        const double f_reflected = evaluate(candidate);
        if (f_reflected < fs[best]) {
            std::vector<double> reflected = candidate;
            blend(2.0); // expansion
            const double f_expanded = evaluate(candidate);
            if (f_expanded < f_reflected) {
                xs[worst] = candidate;
                fs[worst] = f_expanded;
            } else {
                xs[worst] = std::move(reflected);
                fs[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < fs[second_worst]) {
            xs[worst] = candidate;
            fs[worst] = f_reflected;
            continue;
        }
        if (f_reflected < fs[worst]) {
            blend(0.5); // outside contraction
            const double f_contracted = evaluate(candidate);
            if (f_contracted <= f_reflected) {
                xs[worst] = candidate;
                fs[worst] = f_contracted;
                continue;
            }
        } else {
            blend(-0.5); // inside contraction
            const double f_contracted = evaluate(candidate);
            if (f_contracted < fs[worst]) {
                xs[worst] = candidate;
                fs[worst] = f_contracted;
                continue;
            }
        }

        // Shrink everything toward the best vertex.
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) {
                continue;
            }
            for (std::size_t d = 0; d < n; ++d) {
                xs[i][d] = xs[best][d] + 0.5 * (xs[i][d] - xs[best][d]);
            }
            fs[i] = evaluate(xs[i]);
        }
    }

    sort_vertices();
    result.point = xs[order[0]];
    result.value = fs[order[0]];
    return result;
}

} // namespace hitfit
