#include "gts/pareto.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace gts {

bool dominates(std::span<const double> a, std::span<const double> b)
{
    bool strictly = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] > b[j]) {
            return false;
        }
        if (a[j] < b[j]) {
            strictly = true;
        }
    }
    return strictly;
}

std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<Vector>& points)
{
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> dominated_by_me(n);
    std::vector<std::size_t> domination_count(n, 0);
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(points[i], points[j])) {
                dominated_by_me[i].push_back(j);
                ++domination_count[j];
            } else if (dominates(points[j], points[i])) {
                dominated_by_me[j].push_back(i);
                ++domination_count[i];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (domination_count[i] == 0) {
            current.push_back(i);
        }
    }
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : current) {
            for (std::size_t j : dominated_by_me[i]) {
                if (--domination_count[j] == 0) {
                    next.push_back(j);
                }
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<Vector>& points,
                                      std::span<const std::size_t> front)
{
    const std::size_t size = front.size();
    std::vector<double> distance(size, 0.0);
    if (size == 0) {
        return distance;
    }
    const double inf = std::numeric_limits<double>::infinity();
    if (size <= 2) {
        std::fill(distance.begin(), distance.end(), inf);
        return distance;
    }
    const std::size_t m = points[front[0]].size();
    std::vector<std::size_t> order(size);
    for (std::size_t obj = 0; obj < m; ++obj) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return points[front[a]][obj] < points[front[b]][obj];
        });
        const double lo = points[front[order.front()]][obj];
        const double hi = points[front[order.back()]][obj];
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        if (!(hi > lo)) {
            continue;
        }
        for (std::size_t r = 1; r + 1 < size; ++r) {
            const double gap = points[front[order[r + 1]]][obj] - points[front[order[r - 1]]][obj];
            distance[order[r]] += gap / (hi - lo);
        }
    }
    return distance;
}

std::vector<std::size_t> nondominated_indices(const std::vector<Vector>& points)
{
    const std::size_t n = points.size();
    if (n == 0) {
        return {};
    }
    const std::size_t m = points[0].size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });

    std::vector<std::size_t> unique;
    unique.reserve(n);
    for (std::size_t idx : order) {
        if (unique.empty() || points[unique.back()] != points[idx]) {
            unique.push_back(idx);
        }
    }

    std::vector<std::size_t> kept;
    if (m == 1) {
        kept.push_back(unique.front());
    } else if (m == 2) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t idx : unique) {
            if (points[idx][1] < best) {
                kept.push_back(idx);
                best = points[idx][1];
            }
        }
    } else if (m == 3) {
        // Staircase over (f2, f3): keys ascending, values strictly descending.
        std::map<double, double> stairs;
        for (std::size_t idx : unique) {
            const double f2 = points[idx][1];
            const double f3 = points[idx][2];
            auto it = stairs.upper_bound(f2);
            if (it != stairs.begin() && std::prev(it)->second <= f3) {
                continue;
            }
            kept.push_back(idx);
            auto pos = stairs.lower_bound(f2);
            while (pos != stairs.end() && pos->second >= f3) {
                pos = stairs.erase(pos);
            }
            stairs[f2] = f3;
        }
    } else {
        for (std::size_t idx : unique) {
            bool dominated = false;
            for (std::size_t other : unique) {
                if (dominates(points[other], points[idx])) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) {
                kept.push_back(idx);
            }
        }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

std::vector<std::size_t> extreme_indices(const std::vector<Vector>& points)
{
    if (points.empty()) {
        throw std::invalid_argument("extreme_indices of an empty set");
    }
    const std::size_t m = points[0].size();
    std::vector<std::size_t> result(m, 0);
    for (std::size_t j = 0; j < m; ++j) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < points.size(); ++i) {
            const double a = points[i][j];
            const double b = points[best][j];
            if (a < b || (a == b && points[i] < points[best])) {
                best = i;
            }
        }
        result[j] = best;
    }
    return result;
}

std::vector<std::pair<double, double>> objective_bounds(const std::vector<Vector>& points)
{
    if (points.empty()) {
        throw std::invalid_argument("bounds of an empty point set");
    }
    std::vector<std::pair<double, double>> bounds;
    for (std::size_t j = 0; j < points[0].size(); ++j) {
        bounds.emplace_back(points[0][j], points[0][j]);
    }
    for (const auto& p : points) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            bounds[j].first = std::min(bounds[j].first, p[j]);
            bounds[j].second = std::max(bounds[j].second, p[j]);
        }
    }
    return bounds;
}

} // namespace gts
