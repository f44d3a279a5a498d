#ifndef GTS_PARETO_HPP
#define GTS_PARETO_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace gts {

using Vector = std::vector<double>;

/// Pareto dominance for minimization: a <= b everywhere and a < b somewhere.
bool dominates(std::span<const double> a, std::span<const double> b);

/// Fast non-dominated sort. Front 0 is the maximal non-dominated set; every member of
/// front r > 0 is dominated by some member of front r - 1. Indices inside a front are ascending.
std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<Vector>& points);

/// Crowding distance of each member of `front` (same order). Boundary points get +inf.
std::vector<double> crowding_distance(const std::vector<Vector>& points,
                                      std::span<const std::size_t> front);

/// Indices (ascending) of the points that no other point dominates. Exact duplicates are kept
/// once (first occurrence). O(n log n) for two and three objectives.
std::vector<std::size_t> nondominated_indices(const std::vector<Vector>& points);

/// For each objective j, the index of the point with the smallest f_j; ties go to the
/// lexicographically smallest vector, then to the lower index.
std::vector<std::size_t> extreme_indices(const std::vector<Vector>& points);

/// Per-objective (min, max) of a non-empty point set.
std::vector<std::pair<double, double>> objective_bounds(const std::vector<Vector>& points);

} // namespace gts

#endif
