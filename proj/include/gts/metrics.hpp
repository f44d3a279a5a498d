#ifndef GTS_METRICS_HPP
#define GTS_METRICS_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gts/pareto.hpp"

namespace gts {

/// Mean over `reference` of the Euclidean distance to the nearest point of `approx`.
/// Throws std::invalid_argument when either set is empty.
double igd(const std::vector<Vector>& reference, const std::vector<Vector>& approx);

struct HypervolumeResult {
    double value = 0.0;
    /// No point strictly dominated the reference point.
    bool all_outside = false;
};

/// Exact volume dominated by `points` and bounded by `z_ref` (two or three objectives).
/// Points not strictly better than z_ref in every objective are ignored.
HypervolumeResult hypervolume(const std::vector<Vector>& points, const Vector& z_ref);

/// Maps each objective to (f - min) / (max - min) using `bounds`; a zero-width range only
/// subtracts the minimum.
std::vector<Vector> normalize(const std::vector<Vector>& points,
                              const std::vector<std::pair<double, double>>& bounds);

/// Reference point coordinate used in normalized objective space.
inline constexpr double kNormalizedReference = 1.1;

/// HV of `approx` after normalizing by `bounds`, against (1.1, ..., 1.1).
HypervolumeResult normalized_hypervolume(const std::vector<Vector>& approx,
                                         const std::vector<std::pair<double, double>>& bounds);

struct Ms2Result {
    double value = 0.0;
    /// Some objective of the reference set has zero range; its ratio was taken as 0.
    bool degenerate = false;
};

/// Overlap-gated maximum spread of `approx` relative to `reference`.
Ms2Result ms2(const std::vector<Vector>& reference, const std::vector<Vector>& approx);

/// Per-environment metrics of a run and their means.
struct MetricRecord {
    std::vector<double> igd;
    std::vector<double> hv;
    std::vector<double> ms2;
    double migd = 0.0;
    double mhv = 0.0;
    double mms = 0.0;
    double runtime_seconds = 0.0;
};

/// Fills the means of the three per-step series. Throws std::invalid_argument when the
/// series are empty or of different lengths.
MetricRecord run_means(std::vector<double> igd_steps, std::vector<double> hv_steps,
                       std::vector<double> ms2_steps);

/// Run-level metrics of one (problem, configuration, repeat) cell.
struct MetricSample {
    std::string problem;
    std::string config;
    int repeat = 0;
    double migd = 0.0;
    double mhv = 0.0;
    double mms = 0.0;
};

struct AggregateRecord {
    double dmigd = 0.0;
    double dmhv = 0.0;
    double dmms = 0.0;
    std::size_t problems = 0;
    std::size_t runs = 0;
};

/// Raised by aggregate when expected repeats are missing.
class RaggedGroupsError : public std::runtime_error {
public:
    RaggedGroupsError(const std::string& what, std::vector<std::string> missing)
        : std::runtime_error(what), missing_(std::move(missing)) {}
    const std::vector<std::string>& missing() const { return missing_; }

private:
    std::vector<std::string> missing_;
};

/// Mean over repeats, then over configurations, then over problems.
///
/// With `expected_repeats`, every (problem, config) pair must contain repeats 0..R-1, and
/// every problem must contain the same configurations; otherwise RaggedGroupsError lists the
/// missing "problem/config/repeat" cells.
AggregateRecord aggregate(const std::vector<MetricSample>& samples,
                          std::optional<int> expected_repeats = std::nullopt);

enum class Direction { LowerBetter, HigherBetter };

struct FriedmanResult {
    /// ranks[i][a]: rank of algorithm a on instance i (1 = best, ties averaged).
    std::vector<std::vector<double>> ranks;
    std::vector<double> mean_ranks;
    std::vector<double> rank_sums;
    double chi_square = 0.0;
    double p_value = 1.0;
};

/// Average ranks of one row of scores (1 = best under `direction`).
std::vector<double> rank_row(const std::vector<double>& scores, Direction direction);

/// Friedman test over scores[a][i] (algorithm a, instance i), with the ties correction.
/// Requires at least two algorithms and two instances.
FriedmanResult friedman_ranks(const std::vector<std::vector<double>>& scores, Direction direction);

} // namespace gts

#endif
