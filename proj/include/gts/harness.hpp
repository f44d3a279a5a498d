#ifndef GTS_HARNESS_HPP
#define GTS_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gts/config.hpp"
#include "gts/metrics.hpp"
#include "gts/optimizer.hpp"
#include "gts/problems.hpp"
#include "gts/reference_front.hpp"

namespace gts {

/// One cell of the experiment cross-product.
struct CellSpec {
    std::string problem;  // selection string as written in the config
    MatrixGroup group = MatrixGroup::Identity;
    Schedule schedule = Schedule::IrregularPi;
    int n_t = 10;
    int tau_t = 10;
    int repeat = 0;
    std::string algorithm = "nsga2";

    /// File-name-safe identifier, e.g. "GTS1_g1_regular_nt10_tt10_nsga2_r0".
    std::string key() const;
};

/// Evaluations spent in each phase of a run, counted separately.
struct EvaluationCounts {
    std::uint64_t initialization = 0;
    std::uint64_t warmup = 0;
    std::uint64_t budget = 0;
    std::uint64_t change = 0;
};

struct RunRecord {
    CellSpec cell;
    std::uint64_t seed = 0;
    MetricRecord metrics;
    std::vector<double> t_values;
    /// phi of every environment; empty for instances without time-linkage.
    std::vector<double> phi;
    EvaluationCounts counts;
    /// Non-dominated objective vectors (phi = 1) at the end of every environment.
    std::vector<std::vector<Vector>> fronts;
    double wall_seconds = 0.0;
    bool ok = true;
    std::string error;
};

using OptimizerFactory =
    std::function<std::unique_ptr<DynamicOptimizer>(const std::string& algorithm, const OptimizerConfig&)>;

/// Seed of a cell, derived from the master seed and every coordinate of the cell.
std::uint64_t cell_seed(std::uint64_t master_seed, const CellSpec& cell);

/// Problem instance of a cell under the config's D and p.
Problem cell_problem(const CellSpec& cell, const ExperimentConfig& config);

/// Executes one run: warmup at environment 0, then tau_t * T generations with a change
/// response at every boundary and a metric snapshot at the last generation of each
/// environment. Metrics always use phi = 1 objectives and reference fronts.
RunRecord run_single(const CellSpec& cell, const ExperimentConfig& config, FrontCache& cache,
                     const OptimizerFactory& factory = make_optimizer);

/// Cross-product of the config in a fixed order: problems, groups, schedules, n_t, tau_t,
/// algorithms, repeats. A selection string that fixes its group ignores `groups`.
std::vector<CellSpec> expand_cells(const ExperimentConfig& config);

/// Comma-separated key=value terms (problem, group, schedule, n_t, tau_t, repeat,
/// algorithm); a cell passes when it matches every term.
class CellFilter {
public:
    explicit CellFilter(std::string_view text = {});
    bool matches(const CellSpec& cell) const;

private:
    std::vector<std::pair<std::string, std::string>> terms_;
};

/// One row of results.csv.
struct ResultRow {
    std::string problem;
    std::string algorithm;
    int group = 1;
    std::string schedule;
    int n_t = 0;
    int tau_t = 0;
    int repeat = 0;
    double migd = 0.0;
    double mhv = 0.0;
    double mms = 0.0;
    std::string status;
    std::string error;
};

ResultRow to_row(const RunRecord& record);
void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out);
std::vector<ResultRow> read_results_csv(std::istream& in);
std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

/// DMIGD/DMHV/DMMS of one algorithm over one matrix group (group 0 = all groups).
struct AlgorithmAggregate {
    std::string algorithm;
    int group = 0;
    AggregateRecord values;
};

/// Aggregates of the successful rows: per algorithm and group, plus per algorithm over every
/// group. The configuration axis is (group, schedule, n_t, tau_t).
std::vector<AlgorithmAggregate> aggregate_rows(const std::vector<ResultRow>& rows);

struct RankRow {
    std::string metric;
    std::string algorithm;
    double mean_rank = 0.0;
    double chi_square = 0.0;
    double p_value = 1.0;
};

/// Friedman ranks of the algorithms for MIGD, MHV and MMS. Instances are the
/// (problem, group, schedule, n_t, tau_t) cells run by every algorithm; scores are means over
/// repeats. Returns nothing when fewer than two algorithms or instances are available.
std::vector<RankRow> rank_rows(const std::vector<ResultRow>& rows);

struct ExperimentOptions {
    std::optional<int> parallel;
    std::string only;
    std::ostream* log = nullptr;
};

struct ExperimentResult {
    std::vector<RunRecord> records;
    std::vector<AlgorithmAggregate> aggregates;
    std::vector<RankRow> ranks;
    std::vector<std::string> warnings;
    std::size_t failures = 0;
};

/// Runs every selected cell in a worker pool and writes results.csv, runtime.csv,
/// aggregates.csv, aggregates.json, friedman.csv and runs/<cell>.json to the output directory.
ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentOptions& options = {},
                                const OptimizerFactory& factory = make_optimizer);

/// Writes `value` with 17 significant digits.
std::string format_real(double value);

} // namespace gts

#endif
