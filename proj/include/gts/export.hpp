#ifndef GTS_EXPORT_HPP
#define GTS_EXPORT_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gts/harness.hpp"

namespace gts {

enum class PlotKind { BarDmigd, BarDmhv, BarDmms, BarRuntime, RankChart, PsCloud, PfCloud };

/// Accepts bar_dmigd, bar_dmhv, bar_dmms, bar_runtime, rank_chart, ps_cloud and pf_cloud.
PlotKind parse_plot_kind(std::string_view text);

struct RuntimeRow {
    std::string algorithm;
    double seconds = 0.0;
};

std::vector<RuntimeRow> read_runtime_csv(const std::filesystem::path& path);

/// bar_dmigd / bar_dmhv / bar_dmms: one row per algorithm with its aggregate over all rows.
void export_bar(PlotKind kind, const std::vector<ResultRow>& rows, std::ostream& out);

/// One row per algorithm with the mean runtime in seconds.
void export_runtime_bar(const std::vector<RuntimeRow>& rows, std::ostream& out);

/// (metric, algorithm, mean_rank) rows of the Friedman ranks.
void export_rank_chart(const std::vector<ResultRow>& rows, std::ostream& out);

/// Analytical PS (decision vectors) or PF (phi = 1 reference front) of `problem`, one block of
/// points per t.
void export_cloud(PlotKind kind, const Problem& problem, const std::vector<double>& t_values,
                  std::size_t points, std::ostream& out);

} // namespace gts

#endif
