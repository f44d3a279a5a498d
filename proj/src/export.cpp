#include "gts/export.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gts {

PlotKind parse_plot_kind(std::string_view text)
{
    static const std::map<std::string_view, PlotKind> kinds{
        {"bar_dmigd", PlotKind::BarDmigd}, {"bar_dmhv", PlotKind::BarDmhv},
        {"bar_dmms", PlotKind::BarDmms},   {"bar_runtime", PlotKind::BarRuntime},
        {"rank_chart", PlotKind::RankChart}, {"ps_cloud", PlotKind::PsCloud},
        {"pf_cloud", PlotKind::PfCloud}};
    const auto it = kinds.find(text);
    if (it == kinds.end()) {
        throw std::invalid_argument("unknown plot kind '" + std::string(text) + "'");
    }
    return it->second;
}

std::vector<RuntimeRow> read_runtime_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::string line;
    std::getline(in, line);
    std::vector<RuntimeRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        // The problem column may be quoted; the trailing columns never are.
        std::vector<std::string> tail;
        std::size_t end = line.size();
        std::size_t pos = line.rfind(',');
        for (int i = 0; i < 7 && pos != std::string::npos; ++i) {
            tail.push_back(line.substr(pos + 1, end - pos - 1));
            end = pos;
            pos = pos == 0 ? std::string::npos : line.rfind(',', pos - 1);
        }
        if (tail.size() != 7) {
            throw std::runtime_error("malformed runtime CSV line: " + line);
        }
        rows.push_back({tail[6], std::stod(tail[0])});
    }
    return rows;
}

void export_bar(PlotKind kind, const std::vector<ResultRow>& rows, std::ostream& out)
{
    const char* column = kind == PlotKind::BarDmigd ? "dmigd" : kind == PlotKind::BarDmhv ? "dmhv" : "dmms";
    out << "# " << column << " per algorithm: triple-nested mean over repeats, configurations "
        << "(group, schedule, n_t, tau_t) and problems\n";
    out << "algorithm," << column << '\n';
    for (const auto& a : aggregate_rows(rows)) {
        if (a.group != 0) {
            continue;
        }
        const double v = kind == PlotKind::BarDmigd ? a.values.dmigd
                         : kind == PlotKind::BarDmhv ? a.values.dmhv
                                                     : a.values.dmms;
        out << a.algorithm << ',' << format_real(v) << '\n';
    }
}

void export_runtime_bar(const std::vector<RuntimeRow>& rows, std::ostream& out)
{
    std::vector<std::string> order;
    std::map<std::string, std::pair<double, int>> sums;
    for (const auto& r : rows) {
        if (!sums.contains(r.algorithm)) {
            order.push_back(r.algorithm);
        }
        auto& s = sums[r.algorithm];
        s.first += r.seconds;
        ++s.second;
    }
    out << "# mean wall-clock seconds per run\n";
    out << "algorithm,runtime_seconds\n";
    for (const auto& a : order) {
        out << a << ',' << format_real(sums[a].first / sums[a].second) << '\n';
    }
}

void export_rank_chart(const std::vector<ResultRow>& rows, std::ostream& out)
{
    out << "# Friedman mean rank per metric and algorithm (1 = best)\n";
    out << "metric,algorithm,mean_rank\n";
    for (const auto& r : rank_rows(rows)) {
        out << r.metric << ',' << r.algorithm << ',' << format_real(r.mean_rank) << '\n';
    }
}

void export_cloud(PlotKind kind, const Problem& problem, const std::vector<double>& t_values,
                  std::size_t points, std::ostream& out)
{
    if (kind != PlotKind::PsCloud && kind != PlotKind::PfCloud) {
        throw std::invalid_argument("export_cloud needs ps_cloud or pf_cloud");
    }
    const bool ps = kind == PlotKind::PsCloud;
    const std::size_t width = ps ? problem.dimension() : problem.objective_count();
    out << "# " << (ps ? "Pareto set samples" : "Pareto front samples (phi = 1)") << " of "
        << problem.selection() << ", one row per point\n";
    out << 't';
    for (std::size_t j = 0; j < width; ++j) {
        out << ',' << (ps ? 'x' : 'f') << (j + 1);
    }
    out << '\n';
    for (double t : t_values) {
        const auto front = sample_pf(problem, t, points);
        const auto& data = ps ? front.decisions : front.points;
        for (const auto& p : data) {
            out << format_real(t);
            for (double v : p) {
                out << ',' << format_real(v);
            }
            out << '\n';
        }
    }
}

} // namespace gts
