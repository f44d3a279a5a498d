// Command-line front end: run experiments, dump reference fronts, export plot data, rank.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gts/config.hpp"
#include "gts/export.hpp"
#include "gts/harness.hpp"
#include "gts/problems.hpp"
#include "gts/reference_front.hpp"

namespace {

constexpr int kPartialFailure = 2;

gts::Problem build_problem(const std::string& selection, std::size_t dimension, int group)
{
    gts::ProblemOptions options;
    options.dimension = dimension;
    options.group = gts::group_from_index(group);
    return gts::make_problem(selection, options);
}

void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"GTS dynamic multi-objective benchmark toolkit"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    std::string config_path;
    int parallel = 0;
    std::string only;
    std::string output_dir;
    run->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    run->add_option("--parallel", parallel, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);
    run->add_option("--only", only, "Cell filter, e.g. problem=GTS1,group=2,repeat=0");
    run->add_option("--output-dir", output_dir, "Output directory (overrides the config)");

    auto* fronts = app.add_subcommand("fronts", "Write a reference front (CSV plus JSON sidecar)");
    std::string problem_sel;
    double t = 0.0;
    std::size_t n = 0;
    std::string out_path;
    std::size_t dimension = 10;
    int group = 1;
    fronts->add_option("--problem", problem_sel, "Problem selection, e.g. GTS4 or GTS6:group2")->required();
    fronts->add_option("--t", t, "Time value")->required();
    fronts->add_option("--n", n, "Number of points (default 1500 or 2500)");
    fronts->add_option("--out", out_path, "Output file (.csv); the sidecar gets .json")->required();
    fronts->add_option("--D", dimension, "Decision-space dimension")->capture_default_str();
    fronts->add_option("--group", group, "Matrix group")->check(CLI::Range(1, 3))->capture_default_str();

    auto* plot = app.add_subcommand("plot-data", "Export plot-ready CSV data");
    std::string kind;
    std::string input;
    std::vector<double> t_values{0.0};
    std::size_t cloud_n = 200;
    std::string plot_out;
    std::string plot_problem = "GTS1";
    std::size_t plot_dimension = 10;
    int plot_group = 1;
    plot->add_option("--kind", kind,
                     "bar_dmigd | bar_dmhv | bar_dmms | bar_runtime | rank_chart | ps_cloud | pf_cloud")
        ->required();
    plot->add_option("--input", input, "results.csv (runtime.csv is read from the same directory)");
    plot->add_option("--problem", plot_problem, "Problem for ps_cloud / pf_cloud")->capture_default_str();
    plot->add_option("--t", t_values, "Time values for ps_cloud / pf_cloud")->delimiter(',');
    plot->add_option("--n", cloud_n, "Points per time value")->capture_default_str();
    plot->add_option("--D", plot_dimension, "Decision-space dimension")->capture_default_str();
    plot->add_option("--group", plot_group, "Matrix group")->check(CLI::Range(1, 3))->capture_default_str();
    plot->add_option("--out", plot_out, "Output file (stdout when omitted)");

    auto* rank = app.add_subcommand("rank", "Friedman ranks and aggregates of a results CSV");
    std::string rank_input;
    rank->add_option("--input", rank_input, "results.csv")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto config = gts::load_config(config_path);
            if (!output_dir.empty()) {
                config.output_dir = output_dir;
            }
            gts::ExperimentOptions options;
            if (parallel > 0) {
                options.parallel = parallel;
            }
            options.only = only;
            options.log = &std::cerr;
            const auto result = gts::run_experiment(config, options);
            for (const auto& w : result.warnings) {
                std::cerr << "warning: " << w << '\n';
            }
            std::cout << "wrote " << result.records.size() << " runs to " << config.output_dir.string() << '\n';
            for (const auto& a : result.aggregates) {
                if (a.group == 0) {
                    std::cout << a.algorithm << ": DMIGD " << gts::format_real(a.values.dmigd) << "  DMHV "
                              << gts::format_real(a.values.dmhv) << "  DMMS " << gts::format_real(a.values.dmms)
                              << '\n';
                }
            }
            return result.failures > 0 ? kPartialFailure : 0;
        }

        if (*fronts) {
            const auto problem = build_problem(problem_sel, dimension, group);
            if (n == 0) {
                n = gts::default_reference_size(problem.objective_count());
            }
            const auto front = gts::sample_pf(problem, t, n);
            std::filesystem::path stem(out_path);
            if (stem.extension() == ".csv") {
                stem.replace_extension();
            }
            gts::write_front_files(front, problem, stem);
            std::cout << "wrote " << front.size() << " points of " << problem.selection() << " at t = "
                      << gts::format_real(t) << " to " << stem.string() << ".csv"
                      << (front.degenerate ? " (fewer non-dominated candidates than requested)" : "") << '\n';
            return 0;
        }

        if (*plot) {
            const auto plot_kind = gts::parse_plot_kind(kind);
            std::ostringstream text;
            if (plot_kind == gts::PlotKind::PsCloud || plot_kind == gts::PlotKind::PfCloud) {
                gts::export_cloud(plot_kind, build_problem(plot_problem, plot_dimension, plot_group), t_values,
                                  cloud_n, text);
            } else {
                if (input.empty()) {
                    throw std::invalid_argument("--input results.csv is required for --kind " + kind);
                }
                if (plot_kind == gts::PlotKind::BarRuntime) {
                    const auto runtime = std::filesystem::path(input).parent_path() / "runtime.csv";
                    gts::export_runtime_bar(gts::read_runtime_csv(runtime), text);
                } else if (plot_kind == gts::PlotKind::RankChart) {
                    gts::export_rank_chart(gts::read_results_csv(input), text);
                } else {
                    gts::export_bar(plot_kind, gts::read_results_csv(input), text);
                }
            }
            emit(plot_out, text.str());
            return 0;
        }

        if (*rank) {
            const auto rows = gts::read_results_csv(rank_input);
            const auto ranks = gts::rank_rows(rows);
            if (ranks.empty()) {
                std::cout << "Friedman ranks need at least two algorithms sharing at least two instances\n";
            } else {
                std::printf("%-6s %-12s %10s %12s %12s\n", "metric", "algorithm", "mean_rank", "chi_square",
                            "p_value");
                for (const auto& r : ranks) {
                    std::printf("%-6s %-12s %10.4f %12.4f %12.4g\n", r.metric.c_str(), r.algorithm.c_str(),
                                r.mean_rank, r.chi_square, r.p_value);
                }
            }
            std::printf("\n%-12s %-5s %14s %14s %14s\n", "algorithm", "group", "DMIGD", "DMHV", "DMMS");
            for (const auto& a : gts::aggregate_rows(rows)) {
                const std::string g = a.group == 0 ? "all" : std::to_string(a.group);
                std::printf("%-12s %-5s %14.6g %14.6g %14.6g\n", a.algorithm.c_str(), g.c_str(), a.values.dmigd,
                            a.values.dmhv, a.values.dmms);
            }
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
