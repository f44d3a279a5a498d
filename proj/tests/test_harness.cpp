#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gts/export.hpp"
#include "gts/harness.hpp"

using namespace gts;

namespace {

ExperimentConfig small_config(const std::string& name)
{
    ExperimentConfig c;
    c.problems = {"GTS1"};
    c.groups = {1};
    c.schedules = {Schedule::Regular};
    c.n_t_values = {10};
    c.tau_t_values = {5};
    c.environments = 2;
    c.warmup_generations = 3;
    c.repeats = 1;
    c.dimension = 6;
    c.optimizer.pop_size = 10;
    c.ref_front_n2 = 100;
    c.ref_front_n3 = 100;
    c.output_dir = std::filesystem::temp_directory_path() / ("gts_harness_" + name);
    std::filesystem::remove_all(c.output_dir);
    return c;
}

CellSpec cell_of(const std::string& problem, int repeat = 0, const std::string& algorithm = "nsga2")
{
    CellSpec cell;
    cell.problem = problem;
    cell.schedule = Schedule::Regular;
    cell.n_t = 10;
    cell.tau_t = 5;
    cell.repeat = repeat;
    cell.algorithm = algorithm;
    return cell;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Throwing : public DynamicOptimizer {
public:
    std::string name() const override { return "broken"; }
    void initialize(const Box&, std::size_t, Evaluator&, RngStream&) override
    {
        throw std::runtime_error("initialization failed on purpose");
    }
    void step(Evaluator&, RngStream&) override {}
    void on_change(Evaluator&, RngStream&) override {}
    std::vector<Individual> final_front() const override { return {}; }
    const Population& population() const override { return pop_; }

private:
    Population pop_;
};

} // namespace

TEST_CASE("run_single loop arithmetic and evaluation accounting")
{
    auto config = small_config("single");
    FrontCache cache;
    const auto r = run_single(cell_of("GTS1"), config, cache);
    CHECK(r.ok);
    CHECK(r.metrics.igd.size() == 2);
    CHECK(r.metrics.hv.size() == 2);
    CHECK(r.metrics.ms2.size() == 2);
    CHECK(r.fronts.size() == 2);
    CHECK(r.t_values == std::vector<double>{0.0, 0.1});
    CHECK(r.phi.empty());
    CHECK(r.counts.initialization == 10);
    CHECK(r.counts.warmup == 10 * 3);
    CHECK(r.counts.budget == 10 * 5 * 2);
    CHECK(r.counts.change == 10 * 1);
    CHECK(r.metrics.migd == doctest::Approx((r.metrics.igd[0] + r.metrics.igd[1]) / 2));

    config.environments = 4;
    const auto r4 = run_single(cell_of("GTS1"), config, cache);
    CHECK(r4.metrics.igd.size() == 4);
    CHECK(r4.counts.change == 10 * 3);
    CHECK(r4.counts.budget == 10 * 5 * 4);
}

TEST_CASE("linkage runs record one phi per environment")
{
    auto config = small_config("phi");
    config.environments = 3;
    FrontCache cache;
    const auto r = run_single(cell_of("GTS6"), config, cache);
    REQUIRE(r.phi.size() == 3);
    CHECK(r.phi[0] == 1.0);
    for (double phi : r.phi) {
        CHECK(phi >= 1.0);
    }
    const auto hv = run_single(cell_of("GTS1:linkage=hv"), config, cache);
    REQUIRE(hv.phi.size() == 3);
    for (double phi : hv.phi) {
        CHECK(phi >= 1.0);
        CHECK(phi <= 2.0);
    }
}

TEST_CASE("runs are deterministic per seed")
{
    const auto config = small_config("det");
    FrontCache cache;
    const auto a = run_single(cell_of("GTS9", 0), config, cache);
    const auto b = run_single(cell_of("GTS9", 0), config, cache);
    const auto c = run_single(cell_of("GTS9", 1), config, cache);
    CHECK(a.seed == b.seed);
    CHECK(a.metrics.igd == b.metrics.igd);
    CHECK(a.metrics.hv == b.metrics.hv);
    CHECK(a.fronts == b.fronts);
    CHECK(a.seed != c.seed);
    CHECK(a.metrics.igd != c.metrics.igd);
}

TEST_CASE("seeds depend on every cell coordinate")
{
    const auto base = cell_of("GTS1");
    std::vector<CellSpec> variants(7, base);
    variants[0].problem = "GTS2";
    variants[1].group = MatrixGroup::ImbalancedDiagonal;
    variants[2].schedule = Schedule::IrregularPi;
    variants[3].n_t = 5;
    variants[4].tau_t = 10;
    variants[5].repeat = 1;
    variants[6].algorithm = "random";
    for (const auto& v : variants) {
        CHECK(cell_seed(1, v) != cell_seed(1, base));
    }
    CHECK(cell_seed(2, base) != cell_seed(1, base));
}

TEST_CASE("cell expansion and keys")
{
    auto config = small_config("expand");
    config.problems = {"GTS1", "GTS3"};
    config.repeats = 2;
    CHECK(expand_cells(config).size() == 4);

    config.groups = {1, 2, 3};
    config.problems = {"GTS1", "GTS3:group2"};
    config.algorithms = {"nsga2", "random"};
    const auto cells = expand_cells(config);
    CHECK(cells.size() == (3 + 1) * 2 * 2);
    CHECK(cells[0].key() == "GTS1_g1_regular_nt10_tt5_nsga2_r0");
    CHECK(cells.back().key() == "GTS3-group2_g2_regular_nt10_tt5_random_r1");
}

TEST_CASE("cell filters")
{
    const auto cell = cell_of("GTS1", 3);
    CHECK(CellFilter("").matches(cell));
    CHECK(CellFilter("problem=GTS1").matches(cell));
    CHECK(CellFilter("problem=GTS1,repeat=3,schedule=regular,n_t=10,tau_t=5,group=1,algorithm=nsga2").matches(cell));
    CHECK_FALSE(CellFilter("problem=GTS1,repeat=2").matches(cell));
    CHECK_FALSE(CellFilter("group=2").matches(cell));
    CHECK_THROWS_AS(CellFilter("colour=red"), std::invalid_argument);
    CHECK_THROWS_AS(CellFilter("repeat"), std::invalid_argument);
}

TEST_CASE("results CSV round-trips")
{
    std::vector<ResultRow> rows{
        {"GTS1", "nsga2", 1, "regular", 10, 5, 0, 0.125, 0.5, 0.75, "ok", ""},
        {"GTS6:group2:linkage=hv", "random", 2, "irregular_pi", 5, 10, 1, 1.0 / 3.0, 0.1, 0.2, "failed",
         "bad \"thing\", really"},
    };
    std::stringstream s;
    write_results_csv(rows, s);
    const auto back = read_results_csv(s);
    REQUIRE(back.size() == 2);
    CHECK(back[1].problem == rows[1].problem);
    CHECK(back[1].migd == rows[1].migd);
    CHECK(back[1].error == rows[1].error);
    CHECK(back[0].schedule == "regular");
    CHECK(back[1].n_t == 5);
}

TEST_CASE("aggregates and ranks of result rows")
{
    std::vector<ResultRow> rows;
    for (const std::string problem : {"GTS1", "GTS2", "GTS3"}) {
        for (int r = 0; r < 2; ++r) {
            rows.push_back({problem, "nsga2", 1, "regular", 10, 5, r, 0.1 + r, 0.9, 0.8, "ok", ""});
            rows.push_back({problem, "random", 1, "regular", 10, 5, r, 0.5 + r, 0.3, 0.4, "ok", ""});
        }
    }
    rows.push_back({"GTS4", "random", 1, "regular", 10, 5, 0, 100, 0, 0, "failed", "x"});
    const auto aggs = aggregate_rows(rows);
    bool seen = false;
    for (const auto& a : aggs) {
        if (a.algorithm == "nsga2" && a.group == 0) {
            CHECK(a.values.dmigd == doctest::Approx(0.6));
            CHECK(a.values.problems == 3);
            seen = true;
        }
        if (a.algorithm == "random" && a.group == 0) {
            CHECK(a.values.dmigd == doctest::Approx(1.0));
            CHECK(a.values.runs == 6);
        }
    }
    CHECK(seen);

    const auto ranks = rank_rows(rows);
    std::map<std::pair<std::string, std::string>, double> by;
    for (const auto& r : ranks) {
        by[{r.metric, r.algorithm}] = r.mean_rank;
    }
    CHECK(by[{"migd", "nsga2"}] == 1.0);
    CHECK(by[{"migd", "random"}] == 2.0);
    CHECK(by[{"mhv", "nsga2"}] == 1.0);
    CHECK(by[{"mms", "random"}] == 2.0);

    std::vector<ResultRow> single(rows.begin(), rows.begin() + 2);
    CHECK(rank_rows(single).empty());
}

TEST_CASE("run_experiment writes outputs that reproduce the aggregates")
{
    auto config = small_config("experiment");
    config.problems = {"GTS1", "GTS9"};
    config.repeats = 2;
    config.algorithms = {"nsga2", "random"};
    const auto result = run_experiment(config);
    CHECK(result.records.size() == 8);
    CHECK(result.failures == 0);
    for (const auto* name : {"results.csv", "runtime.csv", "aggregates.csv", "aggregates.json", "friedman.csv"}) {
        CHECK(std::filesystem::exists(config.output_dir / name));
    }
    const auto rows = read_results_csv(config.output_dir / "results.csv");
    REQUIRE(rows.size() == 8);

    // Independent nested mean over the CSV rows.
    for (const std::string alg : {"nsga2", "random"}) {
        std::map<std::string, std::vector<double>> per_problem;
        for (const auto& r : rows) {
            if (r.algorithm == alg) {
                per_problem[r.problem].push_back(r.migd);
            }
        }
        double total = 0.0;
        for (const auto& [p, v] : per_problem) {
            total += (v[0] + v[1]) / 2.0;
        }
        for (const auto& a : result.aggregates) {
            if (a.algorithm == alg && a.group == 0) {
                CHECK(a.values.dmigd == doctest::Approx(total / 2.0).epsilon(1e-12));
            }
        }
    }
    CHECK(std::filesystem::exists(config.output_dir / "runs" / (result.records[0].cell.key() + ".json")));

    const auto first = slurp(config.output_dir / "results.csv");
    ExperimentOptions parallel;
    parallel.parallel = 3;
    run_experiment(config, parallel);
    CHECK(slurp(config.output_dir / "results.csv") == first);
    std::filesystem::remove_all(config.output_dir);
}

TEST_CASE("filtered runs and partial failures")
{
    auto config = small_config("partial");
    config.problems = {"GTS1", "GTS3"};
    ExperimentOptions only;
    only.only = "problem=GTS3";
    auto result = run_experiment(config, only);
    CHECK(result.records.size() == 1);
    CHECK(result.records[0].cell.problem == "GTS3");

    // Stand in a failing optimizer for "random" to exercise the partial-failure path.
    const OptimizerFactory factory = [](const std::string& name, const OptimizerConfig& c)
        -> std::unique_ptr<DynamicOptimizer> {
        if (name == "random") {
            return std::make_unique<Throwing>();
        }
        return make_optimizer(name, c);
    };
    FrontCache cache;
    CHECK_THROWS_WITH_AS(run_single(cell_of("GTS1", 0, "random"), config, cache, factory),
                         "initialization failed on purpose", std::runtime_error);

    config.algorithms = {"nsga2", "random"};
    result = run_experiment(config, {}, factory);
    CHECK(result.records.size() == 4);
    CHECK(result.failures == 2);
    CHECK_FALSE(result.warnings.empty());
    const auto rows = read_results_csv(config.output_dir / "results.csv");
    std::size_t failed = 0;
    for (const auto& r : rows) {
        if (r.status != "ok") {
            ++failed;
            CHECK(r.algorithm == "random");
            CHECK(r.error.find("on purpose") != std::string::npos);
        }
    }
    CHECK(failed == 2);
    bool nsga2_aggregate = false;
    for (const auto& a : result.aggregates) {
        nsga2_aggregate = nsga2_aggregate || a.algorithm == "nsga2";
        CHECK(a.algorithm != "random");
    }
    CHECK(nsga2_aggregate);
    std::filesystem::remove_all(config.output_dir);
}

TEST_CASE("plot data exports")
{
    std::vector<ResultRow> rows;
    for (const std::string alg : {"a", "b", "c"}) {
        for (const std::string p : {"GTS1", "GTS2"}) {
            rows.push_back({p, alg, 1, "regular", 10, 5, 0, alg == "a" ? 0.1 : 0.4, 0.5, 0.5, "ok", ""});
        }
    }
    std::ostringstream bar;
    export_bar(PlotKind::BarDmigd, rows, bar);
    std::istringstream lines(bar.str());
    std::string line;
    std::vector<std::string> data;
    while (std::getline(lines, line)) {
        if (!line.empty() && line[0] != '#') {
            data.push_back(line);
        }
    }
    REQUIRE(data.size() == 4);
    CHECK(data[0] == "algorithm,dmigd");
    CHECK(data[1].rfind("a,0.1", 0) == 0);

    std::ostringstream ranks;
    export_rank_chart(rows, ranks);
    CHECK(ranks.str().find("migd,a,1") != std::string::npos);

    std::ostringstream cloud;
    export_cloud(PlotKind::PfCloud, make_problem("GTS1"), {0.0, 0.5, 1.0}, 50, cloud);
    std::istringstream cl(cloud.str());
    std::size_t count = 0;
    std::string header;
    while (std::getline(cl, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header.empty()) {
            header = line;
            continue;
        }
        ++count;
    }
    CHECK(header == "t,f1,f2");
    CHECK(count == 150);

    CHECK_THROWS_AS(parse_plot_kind("histogram"), std::invalid_argument);
    CHECK(parse_plot_kind("ps_cloud") == PlotKind::PsCloud);
}
