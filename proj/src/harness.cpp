#include "gts/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace gts {

namespace {

std::string sanitize(std::string_view text)
{
    std::string out;
    for (char c : text) {
        out += (c == ':' || c == '=' || c == '/' || c == ' ') ? '-' : c;
    }
    return out;
}

std::string config_label(int group, const std::string& schedule, int n_t, int tau_t)
{
    return "g" + std::to_string(group) + "/" + schedule + "/nt" + std::to_string(n_t) + "/tt" +
           std::to_string(tau_t);
}

std::string csv_field(const std::string& value)
{
    if (value.find_first_of(",\"\n") == std::string::npos) {
        return value;
    }
    std::string out = "\"";
    for (char c : value) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    return fields;
}

// Non-dominated phi = 1 objectives of the optimizer's current front.
std::vector<Vector> baseline_front(const DynamicOptimizer& optimizer, const Problem& problem, double t)
{
    std::vector<Vector> objectives;
    for (const auto& ind : optimizer.final_front()) {
        objectives.push_back(problem.evaluate_with_phi(ind.x, t, 1.0));
    }
    std::vector<Vector> front;
    for (std::size_t idx : nondominated_indices(objectives)) {
        front.push_back(objectives[idx]);
    }
    return front;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

nlohmann::json record_json(const RunRecord& r, bool with_fronts)
{
    nlohmann::json j;
    j["problem"] = r.cell.problem;
    j["algorithm"] = r.cell.algorithm;
    j["group"] = group_index(r.cell.group);
    j["schedule"] = std::string(to_string(r.cell.schedule));
    j["n_t"] = r.cell.n_t;
    j["tau_t"] = r.cell.tau_t;
    j["repeat"] = r.cell.repeat;
    j["seed"] = r.seed;
    j["status"] = r.ok ? "ok" : "failed";
    if (!r.ok) {
        j["error"] = r.error;
        return j;
    }
    j["t"] = r.t_values;
    j["igd"] = r.metrics.igd;
    j["hv"] = r.metrics.hv;
    j["ms2"] = r.metrics.ms2;
    j["migd"] = r.metrics.migd;
    j["mhv"] = r.metrics.mhv;
    j["mms"] = r.metrics.mms;
    if (!r.phi.empty()) {
        j["phi"] = r.phi;
    }
    j["evaluations"] = {{"initialization", r.counts.initialization},
                        {"warmup", r.counts.warmup},
                        {"budget", r.counts.budget},
                        {"change", r.counts.change}};
    j["hv_reference"] = {{"normalization", "reference front bounds"}, {"z_ref", kNormalizedReference}};
    if (with_fronts) {
        j["fronts"] = r.fronts;
    }
    return j;
}

} // namespace

std::string format_real(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string CellSpec::key() const
{
    return sanitize(problem) + "_g" + std::to_string(group_index(group)) + "_" +
           std::string(to_string(schedule)) + "_nt" + std::to_string(n_t) + "_tt" + std::to_string(tau_t) +
           "_" + algorithm + "_r" + std::to_string(repeat);
}

std::uint64_t cell_seed(std::uint64_t master_seed, const CellSpec& cell)
{
    const std::string group = "group" + std::to_string(group_index(cell.group));
    const std::string n_t = "n_t=" + std::to_string(cell.n_t);
    const std::string tau_t = "tau_t=" + std::to_string(cell.tau_t);
    const std::string repeat = "repeat=" + std::to_string(cell.repeat);
    return derive_seed(master_seed,
                       {cell.problem, group, to_string(cell.schedule), n_t, tau_t, repeat, cell.algorithm});
}

Problem cell_problem(const CellSpec& cell, const ExperimentConfig& config)
{
    ProblemOptions options;
    options.dimension = config.dimension;
    options.p_exponent = config.p_exponent;
    options.group = cell.group;
    options.schedule = cell.schedule;
    return make_problem(cell.problem, options);
}

RunRecord run_single(const CellSpec& cell, const ExperimentConfig& config, FrontCache& cache,
                     const OptimizerFactory& factory)
{
    const auto started = std::chrono::steady_clock::now();
    RunRecord record;
    record.cell = cell;
    record.seed = cell_seed(config.master_seed, cell);

    const Problem problem = cell_problem(cell, config);
    const std::size_t n = config.optimizer.pop_size;
    const std::size_t ref_n = config.reference_size(problem.objective_count());
    const auto mode = problem.phi_mode();
    const int total = cell.tau_t * config.environments;

    RngStream rng(record.seed);
    LinkageState state = LinkageState::initial();
    auto env_time = [&](int k) { return environment_time(cell.schedule, k, cell.tau_t, cell.n_t); };
    auto objective = [&problem](double t, double phi) {
        return [&problem, t, phi](std::span<const double> x) { return problem.evaluate_with_phi(x, t, phi); };
    };

    auto optimizer = factory(cell.algorithm, config.optimizer);
    auto check_size = [&] {
        if (optimizer->population().size() != n) {
            throw std::logic_error(optimizer->name() + " changed the population size to " +
                                   std::to_string(optimizer->population().size()));
        }
    };

    Evaluator evaluate(objective(env_time(0), state.phi));
    optimizer->initialize(problem.box(), n, evaluate, rng);
    check_size();
    record.counts.initialization = evaluate.count();
    for (int g = 0; g < config.warmup_generations; ++g) {
        optimizer->step(evaluate, rng);
        check_size();
    }
    record.counts.warmup = evaluate.count() - record.counts.initialization;

    std::vector<double> igd_steps, hv_steps, ms2_steps;
    std::vector<Vector> last_front;
    std::shared_ptr<const ReferenceFront> last_ref;
    for (int tau = 0; tau < total; ++tau) {
        const int k = tau / cell.tau_t;
        const double t = env_time(k);
        if (tau > 0 && tau % cell.tau_t == 0) {
            if (mode) {
                const Vector true_knee = knee_point(last_ref->points);
                const Vector est_knee = knee_point(last_front);
                double aux = 0.0;
                if (*mode == PhiMode::HvBased) {
                    const double full = normalized_hypervolume(last_ref->points, last_ref->bounds).value;
                    const double got = normalized_hypervolume(last_front, last_ref->bounds).value;
                    aux = full > 0.0 ? std::clamp(got / full, 0.0, 1.0) : 0.0;
                } else if (*mode == PhiMode::IgdBased) {
                    aux = igd_steps.back();
                }
                state = phi_update(state, true_knee, est_knee, *mode, aux);
            }
            evaluate.set_function(objective(t, state.phi));
            const auto before = evaluate.count();
            optimizer->on_change(evaluate, rng);
            check_size();
            record.counts.change += evaluate.count() - before;
        }

        const auto before = evaluate.count();
        optimizer->step(evaluate, rng);
        check_size();
        record.counts.budget += evaluate.count() - before;

        if ((tau + 1) % cell.tau_t == 0) {
            last_ref = cache.get(problem, t, ref_n);
            last_front = baseline_front(*optimizer, problem, t);
            igd_steps.push_back(igd(last_ref->points, last_front));
            hv_steps.push_back(normalized_hypervolume(last_front, last_ref->bounds).value);
            ms2_steps.push_back(ms2(last_ref->points, last_front).value);
            record.t_values.push_back(t);
            if (mode) {
                record.phi.push_back(state.phi);
            }
            record.fronts.push_back(last_front);
        }
    }

    record.metrics = run_means(std::move(igd_steps), std::move(hv_steps), std::move(ms2_steps));
    record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    record.metrics.runtime_seconds = record.wall_seconds;
    return record;
}

std::vector<CellSpec> expand_cells(const ExperimentConfig& config)
{
    std::vector<CellSpec> cells;
    for (const auto& problem : config.problems) {
        const auto selection = parse_selection(problem);
        std::vector<MatrixGroup> groups;
        if (selection.group) {
            groups.push_back(*selection.group);
        } else {
            for (int g : config.groups) {
                groups.push_back(group_from_index(g));
            }
        }
        for (MatrixGroup group : groups) {
            for (Schedule schedule : config.schedules) {
                for (int n_t : config.n_t_values) {
                    for (int tau_t : config.tau_t_values) {
                        for (const auto& algorithm : config.algorithms) {
                            for (int r = 0; r < config.repeats; ++r) {
                                cells.push_back({problem, group, schedule, n_t, tau_t, r, algorithm});
                            }
                        }
                    }
                }
            }
        }
    }
    return cells;
}

CellFilter::CellFilter(std::string_view text)
{
    std::string term;
    std::istringstream in{std::string(text)};
    while (std::getline(in, term, ',')) {
        if (term.empty()) {
            continue;
        }
        const auto eq = term.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("cell filter term '" + term + "' is not key=value");
        }
        std::string key = term.substr(0, eq);
        static const std::vector<std::string> known{"problem", "group", "schedule", "n_t",
                                                    "tau_t", "repeat", "algorithm"};
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw std::invalid_argument("unknown cell filter key '" + key + "'");
        }
        terms_.emplace_back(std::move(key), term.substr(eq + 1));
    }
}

bool CellFilter::matches(const CellSpec& cell) const
{
    for (const auto& [key, value] : terms_) {
        bool ok = false;
        if (key == "problem") {
            ok = value == cell.problem || value == to_string(parse_selection(cell.problem).id);
        } else if (key == "group") {
            ok = value == std::to_string(group_index(cell.group));
        } else if (key == "schedule") {
            ok = value == to_string(cell.schedule);
        } else if (key == "n_t") {
            ok = value == std::to_string(cell.n_t);
        } else if (key == "tau_t") {
            ok = value == std::to_string(cell.tau_t);
        } else if (key == "repeat") {
            ok = value == std::to_string(cell.repeat);
        } else {
            ok = value == cell.algorithm;
        }
        if (!ok) {
            return false;
        }
    }
    return true;
}

ResultRow to_row(const RunRecord& record)
{
    ResultRow row;
    row.problem = record.cell.problem;
    row.algorithm = record.cell.algorithm;
    row.group = group_index(record.cell.group);
    row.schedule = std::string(to_string(record.cell.schedule));
    row.n_t = record.cell.n_t;
    row.tau_t = record.cell.tau_t;
    row.repeat = record.cell.repeat;
    row.status = record.ok ? "ok" : "failed";
    row.error = record.error;
    if (record.ok) {
        row.migd = record.metrics.migd;
        row.mhv = record.metrics.mhv;
        row.mms = record.metrics.mms;
    }
    return row;
}

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out)
{
    out << "problem,algorithm,group,schedule,n_t,tau_t,repeat,migd,mhv,mms,status,error\n";
    for (const auto& r : rows) {
        out << csv_field(r.problem) << ',' << csv_field(r.algorithm) << ',' << r.group << ','
            << r.schedule << ',' << r.n_t << ',' << r.tau_t << ',' << r.repeat << ','
            << format_real(r.migd) << ',' << format_real(r.mhv) << ',' << format_real(r.mms) << ','
            << r.status << ',' << csv_field(r.error) << '\n';
    }
}

std::vector<ResultRow> read_results_csv(std::istream& in)
{
    std::vector<ResultRow> rows;
    std::string line;
    if (!std::getline(in, line) || line.rfind("problem,algorithm,", 0) != 0) {
        throw std::runtime_error("results CSV is missing its header");
    }
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 12) {
            throw std::runtime_error("results CSV line " + std::to_string(line_no) + " has " +
                                     std::to_string(f.size()) + " fields, expected 12");
        }
        ResultRow r;
        r.problem = f[0];
        r.algorithm = f[1];
        r.group = std::stoi(f[2]);
        r.schedule = f[3];
        r.n_t = std::stoi(f[4]);
        r.tau_t = std::stoi(f[5]);
        r.repeat = std::stoi(f[6]);
        r.migd = std::stod(f[7]);
        r.mhv = std::stod(f[8]);
        r.mms = std::stod(f[9]);
        r.status = f[10];
        r.error = f[11];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return read_results_csv(in);
}

std::vector<AlgorithmAggregate> aggregate_rows(const std::vector<ResultRow>& rows)
{
    std::vector<std::string> algorithms;
    std::map<std::pair<std::string, int>, std::vector<MetricSample>> by_group;
    std::map<std::string, std::vector<MetricSample>> overall;
    for (const auto& r : rows) {
        if (r.status != "ok") {
            continue;
        }
        if (std::find(algorithms.begin(), algorithms.end(), r.algorithm) == algorithms.end()) {
            algorithms.push_back(r.algorithm);
        }
        const MetricSample s{r.problem, config_label(r.group, r.schedule, r.n_t, r.tau_t), r.repeat,
                             r.migd, r.mhv, r.mms};
        by_group[{r.algorithm, r.group}].push_back(s);
        overall[r.algorithm].push_back(s);
    }
    std::vector<AlgorithmAggregate> out;
    for (const auto& algorithm : algorithms) {
        for (const auto& [key, samples] : by_group) {
            if (key.first == algorithm) {
                out.push_back({algorithm, key.second, aggregate(samples)});
            }
        }
        out.push_back({algorithm, 0, aggregate(overall[algorithm])});
    }
    return out;
}

std::vector<RankRow> rank_rows(const std::vector<ResultRow>& rows)
{
    struct Sums {
        double migd = 0.0, mhv = 0.0, mms = 0.0;
        int count = 0;
    };
    std::vector<std::string> algorithms;
    std::map<std::string, std::map<std::string, Sums>> cells;  // instance -> algorithm -> sums
    for (const auto& r : rows) {
        if (r.status != "ok") {
            continue;
        }
        if (std::find(algorithms.begin(), algorithms.end(), r.algorithm) == algorithms.end()) {
            algorithms.push_back(r.algorithm);
        }
        auto& s = cells[r.problem + "|" + config_label(r.group, r.schedule, r.n_t, r.tau_t)][r.algorithm];
        s.migd += r.migd;
        s.mhv += r.mhv;
        s.mms += r.mms;
        ++s.count;
    }
    std::vector<std::vector<double>> migd(algorithms.size()), mhv(algorithms.size()), mms(algorithms.size());
    for (const auto& [instance, per_alg] : cells) {
        if (per_alg.size() != algorithms.size()) {
            continue;
        }
        for (std::size_t a = 0; a < algorithms.size(); ++a) {
            const auto& s = per_alg.at(algorithms[a]);
            migd[a].push_back(s.migd / s.count);
            mhv[a].push_back(s.mhv / s.count);
            mms[a].push_back(s.mms / s.count);
        }
    }
    std::vector<RankRow> out;
    if (algorithms.size() < 2 || migd[0].size() < 2) {
        return out;
    }
    const std::vector<std::tuple<std::string, const std::vector<std::vector<double>>*, Direction>> metrics{
        {"migd", &migd, Direction::LowerBetter},
        {"mhv", &mhv, Direction::HigherBetter},
        {"mms", &mms, Direction::HigherBetter}};
    for (const auto& [name, table, direction] : metrics) {
        const auto result = friedman_ranks(*table, direction);
        for (std::size_t a = 0; a < algorithms.size(); ++a) {
            out.push_back({name, algorithms[a], result.mean_ranks[a], result.chi_square, result.p_value});
        }
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentOptions& options,
                                const OptimizerFactory& factory)
{
    config.validate();
    const CellFilter filter(options.only);
    std::vector<CellSpec> cells;
    for (auto& cell : expand_cells(config)) {
        if (filter.matches(cell)) {
            cells.push_back(std::move(cell));
        }
    }
    if (cells.empty()) {
        throw std::invalid_argument("no experiment cell matches the filter '" + options.only + "'");
    }

    FrontCache cache(FrontCache::directory_from_env(config.cache_dir));
    ExperimentResult result;
    result.records.resize(cells.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    std::size_t done = 0;

    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            RunRecord record;
            try {
                record = run_single(cells[i], config, cache, factory);
            } catch (const std::exception& ex) {
                record = RunRecord{};
                record.cell = cells[i];
                record.seed = cell_seed(config.master_seed, cells[i]);
                record.ok = false;
                record.error = ex.what();
            }
            std::lock_guard lock(log_mutex);
            ++done;
            if (options.log != nullptr) {
                *options.log << "[" << done << "/" << cells.size() << "] " << cells[i].key() << " "
                             << (record.ok ? "ok migd=" + format_real(record.metrics.migd) : "FAILED: " + record.error)
                             << '\n';
            }
            result.records[i] = std::move(record);
        }
    };
    const int threads = std::max(1, std::min<int>(options.parallel.value_or(config.parallel),
                                                  static_cast<int>(cells.size())));
    {
        std::vector<std::jthread> pool;
        for (int i = 1; i < threads; ++i) {
            pool.emplace_back(worker);
        }
        worker();
    }

    std::vector<ResultRow> rows;
    for (const auto& r : result.records) {
        rows.push_back(to_row(r));
        if (!r.ok) {
            ++result.failures;
        }
    }
    if (result.failures > 0) {
        result.warnings.push_back(std::to_string(result.failures) + " of " + std::to_string(rows.size()) +
                                  " runs failed; aggregates cover the completed runs only");
    }
    if (result.failures < rows.size()) {
        result.aggregates = aggregate_rows(rows);
        result.ranks = rank_rows(rows);
    }

    const auto& dir = config.output_dir;
    std::filesystem::create_directories(dir / "runs");
    {
        std::ostringstream csv;
        write_results_csv(rows, csv);
        write_text(dir / "results.csv", csv.str());
    }
    {
        std::ostringstream csv;
        csv << "problem,algorithm,group,schedule,n_t,tau_t,repeat,runtime_seconds\n";
        for (const auto& r : result.records) {
            const auto row = to_row(r);
            csv << csv_field(row.problem) << ',' << row.algorithm << ',' << row.group << ',' << row.schedule
                << ',' << row.n_t << ',' << row.tau_t << ',' << row.repeat << ',' << format_real(r.wall_seconds)
                << '\n';
        }
        write_text(dir / "runtime.csv", csv.str());
    }
    {
        std::ostringstream csv;
        nlohmann::json j = nlohmann::json::array();
        csv << "algorithm,group,dmigd,dmhv,dmms,problems,runs\n";
        for (const auto& a : result.aggregates) {
            const std::string group = a.group == 0 ? "all" : std::to_string(a.group);
            csv << a.algorithm << ',' << group << ',' << format_real(a.values.dmigd) << ','
                << format_real(a.values.dmhv) << ',' << format_real(a.values.dmms) << ',' << a.values.problems
                << ',' << a.values.runs << '\n';
            j.push_back({{"algorithm", a.algorithm},
                         {"group", group},
                         {"dmigd", a.values.dmigd},
                         {"dmhv", a.values.dmhv},
                         {"dmms", a.values.dmms},
                         {"problems", a.values.problems},
                         {"runs", a.values.runs}});
        }
        write_text(dir / "aggregates.csv", csv.str());
        nlohmann::json doc{{"aggregates", j}, {"warnings", result.warnings}};
        write_text(dir / "aggregates.json", doc.dump(2) + "\n");
    }
    {
        std::ostringstream csv;
        csv << "metric,algorithm,mean_rank,chi_square,p_value\n";
        for (const auto& r : result.ranks) {
            csv << r.metric << ',' << r.algorithm << ',' << format_real(r.mean_rank) << ','
                << format_real(r.chi_square) << ',' << format_real(r.p_value) << '\n';
        }
        write_text(dir / "friedman.csv", csv.str());
    }
    for (const auto& r : result.records) {
        write_text(dir / "runs" / (r.cell.key() + ".json"), record_json(r, config.save_fronts).dump(2) + "\n");
    }
    return result;
}

} // namespace gts
