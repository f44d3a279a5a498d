#include "gts/reference_front.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace gts {

namespace {

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double squared_distance(const Vector& a, const Vector& b)
{
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

} // namespace

std::size_t default_reference_size(std::size_t objective_count)
{
    return objective_count >= 3 ? 2500 : 1500;
}

std::vector<std::size_t> farthest_point_subsample(const std::vector<Vector>& points,
                                                  std::size_t count,
                                                  const std::vector<std::size_t>& seeds)
{
    const std::size_t n = points.size();
    count = std::min(count, n);
    std::vector<std::size_t> chosen;
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    std::vector<bool> taken(n, false);

    auto take = [&](std::size_t idx) {
        taken[idx] = true;
        chosen.push_back(idx);
        for (std::size_t i = 0; i < n; ++i) {
            if (!taken[i]) {
                nearest[i] = std::min(nearest[i], squared_distance(points[i], points[idx]));
            }
        }
    };

    for (std::size_t s : seeds) {
        if (chosen.size() >= count) {
            break;
        }
        if (s < n && !taken[s]) {
            take(s);
        }
    }
    if (chosen.empty() && count > 0) {
        take(0);
    }
    while (chosen.size() < count) {
        std::size_t best = n;
        double best_distance = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!taken[i] && nearest[i] > best_distance) {
                best = i;
                best_distance = nearest[i];
            }
        }
        take(best);
    }
    return chosen;
}

std::vector<Vector> reference_candidates(const Problem& problem, double t, std::size_t n)
{
    const std::size_t total = 8 * n;
    if (problem.position_count() == 1) {
        return problem.sample_ps(t, total);
    }
    std::vector<Vector> xs = problem.sample_ps(t, total / 2);
    // Additive recurrence with the plastic-number generator: its projections onto any
    // linear combination of the two position variables are all distinct.
    constexpr double plastic = 1.32471795724474602596;
    constexpr double step1 = 1.0 / plastic;
    constexpr double step2 = 1.0 / (plastic * plastic);
    const auto r1 = problem.ps_position_range(0, t);
    const auto r2 = problem.ps_position_range(1, t);
    for (std::size_t i = 1; i <= total - total / 2; ++i) {
        const double u = std::fmod(0.5 + step1 * static_cast<double>(i), 1.0);
        const double v = std::fmod(0.5 + step2 * static_cast<double>(i), 1.0);
        const double pos[2] = {r1.first + u * (r1.second - r1.first),
                               r2.first + v * (r2.second - r2.first)};
        xs.push_back(problem.ps_point(pos, t));
    }
    return xs;
}

ReferenceFront sample_pf(const Problem& problem, double t, std::size_t n)
{
    if (n == 0) {
        throw std::invalid_argument("reference front size must be positive");
    }
    const std::vector<Vector> xs = reference_candidates(problem, t, n);
    std::vector<Vector> fs;
    fs.reserve(xs.size());
    for (const auto& x : xs) {
        fs.push_back(problem.evaluate_with_phi(x, t, 1.0));
    }
    const auto keep = nondominated_indices(fs);
    std::vector<Vector> cand_f;
    std::vector<Vector> cand_x;
    cand_f.reserve(keep.size());
    cand_x.reserve(keep.size());
    for (std::size_t idx : keep) {
        cand_f.push_back(fs[idx]);
        cand_x.push_back(xs[idx]);
    }

    ReferenceFront front;
    front.t = t;
    front.degenerate = cand_f.size() < n;
    const auto order = farthest_point_subsample(cand_f, n, extreme_indices(cand_f));
    for (std::size_t idx : order) {
        front.points.push_back(cand_f[idx]);
        front.decisions.push_back(cand_x[idx]);
    }
    front.bounds = objective_bounds(front.points);
    return front;
}

void write_front_files(const ReferenceFront& front, const Problem& problem,
                       const std::filesystem::path& stem)
{
    const auto csv_path = std::filesystem::path(stem.string() + ".csv");
    const auto json_path = std::filesystem::path(stem.string() + ".json");
    if (stem.has_parent_path()) {
        std::filesystem::create_directories(stem.parent_path());
    }
    std::ostringstream csv;
    const std::size_t m = front.objective_count();
    for (std::size_t j = 0; j < m; ++j) {
        csv << (j ? "," : "") << 'f' << (j + 1);
    }
    csv << '\n';
    for (const auto& p : front.points) {
        for (std::size_t j = 0; j < m; ++j) {
            csv << (j ? "," : "") << format_double(p[j]);
        }
        csv << '\n';
    }
    nlohmann::json meta;
    meta["instance"] = problem.name();
    meta["t"] = front.t;
    meta["N"] = front.size();
    meta["D"] = problem.dimension();
    meta["degenerate"] = front.degenerate;
    auto bounds = nlohmann::json::array();
    for (const auto& [lo, hi] : front.bounds) {
        bounds.push_back({lo, hi});
    }
    meta["bounds"] = bounds;

    // Write both files under temporary names, then rename into place.
    const auto suffix = ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    const auto csv_tmp = std::filesystem::path(csv_path.string() + suffix);
    const auto json_tmp = std::filesystem::path(json_path.string() + suffix);
    {
        std::ofstream out(csv_tmp);
        out << csv.str();
        if (!out) {
            throw std::runtime_error("cannot write " + csv_tmp.string());
        }
    }
    {
        std::ofstream out(json_tmp);
        out << meta.dump(2) << '\n';
        if (!out) {
            throw std::runtime_error("cannot write " + json_tmp.string());
        }
    }
    std::filesystem::rename(csv_tmp, csv_path);
    std::filesystem::rename(json_tmp, json_path);
}

std::optional<ReferenceFront> read_front_files(const std::filesystem::path& stem)
{
    const auto csv_path = std::filesystem::path(stem.string() + ".csv");
    const auto json_path = std::filesystem::path(stem.string() + ".json");
    if (!std::filesystem::exists(csv_path) || !std::filesystem::exists(json_path)) {
        return std::nullopt;
    }
    std::ifstream meta_in(json_path);
    const auto meta = nlohmann::json::parse(meta_in);
    ReferenceFront front;
    front.t = meta.at("t").get<double>();
    front.degenerate = meta.at("degenerate").get<bool>();

    std::ifstream in(csv_path);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        Vector p;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            p.push_back(std::strtod(cell.c_str(), nullptr));
        }
        front.points.push_back(std::move(p));
    }
    if (front.points.empty() || front.points.size() != meta.at("N").get<std::size_t>()) {
        throw std::runtime_error("corrupt reference front cache entry " + csv_path.string());
    }
    front.bounds = objective_bounds(front.points);
    return front;
}

FrontCache::FrontCache(std::optional<std::filesystem::path> directory)
    : directory_(std::move(directory))
{
}

std::optional<std::filesystem::path> FrontCache::directory_from_env(
    std::optional<std::filesystem::path> fallback)
{
    if (const char* env = std::getenv("GTS_CACHE_DIR"); env != nullptr && *env != '\0') {
        return std::filesystem::path(env);
    }
    return fallback;
}

std::shared_ptr<const ReferenceFront> FrontCache::get(const Problem& problem, double t, std::size_t n)
{
    const long long t_key = std::llround(t * 1e12);
    const Key key{static_cast<int>(problem.id()), t_key, n, problem.dimension()};
    {
        std::lock_guard lock(mutex_);
        if (auto it = entries_.find(key); it != entries_.end()) {
            return it->second;
        }
    }

    std::optional<std::filesystem::path> stem;
    if (directory_) {
        char name[128];
        std::snprintf(name, sizeof name, "%s_t%.12f_N%zu_D%zu", problem.name().c_str(),
                      static_cast<double>(t_key) / 1e12, n, problem.dimension());
        stem = *directory_ / name;
    }
    std::shared_ptr<const ReferenceFront> front;
    if (stem) {
        if (auto loaded = read_front_files(*stem)) {
            front = std::make_shared<const ReferenceFront>(std::move(*loaded));
        }
    }
    if (!front) {
        auto built = std::make_shared<ReferenceFront>(sample_pf(problem, t, n));
        if (stem) {
            write_front_files(*built, problem, *stem);
        }
        front = std::move(built);
    }

    std::lock_guard lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, front);
    return it->second;
}

std::size_t FrontCache::memory_entries() const
{
    std::lock_guard lock(mutex_);
    return entries_.size();
}

} // namespace gts
