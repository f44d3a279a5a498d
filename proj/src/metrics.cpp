#include "gts/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

namespace gts {

namespace {

double mean(const std::vector<double>& values)
{
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

// Area dominated by 2-D points (already strictly inside the reference box).
double sweep_2d(std::vector<std::pair<double, double>> pts, double r1, double r2)
{
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    double best = r2;
    for (const auto& [x, y] : pts) {
        if (y < best) {
            area += (r1 - x) * (best - y);
            best = y;
        }
    }
    return area;
}

} // namespace

double igd(const std::vector<Vector>& reference, const std::vector<Vector>& approx)
{
    if (reference.empty() || approx.empty()) {
        throw std::invalid_argument("igd needs non-empty reference and approximation sets");
    }
    double total = 0.0;
    for (const auto& r : reference) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& a : approx) {
            double s = 0.0;
            for (std::size_t j = 0; j < r.size(); ++j) {
                const double d = r[j] - a[j];
                s += d * d;
            }
            best = std::min(best, s);
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(reference.size());
}

HypervolumeResult hypervolume(const std::vector<Vector>& points, const Vector& z_ref)
{
    const std::size_t m = z_ref.size();
    if (m != 2 && m != 3) {
        throw std::invalid_argument("hypervolume supports two or three objectives");
    }
    std::vector<Vector> inside;
    for (const auto& p : points) {
        if (p.size() != m) {
            throw std::invalid_argument("hypervolume: point dimension differs from reference");
        }
        bool ok = true;
        for (std::size_t j = 0; j < m; ++j) {
            ok = ok && p[j] < z_ref[j];
        }
        if (ok) {
            inside.push_back(p);
        }
    }
    HypervolumeResult result;
    if (inside.empty()) {
        result.all_outside = true;
        return result;
    }

    if (m == 2) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : inside) {
            pts.emplace_back(p[0], p[1]);
        }
        result.value = sweep_2d(std::move(pts), z_ref[0], z_ref[1]);
        return result;
    }

    // Slice along f3: between consecutive f3 levels the cross-section is the 2-D region
    // dominated by every point at or below the lower level.
    std::sort(inside.begin(), inside.end(),
              [](const Vector& a, const Vector& b) { return a[2] < b[2]; });
    std::vector<std::pair<double, double>> active;
    double volume = 0.0;
    for (std::size_t i = 0; i < inside.size(); ++i) {
        active.emplace_back(inside[i][0], inside[i][1]);
        const double next = i + 1 < inside.size() ? inside[i + 1][2] : z_ref[2];
        const double depth = next - inside[i][2];
        if (depth > 0.0) {
            volume += depth * sweep_2d(active, z_ref[0], z_ref[1]);
        }
    }
    result.value = volume;
    return result;
}

std::vector<Vector> normalize(const std::vector<Vector>& points,
                              const std::vector<std::pair<double, double>>& bounds)
{
    std::vector<Vector> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        Vector q(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double width = bounds[j].second - bounds[j].first;
            q[j] = width > 0.0 ? (p[j] - bounds[j].first) / width : p[j] - bounds[j].first;
        }
        out.push_back(std::move(q));
    }
    return out;
}

HypervolumeResult normalized_hypervolume(const std::vector<Vector>& approx,
                                         const std::vector<std::pair<double, double>>& bounds)
{
    return hypervolume(normalize(approx, bounds), Vector(bounds.size(), kNormalizedReference));
}

Ms2Result ms2(const std::vector<Vector>& reference, const std::vector<Vector>& approx)
{
    if (reference.empty() || approx.empty()) {
        throw std::invalid_argument("ms2 needs non-empty reference and approximation sets");
    }
    const auto rb = objective_bounds(reference);
    const auto ab = objective_bounds(approx);
    const std::size_t m = rb.size();
    Ms2Result result;
    double sum = 0.0;
    bool gated = false;
    for (std::size_t j = 0; j < m; ++j) {
        const auto [rlo, rhi] = rb[j];
        const auto [alo, ahi] = ab[j];
        if (ahi - rlo < 0.0 || rhi - alo < 0.0) {
            gated = true;
        }
        const double range = rhi - rlo;
        if (!(range > 0.0)) {
            result.degenerate = true;
            continue;
        }
        const double ratio = (std::min(ahi, rhi) - std::max(alo, rlo)) / range;
        sum += ratio * ratio;
    }
    result.value = gated ? 0.0 : std::sqrt(sum / static_cast<double>(m));
    return result;
}

MetricRecord run_means(std::vector<double> igd_steps, std::vector<double> hv_steps,
                       std::vector<double> ms2_steps)
{
    if (igd_steps.empty() || igd_steps.size() != hv_steps.size() ||
        igd_steps.size() != ms2_steps.size()) {
        throw std::invalid_argument("run_means needs equally long, non-empty series");
    }
    MetricRecord record;
    record.migd = mean(igd_steps);
    record.mhv = mean(hv_steps);
    record.mms = mean(ms2_steps);
    record.igd = std::move(igd_steps);
    record.hv = std::move(hv_steps);
    record.ms2 = std::move(ms2_steps);
    return record;
}

AggregateRecord aggregate(const std::vector<MetricSample>& samples, std::optional<int> expected_repeats)
{
    if (samples.empty()) {
        throw std::invalid_argument("aggregate of an empty sample set");
    }
    std::map<std::string, std::map<std::string, std::map<int, const MetricSample*>>> groups;
    for (const auto& s : samples) {
        auto& slot = groups[s.problem][s.config][s.repeat];
        if (slot != nullptr) {
            throw std::invalid_argument("duplicate sample " + s.problem + "/" + s.config + "/" +
                                        std::to_string(s.repeat));
        }
        slot = &s;
    }

    if (expected_repeats) {
        std::set<std::string> configs;
        for (const auto& [problem, by_config] : groups) {
            for (const auto& [config, by_repeat] : by_config) {
                configs.insert(config);
            }
        }
        std::vector<std::string> missing;
        for (const auto& [problem, by_config] : groups) {
            for (const auto& config : configs) {
                const auto it = by_config.find(config);
                for (int r = 0; r < *expected_repeats; ++r) {
                    if (it == by_config.end() || !it->second.contains(r)) {
                        missing.push_back(problem + "/" + config + "/" + std::to_string(r));
                    }
                }
            }
        }
        if (!missing.empty()) {
            std::string what = "ragged metric groups, missing:";
            for (const auto& cell : missing) {
                what += " " + cell;
            }
            throw RaggedGroupsError(what, std::move(missing));
        }
    }

    AggregateRecord out;
    for (const auto& [problem, by_config] : groups) {
        double pi = 0.0, ph = 0.0, pm = 0.0;
        for (const auto& [config, by_repeat] : by_config) {
            double ci = 0.0, ch = 0.0, cm = 0.0;
            for (const auto& [repeat, s] : by_repeat) {
                ci += s->migd;
                ch += s->mhv;
                cm += s->mms;
            }
            const auto r = static_cast<double>(by_repeat.size());
            pi += ci / r;
            ph += ch / r;
            pm += cm / r;
            out.runs += by_repeat.size();
        }
        const auto c = static_cast<double>(by_config.size());
        out.dmigd += pi / c;
        out.dmhv += ph / c;
        out.dmms += pm / c;
    }
    const auto p = static_cast<double>(groups.size());
    out.dmigd /= p;
    out.dmhv /= p;
    out.dmms /= p;
    out.problems = groups.size();
    return out;
}

std::vector<double> rank_row(const std::vector<double>& scores, Direction direction)
{
    const std::size_t k = scores.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return direction == Direction::LowerBetter ? scores[a] < scores[b] : scores[a] > scores[b];
    });
    std::vector<double> ranks(k);
    std::size_t i = 0;
    while (i < k) {
        std::size_t j = i;
        while (j + 1 < k && scores[order[j + 1]] == scores[order[i]]) {
            ++j;
        }
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t r = i; r <= j; ++r) {
            ranks[order[r]] = avg;
        }
        i = j + 1;
    }
    return ranks;
}

FriedmanResult friedman_ranks(const std::vector<std::vector<double>>& scores, Direction direction)
{
    const std::size_t k = scores.size();
    if (k < 2) {
        throw std::invalid_argument("Friedman test needs at least two algorithms");
    }
    const std::size_t n = scores[0].size();
    if (n < 2) {
        throw std::invalid_argument("Friedman test needs at least two instances");
    }
    for (const auto& row : scores) {
        if (row.size() != n) {
            throw std::invalid_argument("Friedman score table is ragged");
        }
    }

    FriedmanResult result;
    result.rank_sums.assign(k, 0.0);
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(k);
        for (std::size_t a = 0; a < k; ++a) {
            row[a] = scores[a][i];
        }
        auto ranks = rank_row(row, direction);
        for (std::size_t a = 0; a < k; ++a) {
            result.rank_sums[a] += ranks[a];
        }
        std::map<double, double> counts;
        for (double v : row) {
            counts[v] += 1.0;
        }
        for (const auto& [value, t] : counts) {
            tie_term += t * t * t - t;
        }
        result.ranks.push_back(std::move(ranks));
    }

    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    double spread = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        result.mean_ranks.push_back(result.rank_sums[a] / nd);
        const double d = result.mean_ranks[a] - (kd + 1.0) / 2.0;
        spread += d * d;
    }
    const double correction = 1.0 - tie_term / (nd * (kd * kd * kd - kd));
    if (correction <= 0.0) {
        result.chi_square = 0.0;
        result.p_value = 1.0;
        return result;
    }
    result.chi_square = 12.0 * nd / (kd * (kd + 1.0)) * spread / correction;
    const boost::math::chi_squared dist(kd - 1.0);
    result.p_value = boost::math::cdf(boost::math::complement(dist, result.chi_square));
    return result;
}

} // namespace gts
