#include "gts/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gts {

namespace {

Vector uniform_point(const Box& box, RngStream& rng)
{
    Vector x(box.dim());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = rng.uniform(box.lower[i], box.upper[i]);
    }
    return x;
}

// Merges `a` and `b` and keeps n members; members of `b` whose decision vector repeats an
// earlier member are only used when the distinct members run out.
Population select_from(const std::vector<Individual>& a, std::vector<Individual> b, std::size_t n,
                       int generation)
{
    std::vector<Individual> merged = a;
    std::vector<Individual> repeats;
    for (auto& ind : b) {
        const bool seen = std::any_of(merged.begin(), merged.end(),
                                      [&](const Individual& m) { return m.x == ind.x; });
        (seen ? repeats : merged).push_back(std::move(ind));
    }

    Population out;
    out.generation = generation;
    std::vector<Vector> objectives;
    objectives.reserve(merged.size());
    for (const auto& ind : merged) {
        objectives.push_back(ind.f);
    }
    for (std::size_t idx : environmental_selection(objectives, std::min(n, merged.size()))) {
        out.members.push_back(merged[idx]);
    }
    for (std::size_t i = 0; out.members.size() < n && i < repeats.size(); ++i) {
        out.members.push_back(repeats[i]);
    }
    return out;
}

} // namespace

std::vector<Vector> Population::objectives() const
{
    std::vector<Vector> out;
    out.reserve(members.size());
    for (const auto& m : members) {
        out.push_back(m.f);
    }
    return out;
}

void OptimizerConfig::validate() const
{
    auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (pop_size < 2) {
        throw std::invalid_argument("population size must be at least 2");
    }
    if (!probability(crossover_probability)) {
        throw std::invalid_argument("crossover probability must lie in [0, 1]");
    }
    if (mutation_probability && !probability(*mutation_probability)) {
        throw std::invalid_argument("mutation probability must lie in [0, 1]");
    }
    if (!(crossover_eta > 0.0) || !(mutation_eta > 0.0)) {
        throw std::invalid_argument("distribution indices must be positive");
    }
    if (!probability(restart_fraction)) {
        throw std::invalid_argument("restart fraction must lie in [0, 1]");
    }
}

Population initialize_population(const Box& box, std::size_t n, Evaluator& evaluate, RngStream& rng)
{
    Population pop;
    pop.members.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Individual ind;
        ind.x = uniform_point(box, rng);
        ind.f = evaluate(ind.x);
        pop.members.push_back(std::move(ind));
    }
    return pop;
}

std::vector<std::size_t> environmental_selection(const std::vector<Vector>& objectives, std::size_t n)
{
    std::vector<std::size_t> chosen;
    chosen.reserve(n);
    for (const auto& front : nondominated_sort(objectives)) {
        if (chosen.size() + front.size() <= n) {
            chosen.insert(chosen.end(), front.begin(), front.end());
            if (chosen.size() == n) {
                break;
            }
            continue;
        }
        const auto crowding = crowding_distance(objectives, front);
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return crowding[a] > crowding[b]; });
        for (std::size_t r = 0; chosen.size() < n; ++r) {
            chosen.push_back(front[order[r]]);
        }
        break;
    }
    return chosen;
}

void sbx_crossover(Vector& a, Vector& b, const Box& box, double eta, double probability, RngStream& rng)
{
    if (rng.uniform() > probability) {
        return;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (rng.uniform() > 0.5 || std::fabs(a[i] - b[i]) <= 1e-14) {
            continue;
        }
        const double y1 = std::min(a[i], b[i]);
        const double y2 = std::max(a[i], b[i]);
        const double lo = box.lower[i];
        const double hi = box.upper[i];
        const double u = rng.uniform();

        auto spread = [&](double beta) {
            const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
            return u <= 1.0 / alpha ? std::pow(u * alpha, 1.0 / (eta + 1.0))
                                    : std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
        };
        const double bq1 = spread(1.0 + 2.0 * (y1 - lo) / (y2 - y1));
        const double bq2 = spread(1.0 + 2.0 * (hi - y2) / (y2 - y1));
        double c1 = 0.5 * ((y1 + y2) - bq1 * (y2 - y1));
        double c2 = 0.5 * ((y1 + y2) + bq2 * (y2 - y1));
        c1 = std::clamp(c1, lo, hi);
        c2 = std::clamp(c2, lo, hi);
        if (rng.uniform() <= 0.5) {
            std::swap(c1, c2);
        }
        a[i] = c1;
        b[i] = c2;
    }
}

void polynomial_mutation(Vector& x, const Box& box, double eta, double probability, RngStream& rng)
{
    const double power = 1.0 / (eta + 1.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (rng.uniform() >= probability) {
            continue;
        }
        const double lo = box.lower[i];
        const double hi = box.upper[i];
        const double width = hi - lo;
        const double d1 = (x[i] - lo) / width;
        const double d2 = (hi - x[i]) / width;
        const double u = rng.uniform();
        double dq;
        if (u <= 0.5) {
            const double v = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta + 1.0);
            dq = std::pow(v, power) - 1.0;
        } else {
            const double v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, eta + 1.0);
            dq = 1.0 - std::pow(v, power);
        }
        x[i] = std::clamp(x[i] + dq * width, lo, hi);
    }
}

Population nsga2_step(const Population& pop, const Box& box, Evaluator& evaluate, RngStream& rng,
                      const OptimizerConfig& config)
{
    const std::size_t n = pop.size();
    const auto objectives = pop.objectives();
    std::vector<std::size_t> rank(n, 0);
    std::vector<double> crowd(n, 0.0);
    const auto fronts = nondominated_sort(objectives);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        const auto cd = crowding_distance(objectives, fronts[r]);
        for (std::size_t i = 0; i < fronts[r].size(); ++i) {
            rank[fronts[r][i]] = r;
            crowd[fronts[r][i]] = cd[i];
        }
    }
    auto tournament = [&]() {
        const std::size_t a = rng.index(n);
        const std::size_t b = rng.index(n);
        if (rank[a] != rank[b]) {
            return rank[a] < rank[b] ? a : b;
        }
        return crowd[b] > crowd[a] ? b : a;
    };

    const double pm = config.mutation_probability_for(box.dim());
    std::vector<Individual> offspring;
    offspring.reserve(n);
    while (offspring.size() < n) {
        Vector c1 = pop.members[tournament()].x;
        Vector c2 = pop.members[tournament()].x;
        sbx_crossover(c1, c2, box, config.crossover_eta, config.crossover_probability, rng);
        polynomial_mutation(c1, box, config.mutation_eta, pm, rng);
        polynomial_mutation(c2, box, config.mutation_eta, pm, rng);
        for (Vector* c : {&c1, &c2}) {
            if (offspring.size() < n) {
                Individual ind;
                ind.x = std::move(*c);
                ind.f = evaluate(ind.x);
                offspring.push_back(std::move(ind));
            }
        }
    }
    return select_from(pop.members, std::move(offspring), n, pop.generation + 1);
}

Population on_change(const Population& pop, const Box& box, Evaluator& evaluate, RngStream& rng,
                     double restart_fraction)
{
    if (!(restart_fraction >= 0.0 && restart_fraction <= 1.0)) {
        throw std::invalid_argument("restart fraction must lie in [0, 1]");
    }
    Population out = pop;
    const std::size_t n = out.size();
    const auto restarts = static_cast<std::size_t>(
        std::min<double>(static_cast<double>(n), std::ceil(restart_fraction * static_cast<double>(n) - 1e-9)));
    std::vector<std::size_t> slots(n);
    std::iota(slots.begin(), slots.end(), 0);
    for (std::size_t i = 0; i < restarts; ++i) {
        std::swap(slots[i], slots[i + rng.index(n - i)]);
        out.members[slots[i]].x = uniform_point(box, rng);
    }
    for (auto& m : out.members) {
        m.f = evaluate(m.x);
    }
    return out;
}

Population random_search_step(const Population& pop, const Box& box, Evaluator& evaluate, RngStream& rng)
{
    std::vector<Individual> fresh;
    fresh.reserve(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        Individual ind;
        ind.x = uniform_point(box, rng);
        ind.f = evaluate(ind.x);
        fresh.push_back(std::move(ind));
    }
    return select_from(pop.members, std::move(fresh), pop.size(), pop.generation + 1);
}

std::vector<Individual> nondominated_members(const Population& pop)
{
    std::vector<Individual> out;
    const auto fronts = nondominated_sort(pop.objectives());
    if (!fronts.empty()) {
        for (std::size_t idx : fronts.front()) {
            out.push_back(pop.members[idx]);
        }
    }
    return out;
}

DynamicNsga2::DynamicNsga2(OptimizerConfig config) : config_(std::move(config))
{
    config_.validate();
}

void DynamicNsga2::initialize(const Box& box, std::size_t n, Evaluator& evaluate, RngStream& rng)
{
    box_ = box;
    pop_ = initialize_population(box, n, evaluate, rng);
}

void DynamicNsga2::step(Evaluator& evaluate, RngStream& rng)
{
    pop_ = nsga2_step(pop_, box_, evaluate, rng, config_);
}

void DynamicNsga2::on_change(Evaluator& evaluate, RngStream& rng)
{
    pop_ = gts::on_change(pop_, box_, evaluate, rng, config_.restart_fraction);
}

RandomSearch::RandomSearch(OptimizerConfig config) : config_(std::move(config))
{
    config_.validate();
}

void RandomSearch::initialize(const Box& box, std::size_t n, Evaluator& evaluate, RngStream& rng)
{
    box_ = box;
    pop_ = initialize_population(box, n, evaluate, rng);
}

void RandomSearch::step(Evaluator& evaluate, RngStream& rng)
{
    pop_ = random_search_step(pop_, box_, evaluate, rng);
}

void RandomSearch::on_change(Evaluator& evaluate, RngStream& rng)
{
    pop_ = gts::on_change(pop_, box_, evaluate, rng, config_.restart_fraction);
}

std::unique_ptr<DynamicOptimizer> make_optimizer(const std::string& name, const OptimizerConfig& config)
{
    if (name == "nsga2") {
        return std::make_unique<DynamicNsga2>(config);
    }
    if (name == "random") {
        return std::make_unique<RandomSearch>(config);
    }
    throw std::invalid_argument("unknown algorithm '" + name + "' (expected nsga2 or random)");
}

} // namespace gts
