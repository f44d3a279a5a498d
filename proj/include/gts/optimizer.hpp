#ifndef GTS_OPTIMIZER_HPP
#define GTS_OPTIMIZER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gts/pareto.hpp"
#include "gts/problems.hpp"
#include "gts/rng.hpp"

namespace gts {

struct Individual {
    Vector x;
    Vector f;
};

struct Population {
    std::vector<Individual> members;
    int generation = 0;

    std::size_t size() const { return members.size(); }
    std::vector<Vector> objectives() const;
};

/// Counting wrapper around the objective function of the current environment.
class Evaluator {
public:
    using Function = std::function<Vector(std::span<const double>)>;

    explicit Evaluator(Function fn) : fn_(std::move(fn)) {}

    Vector operator()(std::span<const double> x)
    {
        ++count_;
        return fn_(x);
    }

    /// Switches to the objective function of a new environment; the count carries on.
    void set_function(Function fn) { fn_ = std::move(fn); }

    std::uint64_t count() const { return count_; }

private:
    Function fn_;
    std::uint64_t count_ = 0;
};

struct OptimizerConfig {
    std::size_t pop_size = 100;
    double crossover_probability = 0.9;
    double crossover_eta = 20.0;
    /// Per-variable mutation probability; unset means 1 / D.
    std::optional<double> mutation_probability;
    double mutation_eta = 20.0;
    double restart_fraction = 0.3;

    /// Throws std::invalid_argument on out-of-range settings.
    void validate() const;

    double mutation_probability_for(std::size_t dimension) const
    {
        return mutation_probability.value_or(1.0 / static_cast<double>(dimension));
    }
};

/// N uniform samples from the box, each evaluated once.
Population initialize_population(const Box& box, std::size_t n, Evaluator& evaluate, RngStream& rng);

/// Indices of the `n` survivors of `objectives`: whole non-dominated fronts in rank order,
/// the last one truncated by decreasing crowding distance (ties to the lower index).
std::vector<std::size_t> environmental_selection(const std::vector<Vector>& objectives, std::size_t n);

/// Simulated binary crossover of two parents inside the box (Deb's bounded form).
void sbx_crossover(Vector& a, Vector& b, const Box& box, double eta, double probability, RngStream& rng);

/// Bounded polynomial mutation applied per variable with the given probability.
void polynomial_mutation(Vector& x, const Box& box, double eta, double probability, RngStream& rng);

/// One NSGA-II generation: N offspring (exactly N evaluations), then elitist selection on
/// parents plus offspring. Offspring identical to an earlier member rank after every
/// distinct point.
Population nsga2_step(const Population& pop, const Box& box, Evaluator& evaluate, RngStream& rng,
                      const OptimizerConfig& config);

/// Change response: resample ceil(restart_fraction * N) members uniformly, then re-evaluate
/// the whole population under the new environment (exactly N evaluations).
Population on_change(const Population& pop, const Box& box, Evaluator& evaluate, RngStream& rng,
                     double restart_fraction);

/// N fresh uniform samples merged with the current population by elitist selection.
Population random_search_step(const Population& pop, const Box& box, Evaluator& evaluate,
                              RngStream& rng);

/// Members of the population's first non-dominated front.
std::vector<Individual> nondominated_members(const Population& pop);

/// Contract between the harness and a dynamic optimizer.
class DynamicOptimizer {
public:
    virtual ~DynamicOptimizer() = default;

    virtual std::string name() const = 0;
    virtual void initialize(const Box& box, std::size_t n, Evaluator& evaluate, RngStream& rng) = 0;
    virtual void step(Evaluator& evaluate, RngStream& rng) = 0;
    /// Called once at every environment boundary with the new environment's evaluator.
    virtual void on_change(Evaluator& evaluate, RngStream& rng) = 0;
    virtual std::vector<Individual> final_front() const = 0;
    virtual const Population& population() const = 0;
};

class DynamicNsga2 : public DynamicOptimizer {
public:
    explicit DynamicNsga2(OptimizerConfig config);

    std::string name() const override { return "nsga2"; }
    void initialize(const Box& box, std::size_t n, Evaluator& evaluate, RngStream& rng) override;
    void step(Evaluator& evaluate, RngStream& rng) override;
    void on_change(Evaluator& evaluate, RngStream& rng) override;
    std::vector<Individual> final_front() const override { return nondominated_members(pop_); }
    const Population& population() const override { return pop_; }

private:
    OptimizerConfig config_;
    Box box_;
    Population pop_;
};

class RandomSearch : public DynamicOptimizer {
public:
    explicit RandomSearch(OptimizerConfig config);

    std::string name() const override { return "random"; }
    void initialize(const Box& box, std::size_t n, Evaluator& evaluate, RngStream& rng) override;
    void step(Evaluator& evaluate, RngStream& rng) override;
    void on_change(Evaluator& evaluate, RngStream& rng) override;
    std::vector<Individual> final_front() const override { return nondominated_members(pop_); }
    const Population& population() const override { return pop_; }

private:
    OptimizerConfig config_;
    Box box_;
    Population pop_;
};

/// "nsga2" or "random"; throws std::invalid_argument otherwise.
std::unique_ptr<DynamicOptimizer> make_optimizer(const std::string& name, const OptimizerConfig& config);

} // namespace gts

#endif
