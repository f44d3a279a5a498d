#ifndef GTS_CONFIG_HPP
#define GTS_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gts/dynamics.hpp"
#include "gts/optimizer.hpp"

namespace gts {

/// Everything one `run` invocation needs. Defaults follow the usual experimental setup.
struct ExperimentConfig {
    std::vector<std::string> problems{"GTS1"};
    std::vector<int> groups{1};
    std::vector<Schedule> schedules{Schedule::IrregularPi};
    std::vector<int> n_t_values{5, 10};
    std::vector<int> tau_t_values{5, 10};
    int environments = 50;
    int warmup_generations = 50;
    int repeats = 20;
    std::size_t dimension = 10;
    double p_exponent = 1.0;
    OptimizerConfig optimizer;
    std::uint64_t master_seed = 1;
    std::filesystem::path output_dir = "results";
    std::vector<std::string> algorithms{"nsga2"};
    std::optional<std::size_t> ref_front_n2;
    std::optional<std::size_t> ref_front_n3;
    int parallel = 1;
    bool save_fronts = false;
    std::optional<std::filesystem::path> cache_dir;

    std::size_t reference_size(std::size_t objective_count) const;

    /// Throws std::invalid_argument describing the first bad setting.
    void validate() const;
};

/// Parses the key = value configuration format (see README). Unknown keys are errors.
ExperimentConfig parse_config(std::string_view text);

ExperimentConfig load_config(const std::filesystem::path& path);

} // namespace gts

#endif
