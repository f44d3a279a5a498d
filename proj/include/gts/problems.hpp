#ifndef GTS_PROBLEMS_HPP
#define GTS_PROBLEMS_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gts/dynamics.hpp"
#include "gts/matrices.hpp"
#include "gts/pareto.hpp"

namespace gts {

enum class ProblemId : int {
    GTS1 = 1, GTS2, GTS3, GTS4, GTS5, GTS6, GTS7, GTS8, GTS9, GTS10, GTS11
};

std::string to_string(ProblemId id);
std::vector<ProblemId> all_problem_ids();

/// Source of the time-linkage multiplier phi.
enum class PhiMode { KneeDistance, HvBased, IgdBased };

std::string_view to_string(PhiMode mode);

/// Accepts "knee", "hv" and "igd".
PhiMode parse_phi_mode(std::string_view text);

/// Axis-aligned search box.
struct Box {
    Vector lower;
    Vector upper;

    std::size_t dim() const { return lower.size(); }
    bool contains(std::span<const double> x, double tolerance = 1e-12) const;
};

struct ProblemOptions {
    std::size_t dimension = 10;
    double p_exponent = 1.0;
    MatrixGroup group = MatrixGroup::Identity;
    Schedule schedule = Schedule::IrregularPi;
    /// Enables time-linkage with the given phi source. GTS6-GTS8 always have linkage and
    /// default to KneeDistance.
    std::optional<PhiMode> linkage;
};

/// Time-linkage state of one run. Never shared between runs.
struct LinkageState {
    double phi = 1.0;
    Vector prev_true_knee;
    Vector prev_est_knee;
    int environment_index = 0;

    /// State of the first environment: phi = 1, no history.
    static LinkageState initial() { return {}; }
};

/// Advances the linkage state across one environment boundary.
///
/// KneeDistance: phi = 1 + |true_knee - est_knee|. HvBased: phi = 2 - aux with aux the
/// previous environment's normalized HV in [0, 1] (std::domain_error otherwise).
/// IgdBased: phi = exp(aux) with aux the previous IGD (>= 0).
LinkageState phi_update(const LinkageState& state, std::span<const double> true_knee,
                        std::span<const double> est_knee, PhiMode mode, double aux = 0.0);

/// Point of `front` farthest from the hyperplane through its per-objective extreme points
/// (a line for two objectives, a plane for three). Ties go to the lexicographically smallest
/// vector. Throws std::invalid_argument on an empty front.
Vector knee_point(const std::vector<Vector>& front);

/// Experimental: permutation applied to both interaction matrices as a function of t.
using MatrixPermutationHook = std::function<std::vector<std::size_t>(double t, std::size_t dim)>;

/// One GTS problem bound to a dimension, matrix group and linkage setting.
///
/// The decision vector is x = (x_I, x_II1, x_II2) with |x_I| = 1 for GTS1/3/4/6/7 and 2
/// otherwise, |x_II1| = floor(D/2) - 1 and x_II2 the remainder.
class Problem {
public:
    /// Throws std::invalid_argument for D < 4 or p < 1.
    static Problem make(ProblemId id, const ProblemOptions& options = {});

    ProblemId id() const { return id_; }
    std::string name() const { return to_string(id_); }
    /// Selection string that recreates this instance, e.g. "GTS6:group2:linkage=knee".
    std::string selection() const;

    std::size_t dimension() const { return options_.dimension; }
    std::size_t objective_count() const { return objectives_; }
    std::size_t position_count() const { return positions_; }
    std::size_t ii1_size() const { return ii1_; }
    std::size_t ii2_size() const { return ii2_; }
    double p_exponent() const { return options_.p_exponent; }
    MatrixGroup group() const { return options_.group; }
    Schedule schedule() const { return options_.schedule; }
    bool time_linkage() const { return linkage_.has_value(); }
    std::optional<PhiMode> phi_mode() const { return linkage_; }
    const Box& box() const { return box_; }

    const InteractionMatrix& matrix1() const { return matrix1_; }
    const InteractionMatrix& matrix2() const { return matrix2_; }

    void set_permutation_hook(MatrixPermutationHook hook) { hook_ = std::move(hook); }

    double h1(std::span<const double> x, double t) const;
    double h2(std::span<const double> x, double t) const;

    /// 1 + Q1^(1/p) + Q2^(1/p), Q_j = (x_IIj - h_j)^T R_j (x_IIj - h_j).
    double g_base(std::span<const double> x, double t) const;

    /// 1 + Q1 + Q2 with h_j replaced by phi * h_j (no 1/p exponent). Linkage instances only.
    double g_linkage(std::span<const double> x, double t, double phi) const;

    /// Problem-specific additive term on g (zero for most instances).
    double g_offset(double t) const;

    /// Full g used by the objectives: g_base or g_linkage, plus g_offset.
    double g(std::span<const double> x, double t, double phi = 1.0) const;

    /// Objectives of a non-linkage instance. Throws std::logic_error for linkage instances
    /// and std::out_of_range when x leaves the search box.
    Vector evaluate(std::span<const double> x, double t) const;

    /// Objectives of a linkage instance under state.phi.
    Vector evaluate(std::span<const double> x, double t, const LinkageState& state) const;

    /// Objectives for an explicit phi; phi = 1 is the baseline every run is scored against.
    Vector evaluate_with_phi(std::span<const double> x, double t, double phi) const;

    /// Row-wise evaluate_with_phi. Throws std::invalid_argument on a row of the wrong length.
    std::vector<Vector> evaluate_batch(const std::vector<Vector>& xs, double t, double phi = 1.0) const;

    /// Uniform grid over the x_I part of the PS at phi = 1 (count points for one position
    /// variable, ceil(sqrt(count))^2 for two), with x_II set to h1 / h2.
    std::vector<Vector> sample_ps(double t, std::size_t count) const;

    /// The point of the PS at phi = 1 for the given position variables.
    Vector ps_point(std::span<const double> positions, double t) const;

    /// Range of x_I over the PS at t (GTS7 uses [a_t, a_t + b_t]).
    std::pair<double, double> ps_position_range(std::size_t i, double t) const;

private:
    Problem(ProblemId id, ProblemOptions options, std::optional<PhiMode> linkage,
            std::size_t objectives, std::size_t positions, std::size_t ii1, std::size_t ii2,
            Box box, InteractionMatrix m1, InteractionMatrix m2);

    void check_length(std::span<const double> x) const;
    std::pair<double, double> h_values(std::span<const double> x, double t,
                                       const EnvScalars& e) const;
    std::pair<double, double> forms(std::span<const double> x, double t, double phi) const;
    Vector objectives_from(std::span<const double> x, double t, double g_value,
                           const EnvScalars& e) const;

    ProblemId id_;
    ProblemOptions options_;
    std::optional<PhiMode> linkage_;
    std::size_t objectives_;
    std::size_t positions_;
    std::size_t ii1_;
    std::size_t ii2_;
    Box box_;
    InteractionMatrix matrix1_;
    InteractionMatrix matrix2_;
    MatrixPermutationHook hook_;
};

/// Parsed "GTS<k>[:group<1|2|3>][:linkage=<knee|hv|igd>]".
struct ProblemSelection {
    ProblemId id = ProblemId::GTS1;
    std::optional<MatrixGroup> group;
    std::optional<PhiMode> linkage;
};

/// Throws std::invalid_argument on a malformed selection string.
ProblemSelection parse_selection(std::string_view text);

/// Builds the instance named by `selection`; fields it leaves unset come from `defaults`.
Problem make_problem(std::string_view selection, ProblemOptions defaults = {});

} // namespace gts

#endif
