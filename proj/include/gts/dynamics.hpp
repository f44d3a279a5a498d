#ifndef GTS_DYNAMICS_HPP
#define GTS_DYNAMICS_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace gts {

/// How the environment index is mapped to the time value t.
enum class Schedule { Regular, IrregularPi };

std::string_view to_string(Schedule schedule);

/// Accepts "regular" and "irregular_pi".
Schedule parse_schedule(std::string_view text);

/// Number of decimal digits of pi embedded in the library.
inline constexpr std::size_t kPiDigitCount = 1000;

/// Digit k after the decimal point of pi (1-based), with digit 0 defined as 0.
///
/// Throws std::domain_error for k < 0 or k > kPiDigitCount.
int pi_digit(std::int64_t k);

/// floor(tau / tau_t): the environment index of generation tau.
std::int64_t environment_index(std::int64_t tau, std::int64_t tau_t);

/// t = floor(tau / tau_t) / n_t.
double regular_time(std::int64_t tau, std::int64_t tau_t, std::int64_t n_t);

/// t = k / n_t + (1 / n_t) * (0.5 * digit_k / 9) with k = floor(tau / tau_t).
double irregular_time(std::int64_t tau, std::int64_t tau_t, std::int64_t n_t);

double schedule_time(Schedule schedule, std::int64_t tau, std::int64_t tau_t, std::int64_t n_t);

/// Time value of environment k (the t seen by every generation of that environment).
double environment_time(Schedule schedule, std::int64_t k, std::int64_t tau_t, std::int64_t n_t);

/// Generation counter together with its schedule parameters.
///
/// t is piecewise constant: every tau inside one environment maps to the same value.
class TimeContext {
public:
    TimeContext(std::int64_t tau_t, std::int64_t n_t, Schedule schedule, std::int64_t tau = 0);

    std::int64_t tau() const { return tau_; }
    std::int64_t tau_t() const { return tau_t_; }
    std::int64_t n_t() const { return n_t_; }
    Schedule schedule() const { return schedule_; }

    std::int64_t environment() const { return environment_index(tau_, tau_t_); }
    double t() const { return schedule_time(schedule_, tau_, tau_t_, n_t_); }

    /// True when tau is the first generation of a new environment (tau > 0).
    bool at_boundary() const { return tau_ > 0 && tau_ % tau_t_ == 0; }

    void advance() { ++tau_; }

private:
    std::int64_t tau_t_;
    std::int64_t n_t_;
    Schedule schedule_;
    std::int64_t tau_;
};

/// Time-dependent scalars shared by the problem definitions.
struct EnvScalars {
    double G;      // sin(0.5 pi t)
    double H;      // 1.5 + G
    double alpha;  // 5 cos(0.5 pi t)
    double beta;   // 0.2 + 2.8 |G|
    int omega;     // floor(10 G)
    double a;      // sin(0.5 pi t)
    double b;      // 1 + |cos(0.5 pi t)|
};

EnvScalars env_scalars(double t);

/// floor() that absorbs round-off just below an integer, e.g. 10 * sin(pi / 6).
int snapped_floor(double value);

} // namespace gts

#endif
