#include "gts/dynamics.hpp"

#include <string>
#include <string_view>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gts {

namespace {

// Decimal digits of pi after the decimal point, 1000 of them.
constexpr std::string_view kPiDigits =
    "14159265358979323846264338327950288419716939937510"
    "58209749445923078164062862089986280348253421170679"
    "82148086513282306647093844609550582231725359408128"
    "48111745028410270193852110555964462294895493038196"
    "44288109756659334461284756482337867831652712019091"
    "45648566923460348610454326648213393607260249141273"
    "72458700660631558817488152092096282925409171536436"
    "78925903600113305305488204665213841469519415116094"
    "33057270365759591953092186117381932611793105118548"
    "07446237996274956735188575272489122793818301194912"
    "98336733624406566430860213949463952247371907021798"
    "60943702770539217176293176752384674818467669405132"
    "00056812714526356082778577134275778960917363717872"
    "14684409012249534301465495853710507922796892589235"
    "42019956112129021960864034418159813629774771309960"
    "51870721134999999837297804995105973173281609631859"
    "50244594553469083026425223082533446850352619311881"
    "71010003137838752886587533208381420617177669147303"
    "59825349042875546873115956286388235378759375195778"
    "18577805321712268066130019278766111959092164201989";

static_assert(kPiDigits.size() == kPiDigitCount);

void check_schedule_args(std::int64_t tau, std::int64_t tau_t, std::int64_t n_t)
{
    if (tau < 0) {
        throw std::domain_error("generation counter tau must be nonnegative");
    }
    if (tau_t < 1) {
        throw std::domain_error("tau_t must be at least 1");
    }
    if (n_t < 1) {
        throw std::domain_error("n_t must be at least 1");
    }
}

} // namespace

std::string_view to_string(Schedule schedule)
{
    return schedule == Schedule::Regular ? "regular" : "irregular_pi";
}

Schedule parse_schedule(std::string_view text)
{
    if (text == "regular") {
        return Schedule::Regular;
    }
    if (text == "irregular_pi" || text == "irregular") {
        return Schedule::IrregularPi;
    }
    throw std::invalid_argument("unknown schedule '" + std::string(text) + "'");
}

int pi_digit(std::int64_t k)
{
    if (k < 0 || static_cast<std::uint64_t>(k) > kPiDigitCount) {
        throw std::domain_error("pi digit index " + std::to_string(k) + " outside [0, "
                                + std::to_string(kPiDigitCount) + "]");
    }
    if (k == 0) {
        return 0;
    }
    return kPiDigits[static_cast<std::size_t>(k - 1)] - '0';
}

std::int64_t environment_index(std::int64_t tau, std::int64_t tau_t)
{
    if (tau < 0 || tau_t < 1) {
        throw std::domain_error("environment_index requires tau >= 0 and tau_t >= 1");
    }
    return tau / tau_t;
}

double regular_time(std::int64_t tau, std::int64_t tau_t, std::int64_t n_t)
{
    check_schedule_args(tau, tau_t, n_t);
    return static_cast<double>(tau / tau_t) / static_cast<double>(n_t);
}

double irregular_time(std::int64_t tau, std::int64_t tau_t, std::int64_t n_t)
{
    check_schedule_args(tau, tau_t, n_t);
    const std::int64_t k = tau / tau_t;
    const double inv = 1.0 / static_cast<double>(n_t);
    return static_cast<double>(k) / static_cast<double>(n_t)
           + inv * (0.5 * static_cast<double>(pi_digit(k)) / 9.0);
}

double schedule_time(Schedule schedule, std::int64_t tau, std::int64_t tau_t, std::int64_t n_t)
{
    return schedule == Schedule::Regular ? regular_time(tau, tau_t, n_t)
                                         : irregular_time(tau, tau_t, n_t);
}

double environment_time(Schedule schedule, std::int64_t k, std::int64_t tau_t, std::int64_t n_t)
{
    if (k < 0) {
        throw std::domain_error("environment index must be nonnegative");
    }
    return schedule_time(schedule, k * tau_t, tau_t, n_t);
}

TimeContext::TimeContext(std::int64_t tau_t, std::int64_t n_t, Schedule schedule, std::int64_t tau)
    : tau_t_(tau_t), n_t_(n_t), schedule_(schedule), tau_(tau)
{
    check_schedule_args(tau, tau_t, n_t);
}

int snapped_floor(double value)
{
    return static_cast<int>(std::floor(value + 1e-9));
}

EnvScalars env_scalars(double t)
{
    const double angle = 0.5 * std::numbers::pi * t;
    const double s = std::sin(angle);
    const double c = std::cos(angle);
    EnvScalars e{};
    e.G = s;
    e.H = 1.5 + s;
    e.alpha = 5.0 * c;
    e.beta = 0.2 + 2.8 * std::abs(s);
    e.omega = snapped_floor(10.0 * s);
    e.a = s;
    e.b = 1.0 + std::abs(c);
    return e;
}

} // namespace gts
