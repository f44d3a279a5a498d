#include "gts/problems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gts {

namespace {

constexpr double kPi = std::numbers::pi;

bool has_two_positions(ProblemId id)
{
    switch (id) {
    case ProblemId::GTS1:
    case ProblemId::GTS3:
    case ProblemId::GTS4:
    case ProblemId::GTS6:
    case ProblemId::GTS7:
        return false;
    default:
        return true;
    }
}

bool forced_linkage(ProblemId id)
{
    return id == ProblemId::GTS6 || id == ProblemId::GTS7 || id == ProblemId::GTS8;
}

struct Interval {
    double lo;
    double hi;
};

// Per-coordinate search interval of (x_I, x_II1, x_II2).
struct BoxShape {
    Interval position;
    Interval ii1;
    Interval ii2;
};

BoxShape box_shape(ProblemId id)
{
    switch (id) {
    case ProblemId::GTS1:
    case ProblemId::GTS3:
    case ProblemId::GTS6: return {{0, 1}, {-1, 1}, {-1, 2}};
    case ProblemId::GTS2: return {{0, 1}, {0, 1}, {-1, 2}};
    case ProblemId::GTS4: return {{0, 1}, {0, 1}, {-1, 1}};
    case ProblemId::GTS5: return {{0, 1}, {-1, 1}, {-1, 2}};
    case ProblemId::GTS7: return {{-1, 2.5}, {-1, 1}, {0, 1}};
    case ProblemId::GTS8: return {{0, 1}, {0, 1}, {-1, 2}};
    case ProblemId::GTS9: return {{0, 1}, {0, 1}, {-1, 1}};
    case ProblemId::GTS10: return {{0, 1}, {0, 1}, {-1, 1}};
    case ProblemId::GTS11: return {{0, 1}, {0, 1}, {-1, 2}};
    }
    throw std::invalid_argument("unknown problem id");
}

double logistic(double alpha, double x1) { return 1.0 / (1.0 + std::exp(alpha * (x1 - 0.5))); }

// x1^H on the search box; the base is clamped so round-off never produces NaN.
double power_term(double base, double exponent) { return std::pow(std::max(base, 0.0), exponent); }

double cot_guarded(double t)
{
    const double scaled = 3.0 * t * t;
    if (std::abs(scaled - std::round(scaled)) < 1e-12) {
        return 1e-32;
    }
    const double angle = kPi * scaled;
    return std::cos(angle) / std::sin(angle);
}

// (v - h 1)^T M (v - h 1) without materializing the deviation vector.
double deviation_form(const SymmetricMatrix& m, std::span<const double> v, double h)
{
    const std::size_t n = m.dim();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double di = v[i] - h;
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row += m(i, j) * (v[j] - h);
        }
        total += di * row;
    }
    return total;
}

} // namespace

std::string to_string(ProblemId id) { return "GTS" + std::to_string(static_cast<int>(id)); }

std::vector<ProblemId> all_problem_ids()
{
    std::vector<ProblemId> ids;
    for (int k = 1; k <= 11; ++k) {
        ids.push_back(static_cast<ProblemId>(k));
    }
    return ids;
}

std::string_view to_string(PhiMode mode)
{
    switch (mode) {
    case PhiMode::KneeDistance: return "knee";
    case PhiMode::HvBased: return "hv";
    case PhiMode::IgdBased: return "igd";
    }
    return "knee";
}

PhiMode parse_phi_mode(std::string_view text)
{
    if (text == "knee") {
        return PhiMode::KneeDistance;
    }
    if (text == "hv") {
        return PhiMode::HvBased;
    }
    if (text == "igd") {
        return PhiMode::IgdBased;
    }
    throw std::invalid_argument("unknown linkage mode '" + std::string(text) + "'");
}

bool Box::contains(std::span<const double> x, double tolerance) const
{
    if (x.size() != lower.size()) {
        return false;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= lower[i] - tolerance && x[i] <= upper[i] + tolerance)) {
            return false;
        }
    }
    return true;
}

LinkageState phi_update(const LinkageState& state, std::span<const double> true_knee,
                        std::span<const double> est_knee, PhiMode mode, double aux)
{
    if (true_knee.size() != est_knee.size()) {
        throw std::invalid_argument("knee points have different objective counts");
    }
    LinkageState next;
    next.environment_index = state.environment_index + 1;
    next.prev_true_knee.assign(true_knee.begin(), true_knee.end());
    next.prev_est_knee.assign(est_knee.begin(), est_knee.end());
    switch (mode) {
    case PhiMode::KneeDistance: {
        double sq = 0.0;
        for (std::size_t j = 0; j < true_knee.size(); ++j) {
            const double d = true_knee[j] - est_knee[j];
            sq += d * d;
        }
        next.phi = 1.0 + std::sqrt(sq);
        break;
    }
    case PhiMode::HvBased:
        if (!(aux >= 0.0 && aux <= 1.0)) {
            throw std::domain_error("HV-based linkage needs a normalized HV in [0, 1], got "
                                    + std::to_string(aux));
        }
        next.phi = 2.0 - aux;
        break;
    case PhiMode::IgdBased:
        if (!(aux >= 0.0)) {
            throw std::domain_error("IGD-based linkage needs a nonnegative IGD");
        }
        next.phi = std::exp(aux);
        break;
    }
    return next;
}

Vector knee_point(const std::vector<Vector>& front)
{
    if (front.empty()) {
        throw std::invalid_argument("knee point of an empty front");
    }
    if (front.size() == 1) {
        return front.front();
    }
    const std::size_t m = front[0].size();
    // Anchors: the point with the largest value of each objective (corners of the front).
    std::vector<std::size_t> ext(m, 0);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 1; i < front.size(); ++i) {
            const double a = front[i][j];
            const double b = front[ext[j]][j];
            if (a > b || (a == b && front[i] < front[ext[j]])) {
                ext[j] = i;
            }
        }
    }

    std::function<double(const Vector&)> distance;
    auto euclid = [](const Vector& a, const Vector& b) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            s += (a[j] - b[j]) * (a[j] - b[j]);
        }
        return std::sqrt(s);
    };
    // Distance to the line through a and b (degenerates to the distance to a).
    auto line_distance = [&](const Vector& p, const Vector& a, const Vector& b) {
        Vector dir(a.size());
        double len2 = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            dir[j] = b[j] - a[j];
            len2 += dir[j] * dir[j];
        }
        if (len2 == 0.0) {
            return euclid(p, a);
        }
        double proj = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            proj += (p[j] - a[j]) * dir[j];
        }
        proj /= len2;
        double s = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            const double r = p[j] - a[j] - proj * dir[j];
            s += r * r;
        }
        return std::sqrt(s);
    };

    if (m == 2) {
        const Vector& a = front[ext[0]];
        const Vector& b = front[ext[1]];
        distance = [&, a, b](const Vector& p) { return line_distance(p, a, b); };
    } else if (m == 3) {
        const Vector& a = front[ext[0]];
        const Vector& b = front[ext[1]];
        const Vector& c = front[ext[2]];
        const double u[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
        const double v[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
        const double normal[3] = {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                                  u[0] * v[1] - u[1] * v[0]};
        const double norm = std::sqrt(normal[0] * normal[0] + normal[1] * normal[1]
                                      + normal[2] * normal[2]);
        if (norm > 1e-14) {
            distance = [a, normal, norm](const Vector& p) {
                return std::abs((p[0] - a[0]) * normal[0] + (p[1] - a[1]) * normal[1]
                                + (p[2] - a[2]) * normal[2])
                       / norm;
            };
        } else {
            // Collinear extremes: use the line through the two that are farthest apart.
            Vector p0 = a;
            Vector p1 = b;
            double best = euclid(a, b);
            if (euclid(a, c) > best) {
                p1 = c;
                best = euclid(a, c);
            }
            if (euclid(b, c) > best) {
                p0 = b;
                p1 = c;
            }
            distance = [&, p0, p1](const Vector& p) { return line_distance(p, p0, p1); };
        }
    } else {
        throw std::invalid_argument("knee point supports two or three objectives");
    }

    std::size_t best = 0;
    double best_distance = distance(front[0]);
    for (std::size_t i = 1; i < front.size(); ++i) {
        const double d = distance(front[i]);
        if (d > best_distance || (d == best_distance && front[i] < front[best])) {
            best = i;
            best_distance = d;
        }
    }
    return front[best];
}

Problem::Problem(ProblemId id, ProblemOptions options, std::optional<PhiMode> linkage,
                 std::size_t objectives, std::size_t positions, std::size_t ii1, std::size_t ii2,
                 Box box, InteractionMatrix m1, InteractionMatrix m2)
    : id_(id), options_(std::move(options)), linkage_(linkage), objectives_(objectives),
      positions_(positions), ii1_(ii1), ii2_(ii2), box_(std::move(box)), matrix1_(std::move(m1)),
      matrix2_(std::move(m2))
{
}

Problem Problem::make(ProblemId id, const ProblemOptions& options)
{
    const int k = static_cast<int>(id);
    if (k < 1 || k > 11) {
        throw std::invalid_argument("problem id must be GTS1..GTS11");
    }
    const std::size_t d = options.dimension;
    if (d < 4) {
        throw std::invalid_argument("dimension D must be at least 4, got " + std::to_string(d));
    }
    if (!(options.p_exponent >= 1.0)) {
        throw std::invalid_argument("exponent p must be >= 1");
    }
    const std::size_t positions = has_two_positions(id) ? 2 : 1;
    const std::size_t ii1 = d / 2 - 1;
    const std::size_t ii2 = d - positions - ii1;
    const std::size_t objectives = k >= 9 ? 3 : 2;

    std::optional<PhiMode> linkage = options.linkage;
    if (forced_linkage(id) && !linkage) {
        linkage = PhiMode::KneeDistance;
    }
    ProblemOptions stored = options;
    stored.linkage = linkage;

    const BoxShape shape = box_shape(id);
    Box box;
    for (std::size_t i = 0; i < d; ++i) {
        const Interval& iv = i < positions ? shape.position : (i < positions + ii1 ? shape.ii1 : shape.ii2);
        box.lower.push_back(iv.lo);
        box.upper.push_back(iv.hi);
    }
    auto m1 = build_matrix(InteractionMatrixSpec::for_group(options.group, ii1));
    auto m2 = build_matrix(InteractionMatrixSpec::for_group(options.group, ii2));
    return Problem(id, std::move(stored), linkage, objectives, positions, ii1, ii2, std::move(box),
                   std::move(m1), std::move(m2));
}

std::string Problem::selection() const
{
    std::string s = name() + ":group" + std::to_string(group_index(options_.group));
    if (linkage_) {
        s += ":linkage=" + std::string(to_string(*linkage_));
    }
    return s;
}

void Problem::check_length(std::span<const double> x) const
{
    if (x.size() != options_.dimension) {
        throw std::invalid_argument(name() + ": decision vector has length " + std::to_string(x.size())
                                    + ", expected " + std::to_string(options_.dimension));
    }
}

std::pair<double, double> Problem::h_values(std::span<const double> x, double t,
                                            const EnvScalars& e) const
{
    const double x1 = x[0];
    const double cos_half = std::cos(0.5 * kPi * t);
    const double shifted_power = e.G + power_term(x1, e.H);
    const double wave = e.G * std::sin(4.0 * kPi * x1) / (1.0 + std::abs(e.G));
    switch (id_) {
    case ProblemId::GTS1:
    case ProblemId::GTS5:
    case ProblemId::GTS6:
        return {cos_half, shifted_power};
    case ProblemId::GTS2:
        return {std::abs(std::atan(cot_guarded(t))) / kPi, shifted_power};
    case ProblemId::GTS3:
        return {wave, shifted_power};
    case ProblemId::GTS4:
        return {std::abs(e.G), wave};
    case ProblemId::GTS7:
        return {cos_half, logistic(e.alpha, x1)};
    case ProblemId::GTS8:
        return {logistic(e.alpha, x1), shifted_power};
    case ProblemId::GTS9:
        return {logistic(e.alpha, x1), std::sin(t * x1)};
    case ProblemId::GTS10:
        return {std::abs(e.G),
                -0.5 + std::abs(e.G * std::sin(4.0 * kPi * x1)) / (0.5 * (1.0 + std::abs(e.G)))};
    case ProblemId::GTS11:
        return {std::abs(e.G), shifted_power};
    }
    throw std::logic_error("unknown problem id");
}

double Problem::h1(std::span<const double> x, double t) const
{
    check_length(x);
    return h_values(x, t, env_scalars(t)).first;
}

double Problem::h2(std::span<const double> x, double t) const
{
    check_length(x);
    return h_values(x, t, env_scalars(t)).second;
}

std::pair<double, double> Problem::forms(std::span<const double> x, double t, double phi) const
{
    const auto [h1v, h2v] = h_values(x, t, env_scalars(t));
    const auto part1 = x.subspan(positions_, ii1_);
    const auto part2 = x.subspan(positions_ + ii1_, ii2_);
    if (hook_) {
        const auto r1 = matrix1_.permuted(hook_(t, ii1_));
        const auto r2 = matrix2_.permuted(hook_(t, ii2_));
        return {deviation_form(r1.matrix(), part1, phi * h1v),
                deviation_form(r2.matrix(), part2, phi * h2v)};
    }
    return {deviation_form(matrix1_.matrix(), part1, phi * h1v),
            deviation_form(matrix2_.matrix(), part2, phi * h2v)};
}

double Problem::g_base(std::span<const double> x, double t) const
{
    check_length(x);
    const auto [q1, q2] = forms(x, t, 1.0);
    const double p = options_.p_exponent;
    if (p == 1.0) {
        return 1.0 + q1 + q2;
    }
    return 1.0 + std::pow(std::max(q1, 0.0), 1.0 / p) + std::pow(std::max(q2, 0.0), 1.0 / p);
}

double Problem::g_linkage(std::span<const double> x, double t, double phi) const
{
    if (!linkage_) {
        throw std::logic_error(name() + " has no time-linkage");
    }
    check_length(x);
    const auto [q1, q2] = forms(x, t, phi);
    return 1.0 + q1 + q2;
}

double Problem::g_offset(double t) const
{
    switch (id_) {
    case ProblemId::GTS4: return -0.5 + 0.25 * std::sin(0.3 * kPi * t);
    case ProblemId::GTS5: return 0.5 + 0.5 * env_scalars(t).G;
    case ProblemId::GTS8: return 0.25 * std::abs(std::cos(0.3 * kPi * t));
    case ProblemId::GTS9: return std::abs(std::cos(0.27 * kPi * t));
    default: return 0.0;
    }
}

double Problem::g(std::span<const double> x, double t, double phi) const
{
    const double core = linkage_ ? g_linkage(x, t, phi) : g_base(x, t);
    return core + g_offset(t);
}

Vector Problem::objectives_from(std::span<const double> x, double t, double g,
                                const EnvScalars& e) const
{
    const double x1 = x[0];
    switch (id_) {
    case ProblemId::GTS1:
    case ProblemId::GTS6:
        return {x1, g * (1.0 - power_term(x1 / g, e.H))};
    case ProblemId::GTS2: {
        const double s = 0.5 * x1 + x[1];
        return {s, g * (2.8 - power_term(s / g, e.H))};
    }
    case ProblemId::GTS3: {
        const double ripple = 0.1 * std::sin(3.0 * kPi * x1);
        return {g * power_term(x1 + ripple, e.beta), g * power_term(1.0 - x1 + ripple, e.beta)};
    }
    case ProblemId::GTS4:
        return {g * (1.0 + t) / (x1 + 3.0), g * (x1 + 3.0) / (1.0 + t)};
    case ProblemId::GTS5: {
        const double s = 0.5 * x1 + x[1];
        const double ripple = 0.02 * std::sin(e.omega * kPi * s);
        return {g * (s + ripple), g * (1.6 - s + ripple)};
    }
    case ProblemId::GTS7:
        return {g * power_term(std::abs(x1 - e.a), e.H), g * power_term(std::abs(x1 - e.a - e.b), e.H)};
    case ProblemId::GTS8: {
        const double s = 0.5 * x1 + x[1];
        return {s, g * (2.8 - power_term(s / g, e.H))};
    }
    case ProblemId::GTS9: {
        const double c1 = std::cos(0.5 * kPi * x1);
        return {g * c1 * std::cos(0.5 * kPi * x[1]), g * c1 * std::sin(0.5 * kPi * x[1]),
                g * std::sin(0.5 * kPi * x1)};
    }
    case ProblemId::GTS10: {
        const int freq = snapped_floor(6.0 * e.G);
        double third = 0.0;
        for (std::size_t j = 0; j < 2; ++j) {
            const double s = std::sin(0.5 * kPi * x[j]);
            const double c = std::cos(freq * kPi * x[j]);
            third += s * s + s * c * c;
        }
        const double c1 = std::cos(0.5 * kPi * x1);
        const double c2 = std::cos(0.5 * kPi * x[1]);
        return {g * c1 * c1, g * c2 * c2, g * third};
    }
    case ProblemId::GTS11: {
        const double y = 0.5 + e.G * (x1 - 0.5);
        const double x2 = x[1];
        const double ry = y + 0.05 * std::sin(6.0 * kPi * y);
        return {g * (1.05 - y + 0.05 * std::sin(6.0 * kPi * y)),
                g * (1.05 - x2 + 0.05 * std::sin(6.0 * kPi * x2)) * ry,
                g * (x2 + 0.05 * std::sin(6.0 * kPi * x2)) * ry};
    }
    }
    throw std::logic_error("unknown problem id");
}

Vector Problem::evaluate_with_phi(std::span<const double> x, double t, double phi) const
{
    check_length(x);
    if (!box_.contains(x)) {
        throw std::out_of_range(name() + ": decision vector outside the search space");
    }
    const EnvScalars e = env_scalars(t);
    return objectives_from(x, t, g(x, t, phi), e);
}

Vector Problem::evaluate(std::span<const double> x, double t) const
{
    if (linkage_) {
        throw std::logic_error(name() + " has time-linkage; pass its LinkageState");
    }
    return evaluate_with_phi(x, t, 1.0);
}

Vector Problem::evaluate(std::span<const double> x, double t, const LinkageState& state) const
{
    if (!linkage_) {
        throw std::logic_error(name() + " has no time-linkage; evaluate without a state");
    }
    return evaluate_with_phi(x, t, state.phi);
}

std::vector<Vector> Problem::evaluate_batch(const std::vector<Vector>& xs, double t, double phi) const
{
    std::vector<Vector> out;
    out.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i].size() != options_.dimension) {
            throw std::invalid_argument("row " + std::to_string(i) + " has " + std::to_string(xs[i].size())
                                        + " columns, expected " + std::to_string(options_.dimension));
        }
        out.push_back(evaluate_with_phi(xs[i], t, phi));
    }
    return out;
}

std::pair<double, double> Problem::ps_position_range(std::size_t i, double t) const
{
    if (id_ == ProblemId::GTS7 && i == 0) {
        const EnvScalars e = env_scalars(t);
        return {e.a, e.a + e.b};
    }
    return {box_.lower[i], box_.upper[i]};
}

Vector Problem::ps_point(std::span<const double> positions, double t) const
{
    if (positions.size() != positions_) {
        throw std::invalid_argument("wrong number of position variables");
    }
    Vector x(options_.dimension, 0.0);
    std::copy(positions.begin(), positions.end(), x.begin());
    const auto [h1v, h2v] = h_values(x, t, env_scalars(t));
    std::fill(x.begin() + static_cast<std::ptrdiff_t>(positions_),
              x.begin() + static_cast<std::ptrdiff_t>(positions_ + ii1_), h1v);
    std::fill(x.begin() + static_cast<std::ptrdiff_t>(positions_ + ii1_), x.end(), h2v);
    return x;
}

std::vector<Vector> Problem::sample_ps(double t, std::size_t count) const
{
    if (count < 2) {
        throw std::invalid_argument("sample_ps needs count >= 2");
    }
    auto grid = [](std::pair<double, double> range, std::size_t n) {
        Vector v(n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = range.first + (range.second - range.first) * static_cast<double>(i)
                                     / static_cast<double>(n - 1);
        }
        v.back() = range.second;
        return v;
    };
    std::vector<Vector> out;
    if (positions_ == 1) {
        for (double x1 : grid(ps_position_range(0, t), count)) {
            const double pos[1] = {x1};
            out.push_back(ps_point(pos, t));
        }
    } else {
        const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count))));
        const Vector g1 = grid(ps_position_range(0, t), std::max<std::size_t>(side, 2));
        const Vector g2 = grid(ps_position_range(1, t), std::max<std::size_t>(side, 2));
        for (double x1 : g1) {
            for (double x2 : g2) {
                const double pos[2] = {x1, x2};
                out.push_back(ps_point(pos, t));
            }
        }
    }
    return out;
}

ProblemSelection parse_selection(std::string_view text)
{
    auto fail = [&](const std::string& why) {
        return std::invalid_argument("bad problem selection '" + std::string(text) + "': " + why);
    };
    ProblemSelection sel;
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = text.find(':', start);
        parts.push_back(text.substr(start, colon == std::string_view::npos ? std::string_view::npos
                                                                             : colon - start));
        if (colon == std::string_view::npos) {
            break;
        }
        start = colon + 1;
    }
    const std::string_view head = parts[0];
    if (head.size() < 4 || head.substr(0, 3) != "GTS") {
        throw fail("expected GTS<k>");
    }
    int k = 0;
    const auto digits = head.substr(3);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || k < 1 || k > 11) {
        throw fail("problem number must be 1..11");
    }
    sel.id = static_cast<ProblemId>(k);
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const std::string_view part = parts[i];
        if (part.substr(0, 5) == "group" && part.size() == 6) {
            if (sel.group) {
                throw fail("group given twice");
            }
            const char c = part[5];
            if (c < '1' || c > '3') {
                throw fail("group must be 1, 2 or 3");
            }
            sel.group = group_from_index(c - '0');
        } else if (part.substr(0, 8) == "linkage=") {
            if (sel.linkage) {
                throw fail("linkage given twice");
            }
            sel.linkage = parse_phi_mode(part.substr(8));
        } else {
            throw fail("unknown component '" + std::string(part) + "'");
        }
    }
    return sel;
}

Problem make_problem(std::string_view selection, ProblemOptions defaults)
{
    const ProblemSelection sel = parse_selection(selection);
    if (sel.group) {
        defaults.group = *sel.group;
    }
    if (sel.linkage) {
        defaults.linkage = sel.linkage;
    }
    return Problem::make(sel.id, defaults);
}

} // namespace gts
