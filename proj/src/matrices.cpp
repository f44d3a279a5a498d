#include "gts/matrices.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gts {

namespace {

constexpr double kPivotTolerance = 1e-12;

// Determinant of the leading `size` x `size` block by Gaussian elimination with partial pivoting.
double leading_determinant(const SymmetricMatrix& m, std::size_t size)
{
    std::vector<double> a(size * size);
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            a[i * size + j] = m(i, j);
        }
    }
    double det = 1.0;
    for (std::size_t col = 0; col < size; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < size; ++r) {
            if (std::abs(a[r * size + col]) > std::abs(a[pivot * size + col])) {
                pivot = r;
            }
        }
        if (std::abs(a[pivot * size + col]) < kPivotTolerance) {
            return 0.0;
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < size; ++j) {
                std::swap(a[pivot * size + j], a[col * size + j]);
            }
            det = -det;
        }
        const double p = a[col * size + col];
        det *= p;
        for (std::size_t r = col + 1; r < size; ++r) {
            const double factor = a[r * size + col] / p;
            for (std::size_t j = col; j < size; ++j) {
                a[r * size + j] -= factor * a[col * size + j];
            }
        }
    }
    return det;
}

} // namespace

MatrixGroup group_from_index(int index)
{
    switch (index) {
    case 1: return MatrixGroup::Identity;
    case 2: return MatrixGroup::ImbalancedDiagonal;
    case 3: return MatrixGroup::DominantSymmetric;
    default: throw std::invalid_argument("matrix group must be 1, 2 or 3, got " + std::to_string(index));
    }
}

int group_index(MatrixGroup group) { return static_cast<int>(group); }

std::string to_string(MatrixGroup group)
{
    switch (group) {
    case MatrixGroup::Identity: return "identity";
    case MatrixGroup::ImbalancedDiagonal: return "imbalanced_diagonal";
    case MatrixGroup::DominantSymmetric: return "symmetric_interaction";
    }
    return "unknown";
}

SymmetricMatrix::SymmetricMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries))
{
    if (entries_.size() != n_ * n_) {
        throw std::invalid_argument("matrix entry count does not match dimension");
    }
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            if (entries_[i * n_ + j] != entries_[j * n_ + i]) {
                throw std::invalid_argument("matrix is not symmetric");
            }
        }
    }
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n)
{
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        e[i * n + i] = 1.0;
    }
    return SymmetricMatrix(n, std::move(e));
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> values)
{
    const std::size_t n = values.size();
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        e[i * n + i] = values[i];
    }
    return SymmetricMatrix(n, std::move(e));
}

InteractionMatrixSpec InteractionMatrixSpec::for_group(MatrixGroup group, std::size_t dim)
{
    InteractionMatrixSpec spec;
    spec.group = group;
    spec.dim = dim;
    if (group == MatrixGroup::DominantSymmetric) {
        spec.start = dim + 1;
    }
    return spec;
}

NotPositiveDefinite::NotPositiveDefinite(std::size_t index, std::vector<double> minors)
    : std::runtime_error("matrix is not positive definite: leading principal minor "
                         + std::to_string(index) + " is not positive"),
      index_(index), minors_(std::move(minors))
{
}

InteractionMatrix build_matrix(const InteractionMatrixSpec& spec)
{
    const std::size_t n = spec.dim;
    if (n == 0) {
        throw std::invalid_argument("interaction matrix dimension must be positive");
    }
    std::vector<double> e(n * n, 0.0);
    switch (spec.group) {
    case MatrixGroup::Identity:
        for (std::size_t i = 0; i < n; ++i) {
            e[i * n + i] = 1.0;
        }
        break;
    case MatrixGroup::ImbalancedDiagonal:
        for (std::size_t i = 0; i < n; ++i) {
            e[i * n + i] = static_cast<double>(i + 1);
        }
        break;
    case MatrixGroup::DominantSymmetric: {
        if (spec.start < n) {
            throw std::invalid_argument("diagonal start " + std::to_string(spec.start)
                                        + " is below the dimension " + std::to_string(n));
        }
        const auto& mask = spec.off_diag_pattern;
        if (!mask.empty()) {
            if (mask.size() != n * n) {
                throw std::invalid_argument("off-diagonal mask has the wrong size");
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (mask[i * n + i] != 0) {
                    throw std::invalid_argument("off-diagonal mask must have a zero diagonal");
                }
                for (std::size_t j = 0; j < n; ++j) {
                    if (mask[i * n + j] > 1) {
                        throw std::invalid_argument("off-diagonal mask entries must be 0 or 1");
                    }
                    if (mask[i * n + j] != mask[j * n + i]) {
                        throw std::invalid_argument("off-diagonal mask is not symmetric");
                    }
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) {
                    e[i * n + j] = static_cast<double>(spec.start + i);
                } else {
                    e[i * n + j] = mask.empty() ? 1.0 : static_cast<double>(mask[i * n + j]);
                }
            }
        }
        break;
    }
    }
    SymmetricMatrix m(n, std::move(e));
    verify_positive_definite(m);
    return InteractionMatrix(spec, std::move(m));
}

InteractionMatrix InteractionMatrix::permuted(std::span<const std::size_t> perm) const
{
    const std::size_t n = dim();
    if (perm.size() != n) {
        throw std::invalid_argument("permutation length does not match matrix dimension");
    }
    std::vector<bool> seen(n, false);
    for (std::size_t p : perm) {
        if (p >= n || seen[p]) {
            throw std::invalid_argument("not a permutation");
        }
        seen[p] = true;
    }
    std::vector<double> e(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            e[i * n + j] = matrix_(perm[i], perm[j]);
        }
    }
    return InteractionMatrix(spec_, SymmetricMatrix(n, std::move(e)));
}

std::vector<double> leading_principal_minors(const SymmetricMatrix& m)
{
    const std::size_t n = m.dim();
    std::vector<double> a = m.entries();
    std::vector<double> minors;
    minors.reserve(n);
    double previous = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double pivot = a[k * n + k];
        minors.push_back(pivot);
        if (std::abs(pivot) < kPivotTolerance) {
            // Bareiss cannot divide by a vanishing pivot; finish the remaining orders directly.
            for (std::size_t size = k + 2; size <= n; ++size) {
                minors.push_back(leading_determinant(m, size));
            }
            break;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i * n + j] = (a[i * n + j] * pivot - a[i * n + k] * a[k * n + j]) / previous;
            }
        }
        previous = pivot;
    }
    return minors;
}

std::vector<double> verify_positive_definite(const SymmetricMatrix& m)
{
    auto minors = leading_principal_minors(m);
    for (std::size_t i = 0; i < minors.size(); ++i) {
        if (!(minors[i] > 0.0)) {
            throw NotPositiveDefinite(i + 1, std::move(minors));
        }
    }
    return minors;
}

double imbalance_ratio(const SymmetricMatrix& m)
{
    if (m.dim() == 0) {
        throw std::domain_error("imbalance ratio of an empty matrix");
    }
    double lo = m(0, 0);
    double hi = m(0, 0);
    for (std::size_t i = 0; i < m.dim(); ++i) {
        const double d = m(i, i);
        if (!(d > 0.0)) {
            throw std::domain_error("imbalance ratio needs a strictly positive diagonal");
        }
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return hi / lo;
}

double quadratic_form(const SymmetricMatrix& m, std::span<const double> v)
{
    const std::size_t n = m.dim();
    if (v.size() != n) {
        throw std::invalid_argument("quadratic form: vector has length " + std::to_string(v.size())
                                    + ", matrix has dimension " + std::to_string(n));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row += m(i, j) * v[j];
        }
        total += v[i] * row;
    }
    return total;
}

nlohmann::json to_json(const InteractionMatrix& m)
{
    nlohmann::json j;
    j["group"] = group_index(m.spec().group);
    j["dim"] = m.dim();
    j["start"] = m.spec().start;
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t k = 0; k < m.dim(); ++k) {
            row.push_back(m.matrix()(i, k));
        }
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j;
}

} // namespace gts
