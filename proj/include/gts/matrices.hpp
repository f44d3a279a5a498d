#ifndef GTS_MATRICES_HPP
#define GTS_MATRICES_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace gts {

/// Interaction-matrix configurations. The numeric values are the experiment group ids.
enum class MatrixGroup { Identity = 1, ImbalancedDiagonal = 2, DominantSymmetric = 3 };

MatrixGroup group_from_index(int index);
int group_index(MatrixGroup group);
std::string to_string(MatrixGroup group);

/// Dense symmetric matrix, row-major.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;

    /// Throws std::invalid_argument when entries.size() != n * n or the entries are not symmetric.
    SymmetricMatrix(std::size_t n, std::vector<double> entries);

    static SymmetricMatrix identity(std::size_t n);
    static SymmetricMatrix diagonal(std::span<const double> values);

    std::size_t dim() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    const std::vector<double>& entries() const { return entries_; }

    bool operator==(const SymmetricMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> entries_;
};

/// Symbolic description of an interaction matrix.
///
/// For DominantSymmetric the diagonal is (start, start + 1, ..., start + dim - 1) and the
/// off-diagonal entries come from `off_diag_pattern` (row-major 0/1 mask, zero diagonal).
/// An empty pattern means all off-diagonal entries are 1.
struct InteractionMatrixSpec {
    MatrixGroup group = MatrixGroup::Identity;
    std::size_t dim = 1;
    std::size_t start = 0;
    std::vector<std::uint8_t> off_diag_pattern;

    /// The configuration used by experiment group `group`: Group 3 starts at dim + 1
    /// with every off-diagonal entry set to 1.
    static InteractionMatrixSpec for_group(MatrixGroup group, std::size_t dim);
};

/// Symmetric positive definite matrix produced by build_matrix().
class InteractionMatrix {
public:
    const InteractionMatrixSpec& spec() const { return spec_; }
    const SymmetricMatrix& matrix() const { return matrix_; }
    std::size_t dim() const { return matrix_.dim(); }

    /// P M P^T for the permutation `perm` (perm[i] is the source row of row i).
    /// Experimental hook for time-varying interaction structure; keeps definiteness.
    InteractionMatrix permuted(std::span<const std::size_t> perm) const;

private:
    friend InteractionMatrix build_matrix(const InteractionMatrixSpec& spec);
    InteractionMatrix(InteractionMatrixSpec spec, SymmetricMatrix matrix)
        : spec_(std::move(spec)), matrix_(std::move(matrix))
    {
    }

    InteractionMatrixSpec spec_;
    SymmetricMatrix matrix_;
};

/// Raised when a leading principal minor is not strictly positive.
class NotPositiveDefinite : public std::runtime_error {
public:
    NotPositiveDefinite(std::size_t index, std::vector<double> minors);

    /// 1-based order of the first nonpositive minor.
    std::size_t index() const { return index_; }
    const std::vector<double>& minors() const { return minors_; }

private:
    std::size_t index_;
    std::vector<double> minors_;
};

/// Builds and validates the matrix. Throws std::invalid_argument for a DominantSymmetric spec
/// with start < dim or a malformed mask, and NotPositiveDefinite if validation fails.
InteractionMatrix build_matrix(const InteractionMatrixSpec& spec);

/// The n leading principal minors, computed by fraction-free (Bareiss) elimination.
std::vector<double> leading_principal_minors(const SymmetricMatrix& m);

/// Returns the leading principal minors, or throws NotPositiveDefinite.
std::vector<double> verify_positive_definite(const SymmetricMatrix& m);

/// max(diagonal) / min(diagonal). Throws std::domain_error for a nonpositive diagonal entry.
double imbalance_ratio(const SymmetricMatrix& m);

/// v^T M v. Throws std::invalid_argument on a dimension mismatch.
double quadratic_form(const SymmetricMatrix& m, std::span<const double> v);

nlohmann::json to_json(const InteractionMatrix& m);

} // namespace gts

#endif
