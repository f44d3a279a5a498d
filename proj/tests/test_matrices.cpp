#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "gts/matrices.hpp"

using namespace gts;

namespace {

// Determinant by cofactor expansion; used as an oracle for the minors on small matrices.
double cofactor_det(const std::vector<std::vector<double>>& a)
{
    const std::size_t n = a.size();
    if (n == 1) {
        return a[0][0];
    }
    double det = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::vector<double>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<double> row;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != c) {
                    row.push_back(a[r][k]);
                }
            }
            minor.push_back(row);
        }
        det += (c % 2 == 0 ? 1.0 : -1.0) * a[0][c] * cofactor_det(minor);
    }
    return det;
}

std::vector<std::uint8_t> random_mask(std::size_t n, std::mt19937& gen)
{
    std::vector<std::uint8_t> mask(n * n, 0);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            mask[i * n + j] = mask[j * n + i] = coin(gen) ? 1 : 0;
        }
    }
    return mask;
}

} // namespace

TEST_CASE("group matrices")
{
    const auto id = build_matrix(InteractionMatrixSpec::for_group(MatrixGroup::Identity, 3));
    CHECK(id.matrix() == SymmetricMatrix::identity(3));

    const auto diag = build_matrix(InteractionMatrixSpec::for_group(MatrixGroup::ImbalancedDiagonal, 4));
    CHECK(diag.matrix().entries() ==
          std::vector<double>{1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 3, 0, 0, 0, 0, 4});

    const auto g3 = build_matrix(InteractionMatrixSpec::for_group(MatrixGroup::DominantSymmetric, 3));
    CHECK(g3.matrix().entries() == std::vector<double>{4, 1, 1, 1, 5, 1, 1, 1, 6});
}

TEST_CASE("dominant construction with start k = n")
{
    InteractionMatrixSpec spec{MatrixGroup::DominantSymmetric, 3, 3, {}};
    const auto m = build_matrix(spec);
    CHECK(m.matrix().entries() == std::vector<double>{3, 1, 1, 1, 4, 1, 1, 1, 5});
    const auto minors = verify_positive_definite(m.matrix());
    REQUIRE(minors.size() == 3);
    CHECK(minors[0] == doctest::Approx(3));
    CHECK(minors[1] == doctest::Approx(11));
    CHECK(minors[2] == doctest::Approx(50));
}

TEST_CASE("build_matrix rejects invalid specs")
{
    CHECK_THROWS_AS(build_matrix({MatrixGroup::DominantSymmetric, 4, 3, {}}), std::invalid_argument);
    std::vector<std::uint8_t> asym{0, 1, 0, 0};
    CHECK_THROWS_AS(build_matrix({MatrixGroup::DominantSymmetric, 2, 2, asym}), std::invalid_argument);
    std::vector<std::uint8_t> diag_set{1, 0, 0, 0};
    CHECK_THROWS_AS(build_matrix({MatrixGroup::DominantSymmetric, 2, 2, diag_set}), std::invalid_argument);
    std::vector<std::uint8_t> two{0, 2, 2, 0};
    CHECK_THROWS_AS(build_matrix({MatrixGroup::DominantSymmetric, 2, 2, two}), std::invalid_argument);
}

TEST_CASE("verify_positive_definite reports the first bad minor")
{
    const SymmetricMatrix bad(2, {1, 2, 2, 1});
    const auto minors = leading_principal_minors(bad);
    CHECK(minors[0] == doctest::Approx(1));
    CHECK(minors[1] == doctest::Approx(-3));
    try {
        verify_positive_definite(bad);
        FAIL("expected NotPositiveDefinite");
    } catch (const NotPositiveDefinite& e) {
        CHECK(e.index() == 2);
    }
    CHECK(verify_positive_definite(SymmetricMatrix::identity(3)) == std::vector<double>{1, 1, 1});
}

TEST_CASE("minors match cofactor expansion on random symmetric matrices")
{
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 6;
        std::vector<double> e(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                e[i * n + j] = e[j * n + i] = u(gen);
            }
        }
        const SymmetricMatrix m(n, e);
        const auto minors = leading_principal_minors(m);
        for (std::size_t k = 1; k <= n; ++k) {
            std::vector<std::vector<double>> sub(k, std::vector<double>(k));
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t j = 0; j < k; ++j) {
                    sub[i][j] = e[i * n + j];
                }
            }
            const double expected = cofactor_det(sub);
            CHECK(minors[k - 1] == doctest::Approx(expected).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("dominant construction is positive definite for random masks")
{
    std::mt19937 gen(11);
    for (std::size_t n = 1; n <= 12; ++n) {
        for (std::size_t k = n; k <= n + 3; ++k) {
            for (int trial = 0; trial < 30; ++trial) {
                const auto m = build_matrix({MatrixGroup::DominantSymmetric, n, k, random_mask(n, gen)});
                for (double minor : verify_positive_definite(m.matrix())) {
                    CHECK(minor > 0.0);
                }
            }
        }
    }
    for (std::size_t n : {20, 30}) {
        for (int trial = 0; trial < 5; ++trial) {
            CHECK_NOTHROW(build_matrix({MatrixGroup::DominantSymmetric, n, n, random_mask(n, gen)}));
        }
    }
}

TEST_CASE("Gershgorin bound: v'Mv >= |v|^2 for dominant symmetric matrices")
{
    std::mt19937 gen(3);
    std::normal_distribution<double> normal;
    for (std::size_t n = 2; n <= 10; ++n) {
        const auto m = build_matrix({MatrixGroup::DominantSymmetric, n, n, random_mask(n, gen)});
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> v(n);
            double norm2 = 0.0;
            for (auto& x : v) {
                x = normal(gen);
                norm2 += x * x;
            }
            CHECK(quadratic_form(m.matrix(), v) >= norm2 * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("quadratic forms")
{
    const std::vector<double> v123{1, 2, 3};
    CHECK(quadratic_form(SymmetricMatrix::identity(3), v123) == 14.0);
    const std::vector<double> d{1, 2, 3};
    const std::vector<double> ones{1, 1, 1};
    CHECK(quadratic_form(SymmetricMatrix::diagonal(d), ones) == 6.0);
    const SymmetricMatrix t1(3, {3, 1, 1, 1, 4, 1, 1, 1, 5});
    const std::vector<double> w{1, 0, -1};
    CHECK(quadratic_form(t1, w) == 6.0);
    const std::vector<double> zero{0, 0, 0};
    CHECK(quadratic_form(t1, zero) == 0.0);
    const std::vector<double> short_v{1, 2};
    CHECK_THROWS_AS(quadratic_form(t1, short_v), std::invalid_argument);
}

TEST_CASE("quadratic forms of group matrices are positive away from zero")
{
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto group : {MatrixGroup::Identity, MatrixGroup::ImbalancedDiagonal, MatrixGroup::DominantSymmetric}) {
        const auto m = build_matrix(InteractionMatrixSpec::for_group(group, 6));
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> v(6);
            for (auto& x : v) {
                x = u(gen);
            }
            CHECK(quadratic_form(m.matrix(), v) > 0.0);
        }
    }
}

TEST_CASE("imbalance ratio")
{
    CHECK(imbalance_ratio(SymmetricMatrix::identity(5)) == 1.0);
    std::vector<double> d(10);
    for (int i = 0; i < 10; ++i) {
        d[i] = i + 1;
    }
    CHECK(imbalance_ratio(SymmetricMatrix::diagonal(d)) == 10.0);
    const auto g3 = build_matrix({MatrixGroup::DominantSymmetric, 4, 5, {}});
    CHECK(imbalance_ratio(g3.matrix()) == doctest::Approx(1.6));
    const std::vector<double> bad{1, 0};
    CHECK_THROWS_AS(imbalance_ratio(SymmetricMatrix::diagonal(bad)), std::domain_error);
}

TEST_CASE("construction is deterministic and serializes")
{
    const auto spec = InteractionMatrixSpec::for_group(MatrixGroup::DominantSymmetric, 5);
    CHECK(build_matrix(spec).matrix() == build_matrix(spec).matrix());
    const auto j = to_json(build_matrix(spec));
    CHECK(j.at("group") == 3);
    CHECK(j.at("dim") == 5);
    CHECK(j.at("start") == 6);
    CHECK(j.at("entries").size() == 5);
}

TEST_CASE("permutation keeps the spectrum-relevant structure")
{
    const auto m = build_matrix(InteractionMatrixSpec::for_group(MatrixGroup::ImbalancedDiagonal, 3));
    const std::vector<std::size_t> perm{2, 0, 1};
    const auto p = m.permuted(perm);
    CHECK(p.matrix()(0, 0) == 3.0);
    CHECK(p.matrix()(1, 1) == 1.0);
    CHECK(p.matrix()(2, 2) == 2.0);
    CHECK_NOTHROW(verify_positive_definite(p.matrix()));
}
