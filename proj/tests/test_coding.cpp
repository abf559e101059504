#include <cmath>

#include <doctest.h>

#include "ratecode/coding.hpp"
#include "ratecode/datagen.hpp"
#include "support/oracles.hpp"

using namespace ratecode;

namespace {

Matrix gaussian_samples(Index n, Index m, const Vector& stddev, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Matrix w(n, m);
    for (Index j = 0; j < m; ++j)
        for (Index i = 0; i < n; ++i) w(i, j) = stddev(i) * rng.gaussian();
    return w;
}

}  // namespace

TEST_CASE("coding_rate of the zero matrix is zero") {
    const Matrix w = Matrix::Zero(4, 7);
    CHECK(coding_rate(w, Distortion(0.3)) == doctest::Approx(0.0));
    CHECK(coding_length(w, Distortion(2.0)) == doctest::Approx(0.0));
    CHECK(coding_length_with_mean(w, Distortion(0.7)) == doctest::Approx(0.0));
}

TEST_CASE("scalar closed form: one sample at eps*sqrt(3)") {
    const double eps = 0.25;
    Matrix w(1, 1);
    w(0, 0) = eps * std::sqrt(3.0);
    // 1/2 log2(1 + 3) = 1 bit; length multiplies by (m + n) = 2.
    CHECK(coding_rate(w, Distortion(eps)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(coding_length(w, Distortion(eps)) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("coding_rate matches the dense determinant oracle on degenerate data") {
    Vector stddev(3);
    stddev << 1.0, 1.0, 1e-4;  // variance 1e-8 in the last axis
    const Matrix w = gaussian_samples(3, 50, stddev, 11);
    const double eps = 0.1;
    const double alpha = 3.0 / (50.0 * eps * eps);
    const double expected = 0.5 * oracle::log2_det_dense(alpha, w);
    const double got = coding_rate(w, Distortion(eps));
    CHECK(std::abs(got - expected) <= 1e-9 * (1.0 + std::abs(expected)));
}

TEST_CASE("coding_length on orthogonal-row design matches oracle and closed form") {
    Matrix w(2, 4);
    w << 1, 1, -1, -1,
         1, -1, 1, -1;  // W W^T = 4 I
    const double eps = 0.35;
    const double got = coding_length(w, Distortion(eps));
    const double closed = 0.5 * 6.0 * 2.0 * std::log2(1.0 + 2.0 / (eps * eps));
    CHECK(got == doctest::Approx(closed).epsilon(1e-12));
    const double alpha = 2.0 / (4.0 * eps * eps);
    const double dense = 3.0 * oracle::log2_det_dense(alpha, w);
    CHECK(std::abs(got - dense) <= 1e-9 * (1.0 + std::abs(dense)));
}

TEST_CASE("coding_length_with_mean: repeated identical columns leave only the mean term") {
    Vector v(3);
    v << 1.0, -2.0, 0.5;
    Matrix x(3, 6);
    for (Index i = 0; i < 6; ++i) x.col(i) = v;
    const double eps = 0.4;
    const double expected = 1.5 * std::log2(1.0 + v.squaredNorm() / (eps * eps));
    CHECK(coding_length_with_mean(x, Distortion(eps)) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("coding_length_with_mean matches the longhand eigendecomposition oracle") {
    SplitMix64 rng(23);
    const Matrix x = oracle::random_matrix(4, 30, rng, 1.3);
    const double eps = 0.5;
    const double expected = oracle::coding_length_with_mean(x, eps);
    const double got = coding_length_with_mean(x, Distortion(eps));
    CHECK(std::abs(got - expected) <= 1e-9 * (1.0 + std::abs(expected)));
}

TEST_CASE("kernel_coding_length basics") {
    SUBCASE("zero Gram codes nothing") {
        GramMatrix k{Matrix::Zero(5, 5), 3};
        CHECK(kernel_coding_length(k, Distortion(0.2)) == doctest::Approx(0.0));
    }
    SUBCASE("equals coding_length through the Gram identity") {
        SplitMix64 rng(31);
        const Matrix w = oracle::random_matrix(3, 6, rng);
        GramMatrix k{w.transpose() * w, 3};
        const double eps = 0.3;
        const double direct = coding_length(w, Distortion(eps));
        const double via_gram = kernel_coding_length(k, Distortion(eps));
        CHECK(std::abs(direct - via_gram) <= 1e-9 * (1.0 + std::abs(direct)));
    }
    SUBCASE("identity Gram with ambient_dim = m reduces to the scalar formula") {
        const Index m = 4;
        GramMatrix k{Matrix::Identity(m, m), m};
        const double eps = 0.6;
        const double expected =
            static_cast<double>(m) * static_cast<double>(m) *
            std::log2(1.0 + 1.0 / (eps * eps));
        CHECK(kernel_coding_length(k, Distortion(eps)) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("indefinite matrix is rejected") {
        Matrix bad = Matrix::Identity(3, 3);
        bad(2, 2) = -0.5;
        CHECK_THROWS_AS(kernel_coding_length({bad, 3}, Distortion(0.2)),
                        NotPositiveSemidefinite);
    }
    SUBCASE("asymmetric matrix is rejected") {
        Matrix bad = Matrix::Identity(3, 3);
        bad(0, 2) = 0.25;
        CHECK_THROWS_AS(kernel_coding_length({bad, 3}, Distortion(0.2)), InvalidInput);
    }
}

TEST_CASE("effective_dimension closed forms") {
    CHECK(effective_dimension(Matrix::Zero(3, 3), Distortion(0.1)) == doctest::Approx(0.0));

    const Index n = 5;
    // eps^2 = n makes every eigenvalue term 1 / (1 + 1).
    CHECK(effective_dimension(Matrix::Identity(n, n), Distortion(std::sqrt(5.0))) ==
          doctest::Approx(2.5).epsilon(1e-12));

    Matrix sigma = Matrix::Zero(2, 2);
    sigma(0, 0) = 1.0;
    sigma(1, 1) = 1e-12;
    const double eps = 1e-3;
    const double ridge = eps * eps / 2.0;
    const double expected = 1.0 / (ridge + 1.0) * 1.0 + 1e-12 / (ridge + 1e-12);
    const double got = effective_dimension(sigma, Distortion(eps));
    CHECK(std::abs(got - expected) <= 1e-9 * (1.0 + expected));
    CHECK(got > 0.99);

    Matrix not_psd = Matrix::Identity(2, 2);
    not_psd(1, 1) = -1.0;
    CHECK_THROWS_AS(effective_dimension(not_psd, Distortion(0.1)), NotPositiveSemidefinite);
}

TEST_CASE("input validation") {
    Matrix w = Matrix::Ones(2, 3);
    CHECK_THROWS_AS(Distortion(0.0), InvalidDistortion);
    CHECK_THROWS_AS(Distortion(-1.0), InvalidDistortion);
    w(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(coding_rate(w, Distortion(0.5)), InvalidInput);
    CHECK_THROWS_AS(coding_rate(Matrix(), Distortion(0.5)), InvalidInput);
}

TEST_CASE("property: nonnegativity and strict monotonicity in eps") {
    SplitMix64 rng(101);
    for (int trial = 0; trial < 40; ++trial) {
        const Index n = 1 + static_cast<Index>(rng.next_u64() % 8);
        const Index m = 1 + static_cast<Index>(rng.next_u64() % 24);
        const Matrix w = oracle::random_matrix(n, m, rng);
        const double r_small = coding_rate(w, Distortion(0.1));
        const double r_large = coding_rate(w, Distortion(0.4));
        CHECK(r_small >= 0.0);
        CHECK(r_large >= 0.0);
        CHECK(r_small > r_large);  // strict for nonzero data
        CHECK(coding_length_with_mean(w, Distortion(0.25)) >= 0.0);
    }
}

TEST_CASE("property: Gram identity and rotation invariance") {
    SplitMix64 rng(202);
    for (int trial = 0; trial < 40; ++trial) {
        const Index n = 1 + static_cast<Index>(rng.next_u64() % 8);
        const Index m = 1 + static_cast<Index>(rng.next_u64() % 16);
        const Matrix w = oracle::random_matrix(n, m, rng);
        const Distortion eps(0.2 + 0.5 * rng.uniform());

        const double direct = coding_length(w, eps);
        const double via_gram = kernel_coding_length({w.transpose() * w, n}, eps);
        CHECK(std::abs(direct - via_gram) <= 1e-9 * (1.0 + std::abs(direct)));

        const Matrix q = oracle::random_orthogonal(n, rng);
        const double rotated = coding_rate(q * w, eps);
        const double original = coding_rate(w, eps);
        CHECK(std::abs(rotated - original) <= 1e-9 * (1.0 + std::abs(original)));
    }
}

TEST_CASE("property: effective dimension bounds and limits") {
    SplitMix64 rng(303);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 2 + static_cast<Index>(rng.next_u64() % 6);
        const Matrix a = oracle::random_matrix(n, n, rng);
        const Matrix sigma = a * a.transpose() / static_cast<double>(n);
        const double d = effective_dimension(sigma, Distortion(0.5));
        CHECK(d >= 0.0);
        CHECK(d <= static_cast<double>(n) + 1e-12);
        // eps -> 0 pushes the softened dimension to n for non-singular spectra.
        CHECK(effective_dimension(sigma, Distortion(1e-8)) ==
              doctest::Approx(static_cast<double>(n)).epsilon(1e-6));
    }
    // Bimodal spectrum counts only the eigenvalues far above eps^2/n.
    Matrix sigma = Matrix::Zero(4, 4);
    sigma.diagonal() << 10.0, 5.0, 1e-10, 1e-12;
    const double d = effective_dimension(sigma, Distortion(0.1));
    CHECK(d == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("property: eigenvalue and triangular log-det routes agree") {
    SplitMix64 rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 2 + static_cast<Index>(rng.next_u64() % 6);
        const Index m = n + 4 + static_cast<Index>(rng.next_u64() % 12);
        const Matrix w = oracle::random_matrix(n, m, rng);
        const double eps = 0.3;
        const double alpha =
            static_cast<double>(n) / (static_cast<double>(m) * eps * eps);
        const double via_eigen = detail::log2_det_identity_plus_gram(alpha, w);
        const double via_chol = oracle::log2_det_cholesky(alpha, w * w.transpose());
        CHECK(std::abs(via_eigen - via_chol) <= 1e-8 * (1.0 + std::abs(via_chol)));
    }
}

TEST_CASE("moments path agrees with the sample path") {
    SplitMix64 rng(505);
    const Matrix x = oracle::random_matrix(3, 17, rng);
    const Distortion eps(0.45);
    const double direct = coding_length_with_mean(x, eps);
    const double via_moments = coding_length_from_moments(moments_of(x), eps);
    CHECK(std::abs(direct - via_moments) <= 1e-9 * (1.0 + std::abs(direct)));
}
