// Test-only reference implementations. These deliberately take different
// numerical routes than the library (dense LU determinants, explicit
// covariance loops, triangular factorizations) so that agreement is evidence,
// not tautology.
#ifndef RATECODE_TESTS_SUPPORT_ORACLES_HPP_
#define RATECODE_TESTS_SUPPORT_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include "ratecode/datagen.hpp"
#include "ratecode/segmentation.hpp"
#include "ratecode/types.hpp"

namespace oracle {

using ratecode::Index;
using ratecode::Matrix;
using ratecode::Vector;

/// log2 det(I + alpha W W^T) through a dense LU determinant on the full
/// ambient-size matrix.
inline double log2_det_dense(double alpha, const Matrix& w) {
    const Index n = w.rows();
    const Matrix full = Matrix::Identity(n, n) + alpha * w * w.transpose();
    return std::log2(Eigen::FullPivLU<Matrix>(full).determinant());
}

/// log2 det(I + alpha S) via a Cholesky (triangular) factorization.
inline double log2_det_cholesky(double alpha, const Matrix& sym) {
    const Index n = sym.rows();
    const Matrix full = Matrix::Identity(n, n) + alpha * sym;
    Eigen::LLT<Matrix> llt(full);
    double sum = 0.0;
    for (Index i = 0; i < n; ++i) sum += std::log2(llt.matrixL()(i, i));
    return 2.0 * sum;
}

/// Coding length with mean term, written out longhand: explicit mean loop,
/// explicit outer-product covariance, eigenvalues of the n x n covariance.
inline double coding_length_with_mean(const Matrix& x, double eps) {
    const Index n = x.rows();
    const Index m = x.cols();
    Vector mu = Vector::Zero(n);
    for (Index i = 0; i < m; ++i) mu += x.col(i);
    mu /= static_cast<double>(m);
    Matrix sigma = Matrix::Zero(n, n);
    for (Index i = 0; i < m; ++i) {
        const Vector d = x.col(i) - mu;
        sigma += d * d.transpose();
    }
    sigma /= static_cast<double>(m);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sigma, Eigen::EigenvaluesOnly);
    double log_det = 0.0;
    for (Index i = 0; i < n; ++i) {
        const double lambda = std::max(0.0, solver.eigenvalues()(i));
        log_det += std::log2(1.0 + static_cast<double>(n) / (eps * eps) * lambda);
    }
    return 0.5 * static_cast<double>(m + n) * log_det +
           0.5 * static_cast<double>(n) * std::log2(1.0 + mu.squaredNorm() / (eps * eps));
}

/// Segmented coding length evaluated straight from its definition.
inline double segmented_length(const Matrix& w, const std::vector<std::vector<Index>>& groups,
                               double eps) {
    const double m = static_cast<double>(w.cols());
    double total = 0.0;
    for (const auto& group : groups) {
        Matrix sub(w.rows(), static_cast<Index>(group.size()));
        for (std::size_t i = 0; i < group.size(); ++i)
            sub.col(static_cast<Index>(i)) = w.col(group[i]);
        total += coding_length_with_mean(sub, eps);
        const double size = static_cast<double>(group.size());
        total += size * (-std::log2(size / m));
    }
    return total;
}

/// Plain Gaussian MAP rule from given moments: argmax log N(x|mu, Sigma) +
/// log pi. Covariances must be non-singular. Returns the 0-based index.
struct MapClass {
    Vector mean;
    Matrix covariance;
    double prior;
};
inline std::size_t classify_map(const Vector& x, const std::vector<MapClass>& classes) {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < classes.size(); ++j) {
        const auto& c = classes[j];
        Eigen::LLT<Matrix> llt(c.covariance);
        const Vector d = x - c.mean;
        const double mahal = d.dot(llt.solve(d));
        double log_det = 0.0;
        for (Index i = 0; i < c.covariance.rows(); ++i)
            log_det += 2.0 * std::log(llt.matrixL()(i, i));
        const double score =
            -0.5 * (mahal + log_det +
                    static_cast<double>(x.size()) * std::log(2.0 * std::numbers::pi)) +
            std::log(c.prior);
        if (score > best_score) {
            best_score = score;
            best = j;
        }
    }
    return best;
}

/// Haar-ish random orthogonal matrix from a QR factorization of Gaussians.
inline Matrix random_orthogonal(Index n, ratecode::SplitMix64& rng) {
    Matrix g(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) g(i, j) = rng.gaussian();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    // Fix signs so the distribution does not favor reflections.
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < n; ++i)
        if (r(i, i) < 0) q.col(i) = -q.col(i);
    return q;
}

inline Matrix random_matrix(Index rows, Index cols, ratecode::SplitMix64& rng,
                            double scale = 1.0) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = scale * rng.gaussian();
    return m;
}

inline Matrix random_unit_columns(Index rows, Index cols, ratecode::SplitMix64& rng) {
    Matrix m = random_matrix(rows, cols, rng);
    for (Index j = 0; j < cols; ++j) m.col(j) /= m.col(j).norm();
    return m;
}

/// Best label agreement over all permutations of predicted group identities
/// (factorial in the group count, fine for k <= 5).
inline double best_permutation_agreement(const std::vector<int>& truth,
                                         const std::vector<int>& predicted) {
    std::vector<int> t_ids(truth), p_ids(predicted);
    std::sort(t_ids.begin(), t_ids.end());
    t_ids.erase(std::unique(t_ids.begin(), t_ids.end()), t_ids.end());
    std::sort(p_ids.begin(), p_ids.end());
    p_ids.erase(std::unique(p_ids.begin(), p_ids.end()), p_ids.end());

    std::vector<std::size_t> perm(p_ids.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    double best = 0.0;
    do {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const auto p_slot = static_cast<std::size_t>(
                std::lower_bound(p_ids.begin(), p_ids.end(), predicted[i]) - p_ids.begin());
            const std::size_t t_slot = perm[p_slot];
            if (t_slot < t_ids.size() && t_ids[t_slot] == truth[i]) ++hits;
        }
        best = std::max(best, static_cast<double>(hits) / static_cast<double>(truth.size()));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Group labels from a partition: label of sample i is the index of its group.
inline std::vector<int> partition_labels(const ratecode::Partition& p, Index m) {
    std::vector<int> labels(static_cast<std::size_t>(m), -1);
    for (std::size_t g = 0; g < p.groups.size(); ++g)
        for (Index idx : p.groups[g])
            labels[static_cast<std::size_t>(idx)] = static_cast<int>(g);
    return labels;
}

}  // namespace oracle

#endif  // RATECODE_TESTS_SUPPORT_ORACLES_HPP_
