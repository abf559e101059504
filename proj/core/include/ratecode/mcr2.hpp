#ifndef RATECODE_MCR2_HPP_
#define RATECODE_MCR2_HPP_

#include <vector>

#include "ratecode/types.hpp"

namespace ratecode {

/// Diagonals of the k membership matrices Pi_j, stored as rows of a k x m
/// matrix. Valid memberships are non-negative and column-stochastic: for each
/// sample i, sum_j weights(j, i) = 1.
struct Membership {
    Matrix weights;

    Index num_classes() const { return weights.rows(); }
    Index num_samples() const { return weights.cols(); }
    double trace(Index j) const { return weights.row(j).sum(); }

    void validate(Index m) const;
    bool is_hard(double tol = 1e-12) const;

    /// One-hot membership from integer labels; class order follows ascending
    /// label value.
    static Membership hard(const std::vector<int>& labels);
    static Membership uniform(Index k, Index m);
};

enum class NormalizationMode { Sphere, Frobenius };

/// Rates for one (Z, Pi, eps) evaluation. All values in bits.
struct RateReport {
    double rate_whole = 0.0;      // R(Z, eps)
    double rate_partition = 0.0;  // R^c(Z, eps | Pi)
    double delta_rate = 0.0;      // R - R^c
    std::vector<double> per_class_rates;
    std::vector<Index> skipped_classes;  // classes with zero trace
    double epsilon = 0.0;
    NormalizationMode normalization = NormalizationMode::Sphere;
    /// Whether the coding precision is fine enough for the per-class
    /// subspaces: eps^4 < min_j (tr Pi_j / m) (d / r_j)^2, with the empirical
    /// class rank r_j standing in for the subspace dimension.
    bool precision_condition = false;
    std::vector<Index> class_ranks;
};

/// Whole-set coding rate R(Z, eps) = 1/2 log2 det(I + d/(m eps^2) Z Z^T).
double rate_whole(const Matrix& features, const Distortion& eps);

/// Partition rate
///   R^c = sum_j tr(Pi_j)/(2m) log2 det(I + d/(tr(Pi_j) eps^2) Z Pi_j Z^T).
/// Classes with zero trace contribute nothing and are reported by delta_rate.
double rate_partition(const Matrix& features, const Membership& membership,
                      const Distortion& eps);

/// Full rate-reduction report, including per-class rates and the recorded
/// precision-condition flag.
RateReport delta_rate(const Matrix& features, const Membership& membership,
                      const Distortion& eps,
                      NormalizationMode mode = NormalizationMode::Sphere);

/// Analytic d x m gradient of Delta R with respect to the features:
///   alpha/ln2 (I + alpha Z Z^T)^{-1} Z
///     - sum_j tr(Pi_j)/m * alpha_j/ln2 (I + alpha_j Z Pi_j Z^T)^{-1} Z Pi_j.
Matrix delta_rate_gradient(const Matrix& features, const Membership& membership,
                           const Distortion& eps);

/// Projects to the chosen normalization: unit-sphere columns, or per-class
/// Frobenius norm ||Z_j||_F^2 = m_j (hard membership required).
Matrix normalize_features(const Matrix& features, NormalizationMode mode,
                          const Membership& membership);

struct OptimizeOptions {
    int max_steps = 500;
    double step_size = 1.0;
    int max_halvings = 20;
    /// Stop early once an accepted step improves Delta R by less than this.
    double min_improvement = 0.0;
};

struct OptimizeResult {
    Matrix features;
    std::vector<double> trajectory;  // Delta R after step t; [0] is the start
    int steps_taken = 0;
};

/// Projected gradient ascent on the product of unit spheres. Each step takes
/// the analytic gradient, renormalizes every column, and keeps the step only
/// if Delta R did not decrease, halving the step size otherwise (up to
/// max_halvings, then stopping). The recorded trajectory is non-decreasing.
OptimizeResult optimize_features(const Matrix& initial_features, const Membership& membership,
                                 const Distortion& eps, const OptimizeOptions& options = {});

/// Orthogonal low-rank embedding comparator: ||Z||_* - sum_j ||Z_j||_*.
/// Requires hard membership. Always <= 0; equals 0 exactly when the class
/// column spans are mutually orthogonal.
double ole_loss(const Matrix& features, const Membership& membership);

/// Contrastive rate distance between two feature sets of equal dimension:
///   R([Zi Zj], eps) - (R(Zi, eps) + R(Zj, eps)) / 2.
double pairwise_rate_distance(const Matrix& features_a, const Matrix& features_b,
                              const Distortion& eps);

/// Largest |entry| of Z_i^T Z_j over distinct hard classes; the between-class
/// orthogonality metric reported by training runs.
double between_class_coherence(const Matrix& features, const Membership& membership);

}  // namespace ratecode

#endif  // RATECODE_MCR2_HPP_
