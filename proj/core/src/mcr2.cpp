#include "ratecode/mcr2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ratecode/coding.hpp"

namespace ratecode {

namespace {

constexpr double kSimplexTol = 1e-9;
constexpr double kUnitNormTol = 1e-9;

void require_features(const Matrix& z) {
    if (z.rows() < 1 || z.cols() < 1)
        throw InvalidInput("feature matrix must have at least one row and one column");
    if (!z.allFinite()) throw InvalidInput("feature matrix contains non-finite entries");
}

// Z diag(w) Z^T handled through the scaled column matrix Z diag(sqrt(w)), so
// the log-det helper can pick the smaller Gram side.
Matrix scale_columns(const Matrix& z, const Vector& sqrt_weights) {
    return z * sqrt_weights.asDiagonal();
}

std::vector<Index> hard_class_sizes(const Membership& membership) {
    std::vector<Index> sizes(static_cast<std::size_t>(membership.num_classes()), 0);
    for (Index i = 0; i < membership.num_samples(); ++i) {
        for (Index j = 0; j < membership.num_classes(); ++j) {
            if (membership.weights(j, i) > 0.5) {
                ++sizes[static_cast<std::size_t>(j)];
                break;
            }
        }
    }
    return sizes;
}

Matrix hard_class_block(const Matrix& z, const Membership& membership, Index j) {
    std::vector<Index> cols;
    for (Index i = 0; i < membership.num_samples(); ++i)
        if (membership.weights(j, i) > 0.5) cols.push_back(i);
    Matrix block(z.rows(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        block.col(static_cast<Index>(c)) = z.col(cols[c]);
    return block;
}

double nuclear_norm(const Matrix& z) {
    if (z.size() == 0) return 0.0;
    Eigen::BDCSVD<Matrix> svd(z);
    return svd.singularValues().sum();
}

}  // namespace

void Membership::validate(Index m) const {
    if (weights.rows() < 1) throw InvalidInput("membership needs at least one class");
    if (weights.cols() != m)
        throw InvalidInput("membership covers " + std::to_string(weights.cols()) +
                           " samples, expected " + std::to_string(m));
    if (!weights.allFinite()) throw InvalidInput("membership contains non-finite entries");
    for (Index i = 0; i < m; ++i) {
        double column_sum = 0.0;
        for (Index j = 0; j < weights.rows(); ++j) {
            const double w = weights(j, i);
            if (w < -1e-12)
                throw InvalidInput("membership weight " + std::to_string(w) + " is negative");
            column_sum += std::max(0.0, w);
        }
        if (std::abs(column_sum - 1.0) > kSimplexTol)
            throw InvalidInput("membership weights for sample " + std::to_string(i) +
                               " sum to " + std::to_string(column_sum));
    }
}

bool Membership::is_hard(double tol) const {
    for (Index j = 0; j < weights.rows(); ++j)
        for (Index i = 0; i < weights.cols(); ++i) {
            const double w = weights(j, i);
            if (std::abs(w) > tol && std::abs(w - 1.0) > tol) return false;
        }
    return true;
}

Membership Membership::hard(const std::vector<int>& labels) {
    if (labels.empty()) throw InvalidInput("label list is empty");
    std::vector<int> distinct(labels);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    Membership pi;
    pi.weights = Matrix::Zero(static_cast<Index>(distinct.size()),
                              static_cast<Index>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto j = static_cast<Index>(
            std::lower_bound(distinct.begin(), distinct.end(), labels[i]) - distinct.begin());
        pi.weights(j, static_cast<Index>(i)) = 1.0;
    }
    return pi;
}

Membership Membership::uniform(Index k, Index m) {
    if (k < 1 || m < 1) throw InvalidInput("membership shape must be positive");
    Membership pi;
    pi.weights = Matrix::Constant(k, m, 1.0 / static_cast<double>(k));
    return pi;
}

double rate_whole(const Matrix& features, const Distortion& eps) {
    require_features(features);
    const double d = static_cast<double>(features.rows());
    const double m = static_cast<double>(features.cols());
    const double alpha = d / (m * eps.squared());
    return 0.5 * detail::log2_det_identity_plus_gram(alpha, features);
}

double rate_partition(const Matrix& features, const Membership& membership,
                      const Distortion& eps) {
    require_features(features);
    membership.validate(features.cols());
    const double d = static_cast<double>(features.rows());
    const double m = static_cast<double>(features.cols());

    double total = 0.0;
    for (Index j = 0; j < membership.num_classes(); ++j) {
        const double tr = membership.trace(j);
        if (!(tr > 0.0)) continue;  // empty class codes nothing
        // Trace-normalized weights keep the scaled Gram bounded for tiny traces.
        const Vector w = (membership.weights.row(j).transpose() / tr).cwiseMax(0.0);
        const Matrix scaled = scale_columns(features, w.cwiseSqrt());
        const double alpha = d / eps.squared();
        total += (tr / (2.0 * m)) * detail::log2_det_identity_plus_gram(alpha, scaled);
    }
    return total;
}

RateReport delta_rate(const Matrix& features, const Membership& membership,
                      const Distortion& eps, NormalizationMode mode) {
    require_features(features);
    membership.validate(features.cols());
    const double d = static_cast<double>(features.rows());
    const double m = static_cast<double>(features.cols());

    RateReport report;
    report.epsilon = eps.value();
    report.normalization = mode;
    report.rate_whole = rate_whole(features, eps);

    double partition = 0.0;
    double min_condition = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < membership.num_classes(); ++j) {
        const double tr = membership.trace(j);
        if (!(tr > 0.0)) {
            report.per_class_rates.push_back(0.0);
            report.class_ranks.push_back(0);
            report.skipped_classes.push_back(j);
            continue;
        }
        const Vector w = (membership.weights.row(j).transpose() / tr).cwiseMax(0.0);
        const Matrix scaled = scale_columns(features, w.cwiseSqrt());
        const double alpha = d / eps.squared();
        const double class_rate =
            (tr / (2.0 * m)) * detail::log2_det_identity_plus_gram(alpha, scaled);
        report.per_class_rates.push_back(class_rate);
        partition += class_rate;

        Matrix gram = scaled.rows() <= scaled.cols()
                          ? Matrix(scaled * scaled.transpose())
                          : Matrix(scaled.transpose() * scaled);
        const Index rank = detail::rank_estimate(gram);
        report.class_ranks.push_back(rank);
        if (rank > 0) {
            const double dim_ratio = d / static_cast<double>(rank);
            min_condition = std::min(min_condition, (tr / m) * dim_ratio * dim_ratio);
        }
    }
    report.rate_partition = partition;
    report.delta_rate = report.rate_whole - report.rate_partition;
    const double eps4 = eps.squared() * eps.squared();
    report.precision_condition = std::isfinite(min_condition) && eps4 < min_condition;
    return report;
}

Matrix delta_rate_gradient(const Matrix& features, const Membership& membership,
                           const Distortion& eps) {
    require_features(features);
    membership.validate(features.cols());
    const double d = static_cast<double>(features.rows());
    const double m = static_cast<double>(features.cols());
    const Index dim = features.rows();

    const double alpha = d / (m * eps.squared());
    const Matrix expand = Matrix::Identity(dim, dim) + alpha * features * features.transpose();
    Matrix grad = (alpha / std::numbers::ln2) * expand.ldlt().solve(features);

    for (Index j = 0; j < membership.num_classes(); ++j) {
        const double tr = membership.trace(j);
        if (!(tr > 0.0)) continue;
        const Vector w = membership.weights.row(j).transpose().cwiseMax(0.0);
        const double alpha_j = d / (tr * eps.squared());
        const Matrix weighted = features * w.asDiagonal();
        const Matrix compress =
            Matrix::Identity(dim, dim) + alpha_j * weighted * features.transpose();
        grad.noalias() -=
            (tr / m) * (alpha_j / std::numbers::ln2) *
            compress.ldlt().solve(weighted);
    }
    return grad;
}

Matrix normalize_features(const Matrix& features, NormalizationMode mode,
                          const Membership& membership) {
    require_features(features);
    Matrix out = features;
    if (mode == NormalizationMode::Sphere) {
        for (Index i = 0; i < out.cols(); ++i) {
            const double norm = out.col(i).norm();
            if (!(norm > 0.0))
                throw InvalidInput("cannot normalize a zero feature column to the sphere");
            out.col(i) /= norm;
        }
        return out;
    }
    membership.validate(features.cols());
    if (!membership.is_hard())
        throw HardLabelsRequired("Frobenius normalization needs hard class labels");
    for (Index j = 0; j < membership.num_classes(); ++j) {
        double sq = 0.0;
        Index size = 0;
        for (Index i = 0; i < out.cols(); ++i)
            if (membership.weights(j, i) > 0.5) {
                sq += out.col(i).squaredNorm();
                ++size;
            }
        if (size == 0) continue;
        if (!(sq > 0.0))
            throw InvalidInput("cannot Frobenius-normalize an all-zero class block");
        const double factor = std::sqrt(static_cast<double>(size) / sq);
        for (Index i = 0; i < out.cols(); ++i)
            if (membership.weights(j, i) > 0.5) out.col(i) *= factor;
    }
    return out;
}

OptimizeResult optimize_features(const Matrix& initial_features, const Membership& membership,
                                 const Distortion& eps, const OptimizeOptions& options) {
    require_features(initial_features);
    membership.validate(initial_features.cols());
    for (Index i = 0; i < initial_features.cols(); ++i)
        if (std::abs(initial_features.col(i).norm() - 1.0) > kUnitNormTol)
            throw InvalidInput("initial features must be unit-norm columns");
    if (options.max_steps < 0 || options.max_halvings < 0 || !(options.step_size > 0.0))
        throw InvalidInput("invalid optimizer options");

    auto project = [](Matrix z) {
        for (Index i = 0; i < z.cols(); ++i) {
            const double norm = z.col(i).norm();
            if (norm > 0.0) z.col(i) /= norm;
        }
        return z;
    };

    OptimizeResult result;
    result.features = initial_features;
    double current = delta_rate(result.features, membership, eps).delta_rate;
    result.trajectory.push_back(current);

    for (int step = 0; step < options.max_steps; ++step) {
        const Matrix grad = delta_rate_gradient(result.features, membership, eps);
        double step_size = options.step_size;
        bool accepted = false;
        for (int h = 0; h <= options.max_halvings; ++h) {
            const Matrix candidate = project(result.features + step_size * grad);
            const double value = delta_rate(candidate, membership, eps).delta_rate;
            if (value >= current) {
                result.features = candidate;
                const double gain = value - current;
                current = value;
                result.trajectory.push_back(current);
                ++result.steps_taken;
                accepted = true;
                if (gain < options.min_improvement) return result;
                break;
            }
            step_size *= 0.5;
        }
        if (!accepted) break;  // no improving step within the backtracking budget
    }
    return result;
}

double ole_loss(const Matrix& features, const Membership& membership) {
    require_features(features);
    membership.validate(features.cols());
    if (!membership.is_hard())
        throw HardLabelsRequired("OLE loss is defined for hard memberships only");
    double per_class = 0.0;
    for (Index j = 0; j < membership.num_classes(); ++j)
        per_class += nuclear_norm(hard_class_block(features, membership, j));
    return nuclear_norm(features) - per_class;
}

double pairwise_rate_distance(const Matrix& features_a, const Matrix& features_b,
                              const Distortion& eps) {
    require_features(features_a);
    require_features(features_b);
    if (features_a.rows() != features_b.rows())
        throw DimensionMismatch("feature sets differ in dimension");
    Matrix joint(features_a.rows(), features_a.cols() + features_b.cols());
    joint.leftCols(features_a.cols()) = features_a;
    joint.rightCols(features_b.cols()) = features_b;
    return rate_whole(joint, eps) -
           0.5 * (rate_whole(features_a, eps) + rate_whole(features_b, eps));
}

double between_class_coherence(const Matrix& features, const Membership& membership) {
    require_features(features);
    membership.validate(features.cols());
    if (!membership.is_hard())
        throw HardLabelsRequired("between-class coherence needs hard class labels");
    const auto sizes = hard_class_sizes(membership);
    double worst = 0.0;
    for (Index a = 0; a < membership.num_classes(); ++a) {
        if (sizes[static_cast<std::size_t>(a)] == 0) continue;
        const Matrix block_a = hard_class_block(features, membership, a);
        for (Index b = a + 1; b < membership.num_classes(); ++b) {
            if (sizes[static_cast<std::size_t>(b)] == 0) continue;
            const Matrix block_b = hard_class_block(features, membership, b);
            worst = std::max(worst, (block_a.transpose() * block_b).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

}  // namespace ratecode
