#include "ratecode/coding.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace ratecode {

namespace {

void require_samples(const Matrix& w) {
    if (w.rows() < 1 || w.cols() < 1)
        throw InvalidInput("sample matrix must have at least one row and one column");
    if (!w.allFinite()) throw InvalidInput("sample matrix contains non-finite entries");
}

constexpr double kEigClampTol = 1e-10;   // negative-eigenvalue clamp, relative
constexpr double kPsdRejectTol = 1e-10;  // rejection threshold for declared-PSD inputs
constexpr double kSymTol = 1e-12;        // symmetry tolerance for Gram inputs

}  // namespace

namespace detail {

double log2_det_identity_plus(double alpha, const Matrix& sym, bool validate) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    const Vector& eigs = solver.eigenvalues();
    const double lambda_max = std::max(0.0, eigs.maxCoeff());
    if (validate) {
        const double floor = -kPsdRejectTol * std::max(1.0, lambda_max);
        if (eigs.minCoeff() < floor)
            throw NotPositiveSemidefinite("matrix has eigenvalue " +
                                          std::to_string(eigs.minCoeff()) +
                                          " below PSD tolerance");
    }
    double sum = 0.0;
    for (Index i = 0; i < eigs.size(); ++i) {
        double lambda = eigs(i);
        if (lambda < 0.0) lambda = 0.0;  // roundoff from the product / solver
        sum += std::log2(1.0 + alpha * lambda);
    }
    return sum;
}

double log2_det_identity_plus_gram(double alpha, const Matrix& x) {
    // W W^T and W^T W share non-zero eigenvalues; zero eigenvalues contribute
    // log2(1) = 0, so either product gives the same determinant.
    if (x.rows() <= x.cols())
        return log2_det_identity_plus(alpha, Matrix(x * x.transpose()));
    return log2_det_identity_plus(alpha, Matrix(x.transpose() * x));
}

Index rank_estimate(const Matrix& sym_psd) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym_psd, Eigen::EigenvaluesOnly);
    const Vector& eigs = solver.eigenvalues();
    const double lambda_max = eigs.maxCoeff();
    if (!(lambda_max > 0.0)) return 0;
    const double thresh = 1e-9 * lambda_max;
    Index r = 0;
    for (Index i = 0; i < eigs.size(); ++i)
        if (eigs(i) > thresh) ++r;
    return r;
}

}  // namespace detail

double coding_rate(const Matrix& samples, const Distortion& eps) {
    require_samples(samples);
    const double n = static_cast<double>(samples.rows());
    const double m = static_cast<double>(samples.cols());
    const double alpha = n / (m * eps.squared());
    return 0.5 * detail::log2_det_identity_plus_gram(alpha, samples);
}

double coding_length(const Matrix& samples, const Distortion& eps) {
    const double mn = static_cast<double>(samples.rows() + samples.cols());
    return mn * coding_rate(samples, eps);
}

double coding_length_with_mean(const Matrix& samples, const Distortion& eps) {
    require_samples(samples);
    const Index n = samples.rows();
    const Index m = samples.cols();
    const Vector mean = samples.rowwise().mean();
    const Matrix centered = samples.colwise() - mean;
    // det(I + n/eps^2 Cov) with Cov = (1/m) Y Y^T, via the smaller product.
    const double alpha = static_cast<double>(n) / (static_cast<double>(m) * eps.squared());
    const double deviation_bits = 0.5 * static_cast<double>(m + n) *
                                  detail::log2_det_identity_plus_gram(alpha, centered);
    const double mean_bits =
        0.5 * static_cast<double>(n) * std::log2(1.0 + mean.squaredNorm() / eps.squared());
    return deviation_bits + mean_bits;
}

double kernel_coding_length(const GramMatrix& gram, const Distortion& eps) {
    const Matrix& k = gram.gram;
    if (k.rows() != k.cols() || k.rows() < 1)
        throw InvalidInput("Gram matrix must be square and non-empty");
    if (!k.allFinite()) throw InvalidInput("Gram matrix contains non-finite entries");
    if (gram.ambient_dim < 0) throw InvalidInput("ambient dimension must be non-negative");
    const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
    if (((k - k.transpose()).cwiseAbs().maxCoeff()) > kSymTol * scale)
        throw InvalidInput("Gram matrix is not symmetric within tolerance");
    const double m = static_cast<double>(k.rows());
    const double a = static_cast<double>(gram.ambient_dim);
    if (gram.ambient_dim == 0) return 0.0;
    const double alpha = a / (m * eps.squared());
    return 0.5 * (m + a) * detail::log2_det_identity_plus(alpha, k, /*validate=*/true);
}

double effective_dimension(const Matrix& covariance, const Distortion& eps) {
    if (covariance.rows() != covariance.cols() || covariance.rows() < 1)
        throw InvalidInput("covariance must be square and non-empty");
    if (!covariance.allFinite()) throw InvalidInput("covariance contains non-finite entries");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(covariance, Eigen::EigenvaluesOnly);
    const Vector& eigs = solver.eigenvalues();
    const double lambda_max = std::max(0.0, eigs.maxCoeff());
    const double floor = -kPsdRejectTol * std::max(1.0, lambda_max);
    if (eigs.minCoeff() < floor)
        throw NotPositiveSemidefinite("covariance has eigenvalue " +
                                      std::to_string(eigs.minCoeff()) +
                                      " below PSD tolerance");
    const double n = static_cast<double>(covariance.rows());
    const double ridge = eps.squared() / n;
    double dim = 0.0;
    for (Index i = 0; i < eigs.size(); ++i) {
        double lambda = eigs(i);
        if (lambda < 0.0) lambda = 0.0;
        dim += lambda / (ridge + lambda);
    }
    return dim;
}

GaussianMoments moments_of(const Matrix& samples) {
    require_samples(samples);
    GaussianMoments mom;
    mom.count = samples.cols();
    mom.mean = samples.rowwise().mean();
    const Matrix centered = samples.colwise() - mom.mean;
    mom.covariance = (centered * centered.transpose()) / static_cast<double>(samples.cols());
    return mom;
}

double coding_length_from_moments(const GaussianMoments& moments, const Distortion& eps) {
    const Index n = moments.mean.size();
    if (moments.covariance.rows() != n || moments.covariance.cols() != n)
        throw DimensionMismatch("moment shapes disagree");
    if (moments.count < 1) throw InvalidInput("moment count must be positive");
    const double alpha = static_cast<double>(n) / eps.squared();
    const double deviation_bits = 0.5 * static_cast<double>(moments.count + n) *
                                  detail::log2_det_identity_plus(alpha, moments.covariance);
    const double mean_bits =
        0.5 * static_cast<double>(n) *
        std::log2(1.0 + moments.mean.squaredNorm() / eps.squared());
    return deviation_bits + mean_bits;
}

}  // namespace ratecode
