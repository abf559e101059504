#include "ratecode/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace ratecode {

std::uint64_t SplitMix64::next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitMix64::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 is shifted away from 0 so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

namespace {

constexpr double kWeightSumTol = 1e-9;
constexpr double kOrthonormalTol = 1e-9;

struct PreparedComponent {
    Vector mean;
    Matrix transform;  // maps a standard-normal draw into the component
    bool subspace = false;
    Matrix basis;  // scaled basis for subspace components
    double sigma = 0.0;
    Index latent_dim = 0;
};

// Symmetric eigendecomposition square root, so exactly singular covariances
// are sampled without failure.
Matrix psd_sqrt(const Matrix& cov) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
    Vector eigs = solver.eigenvalues();
    const double lambda_max = std::max(0.0, eigs.maxCoeff());
    for (Index i = 0; i < eigs.size(); ++i) {
        if (eigs(i) < 0.0) {
            if (-eigs(i) > 1e-10 * std::max(1.0, lambda_max))
                throw InvalidSpec("component covariance is not positive semidefinite");
            eigs(i) = 0.0;
        }
    }
    return solver.eigenvectors() * eigs.cwiseSqrt().asDiagonal() *
           solver.eigenvectors().transpose();
}

std::vector<PreparedComponent> prepare(const MixtureSpec& spec, Index& ambient_dim) {
    if (spec.components.empty()) throw InvalidSpec("mixture needs at least one component");
    double weight_sum = 0.0;
    for (const auto& c : spec.components) {
        if (!(c.weight >= 0.0)) throw InvalidSpec("component weight must be non-negative");
        weight_sum += c.weight;
    }
    if (std::abs(weight_sum - 1.0) > kWeightSumTol)
        throw InvalidSpec("component weights must sum to 1, got " + std::to_string(weight_sum));

    ambient_dim = spec.components.front().mean.size();
    if (ambient_dim < 1) throw InvalidSpec("component mean must be non-empty");

    std::vector<PreparedComponent> out;
    out.reserve(spec.components.size());
    for (const auto& c : spec.components) {
        if (c.mean.size() != ambient_dim)
            throw InvalidSpec("all component means must share one dimension");
        PreparedComponent p;
        p.mean = c.mean;
        if (c.covariance.size() > 0) {
            if (c.covariance.rows() != ambient_dim || c.covariance.cols() != ambient_dim)
                throw InvalidSpec("covariance shape does not match mean dimension");
            p.transform = psd_sqrt(c.covariance);
            p.latent_dim = ambient_dim;
        } else {
            if (c.basis.size() == 0)
                throw InvalidSpec("component needs a covariance or a subspace basis");
            if (c.basis.rows() != ambient_dim)
                throw InvalidSpec("basis row count must equal the ambient dimension");
            Matrix btb = c.basis.transpose() * c.basis;
            if ((btb - Matrix::Identity(btb.rows(), btb.cols())).cwiseAbs().maxCoeff() >
                kOrthonormalTol)
                throw InvalidSpec("subspace basis is not orthonormal within tolerance");
            if (c.sigma < 0.0) throw InvalidSpec("ambient noise sigma must be non-negative");
            p.subspace = true;
            p.basis = c.basis * c.scale;
            p.sigma = c.sigma;
            p.latent_dim = c.basis.cols();
        }
        out.push_back(std::move(p));
    }
    return out;
}

int pick_component(const std::vector<MixtureComponent>& components, double u) {
    double cum = 0.0;
    for (std::size_t j = 0; j < components.size(); ++j) {
        cum += components[j].weight;
        if (u < cum) return static_cast<int>(j);
    }
    return static_cast<int>(components.size()) - 1;  // u landed on the tail of roundoff
}

}  // namespace

std::pair<Matrix, std::vector<int>> sample_mixture(const MixtureSpec& spec, Index m) {
    if (m < 1) throw InvalidSpec("sample count must be positive");
    Index n = 0;
    const auto prepared = prepare(spec, n);

    SplitMix64 parent(spec.seed);
    SplitMix64 label_rng(parent.next_u64());
    SplitMix64 noise_rng(parent.next_u64());

    Matrix data(n, m);
    std::vector<int> labels(static_cast<std::size_t>(m));
    Vector latent;
    for (Index i = 0; i < m; ++i) {
        const int j = pick_component(spec.components, label_rng.uniform());
        labels[static_cast<std::size_t>(i)] = j;
        const auto& p = prepared[static_cast<std::size_t>(j)];
        latent.resize(p.latent_dim);
        for (Index t = 0; t < p.latent_dim; ++t) latent(t) = noise_rng.gaussian();
        if (p.subspace) {
            Vector col = p.mean + p.basis * latent;
            if (p.sigma > 0.0) {
                for (Index t = 0; t < n; ++t) col(t) += p.sigma * noise_rng.gaussian();
            }
            data.col(i) = col;
        } else {
            data.col(i) = p.mean + p.transform * latent;
        }
    }
    return {std::move(data), std::move(labels)};
}

OutlierResult add_outliers(const Matrix& samples, double fraction, double bound,
                           std::uint64_t seed) {
    if (!(fraction >= 0.0) || fraction >= 1.0)
        throw InvalidInput("outlier fraction must lie in [0, 1)");
    if (!(bound > 0.0)) throw InvalidInput("outlier bound must be positive");
    const Index m = samples.cols();
    const Index n = samples.rows();
    const auto count = static_cast<Index>(std::floor(fraction * static_cast<double>(m)));

    OutlierResult result;
    result.data = samples;
    result.mask.assign(static_cast<std::size_t>(m), false);
    if (count == 0) return result;

    SplitMix64 rng(seed);
    std::vector<Index> indices(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) indices[static_cast<std::size_t>(i)] = i;
    for (Index i = 0; i < count; ++i) {
        const auto span = static_cast<std::uint64_t>(m - i);
        const auto pick = i + static_cast<Index>(rng.next_u64() % span);
        std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(pick)]);
    }
    std::vector<Index> chosen(indices.begin(), indices.begin() + count);
    std::sort(chosen.begin(), chosen.end());
    for (Index c : chosen) {
        for (Index t = 0; t < n; ++t)
            result.data(t, c) = bound * (2.0 * rng.uniform() - 1.0);
        result.mask[static_cast<std::size_t>(c)] = true;
    }
    return result;
}

std::pair<Matrix, std::vector<int>> sample_two_rings(const TwoRingsSpec& spec) {
    if (spec.m < 1) throw InvalidSpec("sample count must be positive");
    if (!(spec.radius_inner > 0.0) || !(spec.radius_outer > spec.radius_inner))
        throw InvalidSpec("ring radii must satisfy 0 < inner < outer");
    if (spec.sigma < 0.0) throw InvalidSpec("ring noise sigma must be non-negative");

    SplitMix64 parent(spec.seed);
    parent.next_u64();  // skip the label sub-seed; rings alternate deterministically
    SplitMix64 noise_rng(parent.next_u64());

    Matrix data(2, spec.m);
    std::vector<int> labels(static_cast<std::size_t>(spec.m));
    for (Index i = 0; i < spec.m; ++i) {
        const int ring = static_cast<int>(i % 2);
        labels[static_cast<std::size_t>(i)] = ring;
        const double base = ring == 0 ? spec.radius_inner : spec.radius_outer;
        const double theta = 2.0 * std::numbers::pi * noise_rng.uniform();
        const double radius = base + spec.sigma * noise_rng.gaussian();
        data(0, i) = radius * std::cos(theta);
        data(1, i) = radius * std::sin(theta);
    }
    return {std::move(data), std::move(labels)};
}

}  // namespace ratecode
