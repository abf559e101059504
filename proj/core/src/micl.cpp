#include "ratecode/micl.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "ratecode/coding.hpp"
#include "ratecode/parallel.hpp"

namespace ratecode {

namespace {

constexpr double kPriorSumTol = 1e-9;

Matrix append_column(const Matrix& samples, const Vector& x) {
    Matrix out(samples.rows(), samples.cols() + 1);
    out.leftCols(samples.cols()) = samples;
    out.col(samples.cols()) = x;
    return out;
}

void require_point(const Vector& x, Index n) {
    if (x.size() != n)
        throw DimensionMismatch("test point has dimension " + std::to_string(x.size()) +
                                ", classifier expects " + std::to_string(n));
    if (!x.allFinite()) throw InvalidInput("test point contains non-finite entries");
}

// argmin with ties resolved toward the smallest class label, independent of
// class order.
int argmin_label(const std::vector<double>& scores, const std::vector<ClassModel>& classes) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < scores.size(); ++j) {
        if (scores[j] < scores[best] ||
            (scores[j] == scores[best] && classes[j].label < classes[best].label))
            best = j;
    }
    return classes[best].label;
}

}  // namespace

void ClassifierState::validate() const {
    if (classes.size() < 2) throw InvalidInput("classifier needs at least two classes");
    Distortion check_eps(epsilon);  // throws InvalidDistortion when out of range
    (void)check_eps;
    const Index n = classes.front().samples.rows();
    double prior_sum = 0.0;
    std::vector<int> labels;
    for (const auto& c : classes) {
        if (c.samples.cols() < 1) throw InvalidInput("every class needs at least one sample");
        if (c.samples.rows() != n)
            throw DimensionMismatch("classes disagree on ambient dimension");
        if (!c.samples.allFinite())
            throw InvalidInput("class samples contain non-finite entries");
        if (!(c.prior > 0.0)) throw InvalidInput("class priors must be positive");
        prior_sum += c.prior;
        labels.push_back(c.label);
    }
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
        throw InvalidInput("class labels must be distinct");
    if (std::abs(prior_sum - 1.0) > kPriorSumTol)
        throw InvalidInput("class priors must sum to 1, got " + std::to_string(prior_sum));
}

ClassifierState ClassifierState::fit(const Matrix& samples, const std::vector<int>& labels,
                                     const Distortion& eps, PriorMode mode) {
    if (samples.cols() < 1) throw InvalidInput("training set is empty");
    if (static_cast<Index>(labels.size()) != samples.cols())
        throw DimensionMismatch("label count does not match sample count");

    std::map<int, std::vector<Index>> by_label;
    for (std::size_t i = 0; i < labels.size(); ++i)
        by_label[labels[i]].push_back(static_cast<Index>(i));

    ClassifierState state;
    state.epsilon = eps.value();
    const double m = static_cast<double>(samples.cols());
    for (const auto& [label, members] : by_label) {
        ClassModel c;
        c.label = label;
        c.samples.resize(samples.rows(), static_cast<Index>(members.size()));
        for (std::size_t i = 0; i < members.size(); ++i)
            c.samples.col(static_cast<Index>(i)) = samples.col(members[i]);
        c.prior = mode == PriorMode::Empirical
                      ? static_cast<double>(members.size()) / m
                      : 1.0 / static_cast<double>(by_label.size());
        state.classes.push_back(std::move(c));
    }
    state.validate();
    return state;
}

KernelSpec KernelSpec::polynomial(int degree) {
    if (degree < 1) throw InvalidInput("polynomial kernel degree must be >= 1");
    return {Kind::Polynomial, degree, 1.0};
}

KernelSpec KernelSpec::rbf(double gamma) {
    if (!(gamma > 0.0)) throw InvalidInput("rbf kernel gamma must be positive");
    return {Kind::Rbf, 1, gamma};
}

double incremental_coding_length(const Vector& x, const ClassModel& c, const Distortion& eps) {
    require_point(x, c.samples.rows());
    const double with = coding_length_with_mean(append_column(c.samples, x), eps);
    const double without = coding_length_with_mean(c.samples, eps);
    return with - without - std::log2(c.prior);
}

Classification classify_micl(const Vector& x, const ClassifierState& state) {
    state.validate();
    const Distortion eps(state.epsilon);
    Classification result;
    result.scores.reserve(state.classes.size());
    for (const auto& c : state.classes)
        result.scores.push_back(incremental_coding_length(x, c, eps));
    result.label = argmin_label(result.scores, state.classes);
    return result;
}

namespace {

// Workers must not throw, so batch inputs are vetted on the calling thread.
void require_batch(const Matrix& test_points, const ClassifierState& state) {
    state.validate();
    if (test_points.rows() != state.classes.front().samples.rows())
        throw DimensionMismatch("test points have dimension " +
                                std::to_string(test_points.rows()) +
                                ", classifier expects " +
                                std::to_string(state.classes.front().samples.rows()));
    if (!test_points.allFinite())
        throw InvalidInput("test points contain non-finite entries");
}

}  // namespace

std::vector<Classification> classify_micl_batch(const Matrix& test_points,
                                                const ClassifierState& state) {
    require_batch(test_points, state);
    std::vector<Classification> out(static_cast<std::size_t>(test_points.cols()));
    parallel_for(out.size(), [&](std::size_t i) {
        out[i] = classify_micl(test_points.col(static_cast<Index>(i)), state);
    });
    return out;
}

double asymptotic_incremental_length(const Vector& x, const AsymptoticClassModel& model,
                                     const Distortion& eps) {
    require_point(x, model.mean.size());
    if (!(model.prior > 0.0)) throw InvalidInput("class prior must be positive");
    const double n = static_cast<double>(model.mean.size());
    const double ridge = eps.squared() / n;

    Eigen::SelfAdjointEigenSolver<Matrix> solver(model.covariance);
    Vector eigs = solver.eigenvalues().cwiseMax(0.0);
    const Vector delta = solver.eigenvectors().transpose() * (x - model.mean);

    double log2_det = 0.0, mahal = 0.0, eff_dim = 0.0;
    for (Index i = 0; i < eigs.size(); ++i) {
        log2_det += std::log2(1.0 + eigs(i) / ridge);
        mahal += delta(i) * delta(i) / (eigs(i) + ridge);
        eff_dim += eigs(i) / (eigs(i) + ridge);
    }
    constexpr double half_inv_ln2 = 0.5 / std::numbers::ln2;
    return 0.5 * log2_det + half_inv_ln2 * (mahal - eff_dim) - std::log2(model.prior);
}

std::pair<std::size_t, std::vector<double>> classify_asymptotic(
    const Vector& x, const std::vector<AsymptoticClassModel>& models, const Distortion& eps) {
    if (models.empty()) throw InvalidInput("no class models given");
    const double n = static_cast<double>(x.size());
    const double ridge = eps.squared() / n;

    std::vector<double> scores;
    scores.reserve(models.size());
    for (const auto& model : models) {
        require_point(x, model.mean.size());
        if (!(model.prior > 0.0)) throw InvalidInput("class prior must be positive");
        Eigen::SelfAdjointEigenSolver<Matrix> solver(model.covariance);
        Vector eigs = solver.eigenvalues().cwiseMax(0.0);
        const Vector delta = solver.eigenvectors().transpose() * (x - model.mean);
        double log_det = 0.0, mahal = 0.0, eff_dim = 0.0;
        for (Index i = 0; i < eigs.size(); ++i) {
            log_det += std::log(eigs(i) + ridge);
            mahal += delta(i) * delta(i) / (eigs(i) + ridge);
            eff_dim += eigs(i) / (eigs(i) + ridge);
        }
        const double log_likelihood =
            -0.5 * (mahal + log_det + n * std::log(2.0 * std::numbers::pi));
        scores.push_back(log_likelihood + std::log(model.prior) + 0.5 * eff_dim);
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < scores.size(); ++j)
        if (scores[j] > scores[best]) best = j;
    return {best, std::move(scores)};
}

double kernel_eval(const Vector& a, const Vector& b, const KernelSpec& kernel) {
    if (a.size() != b.size()) throw DimensionMismatch("kernel arguments differ in dimension");
    switch (kernel.kind) {
        case KernelSpec::Kind::Linear:
            return a.dot(b);
        case KernelSpec::Kind::Polynomial:
            return std::pow(a.dot(b) + 1.0, kernel.degree);
        case KernelSpec::Kind::Rbf:
            return std::exp(-kernel.gamma * (a - b).squaredNorm());
    }
    throw InvalidInput("unknown kernel kind");
}

Matrix kernel_gram(const Matrix& a, const KernelSpec& kernel) {
    const Index m = a.cols();
    Matrix k(m, m);
    switch (kernel.kind) {
        case KernelSpec::Kind::Linear:
            k = a.transpose() * a;
            break;
        case KernelSpec::Kind::Polynomial:
            k = ((a.transpose() * a).array() + 1.0).pow(kernel.degree).matrix();
            break;
        case KernelSpec::Kind::Rbf: {
            const Vector sq = a.colwise().squaredNorm();
            Matrix dist = (-2.0 * a.transpose() * a);
            dist.rowwise() += sq.transpose();
            dist.colwise() += sq;
            k = (-kernel.gamma * dist.array()).exp().matrix();
            break;
        }
    }
    // Exact symmetry, so downstream PSD checks see no roundoff skew.
    return 0.5 * (k + k.transpose());
}

Matrix center_gram(const Matrix& gram) {
    if (gram.rows() != gram.cols()) throw InvalidInput("Gram matrix must be square");
    const Vector row_mean = gram.rowwise().mean();
    const double total_mean = row_mean.mean();
    Matrix centered = gram;
    centered.colwise() -= row_mean;
    centered.rowwise() -= row_mean.transpose();
    centered.array() += total_mean;
    return 0.5 * (centered + centered.transpose());
}

namespace {

double centered_gram_length(const Matrix& gram, const Distortion& eps) {
    const Matrix centered = center_gram(gram);
    GramMatrix g;
    g.gram = centered;
    g.ambient_dim = std::min(gram.rows(), detail::rank_estimate(centered));
    return kernel_coding_length(g, eps);
}

}  // namespace

double kernel_incremental_coding_length(const Vector& x, const ClassModel& c,
                                        const KernelSpec& kernel, const Distortion& eps) {
    require_point(x, c.samples.rows());
    const double without = centered_gram_length(kernel_gram(c.samples, kernel), eps);
    const double with =
        centered_gram_length(kernel_gram(append_column(c.samples, x), kernel), eps);
    return with - without - std::log2(c.prior);
}

Classification classify_micl_kernel(const Vector& x, const ClassifierState& state,
                                    const KernelSpec& kernel) {
    state.validate();
    const Distortion eps(state.epsilon);
    Classification result;
    result.scores.reserve(state.classes.size());
    for (const auto& c : state.classes)
        result.scores.push_back(kernel_incremental_coding_length(x, c, kernel, eps));
    result.label = argmin_label(result.scores, state.classes);
    return result;
}

std::vector<Classification> classify_micl_kernel_batch(const Matrix& test_points,
                                                       const ClassifierState& state,
                                                       const KernelSpec& kernel) {
    require_batch(test_points, state);
    std::vector<Classification> out(static_cast<std::size_t>(test_points.cols()));
    parallel_for(out.size(), [&](std::size_t i) {
        out[i] = classify_micl_kernel(test_points.col(static_cast<Index>(i)), state, kernel);
    });
    return out;
}

}  // namespace ratecode
