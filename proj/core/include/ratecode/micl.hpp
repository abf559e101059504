#ifndef RATECODE_MICL_HPP_
#define RATECODE_MICL_HPP_

#include <vector>

#include "ratecode/types.hpp"

namespace ratecode {

/// Training samples of one class plus its label-coding prior.
struct ClassModel {
    Matrix samples;  // n x m_j, at least one column
    double prior = 0.0;
    int label = 0;
};

enum class PriorMode { Empirical, Uniform };

/// Immutable classifier state: K >= 2 classes of equal ambient dimension with
/// priors summing to one. Classification calls are pure and thread-safe.
struct ClassifierState {
    std::vector<ClassModel> classes;
    double epsilon = 0.0;

    void validate() const;
    /// Groups labelled training data into class models. Class order follows
    /// ascending label value; priors are |X_j|/m or 1/K depending on mode.
    static ClassifierState fit(const Matrix& samples, const std::vector<int>& labels,
                               const Distortion& eps,
                               PriorMode mode = PriorMode::Empirical);
};

struct KernelSpec {
    enum class Kind { Linear, Polynomial, Rbf };
    Kind kind = Kind::Linear;
    int degree = 1;     // polynomial
    double gamma = 1.0; // rbf

    static KernelSpec linear() { return {Kind::Linear, 1, 1.0}; }
    static KernelSpec polynomial(int degree);
    static KernelSpec rbf(double gamma);
};

/// Moment-level class description used by the asymptotic decision rule.
struct AsymptoticClassModel {
    Vector mean;
    Matrix covariance;
    double prior = 0.0;
};

struct Classification {
    int label = 0;
    std::vector<double> scores;  // per class, in the state's class order
};

/// Extra bits to code x appended to class c, plus the label cost:
///   L_eps(X_j u {x}) - L_eps(X_j) - log2(pi_j).
/// The augmented length is recomputed directly from the augmented sample set.
double incremental_coding_length(const Vector& x, const ClassModel& c, const Distortion& eps);

/// Assigns x to the class with the fewest additional bits; ties go to the
/// smallest label. Returned scores are the per-class incremental lengths.
Classification classify_micl(const Vector& x, const ClassifierState& state);

/// Batch version; test points are classified independently (and possibly in
/// parallel) with per-point results identical to the one-at-a-time path.
std::vector<Classification> classify_micl_batch(const Matrix& test_points,
                                                const ClassifierState& state);

/// Limiting form of the incremental coding length under the true moments:
///   1/2 log2 det(I + n/eps^2 Sigma)
///   + (1 / 2 ln 2) [ (x-mu)^T (Sigma + eps^2/n I)^{-1} (x-mu) - D_eps(Sigma) ]
///   - log2 pi.
double asymptotic_incremental_length(const Vector& x, const AsymptoticClassModel& model,
                                     const Distortion& eps);

/// Asymptotic decision rule: argmax over classes of
///   log N(x | mu_j, Sigma_j + eps^2/n I) + ln pi_j + 1/2 D_eps(Sigma_j),
/// everything in natural log. Returns the 0-based index of the winning model
/// (smallest index on ties) and the per-model scores. The ridge makes the
/// rule well-defined even for exactly singular covariances.
std::pair<std::size_t, std::vector<double>> classify_asymptotic(
    const Vector& x, const std::vector<AsymptoticClassModel>& models, const Distortion& eps);

double kernel_eval(const Vector& a, const Vector& b, const KernelSpec& kernel);

/// Kernel Gram matrix of the columns of a (and b when given): K(i,j) =
/// k(a_i, b_j).
Matrix kernel_gram(const Matrix& a, const KernelSpec& kernel);

/// Doubly centered Gram H K H with H = I - (1/m) 1 1^T.
Matrix center_gram(const Matrix& gram);

/// Kernelized incremental coding length for one class: coding lengths are
/// evaluated on the centered Gram matrices of X_j and X_j u {x}, with the
/// ambient dimension taken as min(m, rank of the centered Gram); no separate
/// mean term is coded in the kernel domain.
double kernel_incremental_coding_length(const Vector& x, const ClassModel& c,
                                        const KernelSpec& kernel, const Distortion& eps);

/// MICL in a kernel-induced feature space; reduces to the deviation part of
/// classify_micl for the linear kernel on mean-centered, full-rank data.
Classification classify_micl_kernel(const Vector& x, const ClassifierState& state,
                                    const KernelSpec& kernel);

std::vector<Classification> classify_micl_kernel_batch(const Matrix& test_points,
                                                       const ClassifierState& state,
                                                       const KernelSpec& kernel);

}  // namespace ratecode

#endif  // RATECODE_MICL_HPP_
