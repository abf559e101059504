#ifndef RATECODE_TYPES_HPP_
#define RATECODE_TYPES_HPP_

#include <Eigen/Dense>

#include "ratecode/errors.hpp"

namespace ratecode {

/// Sample matrices are column-major conceptually: n rows (ambient dimension),
/// m columns (samples). All routines take plain Eigen matrices and validate
/// shape and finiteness where it matters.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Allowable RMS reconstruction error. Strictly positive and finite by
/// construction, so downstream code never re-checks.
class Distortion {
  public:
    explicit Distortion(double epsilon) : epsilon_(epsilon) {
        if (!(epsilon > 0.0) || !std::isfinite(epsilon))
            throw InvalidDistortion("distortion must be positive and finite, got " +
                                    std::to_string(epsilon));
    }
    double value() const noexcept { return epsilon_; }
    double squared() const noexcept { return epsilon_ * epsilon_; }

  private:
    double epsilon_;
};

/// First and second sample moments of one point set: mean, biased (1/m)
/// covariance, and sample count.
struct GaussianMoments {
    Vector mean;
    Matrix covariance;
    Index count = 0;
};

/// An m-by-m matrix of inner products or kernel evaluations, together with the
/// ambient dimension used in the n/eps^2 scaling of the coding length.
struct GramMatrix {
    Matrix gram;
    Index ambient_dim = 0;
};

}  // namespace ratecode

#endif  // RATECODE_TYPES_HPP_
