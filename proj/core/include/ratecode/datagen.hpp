#ifndef RATECODE_DATAGEN_HPP_
#define RATECODE_DATAGEN_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "ratecode/types.hpp"

namespace ratecode {

/// SplitMix64: a counter-based 64-bit generator with fixed, documented
/// constants (increment 0x9E3779B97F4A7C15, mixers 0xBF58476D1CE4E5B9 and
/// 0x94D049BB133111EB). Identical streams on every platform. Gaussians come
/// from Box-Muller on the uniform stream, with the sine branch cached.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    /// Uniform double in [0, 1), 53 random bits.
    double uniform();
    /// Standard normal via Box-Muller; draws two uniforms every other call.
    double gaussian();

  private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// One mixture component: a Gaussian given by mean and covariance, or a
/// linear-subspace source given by an orthonormal basis, a within-subspace
/// scale, and isotropic ambient noise sigma.
struct MixtureComponent {
    double weight = 0.0;
    Vector mean;
    Matrix covariance;  // n x n; used when non-empty
    Matrix basis;       // n x d_j orthonormal; used when covariance is empty
    double scale = 1.0;
    double sigma = 0.0;
};

struct MixtureSpec {
    std::vector<MixtureComponent> components;
    std::uint64_t seed = 0;
};

/// Draws m columns. Component picks and noise come from two sub-streams
/// derived from the seed (label stream first, noise stream second), so label
/// sequences can be re-derived independently of the sample values.
/// Returns the n x m data matrix and the 0-based component index per column.
std::pair<Matrix, std::vector<int>> sample_mixture(const MixtureSpec& spec, Index m);

/// Replaces floor(fraction * m) distinct columns, chosen by a partial
/// Fisher-Yates shuffle of the column indices, with uniform samples in
/// [-bound, bound]^n. Replaced columns are filled in ascending index order.
struct OutlierResult {
    Matrix data;
    std::vector<bool> mask;  // true where a column was replaced
};
OutlierResult add_outliers(const Matrix& samples, double fraction, double bound,
                           std::uint64_t seed);

/// Fixed special-case generator for the kernel-classifier experiments: two
/// concentric circles in 2-D with Gaussian radial noise. Samples alternate
/// between the rings (balanced classes); angles and radial noise come from
/// the noise stream. Labels are 0 (inner) and 1 (outer).
struct TwoRingsSpec {
    Index m = 200;
    double radius_inner = 1.0;
    double radius_outer = 2.0;
    double sigma = 0.05;
    std::uint64_t seed = 0;
};
std::pair<Matrix, std::vector<int>> sample_two_rings(const TwoRingsSpec& spec);

}  // namespace ratecode

#endif  // RATECODE_DATAGEN_HPP_
