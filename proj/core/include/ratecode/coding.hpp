#ifndef RATECODE_CODING_HPP_
#define RATECODE_CODING_HPP_

#include "ratecode/types.hpp"

namespace ratecode {

// Rate and length functions for lossy coding of finite sample sets. All
// results are in bits (base-2 logarithms throughout). Every function here is
// pure and reentrant.

/// Bits per vector needed to code the columns of W up to RMS distortion eps:
///   R(W) = 1/2 * log2 det(I + n/(m eps^2) W W^T).
/// The log-determinant is evaluated through the eigenvalues of the smaller of
/// W W^T and W^T W, which share their non-zero spectrum.
double coding_rate(const Matrix& samples, const Distortion& eps);

/// Total bits for the m vectors plus the n principal axes of the coding
/// scheme: L(W) = (m + n) R(W).
double coding_length(const Matrix& samples, const Distortion& eps);

/// Coding length of a set with non-zero mean: deviations about the sample
/// mean are coded through the biased covariance, the mean itself through a
/// scalar-channel bound,
///   (m+n)/2 * log2 det(I + n/eps^2 Cov) + n/2 * log2(1 + |mu|^2/eps^2).
double coding_length_with_mean(const Matrix& samples, const Distortion& eps);

/// Coding length evaluated in the Gram domain:
///   (m + a)/2 * log2 det(I_m + a/(m eps^2) K),  a = K.ambient_dim.
/// Coincides with coding_length(W, eps) when K = W^T W and a = n. Rejects
/// Gram matrices that are asymmetric or indefinite beyond tolerance.
double kernel_coding_length(const GramMatrix& gram, const Distortion& eps);

/// Distortion-softened dimension count of a covariance:
///   D_eps(Sigma) = tr(Sigma (Sigma + eps^2/n I)^-1)
///                = sum_i lambda_i / (eps^2/n + lambda_i).
/// Lies in [0, n]; approaches the rank for spectra far above eps^2/n.
double effective_dimension(const Matrix& covariance, const Distortion& eps);

/// Sample mean, biased (1/m) covariance and count of the columns of W.
GaussianMoments moments_of(const Matrix& samples);

/// Coding length with mean term evaluated from moments instead of raw
/// samples; algebraically identical to coding_length_with_mean.
double coding_length_from_moments(const GaussianMoments& moments, const Distortion& eps);

namespace detail {

/// log2 det(I + alpha * S) for symmetric PSD S, via eigendecomposition.
/// Slightly negative eigenvalues within 1e-10 of the top of the spectrum are
/// clamped to zero; anything more negative throws when `validate` is set.
double log2_det_identity_plus(double alpha, const Matrix& sym, bool validate = false);

/// log2 det(I + alpha * X X^T) computed on the smaller of the two Gram
/// products of X.
double log2_det_identity_plus_gram(double alpha, const Matrix& x);

/// Number of eigenvalues of a PSD matrix above 1e-9 times the largest one.
Index rank_estimate(const Matrix& sym_psd);

}  // namespace detail

}  // namespace ratecode

#endif  // RATECODE_CODING_HPP_
