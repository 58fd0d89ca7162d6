#pragma once

#include <cstdint>

#include "bigframe/types.hpp"

namespace bigframe {

/// Moore-Penrose pseudo-inverse. Rank is decided by singular values above
/// rank_tol * sigma_max; the zero matrix maps to the zero matrix of
/// transposed shape.
Matrix pseudo_inverse(const Matrix& t, const SpectralTolerance& tol = {});

/// Hermitian PSD square root. Eigenvalues within -rel_psd_tol*lambda_max of
/// zero are clamped to zero. Throws NotHermitian / NotPSD.
Matrix psd_sqrt(const Matrix& s, const SpectralTolerance& tol = {});

struct DouglasFactor {
  Matrix u;       // t1 = t2 * u
  double lambda;  // least lambda >= 0 with t1 t1* <= lambda^2 t2 t2*
};

/// Factorization through a range inclusion: if R(t1) is contained in R(t2)
/// (tested via the orthogonal projector onto R(t2)), returns u = t2^+ t1 and
/// the minimal majorization constant. Throws RangeNotIncluded otherwise.
DouglasFactor douglas_factor(const Matrix& t1, const Matrix& t2,
                             const SpectralTolerance& tol = {});

struct InjectivityMargin {
  double c = 0.0;  // sigma_min(t)^2
  bool injective_closed_range = false;
};

/// Largest c with c*|x|^2 <= |Tx|^2; the flag is true iff c clears the
/// relative rank cutoff.
InjectivityMargin injectivity_margin(const Matrix& t,
                                     const SpectralTolerance& tol = {});

struct NeumannReport {
  double hypothesis_margin = 0.0;
  Interval forward;   // |Tx| / |x| range implied by the hypothesis
  Interval inverse;   // |T^-1 x| / |x| range
  Interval sigma_range;          // actual singular value range of T
  Interval inverse_sigma_range;  // actual range for T^-1 (when invertible)
  bool forward_holds = false;
  bool inverse_holds = false;
};

/// Checks the |Tx - x| <= alpha|x| + beta|Tx| hypothesis on seeded unit
/// samples plus the extremal eigenvectors of (T-I)*(T-I), reporting the worst
/// slack, and evaluates the implied two-sided norm bounds. Throws NotSquare.
NeumannReport neumann_bounds(const Matrix& t, double alpha, double beta,
                             int sample_count, std::uint64_t seed);

}  // namespace bigframe
