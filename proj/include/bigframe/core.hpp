#pragma once

#include <optional>
#include <vector>

#include "bigframe/operator_kit.hpp"
#include "bigframe/types.hpp"

namespace bigframe {

/// Finite indexed family {Phi_i} of operators mapping the ambient space into
/// declared subspaces; operator i has shape subspace_dims[i] x ambient_dim.
struct GOperatorFamily {
  int ambient_dim = 0;
  std::vector<int> subspace_dims;
  std::vector<Matrix> operators;

  std::size_t size() const { return operators.size(); }
  void validate() const;
};

/// Block vector living in the direct sum of the subspaces.
struct DirectSumVector {
  std::vector<Vector> blocks;

  double squared_norm() const;
  Complex inner_with(const DirectSumVector& other) const;
};

/// A matched pair of families plus the distinguished operator K.
struct BiGFrameSystem {
  GOperatorFamily phi;
  GOperatorFamily psi;
  Matrix k_op;

  void validate() const;
};

enum class Verdict {
  invalid_non_real_form,
  invalid_indefinite,
  bessel_only,
  bi_g_frame,
  k_bi_g_frame,
  tight_k_bi_g_frame,
  parseval_k_bi_g_frame,
};

const char* verdict_name(Verdict v);
bool is_frame_verdict(Verdict v);  // >= k_bi_g_frame

struct ClassificationReport {
  Verdict verdict = Verdict::bessel_only;
  std::optional<FrameBounds> optimal_bounds;
  double hermiticity_residual = 0.0;
  double min_eigenvalue = 0.0;
  double tight_residual = 0.0;
  int k_rank = 0;
  bool degenerate_k = false;
  bool phi_equals_psi = false;  // doubles as a K-g-frame statement
};

/// S = sum_i Psi_i* Phi_i, summed in ascending index order.
Matrix biframe_operator(const BiGFrameSystem& sys);

/// sum_i <Phi_i x, Psi_i x>; equals <Sx, x> within round-off.
Complex quadratic_form(const BiGFrameSystem& sys, const Vector& x);

struct GFrameInfo {
  Matrix frame_operator;  // sum_i Phi_i* Phi_i
  double bessel_bound;    // its largest eigenvalue
};
GFrameInfo g_frame_operator_and_bessel(const GOperatorFamily& fam);

struct BoundsResult {
  enum class Status { ok, invalid_non_real_form, invalid_indefinite };
  Status status = Status::ok;
  std::optional<FrameBounds> bounds;
  double a_opt = 0.0;  // +inf sentinel when K = 0
  double b_opt = 0.0;
  double hermiticity_residual = 0.0;
  double min_eigenvalue = 0.0;
  int k_rank = 0;
  bool degenerate_k = false;
};

/// Optimal K-bi-g-frame bounds. The upper bound is lambda_max(S); the lower
/// bound is the infimum of <Sx,x>/|K*x|^2, computed by a Schur complement of
/// S onto the range of KK* when KK* is singular.
BoundsResult optimal_bounds(const BiGFrameSystem& sys,
                            const SpectralTolerance& tol = {});

ClassificationReport classify(const BiGFrameSystem& sys,
                              const SpectralTolerance& tol = {});

/// lambda_min(S - a KK*); nonnegative iff a is a valid lower frame bound.
double psd_gap(const BiGFrameSystem& sys, double a,
               const SpectralTolerance& tol = {});

/// Solves K = S^(1/2) U through the square root of the biframe operator.
/// Throws RangeNotIncluded when the system is not a K-bi-g-frame.
Matrix sqrt_factor(const BiGFrameSystem& sys, const SpectralTolerance& tol = {});

}  // namespace bigframe
