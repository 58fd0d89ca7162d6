#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bigframe/core.hpp"

namespace bigframe {

/// Bounds predicted by one of the combination / transform theorems, together
/// with the stated constant when it differs from the implemented one.
struct PredictedBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::string source;
  std::optional<double> stated_constant;
};

/// Exchanges the two families; classification and optimal bounds are
/// invariant under the exchange.
BiGFrameSystem swap_families(const BiGFrameSystem& sys);

/// Bounds for the combined operator sum_j alpha_j K_j given valid bounds for
/// each K_j. The implemented lower constant carries the Cauchy-Schwarz factor
/// n; the stated constant without it is recorded in stated_constant.
PredictedBounds combined_operator_bounds(const std::vector<FrameBounds>& bounds,
                                         const std::vector<Complex>& coeffs);

/// Bounds for the product K_1 K_2 ... K_n from K_1 bounds and the tail.
PredictedBounds product_operator_bounds(const FrameBounds& a1,
                                        const std::vector<Matrix>& k_tail);

/// Lifts ordinary bi-g-frame bounds to K bounds when |K| >= 1.
PredictedBounds lift_ordinary(const FrameBounds& bi_bounds, const Matrix& k);

struct RestrictResult {
  BiGFrameSystem system;
  PredictedBounds predicted;
  double alpha = 0.0;  // minimal majorization constant for (T, K)
};

/// Replaces K by an operator T with R(T) within R(K); predicts lower A/alpha^2.
RestrictResult restrict_range(const BiGFrameSystem& sys, const Matrix& t,
                              const SpectralTolerance& tol = {});

/// Domain-side perturbation by (I + T^n) for positive T; the output biframe
/// operator is (I + T^n)* S (I + T^n).
BiGFrameSystem positive_perturb(const BiGFrameSystem& sys, const Matrix& t,
                                int n, const SpectralTolerance& tol = {});

struct ComposeResult {
  BiGFrameSystem system;
  PredictedBounds predicted;
};

/// Composes both families with M* on the domain side, requiring MK = KM and
/// R(K*) within R(M); predicts (A |M^+|^-2, B |M|^2).
ComposeResult right_compose(const BiGFrameSystem& sys, const Matrix& m,
                            const SpectralTolerance& tol = {});

struct SurjectivityVerdicts {
  bool is_k_bi_g_frame = false;
  bool m_surjective = false;
};

/// For a tight system with surjective K* and commuting M, the composed system
/// is a K-bi-g-frame exactly when M is surjective; both sides are computed
/// independently.
SurjectivityVerdicts surjectivity_equivalence(const BiGFrameSystem& sys_tight,
                                              double delta, const Matrix& m,
                                              const SpectralTolerance& tol = {});

}  // namespace bigframe
