#include "bigframe/transforms.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace bigframe {

namespace {

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

FrameBounds require_bounds(const BiGFrameSystem& sys,
                           const SpectralTolerance& tol) {
  BoundsResult br = optimal_bounds(sys, tol);
  if (!br.bounds)
    throw SpecInvalid("transform: input system is not a K-bi-g-frame");
  return *br.bounds;
}

}  // namespace

BiGFrameSystem swap_families(const BiGFrameSystem& sys) {
  return BiGFrameSystem{sys.psi, sys.phi, sys.k_op};
}

PredictedBounds combined_operator_bounds(const std::vector<FrameBounds>& bounds,
                                         const std::vector<Complex>& coeffs) {
  if (bounds.empty() || coeffs.empty())
    throw EmptyInput("combined_operator_bounds: empty input");
  if (bounds.size() != coeffs.size())
    throw ShapeMismatch("combined_operator_bounds: list length mismatch");
  const double n = static_cast<double>(bounds.size());
  double weight = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < bounds.size(); ++j) {
    if (bounds[j].lower <= 0.0 || bounds[j].upper <= 0.0)
      throw NonPositiveBound("combined_operator_bounds: bounds must be positive");
    weight += std::norm(coeffs[j]) / bounds[j].lower;
    upper = std::min(upper, bounds[j].upper);
  }
  PredictedBounds out;
  out.lower = 1.0 / (n * weight);
  out.upper = upper;
  out.source = "combined-operator";
  // The stated constant omits the cross-term factor n.
  out.stated_constant = 1.0 / weight;
  if (bounds.size() == 1) {
    out.lower = 1.0 / weight;  // no cross terms to compensate
    out.stated_constant.reset();
  }
  return out;
}

PredictedBounds product_operator_bounds(const FrameBounds& a1,
                                        const std::vector<Matrix>& k_tail) {
  if (a1.lower <= 0.0 || a1.upper <= 0.0)
    throw NonPositiveBound("product_operator_bounds: bounds must be positive");
  PredictedBounds out;
  out.source = "product-operator";
  out.upper = a1.upper;
  if (k_tail.empty()) {
    out.lower = a1.lower;
    return out;
  }
  // |K_n* ... K_2*| computed on the adjoint product, highest index first.
  Matrix tail = k_tail.back().adjoint();
  for (auto it = std::next(k_tail.rbegin()); it != k_tail.rend(); ++it)
    tail = tail * it->adjoint();
  const double norm = operator_norm(tail);
  if (norm == 0.0)
    throw ZeroTailNorm("product_operator_bounds: tail product is zero");
  out.lower = a1.lower / (norm * norm);
  return out;
}

PredictedBounds lift_ordinary(const FrameBounds& bi_bounds, const Matrix& k) {
  const double norm = operator_norm(k);
  if (norm < 1.0)
    throw NormBelowOne("lift_ordinary: |K| < 1 violates the hypothesis");
  PredictedBounds out;
  out.source = "lift-ordinary";
  out.lower = bi_bounds.lower / (norm * norm);
  out.upper = bi_bounds.upper;
  return out;
}

RestrictResult restrict_range(const BiGFrameSystem& sys, const Matrix& t,
                              const SpectralTolerance& tol) {
  sys.validate();
  if (t.rows() != sys.phi.ambient_dim || t.cols() != sys.phi.ambient_dim)
    throw ShapeMismatch("restrict_range: operand must be square of ambient dim");
  const FrameBounds base = require_bounds(sys, tol);
  DouglasFactor f = douglas_factor(t, sys.k_op, tol);
  RestrictResult out;
  out.system = BiGFrameSystem{sys.phi, sys.psi, t};
  out.alpha = f.lambda;
  out.predicted.source = "restrict-range";
  out.predicted.lower = base.lower / (f.lambda * f.lambda);
  out.predicted.upper = base.upper;
  return out;
}

BiGFrameSystem positive_perturb(const BiGFrameSystem& sys, const Matrix& t,
                                int n, const SpectralTolerance& tol) {
  sys.validate();
  if (n <= 0) throw SpecInvalid("positive_perturb: power must be positive");
  if (t.rows() != sys.phi.ambient_dim || t.cols() != sys.phi.ambient_dim)
    throw ShapeMismatch("positive_perturb: operand must be square of ambient dim");
  const double t_norm = frobenius(t);
  if ((t - t.adjoint()).norm() > tol.rel_sym_tol * t_norm)
    throw NotPositive("positive_perturb: operand not Hermitian");
  {
    Matrix h = (t + t.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    const double lmax = eig.eigenvalues().maxCoeff();
    if (eig.eigenvalues().minCoeff() < -tol.rel_psd_tol * std::max(lmax, 0.0))
      throw NotPositive("positive_perturb: operand has a negative eigenvalue");
  }
  const int dim = sys.phi.ambient_dim;
  Matrix tn = Matrix::Identity(dim, dim);
  for (int i = 0; i < n; ++i) tn = tn * t;
  Matrix factor = Matrix::Identity(dim, dim) + tn;

  BiGFrameSystem out = sys;
  for (std::size_t i = 0; i < sys.phi.size(); ++i) {
    out.phi.operators[i] = sys.phi.operators[i] * factor;
    out.psi.operators[i] = sys.psi.operators[i] * factor;
  }
  return out;
}

ComposeResult right_compose(const BiGFrameSystem& sys, const Matrix& m,
                            const SpectralTolerance& tol) {
  sys.validate();
  if (m.rows() != sys.phi.ambient_dim || m.cols() != sys.phi.ambient_dim)
    throw ShapeMismatch("right_compose: operand must be square of ambient dim");
  const Matrix& k = sys.k_op;
  const double comm_scale = frobenius(m) * frobenius(k);
  if ((m * k - k * m).norm() > tol.rel_sym_tol * std::max(comm_scale, 1e-300))
    throw CommutatorTooLarge("right_compose: MK != KM within tolerance");
  douglas_factor(k.adjoint(), m, tol);  // R(K*) within R(M)

  const FrameBounds base = require_bounds(sys, tol);

  ComposeResult out;
  out.system = sys;
  Matrix m_adj = m.adjoint();
  for (std::size_t i = 0; i < sys.phi.size(); ++i) {
    out.system.phi.operators[i] = sys.phi.operators[i] * m_adj;
    out.system.psi.operators[i] = sys.psi.operators[i] * m_adj;
  }
  const double m_norm = operator_norm(m);
  const double m_pinv_norm = operator_norm(pseudo_inverse(m, tol));
  out.predicted.source = "right-compose";
  out.predicted.lower = base.lower / (m_pinv_norm * m_pinv_norm);
  out.predicted.upper = base.upper * m_norm * m_norm;
  return out;
}

SurjectivityVerdicts surjectivity_equivalence(const BiGFrameSystem& sys_tight,
                                              double delta, const Matrix& m,
                                              const SpectralTolerance& tol) {
  sys_tight.validate();
  if (delta <= 0.0)
    throw ParamsInvalid("surjectivity_equivalence: delta must be positive");

  ClassificationReport rep = classify(sys_tight, tol);
  if (rep.verdict < Verdict::tight_k_bi_g_frame || !rep.optimal_bounds)
    throw NotTight("surjectivity_equivalence: base system is not tight");
  const double a = rep.optimal_bounds->lower;
  if (std::abs(a - delta) > 1e-8 * std::max(1.0, std::abs(delta)))
    throw NotTight("surjectivity_equivalence: tightness constant differs from delta");

  const Matrix& k = sys_tight.k_op;
  const int n = sys_tight.phi.ambient_dim;
  {
    Eigen::JacobiSVD<Matrix> svd(k);
    const auto& sigma = svd.singularValues();
    if (sigma(sigma.size() - 1) <= tol.rank_tol(n, n) * sigma(0))
      throw KStarNotSurjective("surjectivity_equivalence: R(K*) is not all of H");
  }
  const double comm_scale = frobenius(m) * frobenius(k);
  if ((m * k - k * m).norm() > tol.rel_sym_tol * std::max(comm_scale, 1e-300))
    throw CommutatorTooLarge("surjectivity_equivalence: MK != KM within tolerance");

  BiGFrameSystem composed = sys_tight;
  Matrix m_adj = m.adjoint();
  for (std::size_t i = 0; i < sys_tight.phi.size(); ++i) {
    composed.phi.operators[i] = sys_tight.phi.operators[i] * m_adj;
    composed.psi.operators[i] = sys_tight.psi.operators[i] * m_adj;
  }

  SurjectivityVerdicts out;
  out.is_k_bi_g_frame = is_frame_verdict(classify(composed, tol).verdict);
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sigma = svd.singularValues();
  out.m_surjective = sigma(sigma.size() - 1) > tol.rank_tol(n, n) * sigma(0) &&
                     sigma(0) > 0.0;
  return out;
}

}  // namespace bigframe
