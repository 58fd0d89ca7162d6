#include "bigframe/core.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace bigframe {

void GOperatorFamily::validate() const {
  if (ambient_dim <= 0) throw ShapeMismatch("family: ambient_dim must be positive");
  if (subspace_dims.size() != operators.size())
    throw ShapeMismatch("family: subspace_dims / operators count mismatch");
  for (std::size_t i = 0; i < operators.size(); ++i) {
    if (subspace_dims[i] <= 0)
      throw ShapeMismatch("family: subspace dim must be positive");
    if (operators[i].rows() != subspace_dims[i] ||
        operators[i].cols() != ambient_dim)
      throw ShapeMismatch("family: operator " + std::to_string(i + 1) +
                          " has inconsistent shape");
    if (!all_finite(operators[i]))
      throw ShapeMismatch("family: operator " + std::to_string(i + 1) +
                          " has non-finite entries");
  }
}

double DirectSumVector::squared_norm() const {
  double s = 0.0;
  for (const auto& b : blocks) s += b.squaredNorm();
  return s;
}

Complex DirectSumVector::inner_with(const DirectSumVector& other) const {
  if (blocks.size() != other.blocks.size())
    throw DimensionMismatch("direct sum: block count mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    s += inner(blocks[i], other.blocks[i]);
  return s;
}

void BiGFrameSystem::validate() const {
  phi.validate();
  psi.validate();
  if (phi.ambient_dim != psi.ambient_dim ||
      phi.subspace_dims != psi.subspace_dims)
    throw ShapeMismatch("system: phi and psi families do not match");
  if (k_op.rows() != phi.ambient_dim || k_op.cols() != phi.ambient_dim)
    throw ShapeMismatch("system: K must be square of ambient dimension");
  if (!all_finite(k_op))
    throw ShapeMismatch("system: K has non-finite entries");
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::invalid_non_real_form: return "invalid_non_real_form";
    case Verdict::invalid_indefinite: return "invalid_indefinite";
    case Verdict::bessel_only: return "bessel_only";
    case Verdict::bi_g_frame: return "bi_g_frame";
    case Verdict::k_bi_g_frame: return "k_bi_g_frame";
    case Verdict::tight_k_bi_g_frame: return "tight_k_bi_g_frame";
    case Verdict::parseval_k_bi_g_frame: return "parseval_k_bi_g_frame";
  }
  return "unknown";
}

bool is_frame_verdict(Verdict v) { return v >= Verdict::k_bi_g_frame; }

Matrix biframe_operator(const BiGFrameSystem& sys) {
  sys.validate();
  const int n = sys.phi.ambient_dim;
  Matrix s = Matrix::Zero(n, n);
  // Scalar kernel with a fixed accumulation order instead of a blocked
  // product: rounding then commutes with conjugation, so exchanging the two
  // families yields the exact (bitwise) adjoint of S.
  for (std::size_t i = 0; i < sys.phi.size(); ++i) {
    const Matrix& p = sys.phi.operators[i];
    const Matrix& q = sys.psi.operators[i];
    const Eigen::Index d = p.rows();
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        double re = 0.0, im = 0.0;
        for (Eigen::Index k = 0; k < d; ++k) {
          const Complex& a = q(k, r);
          const Complex& b = p(k, c);
          const double t1 = a.real() * b.real();
          const double t2 = a.imag() * b.imag();
          const double t3 = a.real() * b.imag();
          const double t4 = a.imag() * b.real();
          re += t1 + t2;
          im += t3 - t4;
        }
        s(r, c) += Complex(re, im);
      }
    }
  }
  return s;
}

Complex quadratic_form(const BiGFrameSystem& sys, const Vector& x) {
  sys.validate();
  if (x.size() != sys.phi.ambient_dim)
    throw DimensionMismatch("quadratic_form: vector length mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < sys.phi.size(); ++i)
    s += inner(sys.phi.operators[i] * x, sys.psi.operators[i] * x);
  return s;
}

GFrameInfo g_frame_operator_and_bessel(const GOperatorFamily& fam) {
  fam.validate();
  const int n = fam.ambient_dim;
  Matrix s = Matrix::Zero(n, n);
  for (const auto& op : fam.operators) s += op.adjoint() * op;
  Eigen::SelfAdjointEigenSolver<Matrix> eig((s + s.adjoint()) / 2.0);
  return {s, std::max(eig.eigenvalues().maxCoeff(), 0.0)};
}

BoundsResult optimal_bounds(const BiGFrameSystem& sys,
                            const SpectralTolerance& tol) {
  BoundsResult out;
  Matrix s0 = biframe_operator(sys);
  const double s_norm = frobenius(s0);

  out.hermiticity_residual = (s0 - s0.adjoint()).norm();
  if (out.hermiticity_residual > tol.rel_sym_tol * s_norm) {
    out.status = BoundsResult::Status::invalid_non_real_form;
    return out;
  }
  Matrix s = (s0 + s0.adjoint()) / 2.0;

  Eigen::SelfAdjointEigenSolver<Matrix> seig(s);
  const Eigen::VectorXd lam = seig.eigenvalues();
  const double lmax = lam.maxCoeff();
  const double lmin = lam.minCoeff();
  out.min_eigenvalue = lmin;
  out.b_opt = lmax;
  if (lmin < -tol.rel_psd_tol * lmax) {
    out.status = BoundsResult::Status::invalid_indefinite;
    return out;
  }

  const int n = sys.phi.ambient_dim;
  Matrix kk = sys.k_op * sys.k_op.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> keig((kk + kk.adjoint()) / 2.0);
  const Eigen::VectorXd d = keig.eigenvalues();
  const double dmax = d.maxCoeff();
  const double cutoff = tol.rank_tol(n, n) * std::max(dmax, 0.0);

  std::vector<Eigen::Index> range_idx, null_idx;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) > cutoff)
      range_idx.push_back(i);
    else
      null_idx.push_back(i);
  }
  out.k_rank = static_cast<int>(range_idx.size());

  if (range_idx.empty()) {
    out.degenerate_k = true;
    out.a_opt = std::numeric_limits<double>::infinity();
    return out;
  }

  const Eigen::Index r = static_cast<Eigen::Index>(range_idx.size());
  const Eigen::Index m = static_cast<Eigen::Index>(null_idx.size());
  Matrix vr(n, r), vn(n, m);
  Eigen::VectorXd dr(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    vr.col(j) = keig.eigenvectors().col(range_idx[j]);
    dr(j) = d(range_idx[j]);
  }
  for (Eigen::Index j = 0; j < m; ++j)
    vn.col(j) = keig.eigenvectors().col(null_idx[j]);

  // Schur complement of S onto the range of KK*: minimizing the quadratic
  // form over the null component in closed form.
  Matrix srr = vr.adjoint() * s * vr;
  Matrix sigma_r = srr;
  if (m > 0) {
    Matrix srn = vr.adjoint() * s * vn;
    Matrix snn = vn.adjoint() * s * vn;
    sigma_r = srr - srn * pseudo_inverse((snn + snn.adjoint()) / 2.0, tol) *
                        srn.adjoint();
  }
  Eigen::VectorXd dinvsqrt = dr.array().rsqrt();
  Matrix pencil =
      dinvsqrt.asDiagonal() * ((sigma_r + sigma_r.adjoint()) / 2.0) *
      dinvsqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> peig((pencil + pencil.adjoint()) / 2.0);
  out.a_opt = peig.eigenvalues().minCoeff();

  if (out.a_opt > tol.rel_psd_tol * lmax && out.b_opt > 0.0)
    out.bounds = FrameBounds{out.a_opt, out.b_opt};
  return out;
}

namespace {

bool families_equal(const GOperatorFamily& a, const GOperatorFamily& b) {
  if (a.subspace_dims != b.subspace_dims) return false;
  for (std::size_t i = 0; i < a.operators.size(); ++i)
    if (a.operators[i] != b.operators[i]) return false;
  return true;
}

}  // namespace

ClassificationReport classify(const BiGFrameSystem& sys,
                              const SpectralTolerance& tol) {
  BoundsResult br = optimal_bounds(sys, tol);
  ClassificationReport rep;
  rep.hermiticity_residual = br.hermiticity_residual;
  rep.min_eigenvalue = br.min_eigenvalue;
  rep.k_rank = br.k_rank;
  rep.degenerate_k = br.degenerate_k;
  rep.optimal_bounds = br.bounds;
  rep.phi_equals_psi = families_equal(sys.phi, sys.psi);

  if (br.status == BoundsResult::Status::invalid_non_real_form) {
    rep.verdict = Verdict::invalid_non_real_form;
    return rep;
  }
  if (br.status == BoundsResult::Status::invalid_indefinite) {
    rep.verdict = Verdict::invalid_indefinite;
    return rep;
  }

  Matrix s0 = biframe_operator(sys);
  Matrix s = (s0 + s0.adjoint()) / 2.0;
  Matrix kk = sys.k_op * sys.k_op.adjoint();
  const double s_norm = frobenius(s);
  const double cutoff = tol.rel_psd_tol * std::max(br.b_opt, 0.0);

  if (br.degenerate_k) {
    rep.tight_residual = s_norm;
    rep.verdict = (br.min_eigenvalue > cutoff) ? Verdict::bi_g_frame
                                               : Verdict::bessel_only;
    return rep;
  }

  const bool is_frame = std::isfinite(br.a_opt) && br.a_opt > cutoff;
  rep.tight_residual =
      is_frame ? (s - br.a_opt * kk).norm() : s_norm;
  if (!is_frame) {
    rep.verdict = Verdict::bessel_only;
    return rep;
  }
  rep.verdict = Verdict::k_bi_g_frame;
  if (rep.tight_residual <= tol.rel_psd_tol * s_norm) {
    rep.verdict = Verdict::tight_k_bi_g_frame;
    if (std::abs(br.a_opt - 1.0) <= tol.rel_psd_tol)
      rep.verdict = Verdict::parseval_k_bi_g_frame;
  }
  return rep;
}

double psd_gap(const BiGFrameSystem& sys, double a,
               const SpectralTolerance& tol) {
  Matrix s0 = biframe_operator(sys);
  if ((s0 - s0.adjoint()).norm() > tol.rel_sym_tol * frobenius(s0))
    throw NotHermitian("psd_gap: biframe operator not Hermitian");
  Matrix s = (s0 + s0.adjoint()) / 2.0;
  Matrix gap = s - a * (sys.k_op * sys.k_op.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig((gap + gap.adjoint()) / 2.0);
  return eig.eigenvalues().minCoeff();
}

Matrix sqrt_factor(const BiGFrameSystem& sys, const SpectralTolerance& tol) {
  Matrix s = biframe_operator(sys);
  Matrix root = psd_sqrt(s, tol);
  return douglas_factor(sys.k_op, root, tol).u;
}

}  // namespace bigframe
