#include "bigframe/operator_kit.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bigframe/rng.hpp"

namespace bigframe {

namespace {

// Floor for relative residual tests on products of pseudo-inverses.
constexpr double kInclusionTol = 1e-10;

Eigen::JacobiSVD<Matrix> svd_of(const Matrix& t) {
  return Eigen::JacobiSVD<Matrix>(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

}  // namespace

Matrix pseudo_inverse(const Matrix& t, const SpectralTolerance& tol) {
  if (t.size() == 0) return Matrix(t.cols(), t.rows());
  auto svd = svd_of(t);
  const auto& sigma = svd.singularValues();
  const double cutoff = tol.rank_tol(t.rows(), t.cols()) *
                        (sigma.size() > 0 ? sigma(0) : 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cutoff) inv(i) = 1.0 / sigma(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Matrix psd_sqrt(const Matrix& s, const SpectralTolerance& tol) {
  if (s.rows() != s.cols())
    throw NotHermitian("psd_sqrt: matrix is not square");
  const double scale = frobenius(s);
  if ((s - s.adjoint()).norm() > tol.rel_sym_tol * scale)
    throw NotHermitian("psd_sqrt: Hermiticity residual above tolerance");
  Matrix h = (s + s.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  Eigen::VectorXd lam = eig.eigenvalues();
  const double lmax = lam.size() ? lam.maxCoeff() : 0.0;
  const double allowance = tol.rel_psd_tol * std::max(lmax, 0.0);
  Eigen::VectorXd root(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) < -allowance)
      throw NotPSD("psd_sqrt: eigenvalue below PSD allowance");
    root(i) = std::sqrt(std::max(lam(i), 0.0));
  }
  Matrix r = eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().adjoint();
  return (r + r.adjoint()) / 2.0;
}

DouglasFactor douglas_factor(const Matrix& t1, const Matrix& t2,
                             const SpectralTolerance& tol) {
  if (t1.rows() != t2.rows())
    throw ShapeMismatch("douglas_factor: row counts differ");

  const Matrix t2_pinv = pseudo_inverse(t2, tol);
  const double n1 = frobenius(t1);
  const double residual = (t2 * (t2_pinv * t1) - t1).norm();
  const double threshold =
      std::max(tol.rank_tol(t2.rows(), t2.cols()), kInclusionTol) * n1;
  if (residual > threshold)
    throw RangeNotIncluded("douglas_factor: range of t1 not within range of t2");

  DouglasFactor out;
  out.u = t2_pinv * t1;

  // Least lambda with t1 t1* <= lambda^2 t2 t2*: largest eigenvalue of the
  // pencil (t1 t1*, t2 t2*) restricted to the range of t2.
  Matrix g2 = t2 * t2.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> eig((g2 + g2.adjoint()) / 2.0);
  const Eigen::VectorXd d = eig.eigenvalues();
  const double dmax = d.size() ? d.maxCoeff() : 0.0;
  const double cutoff = tol.rank_tol(g2.rows(), g2.cols()) * dmax;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (d(i) > cutoff) keep.push_back(i);
  if (keep.empty()) {
    out.lambda = 0.0;  // t2 = 0 forces t1 = 0 here
    return out;
  }
  Matrix vr(g2.rows(), static_cast<Eigen::Index>(keep.size()));
  Eigen::VectorXd dr(static_cast<Eigen::Index>(keep.size()));
  for (size_t j = 0; j < keep.size(); ++j) {
    vr.col(static_cast<Eigen::Index>(j)) = eig.eigenvectors().col(keep[j]);
    dr(static_cast<Eigen::Index>(j)) = d(keep[j]);
  }
  Eigen::VectorXd dinvsqrt = dr.array().rsqrt();
  Matrix g1 = t1 * t1.adjoint();
  Matrix pencil = dinvsqrt.asDiagonal() * (vr.adjoint() * g1 * vr) *
                  dinvsqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> peig((pencil + pencil.adjoint()) / 2.0);
  out.lambda = std::sqrt(std::max(peig.eigenvalues().maxCoeff(), 0.0));
  return out;
}

InjectivityMargin injectivity_margin(const Matrix& t,
                                     const SpectralTolerance& tol) {
  InjectivityMargin out;
  if (t.cols() == 0) {
    out.c = 0.0;
    out.injective_closed_range = true;  // trivial domain
    return out;
  }
  if (t.rows() < t.cols()) {
    out.c = 0.0;  // nontrivial null space
    out.injective_closed_range = false;
    return out;
  }
  auto svd = svd_of(t);
  const auto& sigma = svd.singularValues();
  const double smax = sigma(0);
  const double smin = sigma(sigma.size() - 1);
  out.c = smin * smin;
  out.injective_closed_range =
      out.c > tol.rank_tol(t.rows(), t.cols()) * smax * smax;
  return out;
}

NeumannReport neumann_bounds(const Matrix& t, double alpha, double beta,
                             int sample_count, std::uint64_t seed) {
  if (t.rows() != t.cols()) throw NotSquare("neumann_bounds: matrix not square");
  if (alpha < 0.0 || alpha >= 1.0 || beta < 0.0 || beta >= 1.0)
    throw ParamsInvalid("neumann_bounds: alpha, beta must lie in [0,1)");

  const Eigen::Index n = t.rows();
  NeumannReport out;
  out.forward = {(1.0 - alpha) / (1.0 + beta), (1.0 + alpha) / (1.0 - beta)};
  out.inverse = {(1.0 - beta) / (1.0 + alpha), (1.0 + beta) / (1.0 - alpha)};

  Matrix d = t - Matrix::Identity(n, n);
  Matrix gram = d.adjoint() * d;
  Eigen::SelfAdjointEigenSolver<Matrix> eig((gram + gram.adjoint()) / 2.0);

  auto slack = [&](const Vector& x) {
    const double nx = x.norm();
    const double ntx = (t * x).norm();
    const double ndx = (d * x).norm();
    return alpha * nx + beta * ntx - ndx;
  };

  double margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i)
    margin = std::min(margin, slack(eig.eigenvectors().col(i)));
  Rng rng = make_rng(seed);
  for (int i = 0; i < sample_count; ++i)
    margin = std::min(margin, slack(random_unit_vector(n, rng)));
  out.hypothesis_margin = margin;

  auto svd = svd_of(t);
  const auto& sigma = svd.singularValues();
  out.sigma_range = {sigma(sigma.size() - 1), sigma(0)};
  out.forward_holds = out.forward.contains(out.sigma_range.lo) &&
                      out.forward.contains(out.sigma_range.hi);
  if (out.sigma_range.lo > 0.0) {
    out.inverse_sigma_range = {1.0 / out.sigma_range.hi, 1.0 / out.sigma_range.lo};
    out.inverse_holds = out.inverse.contains(out.inverse_sigma_range.lo) &&
                        out.inverse.contains(out.inverse_sigma_range.hi);
  }
  return out;
}

}  // namespace bigframe
