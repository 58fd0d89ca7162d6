#include "bigframe/stability.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <set>

#include "bigframe/rng.hpp"

namespace bigframe {

const char* variant_name(StabilityVariant v) {
  switch (v) {
    case StabilityVariant::thm_5_1: return "thm_5_1";
    case StabilityVariant::cor_5_2: return "cor_5_2";
    case StabilityVariant::thm_5_3: return "thm_5_3";
    case StabilityVariant::thm_5_4: return "thm_5_4";
  }
  return "unknown";
}

void StabilityParams::validate(const FrameBounds& reference) const {
  auto in_unit = [](double v) { return v >= 0.0 && v < 1.0; };
  if (!in_unit(alpha) || !in_unit(beta) || !in_unit(gamma) || !in_unit(sigma))
    throw ParamsInvalid("stability: constants must lie in [0,1)");
  const double a = reference.lower;
  const double b = reference.upper;
  // A_opt may legitimately exceed B_opt (the two constants weigh different
  // quadratic forms when |K| is small), so only positivity is required.
  if (a <= 0.0 || b <= 0.0)
    throw ParamsInvalid("stability: reference bounds invalid");
  const double ba = std::sqrt(b / a);
  switch (variant) {
    case StabilityVariant::thm_5_1:
      if (std::max(alpha + gamma, beta) >= 1.0)
        throw ParamsInvalid("stability: max{alpha+gamma, beta} must be < 1");
      break;
    case StabilityVariant::cor_5_2:
      if (!(d_const > 0.0 && d_const < a))
        throw ParamsInvalid("stability: D must satisfy 0 < D < A");
      break;
    case StabilityVariant::thm_5_3:
      if (std::max(alpha + gamma * ba, beta) >= 1.0)
        throw ParamsInvalid("stability: max{alpha+gamma*sqrt(B/A), beta} must be < 1");
      break;
    case StabilityVariant::thm_5_4:
      if (std::max(alpha + sigma + gamma * ba, beta) >= 1.0)
        throw ParamsInvalid(
            "stability: max{alpha+sigma+gamma*sqrt(B/A), beta} must be < 1");
      break;
  }
}

std::vector<std::vector<int>> enumerate_subsets(const SubsetPolicy& policy,
                                                int family_size) {
  std::vector<std::vector<int>> out;
  if (policy.mode == SubsetPolicy::Mode::exhaustive) {
    if (family_size > policy.max_exhaustive)
      throw SpecInvalid("subset policy: family too large for exhaustive mode");
    const std::uint64_t total = 1ull << family_size;
    out.reserve(total);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      std::vector<int> subset;
      for (int i = 0; i < family_size; ++i)
        if (mask & (1ull << i)) subset.push_back(i);
      out.push_back(std::move(subset));
    }
    return out;
  }
  std::set<std::vector<int>> seen;
  auto add = [&](std::vector<int> s) {
    if (seen.insert(s).second) out.push_back(std::move(s));
  };
  add({});
  std::vector<int> full(family_size);
  for (int i = 0; i < family_size; ++i) full[i] = i;
  for (int i = 0; i < family_size; ++i) {
    add({i});
    add(std::vector<int>(full.begin(), full.begin() + i + 1));  // prefix
    std::vector<int> complement;
    for (int j = 0; j < family_size; ++j)
      if (j != i) complement.push_back(j);
    add(std::move(complement));
  }
  add(full);
  return out;
}

Matrix partial_sum_operator(const GOperatorFamily& phi,
                            const GOperatorFamily& psi,
                            const std::vector<int>& subset) {
  phi.validate();
  psi.validate();
  if (phi.ambient_dim != psi.ambient_dim ||
      phi.subspace_dims != psi.subspace_dims)
    throw ShapeMismatch("partial_sum_operator: families do not match");
  const int n = phi.ambient_dim;
  Matrix s = Matrix::Zero(n, n);
  for (int i : subset) {
    if (i < 0 || static_cast<std::size_t>(i) >= phi.size())
      throw IndexOutOfRange("partial_sum_operator: index out of range");
    s += psi.operators[i].adjoint() * phi.operators[i];
  }
  return s;
}

MarginReport hypothesis_margin(const BiGFrameSystem& base,
                               const GOperatorFamily& cand_phi,
                               const GOperatorFamily& cand_psi,
                               const StabilityParams& params,
                               const SubsetPolicy& policy, int sample_count,
                               std::uint64_t seed) {
  base.validate();
  cand_phi.validate();
  cand_psi.validate();
  if (cand_phi.ambient_dim != base.phi.ambient_dim ||
      cand_phi.subspace_dims != base.phi.subspace_dims ||
      cand_psi.ambient_dim != base.psi.ambient_dim ||
      cand_psi.subspace_dims != base.psi.subspace_dims)
    throw ShapeMismatch("hypothesis_margin: candidate families do not match base");

  const int n = base.phi.ambient_dim;
  const Matrix k_adj = base.k_op.adjoint();
  auto subsets =
      enumerate_subsets(policy, static_cast<int>(base.phi.size()));

  MarginReport report;
  report.margin = std::numeric_limits<double>::infinity();
  report.worst_vector = Vector::Zero(n);

  Rng rng = make_rng(seed);
  for (const auto& subset : subsets) {
    const Matrix s_j = partial_sum_operator(base.phi, base.psi, subset);
    const Matrix m_j = partial_sum_operator(cand_phi, cand_psi, subset);
    const Matrix diff = s_j - m_j;

    auto slack = [&](const Vector& x) {
      double rhs = 0.0;
      switch (params.variant) {
        case StabilityVariant::thm_5_1:
          rhs = params.alpha * (s_j * x).norm() + params.beta * (m_j * x).norm() +
                params.gamma * x.norm();
          break;
        case StabilityVariant::cor_5_2:
          rhs = params.d_const * (k_adj * x).norm();
          break;
        case StabilityVariant::thm_5_3:
          rhs = params.alpha * (s_j * x).norm() + params.beta * (m_j * x).norm() +
                params.gamma * (k_adj * x).norm();
          break;
        case StabilityVariant::thm_5_4:
          rhs = params.alpha * (s_j * x).norm() + params.beta * (m_j * x).norm() +
                params.sigma * x.norm() + params.gamma * (k_adj * x).norm();
          break;
      }
      return rhs - (diff * x).norm();
    };

    auto consider = [&](const Vector& x) {
      const double v = slack(x);
      if (v < report.margin) {
        report.margin = v;
        report.worst_subset = subset;
        report.worst_vector = x;
      }
    };

    Matrix gram = diff.adjoint() * diff;
    Eigen::SelfAdjointEigenSolver<Matrix> eig((gram + gram.adjoint()) / 2.0);
    for (Eigen::Index i = 0; i < n; ++i) consider(eig.eigenvectors().col(i));
    for (int i = 0; i < sample_count; ++i)
      consider(random_unit_vector(n, rng));
  }
  return report;
}

PredictedBounds predicted_stability_bounds(const StabilityParams& params,
                                           const FrameBounds& base_bounds,
                                           double bessel_phi,
                                           double bessel_psi) {
  params.validate(base_bounds);
  if (bessel_phi <= 0.0 || bessel_psi <= 0.0)
    throw ParamsInvalid("stability: Bessel bounds must be positive");
  const double a = base_bounds.lower;
  const double b = base_bounds.upper;
  const double root_bessel = std::sqrt(bessel_phi * bessel_psi);
  const double ba = std::sqrt(b / a);

  PredictedBounds out;
  out.source = variant_name(params.variant);
  switch (params.variant) {
    case StabilityVariant::thm_5_1:
      out.lower = a * (1.0 - (params.alpha + params.gamma)) / (1.0 + params.beta);
      out.upper = ((1.0 + params.alpha) * root_bessel + params.gamma) /
                  (1.0 - params.beta);
      break;
    case StabilityVariant::cor_5_2:
      out.lower = a * (1.0 - params.d_const * ba);
      out.upper = root_bessel + params.d_const * ba;
      break;
    case StabilityVariant::thm_5_3:
      out.lower =
          a * (1.0 - (params.alpha + params.gamma * ba)) / (1.0 + params.beta);
      out.upper = ((1.0 + params.alpha) * root_bessel + params.gamma * ba) /
                  (1.0 - params.beta);
      break;
    case StabilityVariant::thm_5_4:
      out.lower = a * (1.0 - (params.alpha + params.sigma + params.gamma * ba)) /
                  (1.0 + params.beta);
      out.upper = ((1.0 + params.alpha) * root_bessel + params.sigma +
                   params.gamma * ba) /
                  (1.0 - params.beta);
      break;
  }
  return out;
}

StabilityCertificate certify_stability(const BiGFrameSystem& base,
                                       const GOperatorFamily& cand_phi,
                                       const GOperatorFamily& cand_psi,
                                       const StabilityParams& params,
                                       const SubsetPolicy& policy,
                                       const SpectralTolerance& tol,
                                       std::uint64_t seed) {
  BoundsResult base_bounds = optimal_bounds(base, tol);
  if (!base_bounds.bounds)
    throw SpecInvalid("certify_stability: base system is not a K-bi-g-frame");

  constexpr int kSampleCount = 32;
  StabilityCertificate cert;
  cert.policy_used = policy;
  MarginReport margin = hypothesis_margin(base, cand_phi, cand_psi, params,
                                          policy, kSampleCount, seed);
  cert.hypothesis_margin = margin.margin;

  const double bessel_phi = g_frame_operator_and_bessel(base.phi).bessel_bound;
  const double bessel_psi = g_frame_operator_and_bessel(base.psi).bessel_bound;
  cert.predicted = predicted_stability_bounds(params, *base_bounds.bounds,
                                              bessel_phi, bessel_psi);
  cert.lower_bound_note =
      "lower bound is diagnostic only: the stated constant and its derivation "
      "differ by a factor of |KK*|";

  BiGFrameSystem candidate{cand_phi, cand_psi, base.k_op};
  ClassificationReport rep = classify(candidate, tol);
  cert.candidate_verdict = rep.verdict;
  cert.achieved = rep.optimal_bounds;

  const double upper_slack =
      1e-9 * std::max({1.0, cert.predicted.upper,
                       cert.achieved ? cert.achieved->upper : 0.0});
  cert.verdict = cert.hypothesis_margin >= -1e-12 &&
                 is_frame_verdict(rep.verdict) && cert.achieved &&
                 cert.achieved->upper <= cert.predicted.upper + upper_slack;
  return cert;
}

}  // namespace bigframe
