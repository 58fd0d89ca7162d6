#include "bigframe/verify.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <functional>
#include <map>

#include "bigframe/core.hpp"
#include "bigframe/instances.hpp"
#include "bigframe/rng.hpp"
#include "bigframe/stability.hpp"
#include "bigframe/transforms.hpp"

namespace bigframe {

namespace {

constexpr double kSoundnessSlack = 1e-8;

void record(SuiteResult& res, std::uint64_t trial_seed, bool ok, double margin,
            const std::string& note = {}) {
  ++res.total;
  res.worst_margin = std::min(res.worst_margin, margin);
  if (!ok) {
    ++res.failed;
    res.failing_seeds.push_back(trial_seed);
    if (!note.empty()) res.notes.push_back(note);
  }
}

std::uint64_t trial_seed(std::uint64_t seed, int index) {
  return seed * 1000003ull + static_cast<std::uint64_t>(index);
}

GeneratorSpec draw_spec(Rng& rng, GeneratorSpec::Kind kind, std::uint64_t seed,
                        int dim_lo = 2, int dim_hi = 16, int fam_lo = 1,
                        int fam_hi = 8) {
  GeneratorSpec spec;
  spec.ambient_dim = std::uniform_int_distribution<int>(dim_lo, dim_hi)(rng);
  spec.family_size = std::uniform_int_distribution<int>(fam_lo, fam_hi)(rng);
  spec.kind = kind;
  spec.seed = seed;
  return spec;
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double sigma_min(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

Complex random_phase_scalar(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  const double a = ang(rng);
  return std::polar(mag(rng), a);
}

Matrix random_unitary_from(Rng& rng, int n) {
  Matrix g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  return Matrix(qr.householderQ());
}

// Rescales the pair so the biframe operator becomes c * KK* exactly
// (up to round-off); requires the current biframe operator to be PD.
void rescale_to_tight(BiGFrameSystem& sys, double c,
                      const SpectralTolerance& tol = {}) {
  Matrix s = biframe_operator(sys);
  Eigen::SelfAdjointEigenSolver<Matrix> eig((s + s.adjoint()) / 2.0);
  Eigen::VectorXd lam = eig.eigenvalues();
  Eigen::VectorXd inv(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    inv(i) = lam(i) > 0.0 ? 1.0 / std::sqrt(lam(i)) : 0.0;
  Matrix s_inv_sqrt =
      eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().adjoint();
  Matrix w = s_inv_sqrt * psd_sqrt(c * (sys.k_op * sys.k_op.adjoint()), tol);
  for (std::size_t i = 0; i < sys.phi.size(); ++i) {
    sys.phi.operators[i] = sys.phi.operators[i] * w;
    sys.psi.operators[i] = sys.psi.operators[i] * w;
  }
}

// Sum over members of the per-term operator norms; bounds |S_J| for every J.
double partial_sum_norm_bound(const BiGFrameSystem& sys) {
  double c = 0.0;
  for (std::size_t i = 0; i < sys.phi.size(); ++i)
    c += operator_norm(sys.psi.operators[i].adjoint() * sys.phi.operators[i]);
  return c;
}

// Candidate pair perturbed on the domain side by (I + tau C); keeps the
// candidate biframe operator Hermitian PSD for any C.
void perturb_domain_side(const BiGFrameSystem& base, const Matrix& c,
                         double tau, GOperatorFamily& out_phi,
                         GOperatorFamily& out_psi) {
  const int n = base.phi.ambient_dim;
  Matrix f = Matrix::Identity(n, n) + tau * c;
  out_phi = base.phi;
  out_psi = base.psi;
  for (std::size_t i = 0; i < base.phi.size(); ++i) {
    out_phi.operators[i] = base.phi.operators[i] * f;
    out_psi.operators[i] = base.psi.operators[i] * f;
  }
}

// ---- individual suites --------------------------------------------------

SuiteResult suite_3_7(int instances, std::uint64_t seed) {
  SuiteResult res{"3.7"};
  const GeneratorSpec::Kind kinds[] = {
      GeneratorSpec::Kind::generic, GeneratorSpec::Kind::rank_deficient_k,
      GeneratorSpec::Kind::diagonal, GeneratorSpec::Kind::tight};
  for (int i = 0; i < instances; ++i) {
    const std::uint64_t ts = trial_seed(seed, i);
    Rng rng = make_rng(ts);
    BiGFrameSystem sys = random_system(draw_spec(rng, kinds[i % 4], ts));
    BiGFrameSystem sw = swap_families(sys);

    const bool adjoint_exact =
        (biframe_operator(sw) - Matrix(biframe_operator(sys).adjoint()))
            .norm() == 0.0;

    BoundsResult a = optimal_bounds(sys);
    BoundsResult b = optimal_bounds(sw);
    double rel = 0.0;
    if (std::isfinite(a.a_opt) || std::isfinite(b.a_opt)) {
      rel = std::abs(a.a_opt - b.a_opt) / std::max(1.0, std::abs(a.a_opt));
    }
    rel = std::max(rel,
                   std::abs(a.b_opt - b.b_opt) / std::max(1.0, std::abs(a.b_opt)));
    const bool ok = adjoint_exact && rel <= 1e-10;
    record(res, ts, ok, 1e-10 - rel,
           ok ? "" : "swap changed bounds or adjoint identity failed");
  }
  return res;
}

void check_combined(SuiteResult& res, std::uint64_t ts,
                    const BiGFrameSystem& sys, const std::vector<Matrix>& ks,
                    const std::vector<Complex>& coeffs) {
  std::vector<FrameBounds> per_k;
  const int n = sys.phi.ambient_dim;
  Matrix combined = Matrix::Zero(n, n);
  Matrix product = Matrix::Identity(n, n);
  for (std::size_t j = 0; j < ks.size(); ++j) {
    BiGFrameSystem with_k = sys;
    with_k.k_op = ks[j];
    BoundsResult br = optimal_bounds(with_k);
    if (!br.bounds) {
      record(res, ts, false, -1.0, "combined: base bounds missing");
      return;
    }
    per_k.push_back(*br.bounds);
    combined += coeffs[j] * ks[j];
    product = product * ks[j];
  }

  double margin = std::numeric_limits<double>::infinity();
  bool ok = true;

  PredictedBounds pred = combined_operator_bounds(per_k, coeffs);
  BiGFrameSystem sum_sys = sys;
  sum_sys.k_op = combined;
  BoundsResult sum_res = optimal_bounds(sum_sys);
  {
    const double scale = std::max(1.0, std::abs(pred.lower));
    const double slack =
        (std::isfinite(sum_res.a_opt) ? sum_res.a_opt
                                      : std::numeric_limits<double>::infinity()) -
        pred.lower + kSoundnessSlack * scale;
    ok = ok && slack >= 0.0;
    margin = std::min(margin, slack);
    const double upper_slack = pred.upper - sum_res.b_opt +
                               kSoundnessSlack * std::max(1.0, pred.upper);
    ok = ok && upper_slack >= 0.0;
    margin = std::min(margin, upper_slack);
  }

  if (ks.size() >= 2) {
    std::vector<Matrix> tail(ks.begin() + 1, ks.end());
    PredictedBounds pp = product_operator_bounds(per_k[0], tail);
    BiGFrameSystem prod_sys = sys;
    prod_sys.k_op = product;
    BoundsResult prod_res = optimal_bounds(prod_sys);
    const double slack =
        (std::isfinite(prod_res.a_opt) ? prod_res.a_opt
                                       : std::numeric_limits<double>::infinity()) -
        pp.lower + kSoundnessSlack * std::max(1.0, std::abs(pp.lower));
    ok = ok && slack >= 0.0;
    margin = std::min(margin, slack);
    const double upper_slack = pp.upper - prod_res.b_opt +
                               kSoundnessSlack * std::max(1.0, pp.upper);
    ok = ok && upper_slack >= 0.0;
    margin = std::min(margin, upper_slack);
  }

  record(res, ts, ok, margin, ok ? "" : "predicted bounds not sound");
}

// The documented K1 = K2 counter-instance: the stated constant 1/2 exceeds
// the true optimum 1/4; the corrected constant stays below it.
bool combined_regression_holds() {
  BiGFrameSystem sys = example_3_4();
  std::vector<FrameBounds> bounds{{1.0, 2.0}, {1.0, 2.0}};
  std::vector<Complex> coeffs{1.0, 1.0};
  PredictedBounds pred = combined_operator_bounds(bounds, coeffs);
  BiGFrameSystem doubled = sys;
  doubled.k_op = 2.0 * sys.k_op;
  BoundsResult actual = optimal_bounds(doubled);
  if (!actual.bounds) return false;
  const double a = actual.bounds->lower;
  return std::abs(a - 0.25) <= 1e-9 && pred.stated_constant &&
         std::abs(*pred.stated_constant - 0.5) <= 1e-12 &&
         a < *pred.stated_constant && pred.lower <= a + 1e-12;
}

SuiteResult suite_3_8(int instances, std::uint64_t seed) {
  SuiteResult res{"3.8"};
  for (int i = 0; i < instances; ++i) {
    const std::uint64_t ts = trial_seed(seed, i);
    if (i == 0) {
      record(res, ts, combined_regression_holds(), 0.0,
             "K1=K2 counter-instance regression failed");
      continue;
    }
    Rng rng = make_rng(ts);
    BiGFrameSystem sys =
        random_system(draw_spec(rng, GeneratorSpec::Kind::generic, ts, 2, 10, 1, 6));
    const int n = sys.phi.ambient_dim;
    std::vector<Matrix> ks = {
        random_operator(n, OperatorKind::invertible, rng()),
        random_operator(n, OperatorKind::invertible, rng())};
    std::vector<Complex> coeffs = {random_phase_scalar(rng, 0.3, 1.5),
                                   random_phase_scalar(rng, 0.3, 1.5)};
    if (operator_norm(coeffs[0] * ks[0] + coeffs[1] * ks[1]) < 1e-6) {
      record(res, ts, true, 0.0);
      continue;
    }
    check_combined(res, ts, sys, ks, coeffs);
  }
  return res;
}

SuiteResult suite_3_9(int instances, std::uint64_t seed) {
  SuiteResult res{"3.9"};
  for (int i = 0; i < instances; ++i) {
    const std::uint64_t ts = trial_seed(seed, i);
    Rng rng = make_rng(ts);
    BiGFrameSystem sys =
        random_system(draw_spec(rng, GeneratorSpec::Kind::generic, ts, 2, 8, 1, 5));
    const int n = sys.phi.ambient_dim;
    const int count = std::uniform_int_distribution<int>(2, 4)(rng);
    std::vector<Matrix> ks;
    std::vector<Complex> coeffs;
    for (int j = 0; j < count; ++j) {
      ks.push_back(random_operator(n, OperatorKind::invertible, rng()));
      coeffs.push_back(random_phase_scalar(rng, 0.3, 1.5));
    }
    Matrix combined = Matrix::Zero(n, n);
    for (int j = 0; j < count; ++j) combined += coeffs[j] * ks[j];
    if (operator_norm(combined) < 1e-6) {
      record(res, ts, true, 0.0);
      continue;
    }
    check_combined(res, ts, sys, ks, coeffs);
  }
  return res;
}

SuiteResult suite_3_10(int instances, std::uint64_t seed) {
  SuiteResult res{"3.10"};
  for (int i = 0; i < instances; ++i) {
    const std::uint64_t ts = trial_seed(seed, i);
    Rng rng = make_rng(ts);
    BiGFrameSystem sys =
        random_system(draw_spec(rng, GeneratorSpec::Kind::generic, ts, 2, 12, 1, 6));
    const int n = sys.phi.ambient_dim;
    BiGFrameSystem as_ordinary = sys;
    as_ordinary.k_op = Matrix::Identity(n, n);
    BoundsResult base = optimal_bounds(as_ordinary);
    if (!base.bounds) {
      record(res, ts, true, 0.0);  // not an ordinary bi-g-frame; vacuous
      continue;
    }

    Matrix k = random_operator(n, OperatorKind::invertible, rng());
    const double k_norm = operator_norm(k);
    if (k_norm < 1.0) k *= 1.5 / k_norm;

    if (i % 7 == 6) {
      // Hypothesis violation path.
      bool threw = false;
      try {
        lift_ordinary(*base.bounds, 0.5 * k / operator_norm(k));
      } catch (const NormBelowOne&) {
        threw = true;
      }
      record(res, ts, threw, threw ? 0.0 : -1.0,
             threw ? "" : "NormBelowOne not raised");
      continue;
    }

    PredictedBounds pred = lift_ordinary(*base.bounds, k);
    BiGFrameSystem with_k = sys;
    with_k.k_op = k;
    BoundsResult actual = optimal_bounds(with_k);
    const double lo_slack = actual.a_opt - pred.lower +
                            kSoundnessSlack * std::max(1.0, pred.lower);
    const double hi_slack = pred.upper - actual.b_opt +
                            kSoundnessSlack * std::max(1.0, pred.upper);
    const bool ok = lo_slack >= 0.0 && hi_slack >= 0.0;
    record(res, ts, ok, std::min(lo_slack, hi_slack),
           ok ? "" : "lifted bounds not sound");
  }
  return res;
}

SuiteResult suite_3_11(int instances, std::uint64_t seed) {
  SuiteResult res{"3.11"};
  for (int i = 0; i < instances; ++i) {
    const std::uint64_t ts = trial_seed(seed, i);
    Rng rng = make_rng(ts);
    const auto kind = (i % 3 == 2) ? GeneratorSpec::Kind::rank_deficient_k
                                   : GeneratorSpec::Kind::generic;
    BiGFrameSystem sys = random_system(draw_spec(rng, kind, ts));
    BoundsResult br = optimal_bounds(sys);
    if (!br.bounds || br.degenerate_k) {
      record(res, ts, false, -1.0, "expected a K-bi-g-frame instance");
      continue;
    }
    const double s_norm = frobenius(biframe_operator(sys));
    const double at_opt = psd_gap(sys, br.a_opt);
    const double above_opt = psd_gap(sys, 1.01 * br.a_opt);
    const bool ok = at_opt >= -1e-8 * s_norm && above_opt < 0.0;
    record(res, ts, ok, std::min(at_opt + 1e-8 * s_norm, -above_opt),
           ok ? "" : "psd_gap disagrees with the optimal bound");
  }
  return res;
}

BiGFrameSystem engineered_non_frame(std::uint64_t ts) {
  Rng rng = make_rng(ts, 0xfa11);
  BiGFrameSystem sys =
      random_system(draw_spec(rng, GeneratorSpec::Kind::generic, ts, 2, 12, 1, 6));
  const int n = sys.phi.ambient_dim;
  // Project the families away from the last coordinate; K keeps full rank,
  // so the lower inequality cannot hold.
  for (std::size_t i = 0; i < sys.phi.size(); ++i) {
    sys.phi.operators[i].col(n - 1).setZero();
    sys.psi.operators[i].col(n - 1).setZero();
  }
  return sys;
}

SuiteResult suite_3_13(int instances, std::uint64_t seed) {
  SuiteResult res{"3.13"};
  const GeneratorSpec::Kind kinds[] = {GeneratorSpec::Kind::generic,
                                       GeneratorSpec::Kind::tight,
                                       GeneratorSpec::Kind::rank_deficient_k};
  for (int i = 0; i < instances; ++i) {
    const std::uint64_t ts = trial_seed(seed, i);
    const bool engineered = (i % 4 == 3);
    Rng rng = make_rng(ts);
    BiGFrameSystem sys = engineered
                             ? engineered_non_frame(ts)
                             : random_system(draw_spec(rng, kinds[i % 3], ts));
    const bool frame = is_frame_verdict(classify(sys).verdict);

    bool succeeded = false;
    double residual = 0.0;
    try {
      Matrix u = sqrt_factor(sys);
      Matrix root = psd_sqrt(biframe_operator(sys));
      residual = (root * u - sys.k_op).norm() / std::max(frobenius(sys.k_op), 1e-300);
      succeeded = true;
    } catch (const RangeNotIncluded&) {
      succeeded = false;
    }
    const bool ok = (succeeded == frame) && (!succeeded || residual <= 1e-9);
    record(res, ts, ok, succeeded ? 1e-9 - residual : 0.0,
           ok ? "" : "square-root factorization disagrees with classification");
  }
  return res;
}

SuiteResult suite_4_1(int instances, std::uint64_t seed) {
  SuiteResult res{"4.1"};
  for (int i = 0; i < instances; ++i) {
    const std::uint64_t ts = trial_seed(seed, i);
    Rng rng = make_rng(ts);
    if (i % 5 == 4) {
      // Rejection path: rank-deficient K cannot cover an invertible operand.
      BiGFrameSystem sys = random_system(
          draw_spec(rng, GeneratorSpec::Kind::rank_deficient_k, ts, 2, 12, 1, 6));
      Matrix t = random_operator(sys.phi.ambient_dim, OperatorKind::invertible,
                                 rng());
      bool threw = false;
      try {
        restrict_range(sys, t);
      } catch (const RangeNotIncluded&) {
        threw = true;
      }
      record(res, ts, threw, threw ? 0.0 : -1.0,
             threw ? "" : "RangeNotIncluded not raised");
      continue;
    }
    BiGFrameSystem sys =
        random_system(draw_spec(rng, GeneratorSpec::Kind::generic, ts, 2, 12, 1, 6));
    const int n = sys.phi.ambient_dim;
    Matrix w = gaussian_matrix(n, n, rng);
    w /= std::max(operator_norm(w), 1e-12);
    Matrix t = sys.k_op * w;
    RestrictResult rr = restrict_range(sys, t);
    BoundsResult actual = optimal_bounds(rr.system);
    const double lo_slack =
        (std::isfinite(actual.a_opt) ? actual.a_opt
                                     : std::numeric_limits<double>::infinity()) -
        rr.predicted.lower + kSoundnessSlack * std::max(1.0, rr.predicted.lower);
    const double hi_slack = rr.predicted.upper - actual.b_opt +
                            kSoundnessSlack * std::max(1.0, rr.predicted.upper);
    const bool ok = lo_slack >= 0.0 && hi_slack >= 0.0;
    record(res, ts, ok, std::min(lo_slack, hi_slack),
           ok ? "" : "restricted bounds not sound");
  }
  return res;
}

SuiteResult suite_4_2(int instances, std::uint64_t seed) {
  SuiteResult res{"4.2"};
  for (int i = 0; i < instances; ++i) {
    const std::uint64_t ts = trial_seed(seed, i);
    Rng rng = make_rng(ts);
    BiGFrameSystem sys =
        random_system(draw_spec(rng, GeneratorSpec::Kind::generic, ts, 2, 12, 1, 6));
    const int n = sys.phi.ambient_dim;
    Matrix t = random_operator(n, OperatorKind::positive, rng());
    const double t_norm = operator_norm(t);
    if (t_norm > 1.2) t *= 1.2 / t_norm;
    const int power = i % 3 + 1;

    BiGFrameSystem out = positive_perturb(sys, t, power);
    Matrix tn = Matrix::Identity(n, n);
    for (int p = 0; p < power; ++p) tn = tn * t;
    Matrix f = Matrix::Identity(n, n) + tn;
    Matrix s_out = biframe_operator(out);
    Matrix expected = f.adjoint() * biframe_operator(sys) * f;
    const double rel = (s_out - expected).norm() / frobenius(s_out);

    const bool frame_in = is_frame_verdict(classify(sys).verdict);
    const bool frame_out = is_frame_verdict(classify(out).verdict);
    const bool ok = rel <= 1e-12 && (!frame_in || frame_out);
    record(res, ts, ok, 1e-12 - rel,
           ok ? "" : "perturbation identity or classification degraded");
  }
  return res;
}

// K and M drawn as simultaneously diagonalizable operators so they commute.
struct CommutingPair {
  Matrix k;
  Matrix m;
  bool m_full_rank;
};

CommutingPair draw_commuting(Rng& rng, int n, bool allow_rank_deficient) {
  Matrix q = random_unitary_from(rng, n);
  Vector dk(n), dm(n);
  std::uniform_real_distribution<double> zero_dist(0.0, 1.0);
  bool full = true;
  for (int j = 0; j < n; ++j) {
    dk(j) = random_phase_scalar(rng, 0.5, 2.0);
    if (allow_rank_deficient && zero_dist(rng) < 0.35) {
      dm(j) = 0.0;
      full = false;
    } else {
      dm(j) = random_phase_scalar(rng, 0.5, 2.0);
    }
  }
  CommutingPair out;
  out.k = q * dk.asDiagonal() * q.adjoint();
  out.m = q * dm.asDiagonal() * q.adjoint();
  out.m_full_rank = full;
  return out;
}

SuiteResult suite_4_3(int instances, std::uint64_t seed) {
  SuiteResult res{"4.3"};
  for (int i = 0; i < instances; ++i) {
    const std::uint64_t ts = trial_seed(seed, i);
    Rng rng = make_rng(ts);
    BiGFrameSystem sys =
        random_system(draw_spec(rng, GeneratorSpec::Kind::generic, ts, 2, 12, 1, 6));
    const int n = sys.phi.ambient_dim;
    CommutingPair pair = draw_commuting(rng, n, /*allow_rank_deficient=*/false);
    sys.k_op = pair.k;

    ComposeResult cr = right_compose(sys, pair.m);
    BoundsResult actual = optimal_bounds(cr.system);
    const double lo_slack =
        actual.a_opt - cr.predicted.lower +
        kSoundnessSlack * std::max(1.0, cr.predicted.lower);
    const double hi_slack = cr.predicted.upper - actual.b_opt +
                            kSoundnessSlack * std::max(1.0, cr.predicted.upper);
    const bool ok = lo_slack >= 0.0 && hi_slack >= 0.0;
    record(res, ts, ok, std::min(lo_slack, hi_slack),
           ok ? "" : "composed bounds not sound");
  }
  return res;
}

SuiteResult suite_4_4(int instances, std::uint64_t seed) {
  SuiteResult res{"4.4"};
  for (int i = 0; i < instances; ++i) {
    const std::uint64_t ts = trial_seed(seed, i);
    Rng rng = make_rng(ts);
    BiGFrameSystem sys =
        random_system(draw_spec(rng, GeneratorSpec::Kind::generic, ts, 2, 10, 2, 6));
    const int n = sys.phi.ambient_dim;
    CommutingPair pair = draw_commuting(rng, n, /*allow_rank_deficient=*/true);
    sys.k_op = pair.k;
    std::uniform_real_distribution<double> delta_dist(0.5, 2.0);
    const double delta = delta_dist(rng);
    rescale_to_tight(sys, delta);

    SurjectivityVerdicts v = surjectivity_equivalence(sys, delta, pair.m);
    const bool ok = v.is_k_bi_g_frame == v.m_surjective &&
                    v.m_surjective == pair.m_full_rank;
    record(res, ts, ok, ok ? 0.0 : -1.0,
           ok ? "" : "surjectivity equivalence verdicts disagree");
  }
  return res;
}

// ---- stability suites ---------------------------------------------------

const double kEpsGrid[] = {0.01, 0.05, 0.1, 0.2, 0.3};

// Scaled-psi perturbation: candidate = (Phi, (1+eps) Psi).
bool scaled_psi_trial(const BiGFrameSystem& base, double eps, std::uint64_t ts,
                      double& out_margin, std::string& note) {
  BoundsResult br = optimal_bounds(base);
  if (!br.bounds) {
    note = "base is not a K-bi-g-frame";
    return false;
  }
  GOperatorFamily cand_psi = base.psi;
  for (auto& op : cand_psi.operators) op *= (1.0 + eps);

  StabilityParams params;
  params.variant = StabilityVariant::thm_5_1;
  params.alpha = eps;
  SubsetPolicy policy;
  StabilityCertificate cert =
      certify_stability(base, base.phi, cand_psi, params, policy, {}, ts);
  out_margin = cert.hypothesis_margin;
  if (!cert.verdict || cert.hypothesis_margin < -1e-12) {
    note = "scaled perturbation certificate failed";
    return false;
  }
  const double expected = (1.0 + eps) * br.bounds->lower;
  if (!cert.achieved ||
      std::abs(cert.achieved->lower - expected) > 1e-9 * expected) {
    note = "achieved lower bound differs from (1+eps) * A";
    return false;
  }
  return true;
}

bool domain_perturb_trial(const BiGFrameSystem& base, StabilityVariant variant,
                          std::uint64_t ts, double& out_margin,
                          std::string& note) {
  BoundsResult br = optimal_bounds(base);
  if (!br.bounds) {
    note = "base is not a K-bi-g-frame";
    return false;
  }
  const double a = br.bounds->lower;
  const double b = br.bounds->upper;
  const int n = base.phi.ambient_dim;
  Rng rng = make_rng(ts, 0x5AB);

  Matrix c = gaussian_matrix(n, n, rng);
  c /= std::max(operator_norm(c), 1e-12);
  const double sum_norm = partial_sum_norm_bound(base);
  const double k_sigma_min = sigma_min(base.k_op);

  // Budget for the universal operator-norm bound on |(S_J - M_J)x|.
  std::uniform_real_distribution<double> frac(0.2, 1.0);
  double budget = 0.3 * frac(rng);  // target constant, well inside [0,1)

  StabilityParams params;
  params.variant = variant;
  double tau = 0.0;
  const double safety = 1.0 + 1e-9;
  switch (variant) {
    case StabilityVariant::thm_5_1: {
      // |D_J x| <= tau (2|C| + tau |C|^2) * sum_norm * |x| <= gamma |x|
      tau = std::min(0.5, budget / (3.0 * std::max(sum_norm, 1e-12)));
      params.gamma =
          std::min(0.999, tau * (2.0 + tau) * sum_norm * safety);
      break;
    }
    case StabilityVariant::cor_5_2: {
      if (k_sigma_min <= 0.0) {
        note = "cor_5_2 trial needs invertible K";
        return false;
      }
      const double d_max = 0.9 * std::min(a, std::sqrt(a / b));
      params.d_const = d_max * frac(rng);
      tau = std::min(0.5, params.d_const * k_sigma_min /
                              (3.0 * std::max(sum_norm, 1e-12)));
      // Keep the universal bound within D * sigma_min(K).
      const double used = tau * (2.0 + tau) * sum_norm * safety;
      if (used > params.d_const * k_sigma_min)
        tau *= params.d_const * k_sigma_min / used;
      break;
    }
    case StabilityVariant::thm_5_3:
    case StabilityVariant::thm_5_4: {
      if (k_sigma_min <= 0.0) {
        note = "variant trial needs invertible K";
        return false;
      }
      const double gamma_cap = 0.9 * std::sqrt(a / b);
      double gamma = std::min(budget, gamma_cap);
      tau = std::min(0.5, gamma * k_sigma_min /
                              (3.0 * std::max(sum_norm, 1e-12)));
      const double used = tau * (2.0 + tau) * sum_norm * safety;
      if (variant == StabilityVariant::thm_5_4) {
        // Split the perturbation budget across the two extra terms.
        params.sigma = std::min(0.3, 0.6 * used);
        params.gamma = std::min(gamma, 0.6 * used / k_sigma_min);
        if (params.alpha + params.sigma + params.gamma * std::sqrt(b / a) >= 1.0) {
          tau *= 0.25;
          params.sigma *= 0.25;
          params.gamma *= 0.25;
        }
      } else {
        params.gamma = std::min(gamma, used / k_sigma_min * safety);
        if (params.gamma * std::sqrt(b / a) >= 1.0) {
          note = "gamma budget infeasible";
          return false;
        }
      }
      break;
    }
  }

  GOperatorFamily cand_phi, cand_psi;
  perturb_domain_side(base, c, tau, cand_phi, cand_psi);

  SubsetPolicy policy;
  StabilityCertificate cert = certify_stability(base, cand_phi, cand_psi,
                                                params, policy, {}, ts);
  out_margin = cert.hypothesis_margin;
  if (cert.hypothesis_margin < -1e-12) {
    note = "hypothesis margin negative for an engineered-valid perturbation";
    return false;
  }
  if (!cert.verdict) {
    note = "stability certificate verdict false";
    return false;
  }
  return true;
}

bool specialization_agrees(const BiGFrameSystem& base, std::uint64_t ts,
                           std::string& note) {
  BoundsResult br = optimal_bounds(base);
  if (!br.bounds) {
    note = "base is not a K-bi-g-frame";
    return false;
  }
  const double a = br.bounds->lower;
  const double b = br.bounds->upper;
  Rng rng = make_rng(ts, 0xC052);
  std::uniform_real_distribution<double> frac(0.1, 0.9);
  const double d = frac(rng) * std::min(a, std::sqrt(a / b)) * 0.99;

  const double bessel_phi = g_frame_operator_and_bessel(base.phi).bessel_bound;
  const double bessel_psi = g_frame_operator_and_bessel(base.psi).bessel_bound;

  StabilityParams cor;
  cor.variant = StabilityVariant::cor_5_2;
  cor.d_const = d;
  StabilityParams thm;
  thm.variant = StabilityVariant::thm_5_1;
  thm.gamma = d * std::sqrt(b / a);

  PredictedBounds pc =
      predicted_stability_bounds(cor, *br.bounds, bessel_phi, bessel_psi);
  PredictedBounds pt =
      predicted_stability_bounds(thm, *br.bounds, bessel_phi, bessel_psi);
  if (std::abs(pc.lower - pt.lower) > 1e-12 * std::max(1.0, std::abs(pc.lower)) ||
      std::abs(pc.upper - pt.upper) > 1e-12 * std::max(1.0, pc.upper)) {
    note = "cor_5_2 does not specialize thm_5_1";
    return false;
  }
  return true;
}

SuiteResult stability_suite(const std::string& tag, StabilityVariant variant,
                            int instances, std::uint64_t seed) {
  SuiteResult res{tag};
  for (int i = 0; i < instances; ++i) {
    const std::uint64_t ts = trial_seed(seed, i);
    Rng rng = make_rng(ts);
    BiGFrameSystem base =
        random_system(draw_spec(rng, GeneratorSpec::Kind::generic, ts, 2, 10, 1, 8));
    double margin = 0.0;
    std::string note;
    bool ok = true;

    if (variant == StabilityVariant::thm_5_1 && i % 2 == 0) {
      ok = scaled_psi_trial(base, kEpsGrid[(i / 2) % 5], ts, margin, note);
    } else if (variant == StabilityVariant::cor_5_2 && i % 2 == 0) {
      ok = specialization_agrees(base, ts, note);
    } else {
      ok = domain_perturb_trial(base, variant, ts, margin, note);
    }

    // Variant reduction: sigma = gamma = 0 must reproduce thm_5_1 verbatim.
    if (ok && (variant == StabilityVariant::thm_5_3 ||
               variant == StabilityVariant::thm_5_4)) {
      BoundsResult br = optimal_bounds(base);
      if (br.bounds) {
        const double bp = g_frame_operator_and_bessel(base.phi).bessel_bound;
        const double bq = g_frame_operator_and_bessel(base.psi).bessel_bound;
        StabilityParams reduced;
        reduced.variant = variant;
        reduced.alpha = 0.25;
        reduced.beta = 0.125;
        StabilityParams reference = reduced;
        reference.variant = StabilityVariant::thm_5_1;
        PredictedBounds p1 =
            predicted_stability_bounds(reduced, *br.bounds, bp, bq);
        PredictedBounds p2 =
            predicted_stability_bounds(reference, *br.bounds, bp, bq);
        if (p1.lower != p2.lower || p1.upper != p2.upper) {
          ok = false;
          note = "variant does not reduce to thm_5_1";
        }
      }
    }
    record(res, ts, ok, margin, note);
  }
  return res;
}

}  // namespace

const std::vector<std::string>& theorem_tags() {
  static const std::vector<std::string> tags = {
      "3.7", "3.8", "3.9", "3.10", "3.11", "3.13", "4.1",
      "4.2", "4.3", "4.4", "5.1",  "5.2",  "5.3",  "5.4"};
  return tags;
}

SuiteResult run_theorem_suite(const std::string& tag, int instances,
                              std::uint64_t seed) {
  if (instances < 1)
    throw SpecInvalid("verify: instance count must be positive");
  if (tag == "3.7") return suite_3_7(instances, seed);
  if (tag == "3.8") return suite_3_8(instances, seed);
  if (tag == "3.9") return suite_3_9(instances, seed);
  if (tag == "3.10") return suite_3_10(instances, seed);
  if (tag == "3.11") return suite_3_11(instances, seed);
  if (tag == "3.13") return suite_3_13(instances, seed);
  if (tag == "4.1") return suite_4_1(instances, seed);
  if (tag == "4.2") return suite_4_2(instances, seed);
  if (tag == "4.3") return suite_4_3(instances, seed);
  if (tag == "4.4") return suite_4_4(instances, seed);
  if (tag == "5.1")
    return stability_suite("5.1", StabilityVariant::thm_5_1, instances, seed);
  if (tag == "5.2")
    return stability_suite("5.2", StabilityVariant::cor_5_2, instances, seed);
  if (tag == "5.3")
    return stability_suite("5.3", StabilityVariant::thm_5_3, instances, seed);
  if (tag == "5.4")
    return stability_suite("5.4", StabilityVariant::thm_5_4, instances, seed);
  throw SpecInvalid("verify: unknown theorem tag '" + tag + "'");
}

}  // namespace bigframe
