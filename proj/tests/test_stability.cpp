#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "../vendor/doctest.h"

#include <algorithm>

#include "bigframe/instances.hpp"
#include "bigframe/stability.hpp"

using namespace bigframe;

namespace {

GOperatorFamily scaled(const GOperatorFamily& fam, double factor) {
  GOperatorFamily out = fam;
  for (auto& op : out.operators) op *= factor;
  return out;
}

}  // namespace

TEST_CASE("enumerate_subsets exhaustive mode") {
  SubsetPolicy policy;
  auto subsets = enumerate_subsets(policy, 5);
  CHECK(subsets.size() == 32);
  // Every subset distinct.
  auto copy = subsets;
  std::sort(copy.begin(), copy.end());
  CHECK(std::adjacent_find(copy.begin(), copy.end()) == copy.end());

  policy.max_exhaustive = 4;
  CHECK_THROWS_AS(enumerate_subsets(policy, 5), SpecInvalid);
}

TEST_CASE("enumerate_subsets structured mode") {
  SubsetPolicy policy;
  policy.mode = SubsetPolicy::Mode::structured;
  auto subsets = enumerate_subsets(policy, 20);
  auto has = [&](const std::vector<int>& s) {
    return std::find(subsets.begin(), subsets.end(), s) != subsets.end();
  };
  CHECK(has({}));
  CHECK(has({7}));                      // singleton
  CHECK(has({0, 1, 2}));                // prefix
  std::vector<int> full(20), complement;
  for (int i = 0; i < 20; ++i) full[i] = i;
  for (int i = 0; i < 20; ++i)
    if (i != 3) complement.push_back(i);
  CHECK(has(full));
  CHECK(has(complement));
}

TEST_CASE("partial_sum_operator matches the biframe operator on the full set") {
  BiGFrameSystem sys = example_3_4();
  std::vector<int> full{0, 1, 2, 3};
  CHECK((partial_sum_operator(sys.phi, sys.psi, full) - biframe_operator(sys))
            .norm() == 0.0);
  CHECK(partial_sum_operator(sys.phi, sys.psi, {}).norm() == 0.0);
  CHECK_THROWS_AS(partial_sum_operator(sys.phi, sys.psi, {4}),
                  IndexOutOfRange);
}

TEST_CASE("StabilityParams validation per variant") {
  const FrameBounds ref{1.0, 4.0};  // sqrt(B/A) = 2

  StabilityParams p;
  p.alpha = 0.6;
  p.gamma = 0.5;
  CHECK_THROWS_AS(p.validate(ref), ParamsInvalid);  // alpha + gamma >= 1

  p = {};
  p.variant = StabilityVariant::cor_5_2;
  p.d_const = 1.5;  // must stay below A = 1
  CHECK_THROWS_AS(p.validate(ref), ParamsInvalid);

  p = {};
  p.variant = StabilityVariant::thm_5_3;
  p.gamma = 0.6;  // gamma * sqrt(B/A) = 1.2 >= 1
  CHECK_THROWS_AS(p.validate(ref), ParamsInvalid);

  p = {};
  p.variant = StabilityVariant::thm_5_4;
  p.alpha = 0.3;
  p.sigma = 0.3;
  p.gamma = 0.25;  // 0.3 + 0.3 + 0.5 >= 1
  CHECK_THROWS_AS(p.validate(ref), ParamsInvalid);

  p = {};
  p.alpha = -0.1;
  CHECK_THROWS_AS(p.validate(ref), ParamsInvalid);
}

TEST_CASE("predicted bounds formulas and their reductions") {
  const FrameBounds ref{1.0, 4.0};
  const double bp = 9.0, bq = 4.0;  // sqrt(Bphi * Bpsi) = 6

  StabilityParams base;
  base.alpha = 0.2;
  base.beta = 0.1;
  base.gamma = 0.05;
  PredictedBounds p1 = predicted_stability_bounds(base, ref, bp, bq);
  CHECK(p1.lower == doctest::Approx(1.0 * (1.0 - 0.25) / 1.1));
  CHECK(p1.upper == doctest::Approx((1.2 * 6.0 + 0.05) / 0.9));

  // cor_5_2 with constant D specializes thm_5_1 at gamma = D sqrt(B/A).
  StabilityParams cor;
  cor.variant = StabilityVariant::cor_5_2;
  cor.d_const = 0.3;
  StabilityParams spec;
  spec.gamma = 0.3 * 2.0;
  PredictedBounds pc = predicted_stability_bounds(cor, ref, bp, bq);
  PredictedBounds ps = predicted_stability_bounds(spec, ref, bp, bq);
  CHECK(std::abs(pc.lower - ps.lower) <= 1e-12);
  CHECK(std::abs(pc.upper - ps.upper) <= 1e-12);

  // thm_5_3 / thm_5_4 with the extra constants zeroed reduce bit-for-bit.
  for (StabilityVariant v :
       {StabilityVariant::thm_5_3, StabilityVariant::thm_5_4}) {
    StabilityParams reduced = base;
    reduced.variant = v;
    reduced.gamma = 0.0;
    StabilityParams reference = reduced;
    reference.variant = StabilityVariant::thm_5_1;
    PredictedBounds a = predicted_stability_bounds(reduced, ref, bp, bq);
    PredictedBounds b = predicted_stability_bounds(reference, ref, bp, bq);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
  }

  CHECK_THROWS_AS(predicted_stability_bounds(base, ref, 0.0, 1.0),
                  ParamsInvalid);
}

TEST_CASE("hypothesis_margin is exact for an unperturbed candidate") {
  BiGFrameSystem sys = example_3_4();
  StabilityParams params;  // all constants zero: RHS = 0, D_J = 0
  SubsetPolicy policy;
  MarginReport rep =
      hypothesis_margin(sys, sys.phi, sys.psi, params, policy, 16, 5);
  CHECK(rep.margin == 0.0);

  params.beta = 0.25;  // now RHS = beta |M_J x| >= 0 with D_J = 0
  rep = hypothesis_margin(sys, sys.phi, sys.psi, params, policy, 16, 5);
  CHECK(rep.margin >= 0.0);
}

TEST_CASE("certify_stability accepts scaled perturbations of the fixtures") {
  for (const BiGFrameSystem& base : {example_3_4(), example_3_6()}) {
    BoundsResult br = optimal_bounds(base);
    REQUIRE(br.bounds.has_value());
    for (double eps : {0.01, 0.05, 0.1, 0.2, 0.3}) {
      StabilityParams params;
      params.alpha = eps;
      StabilityCertificate cert = certify_stability(
          base, base.phi, scaled(base.psi, 1.0 + eps), params, {}, {}, 42);
      CHECK(cert.verdict);
      CHECK(cert.hypothesis_margin >= -1e-12);
      REQUIRE(cert.achieved.has_value());
      const double expected = (1.0 + eps) * br.bounds->lower;
      CHECK(std::abs(cert.achieved->lower - expected) <= 1e-9 * expected);
      CHECK_FALSE(cert.lower_bound_note.empty());
    }
  }
}

TEST_CASE("certify_stability rejects a perturbation the constants cannot cover") {
  BiGFrameSystem base = example_3_6();
  StabilityParams params;
  params.alpha = 0.01;  // far too small for a 3x scaling
  StabilityCertificate cert = certify_stability(
      base, base.phi, scaled(base.psi, 3.0), params, {}, {}, 42);
  CHECK(cert.hypothesis_margin < 0.0);
  CHECK_FALSE(cert.verdict);
}
