#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "../vendor/doctest.h"

#include "bigframe/core.hpp"
#include "bigframe/instances.hpp"
#include "bigframe/rng.hpp"
#include "bigframe/transforms.hpp"

using namespace bigframe;

TEST_CASE("swap_families preserves analysis and adjoints the operator") {
  BiGFrameSystem sys = example_3_4();
  BiGFrameSystem sw = swap_families(sys);
  CHECK((biframe_operator(sw) - Matrix(biframe_operator(sys).adjoint()))
            .norm() == 0.0);
  ClassificationReport a = classify(sys);
  ClassificationReport b = classify(sw);
  CHECK(a.verdict == b.verdict);
  REQUIRE(a.optimal_bounds.has_value());
  REQUIRE(b.optimal_bounds.has_value());
  CHECK(a.optimal_bounds->lower == doctest::Approx(b.optimal_bounds->lower));
  CHECK(a.optimal_bounds->upper == doctest::Approx(b.optimal_bounds->upper));
}

TEST_CASE("combined bounds: corrected constant vs the stated one") {
  // With K1 = K2 = K and unit coefficients the sum is 2K, whose true optimal
  // lower bound is A/4 = 0.25 here. The stated constant (1/2) overshoots it;
  // the corrected constant (1/4) does not.
  BiGFrameSystem sys = example_3_4();
  BiGFrameSystem doubled = sys;
  doubled.k_op = 2.0 * sys.k_op;
  BoundsResult actual = optimal_bounds(doubled);
  REQUIRE(actual.bounds.has_value());
  CHECK(std::abs(actual.bounds->lower - 0.25) <= 1e-9);

  std::vector<FrameBounds> bounds{{1.0, 2.0}, {1.0, 2.0}};
  std::vector<Complex> coeffs{1.0, 1.0};
  PredictedBounds pred = combined_operator_bounds(bounds, coeffs);
  CHECK(pred.lower == doctest::Approx(0.25));
  REQUIRE(pred.stated_constant.has_value());
  CHECK(*pred.stated_constant == doctest::Approx(0.5));
  CHECK(actual.bounds->lower < *pred.stated_constant);
  // The upper inequality does not involve K, so the bound carries over.
  CHECK(pred.upper == doctest::Approx(2.0));
}

TEST_CASE("combined bounds: single term needs no correction") {
  PredictedBounds pred =
      combined_operator_bounds({{2.0, 3.0}}, {Complex(0.0, 2.0)});
  CHECK(pred.lower == doctest::Approx(0.5));  // A / |alpha|^2
  CHECK_FALSE(pred.stated_constant.has_value());
}

TEST_CASE("combined bounds input validation") {
  CHECK_THROWS_AS(combined_operator_bounds({}, {}), EmptyInput);
  CHECK_THROWS_AS(combined_operator_bounds({{1.0, 2.0}}, {1.0, 2.0}),
                  ShapeMismatch);
  CHECK_THROWS_AS(combined_operator_bounds({{0.0, 2.0}}, {1.0}),
                  NonPositiveBound);
}

TEST_CASE("product bounds on a scalar chain") {
  Matrix k2 = 2.0 * Matrix::Identity(4, 4);
  PredictedBounds pred = product_operator_bounds({1.0, 2.0}, {k2});
  // |adjoint tail|^2 = 4, so lower = A / 4; upper stays B.
  CHECK(pred.lower == doctest::Approx(0.25));
  CHECK(pred.upper == doctest::Approx(2.0));
  CHECK_THROWS_AS(product_operator_bounds(
                      {1.0, 2.0}, {Matrix::Zero(4, 4)}),
                  ZeroTailNorm);
}

TEST_CASE("lift_ordinary requires |K| >= 1") {
  Matrix k = 3.0 * Matrix::Identity(3, 3);
  PredictedBounds pred = lift_ordinary({2.0, 5.0}, k);
  CHECK(pred.lower == doctest::Approx(2.0 / 9.0));
  CHECK(pred.upper == doctest::Approx(5.0));
  CHECK_THROWS_AS(lift_ordinary({2.0, 5.0}, 0.5 * Matrix::Identity(3, 3)),
                  NormBelowOne);
}

TEST_CASE("restrict_range predicts a sound lower bound") {
  GeneratorSpec spec;
  spec.ambient_dim = 6;
  spec.family_size = 4;
  spec.seed = 12;
  BiGFrameSystem sys = random_system(spec);
  Rng rng = make_rng(77);
  Matrix w = gaussian_matrix(6, 6, rng);
  Matrix t = sys.k_op * w / std::max(1.0, w.norm());
  RestrictResult rr = restrict_range(sys, t);
  CHECK(rr.alpha > 0.0);
  BoundsResult actual = optimal_bounds(rr.system);
  REQUIRE(actual.bounds.has_value());
  CHECK(rr.predicted.lower <= actual.bounds->lower + 1e-8);
  CHECK(actual.bounds->upper <= rr.predicted.upper + 1e-8);
}

TEST_CASE("positive_perturb realizes the sandwich identity") {
  BiGFrameSystem sys = example_3_6();
  Matrix t = 0.5 * Matrix::Identity(4, 4);
  for (int n = 1; n <= 3; ++n) {
    BiGFrameSystem out = positive_perturb(sys, t, n);
    // (I + T^n) for T = cI is (1 + c^n) I.
    const double c = std::pow(0.5, n);
    Matrix expected = (1.0 + c) * (1.0 + c) * biframe_operator(sys);
    CHECK((biframe_operator(out) - expected).norm() <=
          1e-12 * expected.norm());
    CHECK(is_frame_verdict(classify(out).verdict));
  }
  Matrix skew = Matrix::Zero(4, 4);
  skew(0, 1) = 1.0;
  CHECK_THROWS_AS(positive_perturb(sys, skew, 1), NotPositive);
  CHECK_THROWS_AS(positive_perturb(sys, -Matrix::Identity(4, 4), 1),
                  NotPositive);
  CHECK_THROWS_AS(positive_perturb(sys, t, 0), SpecInvalid);
}

TEST_CASE("right_compose enforces commutation and covers K*") {
  BiGFrameSystem sys = example_3_6();  // K = I commutes with everything
  Matrix m = 2.0 * Matrix::Identity(4, 4);
  ComposeResult cr = right_compose(sys, m);
  BoundsResult actual = optimal_bounds(cr.system);
  REQUIRE(actual.bounds.has_value());
  CHECK(cr.predicted.lower <= actual.bounds->lower + 1e-8);
  CHECK(actual.bounds->upper <= cr.predicted.upper + 1e-8);

  BiGFrameSystem sys34 = example_3_4();  // K = <., e1> e2
  Matrix nc = Matrix::Zero(4, 4);
  nc(0, 1) = 1.0;  // does not commute with K
  nc += Matrix::Identity(4, 4);
  CHECK_THROWS_AS(right_compose(sys34, nc), CommutatorTooLarge);
}

TEST_CASE("surjectivity_equivalence on the identity-K Parseval fixture") {
  BiGFrameSystem sys = example_3_6();
  SurjectivityVerdicts yes =
      surjectivity_equivalence(sys, 1.0, Matrix::Identity(4, 4));
  CHECK(yes.is_k_bi_g_frame);
  CHECK(yes.m_surjective);

  Matrix singular = Matrix::Identity(4, 4);
  singular(3, 3) = 0.0;
  SurjectivityVerdicts no = surjectivity_equivalence(sys, 1.0, singular);
  CHECK(no.is_k_bi_g_frame == no.m_surjective);
  CHECK_FALSE(no.m_surjective);

  CHECK_THROWS_AS(
      surjectivity_equivalence(example_3_4(), 1.0, Matrix::Identity(4, 4)),
      NotTight);
  CHECK_THROWS_AS(surjectivity_equivalence(sys, -1.0, Matrix::Identity(4, 4)),
                  ParamsInvalid);
}
