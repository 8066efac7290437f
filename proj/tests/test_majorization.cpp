#include <doctest.h>

#include <cmath>
#include <vector>

#include "garding/majorization.hpp"

using namespace garding;

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

SymMatrix diag(std::initializer_list<double> d) {
  Vec v(static_cast<int>(d.size()));
  int i = 0;
  for (double x : d) v(i++) = x;
  return SymMatrix::diagonal(v);
}

}  // namespace

TEST_CASE("ratio pinned values") {
  // sigma_2(3) at diag(1,2,3): sqrt(11) / (sqrt(3) * 6^{1/3}).
  const double want =
      std::sqrt(11.0) / (std::sqrt(3.0) * std::pow(6.0, 1.0 / 3.0));
  CHECK(ratio(GardingOperator::sigma(3, 2), diag({1, 2, 3})) ==
        doctest::Approx(want).epsilon(1e-9));

  // Sharpness at the identity.
  CHECK(std::abs(ratio(GardingOperator::ma_lag(4), SymMatrix::identity(4)) -
                 1.0) <= 1e-12);

  // det is its own majorant: ratio identically 1.
  const OpPtr d3 = GardingOperator::det(3);
  for (int i = 0; i < 30; ++i) {
    const SymMatrix a = random_spd(3, Rng::derive(1000, 21, i), 2.0);
    REQUIRE(std::abs(ratio(d3, a) - 1.0) <= 1e-10);
  }
  // Log-space evaluation keeps extreme scales finite.
  CHECK(std::abs(ratio(d3, SymMatrix(1e8 * Mat::Identity(3, 3))) - 1.0) <=
        1e-10);
}

TEST_CASE("ratio rejects non-positive values") {
  CHECK_THROWS_AS(ratio(GardingOperator::det(2), diag({1, -1})), domain_error);
}

TEST_CASE("check_majorization on certified operators") {
  const MajorizationReport m4 =
      check_majorization(GardingOperator::ma_lag(4), 500, 100, 7);
  CHECK(m4.pass);
  CHECK(m4.min_ratio >= 1.0 - 1e-6);
  CHECK(m4.sharp_at_identity);
  CHECK(m4.gamma == doctest::Approx(0.0625).epsilon(1e-12));  // 16 / 4^4

  const MajorizationReport d3 =
      check_majorization(GardingOperator::det(3), 500, 100, 7);
  CHECK(d3.pass);
  CHECK(d3.gamma == doctest::Approx(1.0 / 27.0).epsilon(1e-12));

  // quad_c(0.5): minimum approached as the off-diagonal entry vanishes.
  const MajorizationReport q =
      check_majorization(GardingOperator::quad_c(0.5), 500, 200, 7);
  CHECK(q.pass);
  CHECK(q.min_ratio >= 1.0 - 1e-6);
  const double rel_offdiag =
      std::abs(q.argmin(0, 1)) /
      std::sqrt(q.argmin(0, 0) * q.argmin(1, 1));
  CHECK(rel_offdiag <= 0.05);
}

TEST_CASE("check_majorization flags non-Dirichlet operators via domain_error") {
  CHECK_THROWS_AS(
      check_majorization(GardingOperator::quad_c(1.5), 2000, 100, 42),
      domain_error);
}

TEST_CASE("gradient_det_bound pinned cases") {
  // det2 at diag(1,4): M = diag(1, 1/4), det M = 1/4 = gamma.
  const GradientDetBound b =
      gradient_det_bound(GardingOperator::det(2), diag({1, 4}));
  CHECK(b.positive_definite);
  CHECK(b.det_value == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(b.gamma == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(b.equality_regime);
  CHECK(b.pass);

  // det_n: closed-form equality det M = n^{-n} at every cone point.
  const OpPtr d3 = GardingOperator::det(3);
  for (int i = 0; i < 25; ++i) {
    const SymMatrix B = random_spd(3, Rng::derive(2000, 22, i), 2.0);
    const GradientDetBound g = gradient_det_bound(d3, B);
    REQUIRE(g.pass);
    REQUIRE(std::abs(g.det_value - 1.0 / 27.0) <= 1e-8);
    REQUIRE(g.equality_regime);
  }

  // sigma_2(3) at I: M = (1/sqrt(3)) I, det M = 3^{-3/2} = gamma.
  const GradientDetBound s =
      gradient_det_bound(GardingOperator::sigma(3, 2), SymMatrix::identity(3));
  CHECK(s.det_value == doctest::Approx(std::pow(3.0, -1.5)).epsilon(1e-9));
  CHECK(s.gamma == doctest::Approx(std::pow(3.0, 1.5) / 27.0).epsilon(1e-12));
  CHECK(s.equality_regime);
  CHECK(s.pass);

  // Outside the cone: rejected.
  CHECK_THROWS_AS(gradient_det_bound(GardingOperator::det(2), diag({1, -1})),
                  domain_error);
}

TEST_CASE("consistency of the two formulations") {
  CHECK(check_prop16_consistency(GardingOperator::sigma(3, 2), 50, 11).pass);
  const CheckReport d3 = check_prop16_consistency(GardingOperator::det(3), 50, 11);
  CHECK(d3.pass);
  bool equality_note = false;
  for (const std::string& s : d3.notes) {
    if (s.find("equality") != std::string::npos) equality_note = true;
  }
  CHECK(equality_note);
  CHECK(check_prop16_consistency(GardingOperator::ma_lag(4), 50, 11).pass);

  // quad_c(1.5): both formulations fail, which is still consistent.
  const CheckReport q = check_prop16_consistency(GardingOperator::quad_c(1.5),
                                                 50, 11);
  CHECK(q.pass);

  // norm2_det: no Garding cone, so the gradient side has no usable points,
  // while plain majorization holds; the disagreement is reported honestly.
  const CheckReport nd =
      check_prop16_consistency(GardingOperator::norm2_det(3), 30, 11);
  CHECK_FALSE(nd.pass);
  bool no_points_note = false;
  for (const std::string& s : nd.notes) {
    if (s.find("no interior cone points") != std::string::npos) {
      no_points_note = true;
    }
  }
  CHECK(no_points_note);
}

TEST_CASE("basic lemma: equality for the elementary product") {
  const SparsePoly p = diagonal_restriction(GardingOperator::det(3));
  const CheckReport rep = basic_lemma_check(p, 300, 13);
  CHECK(rep.pass);
  // Equality everywhere: the conclusion ratio never leaves 1.
  for (const auto& [name, value] : rep.margins) {
    if (name == "min_conclusion_ratio") {
      CHECK(value == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("basic lemma rejects the gradient-hypothesis violation") {
  for (double eps : {0.1, 1.0}) {
    const SparsePoly p(2, {{{2, 0}, eps}, {{1, 1}, 1.0}});
    const CheckReport rep = basic_lemma_check(p, 100, 13);
    CHECK_FALSE(rep.pass);
    bool hyp2 = false;
    for (const std::string& s : rep.notes) {
      if (s.find("hypothesis (2)") != std::string::npos) hyp2 = true;
    }
    CHECK(hyp2);
  }
}

TEST_CASE("basic lemma rejects negative coefficients") {
  // x1^2 - x2^2 is hyperbolic-looking but has a negative coefficient.
  const SparsePoly p(2, {{{2, 0}, 1.0}, {{0, 2}, -1.0}});
  const CheckReport rep = basic_lemma_check(p, 100, 13);
  CHECK_FALSE(rep.pass);
  bool hyp1 = false;
  for (const std::string& s : rep.notes) {
    if (s.find("hypothesis (1)") != std::string::npos) hyp1 = true;
  }
  CHECK(hyp1);
}

TEST_CASE("diag_coefficient_check and pinned rotated coefficients") {
  CHECK(diag_coefficient_check(GardingOperator::det(3), 20, 17).pass);
  CHECK(diag_coefficient_check(GardingOperator::sigma(4, 2), 20, 17).pass);
  CHECK(diag_coefficient_check(GardingOperator::ma_lag(4), 10, 17).pass);

  // Hand-derived p_h for quad_c(0.5) under the 45 degree rotation.
  const double r = 1.0 / std::sqrt(2.0);
  const Mat h45 = mat2(r, -r, r, r);
  const OpPtr rotated =
      GardingOperator::conjugate(GardingOperator::quad_c(0.5), h45);
  const SparsePoly ph = diagonal_restriction(rotated);
  CHECK(ph.coeff({2, 0}) == doctest::Approx(0.125).epsilon(1e-9));
  CHECK(ph.coeff({1, 1}) == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(ph.coeff({0, 2}) == doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("diagonal_restriction pinned polynomials") {
  // det2 -> x1 x2 (the a12^2 term vanishes on diagonals).
  const SparsePoly p2 = diagonal_restriction(GardingOperator::det(2));
  CHECK(p2.terms().size() == 1);
  CHECK(p2.coeff({1, 1}) == doctest::Approx(1.0).epsilon(1e-12));

  // det3 -> x1 x2 x3.
  const SparsePoly p3 = diagonal_restriction(GardingOperator::det(3));
  CHECK(p3.coeff({1, 1, 1}) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(p3.terms().size() == 1);

  // sigma_2(3) -> e_2(x): all three cross terms with coefficient 1.
  const SparsePoly s = diagonal_restriction(GardingOperator::sigma(3, 2));
  CHECK(s.terms().size() == 3);
  CHECK(s.coeff({1, 1, 0}) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.coeff({1, 0, 1}) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.coeff({0, 1, 1}) == doctest::Approx(1.0).epsilon(1e-10));
}
