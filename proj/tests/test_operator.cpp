#include <doctest.h>

#include <cmath>
#include <vector>

#include "garding/operator.hpp"
#include "oracle/ma_lag_oracle.hpp"

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

// Entry polynomial of |A|^2 on S(3) in row-major upper-triangle variables:
// sum a_ii^2 + 2 sum_{i<j} a_ij^2.
SparsePoly norm_sq_poly_s3() {
  return SparsePoly(6, {{{2, 0, 0, 0, 0, 0}, 1.0},
                        {{0, 2, 0, 0, 0, 0}, 2.0},
                        {{0, 0, 2, 0, 0, 0}, 2.0},
                        {{0, 0, 0, 2, 0, 0}, 1.0},
                        {{0, 0, 0, 0, 2, 0}, 2.0},
                        {{0, 0, 0, 0, 0, 2}, 1.0}});
}

}  // namespace

TEST_CASE("entry space enumeration is row-major upper triangle") {
  CHECK(entry_space_dim(3) == 6);
  Mat m(3, 3);
  m << 1, 2, 3, 2, 4, 5, 3, 5, 6;
  const std::vector<double> v = sym_to_entries(SymMatrix(m));
  REQUIRE(v.size() == 6);
  CHECK(v == std::vector<double>{1, 2, 3, 4, 5, 6});
  const SymMatrix back = entries_to_sym(3, v);
  CHECK((back.mat() - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("det evaluates as the determinant") {
  const OpPtr d2 = GardingOperator::det(2);
  CHECK(d2->n() == 2);
  CHECK(d2->N() == 2);
  CHECK(d2->flags().garding_dirichlet);
  CHECK(d2->flags().i_central);
  CHECK(d2->evaluate(SymMatrix::identity(2)) == 1.0);
  CHECK(d2->evaluate(SymMatrix(mat2(2, 1, 1, 3))) ==
        doctest::Approx(5.0).epsilon(1e-12));
  CHECK(d2->evaluate(diag({1, -1})) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_THROWS_AS(d2->evaluate(SymMatrix::identity(3)), dimension_error);
}

TEST_CASE("sigma_k pinned values") {
  const OpPtr s23 = GardingOperator::sigma(3, 2);
  CHECK(s23->N() == 2);
  // sigma_2(diag(1,2,3)) = 2 + 3 + 6 = 11.
  CHECK(s23->evaluate(diag({1, 2, 3})) == doctest::Approx(11.0).epsilon(1e-12));
  // sigma_2(I3) = C(3,2) = 3.
  CHECK(s23->evaluate(SymMatrix::identity(3)) ==
        doctest::Approx(3.0).epsilon(1e-14));
  CHECK_THROWS_AS(GardingOperator::sigma(3, 0), dimension_error);
  CHECK_THROWS_AS(GardingOperator::sigma(3, 4), dimension_error);
}

TEST_CASE("quad_c pinned value and flags") {
  const OpPtr q = GardingOperator::quad_c(0.5);
  CHECK(q->evaluate(SymMatrix(mat2(2, 1, 1, 1))) == 1.5);
  CHECK(q->flags().garding_dirichlet);
  CHECK(q->flags().i_central);

  const OpPtr bad = GardingOperator::quad_c(1.5);
  CHECK_FALSE(bad->flags().garding_dirichlet);
  CHECK(bad->flags().i_central);
  CHECK_FALSE(bad->flags().notes.empty());
  const OpPtr neg = GardingOperator::quad_c(-1.0);
  CHECK_FALSE(neg->flags().garding_dirichlet);
}

TEST_CASE("ma_lag identity anchors are float-exact") {
  CHECK(GardingOperator::ma_lag(2)->evaluate(SymMatrix::identity(2)) == 1.0);
  CHECK(GardingOperator::ma_lag(4)->evaluate(SymMatrix::identity(4)) == 16.0);
  CHECK(GardingOperator::ma_lag(6)->evaluate(SymMatrix::identity(6)) ==
        6561.0);
  // g(I)^{1/N} = m for n = 2m.
  CHECK(std::pow(16.0, 1.0 / 4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(GardingOperator::ma_lag(3), dimension_error);
}

TEST_CASE("ma_lag collapses to det on S(2)") {
  const OpPtr m2 = GardingOperator::ma_lag(2);
  Rng rng(314);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(-3, 3);
    const double b = rng.uniform(-3, 3);
    const double c = rng.uniform(-3, 3);
    const SymMatrix A(mat2(a, b, b, c));
    const double want = a * c - b * b;
    REQUIRE(std::abs(m2->evaluate(A) - want) <= 1e-10 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("ma_lag frozen fixtures") {
  // Reference values computed with an independent implementation (numpy
  // eigvalsh over the literal (A + JAJ)/2); the first is integer-exact:
  // lambda = (sqrt(5/2), sqrt(1/2)), product (51+14a)(51-14a) with a^2=5/2.
  Mat a4(4, 4);
  a4 << 2, 1, 0, 0, 1, 3, 1, 0, 0, 1, 4, 1, 0, 0, 1, 5;
  CHECK(GardingOperator::ma_lag(4)->evaluate(SymMatrix(a4)) ==
        doctest::Approx(2111.0).epsilon(1e-12));

  Mat a6(6, 6);
  a6 << 3, 1, 0, 0, 1, 0,  //
      1, 4, 1, 0.5, 0, 0,  //
      0, 1, 5, 1, 0, 1,    //
      0, 0.5, 1, 6, 1, 0,  //
      1, 0, 0, 1, 7, 1,    //
      0, 0, 1, 0, 1, 8;
  CHECK(GardingOperator::ma_lag(6)->evaluate(SymMatrix(a6)) ==
        doctest::Approx(4953817349.4375).epsilon(1e-12));
}

TEST_CASE("ma_lag matches the sign-pattern oracle on random matrices") {
  for (int trial = 0; trial < 200; ++trial) {
    const int n = (trial % 2) ? 4 : 6;
    const OpPtr op = GardingOperator::ma_lag(n);
    const SymMatrix a = random_symmetric(n, Rng::derive(555, 9, trial));
    const double got = op->evaluate(a);
    const double want = garding_test::ma_lag_oracle(a.mat());
    REQUIRE(std::abs(got - want) <= 1e-8 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("norm2_det value and flags") {
  const OpPtr op = GardingOperator::norm2_det(3);
  CHECK(op->N() == 5);
  CHECK_FALSE(op->flags().garding_dirichlet);
  CHECK(op->flags().i_central);
  CHECK_FALSE(op->flags().notes.empty());
  // |diag(1,2,3)|^2 det = 14 * 6 = 84.
  CHECK(op->evaluate(diag({1, 2, 3})) == doctest::Approx(84.0).epsilon(1e-12));
}

TEST_CASE("norm2_det equals the product of symbolic |A|^2 and det3") {
  const OpPtr builtin = GardingOperator::norm2_det(3);
  const OpPtr composed = GardingOperator::product(
      GardingOperator::symbolic(3, norm_sq_poly_s3(), "norm_sq"),
      GardingOperator::det(3));
  CHECK(composed->N() == 5);
  for (int i = 0; i < 100; ++i) {
    const SymMatrix a = random_symmetric(3, Rng::derive(42, 10, i));
    const double x = builtin->evaluate(a);
    const double y = composed->evaluate(a);
    REQUIRE(std::abs(x - y) <= 1e-10 * (1.0 + std::abs(x)));
  }
}

TEST_CASE("symbolic factory validation") {
  CHECK_THROWS_AS(GardingOperator::symbolic(2, SparsePoly(2)),
                  dimension_error);  // wrong nvars (needs 3) and zero
  CHECK_THROWS_AS(GardingOperator::symbolic(2, SparsePoly(3)),
                  dimension_error);  // zero polynomial
  const SparsePoly inhom(3, {{{2, 0, 0}, 1.0}, {{1, 0, 0}, 1.0}});
  CHECK_THROWS_AS(GardingOperator::symbolic(2, inhom), dimension_error);

  // a12^2 on S(2) is a legitimate (degenerate) homogeneous operator.
  const SparsePoly a12sq(3, {{{0, 2, 0}, 1.0}});
  const OpPtr op = GardingOperator::symbolic(2, a12sq, "a12_squared");
  CHECK(op->N() == 2);
  CHECK_FALSE(op->flags().garding_dirichlet);
  CHECK_FALSE(op->flags().i_central);
  CHECK(op->evaluate(SymMatrix(mat2(3, 0.5, 0.5, 4))) == 0.25);
}

TEST_CASE("product: det2 * det2") {
  const OpPtr d2 = GardingOperator::det(2);
  const OpPtr p = GardingOperator::product(d2, d2);
  CHECK(p->N() == 4);
  CHECK(p->evaluate(diag({1, 2})) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(p->flags().garding_dirichlet);
  CHECK(p->flags().i_central);
  CHECK_THROWS_AS(
      GardingOperator::product(d2, GardingOperator::det(3)),
      dimension_error);
}

TEST_CASE("radial derivative pinned values") {
  const OpPtr rd2 = GardingOperator::radial_derivative(GardingOperator::det(2));
  CHECK(rd2->N() == 1);
  // d/dt det(tI+A)|_0 = tr A.
  CHECK(rd2->evaluate(diag({1, 3})) == doctest::Approx(4.0).epsilon(1e-10));

  const OpPtr rd3 = GardingOperator::radial_derivative(GardingOperator::det(3));
  CHECK(rd3->N() == 2);
  CHECK(rd3->evaluate(diag({1, 2, 3})) == doctest::Approx(11.0).epsilon(1e-9));
  CHECK(rd3->flags().garding_dirichlet);
  CHECK(rd3->flags().i_central);

  // Degree-1 operators cannot be lowered further.
  CHECK_THROWS_AS(GardingOperator::radial_derivative(rd2), dimension_error);
}

TEST_CASE("radial_derivative(det3) agrees with sigma_2 everywhere") {
  const OpPtr rd3 = GardingOperator::radial_derivative(GardingOperator::det(3));
  const OpPtr s23 = GardingOperator::sigma(3, 2);
  for (int i = 0; i < 100; ++i) {
    const SymMatrix a = random_symmetric(3, Rng::derive(77, 11, i));
    const double x = rd3->evaluate(a);
    const double y = s23->evaluate(a);
    REQUIRE(std::abs(x - y) <= 1e-9 * (1.0 + std::abs(y)));
  }
}

TEST_CASE("conjugate evaluates through h A h^t and validates orthogonality") {
  const OpPtr q = GardingOperator::quad_c(0.5);
  const double r = 1.0 / std::sqrt(2.0);
  const Mat h45 = mat2(r, -r, r, r);
  const OpPtr qh = GardingOperator::conjugate(q, h45);
  CHECK(qh->n() == 2);
  CHECK(qh->N() == 2);
  for (int i = 0; i < 50; ++i) {
    const SymMatrix a = random_symmetric(2, Rng::derive(31, 12, i));
    const SymMatrix rotated(h45 * a.mat() * h45.transpose(), 1e-9);
    CHECK(qh->evaluate(a) ==
          doctest::Approx(q->evaluate(rotated)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(GardingOperator::conjugate(q, mat2(1, 1, 0, 1)),
                  dimension_error);
  CHECK_THROWS_AS(GardingOperator::conjugate(q, Mat::Identity(3, 3)),
                  dimension_error);
}

TEST_CASE("linear map apply, adjoint, and from_action_on_matrices") {
  // L(A) = A + (tr A) I on S(2): action rows for (a11, a12, a22).
  Mat action(3, 3);
  action << 2, 0, 1, 0, 1, 0, 1, 0, 2;
  const LinearMap L(2, action);
  const SymMatrix out = L.apply(diag({1, 2}));
  CHECK(out(0, 0) == 4.0);
  CHECK(out(1, 1) == 5.0);
  CHECK(out(0, 1) == 0.0);

  const LinearMap built = LinearMap::from_action_on_matrices(
      2, [](const SymMatrix& A) {
        return SymMatrix(A.mat() + A.trace() * Mat::Identity(A.n(), A.n()));
      });
  CHECK((built.action() - action).cwiseAbs().maxCoeff() <= 1e-12);

  // Adjoint identity tr(L(X) Y) = tr(X L^t(Y)) under the trace pairing.
  const LinearMap Lt = L.adjoint();
  for (int i = 0; i < 30; ++i) {
    const SymMatrix x = random_symmetric(2, Rng::derive(3, 13, i));
    const SymMatrix y = random_symmetric(2, Rng::derive(4, 13, i));
    const double lhs = (L.apply(x).mat() * y.mat()).trace();
    const double rhs = (x.mat() * Lt.apply(y).mat()).trace();
    REQUIRE(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("linear_transform pinned values and flags") {
  Mat action(3, 3);
  action << 2, 0, 1, 0, 1, 0, 1, 0, 2;
  const OpPtr gl =
      GardingOperator::linear_transform(GardingOperator::det(2),
                                        LinearMap(2, action));
  // det(diag(1,2) + 3 I) = det diag(4,5) = 20; g_L(I) = det(3I) = 9.
  CHECK(gl->evaluate(diag({1, 2})) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(gl->evaluate(SymMatrix::identity(2)) ==
        doctest::Approx(9.0).epsilon(1e-12));
  CHECK(gl->flags().garding_dirichlet);
  CHECK(gl->flags().i_central);
  // Majorization instance at diag(1,2): sqrt(20) >= 3 sqrt(sqrt(2)) ... the
  // direct form g_L(A)^{1/2} >= g_L(I)^{1/2} (det A)^{1/2}: 4.472 >= 3*1.414^..
  CHECK(std::sqrt(20.0) >= std::sqrt(9.0) * std::pow(2.0, 0.5 / 2.0) - 1e-12);
}

TEST_CASE("linear_transform with the identity map is the identity") {
  const OpPtr d3 = GardingOperator::det(3);
  const OpPtr gl =
      GardingOperator::linear_transform(d3, LinearMap::identity(3));
  for (int i = 0; i < 100; ++i) {
    const SymMatrix a = random_symmetric(3, Rng::derive(8, 14, i));
    CHECK(gl->evaluate(a) == d3->evaluate(a));
  }
}

TEST_CASE("log-space evaluation matches plain evaluation in range") {
  const std::vector<OpPtr> ops = {
      GardingOperator::det(3),
      GardingOperator::sigma(4, 2),
      GardingOperator::ma_lag(4),
      GardingOperator::quad_c(0.5),
      GardingOperator::norm2_det(3),
  };
  for (const OpPtr& op : ops) {
    for (int i = 0; i < 40; ++i) {
      const SymMatrix a = random_spd(op->n(), Rng::derive(60, 15, i), 2.0);
      const double direct = op->evaluate(a);
      const LogValue lv = op->evaluate_log(a);
      REQUIRE(lv.sign == (direct > 0 ? 1 : direct < 0 ? -1 : 0));
      if (direct != 0.0) {
        REQUIRE(std::abs(lv.value() - direct) <=
                1e-10 * std::abs(direct));
      }
    }
  }
  // Sign handling for negative values.
  const LogValue neg = GardingOperator::det(2)->evaluate_log(diag({1, -1}));
  CHECK(neg.sign == -1);
  CHECK(neg.value() == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("log-space evaluation survives values that overflow double") {
  // ma_lag on S(8) has degree 16; scaling by 1e30 pushes the raw value far
  // beyond double range while the log form stays finite and exact in slope.
  const OpPtr op = GardingOperator::ma_lag(8);
  CHECK(op->evaluate(SymMatrix::identity(8)) == 4294967296.0);  // 4^16
  const SymMatrix a = random_spd(8, 424242, 1.0);
  const SymMatrix big(a.mat() * 1e30);
  const LogValue lv = op->evaluate_log(big);
  CHECK(lv.sign == 1);
  CHECK(std::isfinite(lv.log_abs));
  const LogValue base = op->evaluate_log(a);
  // Homogeneity: log g(cA) = N log c + log g(A).
  CHECK(lv.log_abs ==
        doctest::Approx(base.log_abs + 16.0 * std::log(1e30)).epsilon(1e-10));
}

TEST_CASE("operator names are populated") {
  CHECK_FALSE(GardingOperator::det(3)->name().empty());
  CHECK_FALSE(GardingOperator::ma_lag(4)->name().empty());
  CHECK_FALSE(
      GardingOperator::radial_derivative(GardingOperator::det(3))->name()
          .empty());
}
