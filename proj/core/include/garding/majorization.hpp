#pragma once

#include <cstdint>

#include "garding/garding_analysis.hpp"

namespace garding {

// g(A) <= 0 where positivity was required (flags a non-Dirichlet operator).
struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MajorizationReport {
  double min_ratio = 0.0;
  SymMatrix argmin;
  long samples_used = 0;
  long refinement_steps = 0;
  bool sharp_at_identity = false;  // ratio at I within 1e-9 of 1
  double gamma = 0.0;              // g(I)^{n/N} / n^n
  bool pass = false;               // min_ratio >= 1 - 1e-6
};

struct GradientDetBound {
  double det_value = 0.0;  // det M, M = (1/N) g(B)^{(1-N)/N} gradient(g,B)
  double gamma = 0.0;
  bool positive_definite = false;
  double min_eigenvalue = 0.0;  // of M
  bool equality_regime = false;  // |det M - gamma| <= 1e-6 gamma
  bool pass = false;             // M > 0 and det M >= gamma (1 - 1e-6)
};

// g(A)^{1/N} / (g(I)^{1/N} det(A)^{1/n}), computed in log space.
double ratio(const OpPtr& g, const SymMatrix& A);

// Samples the ratio at I and `samples` random_spd draws (spreads cycling
// {1,2,3}), then refines the worst candidate by multiplicative descent
// A <- A^{1/2} exp(-eta S) A^{1/2} over random trace-free symmetric
// directions (the scale direction is ratio-invariant), eta halved on
// rejection.
MajorizationReport check_majorization(const OpPtr& g, int samples,
                                      int refine_iters, std::uint64_t seed);

// Gradient-determinant bound: det(D_B g^{1/N}) >= gamma = g(I)^{n/N}/n^n
// for B in the cone.
// Precondition checked via in_garding_cone.
GradientDetBound gradient_det_bound(const OpPtr& g, const SymMatrix& B);

// Runs check_majorization and gradient_det_bound at random interior cone
// points; passes iff both succeed or both fail.
CheckReport check_prop16_consistency(const OpPtr& g, int samples,
                                     std::uint64_t seed);

// Basic lemma on R^n for a homogeneous p: hypothesis (1) coefficients >= 0,
// hypothesis (2) D_e p = k e with k > 0 (plus the Euler relation
// N p(e) = k n), conclusion p(x)^{1/N} >= p(e)^{1/N} (x_1...x_n)^{1/n} on
// log-uniform positive-orthant samples. Hypothesis failures are reported
// distinctly from conclusion failures.
CheckReport basic_lemma_check(const SparsePoly& p, int samples,
                              std::uint64_t seed);

// Coefficient condition: for h = identity plus `h_samples`
// Haar-random orthogonals, the diagonal restriction p_h of conjugate(g,h)
// has every coefficient >= -1e-8 (1 + max|coeff|).
CheckReport diag_coefficient_check(const OpPtr& g, int h_samples,
                                   std::uint64_t seed);

// Diagonal restriction of g as a polynomial in n variables (the p of the
// basic lemma; p_h when g is first conjugated).
SparsePoly diagonal_restriction(const OpPtr& g);

}  // namespace garding
