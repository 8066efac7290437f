#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "garding/operator.hpp"
#include "garding/report.hpp"

namespace garding {

// t -> g(tB+A) has a complex root beyond the hyperbolicity tolerance: g is
// not hyperbolic in direction B at A. Carries the realness residual.
struct non_real_spectrum : std::runtime_error {
  non_real_spectrum(const std::string& what, double residual_)
      : std::runtime_error(what), residual(residual_) {}
  double residual;
};

// g(B) == 0: the factorization g(tB+A) = g(B) prod(t + lambda_j) degenerates.
struct degenerate_direction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Profile evaluations do not interpolate to a degree-N polynomial (the
// declared degree of the operator is wrong, or evaluation is inconsistent).
struct not_polynomial : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kHyperbolicityTol = 1e-6;   // on max |Im|/(1+|Re|)
inline constexpr double kConeMembershipTol = 1e-9;  // min eigenvalue margin

// The N Garding eigenvalues lambda_j^{B,g}(A) from the factorization
// g(tB+A) = g(B) prod_j (t + lambda_j), sorted nonincreasing.
struct EigenList {
  std::vector<double> values;
  double realness_residual = 0.0;
};

struct ConeCertificate {
  bool member = false;
  double margin = 0.0;   // min Garding I-eigenvalue of A
  double g_value = 0.0;  // g(A)
};

// Result of the Central Ray check. The gradient form (D_I g = k I) is the
// primary verdict; the Laplacian form is confirmed independently when the
// spectrum is real, and recorded as unavailable otherwise (e.g. norm2_det).
struct CentralityResult {
  bool central = false;
  double k = 0.0;             // proportionality constant, mean diagonal entry
  SymMatrix gradient_at_I;
  double offdiag_residual = 0.0;
  double diag_residual = 0.0;             // max |G_ii - k|
  double euler_residual = 0.0;            // |N g(I) - k n| / (k n)
  bool laplacian_available = false;
  double laplacian_tracefree_max = 0.0;   // max |Delta(A0)| over trace-free A0
  double laplacian_ratio_spread = 0.0;    // spread of Delta(A)/tr(A)
};

// Coefficients c_0..c_N (in t) of the univariate profile t -> g(tB+A),
// recovered from N+1 Chebyshev nodes on [-R, R], R = 2(1 + |A|_F/|B|_F),
// via a scaled-variable Vandermonde solve. The leading coefficient must
// reproduce g(B) to 1e-8 relative, and three held-out nodes guard against
// evaluations that are not polynomial of the declared degree.
std::vector<double> univariate_profile(const OpPtr& g, const SymMatrix& B,
                                       const SymMatrix& A);

EigenList garding_eigenvalues(const OpPtr& g, const SymMatrix& B,
                              const SymMatrix& A);

// Draws `samples` gaussian symmetric matrices and verifies real spectra in
// direction B; failures carry the witness matrix and residual.
CheckReport check_hyperbolic(const OpPtr& g, const SymMatrix& B, int samples,
                             std::uint64_t seed);

// Member iff min I-eigenvalue > 1e-9 and g(A) > 0 (boundary points are
// classified non-members).
ConeCertificate in_garding_cone(const OpPtr& g, const SymMatrix& A);

// Every random_spd sample (spreads cycling 1,2,3) must be a cone member.
// Membership errors (degenerate direction, non-real spectrum) count as
// failed samples with the witness recorded.
CheckReport check_dirichlet(const OpPtr& g, int samples, std::uint64_t seed);

// Gradient D_A g as a symmetric matrix with <gradient, B> = d/ds g(A+sB).
// Symbolic operators differentiate exactly; all other kinds use central
// finite differences with step 1e-5 (1+|A|) plus one Richardson level.
SymMatrix gradient(const OpPtr& g, const SymMatrix& A);

// Sum of the I-eigenvalues of A (the Garding Laplacian).
double garding_laplacian(const OpPtr& g, const SymMatrix& A);

CentralityResult check_central(const OpPtr& g);

// Sorted eigenvalues of the radial derivative at A interlace those of g:
// lambda_j^g >= lambda_j^{g'} >= lambda_{j+1}^g within 1e-8 slack.
CheckReport interlace_check(const OpPtr& g, const SymMatrix& A);

// Conjugation equivariance: gradient(conjugate(g,h), I) == h^t gradient(g,I) h
// for Haar-random h, relative error <= 1e-6. When check_central(g) passes,
// also verifies the diagonal-restriction specialization D_e p_h = k e;
// otherwise that part is reported "not applicable".
CheckReport lemma22_check(const OpPtr& g, int trials, std::uint64_t seed);

// Chain rule for linear_transform operators g_L:
// D_A(log g_L) = L^t (D_{L(A)} log g), compared at random cone points.
CheckReport chain_rule_check(const OpPtr& g_L, int points, std::uint64_t seed);

// Cone pullback: A in cone(g_L) iff L(A) in cone(g), on samples straddling
// the boundary (interior SPD points shrunk toward and past the cone edge).
CheckReport cone_transfer_check(const OpPtr& g_L, int samples,
                                std::uint64_t seed);

}  // namespace garding
