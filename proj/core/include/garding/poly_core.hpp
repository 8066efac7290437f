#pragma once

#include <functional>
#include <map>
#include <vector>

#include "garding/matrix_core.hpp"

namespace garding {

// Graded lexicographic order on exponent vectors: lower total degree first,
// then lexicographic. Gives deterministic term iteration and serialization.
struct GradedLex {
  bool operator()(const std::vector<int>& a, const std::vector<int>& b) const;
};

// Sparse multivariate polynomial: exponent vector -> coefficient. Terms with
// |coefficient| below the prune threshold 1e-13 are dropped on construction,
// separating genuine zero coefficients from float noise.
class SparsePoly {
 public:
  static constexpr double kPruneThreshold = 1e-13;

  using TermMap = std::map<std::vector<int>, double, GradedLex>;

  explicit SparsePoly(int nvars);
  SparsePoly(int nvars, const std::vector<std::pair<std::vector<int>, double>>& terms);

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }  // 0 for the zero polynomial
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  double coeff(const std::vector<int>& alpha) const;

  // True iff every term has total degree == degree() (vacuously true for 0).
  bool is_homogeneous() const;

 private:
  void add_term(std::vector<int> alpha, double c);
  void prune_and_finalize();

  int nvars_;
  int degree_ = 0;
  TermMap terms_;
  friend SparsePoly poly_mul(const SparsePoly&, const SparsePoly&);
  friend SparsePoly poly_directional_derivative(const SparsePoly&,
                                                const std::vector<double>&);
  friend SparsePoly coefficients_from_evaluator(
      const std::function<double(const std::vector<double>&)>&, int, int);
};

double poly_eval(const SparsePoly& p, const std::vector<double>& x);

SparsePoly poly_mul(const SparsePoly& p, const SparsePoly& q);

// Sum_j a_j dp/dx_j.
SparsePoly poly_directional_derivative(const SparsePoly& p,
                                       const std::vector<double>& a);

// Recovers the unique polynomial of total degree <= N agreeing with f on the
// integer grid {0..N}^n via iterated Newton divided differences. Only the
// C(N+n, n) grid points with coordinate sum <= N are evaluated: coefficients
// of total degree <= N depend on those alone, so the result is identical to
// the full tensor-grid interpolant for true degree-<=N polynomials.
SparsePoly coefficients_from_evaluator(
    const std::function<double(const std::vector<double>&)>& f, int N, int n);

// Serialization used by the CLI and reports: graded-lex sorted list of
// {"alpha": [ints], "coeff": number}.
std::string poly_to_json_text(const SparsePoly& p);
SparsePoly poly_from_json_terms_text(int nvars, const std::string& text);

}  // namespace garding
