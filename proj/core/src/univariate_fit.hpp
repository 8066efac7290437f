#pragma once

// Internal helpers for fitting univariate restrictions t -> F(t) that are
// known (or claimed) to be polynomials of a given degree, and for extracting
// real root lists from the fitted coefficients, including the multiple-root
// case where plain companion eigenvalues splatter into complex clusters.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "garding/garding_analysis.hpp"

namespace garding::detail {

inline double eval_poly(const std::vector<double>& coeffs, double t) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * t + *it;
  }
  return acc;
}

inline std::vector<double> poly_derivative(const std::vector<double>& coeffs) {
  if (coeffs.size() <= 1) return {0.0};
  std::vector<double> d(coeffs.size() - 1);
  for (size_t k = 1; k < coeffs.size(); ++k) d[k - 1] = k * coeffs[k];
  return d;
}

inline std::vector<double> chebyshev_nodes(int count, double radius) {
  std::vector<double> nodes(count);
  for (int i = 0; i < count; ++i) {
    nodes[i] = radius * std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * count));
  }
  return nodes;
}

// Fits F with a degree-N polynomial sampled at N+1 Chebyshev nodes on
// [-R, R], then cross-checks at three held-out points.  Coefficients come
// back in ascending degree order.  Throws not_polynomial when the held-out
// residual shows F is not a degree-N polynomial.
inline std::vector<double> fit_polynomial(
    const std::function<double(double)>& F, int N, double R) {
  if (N < 0 || !(R > 0.0)) {
    throw dimension_error("fit_polynomial: need N >= 0 and R > 0");
  }
  const std::vector<double> nodes = chebyshev_nodes(N + 1, R);
  Eigen::VectorXd y(N + 1);
  Eigen::MatrixXd V(N + 1, N + 1);
  double scale = 1.0;
  for (int i = 0; i <= N; ++i) {
    y(i) = F(nodes[i]);
    scale = std::max(scale, std::abs(y(i)));
    const double s = nodes[i] / R;
    double p = 1.0;
    for (int k = 0; k <= N; ++k) {
      V(i, k) = p;
      p *= s;
    }
  }
  Eigen::VectorXd cs = V.colPivHouseholderQr().solve(y);
  std::vector<double> coeffs(N + 1);
  double rk = 1.0;
  for (int k = 0; k <= N; ++k) {
    coeffs[k] = cs(k) / rk;
    rk *= R;
  }

  static const double kHoldout[3] = {0.3141592653589793, -0.7182818284590452,
                                     0.5772156649015329};
  for (double f : kHoldout) {
    const double t = f * R;
    const double err = std::abs(F(t) - eval_poly(coeffs, t));
    if (err > 1e-6 * scale) {
      std::ostringstream msg;
      msg << "restriction is not a polynomial of degree " << N
          << " (held-out residual " << err / scale << " at t = " << t << ")";
      throw not_polynomial(msg.str());
    }
  }
  return coeffs;
}

// Cauchy-style root magnitude scale; 0 means every root is 0.
inline double root_scale(const std::vector<double>& coeffs) {
  const int N = static_cast<int>(coeffs.size()) - 1;
  const double cN = coeffs[N];
  double s = 0.0;
  for (int k = 0; k < N; ++k) {
    if (coeffs[k] == 0.0) continue;
    s = std::max(s, std::pow(std::abs(coeffs[k] / cN), 1.0 / (N - k)));
  }
  return s;
}

inline std::vector<std::complex<double>> companion_roots(
    const std::vector<double>& coeffs) {
  const int N = static_cast<int>(coeffs.size()) - 1;
  if (N == 0) return {};
  const double s = root_scale(coeffs);
  if (s == 0.0) {
    return std::vector<std::complex<double>>(N, 0.0);
  }
  // Substitute t = s*u so the monic coefficients are O(1); the plain
  // Hessenberg QR on the companion is then well behaved without balancing.
  std::vector<double> monic(N);
  double sk = 1.0;
  for (int k = 0; k < N; ++k) {
    monic[k] = coeffs[k] * sk / (coeffs[N] * std::pow(s, N));
    sk *= s;
  }
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(N, N);
  for (int i = 1; i < N; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < N; ++i) C(i, N - 1) = -monic[i];
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> roots(N);
  for (int i = 0; i < N; ++i) roots[i] = s * es.eigenvalues()(i);
  return roots;
}

// Newton iteration for a simple real root of `coeffs`, started at x0.
inline double newton_refine(const std::vector<double>& coeffs, double x0) {
  std::vector<double> d = poly_derivative(coeffs);
  double x = x0;
  for (int iter = 0; iter < 60; ++iter) {
    const double fx = eval_poly(coeffs, x);
    const double dfx = eval_poly(d, x);
    if (dfx == 0.0) break;
    const double step = fx / dfx;
    x -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

// Expands leading * prod_j (t - roots[j]) into ascending coefficients.
inline std::vector<double> coeffs_from_roots(const std::vector<double>& roots,
                                             double leading) {
  std::vector<double> c = {leading};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return c;
}

// Remainder r1*t + r0 of dividing the polynomial (descending coefficients)
// by t^2 + u*t + v.
inline std::pair<double, double> quadratic_remainder(
    const std::vector<double>& desc, double u, double v) {
  const int n = static_cast<int>(desc.size()) - 1;
  double q1 = 0.0, q2 = 0.0;  // trailing quotient coefficients
  for (int i = 0; i <= n - 2; ++i) {
    const double qi = desc[i] - u * q1 - v * q2;
    q2 = q1;
    q1 = qi;
  }
  const double r1 = desc[n - 1] - u * q1 - v * q2;
  const double r0 = desc[n] - v * q1;
  return {r1, r0};
}

// Newton iteration on (u, v) driving the division remainder of t^2 + u*t + v
// to zero, i.e. refining a quadratic factor against the full polynomial.
// For a tight root pair the factor coefficients (root sum and product) stay
// well conditioned even when the individual roots do not, so this reaches
// far better reconstruction accuracy than polishing the roots one by one.
inline bool refine_quadratic_factor(const std::vector<double>& desc, double& u,
                                    double& v) {
  for (int iter = 0; iter < 40; ++iter) {
    const auto [r1, r0] = quadratic_remainder(desc, u, v);
    const double hu = 1e-6 * (1.0 + std::abs(u));
    const double hv = 1e-6 * (1.0 + std::abs(v));
    const auto [r1u, r0u] = quadratic_remainder(desc, u + hu, v);
    const auto [r1v, r0v] = quadratic_remainder(desc, u, v + hv);
    const double a11 = (r1u - r1) / hu;
    const double a12 = (r1v - r1) / hv;
    const double a21 = (r0u - r0) / hu;
    const double a22 = (r0v - r0) / hv;
    const double det = a11 * a22 - a12 * a21;
    if (det == 0.0 || !std::isfinite(det)) return false;
    const double du = (r1 * a22 - r0 * a12) / det;
    const double dv = (r0 * a11 - r1 * a21) / det;
    u -= du;
    v -= dv;
    if (!std::isfinite(u) || !std::isfinite(v)) return false;
    if (std::abs(du) <= 1e-15 * (1.0 + std::abs(u)) &&
        std::abs(dv) <= 1e-15 * (1.0 + std::abs(v))) {
      return true;
    }
  }
  return true;  // a stalled iterate still faces the reconstruction gate
}

// Resolves a 2-cluster near x0 into two real roots: seed a quadratic factor
// from the local Taylor model at x0, refine it against the full polynomial,
// and split it. Returns false for a genuinely complex pair (negative
// discriminant), leaving the cluster to the multiple-root model.
inline bool split_pair_cluster(const std::vector<double>& coeffs,
                               const std::vector<std::vector<double>>& deriv,
                               double x0, double& lo, double& hi) {
  if (!std::isfinite(x0)) return false;
  const double t2 = 0.5 * eval_poly(deriv[2], x0);
  if (t2 == 0.0) return false;
  const double sum_s = -eval_poly(deriv[1], x0) / t2;  // local root sum
  const double prod_s = eval_poly(deriv[0], x0) / t2;  // local root product
  double u = -(2.0 * x0 + sum_s);
  double v = x0 * x0 + x0 * sum_s + prod_s;
  const std::vector<double> desc(coeffs.rbegin(), coeffs.rend());
  if (!refine_quadratic_factor(desc, u, v)) return false;
  const double disc = u * u - 4.0 * v;
  if (!(disc >= 0.0)) return false;
  const double sq = std::sqrt(disc);
  lo = (-u - sq) / 2.0;
  hi = (-u + sq) / 2.0;
  return std::isfinite(lo) && std::isfinite(hi);
}

struct RootExtraction {
  std::vector<double> roots;  // all real, with multiplicity, unsorted
  double residual;            // relative reconstruction error
};

inline RootExtraction extract_real_roots(const std::vector<double>& coeffs,
                                         int depth = 0);

// Re-extracts the roots of a size-k cluster from the Taylor expansion of
// the polynomial at the cluster center.  In the shifted frame the cluster
// radius sets the root scale, so structure far below the global scale (for
// example several tight pairs spanning one narrow band) becomes resolvable
// again.  The shifted model is the exact rebased polynomial when the
// cluster holds every root, and a degree-k truncation polished against the
// full polynomial otherwise.
inline bool zoom_cluster(const std::vector<double>& coeffs,
                         const std::vector<std::vector<double>>& deriv,
                         double x0, int mult, int depth,
                         std::vector<double>& out) {
  if (!std::isfinite(x0)) return false;
  const int N = static_cast<int>(coeffs.size()) - 1;
  std::vector<double> local(mult + 1);
  double fact = 1.0;
  for (int j = 0; j <= mult; ++j) {
    if (j > 0) fact *= j;
    local[j] = eval_poly(deriv[j], x0) / fact;
    if (!std::isfinite(local[j])) return false;
  }
  if (local[mult] == 0.0) return false;
  RootExtraction sub;
  try {
    sub = extract_real_roots(local, depth + 1);
  } catch (const non_real_spectrum&) {
    return false;
  }
  std::sort(sub.roots.begin(), sub.roots.end());
  if (mult == N) {
    // Exact rebase: the shifted roots already reproduce the polynomial.
    for (double sroot : sub.roots) out.push_back(x0 + sroot);
    return true;
  }
  // Truncated local model: polish each multiplicity group against the full
  // polynomial.
  size_t a = 0;
  while (a < sub.roots.size()) {
    size_t b = a + 1;
    while (b < sub.roots.size() && sub.roots[b] == sub.roots[a]) ++b;
    const int q = static_cast<int>(b - a);
    const double polished = newton_refine(deriv[q - 1], x0 + sub.roots[a]);
    for (int t = 0; t < q; ++t) out.push_back(polished);
    a = b;
  }
  return true;
}

// Recovers a full real root list from fitted coefficients.  Companion
// eigenvalues are clustered at increasing tolerances; a size-k cluster is
// refined by Newton on the (k-1)-th derivative where the common root is
// simple, split through a quadratic factor (pairs), or re-extracted in a
// zoomed frame at the cluster center.  A candidate list is accepted only if
// re-expanding the product reproduces the input coefficients to 1e-8
// relative accuracy.  Throws non_real_spectrum when no tolerance level
// yields an acceptable real list.
inline RootExtraction extract_real_roots(const std::vector<double>& coeffs,
                                         int depth) {
  const int N = static_cast<int>(coeffs.size()) - 1;
  if (N == 0) return {{}, 0.0};
  double cmax = 0.0;
  for (double c : coeffs) cmax = std::max(cmax, std::abs(c));
  const std::vector<std::complex<double>> raw = companion_roots(coeffs);
  const double s = root_scale(coeffs);
  if (s == 0.0) {
    return {std::vector<double>(N, 0.0), 0.0};
  }

  std::vector<std::complex<double>> sorted = raw;
  std::sort(sorted.begin(), sorted.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              return a.real() < b.real();
            });

  // Derivative ladder p, p', ..., p^(N) shared across attempts.
  std::vector<std::vector<double>> deriv = {coeffs};
  for (int k = 1; k <= N; ++k) deriv.push_back(poly_derivative(deriv.back()));

  // tau = 0 first: distinct companion roots are polished individually, which
  // handles close-but-simple roots; coarser rungs only win the reconstruction
  // gate when roots are genuinely repeated.
  static const double kClusterLadder[] = {0.0,  0.0005, 0.002, 0.005, 0.02,
                                          0.05, 0.1,    0.2,   0.3,   0.45};
  for (double tau_rel : kClusterLadder) {
    const double tau = tau_rel * s;
    std::vector<double> candidate;
    candidate.reserve(N);
    size_t i = 0;
    while (i < sorted.size()) {
      size_t j = i + 1;
      while (j < sorted.size() && std::abs(sorted[j] - sorted[j - 1]) <= tau) {
        ++j;
      }
      const int mult = static_cast<int>(j - i);
      std::complex<double> mean = 0.0;
      for (size_t q = i; q < j; ++q) mean += sorted[q];
      mean /= static_cast<double>(mult);
      const double refined = newton_refine(deriv[mult - 1], mean.real());
      bool resolved = false;
      if (mult == 2) {
        // Tight pairs that the companion matrix splatters into a complex
        // pair may still be genuinely split; recover the pair through its
        // quadratic factor before falling back to a repeated root.
        double lo = 0.0, hi = 0.0;
        if (split_pair_cluster(coeffs, deriv, refined, lo, hi)) {
          candidate.push_back(lo);
          candidate.push_back(hi);
          resolved = true;
        }
      } else if (mult >= 3 && depth < 3) {
        resolved = zoom_cluster(coeffs, deriv, refined, mult, depth, candidate);
      }
      if (!resolved) {
        for (int q = 0; q < mult; ++q) candidate.push_back(refined);
      }
      i = j;
    }
    const std::vector<double> recon = coeffs_from_roots(candidate, coeffs[N]);
    double err = 0.0;
    for (int k = 0; k <= N; ++k) {
      err = std::max(err, std::abs(recon[k] - coeffs[k]));
    }
    err /= cmax;
    if (err <= 1e-8) {
      return {candidate, err};
    }
  }

  double imag_res = 0.0;
  for (const auto& z : raw) {
    imag_res = std::max(imag_res, std::abs(z.imag()) / s);
  }
  std::ostringstream msg;
  msg << "no real root system reproduces the profile (max |Im|/scale = "
      << imag_res << ")";
  throw non_real_spectrum(msg.str(), imag_res);
}

}  // namespace garding::detail
