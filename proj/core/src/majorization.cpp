#include "garding/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace garding {

namespace {

// log(g(A)) for positive values; throws domain_error otherwise.
double positive_log(const OpPtr& g, const SymMatrix& A, const char* what) {
  const LogValue lv = g->evaluate_log(A);
  if (lv.sign <= 0) {
    std::ostringstream msg;
    msg << what << ": g(A) <= 0 for operator '" << g->name() << "'";
    throw domain_error(msg.str());
  }
  return lv.log_abs;
}

double log_det_spd(const SymMatrix& A, const char* what) {
  const SpectralDecomposition d = sym_eigen(A);
  double sum = 0.0;
  for (int i = 0; i < d.eigenvalues.size(); ++i) {
    if (d.eigenvalues(i) <= 0.0) {
      throw domain_error(std::string(what) + ": matrix is not positive definite");
    }
    sum += std::log(d.eigenvalues(i));
  }
  return sum;
}

Mat sym_function(const SymMatrix& A, const std::function<double(double)>& f) {
  const SpectralDecomposition d = sym_eigen(A);
  Vec fv(d.eigenvalues.size());
  for (int i = 0; i < d.eigenvalues.size(); ++i) fv(i) = f(d.eigenvalues(i));
  return d.basis * fv.asDiagonal() * d.basis.transpose();
}

}  // namespace

double ratio(const OpPtr& g, const SymMatrix& A) {
  if (!g) throw dimension_error("ratio: null operator");
  if (A.n() != g->n()) throw dimension_error("ratio: dimension mismatch");
  const double log_gA = positive_log(g, A, "ratio");
  const double log_gI =
      positive_log(g, SymMatrix::identity(g->n()), "ratio at identity");
  const double log_det = log_det_spd(A, "ratio");
  return std::exp(log_gA / g->N() - log_gI / g->N() - log_det / g->n());
}

MajorizationReport check_majorization(const OpPtr& g, int samples,
                                      int refine_iters, std::uint64_t seed) {
  if (!g) throw dimension_error("check_majorization: null operator");
  const int n = g->n();
  MajorizationReport rep;
  rep.gamma = std::exp((double(n) / g->N()) *
                           positive_log(g, SymMatrix::identity(n),
                                        "check_majorization") -
                       n * std::log(double(n)));

  const auto guarded_ratio = [&](const SymMatrix& A) {
    try {
      return ratio(g, A);
    } catch (const domain_error& e) {
      std::ostringstream msg;
      msg << e.what() << "; offending sample: " << matrix_to_json_text(A);
      throw domain_error(msg.str());
    }
  };

  SymMatrix best = SymMatrix::identity(n);
  double best_ratio = guarded_ratio(best);
  rep.sharp_at_identity = std::abs(best_ratio - 1.0) <= 1e-9;
  long used = 1;
  for (int i = 0; i < samples; ++i) {
    const double spread = 1.0 + (i % 3);
    const SymMatrix A = random_spd(n, Rng::derive(seed, 60, i), spread);
    const double r = guarded_ratio(A);
    ++used;
    if (r < best_ratio) {
      best_ratio = r;
      best = A;
    }
  }

  // Multiplicative descent from the worst candidate. Updates
  // A <- A^{1/2} exp(-eta S) A^{1/2} stay exactly SPD; S is trace-free
  // because the scale direction leaves the ratio invariant.
  double eta = 0.5;
  Mat sqrt_best = sym_function(best, [](double v) { return std::sqrt(v); });
  long steps = 0;
  for (int it = 0; it < refine_iters; ++it) {
    const SymMatrix S0 = random_symmetric(n, Rng::derive(seed, 61, it));
    Mat S = S0.mat() - (S0.trace() / n) * Mat::Identity(n, n);
    const Mat expstep =
        sym_function(SymMatrix(-eta * S), [](double v) { return std::exp(v); });
    Mat cand = sqrt_best * expstep * sqrt_best;
    const SymMatrix C((cand + cand.transpose()) / 2.0);
    const double r = guarded_ratio(C);
    ++steps;
    if (r < best_ratio) {
      best_ratio = r;
      best = C;
      sqrt_best = sym_function(best, [](double v) { return std::sqrt(v); });
    } else {
      eta = std::max(eta / 2.0, 1e-6);
    }
  }

  rep.min_ratio = best_ratio;
  rep.argmin = best;
  rep.samples_used = used;
  rep.refinement_steps = steps;
  rep.pass = rep.min_ratio >= 1.0 - 1e-6;
  return rep;
}

GradientDetBound gradient_det_bound(const OpPtr& g, const SymMatrix& B) {
  if (!g) throw dimension_error("gradient_det_bound: null operator");
  const ConeCertificate cert = in_garding_cone(g, B);
  if (!cert.member) {
    throw domain_error(
        "gradient_det_bound: B is not an interior point of the cone");
  }
  const int n = g->n();
  const int N = g->N();
  GradientDetBound out;
  out.gamma = std::exp(
      (double(n) / N) *
          positive_log(g, SymMatrix::identity(n), "gradient_det_bound") -
      n * std::log(double(n)));

  // M = D_B g^{1/N} = (1/N) g(B)^{(1-N)/N} D_B g, assembled in log space so
  // large g(B) (high-degree operators at spread-3 points) cannot overflow.
  const double log_gB = positive_log(g, B, "gradient_det_bound");
  const double scale = std::exp(((1.0 - N) / double(N)) * log_gB) / N;
  const Mat M = scale * gradient(g, B).mat();
  const SpectralDecomposition d = sym_eigen(SymMatrix(M));
  out.min_eigenvalue = d.eigenvalues(d.eigenvalues.size() - 1);
  out.positive_definite = out.min_eigenvalue > 0.0;
  double det = 1.0;
  for (int i = 0; i < d.eigenvalues.size(); ++i) det *= d.eigenvalues(i);
  out.det_value = det;
  out.equality_regime = std::abs(out.det_value - out.gamma) <= 1e-6 * out.gamma;
  out.pass = out.positive_definite &&
             out.det_value >= out.gamma * (1.0 - 1e-6);
  return out;
}

CheckReport check_prop16_consistency(const OpPtr& g, int samples,
                                     std::uint64_t seed) {
  CheckReport rep;
  rep.suite = "gradient-det";
  const int n = g->n();

  bool grad_side = true;
  bool equality_seen = false;
  double min_det_rel_margin = std::numeric_limits<double>::infinity();
  int usable = 0;
  int attempts = 0;
  for (int i = 0; usable < samples && attempts < samples * 10; ++i, ++attempts) {
    const double spread = 1.0 + (i % 3);
    const SymMatrix B = random_spd(n, Rng::derive(seed, 70, i), spread);
    GradientDetBound bound;
    try {
      bound = gradient_det_bound(g, B);
    } catch (const std::runtime_error&) {
      continue;  // not an interior cone point, or eigenvalues unavailable
    }
    ++usable;
    min_det_rel_margin =
        std::min(min_det_rel_margin,
                 (bound.det_value - bound.gamma) / bound.gamma);
    if (bound.equality_regime) equality_seen = true;
    if (!bound.pass) {
      grad_side = false;
      if (!rep.witness) {
        rep.witness = B.mat();
        rep.margin("failing_det_value", bound.det_value);
        rep.margin("failing_min_eigenvalue", bound.min_eigenvalue);
      }
    }
  }
  if (usable == 0) {
    grad_side = false;
    rep.note("no interior cone points available for the gradient bound");
  }

  bool maj_side = true;
  try {
    maj_side = check_majorization(g, 200, 100, Rng::derive(seed, 71, 0)).pass;
  } catch (const domain_error&) {
    maj_side = false;
  }

  rep.margin("points_used", usable);
  if (usable > 0) rep.margin("min_det_rel_margin", min_det_rel_margin);
  rep.margin("gradient_side_pass", grad_side ? 1.0 : 0.0);
  rep.margin("majorization_side_pass", maj_side ? 1.0 : 0.0);
  if (equality_seen) rep.note("equality regime");
  rep.pass = grad_side == maj_side;
  if (!rep.pass) {
    rep.note("gradient bound and majorization check disagree on sampled points");
  }
  return rep;
}

CheckReport basic_lemma_check(const SparsePoly& p, int samples,
                              std::uint64_t seed) {
  CheckReport rep;
  rep.suite = "basic-lemma";
  if (!p.is_homogeneous()) {
    throw dimension_error("basic_lemma_check: polynomial is not homogeneous");
  }
  const int n = p.nvars();
  const int N = p.degree();
  if (N == 0) throw dimension_error("basic_lemma_check: constant polynomial");

  // Hypothesis (1): coefficients nonnegative.
  double min_coeff = std::numeric_limits<double>::infinity();
  for (const auto& [alpha, c] : p.terms()) min_coeff = std::min(min_coeff, c);
  if (p.terms().empty()) min_coeff = 0.0;
  const bool hyp1 = min_coeff >= -1e-12;
  rep.margin("min_coeff", min_coeff);

  // Hypothesis (2): gradient at e proportional to e, with positive constant.
  const std::vector<double> e(n, 1.0);
  std::vector<double> grad_e(n);
  std::vector<double> dir(n, 0.0);
  double k = 0.0;
  for (int i = 0; i < n; ++i) {
    dir[i] = 1.0;
    grad_e[i] = poly_eval(poly_directional_derivative(p, dir), e);
    dir[i] = 0.0;
    k += grad_e[i];
  }
  k /= n;
  double grad_dev = 0.0;
  for (int i = 0; i < n; ++i) {
    grad_dev = std::max(grad_dev, std::abs(grad_e[i] - k));
  }
  const double pe = poly_eval(p, e);
  const double euler_res = std::abs(N * pe - k * n);
  const bool hyp2 = k > 0.0 && grad_dev <= 1e-8 * std::max(1.0, std::abs(k)) &&
                    euler_res <= 1e-8 * std::max(1.0, std::abs(k) * n);
  rep.margin("k", k);
  rep.margin("max_grad_deviation", grad_dev);
  rep.margin("euler_residual", euler_res);

  if (!hyp1 || !hyp2) {
    rep.pass = false;
    if (!hyp1) rep.note("hypothesis (1) fails: negative coefficient");
    if (!hyp2) {
      rep.note("hypothesis (2) fails: gradient at e is not a positive multiple of e");
      rep.witness_vector = grad_e;
    }
    rep.note("conclusion not asserted");
    return rep;
  }

  // Conclusion on log-uniform positive-orthant samples.
  const double log_pe = std::log(pe);
  double min_ratio = std::numeric_limits<double>::infinity();
  std::vector<double> worst;
  for (int s = 0; s < samples; ++s) {
    Rng rng(Rng::derive(seed, 80, s));
    std::vector<double> x(n);
    double log_prod = 0.0;
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform(-3.0, 3.0);
      x[i] = std::exp(u);
      log_prod += u;
    }
    const double px = poly_eval(p, x);
    if (px <= 0.0) {
      rep.pass = false;
      rep.witness_vector = x;
      rep.note("p(x) <= 0 at a positive-orthant sample");
      return rep;
    }
    const double r =
        std::exp(std::log(px) / N - log_pe / N - log_prod / n);
    if (r < min_ratio) {
      min_ratio = r;
      worst = x;
    }
  }
  rep.margin("samples_checked", samples);
  rep.margin("min_conclusion_ratio", min_ratio);
  rep.pass = min_ratio >= 1.0 - 1e-9;
  if (!rep.pass) {
    rep.witness_vector = worst;
    rep.note("conclusion inequality violated");
  }
  return rep;
}

CheckReport diag_coefficient_check(const OpPtr& g, int h_samples,
                                   std::uint64_t seed) {
  CheckReport rep;
  rep.suite = "diag-coeffs";
  const int n = g->n();
  double worst_rel = std::numeric_limits<double>::infinity();
  for (int t = 0; t <= h_samples; ++t) {
    OpPtr gh = g;
    Mat h = Mat::Identity(n, n);
    if (t > 0) {
      h = random_orthogonal(n, Rng::derive(seed, 90, t));
      gh = GardingOperator::conjugate(g, h);
    }
    const SparsePoly ph = diagonal_restriction(gh);
    double min_c = 0.0;
    double max_abs = 0.0;
    for (const auto& [alpha, c] : ph.terms()) {
      min_c = std::min(min_c, c);
      max_abs = std::max(max_abs, std::abs(c));
    }
    const double gate = -1e-8 * (1.0 + max_abs);
    worst_rel = std::min(worst_rel, min_c - gate);
    if (min_c < gate) {
      rep.pass = false;
      rep.margin("min_coeff", min_c);
      rep.margin("gate", gate);
      rep.witness = h;
      rep.note(t == 0 ? "negative coefficient in the plain diagonal restriction"
                      : "negative coefficient under a sampled conjugation");
      return rep;
    }
  }
  rep.margin("h_samples", h_samples);
  rep.margin("min_gate_clearance", worst_rel);
  rep.pass = true;
  return rep;
}

SparsePoly diagonal_restriction(const OpPtr& g) {
  if (!g) throw dimension_error("diagonal_restriction: null operator");
  const int n = g->n();
  return coefficients_from_evaluator(
      [&](const std::vector<double>& x) {
        return g->evaluate(
            SymMatrix::diagonal(Eigen::Map<const Vec>(x.data(), x.size())));
      },
      g->N(), n);
}

}  // namespace garding
